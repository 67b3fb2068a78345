use std::path::Path;
use std::process::{Command, Output};

fn meeksep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_meeksep")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn gen_run_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let common = ["--seed", "3", "--out", out, "subset", "n=20", "reps=4", "timing=false"];
    let o = meeksep(&[&["gen"][..], &common].concat());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("wrote 4 instances"));

    let o = meeksep(&[&["run"][..], &common].concat());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(Path::new(out).join("results.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 4 * 4);
    assert!(csv.starts_with("method,seed,n,param,interventions,lower_bound,ms\n"));

    let o = meeksep(&[&["--jobs", "1", "run"][..], &common].concat());
    assert!(o.status.success());
    assert_eq!(
        std::fs::read_to_string(Path::new(out).join("results.csv")).unwrap(),
        csv
    );

    let o = meeksep(&[&["report"][..], &common].concat());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("meeksep1"));
    assert!(Path::new(out).join("chart.svg").exists());
    assert!(Path::new(out).join("summary.txt").exists());
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.conf");
    std::fs::write(
        &cfg,
        "problem = matching\nn = 15\nk = 3\nreps = 2\n# comment\nmethods = meeksep, random\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    let args = [
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "reps=3",
    ];
    assert!(meeksep(&[&["gen"][..], &args].concat()).status.success());
    let o = meeksep(&[&["run"][..], &args].concat());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("wrote 6 rows (0 errors)"));
}

#[test]
fn bad_input_exits_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.conf");
    std::fs::write(&cfg, "n = 10\nbogus = 1\n").unwrap();
    let o = meeksep(&["gen", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    let o = meeksep(&["run", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(meeksep(&["gen", "matching", "k=99", "n=10"]).status.code(), Some(2));
}

#[test]
fn verify_suites() {
    let o = meeksep(&[
        "verify",
        "--cases",
        "10",
        "--suite",
        "bruteforce",
        "--suite",
        "separator",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("pass bruteforce (10 cases, 0 failures)"));
    assert!(text.contains("pass separator"));
    assert_eq!(meeksep(&["verify", "--suite", "nope"]).status.code(), Some(2));
}
