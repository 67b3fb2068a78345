use std::path::Path;

use meeksep::experiments::{cmd_gen, cmd_report, cmd_run, read_csv, Method, Problem, RunConfig};

fn subset_config(out: &Path) -> RunConfig {
    let mut cfg = RunConfig::new(Problem::Subset);
    cfg.n = vec![30];
    cfg.reps = 20;
    cfg.methods = vec![Method::MeekSep, Method::Random];
    cfg.seed = 11;
    cfg.timing = false;
    cfg.out = out.to_path_buf();
    cfg
}

fn replay(cfg: &RunConfig) -> (Vec<String>, String) {
    let files = cmd_gen(cfg).unwrap();
    let texts = files.iter().map(|p| std::fs::read_to_string(p).unwrap()).collect();
    cmd_run(cfg).unwrap();
    (texts, std::fs::read_to_string(cfg.csv_path()).unwrap())
}

#[test]
fn subset_runs_replay_byte_for_byte() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let (inst_a, csv_a) = replay(&subset_config(a.path()));
    let (inst_b, csv_b) = replay(&subset_config(b.path()));
    assert_eq!(inst_a.len(), 20);
    assert_eq!(inst_a, inst_b);
    assert_eq!(csv_a, csv_b);

    let records = read_csv(&csv_a).unwrap();
    assert_eq!(records.len(), 40);
    assert!(records.iter().all(|r| r.error.is_none() && r.interventions.is_some()));
    for pair in records.chunks(2) {
        assert_eq!(
            (pair[0].method.as_str(), pair[1].method.as_str()),
            ("meeksep", "random")
        );
        assert_eq!(pair[0].seed, pair[1].seed);
        assert!(pair[0].lower_bound.unwrap() <= pair[0].interventions.unwrap());
    }

    let cfg = subset_config(a.path());
    let rows = cmd_report(&cfg.csv_path(), cfg.std_mult, &cfg.summary_path(), &cfg.chart_path()).unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.runs == 20 && r.errors == 0));
    assert!(std::fs::read_to_string(cfg.chart_path()).unwrap().starts_with("<svg"));
    assert!(std::fs::read_to_string(cfg.summary_path()).unwrap().contains("meeksep"));
}

#[test]
fn matching_runs_recover_every_instance() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::new(Problem::Matching);
    cfg.n = vec![20];
    cfg.k = vec![2, 5];
    cfg.reps = 3;
    cfg.timing = false;
    cfg.out = dir.path().to_path_buf();
    cmd_gen(&cfg).unwrap();
    let records = cmd_run(&cfg).unwrap();
    assert_eq!(records.len(), 2 * 3 * cfg.methods.len());
    for r in &records {
        assert!(r.error.is_none(), "{:?}", r.error);
        assert_eq!(r.lower_bound, Some(r.param));
    }
}

#[test]
fn run_without_instances_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = subset_config(dir.path());
    assert!(cmd_run(&cfg).is_err());
}

#[test]
fn seeds_separate_cells() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = subset_config(dir.path());
    cfg.n = vec![12, 14];
    cfg.reps = 5;
    let a = meeksep::experiments::instance_seed(&cfg, 12, 3, 0);
    let b = meeksep::experiments::instance_seed(&cfg, 14, 3, 0);
    let c = meeksep::experiments::instance_seed(&cfg, 12, 3, 1);
    assert!(a != b && a != c && b != c);
    cmd_gen(&cfg).unwrap();
    let seeds: std::collections::BTreeSet<u64> = cmd_run(&cfg).unwrap().iter().map(|r| r.seed).collect();
    assert_eq!(seeds.len(), 10);
}
