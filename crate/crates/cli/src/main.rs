//! `meeksep`: generate instances, run the search methods, summarize results
//! and run the property suites.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use meeksep::experiments::{self, Problem, RunConfig};
use meeksep::{par, props};

#[derive(Parser)]
#[command(version, about = "Adaptive causal structure search with Meek separators")]
struct Cli {
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Settings {
    /// Config file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for instances, results and reports.
    #[arg(long)]
    out: Option<PathBuf>,
    /// `subset` or `matching`, then `key=value` overrides such as `n=100`.
    overrides: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Write random instances.
    Gen(Settings),
    /// Run every method on every instance and write results.csv.
    Run(Settings),
    /// Summarize a results CSV into summary.txt and chart.svg.
    Report {
        /// Results file; defaults to results.csv in the output directory.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        settings: Settings,
    },
    /// Run the randomized property suites.
    Verify {
        /// Cases per suite.
        #[arg(long, default_value_t = 200)]
        cases: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Suites to run; all when omitted.
        #[arg(long = "suite")]
        suites: Vec<String>,
    },
}

fn load(s: &Settings) -> anyhow::Result<RunConfig> {
    let mut cfg = match &s.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            RunConfig::parse(&text).with_context(|| format!("in {}", path.display()))?
        }
        None => RunConfig::new(Problem::Subset),
    };
    let (problem, rest): (Vec<&String>, Vec<&String>) = s
        .overrides
        .iter()
        .partition(|o| o.parse::<Problem>().is_ok() || o.starts_with("problem="));
    for o in problem.into_iter().chain(rest) {
        let (k, v) = match o.split_once('=') {
            Some((k, v)) => (k.trim(), v.trim()),
            None if o.parse::<Problem>().is_ok() => ("problem", o.as_str()),
            None => bail!("expected key=value, got {o:?}"),
        };
        cfg.set(k, v).map_err(anyhow::Error::msg)?;
    }
    if let Some(seed) = s.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &s.out {
        cfg.out = out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn execute(command: Command) -> anyhow::Result<bool> {
    match command {
        Command::Gen(s) => {
            let cfg = load(&s)?;
            let paths = experiments::cmd_gen(&cfg)?;
            println!("wrote {} instances to {}", paths.len(), cfg.instance_dir().display());
        }
        Command::Run(s) => {
            let cfg = load(&s)?;
            let records = experiments::cmd_run(&cfg)?;
            let mut failed = 0;
            for r in &records {
                if let Some(e) = &r.error {
                    failed += 1;
                    eprintln!("warning: {} on instance seed {}: {e}", r.method, r.seed);
                }
            }
            println!(
                "wrote {} rows ({failed} errors) to {}",
                records.len(),
                cfg.csv_path().display()
            );
        }
        Command::Report { csv, settings } => {
            let cfg = load(&settings)?;
            let csv = csv.unwrap_or_else(|| cfg.csv_path());
            let rows = experiments::cmd_report(&csv, cfg.std_mult, &cfg.summary_path(), &cfg.chart_path())?;
            print!("{}", experiments::render_table(&rows));
            println!("chart: {}", cfg.chart_path().display());
        }
        Command::Verify { cases, seed, suites } => {
            let names: Vec<String> = if suites.is_empty() {
                props::SUITES.iter().map(|s| s.to_string()).collect()
            } else {
                suites
            };
            let mut ok = true;
            for name in &names {
                let report = props::run_suite(name, cases, seed)?;
                let status = if report.passed() { "pass" } else { "FAIL" };
                println!(
                    "{status} {name} ({} cases, {} failures)",
                    report.cases,
                    report.failures.len()
                );
                for f in report.failures.iter().take(5) {
                    println!("  {f}");
                }
                ok &= report.passed();
            }
            return Ok(ok);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match par::with_threads(cli.jobs, || execute(cli.command)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
