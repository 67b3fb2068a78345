//! Experiment harness: instance generation, method runs and reporting.
//!
//! Seeds: instance `rep` of the cell `(problem, n, param)` uses
//! `derive_index(derive(master, "{problem}/n={n}/param={param}"), rep)`. A
//! method run on that instance uses `derive(instance_seed, "search")` for
//! `meeksep` and `meeksep1` (so both see the same random picks) and
//! `derive(instance_seed, "random")` for `random`. The instance seed is the
//! `seed` column of the results.
//!
//! Results CSV columns: `method,seed,n,param,interventions,lower_bound,ms`.
//! `param` is the hop radius (subset search) or the number of shifted
//! vertices (mean matching). For mean matching, `interventions` counts
//! structural queries plus the shift interventions applied and the lower
//! bound is the number of hidden shifts. A failed run writes `error` in the
//! `interventions` column. `ms` is wall time, or `0` with `timing = false`.

mod config;
mod report;

use std::path::{Path, PathBuf};
use std::time::Instant;

pub use config::{Method, Model, Problem, RunConfig};
pub use report::{cmd_report, read_csv, render_svg, render_table, summarize, SummaryRow};

use crate::algorithms::{
    causal_mean_match_with, random_baseline, subset_lower_bound, subset_search_with, subset_verification_bruteforce,
    RandomPicker, SearchOptions, SourceStrategy, Transcript,
};
use crate::error::{Error, Result};
use crate::gen::{ba_dag, er_dag, matching_instance, r_hop_instance, tree_dag, MatchingInstance, SubsetInstance};
use crate::io::{self, Meta};
use crate::oracle::InterventionOracle;
use crate::seed;

pub const CSV_HEADER: &str = "method,seed,n,param,interventions,lower_bound,ms";

/// One CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub method: String,
    pub seed: u64,
    pub n: usize,
    pub param: usize,
    /// `None` marks a failed run.
    pub interventions: Option<usize>,
    pub lower_bound: Option<usize>,
    pub ms: f64,
    /// Failure description; not serialized.
    pub error: Option<String>,
}

fn opt(x: Option<usize>) -> String {
    x.map_or_else(|| "error".to_string(), |v| v.to_string())
}

impl Record {
    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{:.3}",
            self.method,
            self.seed,
            self.n,
            self.param,
            opt(self.interventions),
            opt(self.lower_bound),
            self.ms
        )
    }
}

pub fn write_csv(records: &[Record]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.to_csv_line());
        out.push('\n');
    }
    out
}

/// Seed of instance `rep` in the `(n, param)` cell.
pub fn instance_seed(cfg: &RunConfig, n: usize, param: usize, rep: usize) -> u64 {
    let cell = seed::derive(cfg.seed, &format!("{}/n={n}/param={param}", cfg.problem));
    seed::derive_index(cell, rep as u64)
}

fn instance_name(cfg: &RunConfig, n: usize, param: usize, rep: usize) -> String {
    let p = match cfg.problem {
        Problem::Subset => 'r',
        Problem::Matching => 'k',
    };
    format!("{}-n{n}-{p}{param}-{rep:03}.txt", cfg.problem)
}

fn matching_meta(cfg: &RunConfig, n: usize, k: usize, s: u64) -> Meta {
    let mut meta: Meta = [
        ("model", cfg.model.to_string()),
        ("n", n.to_string()),
        ("k", k.to_string()),
        ("seed", s.to_string()),
        ("weight_lo", cfg.matching.weight_range.0.to_string()),
        ("weight_hi", cfg.matching.weight_range.1.to_string()),
        ("shift_lo", cfg.matching.shift_range.0.to_string()),
        ("shift_hi", cfg.matching.shift_range.1.to_string()),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    match cfg.model {
        Model::Er => meta.insert("density".into(), cfg.density.to_string()),
        Model::Ba => meta.insert("m_attach".into(), cfg.m_attach.to_string()),
        Model::Tree | Model::RHop => None,
    };
    meta
}

/// Builds the mean-matching instance for one cell.
pub fn build_matching(cfg: &RunConfig, n: usize, k: usize, s: u64) -> Result<MatchingInstance> {
    let gs = seed::derive(s, "graph");
    let g = match cfg.model {
        Model::Er => er_dag(n, cfg.density, gs),
        Model::Ba => ba_dag(n, cfg.m_attach, gs)?,
        Model::Tree => tree_dag(n, gs),
        Model::RHop => {
            return Err(Error::Precondition(
                "mean matching uses the er, ba or tree model".into(),
            ))
        }
    };
    matching_instance(&g, k, seed::derive(s, "model"), cfg.matching)
}

/// Writes every instance of the configuration; returns the paths written.
pub fn cmd_gen(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    cfg.validate()?;
    let dir = cfg.instance_dir();
    let mut jobs = Vec::new();
    for &n in &cfg.n {
        for &p in cfg.params() {
            for rep in 0..cfg.reps {
                jobs.push((n, p, rep));
            }
        }
    }
    let texts = crate::par::map(jobs, |(n, p, rep)| -> Result<(PathBuf, String)> {
        let s = instance_seed(cfg, n, p, rep);
        let text = match cfg.problem {
            Problem::Subset => io::write_subset_instance(&r_hop_instance(n, p, cfg.density, s)?),
            Problem::Matching => {
                io::write_matching_instance(&build_matching(cfg, n, p, s)?, &matching_meta(cfg, n, p, s))
            }
        };
        Ok((dir.join(instance_name(cfg, n, p, rep)), text))
    });
    let mut paths = Vec::new();
    for t in texts {
        let (path, text) = t?;
        io::write_file(&path, &text)?;
        paths.push(path);
    }
    Ok(paths)
}

/// A parsed instance file.
#[derive(Debug, Clone)]
pub enum Loaded {
    Subset(SubsetInstance),
    Matching(MatchingInstance, Meta),
}

impl Loaded {
    pub fn read(problem: Problem, path: &Path) -> Result<Self> {
        let text = io::read_file(path)?;
        let with_path = |e: Error| Error::Precondition(format!("{}: {e}", path.display()));
        Ok(match problem {
            Problem::Subset => Loaded::Subset(io::parse_subset_instance(&text).map_err(with_path)?),
            Problem::Matching => {
                let (inst, meta) = io::parse_matching_instance(&text).map_err(with_path)?;
                Loaded::Matching(inst, meta)
            }
        })
    }

    pub fn seed(&self) -> Result<u64> {
        match self {
            Loaded::Subset(s) => Ok(s.seed),
            Loaded::Matching(_, meta) => io::meta_get(meta, "seed"),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Loaded::Subset(s) => s.hidden.n(),
            Loaded::Matching(m, _) => m.sem.dag().n(),
        }
    }

    pub fn param(&self) -> Result<usize> {
        match self {
            Loaded::Subset(s) => Ok(s.r),
            Loaded::Matching(m, _) => Ok(m.hidden_targets.len()),
        }
    }

    fn lower_bound(&self) -> Result<usize> {
        match self {
            Loaded::Subset(s) => subset_lower_bound(&s.hidden, &s.targets),
            Loaded::Matching(m, _) => Ok(m.hidden_targets.len()),
        }
    }
}

fn run_method(inst: &Loaded, method: Method, s: u64, tol: f64) -> Result<usize> {
    let search = seed::derive(s, "search");
    let early_exit = method == Method::MeekSep1;
    let opts = SearchOptions {
        early_exit,
        mean_tol: tol,
    };
    match inst {
        Loaded::Subset(si) => {
            let mut o = InterventionOracle::new(si.hidden.clone());
            match method {
                Method::MeekSep | Method::MeekSep1 => {
                    let mut picker = RandomPicker::new(search);
                    subset_search_with(&mut o, &si.targets, &mut picker, opts, &mut Transcript::default())?;
                }
                Method::Random => {
                    random_baseline(&mut o, &si.targets, seed::derive(s, "random"))?;
                }
                Method::VerificationLb => return subset_lower_bound(&si.hidden, &si.targets),
                Method::BruteforceNu => return subset_verification_bruteforce(&si.hidden, &si.targets, si.hidden.n()),
            }
            if !o.all_oriented(&si.targets) {
                return Err(Error::Precondition("a target edge was left unoriented".into()));
            }
            Ok(o.count())
        }
        Loaded::Matching(mi, _) => {
            let (strategy, picker_seed) = match method {
                Method::MeekSep | Method::MeekSep1 => (SourceStrategy::MeekSeparator, search),
                Method::Random => (SourceStrategy::Random, seed::derive(s, "random")),
                Method::VerificationLb => return Ok(mi.hidden_targets.len()),
                Method::BruteforceNu => {
                    return Err(Error::Precondition(
                        "bruteforce-nu applies to subset search only".into(),
                    ))
                }
            };
            let mut o = InterventionOracle::new(mi.sem.dag().clone());
            let got = causal_mean_match_with(
                &mut o,
                &mi.sem,
                &mi.target_mean,
                strategy,
                &mut RandomPicker::new(picker_seed),
                opts,
                &mut Transcript::default(),
            )?;
            if got.targets() != mi.hidden_targets.targets() {
                return Err(Error::NotRealizable(
                    "recovered targets differ from the hidden ones".into(),
                ));
            }
            Ok(o.count() + got.len())
        }
    }
}

/// Lists instance files in name order.
pub fn instance_files(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let dir = cfg.instance_dir();
    let prefix = format!("{}-", cfg.problem);
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
        .map_err(|e| Error::io(&dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.file_name()
                .and_then(|f| f.to_str())
                .is_some_and(|f| f.starts_with(&prefix) && f.ends_with(".txt"))
        })
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Error::EmptyInput(format!(
            "{} (no {} instances; run gen first)",
            dir.display(),
            cfg.problem
        )));
    }
    Ok(files)
}

/// Runs every configured method on every instance and writes the CSV.
/// Failed runs become error rows.
pub fn cmd_run(cfg: &RunConfig) -> Result<Vec<Record>> {
    cfg.validate()?;
    let loaded = instance_files(cfg)?
        .iter()
        .map(|p| Loaded::read(cfg.problem, p))
        .collect::<Result<Vec<_>>>()?;
    let mut keyed = Vec::with_capacity(loaded.len());
    for inst in loaded {
        keyed.push((inst.seed()?, inst.n(), inst.param()?, inst));
    }
    let bounds = crate::par::map(keyed.iter().collect(), |(_, _, _, inst)| inst.lower_bound());
    let bounds: Vec<std::result::Result<usize, String>> =
        bounds.into_iter().map(|b| b.map_err(|e| e.to_string())).collect();

    let mut cells = Vec::new();
    for (i, _) in keyed.iter().enumerate() {
        for (j, &m) in cfg.methods.iter().enumerate() {
            cells.push((i, j, m));
        }
    }
    let mut records = crate::par::map(cells, |(i, j, method)| {
        let (s, n, param, inst) = &keyed[i];
        let start = Instant::now();
        let outcome = run_method(inst, method, *s, cfg.tol);
        let ms = if cfg.timing {
            start.elapsed().as_secs_f64() * 1e3
        } else {
            0.0
        };
        let record = Record {
            method: method.to_string(),
            seed: *s,
            n: *n,
            param: *param,
            interventions: outcome.as_ref().ok().copied(),
            lower_bound: bounds[i].as_ref().ok().copied(),
            ms,
            error: outcome
                .err()
                .map(|e| e.to_string())
                .or_else(|| bounds[i].as_ref().err().cloned()),
        };
        ((*n, *param, *s, j), record)
    });
    records.sort_by_key(|r| r.0);
    let records: Vec<Record> = records.into_iter().map(|(_, r)| r).collect();
    io::write_file(&cfg.csv_path(), &write_csv(&records))?;
    Ok(records)
}
