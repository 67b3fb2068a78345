use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gen::MatchingParams;
use crate::oracle::MEAN_TOL;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Problem {
    Subset,
    Matching,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    RHop,
    Er,
    Ba,
    Tree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    MeekSep,
    MeekSep1,
    Random,
    VerificationLb,
    BruteforceNu,
}

macro_rules! names {
    ($ty:ty, $what:literal, $($variant:ident => $name:literal),+ $(,)?) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let s = match self { $(Self::$variant => $name),+ };
                f.write_str(s)
            }
        }

        impl FromStr for $ty {
            type Err = String;
            fn from_str(s: &str) -> std::result::Result<Self, String> {
                match s {
                    $($name => Ok(Self::$variant),)+
                    _ => Err(format!(concat!("unknown ", $what, " {:?}; expected one of: {}"), s, [$($name),+].join(", "))),
                }
            }
        }
    };
}

names!(Problem, "problem", Subset => "subset", Matching => "matching");
names!(Model, "graph model", RHop => "r-hop", Er => "er", Ba => "ba", Tree => "tree");
names!(
    Method,
    "method",
    MeekSep => "meeksep",
    MeekSep1 => "meeksep1",
    Random => "random",
    VerificationLb => "verification-lb",
    BruteforceNu => "bruteforce-nu",
);

/// Experiment settings, read from `key = value` lines.
///
/// `n`, `r` and `k` take comma-separated lists; every combination is run
/// `reps` times. `r` is the hop radius for subset search and `k` the number
/// of shifted vertices for mean matching; the one in use is reported in the
/// `param` column.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: Problem,
    pub model: Model,
    pub n: Vec<usize>,
    pub r: Vec<usize>,
    pub k: Vec<usize>,
    pub density: f64,
    pub m_attach: usize,
    pub methods: Vec<Method>,
    pub reps: usize,
    pub seed: u64,
    pub out: PathBuf,
    pub tol: f64,
    pub std_mult: f64,
    pub timing: bool,
    pub matching: MatchingParams,
}

impl RunConfig {
    pub fn new(problem: Problem) -> Self {
        let common = |model, n: Vec<usize>, density, reps, std_mult| Self {
            problem,
            model,
            n,
            r: vec![3],
            k: vec![5, 10, 25],
            density,
            m_attach: 2,
            methods: vec![
                Method::VerificationLb,
                Method::MeekSep1,
                Method::MeekSep,
                Method::Random,
            ],
            reps,
            seed: 1,
            out: PathBuf::from("."),
            tol: MEAN_TOL,
            std_mult,
            timing: true,
            matching: MatchingParams::default(),
        };
        match problem {
            Problem::Subset => common(Model::RHop, vec![50, 100, 150], 0.001, 20, 0.5),
            Problem::Matching => common(Model::Er, vec![50], 0.2, 10, 0.2),
        }
    }

    /// Parses a config file. A `problem` line, if any, selects the defaults
    /// the remaining keys override.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(i + 1, format!("expected key = value, got {line:?}")))?;
            entries.push((i + 1, k.trim().to_string(), v.trim().to_string()));
        }
        let problem = match entries.iter().rev().find(|(_, k, _)| k == "problem") {
            Some((i, _, v)) => v.parse().map_err(|e| Error::parse(*i, e))?,
            None => Problem::Subset,
        };
        let mut cfg = Self::new(problem);
        for (i, k, v) in entries {
            cfg.set(&k, &v).map_err(|e| Error::parse(i, e))?;
        }
        Ok(cfg)
    }

    /// Applies one `key = value` override.
    pub fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        fn one<T: FromStr>(key: &str, v: &str) -> std::result::Result<T, String> {
            v.parse().map_err(|_| format!("invalid value {v:?} for {key}"))
        }
        fn list<T: FromStr>(key: &str, v: &str) -> std::result::Result<Vec<T>, String> {
            v.split(',').map(|x| one(key, x.trim())).collect()
        }
        match key {
            "problem" => {
                let p: Problem = value.parse()?;
                if p != self.problem {
                    *self = Self::new(p);
                }
            }
            "model" => self.model = value.parse()?,
            "n" => self.n = list(key, value)?,
            "r" => self.r = list(key, value)?,
            "k" => self.k = list(key, value)?,
            "density" => self.density = one(key, value)?,
            "m_attach" => self.m_attach = one(key, value)?,
            "methods" => {
                self.methods = value
                    .split(',')
                    .map(|m| m.trim().parse())
                    .collect::<std::result::Result<_, _>>()?
            }
            "reps" => self.reps = one(key, value)?,
            "seed" => self.seed = one(key, value)?,
            "out" => self.out = PathBuf::from(value),
            "tol" => self.tol = one(key, value)?,
            "std_mult" => self.std_mult = one(key, value)?,
            "timing" => self.timing = one(key, value)?,
            "weight_lo" => self.matching.weight_range.0 = one(key, value)?,
            "weight_hi" => self.matching.weight_range.1 = one(key, value)?,
            "shift_lo" => self.matching.shift_range.0 = one(key, value)?,
            "shift_hi" => self.matching.shift_range.1 = one(key, value)?,
            _ => return Err(format!("unknown key {key:?}")),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Precondition(msg));
        if self.reps < 1 {
            return bad("reps must be at least 1".into());
        }
        if self.n.is_empty() || self.n.iter().any(|&n| n < 2) {
            return bad("every n must be at least 2".into());
        }
        if self.methods.is_empty() {
            return bad("no methods selected".into());
        }
        if !(self.tol.is_finite() && self.tol >= 0.0) || !(self.std_mult.is_finite() && self.std_mult >= 0.0) {
            return bad("tol and std_mult must be finite and non-negative".into());
        }
        if !(0.0..=1.0).contains(&self.density) {
            return bad(format!("density {} outside [0, 1]", self.density));
        }
        match self.problem {
            Problem::Subset => {
                if self.model != Model::RHop {
                    return bad(format!(
                        "subset search instances use the r-hop model, not {}",
                        self.model
                    ));
                }
                if self.r.is_empty() || self.r.contains(&0) {
                    return bad("every r must be at least 1".into());
                }
            }
            Problem::Matching => {
                if self.model == Model::RHop {
                    return bad("mean matching uses the er, ba or tree model".into());
                }
                if self.methods.contains(&Method::BruteforceNu) {
                    return bad("bruteforce-nu applies to subset search only".into());
                }
                if self.k.is_empty() {
                    return bad("k list is empty".into());
                }
                for &n in &self.n {
                    if let Some(k) = self.k.iter().find(|&&k| k > n) {
                        return bad(format!("k={k} exceeds n={n}"));
                    }
                    if self.model == Model::Ba && self.m_attach >= n {
                        return bad(format!("m_attach={} must be below n={n}", self.m_attach));
                    }
                }
            }
        }
        Ok(())
    }

    /// Values reported in the `param` column.
    pub fn params(&self) -> &[usize] {
        match self.problem {
            Problem::Subset => &self.r,
            Problem::Matching => &self.k,
        }
    }

    pub fn instance_dir(&self) -> PathBuf {
        self.out.join("instances")
    }

    pub fn csv_path(&self) -> PathBuf {
        self.out.join("results.csv")
    }

    pub fn summary_path(&self) -> PathBuf {
        self.out.join("summary.txt")
    }

    pub fn chart_path(&self) -> PathBuf {
        self.out.join("chart.svg")
    }
}
