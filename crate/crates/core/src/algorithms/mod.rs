//! Adaptive intervention algorithms built on Meek separators, together with
//! lower bounds, exact verification numbers and the random baseline.

mod baseline;
mod bounds;
mod matching;
mod separator;
mod subset;

use std::collections::VecDeque;
use std::fmt;

use rand::Rng as _;

use crate::chordal::UndirectedGraph;
use crate::graph::{Pdag, VertexId};
use crate::meek::meek_closure;
use crate::oracle::InterventionOracle;
use crate::seed::{self, Rng};

pub use baseline::{random_baseline, random_baseline_with};
pub use bounds::{full_verification_number, subset_lower_bound, subset_verification_bruteforce};
pub use matching::{
    causal_mean_match, causal_mean_match_with, find_source, find_source_with, identified_sources, SourceStrategy,
};
pub use separator::{meek_separator, meek_separator_with, MeekSeparatorResult};
pub use subset::{subset_search, subset_search_with};

/// Chooses the next vertex to intervene on from a candidate list.
pub trait Picker {
    fn pick(&mut self, candidates: &[VertexId]) -> VertexId;
}

/// Uniform choice driven by a seeded RNG.
#[derive(Debug, Clone)]
pub struct RandomPicker {
    rng: Rng,
}

impl RandomPicker {
    pub fn new(seed: u64) -> Self {
        Self { rng: seed::rng(seed) }
    }
}

impl Picker for RandomPicker {
    fn pick(&mut self, candidates: &[VertexId]) -> VertexId {
        candidates[self.rng.random_range(0..candidates.len())]
    }
}

/// Replays a fixed pick sequence. Panics if a scripted vertex is not among
/// the candidates; falls back to the smallest candidate once exhausted.
#[derive(Debug, Clone)]
pub struct ScriptedPicker {
    script: VecDeque<VertexId>,
}

impl ScriptedPicker {
    pub fn new(script: impl IntoIterator<Item = VertexId>) -> Self {
        Self {
            script: script.into_iter().collect(),
        }
    }
}

impl Picker for ScriptedPicker {
    fn pick(&mut self, candidates: &[VertexId]) -> VertexId {
        match self.script.pop_front() {
            Some(v) => {
                assert!(candidates.contains(&v), "scripted vertex {v} not in {candidates:?}");
                v
            }
            None => *candidates.iter().min().expect("non-empty candidates"),
        }
    }
}

/// Options shared by the adaptive searches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    /// Check the global goal after every single intervention and stop as
    /// soon as it holds (the "MeekSep-1" variant).
    pub early_exit: bool,
    /// Absolute tolerance when comparing means in mean matching.
    pub mean_tol: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            early_exit: false,
            mean_tol: crate::oracle::MEAN_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// The queried vertex alone splits the component.
    Separator,
    /// Largest component lies below the queried vertex.
    Descendants,
    /// Largest component lies above the queried vertex.
    Ancestors,
    /// Uniformly sampled query (baselines).
    Random,
    /// Early exit fired after this query.
    Stopped,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Branch::Separator => "separator",
            Branch::Descendants => "descendants",
            Branch::Ancestors => "ancestors",
            Branch::Random => "random",
            Branch::Stopped => "stopped",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub vertex: VertexId,
    pub largest_component: usize,
    pub branch: Branch,
}

/// Per-query log of a search run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Transcript {
    pub steps: Vec<Step>,
}

impl Transcript {
    pub fn push(&mut self, vertex: VertexId, largest_component: usize, branch: Branch) {
        self.steps.push(Step {
            vertex,
            largest_component,
            branch,
        });
    }

    pub fn total(&self) -> usize {
        self.steps.len()
    }

    /// One line per query, `step vertex largest_component branch`, then
    /// `total=N`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.steps.iter().enumerate() {
            out.push_str(&format!("{i} {} {} {}\n", s.vertex, s.largest_component, s.branch));
        }
        out.push_str(&format!("total={}\n", self.total()));
        out
    }
}

/// The interventional essential graph of a chain component, computed from
/// its skeleton alone plus the orientations that `revealed` shows on edges
/// incident to the `hits` (local ids). The component's own essential graph is
/// fully undirected, so this needs no access to the hidden DAG.
pub(crate) fn local_essential(revealed: &Pdag, comp: &[VertexId], skeleton: &UndirectedGraph, hits: &[usize]) -> Pdag {
    let mut e = Pdag::undirected_from(skeleton);
    for &h in hits {
        for &w in skeleton.neighbors(h) {
            if !e.is_undirected(h, w) {
                continue;
            }
            if revealed.has_arc(comp[h], comp[w]) {
                e.orient(h, w);
            } else if revealed.has_arc(comp[w], comp[h]) {
                e.orient(w, h);
            }
        }
    }
    meek_closure(&e).expect("orientations revealed by the oracle are consistent")
}

/// Chain components (global ids) that still hold an undirected target edge.
pub(crate) fn components_with_targets(revealed: &Pdag, targets: &crate::graph::EdgeSet) -> Vec<Vec<VertexId>> {
    let comps = revealed.chain_components();
    let index = revealed.component_index();
    let mut hit = vec![false; comps.len()];
    for (u, v) in targets.iter() {
        if revealed.is_undirected(u, v) {
            hit[index[u]] = true;
        }
    }
    comps
        .into_iter()
        .zip(hit)
        .filter(|(c, h)| *h && c.len() >= 2)
        .map(|(c, _)| c)
        .collect()
}

pub(crate) fn check_targets(o: &InterventionOracle, targets: &crate::graph::EdgeSet) -> crate::Result<()> {
    for (u, v) in targets.iter() {
        if u >= o.n() || v >= o.n() || !o.revealed().adjacent(u, v) {
            return Err(crate::Error::MissingEdge(u, v));
        }
    }
    Ok(())
}
