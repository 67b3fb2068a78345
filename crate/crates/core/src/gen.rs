//! Seeded random instance generators. Every undirected model is oriented by
//! vertex label (lower label to higher), so all outputs are acyclic.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, VecDeque};

use rand::seq::index::sample;
use rand::Rng as _;

use crate::error::{Error, Result};
use crate::graph::{Dag, EdgeSet, VertexId};
use crate::oracle::{mean_vector, ShiftAssignment, ShiftSem};
use crate::seed::{self, Rng};

/// Erdős–Rényi graph: each pair is an arc independently with probability
/// `density`.
pub fn er_dag(n: usize, density: f64, seed: u64) -> Dag {
    let mut rng = seed::rng(seed);
    Dag::new(n, er_pairs(&mut rng, n, density)).expect("label order is acyclic")
}

fn er_pairs(rng: &mut Rng, n: usize, density: f64) -> Vec<(VertexId, VertexId)> {
    let p = density.clamp(0.0, 1.0);
    let mut out = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                out.push((u, v));
            }
        }
    }
    out
}

/// Uniform labelled tree decoded from a random Prüfer sequence.
pub fn tree_dag(n: usize, seed: u64) -> Dag {
    let mut rng = seed::rng(seed);
    Dag::new(n, tree_pairs(&mut rng, n)).expect("label order is acyclic")
}

fn tree_pairs(rng: &mut Rng, n: usize) -> Vec<(VertexId, VertexId)> {
    if n < 2 {
        return Vec::new();
    }
    let code: Vec<VertexId> = (0..n - 2).map(|_| rng.random_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &c in &code {
        degree[c] += 1;
    }
    let mut leaves: BinaryHeap<Reverse<VertexId>> = (0..n).filter(|&v| degree[v] == 1).map(Reverse).collect();
    let mut out = Vec::with_capacity(n - 1);
    for &c in &code {
        let Reverse(leaf) = leaves.pop().unwrap();
        out.push((leaf.min(c), leaf.max(c)));
        degree[c] -= 1;
        if degree[c] == 1 {
            leaves.push(Reverse(c));
        }
    }
    let Reverse(a) = leaves.pop().unwrap();
    let Reverse(b) = leaves.pop().unwrap();
    out.push((a.min(b), a.max(b)));
    out
}

/// Barabási–Albert preferential attachment: vertices `0..m` start isolated,
/// every later vertex attaches to `m` distinct earlier ones drawn with
/// probability proportional to degree. Yields `m * (n - m)` arcs.
pub fn ba_dag(n: usize, m: usize, seed: u64) -> Result<Dag> {
    if m < 1 || m >= n {
        return Err(Error::Precondition(format!("attachment count {m} must lie in 1..{n}")));
    }
    let mut rng = seed::rng(seed);
    let mut arcs = Vec::with_capacity(m * (n - m));
    let mut repeated: Vec<VertexId> = Vec::new();
    let mut targets: Vec<VertexId> = (0..m).collect();
    for source in m..n {
        for &t in &targets {
            arcs.push((t, source));
        }
        repeated.extend(&targets);
        repeated.extend(std::iter::repeat_n(source, m));
        let mut next = BTreeSet::new();
        while next.len() < m {
            next.insert(repeated[rng.random_range(0..repeated.len())]);
        }
        targets = next.into_iter().collect();
    }
    Dag::new(n, arcs)
}

/// Adds `u -> w` for every v-structure `u -> v <- w` (`u < w`), in ascending
/// `(u, v, w)` order, until none remain. Fill arcs respect label order.
fn moralize(n: usize, pairs: impl IntoIterator<Item = (VertexId, VertexId)>) -> Dag {
    let mut adj = vec![false; n * n];
    let mut parents: Vec<BTreeSet<VertexId>> = vec![BTreeSet::new(); n];
    for (u, v) in pairs {
        adj[u * n + v] = true;
        adj[v * n + u] = true;
        parents[v].insert(u);
    }
    loop {
        let mut triples = Vec::new();
        for (v, pa) in parents.iter().enumerate() {
            let pa: Vec<VertexId> = pa.iter().copied().collect();
            for (i, &u) in pa.iter().enumerate() {
                for &w in &pa[i + 1..] {
                    if !adj[u * n + w] {
                        triples.push((u, v, w));
                    }
                }
            }
        }
        if triples.is_empty() {
            break;
        }
        triples.sort_unstable();
        for (u, _, w) in triples {
            if !adj[u * n + w] {
                adj[u * n + w] = true;
                adj[w * n + u] = true;
                parents[w].insert(u);
            }
        }
    }
    let arcs = (0..n).flat_map(|v| parents[v].iter().map(move |&u| (u, v)).collect::<Vec<_>>());
    Dag::new(n, arcs).expect("label order is acyclic")
}

/// Connected moral DAG: an Erdős–Rényi graph joined with a random tree,
/// oriented by label, then moralized.
pub fn moral_dag(n: usize, density: f64, seed: u64) -> Dag {
    let mut rng = seed::rng(seed);
    moral_from(&mut rng, n, density)
}

fn moral_from(rng: &mut Rng, n: usize, density: f64) -> Dag {
    let mut pairs: BTreeSet<(VertexId, VertexId)> = er_pairs(rng, n, density).into_iter().collect();
    pairs.extend(tree_pairs(rng, n));
    moralize(n, pairs)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubsetInstance {
    pub hidden: Dag,
    pub targets: EdgeSet,
    pub hop_center: VertexId,
    pub n: usize,
    pub r: usize,
    pub density: f64,
    pub seed: u64,
}

/// Moral DAG plus the target edges lying within skeleton distance `r` of a
/// uniformly chosen center.
pub fn r_hop_instance(n: usize, r: usize, density: f64, seed: u64) -> Result<SubsetInstance> {
    if n < 2 || r < 1 {
        return Err(Error::Precondition(format!(
            "r-hop instances need n >= 2 and r >= 1, got n={n} r={r}"
        )));
    }
    let mut rng = seed::rng(seed);
    let hidden = moral_from(&mut rng, n, density);
    let hop_center = rng.random_range(0..n);
    let skeleton = hidden.skeleton();
    let mut dist = vec![usize::MAX; n];
    dist[hop_center] = 0;
    let mut queue = VecDeque::from([hop_center]);
    while let Some(v) = queue.pop_front() {
        if dist[v] == r {
            continue;
        }
        for &w in skeleton.neighbors(v) {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    let targets = skeleton
        .edges()
        .into_iter()
        .filter(|&(u, v)| dist[u] <= r && dist[v] <= r)
        .collect();
    Ok(SubsetInstance {
        hidden,
        targets,
        hop_center,
        n,
        r,
        density,
        seed,
    })
}

/// Sampling ranges for synthetic mean-matching models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchingParams {
    pub weight_range: (f64, f64),
    pub shift_range: (f64, f64),
}

impl Default for MatchingParams {
    fn default() -> Self {
        Self {
            weight_range: (-1.0, 1.0),
            shift_range: (0.5, 2.0),
        }
    }
}

/// Weights with magnitude below this are redrawn.
pub const MIN_WEIGHT: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct MatchingInstance {
    pub sem: ShiftSem,
    pub hidden_targets: ShiftAssignment,
    pub target_mean: Vec<f64>,
}

/// Linear model on `g` with `k` uniformly chosen shifted vertices.
pub fn matching_instance(g: &Dag, k: usize, seed: u64, params: MatchingParams) -> Result<MatchingInstance> {
    let n = g.n();
    if k > n {
        return Err(Error::Precondition(format!("cannot shift {k} of {n} vertices")));
    }
    let (wlo, whi) = params.weight_range;
    let (slo, shi) = params.shift_range;
    if !(wlo < whi && slo <= shi && wlo.is_finite() && whi.is_finite() && slo.is_finite() && shi.is_finite()) {
        return Err(Error::Precondition(
            "sampling ranges must be finite and non-empty".into(),
        ));
    }
    if wlo.abs().max(whi.abs()) < MIN_WEIGHT {
        return Err(Error::Precondition(
            "weight range lies inside the rejection band".into(),
        ));
    }
    let mut rng = seed::rng(seed);
    let weights: Vec<_> = g
        .arcs()
        .into_iter()
        .map(|e| loop {
            let w = rng.random_range(wlo..whi);
            if w.abs() >= MIN_WEIGHT {
                break (e, w);
            }
        })
        .collect();
    let sem = ShiftSem::new(g.clone(), weights, vec![0.0; n])?;
    let mut chosen = sample(&mut rng, n, k).into_vec();
    chosen.sort_unstable();
    let hidden_targets: ShiftAssignment = chosen
        .into_iter()
        .map(|v| (v, if slo == shi { slo } else { rng.random_range(slo..shi) }))
        .collect();
    let target_mean = mean_vector(&sem, &hidden_targets);
    Ok(MatchingInstance {
        sem,
        hidden_targets,
        target_mean,
    })
}
