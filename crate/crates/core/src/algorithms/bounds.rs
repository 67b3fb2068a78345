use crate::error::{Error, Result};
use crate::graph::{Dag, EdgeSet, VertexId};
use crate::meek::{essential_graph, refine, InterventionSet};

use super::components_with_targets;

fn check(g: &Dag, targets: &EdgeSet) -> Result<()> {
    for (u, v) in targets.iter() {
        if u >= g.n() || v >= g.n() || !g.adjacent(u, v) {
            return Err(Error::MissingEdge(u, v));
        }
    }
    Ok(())
}

/// Largest number of chain components holding an unoriented target, over
/// the empty intervention and every atomic one. Never exceeds the subset
/// verification number.
pub fn subset_lower_bound(g: &Dag, targets: &EdgeSet) -> Result<usize> {
    check(g, targets)?;
    if targets.is_empty() {
        return Ok(0);
    }
    let base = essential_graph(g);
    let observational = components_with_targets(&base, targets).len();
    let atomic = crate::par::map((0..g.n()).collect(), |v| {
        let e = refine(g, &base, &InterventionSet::atomic([v]));
        components_with_targets(&e, targets).len()
    });
    Ok(atomic.into_iter().max().unwrap_or(0).max(observational))
}

/// Minimum vertex cover of the covered edges, which equals the number of
/// atomic interventions needed to verify the whole graph.
pub fn full_verification_number(g: &Dag) -> usize {
    let edges: Vec<(VertexId, VertexId)> = g.covered_edges().iter().collect();
    let mut best = edges.len();
    let mut chosen = vec![false; g.n()];
    cover(&edges, &mut chosen, 0, &mut best);
    best
}

fn cover(edges: &[(VertexId, VertexId)], chosen: &mut [bool], size: usize, best: &mut usize) {
    let open: Vec<(VertexId, VertexId)> = edges
        .iter()
        .copied()
        .filter(|&(u, v)| !chosen[u] && !chosen[v])
        .collect();
    if open.is_empty() {
        *best = (*best).min(size);
        return;
    }
    // a greedy maximal matching lower-bounds the rest
    let mut matched = vec![false; chosen.len()];
    let mut matching = 0;
    for &(u, v) in &open {
        if !matched[u] && !matched[v] {
            matched[u] = true;
            matched[v] = true;
            matching += 1;
        }
    }
    if size + matching >= *best {
        return;
    }
    let mut degree = vec![0usize; chosen.len()];
    for &(u, v) in &open {
        degree[u] += 1;
        degree[v] += 1;
    }
    let pivot = (0..chosen.len())
        .max_by_key(|&v| (degree[v], std::cmp::Reverse(v)))
        .unwrap();
    if degree[pivot] == 1 {
        // every open edge is isolated: each needs exactly one endpoint
        *best = (*best).min(size + open.len());
        return;
    }
    chosen[pivot] = true;
    cover(edges, chosen, size + 1, best);
    chosen[pivot] = false;

    let neighbors: Vec<VertexId> = open
        .iter()
        .filter_map(|&(u, v)| {
            if u == pivot {
                Some(v)
            } else if v == pivot {
                Some(u)
            } else {
                None
            }
        })
        .collect();
    for &w in &neighbors {
        chosen[w] = true;
    }
    cover(edges, chosen, size + neighbors.len(), best);
    for &w in &neighbors {
        chosen[w] = false;
    }
}

/// Largest graph accepted by [`subset_verification_bruteforce`].
pub const BRUTEFORCE_MAX_N: usize = 12;

/// Smallest `k <= k_max` such that some `k` atomic interventions orient all
/// of `targets`, by exhaustive enumeration.
pub fn subset_verification_bruteforce(g: &Dag, targets: &EdgeSet, k_max: usize) -> Result<usize> {
    check(g, targets)?;
    if g.n() > BRUTEFORCE_MAX_N {
        return Err(Error::Precondition(format!(
            "exhaustive search is limited to {BRUTEFORCE_MAX_N} vertices, got {}",
            g.n()
        )));
    }
    let base = essential_graph(g);
    let oriented = |iset: &InterventionSet| {
        let e = refine(g, &base, iset);
        targets.iter().all(|(u, v)| !e.is_undirected(u, v))
    };
    if oriented(&InterventionSet::new()) {
        return Ok(0);
    }
    for k in 1..=k_max.min(g.n()) {
        let found = crate::par::map(subsets(g.n(), k), |s| oriented(&InterventionSet::atomic(s)));
        if found.into_iter().any(|f| f) {
            return Ok(k);
        }
    }
    Err(Error::BoundExceeded(k_max))
}

fn subsets(n: usize, k: usize) -> Vec<Vec<VertexId>> {
    let mut out = Vec::new();
    let mut cur: Vec<VertexId> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}
