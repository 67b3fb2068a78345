//! Reference implementations used by the integration tests. Each one takes a
//! different route from the library code it checks.

#![allow(dead_code)]

use std::collections::BTreeSet;

use meeksep::gen::moral_dag;
use meeksep::graph::{Dag, Pdag, VertexId};
use meeksep::{InterventionSet, ShiftAssignment, ShiftSem};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

pub type Arcs = BTreeSet<(VertexId, VertexId)>;

/// Calls `f` with every permutation of `0..n` (Heap's algorithm).
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[VertexId])) {
    let mut p: Vec<VertexId> = (0..n).collect();
    let mut c = vec![0; n];
    f(&p);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            f(&p);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Unshielded colliders `(a, v, b)` with `a < b`, from an arc list.
pub fn colliders(n: usize, arcs: &[(VertexId, VertexId)]) -> BTreeSet<(VertexId, VertexId, VertexId)> {
    let mut adj = vec![vec![false; n]; n];
    let mut parents = vec![Vec::new(); n];
    for &(u, v) in arcs {
        adj[u][v] = true;
        adj[v][u] = true;
        parents[v].push(u);
    }
    let mut out = BTreeSet::new();
    for (v, pa) in parents.iter().enumerate() {
        for &a in pa {
            for &b in pa {
                if a < b && !adj[a][b] {
                    out.insert((a, v, b));
                }
            }
        }
    }
    out
}

/// Interventional Markov equivalence class of `g` by enumerating vertex
/// orders: every acyclic orientation of the skeleton arises from some order.
/// Returns the arcs shared by all members and the remaining edges as
/// `(min, max)` pairs.
pub fn mec_oracle(g: &Dag, iset: &InterventionSet) -> (Arcs, Arcs) {
    let n = g.n();
    let arcs = g.arcs();
    let target = colliders(n, &arcs);
    let cut: Vec<bool> = arcs
        .iter()
        .map(|&(u, v)| iset.iter().any(|i| i.contains(&u) != i.contains(&v)))
        .collect();
    let mut seen_forward = vec![false; arcs.len()];
    let mut seen_backward = vec![false; arcs.len()];
    let mut pos = vec![0; n];
    for_each_permutation(n, |order| {
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let forward: Vec<bool> = arcs.iter().map(|&(u, v)| pos[u] < pos[v]).collect();
        if (0..arcs.len()).any(|k| cut[k] && !forward[k]) {
            return;
        }
        let oriented: Vec<_> = arcs
            .iter()
            .zip(&forward)
            .map(|(&(u, v), &f)| if f { (u, v) } else { (v, u) })
            .collect();
        if colliders(n, &oriented) != target {
            return;
        }
        for k in 0..arcs.len() {
            if forward[k] {
                seen_forward[k] = true;
            } else {
                seen_backward[k] = true;
            }
        }
    });
    let mut fixed = Arcs::new();
    let mut free = Arcs::new();
    for (k, &(u, v)) in arcs.iter().enumerate() {
        assert!(seen_forward[k], "the hidden graph is a member of its own class");
        if seen_backward[k] {
            free.insert((u.min(v), u.max(v)));
        } else {
            fixed.insert((u, v));
        }
    }
    (fixed, free)
}

pub fn split(e: &Pdag) -> (Arcs, Arcs) {
    (
        e.arcs().into_iter().collect(),
        e.undirected_edges().into_iter().collect(),
    )
}

/// Connected components of the undirected part of `e` by union-find, each
/// sorted, ordered by smallest member.
pub fn undirected_components(e: &Pdag) -> Vec<Vec<VertexId>> {
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut x = x;
        while p[x] != r {
            x = std::mem::replace(&mut p[x], r);
        }
        r
    }
    let n = e.n();
    let mut p: Vec<usize> = (0..n).collect();
    for (u, v) in e.undirected_edges() {
        let (a, b) = (find(&mut p, u), find(&mut p, v));
        p[a.max(b)] = a.min(b);
    }
    let mut groups = vec![Vec::new(); n];
    for v in 0..n {
        let r = find(&mut p, v);
        groups[r].push(v);
    }
    groups.into_iter().filter(|g| !g.is_empty()).collect()
}

/// Chordality by repeatedly deleting a simplicial vertex.
pub fn chordal_by_elimination(n: usize, edges: &[(VertexId, VertexId)]) -> bool {
    let mut adj: Vec<BTreeSet<VertexId>> = vec![BTreeSet::new(); n];
    for &(u, v) in edges {
        adj[u].insert(v);
        adj[v].insert(u);
    }
    let mut alive: BTreeSet<VertexId> = (0..n).collect();
    while !alive.is_empty() {
        let simplicial = alive.iter().copied().find(|&v| {
            let nb: Vec<_> = adj[v].iter().copied().collect();
            nb.iter()
                .enumerate()
                .all(|(i, &a)| nb[i + 1..].iter().all(|b| adj[a].contains(b)))
        });
        let Some(v) = simplicial else { return false };
        for w in std::mem::take(&mut adj[v]) {
            adj[w].remove(&v);
        }
        alive.remove(&v);
    }
    true
}

/// Number of chain components of `e` that are not chordal.
pub fn nonchordal_components(e: &Pdag) -> usize {
    let edges = e.undirected_edges();
    undirected_components(e)
        .into_iter()
        .filter(|comp| comp.len() >= 4)
        .filter(|comp| {
            let mut local = vec![usize::MAX; e.n()];
            for (i, &v) in comp.iter().enumerate() {
                local[v] = i;
            }
            let inside: Vec<_> = edges
                .iter()
                .filter(|&&(u, v)| local[u] != usize::MAX && local[v] != usize::MAX)
                .map(|&(u, v)| (local[u], local[v]))
                .collect();
            !chordal_by_elimination(comp.len(), &inside)
        })
        .count()
}

/// `reach[u][v]` iff there is a directed path from `u` to `v` (Warshall).
pub fn reachability(g: &Dag) -> Vec<Vec<bool>> {
    let n = g.n();
    let mut r = vec![vec![false; n]; n];
    for (u, v) in g.arcs() {
        r[u][v] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if r[i][k] {
                let via = r[k].clone();
                for (x, y) in r[i].iter_mut().zip(via) {
                    *x |= y;
                }
            }
        }
    }
    r
}

/// Means `(I - B^T)^{-1} (c + a)` by a dense solve.
pub fn dense_means(sem: &ShiftSem, shifts: &ShiftAssignment) -> Vec<f64> {
    let n = sem.dag().n();
    let mut m = DMatrix::<f64>::identity(n, n);
    for ((u, v), w) in sem.weights() {
        m[(v, u)] -= w;
    }
    let rhs = DVector::from_iterator(n, (0..n).map(|v| sem.intercepts()[v] + shifts.get(v).unwrap_or(0.0)));
    let x = m.lu().solve(&rhs).expect("unit lower triangular after reordering");
    x.iter().copied().collect()
}

/// `g` with vertex `v` renamed `perm[v]`.
pub fn relabel(g: &Dag, perm: &[VertexId]) -> Dag {
    Dag::new(g.n(), g.arcs().into_iter().map(|(u, v)| (perm[u], perm[v]))).unwrap()
}

/// Random DAG on up to `max_n` vertices: a random graph oriented along a
/// shuffled order.
pub fn arb_dag(max_n: usize) -> impl Strategy<Value = Dag> {
    (1..=max_n)
        .prop_flat_map(|n| {
            (
                proptest::collection::vec(any::<bool>(), n * (n - 1) / 2),
                Just((0..n).collect::<Vec<VertexId>>()).prop_shuffle(),
            )
        })
        .prop_map(|(bits, order)| {
            let n = order.len();
            let mut arcs = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if bits[k] {
                        arcs.push((order[i], order[j]));
                    }
                    k += 1;
                }
            }
            Dag::new(n, arcs).unwrap()
        })
}

/// Connected moral DAG on `lo..=hi` vertices.
pub fn arb_moral(lo: usize, hi: usize) -> impl Strategy<Value = Dag> {
    (lo..=hi, 0.0..0.5f64, any::<u64>()).prop_map(|(n, p, s)| moral_dag(n, p, s))
}

/// Atomic interventions on a subset of `0..n`.
pub fn arb_atomic(n: usize, max: usize) -> impl Strategy<Value = InterventionSet> {
    proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 0..=max.min(n)).prop_map(InterventionSet::atomic)
}

/// Every set of at most two atomic interventions on `0..n`.
pub fn small_intervention_sets(n: usize) -> Vec<InterventionSet> {
    let mut out = vec![InterventionSet::new()];
    for a in 0..n {
        out.push(InterventionSet::atomic([a]));
        for b in a + 1..n {
            out.push(InterventionSet::atomic([a, b]));
        }
    }
    out
}
