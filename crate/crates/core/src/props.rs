//! Structural properties that every run must satisfy, an exhaustive
//! Markov-equivalence reference for tiny graphs, and seeded randomized
//! suites over them (used by `meeksep verify` and the test suite).
//!
//! Checks return `Err(description)` on the first violation found.

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::Rng as _;

use crate::algorithms::{
    causal_mean_match, find_source, meek_separator, subset_lower_bound, subset_search, subset_verification_bruteforce,
    MeekSeparatorResult,
};
use crate::chordal::{clique_separator, Fraction, UndirectedGraph};
use crate::gen::{er_dag, matching_instance, moral_dag, r_hop_instance, MatchingInstance, MatchingParams};
use crate::graph::{Dag, EdgeSet, Pdag, VertexId};
use crate::meek::{interventional_essential_graph, oriented_arcs, orienting_interventions, InterventionSet};
use crate::oracle::{mean_vector, InterventionOracle, MEAN_TOL};
use crate::seed::{self, Rng};

pub type Check = std::result::Result<(), String>;

type Arcs = BTreeSet<(VertexId, VertexId)>;

/// Largest graph for [`essential_bruteforce`]; it enumerates `2^m`
/// orientations.
pub const BRUTEFORCE_MAX_EDGES: usize = 16;

/// `E_I(g)` by enumeration: keep every orientation of the skeleton that is
/// acyclic, has the v-structures of `g`, and agrees with `g` on every edge
/// cut by an intervention; an edge is an arc iff all survivors agree.
pub fn essential_bruteforce(g: &Dag, iset: &InterventionSet) -> Pdag {
    let edges = g.arcs();
    assert!(edges.len() <= BRUTEFORCE_MAX_EDGES, "too many edges to enumerate");
    let vs = g.v_structures();
    let cut: Vec<bool> = edges
        .iter()
        .map(|&(u, v)| iset.iter().any(|i| i.contains(&u) != i.contains(&v)))
        .collect();
    let mut forward = vec![true; edges.len()];
    let mut backward = vec![true; edges.len()];
    for mask in 0u32..(1 << edges.len()) {
        let flipped = |k: usize| mask >> k & 1 == 1;
        if (0..edges.len()).any(|k| cut[k] && flipped(k)) {
            continue;
        }
        let arcs = edges
            .iter()
            .enumerate()
            .map(|(k, &(u, v))| if flipped(k) { (v, u) } else { (u, v) });
        let Ok(d) = Dag::new(g.n(), arcs) else { continue };
        if d.v_structures() != vs {
            continue;
        }
        for k in 0..edges.len() {
            if flipped(k) {
                forward[k] = false;
            } else {
                backward[k] = false;
            }
        }
    }
    let mut arcs = Vec::new();
    let mut undirected = Vec::new();
    for (k, &(u, v)) in edges.iter().enumerate() {
        match (forward[k], backward[k]) {
            (true, false) => arcs.push((u, v)),
            (false, true) => arcs.push((v, u)),
            _ => undirected.push((u, v)),
        }
    }
    Pdag::new(g.n(), arcs, undirected).expect("skeleton of a dag")
}

pub fn check_matches_bruteforce(g: &Dag, iset: &InterventionSet) -> Check {
    let fast = interventional_essential_graph(g, iset);
    let slow = essential_bruteforce(g, iset);
    if fast == slow {
        Ok(())
    } else {
        Err(format!(
            "closure gives arcs {:?}, enumeration gives {:?}",
            fast.arcs(),
            slow.arcs()
        ))
    }
}

/// Every chain component of `e` induces a chordal graph.
pub fn check_chordal_components(e: &Pdag) -> Check {
    for comp in e.chain_components() {
        if comp.len() < 4 {
            continue;
        }
        let (sub, _) = e.induced_subgraph(&comp);
        if !sub.skeleton().is_chordal() {
            return Err(format!("chain component {comp:?} is not chordal"));
        }
    }
    Ok(())
}

/// Oriented arcs of `E_I(g)` agree with `g`.
pub fn check_sound(g: &Dag, e: &Pdag) -> Check {
    match e.arcs().into_iter().find(|&(u, v)| !g.has_arc(u, v)) {
        Some((u, v)) => Err(format!("{u} -> {v} oriented against the hidden graph")),
        None => Ok(()),
    }
}

/// `g` with the arcs of `R(g, iset)` removed.
pub fn residual(g: &Dag, iset: &InterventionSet) -> Dag {
    let known = oriented_arcs(g, iset);
    Dag::new(g.n(), g.arcs().into_iter().filter(|a| !known.contains(a))).expect("subgraph of a dag")
}

/// The residual graph has no v-structures and vertices of one chain
/// component share their recovered parents.
pub fn check_residual_structure(g: &Dag, iset: &InterventionSet) -> Check {
    let res = residual(g, iset);
    if let Some(t) = res.v_structures().first() {
        return Err(format!("residual graph has v-structure {t:?}"));
    }
    let e = interventional_essential_graph(g, iset);
    for comp in e.chain_components() {
        let first: BTreeSet<VertexId> = e.parents(comp[0]).collect();
        for &v in &comp[1..] {
            let pa: BTreeSet<VertexId> = e.parents(v).collect();
            if pa != first {
                return Err(format!("recovered parents of {} and {v} differ", comp[0]));
            }
        }
    }
    Ok(())
}

/// `R(G^I, J) = R(G, J) \ R(G, I)` and `R(G, I + J)` is the disjoint union of
/// `R(G^I, J)` and `R(G, I)`.
pub fn check_decomposition(g: &Dag, i: &InterventionSet, j: &InterventionSet) -> Check {
    let ri = oriented_arcs(g, i);
    let rj = oriented_arcs(g, j);
    let rij = oriented_arcs(g, &i.union(j));
    let res_j = oriented_arcs(&residual(g, i), j);
    let diff: Arcs = rj.difference(&ri).copied().collect();
    if res_j != diff {
        return Err(format!("R(G^I,J) = {res_j:?} but R(G,J) \\ R(G,I) = {diff:?}"));
    }
    if !res_j.is_disjoint(&ri) {
        return Err("R(G^I,J) and R(G,I) overlap".into());
    }
    let union: Arcs = res_j.union(&ri).copied().collect();
    if rij != union {
        return Err(format!("R(G,I+J) = {rij:?} but the union is {union:?}"));
    }
    Ok(())
}

/// `iset` orients a superset of what its prefix `prefix` orients.
pub fn check_monotone(g: &Dag, prefix: &InterventionSet, iset: &InterventionSet) -> Check {
    let small = oriented_arcs(g, prefix);
    let big = oriented_arcs(g, iset);
    if small.is_subset(&big) {
        Ok(())
    } else {
        Err("adding interventions lost an orientation".into())
    }
}

fn closed(g: &Dag, v: VertexId, down: bool) -> BTreeSet<VertexId> {
    let mut s: BTreeSet<VertexId> = if down { g.descendants(v) } else { g.ancestors(v) }
        .into_iter()
        .collect();
    s.insert(v);
    s
}

/// For a moral `g`, the vertices whose intervention orients `u -> v` are
/// `Des[w] ∩ Anc[v]` for some `w` in `Anc[u]`.
pub fn check_interval(g: &Dag, arc: (VertexId, VertexId)) -> Check {
    let hits: BTreeSet<VertexId> = orienting_interventions(g, arc)
        .map_err(|e| e.to_string())?
        .into_iter()
        .collect();
    let anc_v = closed(g, arc.1, false);
    let found = closed(g, arc.0, false).into_iter().any(|w| {
        let interval: BTreeSet<VertexId> = closed(g, w, true).intersection(&anc_v).copied().collect();
        interval == hits
    });
    if found {
        Ok(())
    } else {
        Err(format!("orienting set {hits:?} of {arc:?} is not an interval"))
    }
}

/// Every chain component of `E_v(g)` is `{v}`, inside `Des(v)`, or disjoint
/// from `Des[v]`.
pub fn check_component_sides(g: &Dag, v: VertexId) -> Check {
    let e = interventional_essential_graph(g, &InterventionSet::atomic([v]));
    let des = closed(g, v, true);
    for comp in e.chain_components() {
        if comp == [v] {
            continue;
        }
        let inside = comp.iter().filter(|x| des.contains(x)).count();
        if inside != 0 && (inside != comp.len() || comp.contains(&v)) {
            return Err(format!("component {comp:?} straddles the descendants of {v}"));
        }
    }
    Ok(())
}

/// Along the topological order of a balanced clique separator, the number of
/// non-descendants never decreases.
pub fn check_clique_monotone(g: &Dag) -> Check {
    let sep = clique_separator(&g.skeleton(), Fraction::HALF).map_err(|e| e.to_string())?;
    let pos = position(g);
    let mut clique = sep.clique;
    clique.sort_by_key(|&v| pos[v]);
    let outside = |v: VertexId| g.n() - 1 - g.descendants(v).len();
    for w in clique.windows(2) {
        if outside(w[1]) < outside(w[0]) {
            return Err(format!("|A| drops from {} to {}", w[0], w[1]));
        }
    }
    Ok(())
}

fn position(g: &Dag) -> Vec<usize> {
    let mut pos = vec![0; g.n()];
    for (i, &v) in g.topological_order().iter().enumerate() {
        pos[v] = i;
    }
    pos
}

/// `r` separates `component` of `E_prior(g)`: at most two vertices, all
/// queried, and every resulting chain component inside `component` has at
/// most half of it (rounded up).
pub fn check_meek_separator(
    g: &Dag,
    prior: &InterventionSet,
    component: &[VertexId],
    r: &MeekSeparatorResult,
) -> Check {
    if r.separator.len() > 2 {
        return Err(format!("separator {:?} is too large", r.separator));
    }
    if let Some(v) = r.separator.iter().find(|v| !r.intervened.contains(v)) {
        return Err(format!("separator vertex {v} was never queried"));
    }
    let inside: BTreeSet<VertexId> = component.iter().copied().collect();
    let e = interventional_essential_graph(g, &prior.union(&InterventionSet::atomic(r.separator.iter().copied())));
    let limit = component.len().div_ceil(2);
    for comp in e.chain_components() {
        if comp.iter().all(|v| inside.contains(v)) && comp.len() > limit {
            return Err(format!("component of size {} exceeds {limit}", comp.len()));
        }
    }
    Ok(())
}

/// `s` is in `u_set` and has no proper ancestor there.
pub fn check_source(g: &Dag, u_set: &[VertexId], s: VertexId) -> Check {
    if !u_set.contains(&s) {
        return Err(format!("{s} is not a candidate"));
    }
    match g.ancestors(s).into_iter().find(|a| u_set.contains(a)) {
        Some(a) => Err(format!("{a} is an ancestor of the returned source {s}")),
        None => Ok(()),
    }
}

/// Recovered shifts equal the hidden ones and reproduce the target means.
pub fn check_matching(inst: &MatchingInstance, got: &crate::oracle::ShiftAssignment) -> Check {
    if got.targets() != inst.hidden_targets.targets() {
        return Err(format!(
            "recovered targets {:?}, hidden {:?}",
            got.targets(),
            inst.hidden_targets.targets()
        ));
    }
    for (v, a) in inst.hidden_targets.iter() {
        let b = got.get(v).unwrap();
        if (a - b).abs() > MEAN_TOL {
            return Err(format!("shift at {v} is {b}, expected {a}"));
        }
    }
    let mu = mean_vector(&inst.sem, got);
    if let Some(v) = (0..mu.len()).find(|&v| (mu[v] - inst.target_mean[v]).abs() > MEAN_TOL) {
        return Err(format!("mean at {v} is {}, expected {}", mu[v], inst.target_mean[v]));
    }
    Ok(())
}

fn random_atomic(rng: &mut Rng, n: usize, max: usize) -> InterventionSet {
    let k = rng.random_range(0..=max.min(n));
    InterventionSet::atomic(sample(rng, n, k).into_vec())
}

/// Names accepted by [`run_suite`].
pub const SUITES: &[&str] = &[
    "bruteforce",
    "closure",
    "decomposition",
    "interval",
    "sides",
    "separator",
    "sandwich",
    "source",
    "matching",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs `cases` seeded random cases of one suite in parallel.
pub fn run_suite(name: &str, cases: usize, master: u64) -> crate::Result<SuiteReport> {
    if !SUITES.contains(&name) {
        return Err(crate::Error::Precondition(format!(
            "unknown suite {name:?}; known: {}",
            SUITES.join(", ")
        )));
    }
    let suite_seed = seed::derive(master, name);
    let outcomes = crate::par::map((0..cases as u64).collect(), |i| {
        let s = seed::derive_index(suite_seed, i);
        case(name, s).map_err(|e| format!("case {i} (seed {s}): {e}"))
    });
    Ok(SuiteReport {
        name: name.to_string(),
        cases,
        failures: outcomes.into_iter().filter_map(|o| o.err()).collect(),
    })
}

fn case(name: &str, s: u64) -> Check {
    let mut rng = seed::rng(s);
    match name {
        "bruteforce" => {
            let n = rng.random_range(1..=5);
            let g = er_dag(n, rng.random_range(0.2..0.9), s);
            check_matches_bruteforce(&g, &random_atomic(&mut rng, n, 2))
        }
        "closure" => {
            let n = rng.random_range(2..=12);
            let g = er_dag(n, rng.random_range(0.1..0.7), s);
            let i = random_atomic(&mut rng, n, 3);
            let j = random_atomic(&mut rng, n, 3);
            let e = interventional_essential_graph(&g, &i);
            check_chordal_components(&e)?;
            check_sound(&g, &e)?;
            check_residual_structure(&g, &i)?;
            check_monotone(&g, &i, &i.union(&j))
        }
        "decomposition" => {
            let n = rng.random_range(2..=8);
            let g = er_dag(n, rng.random_range(0.1..0.8), s);
            let i = random_atomic(&mut rng, n, 3);
            let j = random_atomic(&mut rng, n, 3);
            check_decomposition(&g, &i, &j)
        }
        "interval" => {
            let n = rng.random_range(2..=10);
            let g = moral_dag(n, rng.random_range(0.0..0.5), s);
            let arcs = g.arcs();
            check_interval(&g, arcs[rng.random_range(0..arcs.len())])
        }
        "sides" => {
            let n = rng.random_range(2..=24);
            let g = moral_dag(n, rng.random_range(0.0..0.4), s);
            check_component_sides(&g, rng.random_range(0..n))?;
            check_clique_monotone(&g)
        }
        "separator" => {
            let n = [8, 16, 32][rng.random_range(0..3)];
            let g = moral_dag(n, rng.random_range(0.0..0.4), s);
            let comp: Vec<VertexId> = (0..n).collect();
            let mut o = InterventionOracle::new(g.clone());
            let r = meek_separator(&mut o, &comp, s).map_err(|e| e.to_string())?;
            check_meek_separator(&g, &InterventionSet::new(), &comp, &r)
        }
        "sandwich" => {
            let n = rng.random_range(4..=10);
            let inst = r_hop_instance(n, rng.random_range(1..=2), 0.1, s).map_err(|e| e.to_string())?;
            sandwich(&inst.hidden, &inst.targets, s).map(|_| ())
        }
        "source" => {
            let n = rng.random_range(2..=32);
            let g = moral_dag(n, rng.random_range(0.0..0.3), s);
            let k = rng.random_range(1..=n);
            let u_set = sample(&mut rng, n, k).into_vec();
            let mut o = InterventionOracle::new(g.clone());
            let (src, _) = find_source(&mut o, &u_set, s).map_err(|e| e.to_string())?;
            check_source(&g, &u_set, src)
        }
        "matching" => {
            let n = rng.random_range(2..=30);
            let g = er_dag(n, 0.2, s);
            let k = rng.random_range(0..=n);
            let inst = matching_instance(&g, k, s, MatchingParams::default()).map_err(|e| e.to_string())?;
            let mut o = InterventionOracle::new(g);
            let got = causal_mean_match(&mut o, &inst.sem, &inst.target_mean, s).map_err(|e| e.to_string())?;
            check_matching(&inst, &got)
        }
        _ => unreachable!("suite names are validated"),
    }
}

/// `(lower bound, exact verification number, search count)`, checked to be
/// ordered, with every target oriented by the search.
pub fn sandwich(g: &Dag, targets: &EdgeSet, s: u64) -> std::result::Result<(usize, usize, usize), String> {
    let lb = subset_lower_bound(g, targets).map_err(|e| e.to_string())?;
    let nu = subset_verification_bruteforce(g, targets, g.n()).map_err(|e| e.to_string())?;
    let mut o = InterventionOracle::new(g.clone());
    subset_search(&mut o, targets, s).map_err(|e| e.to_string())?;
    if !o.all_oriented(targets) {
        return Err("search left a target unoriented".into());
    }
    if !(lb <= nu && nu <= o.count()) {
        return Err(format!("expected {lb} <= {nu} <= {}", o.count()));
    }
    Ok((lb, nu, o.count()))
}

/// Clique number of the skeleton.
pub fn omega(g: &Dag) -> usize {
    let s: UndirectedGraph = g.skeleton();
    s.clique_number()
}
