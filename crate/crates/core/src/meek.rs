//! Meek-rule closure, essential graphs and interventional essential graphs.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{Dag, Mark, Pdag, VertexId};

/// Ordered list of interventions, each a vertex set. Only atomic entries and
/// the empty (observational) entry are built by this crate.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InterventionSet {
    interventions: Vec<BTreeSet<VertexId>>,
}

impl InterventionSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// One atomic intervention per vertex, in the given order.
    pub fn atomic(vertices: impl IntoIterator<Item = VertexId>) -> Self {
        let mut s = Self::new();
        for v in vertices {
            s.push_atomic(v);
        }
        s
    }

    pub fn push_atomic(&mut self, v: VertexId) {
        self.interventions.push(BTreeSet::from([v]));
    }

    pub fn push(&mut self, intervention: BTreeSet<VertexId>) {
        self.interventions.push(intervention);
    }

    pub fn len(&self) -> usize {
        self.interventions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.interventions.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &BTreeSet<VertexId>> {
        self.interventions.iter()
    }

    /// Vertices of the atomic entries, in intervention order (repeats kept).
    pub fn atomic_targets(&self) -> Vec<VertexId> {
        self.interventions
            .iter()
            .filter(|i| i.len() == 1)
            .map(|i| *i.first().unwrap())
            .collect()
    }

    pub fn union(&self, other: &InterventionSet) -> InterventionSet {
        let mut out = self.clone();
        out.interventions.extend(other.interventions.iter().cloned());
        out
    }
}

fn r1(g: &Pdag, a: VertexId, b: VertexId) -> bool {
    g.parents(a).any(|c| !g.adjacent(c, b))
}

fn r2(g: &Pdag, a: VertexId, b: VertexId) -> bool {
    g.children(a).any(|c| g.has_arc(c, b))
}

fn r3(g: &Pdag, a: VertexId, b: VertexId) -> bool {
    let spouses: Vec<VertexId> = g.undirected_neighbors(a).filter(|&c| g.has_arc(c, b)).collect();
    spouses
        .iter()
        .enumerate()
        .any(|(i, &c)| spouses[i + 1..].iter().any(|&d| !g.adjacent(c, d)))
}

fn r4(g: &Pdag, a: VertexId, b: VertexId) -> bool {
    // d - a, a ~ c (not c -> a), d -> c -> b, b and d non-adjacent
    g.undirected_neighbors(a)
        .filter(|&d| d != b && !g.adjacent(b, d))
        .any(|d| {
            g.children(d)
                .any(|c| c != a && g.adjacent(a, c) && !g.has_arc(c, a) && g.has_arc(c, b))
        })
}

/// True when some Meek rule forces the undirected edge `a ~ b` to `a -> b`.
pub(crate) fn forced(g: &Pdag, a: VertexId, b: VertexId) -> bool {
    r1(g, a, b) || r2(g, a, b) || r3(g, a, b) || r4(g, a, b)
}

/// Applies Meek rules R1 to R4 until a fixed point.
///
/// Candidate edges live in a worklist; orienting `x -> y` re-queues the
/// undirected edges touching `x`, `y` and the neighbors of `y`, which covers
/// every rule premise the new arc can complete.
pub fn meek_closure(g: &Pdag) -> Result<Pdag> {
    let mut g = g.clone();
    let n = g.n();
    let mut queued = vec![false; n * n];
    let mut queue: VecDeque<(VertexId, VertexId)> = VecDeque::new();
    let push = |q: &mut VecDeque<_>, queued: &mut Vec<bool>, g: &Pdag, x: VertexId| {
        for y in g.undirected_neighbors(x) {
            let (a, b) = (x.min(y), x.max(y));
            if !queued[a * n + b] {
                queued[a * n + b] = true;
                q.push_back((a, b));
            }
        }
    };
    for x in 0..n {
        push(&mut queue, &mut queued, &g, x);
    }
    while let Some((a, b)) = queue.pop_front() {
        queued[a * n + b] = false;
        if g.mark(a, b) != Mark::Undirected {
            continue;
        }
        let (x, y) = match (forced(&g, a, b), forced(&g, b, a)) {
            (false, false) => continue,
            (true, true) => return Err(Error::InconsistentOrientation(a, b)),
            (true, false) => (a, b),
            (false, true) => (b, a),
        };
        g.orient(x, y);
        push(&mut queue, &mut queued, &g, x);
        push(&mut queue, &mut queued, &g, y);
        let around: Vec<VertexId> = g.neighbors(y).to_vec();
        for z in around {
            push(&mut queue, &mut queued, &g, z);
        }
    }
    Ok(g)
}

/// Essential graph (CPDAG) of the Markov equivalence class of `g`.
pub fn essential_graph(g: &Dag) -> Pdag {
    let mut arcs = BTreeSet::new();
    for (u, v, w) in g.v_structures() {
        arcs.insert((u, v));
        arcs.insert((w, v));
    }
    let undirected = g
        .arcs()
        .into_iter()
        .filter(|e| !arcs.contains(e))
        .map(|(u, v)| (u.min(v), u.max(v)));
    let start = Pdag::new(g.n(), arcs.iter().copied(), undirected).expect("dag skeleton");
    meek_closure(&start).expect("essential graph of a dag is consistent")
}

/// Orients every still-undirected edge of `e` that is cut by one of the
/// interventions, following `g`, then closes under the Meek rules.
pub(crate) fn refine(g: &Dag, e: &Pdag, iset: &InterventionSet) -> Pdag {
    let mut e = e.clone();
    for intervention in iset.iter() {
        for &v in intervention {
            for &w in g.parents(v).iter().chain(g.children(v)) {
                if intervention.contains(&w) || !e.is_undirected(v, w) {
                    continue;
                }
                if g.has_arc(v, w) {
                    e.orient(v, w);
                } else {
                    e.orient(w, v);
                }
            }
        }
    }
    meek_closure(&e).expect("interventional orientations of a dag are consistent")
}

/// Interventional essential graph `E_I(g)`.
pub fn interventional_essential_graph(g: &Dag, iset: &InterventionSet) -> Pdag {
    refine(g, &essential_graph(g), iset)
}

/// Arcs oriented in `E_I(g)`.
pub fn oriented_arcs(g: &Dag, iset: &InterventionSet) -> BTreeSet<(VertexId, VertexId)> {
    interventional_essential_graph(g, iset).arcs().into_iter().collect()
}

/// Parents of `u` whose arcs into `u` are oriented in `E_I(g)`.
pub fn recovered_parents(g: &Dag, iset: &InterventionSet, u: VertexId) -> Vec<VertexId> {
    interventional_essential_graph(g, iset).parents(u).collect()
}

/// All `w` such that the atomic intervention on `w` orients `u -> v`.
pub fn orienting_interventions(g: &Dag, arc: (VertexId, VertexId)) -> Result<Vec<VertexId>> {
    let (u, v) = arc;
    if u >= g.n() || v >= g.n() || !g.has_arc(u, v) {
        return Err(Error::MissingArc(u, v));
    }
    let base = essential_graph(g);
    let ws: Vec<VertexId> = (0..g.n()).collect();
    let hits = crate::par::map(ws, |w| {
        let e = refine(g, &base, &InterventionSet::atomic([w]));
        e.has_arc(u, v).then_some(w)
    });
    Ok(hits.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r1_orients_away_from_a_nonadjacent_parent() {
        // c=0 -> a=1, a ~ b=2, c and b non-adjacent
        let g = Pdag::new(3, [(0, 1)], [(1, 2)]).unwrap();
        let c = meek_closure(&g).unwrap();
        assert!(c.has_arc(1, 2));
    }

    #[test]
    fn r2_orients_along_a_directed_path() {
        // a=0 -> c=2 -> b=1, a ~ b
        let g = Pdag::new(3, [(0, 2), (2, 1)], [(0, 1)]).unwrap();
        assert!(meek_closure(&g).unwrap().has_arc(0, 1));
    }

    #[test]
    fn r3_fires_on_two_nonadjacent_spouses() {
        // a=0, b=1, c=2, d=3: d - a - c, d -> b <- c, c !~ d, a - b
        let g = Pdag::new(4, [(3, 1), (2, 1)], [(0, 3), (0, 2), (0, 1)]).unwrap();
        let c = meek_closure(&g).unwrap();
        assert!(c.has_arc(0, 1));
        assert!(c.is_undirected(0, 2) && c.is_undirected(0, 3));
    }

    #[test]
    fn r4_fires_on_a_directed_path_around_a() {
        // a=0, b=1, c=2, d=3: d - a - c, d -> c -> b, b !~ d, a - b
        let g = Pdag::new(4, [(3, 2), (2, 1)], [(0, 3), (0, 2), (0, 1)]).unwrap();
        assert!(meek_closure(&g).unwrap().has_arc(0, 1));
    }

    #[test]
    fn undirected_path_is_a_fixed_point() {
        let g = Pdag::new(3, [], [(0, 1), (1, 2)]).unwrap();
        assert_eq!(meek_closure(&g).unwrap(), g);
    }

    #[test]
    fn contradictory_input_is_reported() {
        // 0 -> 1 ~ 2 <- 3 with 0 !~ 2 and 3 !~ 1: R1 orients 1 -> 2 and 2 -> 1
        let g = Pdag::new(4, [(0, 1), (3, 2)], [(1, 2)]).unwrap();
        assert!(matches!(meek_closure(&g), Err(Error::InconsistentOrientation(1, 2))));
    }

    #[test]
    fn essential_graph_examples() {
        let d4 = Dag::complete(4);
        let e = essential_graph(&d4);
        assert_eq!(e.num_undirected(), 6);
        assert!(e.arcs().is_empty());

        let collider = Dag::new(3, [(0, 2), (1, 2)]).unwrap();
        let e = essential_graph(&collider);
        assert_eq!(e.arcs(), vec![(0, 2), (1, 2)]);
        assert!(e.is_fully_oriented());
    }

    #[test]
    fn intervening_on_d4_vertex() {
        let d4 = Dag::complete(4);
        let e = interventional_essential_graph(&d4, &InterventionSet::atomic([1]));
        assert_eq!(e.arcs(), vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]);
        assert_eq!(e.undirected_edges(), vec![(2, 3)]);
        assert_eq!(recovered_parents(&d4, &InterventionSet::atomic([1]), 2), vec![0, 1]);
    }

    #[test]
    fn observational_and_full_intervention_sets() {
        let g = crate::gen::er_dag(8, 0.4, 3);
        assert_eq!(
            interventional_essential_graph(&g, &InterventionSet::new()),
            essential_graph(&g)
        );
        let all = InterventionSet::atomic(0..8);
        assert_eq!(interventional_essential_graph(&g, &all), g.to_pdag());
        for u in 0..8 {
            assert_eq!(recovered_parents(&g, &all, u), g.parents(u));
        }
    }

    #[test]
    fn v_structure_parents_are_recovered_observationally() {
        let g = Dag::new(4, [(0, 2), (1, 2), (2, 3)]).unwrap();
        let pa = recovered_parents(&g, &InterventionSet::new(), 2);
        assert!(pa.contains(&0) && pa.contains(&1));
    }

    #[test]
    fn orienting_interventions_examples() {
        assert_eq!(orienting_interventions(&Dag::complete(4), (0, 1)).unwrap(), vec![0, 1]);
        let chain = Dag::new(3, [(0, 1), (1, 2)]).unwrap();
        let w = orienting_interventions(&chain, (1, 2)).unwrap();
        assert!(w.contains(&1) && w.contains(&2));
        assert!(matches!(
            orienting_interventions(&chain, (0, 2)),
            Err(Error::MissingArc(0, 2))
        ));
    }
}
