//! Directed and partially directed graph types over dense vertex ids `0..n`.
//!
//! [`Dag`] holds a ground-truth causal graph, [`Pdag`] holds chain graphs such as
//! essential graphs, and [`EdgeSet`] holds unordered vertex pairs (target sets,
//! covered edges). All set-valued queries return vertices in ascending order.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, VecDeque};

use crate::chordal::UndirectedGraph;
use crate::error::{Error, Result};

pub type VertexId = usize;

fn check_vertex(v: VertexId, n: usize) -> Result<()> {
    if v >= n {
        return Err(Error::VertexOutOfRange { v, n });
    }
    Ok(())
}

/// Set of unordered vertex pairs, stored as `(min, max)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct EdgeSet {
    edges: BTreeSet<(VertexId, VertexId)>,
}

impl EdgeSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts `u ~ v`. Self-loops are rejected.
    pub fn insert(&mut self, u: VertexId, v: VertexId) -> Result<bool> {
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        Ok(self.edges.insert((u.min(v), u.max(v))))
    }

    pub fn contains(&self, u: VertexId, v: VertexId) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.edges.iter().copied()
    }
}

impl FromIterator<(VertexId, VertexId)> for EdgeSet {
    /// Panics on self-loops.
    fn from_iter<I: IntoIterator<Item = (VertexId, VertexId)>>(iter: I) -> Self {
        let mut set = EdgeSet::new();
        for (u, v) in iter {
            set.insert(u, v).expect("self-loop in edge set");
        }
        set
    }
}

/// Immutable directed acyclic graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dag {
    n: usize,
    parents: Vec<Vec<VertexId>>,
    children: Vec<Vec<VertexId>>,
    adjacency: Vec<bool>,
    order: Vec<VertexId>,
}

impl Dag {
    /// Builds a DAG from arcs `u -> v`. Fails on self-loops, repeated vertex
    /// pairs (in either direction), out-of-range ids, or a directed cycle.
    pub fn new(n: usize, arcs: impl IntoIterator<Item = (VertexId, VertexId)>) -> Result<Self> {
        let mut parents = vec![Vec::new(); n];
        let mut children = vec![Vec::new(); n];
        let mut adjacency = vec![false; n * n];
        for (u, v) in arcs {
            check_vertex(u, n)?;
            check_vertex(v, n)?;
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if adjacency[u * n + v] {
                return Err(Error::DuplicateEdge(u, v));
            }
            adjacency[u * n + v] = true;
            adjacency[v * n + u] = true;
            parents[v].push(u);
            children[u].push(v);
        }
        for list in parents.iter_mut().chain(children.iter_mut()) {
            list.sort_unstable();
        }
        let order = kahn_order(n, &parents, &children).ok_or(Error::Cycle)?;
        Ok(Self {
            n,
            parents,
            children,
            adjacency,
            order,
        })
    }

    /// The complete DAG with arcs `i -> j` for all `i < j`.
    pub fn complete(n: usize) -> Self {
        let arcs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
        Dag::new(n, arcs).expect("complete order is acyclic")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_arcs(&self) -> usize {
        self.children.iter().map(Vec::len).sum()
    }

    pub fn parents(&self, v: VertexId) -> &[VertexId] {
        &self.parents[v]
    }

    pub fn children(&self, v: VertexId) -> &[VertexId] {
        &self.children[v]
    }

    pub fn has_arc(&self, u: VertexId, v: VertexId) -> bool {
        self.parents[v].binary_search(&u).is_ok()
    }

    pub fn adjacent(&self, u: VertexId, v: VertexId) -> bool {
        self.adjacency[u * self.n + v]
    }

    /// All arcs in lexicographic order.
    pub fn arcs(&self) -> Vec<(VertexId, VertexId)> {
        (0..self.n)
            .flat_map(|u| self.children[u].iter().map(move |&v| (u, v)))
            .collect()
    }

    /// Topological order; ties broken by ascending vertex id.
    pub fn topological_order(&self) -> &[VertexId] {
        &self.order
    }

    /// `Des(v)`, excluding `v`.
    pub fn descendants(&self, v: VertexId) -> Vec<VertexId> {
        reach(self.n, v, |x| &self.children[x])
    }

    /// `Anc(v)`, excluding `v`.
    pub fn ancestors(&self, v: VertexId) -> Vec<VertexId> {
        reach(self.n, v, |x| &self.parents[x])
    }

    /// Triples `(u, v, w)` with `u -> v <- w`, `u` and `w` non-adjacent, `u < w`.
    pub fn v_structures(&self) -> Vec<(VertexId, VertexId, VertexId)> {
        let mut out = Vec::new();
        for v in 0..self.n {
            let pa = &self.parents[v];
            for (i, &u) in pa.iter().enumerate() {
                for &w in &pa[i + 1..] {
                    if !self.adjacent(u, w) {
                        out.push((u, v, w));
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn is_moral(&self) -> bool {
        self.v_structures().is_empty()
    }

    /// Edges `u ~ v` with `Pa(u) \ {v} = Pa(v) \ {u}`.
    pub fn covered_edges(&self) -> EdgeSet {
        let mut out = EdgeSet::new();
        for (u, v) in self.arcs() {
            // u -> v, so u is in Pa(v) and v is not in Pa(u)
            let pv = self.parents[v].iter().filter(|&&x| x != u);
            if self.parents[u].iter().eq(pv) {
                out.insert(u, v).expect("dag has no self-loops");
            }
        }
        out
    }

    /// Restriction to `vertices`, relabelled to `0..k` in the given order.
    /// Returns the subgraph and the map from new ids to original ids.
    pub fn induced_subgraph(&self, vertices: &[VertexId]) -> (Dag, Vec<VertexId>) {
        let index = relabel_index(self.n, vertices);
        let arcs = vertices.iter().enumerate().flat_map(|(i, &u)| {
            self.children[u]
                .iter()
                .filter_map(|&v| index[v].map(|j| (i, j)))
                .collect::<Vec<_>>()
        });
        let sub = Dag::new(vertices.len(), arcs).expect("subgraph of a dag is a dag");
        (sub, vertices.to_vec())
    }

    pub fn skeleton(&self) -> UndirectedGraph {
        UndirectedGraph::new(self.n, self.arcs()).expect("dag skeleton is simple")
    }

    /// Fully oriented chain graph with the same arcs.
    pub fn to_pdag(&self) -> Pdag {
        Pdag::new(self.n, self.arcs(), []).expect("dag is a valid pdag")
    }
}

fn relabel_index(n: usize, vertices: &[VertexId]) -> Vec<Option<usize>> {
    let mut index = vec![None; n];
    for (i, &v) in vertices.iter().enumerate() {
        index[v] = Some(i);
    }
    index
}

fn reach<'a>(n: usize, start: VertexId, next: impl Fn(VertexId) -> &'a [VertexId]) -> Vec<VertexId> {
    let mut seen = vec![false; n];
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for &y in next(x) {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen[start] = false;
    (0..n).filter(|&v| seen[v]).collect()
}

fn kahn_order(n: usize, parents: &[Vec<VertexId>], children: &[Vec<VertexId>]) -> Option<Vec<VertexId>> {
    let mut indeg: Vec<usize> = parents.iter().map(Vec::len).collect();
    let mut heap: BinaryHeap<Reverse<VertexId>> = (0..n).filter(|&v| indeg[v] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(v)) = heap.pop() {
        order.push(v);
        for &c in &children[v] {
            indeg[c] -= 1;
            if indeg[c] == 0 {
                heap.push(Reverse(c));
            }
        }
    }
    (order.len() == n).then_some(order)
}

/// Orientation state of a vertex pair, seen from the first vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mark {
    Absent,
    Undirected,
    /// `u -> v`
    Out,
    /// `u <- v`
    In,
}

/// Partially directed graph. Chain graphs such as essential graphs and
/// interventional essential graphs live here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pdag {
    n: usize,
    marks: Vec<Mark>,
    neighbors: Vec<Vec<VertexId>>,
}

impl Pdag {
    pub fn new(
        n: usize,
        arcs: impl IntoIterator<Item = (VertexId, VertexId)>,
        undirected: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self> {
        let mut g = Pdag {
            n,
            marks: vec![Mark::Absent; n * n],
            neighbors: vec![Vec::new(); n],
        };
        let edges = arcs
            .into_iter()
            .map(|e| (e, true))
            .chain(undirected.into_iter().map(|e| (e, false)));
        for ((u, v), directed) in edges {
            check_vertex(u, n)?;
            check_vertex(v, n)?;
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if g.mark(u, v) != Mark::Absent {
                return Err(Error::DuplicateEdge(u, v));
            }
            if directed {
                g.set(u, v, Mark::Out);
            } else {
                g.set(u, v, Mark::Undirected);
            }
            g.neighbors[u].push(v);
            g.neighbors[v].push(u);
        }
        for list in &mut g.neighbors {
            list.sort_unstable();
        }
        Ok(g)
    }

    /// Skeleton with every edge undirected.
    pub fn undirected_from(skeleton: &UndirectedGraph) -> Self {
        Pdag::new(skeleton.n(), [], skeleton.edges()).expect("simple graph")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mark(&self, u: VertexId, v: VertexId) -> Mark {
        self.marks[u * self.n + v]
    }

    fn set(&mut self, u: VertexId, v: VertexId, m: Mark) {
        let back = match m {
            Mark::Out => Mark::In,
            Mark::In => Mark::Out,
            other => other,
        };
        self.marks[u * self.n + v] = m;
        self.marks[v * self.n + u] = back;
    }

    /// Turns the undirected edge `u ~ v` into `u -> v`.
    pub(crate) fn orient(&mut self, u: VertexId, v: VertexId) {
        debug_assert_eq!(self.mark(u, v), Mark::Undirected);
        self.set(u, v, Mark::Out);
    }

    pub fn adjacent(&self, u: VertexId, v: VertexId) -> bool {
        self.mark(u, v) != Mark::Absent
    }

    pub fn has_arc(&self, u: VertexId, v: VertexId) -> bool {
        self.mark(u, v) == Mark::Out
    }

    pub fn is_undirected(&self, u: VertexId, v: VertexId) -> bool {
        self.mark(u, v) == Mark::Undirected
    }

    /// Skeleton neighbors of `v`.
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.neighbors[v]
    }

    pub fn parents(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.neighbors[v].iter().copied().filter(move |&u| self.has_arc(u, v))
    }

    pub fn children(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.neighbors[v].iter().copied().filter(move |&w| self.has_arc(v, w))
    }

    pub fn undirected_neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.neighbors[v]
            .iter()
            .copied()
            .filter(move |&w| self.is_undirected(v, w))
    }

    /// Oriented arcs in lexicographic order.
    pub fn arcs(&self) -> Vec<(VertexId, VertexId)> {
        (0..self.n)
            .flat_map(|u| self.children(u).map(move |v| (u, v)))
            .collect()
    }

    /// Undirected edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn undirected_edges(&self) -> Vec<(VertexId, VertexId)> {
        (0..self.n)
            .flat_map(|u| {
                self.undirected_neighbors(u)
                    .filter(move |&v| u < v)
                    .map(move |v| (u, v))
            })
            .collect()
    }

    pub fn num_undirected(&self) -> usize {
        self.undirected_edges().len()
    }

    pub fn is_fully_oriented(&self) -> bool {
        self.marks.iter().all(|&m| m != Mark::Undirected)
    }

    pub fn skeleton(&self) -> UndirectedGraph {
        let edges = (0..self.n).flat_map(|u| self.neighbors[u].iter().filter(move |&&v| u < v).map(move |&v| (u, v)));
        UndirectedGraph::new(self.n, edges).expect("simple graph")
    }

    /// Connected components of the undirected part, each sorted, ordered by
    /// minimum vertex id. Singletons are included.
    pub fn chain_components(&self) -> Vec<Vec<VertexId>> {
        let mut comp = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            comp[s] = id;
            let mut members = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for y in self.undirected_neighbors(x) {
                    if comp[y] == usize::MAX {
                        comp[y] = id;
                        members.push(y);
                        queue.push_back(y);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Chain component index of every vertex, consistent with
    /// [`Pdag::chain_components`].
    pub fn component_index(&self) -> Vec<usize> {
        let mut index = vec![0; self.n];
        for (i, comp) in self.chain_components().iter().enumerate() {
            for &v in comp {
                index[v] = i;
            }
        }
        index
    }

    /// True when no directed or partially directed cycle exists.
    pub fn is_chain_graph(&self) -> bool {
        // contract chain components, then the component graph must be acyclic
        // and no arc may join two vertices of one component
        let index = self.component_index();
        let k = index.iter().max().map_or(0, |m| m + 1);
        let mut parents = vec![Vec::new(); k];
        let mut children = vec![Vec::new(); k];
        for (u, v) in self.arcs() {
            let (a, b) = (index[u], index[v]);
            if a == b {
                return false;
            }
            children[a].push(b);
            parents[b].push(a);
        }
        for list in parents.iter_mut().chain(children.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }
        kahn_order(k, &parents, &children).is_some()
    }

    /// Vertices reachable from `start` along oriented arcs only (excluding
    /// `start`), as a membership vector.
    pub fn directed_reach(&self, start: VertexId) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for y in self.children(x) {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    }

    /// Restriction to `vertices`, relabelled to `0..k` in the given order.
    pub fn induced_subgraph(&self, vertices: &[VertexId]) -> (Pdag, Vec<VertexId>) {
        let index = relabel_index(self.n, vertices);
        let mut arcs = Vec::new();
        let mut und = Vec::new();
        for (i, &u) in vertices.iter().enumerate() {
            for &v in &self.neighbors[u] {
                let Some(j) = index[v] else { continue };
                match self.mark(u, v) {
                    Mark::Out => arcs.push((i, j)),
                    Mark::Undirected if i < j => und.push((i, j)),
                    _ => {}
                }
            }
        }
        let sub = Pdag::new(vertices.len(), arcs, und).expect("subgraph of a pdag is a pdag");
        (sub, vertices.to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_descendants(g: &Dag, v: VertexId) -> Vec<VertexId> {
        // reachability by repeated squaring of the adjacency relation
        let n = g.n();
        let mut r = vec![vec![false; n]; n];
        for (a, b) in g.arcs() {
            r[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if r[i][k] && r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
        (0..n).filter(|&w| r[v][w]).collect()
    }

    #[test]
    fn topological_order_examples() {
        assert_eq!(Dag::complete(4).topological_order(), &[0, 1, 2, 3]);
        assert_eq!(Dag::new(3, []).unwrap().topological_order(), &[0, 1, 2]);
        // chain 3 -> 2 -> 1 in 1-based labels is 2 -> 1 -> 0 here
        let chain = Dag::new(3, [(2, 1), (1, 0)]).unwrap();
        assert_eq!(chain.topological_order(), &[2, 1, 0]);
    }

    #[test]
    fn cycle_is_rejected() {
        assert!(matches!(Dag::new(3, [(0, 1), (1, 2), (2, 0)]), Err(Error::Cycle)));
        assert!(matches!(Dag::new(2, [(0, 1), (1, 0)]), Err(Error::DuplicateEdge(1, 0))));
        assert!(matches!(Dag::new(2, [(1, 1)]), Err(Error::SelfLoop(1))));
        assert!(matches!(
            Dag::new(2, [(0, 2)]),
            Err(Error::VertexOutOfRange { v: 2, n: 2 })
        ));
    }

    #[test]
    fn descendants_examples() {
        let d4 = Dag::complete(4);
        assert_eq!(d4.descendants(1), vec![2, 3]);
        assert!(d4.descendants(3).is_empty());
        assert_eq!(d4.ancestors(2), vec![0, 1]);

        let g = crate::gen::er_dag(7, 0.4, 11);
        for v in 0..7 {
            assert_eq!(g.descendants(v), brute_descendants(&g, v));
            let a = g.ancestors(v).len();
            let b = g.descendants(v).len();
            assert!(a + b < 7);
        }
    }

    #[test]
    fn chain_components_examples() {
        // D4 after intervening on vertex 1 (0-based)
        let g = Pdag::new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)], [(2, 3)]).unwrap();
        assert_eq!(g.chain_components(), vec![vec![0], vec![1], vec![2, 3]]);
        assert!(g.is_chain_graph());

        let oriented = Dag::complete(5).to_pdag();
        assert_eq!(oriented.chain_components().len(), 5);

        let und = Pdag::new(4, [], [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(und.chain_components(), vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn partially_directed_cycle_is_not_a_chain_graph() {
        let g = Pdag::new(3, [(0, 1), (1, 2)], [(0, 2)]).unwrap();
        assert!(!g.is_chain_graph());
        let g = Pdag::new(3, [(0, 1), (1, 2), (2, 0)], []).unwrap();
        assert!(!g.is_chain_graph());
    }

    #[test]
    fn v_structures_and_morality() {
        let collider = Dag::new(3, [(0, 2), (1, 2)]).unwrap();
        assert_eq!(collider.v_structures(), vec![(0, 2, 1)]);
        assert!(!collider.is_moral());
        assert!(Dag::complete(4).v_structures().is_empty());
        assert!(Dag::complete(4).is_moral());
        let out_tree = Dag::new(5, [(0, 1), (0, 2), (1, 3), (1, 4)]).unwrap();
        assert!(out_tree.is_moral());
    }

    #[test]
    fn covered_edge_examples() {
        let d4 = Dag::complete(4);
        let expected: EdgeSet = [(0, 1), (1, 2), (2, 3)].into_iter().collect();
        assert_eq!(d4.covered_edges(), expected);

        let single = Dag::new(2, [(0, 1)]).unwrap();
        assert_eq!(single.covered_edges().iter().collect::<Vec<_>>(), vec![(0, 1)]);

        let star = Dag::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(star.covered_edges().len(), 3);
    }

    #[test]
    fn covered_edges_of_complete_dag_form_a_path() {
        for n in 2..=10 {
            let g = Dag::complete(n);
            let path: EdgeSet = (0..n - 1).map(|i| (i, i + 1)).collect();
            assert_eq!(g.covered_edges(), path, "n = {n}");
        }
    }

    #[test]
    fn induced_subgraph_examples() {
        let d4 = Dag::complete(4);
        let (sub, map) = d4.induced_subgraph(&[1, 2, 3]);
        assert_eq!(sub, Dag::complete(3));
        assert_eq!(map, vec![1, 2, 3]);
        let (empty, _) = d4.induced_subgraph(&[]);
        assert_eq!(empty.n(), 0);
        let (same, _) = d4.induced_subgraph(&[0, 1, 2, 3]);
        assert_eq!(same, d4);
    }

    #[test]
    fn edge_set_normalizes_pairs() {
        let mut s = EdgeSet::new();
        assert!(s.insert(3, 1).unwrap());
        assert!(!s.insert(1, 3).unwrap());
        assert!(s.contains(1, 3) && s.contains(3, 1));
        assert!(s.insert(2, 2).is_err());
    }
}
