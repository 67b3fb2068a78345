//! Chordal graph machinery: maximum cardinality search, perfect elimination
//! orderings, maximal cliques and balanced clique separators.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::VertexId;

/// Simple undirected graph with sorted neighbor lists and an adjacency matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    n: usize,
    neighbors: Vec<Vec<VertexId>>,
    adjacency: Vec<bool>,
}

impl UndirectedGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (VertexId, VertexId)>) -> Result<Self> {
        let mut neighbors = vec![Vec::new(); n];
        let mut adjacency = vec![false; n * n];
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { v: x, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if adjacency[u * n + v] {
                return Err(Error::DuplicateEdge(u, v));
            }
            adjacency[u * n + v] = true;
            adjacency[v * n + u] = true;
            neighbors[u].push(v);
            neighbors[v].push(u);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        Ok(Self {
            n,
            neighbors,
            adjacency,
        })
    }

    pub fn complete(n: usize) -> Self {
        UndirectedGraph::new(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).unwrap()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.neighbors[v]
    }

    pub fn adjacent(&self, u: VertexId, v: VertexId) -> bool {
        self.adjacency[u * self.n + v]
    }

    /// Edges as `(u, v)` with `u < v`, lexicographic.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        (0..self.n)
            .flat_map(|u| self.neighbors[u].iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect()
    }

    pub fn num_edges(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_clique(&self, vertices: &[VertexId]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(i, &u)| vertices[i + 1..].iter().all(|&v| self.adjacent(u, v)))
    }

    /// Connected components of the graph with `removed` deleted, each sorted,
    /// ordered by minimum vertex id.
    pub fn components_without(&self, removed: &[VertexId]) -> Vec<Vec<VertexId>> {
        let mut gone = vec![false; self.n];
        for &v in removed {
            gone[v] = true;
        }
        let mut out = Vec::new();
        for s in 0..self.n {
            if gone[s] {
                continue;
            }
            gone[s] = true;
            let mut members = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &y in &self.neighbors[x] {
                    if !gone[y] {
                        gone[y] = true;
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

    pub fn is_connected(&self) -> bool {
        self.components_without(&[]).len() <= 1
    }

    /// Maximum cardinality search order. The next vertex is the unvisited one
    /// with the most visited neighbors, ties broken by smallest id.
    pub fn mcs_order(&self) -> Vec<VertexId> {
        let mut weight = vec![0usize; self.n];
        let mut visited = vec![false; self.n];
        let mut order = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            let v = (0..self.n)
                .filter(|&v| !visited[v])
                .max_by(|&a, &b| weight[a].cmp(&weight[b]).then(b.cmp(&a)))
                .expect("unvisited vertex remains");
            visited[v] = true;
            order.push(v);
            for &w in &self.neighbors[v] {
                if !visited[w] {
                    weight[w] += 1;
                }
            }
        }
        order
    }

    /// For each vertex, its neighbors that precede it in `order`.
    fn earlier_neighbors(&self, order: &[VertexId]) -> (Vec<usize>, Vec<Vec<VertexId>>) {
        let mut pos = vec![0; self.n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let earlier = (0..self.n)
            .map(|v| {
                let mut e: Vec<_> = self.neighbors[v].iter().copied().filter(|&w| pos[w] < pos[v]).collect();
                e.sort_unstable_by_key(|&w| pos[w]);
                e
            })
            .collect();
        (pos, earlier)
    }

    /// True iff every cycle of length at least four has a chord, checked by
    /// verifying that the reverse MCS order is a perfect elimination ordering.
    pub fn is_chordal(&self) -> bool {
        let order = self.mcs_order();
        let (_, earlier) = self.earlier_neighbors(&order);
        for &v in &order {
            let Some((&last, rest)) = earlier[v].split_last() else {
                continue;
            };
            // the latest earlier neighbor must see all the other earlier neighbors
            if rest.iter().any(|&w| !self.adjacent(last, w)) {
                return false;
            }
        }
        true
    }

    /// Maximal cliques read off the perfect elimination ordering, each sorted,
    /// in MCS order of their last-visited vertex.
    pub fn maximal_cliques(&self) -> Result<Vec<Vec<VertexId>>> {
        if !self.is_chordal() {
            return Err(Error::NotChordal);
        }
        let order = self.mcs_order();
        let (_, earlier) = self.earlier_neighbors(&order);
        let candidates: Vec<Vec<VertexId>> = order
            .iter()
            .map(|&v| {
                let mut c = earlier[v].clone();
                c.push(v);
                c.sort_unstable();
                c
            })
            .collect();
        let mut out: Vec<Vec<VertexId>> = Vec::new();
        for (i, c) in candidates.iter().enumerate() {
            let dominated = candidates
                .iter()
                .enumerate()
                .any(|(j, d)| j != i && d.len() >= c.len() && is_subset(c, d) && (d.len() > c.len() || j < i));
            if !dominated {
                out.push(c.clone());
            }
        }
        Ok(out)
    }

    /// Size of the largest clique of a chordal graph.
    pub fn max_clique_size(&self) -> Result<usize> {
        Ok(self.maximal_cliques()?.iter().map(Vec::len).max().unwrap_or(0))
    }

    /// Clique number of an arbitrary graph via Bron–Kerbosch with pivoting.
    pub fn clique_number(&self) -> usize {
        let mut best = 0;
        let all: Vec<VertexId> = (0..self.n).collect();
        self.bron_kerbosch(0, all, Vec::new(), &mut best);
        best
    }

    fn bron_kerbosch(&self, size: usize, p: Vec<VertexId>, mut x: Vec<VertexId>, best: &mut usize) {
        if p.is_empty() {
            *best = (*best).max(size);
            return;
        }
        if size + p.len() <= *best {
            return;
        }
        let pivot = p
            .iter()
            .chain(x.iter())
            .copied()
            .max_by_key(|&u| p.iter().filter(|&&v| self.adjacent(u, v)).count())
            .unwrap();
        let mut p_rest = p.clone();
        for v in p.into_iter().filter(|&v| !self.adjacent(pivot, v)) {
            let p_next = p_rest.iter().copied().filter(|&w| self.adjacent(v, w)).collect();
            let x_next = x.iter().copied().filter(|&w| self.adjacent(v, w)).collect();
            self.bron_kerbosch(size + 1, p_next, x_next, best);
            p_rest.retain(|&w| w != v);
            x.push(v);
        }
    }
}

fn is_subset(a: &[VertexId], b: &[VertexId]) -> bool {
    a.iter().all(|v| b.binary_search(v).is_ok())
}

/// A ratio `num / den` used for separator balance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fraction {
    pub num: usize,
    pub den: usize,
}

impl Fraction {
    pub const HALF: Fraction = Fraction { num: 1, den: 2 };

    /// `size <= self * total`, computed exactly.
    pub fn admits(self, size: usize, total: usize) -> bool {
        size * self.den <= self.num * total
    }
}

/// A clique whose removal leaves components of bounded size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueSeparator {
    pub clique: Vec<VertexId>,
    pub components: Vec<Vec<VertexId>>,
}

/// Finds an `alpha`-clique separator of a connected chordal graph.
///
/// Takes the first maximal clique (in MCS order) whose removal leaves every
/// component within `alpha * n`. When the graph is itself a clique that
/// clique is returned whole. Otherwise vertices are then dropped from the
/// clique, smallest id first, as long as the balance condition still holds.
pub fn clique_separator(g: &UndirectedGraph, alpha: Fraction) -> Result<CliqueSeparator> {
    let n = g.n();
    if n == 0 {
        return Err(Error::Precondition("clique separator of an empty graph".into()));
    }
    let cliques = g.maximal_cliques()?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let balanced = |clique: &[VertexId]| {
        let comps = g.components_without(clique);
        comps.iter().all(|c| alpha.admits(c.len(), n)).then_some(comps)
    };
    let (mut clique, mut components) = cliques
        .into_iter()
        .find_map(|c| balanced(&c).map(|comps| (c, comps)))
        .ok_or_else(|| Error::Precondition("no balanced maximal clique (alpha < 1/2?)".into()))?;
    if clique.len() < n {
        let mut i = 0;
        while i < clique.len() && clique.len() > 1 {
            let mut trial = clique.clone();
            trial.remove(i);
            if let Some(comps) = balanced(&trial) {
                clique = trial;
                components = comps;
            } else {
                i += 1;
            }
        }
    }
    Ok(CliqueSeparator { clique, components })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> UndirectedGraph {
        UndirectedGraph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn path(n: usize) -> UndirectedGraph {
        UndirectedGraph::new(n, (0..n - 1).map(|i| (i, i + 1))).unwrap()
    }

    fn star(leaves: usize) -> UndirectedGraph {
        UndirectedGraph::new(leaves + 1, (1..=leaves).map(|i| (0, i))).unwrap()
    }

    #[test]
    fn mcs_examples() {
        assert_eq!(UndirectedGraph::complete(4).mcs_order(), vec![0, 1, 2, 3]);
        assert_eq!(path(4).mcs_order(), vec![0, 1, 2, 3]);
        assert_eq!(UndirectedGraph::new(2, []).unwrap().mcs_order(), vec![0, 1]);
    }

    #[test]
    fn chordality_examples() {
        assert!(!cycle(4).is_chordal());
        assert!(UndirectedGraph::complete(4).is_chordal());
        assert!(cycle(3).is_chordal());
        // C4 plus a chord
        let mut e: Vec<_> = (0..4).map(|i| (i, (i + 1) % 4)).collect();
        e.push((0, 2));
        assert!(UndirectedGraph::new(4, e).unwrap().is_chordal());
    }

    #[test]
    fn clique_sizes() {
        assert_eq!(UndirectedGraph::complete(4).max_clique_size().unwrap(), 4);
        assert_eq!(path(4).max_clique_size().unwrap(), 2);
        assert_eq!(star(5).max_clique_size().unwrap(), 2);
        assert!(matches!(cycle(5).max_clique_size(), Err(Error::NotChordal)));
        assert_eq!(cycle(5).clique_number(), 2);
        assert_eq!(UndirectedGraph::complete(6).clique_number(), 6);
    }

    #[test]
    fn maximal_cliques_of_path() {
        assert_eq!(
            path(4).maximal_cliques().unwrap(),
            vec![vec![0, 1], vec![1, 2], vec![2, 3]]
        );
    }

    #[test]
    fn separator_of_complete_graph_is_everything() {
        let sep = clique_separator(&UndirectedGraph::complete(4), Fraction::HALF).unwrap();
        assert_eq!(sep.clique, vec![0, 1, 2, 3]);
        assert!(sep.components.is_empty());
    }

    #[test]
    fn separator_of_path_is_an_inner_vertex() {
        let g = path(4);
        let sep = clique_separator(&g, Fraction::HALF).unwrap();
        // exhaustive check: every single inner vertex is a valid 1/2-separator,
        // the endpoints are not
        for v in 0..4 {
            let ok = g.components_without(&[v]).iter().all(|c| c.len() <= 2);
            assert_eq!(ok, v == 1 || v == 2);
        }
        assert!(sep.clique == vec![1] || sep.clique == vec![2]);
        let mut sizes: Vec<_> = sep.components.iter().map(Vec::len).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2]);
    }

    #[test]
    fn separator_of_star_is_center() {
        let sep = clique_separator(&star(4), Fraction::HALF).unwrap();
        assert_eq!(sep.clique, vec![0]);
        assert_eq!(sep.components, vec![vec![1], vec![2], vec![3], vec![4]]);
    }

    #[test]
    fn separator_errors() {
        assert!(matches!(
            clique_separator(&cycle(4), Fraction::HALF),
            Err(Error::NotChordal)
        ));
        let two = UndirectedGraph::new(2, []).unwrap();
        assert!(matches!(
            clique_separator(&two, Fraction::HALF),
            Err(Error::Disconnected)
        ));
        let one = UndirectedGraph::new(1, []).unwrap();
        assert_eq!(clique_separator(&one, Fraction::HALF).unwrap().clique, vec![0]);
    }
}
