//! Finite simple undirected graphs with dense `usize` vertex ids.
//!
//! The adjacency representation is a sorted neighbor set per vertex, so a
//! constructed graph is simple and symmetric by construction; `validate`
//! re-checks those properties anyway and reports connectivity and regularity.

use crate::error::{Error, Result};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// An edge with a chosen direction of traversal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrientedEdge {
    pub tail: usize,
    pub head: usize,
}

impl OrientedEdge {
    pub fn new(tail: usize, head: usize) -> Self {
        OrientedEdge { tail, head }
    }

    pub fn reversed(&self) -> Self {
        OrientedEdge {
            tail: self.head,
            head: self.tail,
        }
    }
}

impl From<(usize, usize)> for OrientedEdge {
    fn from((tail, head): (usize, usize)) -> Self {
        OrientedEdge { tail, head }
    }
}

impl std::fmt::Display for OrientedEdge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.tail, self.head)
    }
}

/// Findings of a structural scan of a graph.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct ValidationReport {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub simple: bool,
    pub symmetric: bool,
    pub connected: bool,
    /// Common degree if the graph is regular.
    pub regular_degree: Option<usize>,
}

/// A finite simple undirected graph with optional display labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<BTreeSet<usize>>,
    labels: BTreeMap<usize, String>,
}

impl Graph {
    /// A graph on `n` vertices with the given undirected edges.
    ///
    /// Self-loops and out-of-range endpoints are rejected; repeated edges
    /// collapse into one since neighborhoods are sets.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adjacency = vec![BTreeSet::new(); n];
        for &(u, v) in edges {
            if u >= n {
                return Err(Error::VertexOutOfRange { vertex: u, n });
            }
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adjacency[u].insert(v);
            adjacency[v].insert(u);
        }
        Ok(Graph {
            adjacency,
            labels: BTreeMap::new(),
        })
    }

    /// The cycle on `n >= 3` vertices, vertex `i` adjacent to `i +- 1 mod n`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameter(format!(
                "cycle graph needs at least 3 vertices, got {n}"
            )));
        }
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges)
    }

    /// The complete graph on `m >= 2` vertices.
    pub fn complete(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidParameter(format!(
                "complete graph needs at least 2 vertices, got {m}"
            )));
        }
        let mut edges = Vec::new();
        for u in 0..m {
            for v in (u + 1)..m {
                edges.push((u, v));
            }
        }
        Graph::from_edges(m, &edges)
    }

    /// The Cayley graph of a product of cyclic groups `Z/n1 x .. x Z/nk`
    /// with the given generators.
    ///
    /// Group elements are tuples ordered lexicographically; two elements are
    /// adjacent when their difference or its negative is a generator, so the
    /// generating set is symmetrized automatically. The identity is rejected
    /// as a generator (it would create self-loops) and a generating set that
    /// does not generate the whole group is rejected as disconnected.
    pub fn cayley(orders: &[usize], generators: &[Vec<i64>]) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::InvalidParameter(
                "cayley graph needs at least one cyclic factor".into(),
            ));
        }
        if orders.contains(&0) {
            return Err(Error::InvalidParameter(
                "cyclic factor orders must be positive".into(),
            ));
        }
        let k = orders.len();
        let n: usize = orders.iter().product();
        let mut reduced: Vec<Vec<usize>> = Vec::new();
        for (gi, g) in generators.iter().enumerate() {
            if g.len() != k {
                return Err(Error::InvalidParameter(format!(
                    "generator {gi} has {} coordinates, expected {k}",
                    g.len()
                )));
            }
            let r: Vec<usize> = g
                .iter()
                .zip(orders)
                .map(|(&c, &m)| c.rem_euclid(m as i64) as usize)
                .collect();
            // An identity generator would put a loop at every vertex.
            if r.iter().all(|&c| c == 0) {
                return Err(Error::SelfLoop(0));
            }
            reduced.push(r);
        }

        let index_of = |coords: &[usize]| -> usize {
            coords
                .iter()
                .zip(orders)
                .fold(0usize, |acc, (&c, &m)| acc * m + c)
        };
        let coords_of = |mut idx: usize| -> Vec<usize> {
            let mut coords = vec![0; k];
            for pos in (0..k).rev() {
                coords[pos] = idx % orders[pos];
                idx /= orders[pos];
            }
            coords
        };

        let mut edges = Vec::new();
        for idx in 0..n {
            let coords = coords_of(idx);
            for g in &reduced {
                let shifted: Vec<usize> = coords
                    .iter()
                    .zip(g)
                    .zip(orders)
                    .map(|((&c, &s), &m)| (c + s) % m)
                    .collect();
                edges.push((idx, index_of(&shifted)));
            }
        }
        let mut graph = Graph::from_edges(n, &edges)?;
        if !graph.is_connected() {
            return Err(Error::Disconnected);
        }
        for idx in 0..n {
            let coords = coords_of(idx);
            let label = format!(
                "({})",
                coords
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            );
            graph.set_label(idx, label);
        }
        Ok(graph)
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.adjacency.len() && self.adjacency[u].contains(&v)
    }

    /// Neighbors of `v` in ascending order.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[v].iter().copied()
    }

    pub fn neighbor_set(&self, v: usize) -> &BTreeSet<usize> {
        &self.adjacency[v]
    }

    /// Undirected edges as `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, nbrs) in self.adjacency.iter().enumerate() {
            for &v in nbrs.iter() {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Both orientations of every edge, ascending by `(tail, head)`.
    pub fn oriented_edges(&self) -> Vec<OrientedEdge> {
        let mut out = Vec::with_capacity(2 * self.edge_count());
        for (u, nbrs) in self.adjacency.iter().enumerate() {
            for &v in nbrs.iter() {
                out.push(OrientedEdge::new(u, v));
            }
        }
        out
    }

    pub fn set_label(&mut self, v: usize, label: String) {
        self.labels.insert(v, label);
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels.get(&v).map(|s| s.as_str())
    }

    pub fn labels(&self) -> &BTreeMap<usize, String> {
        &self.labels
    }

    /// True when the two graphs have the same vertex count and edge set,
    /// ignoring labels.
    pub fn same_adjacency(&self, other: &Graph) -> bool {
        self.adjacency == other.adjacency
    }

    /// BFS parents from `root`; `parent[root] = None`, unreached vertices are
    /// also `None`. Neighbors are visited in ascending order.
    pub fn bfs_parents(&self, root: usize) -> Vec<Option<usize>> {
        let n = self.vertex_count();
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        seen[root] = true;
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            for v in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some(u);
                    queue.push_back(v);
                }
            }
        }
        parent
    }

    /// BFS distances from `root`; unreached vertices get `usize::MAX`.
    pub fn distances(&self, root: usize) -> Vec<usize> {
        let n = self.vertex_count();
        let mut dist = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        dist[root] = 0;
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            for v in self.neighbors(u) {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return false;
        }
        self.distances(0).iter().all(|&d| d != usize::MAX)
    }

    /// Structural scan: simplicity, symmetry, connectivity, regularity.
    pub fn validate(&self) -> ValidationReport {
        let n = self.vertex_count();
        let mut simple = true;
        let mut symmetric = true;
        for (u, nbrs) in self.adjacency.iter().enumerate() {
            if nbrs.contains(&u) {
                simple = false;
            }
            for &v in nbrs.iter() {
                if v >= n || !self.adjacency[v].contains(&u) {
                    symmetric = false;
                }
            }
        }
        let regular_degree = if n == 0 {
            None
        } else {
            let d = self.degree(0);
            if (1..n).all(|v| self.degree(v) == d) {
                Some(d)
            } else {
                None
            }
        };
        ValidationReport {
            vertex_count: n,
            edge_count: self.edge_count(),
            simple,
            symmetric,
            connected: self.is_connected(),
            regular_degree,
        }
    }

    /// The translation maps of a Cayley-style vertex set: for graphs built by
    /// `cayley`, returns the vertex permutation `h -> h + g` for each group
    /// element `g`, all verified edge-preserving.
    pub fn cayley_translations(orders: &[usize], graph: &Graph) -> Result<Vec<crate::perm::Permutation>> {
        let n: usize = orders.iter().product();
        if n != graph.vertex_count() {
            return Err(Error::InvalidParameter(
                "orders do not match the graph's vertex count".into(),
            ));
        }
        let k = orders.len();
        let coords_of = |mut idx: usize| -> Vec<usize> {
            let mut coords = vec![0; k];
            for pos in (0..k).rev() {
                coords[pos] = idx % orders[pos];
                idx /= orders[pos];
            }
            coords
        };
        let index_of = |coords: &[usize]| -> usize {
            coords
                .iter()
                .zip(orders)
                .fold(0usize, |acc, (&c, &m)| acc * m + c)
        };
        let mut out = Vec::with_capacity(n);
        for g in 0..n {
            let gc = coords_of(g);
            let image: Vec<usize> = (0..n)
                .map(|h| {
                    let hc = coords_of(h);
                    let sum: Vec<usize> = hc
                        .iter()
                        .zip(&gc)
                        .zip(orders)
                        .map(|((&a, &b), &m)| (a + b) % m)
                        .collect();
                    index_of(&sum)
                })
                .collect();
            let p = crate::perm::Permutation::from_image(image)?;
            for (u, v) in graph.edges() {
                if !graph.has_edge(p.apply(u), p.apply(v)) {
                    return Err(Error::Internal(format!(
                        "translation by element {g} does not preserve edge ({u}, {v})"
                    )));
                }
            }
            out.push(p);
        }
        Ok(out)
    }
}
