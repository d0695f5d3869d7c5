//! Connections over a base graph and the twisted product graphs they induce.
//!
//! A connection assigns to every oriented base edge an automorphism of the
//! fiber graph, with reverse orientations forced to carry inverse
//! permutations. The induced total graph ("bundle") has vertex set
//! `base x fiber`; two vertices are adjacent when they sit in the same fiber
//! copy over adjacent fiber vertices, or over adjacent base vertices with the
//! fiber coordinate transported by the edge's permutation.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::perm::Permutation;
use std::collections::{BTreeMap, BTreeSet};

/// An automorphism-valued twist on every oriented edge of a base graph.
///
/// Twists are stored on the orientation `low -> high` only; the reverse
/// direction is synthesized as the inverse, so inverse-consistency cannot be
/// violated. Identity twists are not stored, which also makes equality of
/// connections structural.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Connection {
    base: Graph,
    fiber: Graph,
    twists: BTreeMap<(usize, usize), Permutation>,
}

/// Outcome of deciding whether every loop of the base is balanced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Triviality {
    /// Every loop is balanced. `vertex_maps[y]` conjugates the fiber over `y`
    /// back to the untwisted product; it is the accumulated transport along
    /// the spanning-tree path from vertex 0.
    Trivial { vertex_maps: Vec<Permutation> },
    /// Some loop has non-identity holonomy; `witness` is an unbalanced
    /// fundamental cycle of the spanning tree rooted at vertex 0.
    NonTrivial { witness: Vec<usize> },
}

impl Triviality {
    pub fn is_trivial(&self) -> bool {
        matches!(self, Triviality::Trivial { .. })
    }
}

impl Connection {
    /// The untwisted connection: identity on every edge.
    pub fn identity(base: Graph, fiber: Graph) -> Result<Self> {
        Connection::new(base, fiber, Vec::new())
    }

    /// Builds a connection from twist assignments on oriented edges.
    ///
    /// Both graphs must be connected and non-empty. Each assignment must sit
    /// on an existing base edge and be an automorphism of the fiber; listing
    /// both orientations of an edge is allowed only when the two permutations
    /// are mutually inverse.
    pub fn new(
        base: Graph,
        fiber: Graph,
        assignments: Vec<((usize, usize), Permutation)>,
    ) -> Result<Self> {
        if !base.is_connected() || !fiber.is_connected() {
            return Err(Error::Disconnected);
        }
        let mut twists: BTreeMap<(usize, usize), Permutation> = BTreeMap::new();
        for ((tail, head), perm) in assignments {
            if !base.has_edge(tail, head) {
                return Err(Error::ConnectionInvalid {
                    tail,
                    head,
                    reason: "not an edge of the base graph".into(),
                });
            }
            if perm.degree() != fiber.vertex_count() {
                return Err(Error::ConnectionInvalid {
                    tail,
                    head,
                    reason: format!(
                        "permutation degree {} does not match fiber size {}",
                        perm.degree(),
                        fiber.vertex_count()
                    ),
                });
            }
            if !is_graph_automorphism(&fiber, &perm) {
                return Err(Error::ConnectionInvalid {
                    tail,
                    head,
                    reason: "permutation is not an automorphism of the fiber".into(),
                });
            }
            // Canonical storage: transport along low -> high.
            let (key, canonical) = if tail < head {
                ((tail, head), perm)
            } else {
                ((head, tail), perm.inverse())
            };
            if let Some(existing) = twists.get(&key) {
                if *existing != canonical {
                    return Err(Error::ConnectionInvalid {
                        tail,
                        head,
                        reason: "conflicting assignments for the two orientations".into(),
                    });
                }
            } else if !canonical.is_identity() {
                twists.insert(key, canonical);
            } else {
                // An explicit identity matches the default; check against a
                // possibly conflicting earlier non-identity entry.
                twists.entry(key).or_insert(canonical);
            }
        }
        // Normalize: drop stored identities so equality is structural.
        twists.retain(|_, p| !p.is_identity());
        Ok(Connection {
            base,
            fiber,
            twists,
        })
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn fiber(&self) -> &Graph {
        &self.fiber
    }

    /// Non-identity twists on the stored orientation `(low, high)`.
    pub fn stored_twists(&self) -> &BTreeMap<(usize, usize), Permutation> {
        &self.twists
    }

    /// The permutation transporting fiber coordinates along the step
    /// `from -> to`. A stationary step (`from == to`) transports by the
    /// identity; a non-edge is rejected.
    pub fn transport(&self, from: usize, to: usize) -> Result<Permutation> {
        let n = self.fiber.vertex_count();
        if from == to {
            if from >= self.base.vertex_count() {
                return Err(Error::VertexOutOfRange {
                    vertex: from,
                    n: self.base.vertex_count(),
                });
            }
            return Ok(Permutation::identity(n));
        }
        if !self.base.has_edge(from, to) {
            return Err(Error::InvalidWalk(format!(
                "({from}, {to}) is not an edge of the base graph"
            )));
        }
        let key = (from.min(to), from.max(to));
        match self.twists.get(&key) {
            None => Ok(Permutation::identity(n)),
            Some(p) if from < to => Ok(p.clone()),
            Some(p) => Ok(p.inverse()),
        }
    }

    /// Accumulated transport along a walk in the base. Steps must join equal
    /// or adjacent vertices; the product is taken so that later steps act
    /// after earlier ones.
    pub fn holonomy(&self, walk: &[usize]) -> Result<Permutation> {
        if walk.is_empty() {
            return Err(Error::InvalidWalk("walk must be non-empty".into()));
        }
        for &x in walk {
            if x >= self.base.vertex_count() {
                return Err(Error::VertexOutOfRange {
                    vertex: x,
                    n: self.base.vertex_count(),
                });
            }
        }
        let mut acc = Permutation::identity(self.fiber.vertex_count());
        for step in walk.windows(2) {
            let p = self.transport(step[0], step[1])?;
            acc = p.compose(&acc);
        }
        Ok(acc)
    }

    /// True when the closed walk has identity holonomy.
    pub fn is_balanced(&self, walk: &[usize]) -> Result<bool> {
        if walk.first() != walk.last() {
            return Err(Error::NotClosed);
        }
        Ok(self.holonomy(walk)?.is_identity())
    }

    /// Decides whether every loop of the base is balanced.
    ///
    /// Only the fundamental cycles of a BFS spanning tree rooted at vertex 0
    /// are examined: every loop's holonomy is a product of conjugates of
    /// fundamental-cycle holonomies, so these loops are balanced exactly when
    /// all loops are.
    pub fn triviality(&self) -> Triviality {
        let n = self.base.vertex_count();
        let parent = self.base.bfs_parents(0);
        // Accumulated transport from the root along tree paths.
        let mut to_vertex: Vec<Option<Permutation>> = vec![None; n];
        to_vertex[0] = Some(Permutation::identity(self.fiber.vertex_count()));
        let order = bfs_order(&self.base, 0);
        for &y in order.iter().skip(1) {
            let p = parent[y].expect("connected base");
            let step = self.transport(p, y).expect("tree edge");
            let acc = step.compose(to_vertex[p].as_ref().expect("parent visited first"));
            to_vertex[y] = Some(acc);
        }
        let rho: Vec<Permutation> = to_vertex.into_iter().map(|p| p.expect("connected")).collect();

        for (u, v) in self.base.edges() {
            if parent[v] == Some(u) || parent[u] == Some(v) {
                continue; // tree edge
            }
            let step = self.transport(u, v).expect("edge");
            let around = rho[v].inverse().compose(&step).compose(&rho[u]);
            if !around.is_identity() {
                return Triviality::NonTrivial {
                    witness: fundamental_cycle(&parent, u, v),
                };
            }
        }
        Triviality::Trivial { vertex_maps: rho }
    }

    pub fn is_trivial(&self) -> bool {
        self.triviality().is_trivial()
    }

    /// Fiber vertices fixed by the transport of every edge.
    pub fn null_elements(&self) -> BTreeSet<usize> {
        let mut fixed: BTreeSet<usize> = (0..self.fiber.vertex_count()).collect();
        for perm in self.twists.values() {
            fixed.retain(|&o| perm.apply(o) == o);
        }
        fixed
    }

    /// True when some fiber vertex is fixed by every edge's transport.
    pub fn is_discrete_vector_bundle(&self) -> bool {
        !self.null_elements().is_empty()
    }
}

/// True when `perm` maps edges of `g` onto edges of `g`.
pub fn is_graph_automorphism(g: &Graph, perm: &Permutation) -> bool {
    if perm.degree() != g.vertex_count() {
        return false;
    }
    g.edges()
        .iter()
        .all(|&(u, v)| g.has_edge(perm.apply(u), perm.apply(v)))
}

fn bfs_order(g: &Graph, root: usize) -> Vec<usize> {
    let mut order = Vec::with_capacity(g.vertex_count());
    let mut seen = vec![false; g.vertex_count()];
    let mut queue = std::collections::VecDeque::new();
    seen[root] = true;
    queue.push_back(root);
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for v in g.neighbors(u) {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    order
}

/// The closed walk root -> u (tree path), u -> v, v -> root (tree path).
fn fundamental_cycle(parent: &[Option<usize>], u: usize, v: usize) -> Vec<usize> {
    let path_to_root = |mut x: usize| {
        let mut path = vec![x];
        while let Some(p) = parent[x] {
            path.push(p);
            x = p;
        }
        path
    };
    let mut cycle: Vec<usize> = path_to_root(u).into_iter().rev().collect();
    cycle.extend(path_to_root(v));
    cycle
}

/// The total graph of a connection, with vertex `(x, v)` at index
/// `x * fiber_size + v`.
#[derive(Debug, Clone)]
pub struct Bundle {
    connection: Connection,
    total: Graph,
}

impl Bundle {
    pub fn build(connection: Connection) -> Bundle {
        let nb = connection.base().vertex_count();
        let nf = connection.fiber().vertex_count();
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for x in 0..nb {
            // Fiber copy over x.
            for (v, w) in connection.fiber().edges() {
                edges.push((x * nf + v, x * nf + w));
            }
            // Transported edges to higher-indexed base neighbors; the reverse
            // orientation yields the same undirected edges.
            for y in connection.base().neighbors(x) {
                if y < x {
                    continue;
                }
                let p = connection.transport(x, y).expect("base edge");
                for v in 0..nf {
                    edges.push((x * nf + v, y * nf + p.apply(v)));
                }
            }
        }
        let mut total = Graph::from_edges(nb * nf, &edges).expect("edge rule yields a simple graph");
        for x in 0..nb {
            for v in 0..nf {
                total.set_label(x * nf + v, format!("({x},{v})"));
            }
        }
        Bundle { connection, total }
    }

    /// The untwisted product of two graphs.
    pub fn cartesian_product(base: Graph, fiber: Graph) -> Result<Bundle> {
        Ok(Bundle::build(Connection::identity(base, fiber)?))
    }

    pub fn connection(&self) -> &Connection {
        &self.connection
    }

    pub fn base(&self) -> &Graph {
        self.connection.base()
    }

    pub fn fiber(&self) -> &Graph {
        self.connection.fiber()
    }

    pub fn total(&self) -> &Graph {
        &self.total
    }

    pub fn vertex_index(&self, x: usize, v: usize) -> usize {
        x * self.fiber().vertex_count() + v
    }

    pub fn vertex_pair(&self, index: usize) -> (usize, usize) {
        let nf = self.fiber().vertex_count();
        (index / nf, index % nf)
    }

    /// The image of the base under `x -> (x, o)` for a null element `o`.
    pub fn null_section(&self, o: usize) -> Result<Vec<usize>> {
        if !self.connection.null_elements().contains(&o) {
            return Err(Error::InvalidParameter(format!(
                "fiber vertex {o} is not fixed by every edge transport"
            )));
        }
        Ok((0..self.base().vertex_count())
            .map(|x| self.vertex_index(x, o))
            .collect())
    }

    /// For a trivial connection, the vertex bijection from the untwisted
    /// product onto this bundle's total graph, verified edge-preserving in
    /// both directions. Product and bundle share the `(x, v)` indexing.
    pub fn trivialization(&self) -> Result<Vec<usize>> {
        let rho = match self.connection.triviality() {
            Triviality::Trivial { vertex_maps } => vertex_maps,
            Triviality::NonTrivial { witness } => {
                return Err(Error::Hypothesis(format!(
                    "connection is not trivial; unbalanced loop {witness:?}"
                )))
            }
        };
        let product = Bundle::cartesian_product(self.base().clone(), self.fiber().clone())?;
        let nf = self.fiber().vertex_count();
        let map: Vec<usize> = (0..self.total.vertex_count())
            .map(|idx| {
                let (y, v) = (idx / nf, idx % nf);
                self.vertex_index(y, rho[y].apply(v))
            })
            .collect();
        // Bijection plus two-way edge preservation.
        let mut seen = vec![false; map.len()];
        for &t in &map {
            if seen[t] {
                return Err(Error::Internal("trivialization is not a bijection".into()));
            }
            seen[t] = true;
        }
        for (a, b) in product.total().edges() {
            if !self.total.has_edge(map[a], map[b]) {
                return Err(Error::Internal(format!(
                    "trivialization does not preserve product edge ({a}, {b})"
                )));
            }
        }
        if product.total().edge_count() != self.total.edge_count() {
            return Err(Error::Internal(
                "product and bundle disagree on edge count".into(),
            ));
        }
        Ok(map)
    }
}

/// Searches for a vertex-wise change of fiber coordinates turning `a` into
/// `b`: maps `g_y` with `g_y . transport_a(x -> y) = transport_b(x -> y) . g_x`
/// on every oriented edge.
///
/// Candidate maps at the root are the fiber's automorphisms (enumerated via
/// the symmetry machinery, capped by `group_cap`); the rest of each candidate
/// is forced along a spanning tree and checked on the remaining edges.
pub fn connections_equivalent(
    a: &Connection,
    b: &Connection,
    group_cap: u64,
) -> Result<Option<Vec<Permutation>>> {
    if !a.base().same_adjacency(b.base()) || !a.fiber().same_adjacency(b.fiber()) {
        return Err(Error::InvalidParameter(
            "connections live over different base or fiber graphs".into(),
        ));
    }
    let auts = crate::symmetry::automorphism_group(a.fiber())?;
    let elements = crate::symmetry::enumerate_group(
        &auts.generators,
        a.fiber().vertex_count(),
        group_cap,
    )?;

    let base = a.base();
    let parent = base.bfs_parents(0);
    let order = bfs_order(base, 0);
    for g_root in &elements {
        let mut gauge: Vec<Option<Permutation>> = vec![None; base.vertex_count()];
        gauge[0] = Some(g_root.clone());
        for &y in order.iter().skip(1) {
            let p = parent[y].expect("connected base");
            let ta = a.transport(p, y).expect("edge");
            let tb = b.transport(p, y).expect("edge");
            // g_y = tb . g_p . ta^{-1}
            let g_y = tb
                .compose(gauge[p].as_ref().expect("parent visited"))
                .compose(&ta.inverse());
            gauge[y] = Some(g_y);
        }
        let gauge: Vec<Permutation> = gauge.into_iter().map(|g| g.expect("connected")).collect();
        let ok = base.edges().iter().all(|&(u, v)| {
            let ta = a.transport(u, v).expect("edge");
            let tb = b.transport(u, v).expect("edge");
            gauge[v].compose(&ta) == tb.compose(&gauge[u])
        });
        if ok {
            return Ok(Some(gauge));
        }
    }
    Ok(None)
}
