//! Walks and closed walks, their projections onto base and fiber, exact
//! closed-walk counting, and the shortest-unbalanced-loop statistic that
//! separates a twisted bundle from the untwisted product.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::bundle::{Bundle, Connection};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::perm::Permutation;

/// Hard ceiling on the number of interleavings
/// [`count_walks_with_projections`] will enumerate.
pub const INTERLEAVING_CAP: u64 = 10_000_000;

/// Default ceiling on visited states in [`shortest_unbalanced_loop`].
pub const DEFAULT_STATE_CAP: usize = 1_000_000;

/// A walk: consecutive vertices are adjacent, so no vertex repeats
/// immediately, but revisits further apart are allowed. A walk whose first
/// and last vertices coincide is a loop; single-vertex walks have length 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Path {
    vertices: Vec<usize>,
}

impl Path {
    /// Validates a vertex sequence as a walk in `g`.
    pub fn new(g: &Graph, vertices: Vec<usize>) -> Result<Path> {
        if vertices.is_empty() {
            return Err(Error::InvalidWalk(
                "a walk needs at least one vertex".into(),
            ));
        }
        for &v in &vertices {
            if v >= g.vertex_count() {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    n: g.vertex_count(),
                });
            }
        }
        for step in vertices.windows(2) {
            if !g.has_edge(step[0], step[1]) {
                return Err(Error::InvalidWalk(format!(
                    "consecutive vertices {} and {} are not adjacent",
                    step[0], step[1]
                )));
            }
        }
        Ok(Path { vertices })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Number of edges traversed.
    pub fn length(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn start(&self) -> usize {
        self.vertices[0]
    }

    pub fn end(&self) -> usize {
        *self.vertices.last().expect("walks are non-empty")
    }

    pub fn is_loop(&self) -> bool {
        self.start() == self.end()
    }
}

/// The two shadows of a walk in a product or bundle: the base part records
/// the distinct base vertices visited, the fiber part the distinct fiber
/// positions. The two lengths always add up to the original walk length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProjectionPair {
    pub base_part: Path,
    pub fiber_part: Path,
}

fn dedup_consecutive(seq: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(seq.len());
    for &v in seq {
        if out.last() != Some(&v) {
            out.push(v);
        }
    }
    out
}

/// Splits a walk in the Cartesian product of `g` and `f` into its base and
/// fiber parts. Every step of a product walk moves exactly one coordinate;
/// each part keeps the vertices of its own coordinate with consecutive
/// repeats collapsed.
pub fn project_product(g: &Graph, f: &Graph, walk: &Path) -> Result<ProjectionPair> {
    let nf = f.vertex_count();
    let n_total = g.vertex_count() * nf;
    let pairs: Vec<(usize, usize)> = walk
        .vertices()
        .iter()
        .map(|&idx| {
            if idx >= n_total {
                return Err(Error::VertexOutOfRange {
                    vertex: idx,
                    n: n_total,
                });
            }
            Ok((idx / nf, idx % nf))
        })
        .collect::<Result<_>>()?;
    for w in pairs.windows(2) {
        let ((x, v), (y, u)) = (w[0], w[1]);
        let base_step = x != y && v == u && g.has_edge(x, y);
        let fiber_step = x == y && f.has_edge(v, u);
        if !base_step && !fiber_step {
            return Err(Error::InvalidWalk(format!(
                "({x},{v}) to ({y},{u}) is not a product step"
            )));
        }
    }
    let base_vertices = dedup_consecutive(&pairs.iter().map(|p| p.0).collect::<Vec<_>>());
    let fiber_vertices = dedup_consecutive(&pairs.iter().map(|p| p.1).collect::<Vec<_>>());
    finish_projection(g, f, walk.length(), base_vertices, fiber_vertices)
}

/// Splits a walk in the total graph of `b` into its base and fiber parts.
///
/// The base part collapses repeats as in the product case. For the fiber
/// part each visited fiber position is first pulled back through the inverse
/// of the transport accumulated along the base steps so far, so that base
/// steps hold the pulled-back position fixed and fiber steps move it along a
/// fiber edge. For a closed walk the fiber part joins the starting position
/// to its image under the inverse holonomy of the base part, hence is a loop
/// exactly when that holonomy fixes the starting position — in particular
/// whenever the base part is balanced or the walk starts over a fiber point
/// fixed by every transport.
pub fn project_bundle(b: &Bundle, walk: &Path) -> Result<ProjectionPair> {
    let c = b.connection();
    let n_total = b.total().vertex_count();
    for &idx in walk.vertices() {
        if idx >= n_total {
            return Err(Error::VertexOutOfRange {
                vertex: idx,
                n: n_total,
            });
        }
    }
    for w in walk.vertices().windows(2) {
        if !b.total().has_edge(w[0], w[1]) {
            return Err(Error::InvalidWalk(format!(
                "vertices {} and {} are not adjacent in the bundle",
                w[0], w[1]
            )));
        }
    }
    let mut base_seq = Vec::with_capacity(walk.vertices().len());
    let mut pulled = Vec::with_capacity(walk.vertices().len());
    let mut acc = Permutation::identity(c.fiber().vertex_count());
    let (x0, v0) = b.vertex_pair(walk.vertices()[0]);
    base_seq.push(x0);
    pulled.push(v0);
    for w in walk.vertices().windows(2) {
        let (x, _) = b.vertex_pair(w[0]);
        let (y, u) = b.vertex_pair(w[1]);
        if x != y {
            acc = c.transport(x, y)?.compose(&acc);
        }
        base_seq.push(y);
        pulled.push(acc.inverse().apply(u));
    }
    let base_vertices = dedup_consecutive(&base_seq);
    let fiber_vertices = dedup_consecutive(&pulled);
    finish_projection(c.base(), c.fiber(), walk.length(), base_vertices, fiber_vertices)
}

fn finish_projection(
    g: &Graph,
    f: &Graph,
    walk_length: usize,
    base_vertices: Vec<usize>,
    fiber_vertices: Vec<usize>,
) -> Result<ProjectionPair> {
    let base_part = Path::new(g, base_vertices)
        .map_err(|e| Error::Internal(format!("projected base part is not a walk: {e}")))?;
    let fiber_part = Path::new(f, fiber_vertices)
        .map_err(|e| Error::Internal(format!("projected fiber part is not a walk: {e}")))?;
    if base_part.length() + fiber_part.length() != walk_length {
        return Err(Error::Internal(
            "projection lengths do not add up to the walk length".into(),
        ));
    }
    Ok(ProjectionPair {
        base_part,
        fiber_part,
    })
}

/// Number of closed walks of the given length based at `v`, computed by
/// repeatedly applying the adjacency operator to the indicator vector of `v`
/// with exact big-integer arithmetic.
pub fn closed_walk_count(g: &Graph, v: usize, length: usize) -> Result<BigUint> {
    if v >= g.vertex_count() {
        return Err(Error::VertexOutOfRange {
            vertex: v,
            n: g.vertex_count(),
        });
    }
    let mut current = vec![BigUint::zero(); g.vertex_count()];
    current[v] = BigUint::one();
    for _ in 0..length {
        let mut next = vec![BigUint::zero(); g.vertex_count()];
        for (u, slot) in next.iter_mut().enumerate() {
            for w in g.neighbors(u) {
                *slot += &current[w];
            }
        }
        current = next;
    }
    Ok(current[v].clone())
}

/// Closed-walk counts of one length at every vertex.
pub fn closed_walk_counts(g: &Graph, length: usize) -> Vec<BigUint> {
    (0..g.vertex_count())
        .map(|v| closed_walk_count(g, v, length).expect("vertex in range"))
        .collect()
}

/// Exact binomial coefficient; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut result = BigUint::one();
    for i in 0..k {
        result = result * BigUint::from(n - k + 1 + i) / BigUint::from(i + 1);
    }
    result
}

/// Counts the walks from `start` whose projections are exactly the given
/// base loop and fiber path, by enumerating every interleaving of the two
/// step sequences and replaying it in the total graph.
///
/// The base loop must be closed at the base coordinate of `start`, and the
/// fiber path must lead from the fiber coordinate of `start` to its image
/// under the inverse holonomy of the base loop; both are checked. Each
/// replayed walk is verified edge by edge and through [`project_bundle`],
/// and distinct walks are counted once. The result is expected to equal
/// `binomial(|base| + |fiber|, |fiber|)`; callers that rely on that identity
/// should assert it, as [`lemma_projection_sweep`] does.
pub fn count_walks_with_projections(
    b: &Bundle,
    start: (usize, usize),
    base_loop: &Path,
    fiber_path: &Path,
) -> Result<BigUint> {
    let c = b.connection();
    let (x0, v0) = start;
    if x0 >= c.base().vertex_count() {
        return Err(Error::VertexOutOfRange {
            vertex: x0,
            n: c.base().vertex_count(),
        });
    }
    if v0 >= c.fiber().vertex_count() {
        return Err(Error::VertexOutOfRange {
            vertex: v0,
            n: c.fiber().vertex_count(),
        });
    }
    // Re-validate both parts against the graphs they must live in.
    let base_loop = Path::new(c.base(), base_loop.vertices().to_vec())?;
    let fiber_path = Path::new(c.fiber(), fiber_path.vertices().to_vec())?;
    if !base_loop.is_loop() || base_loop.start() != x0 {
        return Err(Error::Hypothesis(format!(
            "the base part must be a loop based at {x0}"
        )));
    }
    let holonomy = c.holonomy(base_loop.vertices())?;
    let expected_end = holonomy.inverse().apply(v0);
    if fiber_path.start() != v0 || fiber_path.end() != expected_end {
        return Err(Error::Hypothesis(format!(
            "the fiber part must lead from {v0} to {expected_end}, the \
             pull-back of {v0} through the base loop"
        )));
    }
    let n1 = base_loop.length();
    let n2 = fiber_path.length();
    let total = (n1 + n2) as u64;
    if binomial(total, n2 as u64) > BigUint::from(INTERLEAVING_CAP) {
        return Err(Error::ResourceCap {
            cap: "projection interleavings",
            limit: INTERLEAVING_CAP,
        });
    }
    let base_steps: Vec<Permutation> = base_loop
        .vertices()
        .windows(2)
        .map(|w| c.transport(w[0], w[1]))
        .collect::<Result<_>>()?;
    let mut walks: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut prefix = vec![b.vertex_index(x0, v0)];
    let acc = Permutation::identity(c.fiber().vertex_count());
    interleave(
        b,
        &base_loop,
        &fiber_path,
        &base_steps,
        0,
        0,
        (x0, v0),
        &acc,
        &mut prefix,
        &mut walks,
    )?;
    // Every enumerated walk must project back onto the exact pair.
    for walk in &walks {
        let path = Path::new(b.total(), walk.clone())?;
        let pair = project_bundle(b, &path)?;
        if pair.base_part != base_loop || pair.fiber_part != fiber_path {
            return Err(Error::Internal(
                "an interleaved walk projects onto the wrong pair".into(),
            ));
        }
    }
    Ok(BigUint::from(walks.len() as u64))
}

#[allow(clippy::too_many_arguments)]
fn interleave(
    b: &Bundle,
    base_loop: &Path,
    fiber_path: &Path,
    base_steps: &[Permutation],
    i1: usize,
    i2: usize,
    state: (usize, usize),
    acc: &Permutation,
    prefix: &mut Vec<usize>,
    walks: &mut BTreeSet<Vec<usize>>,
) -> Result<()> {
    let (x, v) = state;
    if i1 == base_steps.len() && i2 == fiber_path.length() {
        walks.insert(prefix.clone());
        return Ok(());
    }
    let push_step = |next_x: usize, next_v: usize| -> Result<usize> {
        let here = b.vertex_index(x, v);
        let next = b.vertex_index(next_x, next_v);
        if !b.total().has_edge(here, next) {
            return Err(Error::Internal(
                "an interleaved step left the edge set of the bundle".into(),
            ));
        }
        Ok(next)
    };
    if i1 < base_steps.len() {
        let next_x = base_loop.vertices()[i1 + 1];
        let next_v = base_steps[i1].apply(v);
        let next = push_step(next_x, next_v)?;
        prefix.push(next);
        let next_acc = base_steps[i1].compose(acc);
        interleave(
            b,
            base_loop,
            fiber_path,
            base_steps,
            i1 + 1,
            i2,
            (next_x, next_v),
            &next_acc,
            prefix,
            walks,
        )?;
        prefix.pop();
    }
    if i2 < fiber_path.length() {
        let next_v = acc.apply(fiber_path.vertices()[i2 + 1]);
        let next = push_step(x, next_v)?;
        prefix.push(next);
        interleave(
            b,
            base_loop,
            fiber_path,
            base_steps,
            i1,
            i2 + 1,
            (x, next_v),
            acc,
            prefix,
            walks,
        )?;
        prefix.pop();
    }
    Ok(())
}

/// A shortest loop with non-identity transport, found by
/// [`shortest_unbalanced_loop`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnbalancedLoop {
    pub length: usize,
    pub vertices: Vec<usize>,
    pub holonomy: Permutation,
}

/// Length of and witness for the shortest unbalanced loop based at `s`, or
/// `None` when the connection is trivial, using the default state budget.
pub fn shortest_unbalanced_loop(c: &Connection, s: usize) -> Result<Option<UnbalancedLoop>> {
    shortest_unbalanced_loop_with_cap(c, s, DEFAULT_STATE_CAP)
}

/// As [`shortest_unbalanced_loop`], with an explicit cap on the number of
/// `(vertex, accumulated transport)` states explored.
///
/// Breadth-first search over such states, taking neighbors in ascending
/// order, so the returned witness is deterministic. The first arrival back
/// at `s` with a non-identity transport is a shortest unbalanced loop; if
/// the state space is exhausted, every loop through `s` is balanced, which
/// for a connected base means the connection is trivial.
pub fn shortest_unbalanced_loop_with_cap(
    c: &Connection,
    s: usize,
    state_cap: usize,
) -> Result<Option<UnbalancedLoop>> {
    if s >= c.base().vertex_count() {
        return Err(Error::VertexOutOfRange {
            vertex: s,
            n: c.base().vertex_count(),
        });
    }
    struct Node {
        vertex: usize,
        transport: Permutation,
        parent: Option<usize>,
    }
    let identity = Permutation::identity(c.fiber().vertex_count());
    let mut nodes = vec![Node {
        vertex: s,
        transport: identity.clone(),
        parent: None,
    }];
    let mut seen: HashSet<(usize, Permutation)> = HashSet::new();
    seen.insert((s, identity));
    let mut queue: VecDeque<usize> = VecDeque::new();
    queue.push_back(0);
    while let Some(index) = queue.pop_front() {
        let x = nodes[index].vertex;
        for y in c.base().neighbors(x).collect::<Vec<_>>() {
            let stepped = c.transport(x, y)?.compose(&nodes[index].transport);
            if y == s && !stepped.is_identity() {
                let mut vertices = Vec::new();
                let mut cursor = Some(index);
                while let Some(i) = cursor {
                    vertices.push(nodes[i].vertex);
                    cursor = nodes[i].parent;
                }
                vertices.reverse();
                vertices.push(s);
                return Ok(Some(UnbalancedLoop {
                    length: vertices.len() - 1,
                    vertices,
                    holonomy: stepped,
                }));
            }
            let key = (y, stepped);
            if seen.contains(&key) {
                continue;
            }
            if nodes.len() >= state_cap {
                return Err(Error::ResourceCap {
                    cap: "holonomy search states",
                    limit: state_cap as u64,
                });
            }
            nodes.push(Node {
                vertex: y,
                transport: key.1.clone(),
                parent: Some(index),
            });
            queue.push_back(nodes.len() - 1);
            seen.insert(key);
        }
    }
    Ok(None)
}

/// Shortest unbalanced loop over all base points.
#[derive(Debug, Clone, Serialize)]
pub struct GlobalUnbalanced {
    /// Smallest base vertex attaining the minimum length.
    pub base_vertex: usize,
    /// Witness loop based at that vertex.
    pub witness: UnbalancedLoop,
    /// Shortest unbalanced length at every base vertex.
    pub per_start: Vec<usize>,
}

/// Minimizes [`shortest_unbalanced_loop`] over all base vertices; `None`
/// exactly when the connection is trivial.
pub fn global_shortest_unbalanced(c: &Connection) -> Result<Option<GlobalUnbalanced>> {
    let mut loops = Vec::with_capacity(c.base().vertex_count());
    for s in 0..c.base().vertex_count() {
        match shortest_unbalanced_loop(c, s)? {
            Some(found) => loops.push(found),
            // Unbalanced loops conjugate from one base point to any other,
            // so one balanced start settles all of them.
            None => return Ok(None),
        }
    }
    let base_vertex = (0..loops.len())
        .min_by_key(|&s| loops[s].length)
        .expect("base graphs are non-empty");
    let per_start = loops.iter().map(|l| l.length).collect();
    Ok(Some(GlobalUnbalanced {
        base_vertex,
        witness: loops.swap_remove(base_vertex),
        per_start,
    }))
}

/// Exact walk count, serialized as a decimal string so arbitrarily large
/// values survive JSON.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Count(pub BigUint);

impl Serialize for Count {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0.to_string())
    }
}

impl std::fmt::Display for Count {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Closed-walk-count comparison between a bundle and the matching untwisted
/// product, taken at the length of the shortest unbalanced loop.
///
/// `base_vertex` and `shortest_unbalanced_length` locate that loop,
/// `fiber_vertex` is the smallest fiber position its transport moves, and
/// the counts compare the bundle against the product at the distinguished
/// vertex. When the connection has elements fixed by every twist, the count
/// over the smallest such element is reported as well: it must differ from
/// the count at the moved position, which rules out vertex-transitivity.
#[derive(Debug, Clone, Serialize)]
pub struct SeparationReport {
    pub base_vertex: usize,
    pub fiber_vertex: usize,
    pub shortest_unbalanced_length: usize,
    pub witness_loop: Vec<usize>,
    pub witness_holonomy: Permutation,
    pub per_start_shortest: Vec<usize>,
    pub bundle_counts: Vec<Count>,
    pub product_counts: Vec<Count>,
    pub bundle_count_at_witness: Count,
    pub product_count_at_witness: Count,
    pub product_strictly_greater: bool,
    pub null_element: Option<usize>,
    pub count_at_null: Option<Count>,
    pub null_differs: Option<bool>,
}

/// Builds the closed-walk-count separation between `b` and the untwisted
/// product of its base and fiber. Fails on trivial connections, which the
/// argument cannot separate. Whether base and fiber are vertex-transitive
/// (the hypothesis under which the comparison proves non-isomorphism) is for
/// the caller to check.
pub fn separation_report(b: &Bundle) -> Result<SeparationReport> {
    let c = b.connection();
    let global = global_shortest_unbalanced(c)?.ok_or_else(|| {
        Error::Hypothesis(
            "the connection is trivial, so walk counts cannot separate the \
             bundle from the product"
            .into(),
        )
    })?;
    let x0 = global.base_vertex;
    let m = global.witness.length;
    let v0 = (0..c.fiber().vertex_count())
        .find(|&v| global.witness.holonomy.apply(v) != v)
        .ok_or_else(|| Error::Internal("unbalanced loop with identity transport".into()))?;
    let product = Bundle::cartesian_product(c.base().clone(), c.fiber().clone())?;
    let bundle_counts: Vec<Count> = closed_walk_counts(b.total(), m)
        .into_iter()
        .map(Count)
        .collect();
    let product_counts: Vec<Count> = closed_walk_counts(product.total(), m)
        .into_iter()
        .map(Count)
        .collect();
    let at = b.vertex_index(x0, v0);
    let bundle_count_at_witness = bundle_counts[at].clone();
    let product_count_at_witness = product_counts[at].clone();
    let product_strictly_greater = bundle_count_at_witness.0 < product_count_at_witness.0;
    let null_element = c.null_elements().into_iter().next();
    let count_at_null = null_element.map(|o| bundle_counts[b.vertex_index(x0, o)].clone());
    let null_differs = count_at_null
        .as_ref()
        .map(|count| count.0 != bundle_count_at_witness.0);
    Ok(SeparationReport {
        base_vertex: x0,
        fiber_vertex: v0,
        shortest_unbalanced_length: m,
        witness_loop: global.witness.vertices,
        witness_holonomy: global.witness.holonomy,
        per_start_shortest: global.per_start,
        bundle_counts,
        product_counts,
        bundle_count_at_witness,
        product_count_at_witness,
        product_strictly_greater,
        null_element,
        count_at_null,
        null_differs,
    })
}

/// One walk-count pair where the enumerated count disagreed with the
/// binomial closed form.
#[derive(Debug, Clone, Serialize)]
pub struct LemmaMismatch {
    pub base_loop: Vec<usize>,
    pub fiber_path: Vec<usize>,
    pub expected: Count,
    pub actual: Count,
}

/// Outcome of sweeping every projection pair up to a total length.
#[derive(Debug, Clone, Serialize)]
pub struct LemmaSweepReport {
    pub max_total: usize,
    pub pairs_checked: u64,
    pub mismatches: Vec<LemmaMismatch>,
}

/// Checks, for every base loop and admissible fiber path with combined
/// length at most `max_total`, that the enumerated number of walks with
/// those projections equals `binomial(total, fiber length)`. Disagreements
/// are collected rather than raised, so a report with an empty `mismatches`
/// list is the verification.
pub fn lemma_projection_sweep(
    b: &Bundle,
    start: (usize, usize),
    max_total: usize,
) -> Result<LemmaSweepReport> {
    let c = b.connection();
    let (x0, v0) = start;
    if x0 >= c.base().vertex_count() {
        return Err(Error::VertexOutOfRange {
            vertex: x0,
            n: c.base().vertex_count(),
        });
    }
    if v0 >= c.fiber().vertex_count() {
        return Err(Error::VertexOutOfRange {
            vertex: v0,
            n: c.fiber().vertex_count(),
        });
    }
    let mut pairs_checked = 0u64;
    let mut mismatches = Vec::new();
    for base_len in 0..=max_total {
        for base_vertices in walks_between(c.base(), x0, x0, base_len) {
            let base_loop = Path::new(c.base(), base_vertices)?;
            let target = c.holonomy(base_loop.vertices())?.inverse().apply(v0);
            for fiber_len in 0..=(max_total - base_len) {
                for fiber_vertices in walks_between(c.fiber(), v0, target, fiber_len) {
                    let fiber_path = Path::new(c.fiber(), fiber_vertices)?;
                    let expected = binomial((base_len + fiber_len) as u64, fiber_len as u64);
                    let actual = count_walks_with_projections(b, start, &base_loop, &fiber_path)?;
                    pairs_checked += 1;
                    if actual != expected {
                        mismatches.push(LemmaMismatch {
                            base_loop: base_loop.vertices().to_vec(),
                            fiber_path: fiber_path.vertices().to_vec(),
                            expected: Count(expected),
                            actual: Count(actual),
                        });
                    }
                }
            }
        }
    }
    Ok(LemmaSweepReport {
        max_total,
        pairs_checked,
        mismatches,
    })
}

/// All walks of exactly `length` steps from `from` to `to`.
fn walks_between(g: &Graph, from: usize, to: usize, length: usize) -> Vec<Vec<usize>> {
    fn extend(
        g: &Graph,
        current: &mut Vec<usize>,
        remaining: usize,
        to: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        let last = *current.last().expect("walk prefixes are non-empty");
        if remaining == 0 {
            if last == to {
                out.push(current.clone());
            }
            return;
        }
        for next in g.neighbors(last).collect::<Vec<_>>() {
            current.push(next);
            extend(g, current, remaining - 1, to, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    extend(g, &mut vec![from], length, to, &mut out);
    out
}
