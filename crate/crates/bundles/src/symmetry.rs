//! Canonical labeling, automorphism groups, orbits, graph isomorphism, the
//! rotation automorphism of bundles over a cycle, and geodesic-like loops.
//!
//! The engine is a color-refinement search: vertices are first colored by
//! cheap invariants, the coloring is refined until stable, and ties are
//! broken by individualizing one vertex per branch. Every leaf of the
//! branch tree yields a labeling; the lexicographically smallest relabeled
//! adjacency matrix is the canonical certificate, and the leaves achieving
//! it recover the full automorphism group.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigUint;
use serde::Serialize;

use crate::bundle::{is_graph_automorphism, Bundle};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::perm::Permutation;
use crate::walks::{closed_walk_counts, Path};

/// Resource limits for the labeling search.
#[derive(Debug, Clone, Copy)]
pub struct SymmetryOptions {
    /// Largest vertex count accepted; at most 64 so adjacency rows fit one
    /// machine word.
    pub vertex_cap: usize,
    /// Largest number of search leaves visited before giving up.
    pub leaf_cap: u64,
}

impl Default for SymmetryOptions {
    fn default() -> Self {
        SymmetryOptions {
            vertex_cap: 64,
            leaf_cap: 1_000_000,
        }
    }
}

/// A canonical relabeling: `labeling` sends each vertex to its canonical
/// position, and `certificate` is the relabeled adjacency matrix, one row
/// per position. Two graphs are isomorphic exactly when their certificates
/// coincide.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CanonicalForm {
    pub labeling: Permutation,
    pub certificate: Vec<u64>,
}

impl CanonicalForm {
    /// The certificate as bytes, for hashing or storage.
    pub fn certificate_bytes(&self) -> Vec<u8> {
        self.certificate
            .iter()
            .flat_map(|row| row.to_le_bytes())
            .collect()
    }
}

/// Partition of the vertex set into orbits, classes listed by their
/// smallest member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitPartition {
    pub class_of: Vec<usize>,
    pub classes: Vec<Vec<usize>>,
}

impl OrbitPartition {
    pub fn count(&self) -> usize {
        self.classes.len()
    }

    fn from_unions(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> OrbitPartition {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, v: usize) -> usize {
            if parent[v] != v {
                let root = find(parent, parent[v]);
                parent[v] = root;
            }
            parent[v]
        }
        for (a, b) in pairs {
            let ra = find(&mut parent, a);
            let rb = find(&mut parent, b);
            if ra != rb {
                parent[ra] = rb;
            }
        }
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..n {
            let root = find(&mut parent, v);
            by_root.entry(root).or_default().push(v);
        }
        let mut classes: Vec<Vec<usize>> = by_root.into_values().collect();
        classes.sort_by_key(|class| class[0]);
        let mut class_of = vec![0; n];
        for (id, class) in classes.iter().enumerate() {
            for &v in class {
                class_of[v] = id;
            }
        }
        OrbitPartition { class_of, classes }
    }
}

/// The full automorphism group of a graph: every non-identity element as a
/// generator, the group order, and the vertex orbits.
#[derive(Debug, Clone, Serialize)]
pub struct AutomorphismGroup {
    /// All non-identity automorphisms, in ascending image order. Listing
    /// the whole group keeps downstream consumers free of generation logic.
    pub generators: Vec<Permutation>,
    /// Number of automorphisms including the identity.
    pub order: u64,
    pub orbits: OrbitPartition,
}

fn invariant_keys(g: &Graph) -> Vec<(usize, [BigUint; 4])> {
    let walk_counts: Vec<Vec<BigUint>> =
        (3..=6).map(|len| closed_walk_counts(g, len)).collect();
    (0..g.vertex_count())
        .map(|v| {
            (
                g.degree(v),
                [
                    walk_counts[0][v].clone(),
                    walk_counts[1][v].clone(),
                    walk_counts[2][v].clone(),
                    walk_counts[3][v].clone(),
                ],
            )
        })
        .collect()
}

fn initial_colors(g: &Graph) -> Vec<usize> {
    let keys = invariant_keys(g);
    let ranks: BTreeMap<&(usize, [BigUint; 4]), usize> = keys
        .iter()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .enumerate()
        .map(|(rank, key)| (key, rank))
        .collect();
    keys.iter().map(|key| ranks[key]).collect()
}

/// Splits color classes by the multiset of neighbor colors until stable.
/// Signatures lead with the old color, so classes only ever split and their
/// relative order is preserved; an individualized vertex therefore keeps a
/// color strictly below its former cell-mates all the way to the leaves.
fn refine_to_stable(g: &Graph, mut colors: Vec<usize>) -> Vec<usize> {
    loop {
        let distinct_before = colors.iter().collect::<BTreeSet<_>>().len();
        let signatures: Vec<(usize, Vec<usize>)> = (0..g.vertex_count())
            .map(|v| {
                let mut around: Vec<usize> = g.neighbors(v).map(|w| colors[w]).collect();
                around.sort_unstable();
                (colors[v], around)
            })
            .collect();
        let ranks: BTreeMap<&(usize, Vec<usize>), usize> = signatures
            .iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .enumerate()
            .map(|(rank, sig)| (sig, rank))
            .collect();
        // Re-rank even when no class split: individualization leaves gaps
        // in the color values, and the certificate needs dense colors.
        let stable = ranks.len() == distinct_before;
        colors = signatures.iter().map(|sig| ranks[sig]).collect();
        if stable {
            return colors;
        }
    }
}

/// Re-colors `v` strictly below the rest of its cell without disturbing the
/// order of any other class.
fn individualize(colors: &[usize], v: usize) -> Vec<usize> {
    let mut out: Vec<usize> = colors.iter().map(|&c| 2 * c + 1).collect();
    out[v] = 2 * colors[v];
    out
}

/// Members of the first largest non-singleton class, ascending; `None` when
/// the coloring is discrete.
fn target_cell(colors: &[usize]) -> Option<Vec<usize>> {
    let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
    for &c in colors {
        *sizes.entry(c).or_insert(0) += 1;
    }
    let chosen = sizes
        .iter()
        .filter(|&(_, &size)| size > 1)
        .max_by(|(ca, sa), (cb, sb)| sa.cmp(sb).then(cb.cmp(ca)))?;
    let color = *chosen.0;
    Some(
        colors
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c == color)
            .map(|(v, _)| v)
            .collect(),
    )
}

fn certificate_for(g: &Graph, labeling: &[usize]) -> Vec<u64> {
    let n = g.vertex_count();
    let mut position_to_vertex = vec![0; n];
    for (v, &pos) in labeling.iter().enumerate() {
        position_to_vertex[pos] = v;
    }
    let mut rows = vec![0u64; n];
    for (i, row) in rows.iter_mut().enumerate() {
        for (j, &w) in position_to_vertex.iter().enumerate() {
            if g.has_edge(position_to_vertex[i], w) {
                *row |= 1u64 << j;
            }
        }
    }
    rows
}

struct LabelingSearch<'a> {
    g: &'a Graph,
    leaf_cap: u64,
    leaves: u64,
    best: Option<Vec<u64>>,
    best_labelings: Vec<Vec<usize>>,
}

impl LabelingSearch<'_> {
    fn descend(&mut self, colors: Vec<usize>) -> Result<()> {
        let colors = refine_to_stable(self.g, colors);
        match target_cell(&colors) {
            None => {
                self.leaves += 1;
                if self.leaves > self.leaf_cap {
                    return Err(Error::ResourceCap {
                        cap: "labeling search leaves",
                        limit: self.leaf_cap,
                    });
                }
                let cert = certificate_for(self.g, &colors);
                match &self.best {
                    Some(best) if cert > *best => {}
                    Some(best) if cert == *best => self.best_labelings.push(colors),
                    _ => {
                        self.best = Some(cert);
                        self.best_labelings = vec![colors];
                    }
                }
                Ok(())
            }
            Some(cell) => {
                for v in cell {
                    self.descend(individualize(&colors, v))?;
                }
                Ok(())
            }
        }
    }
}

fn search(g: &Graph, options: &SymmetryOptions) -> Result<(Vec<u64>, Vec<Vec<usize>>)> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::InvalidParameter(
            "an empty graph has no canonical form".into(),
        ));
    }
    let cap = options.vertex_cap.min(64);
    if n > cap {
        return Err(Error::ResourceCap {
            cap: "labeling vertex count",
            limit: cap as u64,
        });
    }
    let mut state = LabelingSearch {
        g,
        leaf_cap: options.leaf_cap,
        leaves: 0,
        best: None,
        best_labelings: Vec::new(),
    };
    state.descend(initial_colors(g))?;
    let best = state.best.expect("at least one leaf");
    Ok((best, state.best_labelings))
}

/// Canonical form under the default limits.
pub fn canonical_form(g: &Graph) -> Result<CanonicalForm> {
    canonical_form_with(g, &SymmetryOptions::default())
}

pub fn canonical_form_with(g: &Graph, options: &SymmetryOptions) -> Result<CanonicalForm> {
    let (certificate, labelings) = search(g, options)?;
    let labeling = Permutation::from_image(labelings[0].clone())
        .map_err(|e| Error::Internal(format!("leaf coloring is not a bijection: {e}")))?;
    Ok(CanonicalForm {
        labeling,
        certificate,
    })
}

/// The automorphism group under the default limits.
///
/// Leaves of the labeling search that share the minimal certificate differ
/// exactly by automorphisms, so composing each with the inverse of the
/// first recovers every element of the group. Each element is verified
/// edge-preserving before it is returned.
pub fn automorphism_group(g: &Graph) -> Result<AutomorphismGroup> {
    automorphism_group_with(g, &SymmetryOptions::default())
}

pub fn automorphism_group_with(g: &Graph, options: &SymmetryOptions) -> Result<AutomorphismGroup> {
    let (_, labelings) = search(g, options)?;
    let n = g.vertex_count();
    let reference = &labelings[0];
    let mut reference_inverse = vec![0; n];
    for (v, &pos) in reference.iter().enumerate() {
        reference_inverse[pos] = v;
    }
    let mut elements: BTreeSet<Permutation> = BTreeSet::new();
    for labeling in &labelings {
        let image: Vec<usize> = labeling.iter().map(|&pos| reference_inverse[pos]).collect();
        let sigma = Permutation::from_image(image)
            .map_err(|e| Error::Internal(format!("labeling quotient is not a bijection: {e}")))?;
        if !is_graph_automorphism(g, &sigma) {
            return Err(Error::Internal(
                "labeling quotient does not preserve edges".into(),
            ));
        }
        elements.insert(sigma);
    }
    if elements.len() != labelings.len() {
        return Err(Error::Internal(
            "minimal-certificate leaves did not give distinct automorphisms".into(),
        ));
    }
    let order = elements.len() as u64;
    let generators: Vec<Permutation> = elements
        .into_iter()
        .filter(|p| !p.is_identity())
        .collect();
    let orbits = OrbitPartition::from_unions(
        n,
        generators
            .iter()
            .flat_map(|p| (0..n).map(move |v| (v, p.apply(v)))),
    );
    Ok(AutomorphismGroup {
        generators,
        order,
        orbits,
    })
}

/// True when the automorphism group has a single vertex orbit.
pub fn is_vertex_transitive(g: &Graph) -> Result<bool> {
    Ok(automorphism_group(g)?.orbits.count() == 1)
}

/// Isomorphism test with witness: `Some(map)` sends vertices of `a` to
/// vertices of `b` preserving adjacency, `None` means no such map exists.
pub fn are_isomorphic(a: &Graph, b: &Graph) -> Result<Option<Permutation>> {
    are_isomorphic_with(a, b, &SymmetryOptions::default())
}

pub fn are_isomorphic_with(
    a: &Graph,
    b: &Graph,
    options: &SymmetryOptions,
) -> Result<Option<Permutation>> {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return Ok(None);
    }
    let mut keys_a = invariant_keys(a);
    let mut keys_b = invariant_keys(b);
    keys_a.sort();
    keys_b.sort();
    if keys_a != keys_b {
        return Ok(None);
    }
    let form_a = canonical_form_with(a, options)?;
    let form_b = canonical_form_with(b, options)?;
    if form_a.certificate != form_b.certificate {
        return Ok(None);
    }
    let n = a.vertex_count();
    let mut b_inverse = vec![0; n];
    for (v, &pos) in form_b.labeling.as_slice().iter().enumerate() {
        b_inverse[pos] = v;
    }
    let image: Vec<usize> = (0..n)
        .map(|v| b_inverse[form_a.labeling.apply(v)])
        .collect();
    let witness = Permutation::from_image(image)
        .map_err(|e| Error::Internal(format!("isomorphism witness is not a bijection: {e}")))?;
    for (u, v) in a.edges() {
        if !b.has_edge(witness.apply(u), witness.apply(v)) {
            return Err(Error::Internal(
                "matching certificates but the witness drops an edge".into(),
            ));
        }
    }
    Ok(Some(witness))
}

/// Expands a generating set into the whole group it generates, identity
/// included, in ascending image order. Fails once more than `cap` elements
/// appear.
pub fn enumerate_group(
    generators: &[Permutation],
    degree: usize,
    cap: u64,
) -> Result<Vec<Permutation>> {
    for g in generators {
        if g.degree() != degree {
            return Err(Error::InvalidParameter(format!(
                "generator degree {} does not match {degree}",
                g.degree()
            )));
        }
    }
    let mut elements: BTreeSet<Permutation> = BTreeSet::new();
    let mut queue: VecDeque<Permutation> = VecDeque::new();
    let identity = Permutation::identity(degree);
    elements.insert(identity.clone());
    queue.push_back(identity);
    while let Some(current) = queue.pop_front() {
        for g in generators {
            let next = g.compose(&current);
            if elements.contains(&next) {
                continue;
            }
            if elements.len() as u64 >= cap {
                return Err(Error::ResourceCap {
                    cap: "group enumeration",
                    limit: cap,
                });
            }
            elements.insert(next.clone());
            queue.push_back(next);
        }
    }
    Ok(elements.into_iter().collect())
}

/// The rotation of a bundle over the standard cycle: base vertex `i` moves
/// to `i+1` and the fiber coordinate is carried along by the transport of
/// that base edge. The result is verified edge-preserving over the whole
/// total graph.
pub fn rotation_automorphism(b: &Bundle) -> Result<Permutation> {
    let base = b.base();
    let n = base.vertex_count();
    if n < 3 {
        return Err(Error::Hypothesis(
            "the base graph is not a cycle in vertex order".into(),
        ));
    }
    for i in 0..n {
        let expected: BTreeSet<usize> = [(i + n - 1) % n, (i + 1) % n].into_iter().collect();
        if base.neighbor_set(i) != &expected {
            return Err(Error::Hypothesis(
                "the base graph is not a cycle in vertex order".into(),
            ));
        }
    }
    let nf = b.fiber().vertex_count();
    let mut image = vec![0; b.total().vertex_count()];
    for i in 0..n {
        let step = b.connection().transport(i, (i + 1) % n)?;
        for v in 0..nf {
            image[b.vertex_index(i, v)] = b.vertex_index((i + 1) % n, step.apply(v));
        }
    }
    let rho = Permutation::from_image(image)
        .map_err(|e| Error::Internal(format!("rotation image is not a bijection: {e}")))?;
    if !is_graph_automorphism(b.total(), &rho) {
        return Err(Error::Internal(
            "rotation does not preserve the bundle edges".into(),
        ));
    }
    Ok(rho)
}

/// Powers of a permutation, identity first.
pub fn cyclic_group(p: &Permutation) -> Vec<Permutation> {
    let mut powers = vec![Permutation::identity(p.degree())];
    let mut current = p.clone();
    while !current.is_identity() {
        powers.push(current.clone());
        current = p.compose(&current);
    }
    powers
}

/// Orbits of the cyclic group generated by one permutation, i.e. its cycle
/// structure as a partition.
pub fn cyclic_orbits(p: &Permutation) -> OrbitPartition {
    OrbitPartition::from_unions(p.degree(), (0..p.degree()).map(|v| (v, p.apply(v))))
}

/// True when every stretch of two consecutive steps of the closed walk is
/// the unique shortest route between its endpoints: consecutive-but-one
/// vertices are distinct, non-adjacent, and share no common neighbor other
/// than the vertex between them. Checked cyclically, so the closing steps
/// count too; loops shorter than 3 never qualify.
pub fn is_geodesic_like(g: &Graph, walk: &Path) -> Result<bool> {
    let walk = Path::new(g, walk.vertices().to_vec())?;
    if !walk.is_loop() {
        return Err(Error::NotClosed);
    }
    let l = walk.length();
    if l < 3 {
        return Ok(false);
    }
    let vs = &walk.vertices()[..l];
    for i in 0..l {
        let x = vs[i];
        let y = vs[(i + 1) % l];
        let z = vs[(i + 2) % l];
        if x == z || g.has_edge(x, z) {
            return Ok(false);
        }
        let common: Vec<usize> = g
            .neighbor_set(x)
            .intersection(g.neighbor_set(z))
            .copied()
            .collect();
        if common != [y] {
            return Ok(false);
        }
    }
    Ok(true)
}
