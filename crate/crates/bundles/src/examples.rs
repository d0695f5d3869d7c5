//! A small catalog of named bundle constructions used throughout the test
//! suite and the command-line tool: cyclic twists over cycles with complete
//! fibers, the square-fiber double swap, the diagonal-swap torus with a
//! two-point fiber, and the plain product. Each entry carries the properties
//! it is expected to exhibit, so runs can be checked against a card.

use serde::{Deserialize, Serialize};

use crate::bundle::{Bundle, Connection};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::perm::Permutation;

/// Cycle base on `n` vertices, complete fiber on `m` points, and a single
/// twisted edge carrying the cycle through fiber points `1..m` while `0`
/// stays put.
pub fn make_eg2(n: usize, m: usize) -> Result<Connection> {
    if m < 3 {
        return Err(Error::InvalidParameter(
            "the complete fiber needs at least 3 points for the rotating twist to move anything"
                .into(),
        ));
    }
    let base = Graph::cycle(n)?;
    let fiber = Graph::complete(m)?;
    let rotate_tail: Vec<usize> = (1..m).collect();
    let twist = Permutation::from_cycles(m, &[rotate_tail])?;
    Connection::new(base, fiber, vec![((0, 1), twist)])
}

/// Cycle base on `n` vertices and a complete fiber sized so the twist
/// decomposes into disjoint cycles of lengths `2, 3, ..., i` on the points
/// above `0`. With `i = 2` this is the same connection as [`make_eg2`]
/// with a 3-point fiber.
pub fn make_eg3(n: usize, i: usize) -> Result<Connection> {
    if n < 5 {
        return Err(Error::InvalidParameter(
            "the base cycle needs at least 5 vertices".into(),
        ));
    }
    if i < 2 {
        return Err(Error::InvalidParameter(
            "the block parameter must be at least 2".into(),
        ));
    }
    let m = i * (i + 1) / 2;
    let mut cycles = Vec::new();
    let mut start = 1;
    for len in 2..=i {
        cycles.push((start..start + len).collect::<Vec<_>>());
        start += len;
    }
    debug_assert_eq!(start, m);
    let twist = Permutation::from_cycles(m, &cycles)?;
    Connection::new(Graph::cycle(n)?, Graph::complete(m)?, vec![((0, 1), twist)])
}

/// Cycle base on `n` vertices, square fiber, and a single twisted edge
/// carrying the double swap that exchanges `0` with `1` and `2` with `3` —
/// no fiber point stays put, so this is not a discrete vector bundle.
pub fn make_dvb1(n: usize) -> Result<Connection> {
    let twist = Permutation::from_cycles(4, &[vec![0, 1], vec![2, 3]])?;
    Connection::new(Graph::cycle(n)?, Graph::cycle(4)?, vec![((0, 1), twist)])
}

/// Torus base on `side × side` vertices generated by the two axis steps and
/// the diagonal step, two-point fiber, and the fiber swap on every diagonal
/// edge. Triangles with one diagonal edge are unbalanced while every loop
/// of length 4 is balanced.
pub fn make_dvb2_torus(side: usize) -> Result<Connection> {
    if side < 4 || !side.is_multiple_of(2) {
        return Err(Error::InvalidParameter(
            "the torus side must be an even number at least 4; an odd wrap \
             would join the two layers inconsistently"
                .into(),
        ));
    }
    let base = Graph::cayley(&[side, side], &[vec![1, 0], vec![0, 1], vec![1, 1]])?;
    let fiber = Graph::complete(2)?;
    let swap = Permutation::from_cycles(2, &[vec![0, 1]])?;
    let mut assignments = Vec::with_capacity(side * side);
    for a in 0..side {
        for b in 0..side {
            let here = a * side + b;
            let diagonal = ((a + 1) % side) * side + (b + 1) % side;
            assignments.push(((here, diagonal), swap.clone()));
        }
    }
    Connection::new(base, fiber, assignments)
}

/// The untwisted reference object: cycle base, complete fiber, identity
/// connection.
pub fn make_product(n: usize, m: usize) -> Result<Connection> {
    Connection::identity(Graph::cycle(n)?, Graph::complete(m)?)
}

/// The fiber flip of the square-fiber example: over every base vertex,
/// fiber point `j` goes to `3 - j`. Returns the map only after verifying it
/// is an automorphism of the total graph.
pub fn dvb1_tau(b: &Bundle) -> Result<Permutation> {
    if b.fiber().vertex_count() != 4 {
        return Err(Error::Hypothesis(
            "the fiber flip is defined on a 4-point fiber".into(),
        ));
    }
    let image: Vec<usize> = (0..b.total().vertex_count())
        .map(|index| {
            let (x, j) = b.vertex_pair(index);
            b.vertex_index(x, 3 - j)
        })
        .collect();
    let tau = Permutation::from_image(image)?;
    if !crate::bundle::is_graph_automorphism(b.total(), &tau) {
        return Err(Error::Hypothesis(
            "the fiber flip is not an automorphism of this bundle".into(),
        ));
    }
    Ok(tau)
}

/// Properties an example is expected to exhibit; absent fields make no
/// claim.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct ExpectedProperties {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trivial: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dvb: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transitive: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orbits: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub four_loop_balanced: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_ricci_flat: Option<bool>,
}

/// A named example together with its parameters, e.g. `eg2` with `n = 5`,
/// `m = 3`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleSpec {
    pub name: String,
    pub params: Vec<(String, usize)>,
}

impl ExampleSpec {
    pub fn new(name: &str, params: &[(&str, usize)]) -> ExampleSpec {
        ExampleSpec {
            name: name.to_string(),
            params: params
                .iter()
                .map(|&(k, v)| (k.to_string(), v))
                .collect(),
        }
    }

    /// File-name stem: the name followed by the parameter values.
    pub fn stem(&self) -> String {
        let mut stem = self.name.clone();
        for (_, value) in &self.params {
            stem.push('_');
            stem.push_str(&value.to_string());
        }
        stem
    }

    fn param(&self, key: &str) -> Result<usize> {
        self.params
            .iter()
            .find(|(k, _)| k == key)
            .map(|&(_, v)| v)
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "example {:?} needs parameter {key}",
                    self.name
                ))
            })
    }

    fn expect_params(&self, keys: &[&str]) -> Result<()> {
        if self.params.len() != keys.len()
            || self.params.iter().any(|(k, _)| !keys.contains(&k.as_str()))
        {
            return Err(Error::InvalidParameter(format!(
                "example {:?} takes exactly the parameters {keys:?}",
                self.name
            )));
        }
        Ok(())
    }

    pub fn connection(&self) -> Result<Connection> {
        match self.name.as_str() {
            "eg2" => {
                self.expect_params(&["n", "m"])?;
                make_eg2(self.param("n")?, self.param("m")?)
            }
            "eg3" => {
                self.expect_params(&["n", "i"])?;
                make_eg3(self.param("n")?, self.param("i")?)
            }
            "dvb1" => {
                self.expect_params(&["n"])?;
                make_dvb1(self.param("n")?)
            }
            "dvb2-torus" => {
                self.expect_params(&["N"])?;
                make_dvb2_torus(self.param("N")?)
            }
            "product" => {
                self.expect_params(&["n", "m"])?;
                make_product(self.param("n")?, self.param("m")?)
            }
            other => Err(Error::InvalidParameter(format!(
                "unknown example name {other:?}"
            ))),
        }
    }

    pub fn build(&self) -> Result<Bundle> {
        Ok(Bundle::build(self.connection()?))
    }

    /// The property card for this example. Fields are populated from the
    /// known behavior of each family; a `None` makes no claim (for
    /// instance, flatness of the cyclic-twist family over a 4-cycle, where
    /// the frame lift does not apply).
    pub fn expected(&self) -> Result<ExpectedProperties> {
        let card = match self.name.as_str() {
            "eg2" => {
                let n = self.param("n")?;
                ExpectedProperties {
                    trivial: Some(false),
                    dvb: Some(true),
                    transitive: Some(false),
                    orbits: Some(2),
                    four_loop_balanced: Some(n != 4),
                    s_ricci_flat: if n != 4 { Some(true) } else { None },
                }
            }
            "eg3" => ExpectedProperties {
                trivial: Some(false),
                dvb: Some(true),
                transitive: Some(false),
                orbits: Some(self.param("i")?),
                four_loop_balanced: Some(true),
                s_ricci_flat: Some(true),
            },
            "dvb1" => {
                let n = self.param("n")?;
                ExpectedProperties {
                    trivial: Some(false),
                    dvb: Some(false),
                    transitive: Some(true),
                    orbits: Some(1),
                    four_loop_balanced: Some(n != 4),
                    s_ricci_flat: None,
                }
            }
            "dvb2-torus" => ExpectedProperties {
                trivial: Some(false),
                dvb: Some(false),
                transitive: Some(true),
                orbits: Some(1),
                four_loop_balanced: Some(true),
                s_ricci_flat: Some(true),
            },
            "product" => ExpectedProperties {
                trivial: Some(true),
                dvb: Some(true),
                transitive: Some(true),
                orbits: Some(1),
                four_loop_balanced: Some(true),
                s_ricci_flat: Some(true),
            },
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown example name {other:?}"
                )))
            }
        };
        Ok(card)
    }
}

/// Every example instance exercised by the test suite.
pub fn catalog() -> Vec<ExampleSpec> {
    vec![
        ExampleSpec::new("eg2", &[("n", 4), ("m", 4)]),
        ExampleSpec::new("eg2", &[("n", 5), ("m", 3)]),
        ExampleSpec::new("eg2", &[("n", 5), ("m", 4)]),
        ExampleSpec::new("eg3", &[("n", 5), ("i", 2)]),
        ExampleSpec::new("eg3", &[("n", 5), ("i", 3)]),
        ExampleSpec::new("eg3", &[("n", 6), ("i", 3)]),
        ExampleSpec::new("dvb1", &[("n", 5)]),
        ExampleSpec::new("dvb2-torus", &[("N", 4)]),
        ExampleSpec::new("product", &[("n", 5), ("m", 3)]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn parameter_ranges_are_enforced() {
        assert!(make_eg2(2, 3).is_err());
        assert!(make_eg2(5, 2).is_err());
        assert!(make_eg3(4, 2).is_err());
        assert!(make_eg3(5, 1).is_err());
        assert!(make_dvb1(2).is_err());
        assert!(make_dvb2_torus(5).is_err());
        assert!(make_dvb2_torus(2).is_err());
        assert!(make_product(2, 3).is_err());
    }

    #[test]
    fn twist_fixed_points_classify_the_examples() {
        let eg2 = make_eg2(5, 3).unwrap();
        assert_eq!(eg2.null_elements(), BTreeSet::from([0]));
        assert!(eg2.is_discrete_vector_bundle());
        assert!(!eg2.is_trivial());

        let eg3 = make_eg3(5, 3).unwrap();
        assert_eq!(eg3.fiber().vertex_count(), 6);
        assert_eq!(eg3.null_elements(), BTreeSet::from([0]));

        let dvb1 = make_dvb1(5).unwrap();
        assert!(dvb1.null_elements().is_empty());
        assert!(!dvb1.is_discrete_vector_bundle());
        assert!(!dvb1.is_trivial());

        let dvb2 = make_dvb2_torus(4).unwrap();
        assert!(dvb2.null_elements().is_empty());
        assert!(!dvb2.is_trivial());

        let product = make_product(5, 3).unwrap();
        assert_eq!(product.null_elements(), BTreeSet::from([0, 1, 2]));
        assert!(product.is_trivial());
    }

    #[test]
    fn smallest_block_twist_collapses_to_the_three_point_example() {
        let a = make_eg3(6, 2).unwrap();
        let b = make_eg2(6, 3).unwrap();
        assert_eq!(a.stored_twists(), b.stored_twists());
        let ca = crate::symmetry::canonical_form(Bundle::build(a).total()).unwrap();
        let cb = crate::symmetry::canonical_form(Bundle::build(b).total()).unwrap();
        assert_eq!(ca.certificate, cb.certificate);
    }

    #[test]
    fn torus_example_has_the_documented_shape() {
        let c = make_dvb2_torus(4).unwrap();
        assert_eq!(c.base().vertex_count(), 16);
        assert!((0..16).all(|v| c.base().degree(v) == 6));
        assert_eq!(c.stored_twists().len(), 16);
        assert!(c
            .stored_twists()
            .values()
            .all(|p| *p == Permutation::from_cycles(2, &[vec![0, 1]]).unwrap()));

        let b = Bundle::build(c);
        assert_eq!(b.total().vertex_count(), 32);
        assert!((0..32).all(|v| b.total().degree(v) == 7));

        // Shortest unbalanced loop is a triangle through a diagonal edge,
        // yet every loop of length 4 is balanced.
        let found = crate::walks::shortest_unbalanced_loop(b.connection(), 0)
            .unwrap()
            .expect("the torus connection is unbalanced");
        assert_eq!(found.length, 3);
        assert!(crate::ricci::check_4loop_balanced(b.connection())
            .unwrap()
            .balanced);
    }

    #[test]
    fn fiber_flip_is_a_verified_automorphism() {
        let b = Bundle::build(make_dvb1(5).unwrap());
        let tau = dvb1_tau(&b).unwrap();
        assert!(!tau.is_identity());
        assert!(tau.compose(&tau).is_identity());
        assert_eq!(
            tau.apply(b.vertex_index(2, 1)),
            b.vertex_index(2, 2)
        );
        let eg2 = Bundle::build(make_eg2(5, 3).unwrap());
        assert!(dvb1_tau(&eg2).is_err());
    }

    #[test]
    fn catalog_builds_and_stems_are_unique() {
        let entries = catalog();
        assert_eq!(entries.len(), 9);
        let stems: BTreeSet<String> = entries.iter().map(ExampleSpec::stem).collect();
        assert_eq!(stems.len(), entries.len());
        assert!(stems.contains("eg2_5_3"));
        assert!(stems.contains("dvb2-torus_4"));
        for entry in &entries {
            entry.connection().unwrap();
            entry.expected().unwrap();
        }
    }

    #[test]
    fn expected_property_rules() {
        let spec = ExampleSpec::new("eg2", &[("n", 5), ("m", 3)]);
        assert_eq!(
            spec.expected().unwrap(),
            ExpectedProperties {
                trivial: Some(false),
                dvb: Some(true),
                transitive: Some(false),
                orbits: Some(2),
                four_loop_balanced: Some(true),
                s_ricci_flat: Some(true),
            }
        );
        let square = ExampleSpec::new("eg2", &[("n", 4), ("m", 4)]);
        let card = square.expected().unwrap();
        assert_eq!(card.four_loop_balanced, Some(false));
        assert_eq!(card.s_ricci_flat, None);
        let product = ExampleSpec::new("product", &[("n", 5), ("m", 3)]);
        assert_eq!(product.expected().unwrap().trivial, Some(true));
        assert!(ExampleSpec::new("nope", &[]).connection().is_err());
        assert!(ExampleSpec::new("eg2", &[("n", 5)]).connection().is_err());
    }

    #[test]
    fn spec_serialization_round_trips() {
        let spec = ExampleSpec::new("eg3", &[("n", 5), ("i", 3)]);
        let json = serde_json::to_string(&spec).unwrap();
        let back: ExampleSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
        let card = spec.expected().unwrap();
        let json = serde_json::to_string(&card).unwrap();
        let back: ExpectedProperties = serde_json::from_str(&json).unwrap();
        assert_eq!(back, card);
    }
}
