//! Cross-module checks over the example catalog: symmetry counts computed
//! two ways, loop censuses, flatness certificates, the Cayley identification
//! of the torus example, and file round-trips.

use std::collections::{BTreeMap, BTreeSet};

use graph_bundles::bundle::{self, Bundle};
use graph_bundles::examples::{self, ExampleSpec};
use graph_bundles::graph::Graph;
use graph_bundles::io;
use graph_bundles::ricci::{self, ExchangeReading};
use graph_bundles::symmetry::{self, OrbitPartition};
use graph_bundles::walks::Path;

fn build(name: &str, params: &[(&str, usize)]) -> Bundle {
    ExampleSpec::new(name, params).build().unwrap()
}

fn orbit_sets(p: &OrbitPartition) -> BTreeSet<Vec<usize>> {
    p.classes
        .iter()
        .map(|class| {
            let mut class = class.clone();
            class.sort_unstable();
            class
        })
        .collect()
}

/// Example name, parameters, expected orbit count, expected group order.
type OrbitExpectation = (&'static str, &'static [(&'static str, usize)], usize, u64);

/// The cycle-base examples carry a rotation automorphism whose cyclic group
/// already separates the vertex classes: the full automorphism group, found
/// by the canonical-labelling search, must produce the same partition.
#[test]
fn rotation_orbits_match_full_group_orbits() {
    let table: &[OrbitExpectation] = &[
        ("eg2", &[("n", 4), ("m", 4)], 2, 24),
        ("eg2", &[("n", 5), ("m", 3)], 2, 20),
        ("eg2", &[("n", 5), ("m", 4)], 2, 30),
        ("eg3", &[("n", 5), ("i", 2)], 2, 20),
        ("eg3", &[("n", 5), ("i", 3)], 3, 60),
        ("eg3", &[("n", 6), ("i", 3)], 3, 72),
    ];
    for &(name, params, orbit_count, group_order) in table {
        let b = build(name, params);
        let rho = symmetry::rotation_automorphism(&b).unwrap();
        let rotation_orbits = symmetry::cyclic_orbits(&rho);
        let group = symmetry::automorphism_group(b.total()).unwrap();
        let label = ExampleSpec::new(name, params).stem();
        assert_eq!(group.orbits.count(), orbit_count, "{label}: group orbits");
        assert_eq!(
            rotation_orbits.count(),
            orbit_count,
            "{label}: rotation orbits"
        );
        assert_eq!(
            orbit_sets(&rotation_orbits),
            orbit_sets(&group.orbits),
            "{label}: the two partitions disagree"
        );
        assert_eq!(group.order, group_order, "{label}: group order");
        let rotation_order = symmetry::cyclic_group(&rho).len() as u64;
        assert_eq!(
            group.order % rotation_order,
            0,
            "{label}: rotation subgroup order must divide the group order"
        );
    }
}

#[test]
fn twisted_four_cycle_fiber_is_transitive_but_not_a_vector_bundle() {
    let b = build("dvb1", &[("n", 5)]);
    let c = b.connection();
    assert!(!c.is_trivial());
    assert!(c.null_elements().is_empty());
    assert!(!c.is_discrete_vector_bundle());

    let group = symmetry::automorphism_group(b.total()).unwrap();
    assert_eq!(group.order, 40);
    assert_eq!(group.orbits.count(), 1);
    assert!(symmetry::is_vertex_transitive(b.total()).unwrap());

    let rho = symmetry::rotation_automorphism(&b).unwrap();
    assert_eq!(symmetry::cyclic_group(&rho).len(), 10);
    let tau = examples::dvb1_tau(&b).unwrap();
    assert!(bundle::is_graph_automorphism(b.total(), &tau));
    assert!(tau.compose(&tau).is_identity());
}

/// The twisted four-cycle fiber over a five-cycle matches the plain product
/// on every cheap invariant, yet the two graphs are not isomorphic.
#[test]
fn twisted_four_cycle_fiber_is_not_the_product() {
    let twisted = build("dvb1", &[("n", 5)]);
    let product =
        Bundle::cartesian_product(Graph::cycle(5).unwrap(), Graph::cycle(4).unwrap()).unwrap();
    assert_eq!(twisted.total().vertex_count(), 20);
    assert_eq!(
        twisted.total().vertex_count(),
        product.total().vertex_count()
    );
    assert_eq!(twisted.total().edge_count(), product.total().edge_count());
    assert!((0..20).all(|v| twisted.total().degree(v) == 4));
    assert!((0..20).all(|v| product.total().degree(v) == 4));
    assert!(symmetry::are_isomorphic(twisted.total(), product.total())
        .unwrap()
        .is_none());
}

/// Depth-first enumeration of closed walks every one of whose settled
/// stretches of two steps is already the unique shortest route between its
/// endpoints. Walks are anchored: each is reported once per starting vertex
/// and direction. Returns `(walk, closes_cleanly)` where the flag says the
/// two wrap-around stretches pass the same test as the interior ones.
fn anchored_geodesic_like_walks(g: &Graph, max_len: usize) -> Vec<(Vec<usize>, bool)> {
    let unique_route = |a: usize, mid: usize, c: usize| -> bool {
        if a == c || g.has_edge(a, c) {
            return false;
        }
        let common: Vec<usize> = g
            .neighbor_set(a)
            .intersection(g.neighbor_set(c))
            .copied()
            .collect();
        common == [mid]
    };
    let mut found = Vec::new();
    for start in 0..g.vertex_count() {
        let mut stack: Vec<Vec<usize>> = g.neighbors(start).map(|u| vec![start, u]).collect();
        while let Some(path) = stack.pop() {
            let cur = *path.last().unwrap();
            let prev = path[path.len() - 2];
            for next in g.neighbors(cur) {
                if !unique_route(prev, cur, next) {
                    continue;
                }
                let mut ext = path.clone();
                ext.push(next);
                if next == start && ext.len() >= 4 {
                    let l = ext.len() - 1;
                    let clean = unique_route(ext[l - 1], ext[0], ext[1]);
                    found.push((ext.clone(), clean));
                }
                if ext.len() <= max_len {
                    stack.push(ext);
                }
            }
        }
    }
    found
}

/// In the disjoint-cycle example over a five-cycle, the closed walks whose
/// every two-step stretch is a unique shortest route trace out exactly two
/// vertex sets: the null section (five vertices) and the layer of the
/// transposed fiber pair (ten vertices). The third vertex class is too large
/// to be traced within the length cap, so image cardinality alone separates
/// all three classes.
#[test]
fn geodesic_like_loop_census_separates_orbits() {
    let b = build("eg3", &[("n", 5), ("i", 3)]);
    let total = b.total();
    let rho = symmetry::rotation_automorphism(&b).unwrap();
    let classes = orbit_sets(&symmetry::cyclic_orbits(&rho));
    let by_size: BTreeMap<usize, Vec<usize>> =
        classes.iter().map(|c| (c.len(), c.clone())).collect();
    assert_eq!(by_size.keys().copied().collect::<Vec<_>>(), vec![5, 10, 15]);

    let candidates = anchored_geodesic_like_walks(total, 11);
    let mut census: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
    let mut confirmed = 0usize;
    for (walk, clean) in candidates {
        let path = Path::new(total, walk.clone()).unwrap();
        assert_eq!(
            symmetry::is_geodesic_like(total, &path).unwrap(),
            clean,
            "library disagrees with the local scan on {walk:?}"
        );
        if !clean {
            continue;
        }
        confirmed += 1;
        let mut image: Vec<usize> = walk.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        image.sort_unstable();
        *census.entry((path.length(), image)).or_insert(0) += 1;
    }
    assert_eq!(confirmed, 40);
    let expected: BTreeMap<(usize, Vec<usize>), usize> = [
        ((5, by_size[&5].clone()), 10),
        ((10, by_size[&5].clone()), 10),
        ((10, by_size[&10].clone()), 20),
    ]
    .into_iter()
    .collect();
    assert_eq!(census, expected);
}

#[test]
fn pipeline_report_on_disjoint_cycle_twist() {
    let b = build("eg3", &[("n", 5), ("i", 3)]);
    let report = ricci::certify_noncayley(&b).unwrap();
    assert_eq!(report.null_elements, vec![0]);
    assert!(report.four_loop_balanced);
    assert!(report.base_s_ricci);
    assert!(report.fiber_s_ricci);
    assert!(report.s_ricci_flat);
    assert!(!report.vertex_transitive);
    assert_eq!(report.orbit_count, 3);
    assert!(report.noncayley);
    assert!(report.lifted.require_commuting);
    assert!(report.lifted.is_complete());
    assert_eq!(report.lifted.reading, ExchangeReading::PerIndex);
}

/// The doubled torus example is flat with commuting frames, transitive, and
/// in fact a Cayley graph: it is isomorphic to a Cayley graph of
/// Z4 x Z4 x Z2, which the test verifies edge by edge.
#[test]
fn even_torus_bundle_is_a_cayley_graph() {
    let b = build("dvb2-torus", &[("N", 4)]);
    let total = b.total();
    assert_eq!(total.vertex_count(), 32);
    assert!((0..32).all(|v| total.degree(v) == 7));

    let cert = ricci::certify(total, true).unwrap();
    assert!(cert.is_complete());
    assert_eq!(cert.s_ricci_flat(), Some(true));

    let group = symmetry::automorphism_group(total).unwrap();
    assert_eq!(group.order, 384);
    assert_eq!(group.orbits.count(), 1);

    let target = Graph::cayley(
        &[4, 4, 2],
        &[vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 1], vec![0, 0, 1]],
    )
    .unwrap();
    let witness = symmetry::are_isomorphic(total, &target).unwrap();
    let witness = witness.expect("the torus bundle should be a Cayley graph");
    assert_eq!(total.edge_count(), target.edge_count());
    for (u, v) in total.edges() {
        assert!(
            target.has_edge(witness.apply(u), witness.apply(v)),
            "edge ({u}, {v}) is not preserved"
        );
    }
}

/// Every card in the catalog must agree with what the library computes from
/// scratch on the freshly built bundle.
#[test]
fn expected_cards_match_computed_properties() {
    for spec in examples::catalog() {
        let label = spec.stem();
        let c = spec.connection().unwrap();
        let b = spec.build().unwrap();
        let expected = spec.expected().unwrap();

        assert_eq!(
            c.is_trivial(),
            expected.trivial.unwrap(),
            "{label}: triviality"
        );
        assert_eq!(
            c.is_discrete_vector_bundle(),
            expected.dvb.unwrap(),
            "{label}: fixed fiber point"
        );
        let group = symmetry::automorphism_group(b.total()).unwrap();
        assert_eq!(
            group.orbits.count(),
            expected.orbits.unwrap(),
            "{label}: orbit count"
        );
        assert_eq!(
            group.orbits.count() == 1,
            expected.transitive.unwrap(),
            "{label}: transitivity"
        );
        assert_eq!(
            ricci::check_4loop_balanced(&c).unwrap().balanced,
            expected.four_loop_balanced.unwrap(),
            "{label}: balance on 4-loops"
        );
        if let Some(flat) = expected.s_ricci_flat {
            let cert = ricci::certify(b.total(), true).unwrap();
            assert_eq!(cert.s_ricci_flat(), Some(flat), "{label}: commuting frames");
        }
    }
}

#[test]
fn connection_files_round_trip_through_the_catalog() {
    let dir = tempfile::tempdir().unwrap();
    for spec in examples::catalog() {
        let stem = spec.stem();
        let c = spec.connection().unwrap();
        let base_ref = format!("{stem}.base.graph");
        let fiber_ref = format!("{stem}.fiber.graph");
        io::save_graph(c.base(), &dir.path().join(&base_ref)).unwrap();
        io::save_graph(c.fiber(), &dir.path().join(&fiber_ref)).unwrap();
        let conn_path = dir.path().join(format!("{stem}.conn"));
        io::save_connection(&c, &conn_path, &base_ref, &fiber_ref).unwrap();

        let reloaded = io::read_connection(&conn_path).unwrap();
        assert!(reloaded.base().same_adjacency(c.base()), "{stem}: base");
        assert!(reloaded.fiber().same_adjacency(c.fiber()), "{stem}: fiber");
        assert_eq!(
            reloaded.stored_twists(),
            c.stored_twists(),
            "{stem}: twists"
        );
        assert!(
            Bundle::build(reloaded)
                .total()
                .same_adjacency(spec.build().unwrap().total()),
            "{stem}: total graph"
        );
    }
}
