mod common;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use proptest::prelude::*;

use ratsing::catalog;
use ratsing::dualgraph::{
    checks, gen_ade, gen_hj, hj_continued_fraction, intersection_matrix, validate, DynkinFamily,
    DynkinType,
};
use ratsing::{DualGraph, Error, Prime, Vertex};

const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

/// A random tree: vertex `i > 0` hangs off some earlier vertex.
fn tree() -> impl Strategy<Value = (Vec<i64>, Vec<(usize, usize, i64)>)> {
    (1usize..=7).prop_flat_map(|n| {
        let selfs = proptest::collection::vec(-6i64..=-1, n);
        let parents: Vec<_> = (1..n).map(|i| (0..i, 1i64..=2)).collect();
        (selfs, parents).prop_map(|(selfs, parents)| {
            let edges = parents
                .into_iter()
                .enumerate()
                .map(|(i, (p, m))| (p, i + 1, m))
                .collect();
            (selfs, edges)
        })
    })
}

fn build(name: &str, selfs: &[i64], edges: &[(usize, usize, i64)], order: &[usize]) -> DualGraph {
    let vertices = order
        .iter()
        .map(|&i| Vertex::new(format!("x{i}"), selfs[i]))
        .collect();
    let edges: Vec<(String, String, i64)> = edges
        .iter()
        .map(|&(a, b, m)| (format!("x{a}"), format!("x{b}"), m))
        .collect();
    DualGraph::new(name, vertices, &edges).unwrap()
}

proptest! {
    #[test]
    fn intersection_matrix_follows_vertex_permutation(
        (selfs, edges) in tree(),
        seed in any::<u64>(),
    ) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let n = selfs.len();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let mut shuffled_edges = edges.clone();
        shuffled_edges.shuffle(&mut rng);
        for e in shuffled_edges.iter_mut().step_by(2) {
            *e = (e.1, e.0, e.2);
        }

        let base = intersection_matrix(&build("t", &selfs, &edges, &(0..n).collect::<Vec<_>>()));
        let perm = intersection_matrix(&build("t", &selfs, &shuffled_edges, &order));
        prop_assert!(perm.is_symmetric());
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(&perm[(i, j)], &base[(order[i], order[j])]);
            }
        }
    }

    #[test]
    fn json_round_trip_of_random_trees((selfs, edges) in tree()) {
        let g = build("rt", &selfs, &edges, &(0..selfs.len()).collect::<Vec<_>>());
        prop_assert_eq!(DualGraph::parse_json(&g.to_json()).unwrap(), g);
    }
}

#[test]
fn intersection_matrix_examples() {
    let single =
        DualGraph::new("p", vec![Vertex::new("a", -2)], &[] as &[(&str, &str, i64)]).unwrap();
    assert_eq!(
        intersection_matrix(&single),
        ratsing::IntMatrix::from_rows(&[[-2]])
    );
    let a2 = catalog::shipped("A2").unwrap();
    assert_eq!(
        intersection_matrix(&a2),
        ratsing::IntMatrix::from_rows(&[[-2, 1], [1, -2]])
    );
}

#[test]
fn generated_graphs_validate_for_every_prime() {
    let mut graphs = Vec::new();
    for n in 1..=20 {
        graphs.push(gen_ade(DynkinFamily::A, n).unwrap());
    }
    for n in 4..=12 {
        graphs.push(gen_ade(DynkinFamily::D, n).unwrap());
    }
    for n in 6..=8 {
        graphs.push(gen_ade(DynkinFamily::E, n).unwrap());
    }
    for k in 2..=30i64 {
        for a in (1..k).filter(|a| a.gcd(&k) == 1) {
            graphs.push(gen_hj(k, a).unwrap());
        }
    }
    for g in &graphs {
        for p in PRIMES {
            let report = validate(g, Prime::new(p).unwrap());
            assert!(report.overall, "{} fails at ell = {p}:\n{report}", g.name());
        }
    }
}

#[test]
fn hj_determinant_is_k() {
    for k in 2..=30i64 {
        for a in (1..k).filter(|a| a.gcd(&k) == 1) {
            let bs = hj_continued_fraction(k, a).unwrap();
            assert!(bs.iter().all(|&b| b >= 2), "HJ{k}_{a}: {bs:?}");
            let value = common::eval_hj(&bs);
            assert_eq!(
                value,
                num_rational::BigRational::new(k.into(), a.into()),
                "HJ{k}_{a}"
            );

            let g = gen_hj(k, a).unwrap();
            let m = intersection_matrix(&g);
            let rows = common::to_i64_rows(&m);
            assert_eq!(common::det(&rows).abs(), BigInt::from(k), "HJ{k}_{a}");
            assert_eq!(m.determinant().unwrap().abs(), BigInt::from(k), "HJ{k}_{a}");
        }
    }
}

#[test]
fn hj_rejects_bad_parameters() {
    assert!(matches!(gen_hj(6, 4), Err(Error::NotCoprime { .. })));
    assert!(matches!(gen_hj(5, 0), Err(Error::NotCoprime { .. })));
    assert!(matches!(gen_hj(5, 5), Err(Error::NotCoprime { .. })));
}

#[test]
fn catalog_round_trips_and_matches_generators() {
    for name in catalog::shipped_names() {
        let g = catalog::shipped(name).unwrap();
        assert_eq!(DualGraph::parse_json(&g.to_json()).unwrap(), g, "{name}");
        let generated = match name.strip_prefix("HJ") {
            Some(ka) => {
                let (k, a) = ka.split_once('_').unwrap();
                gen_hj(k.parse().unwrap(), a.parse().unwrap()).unwrap()
            }
            None => {
                let t: DynkinType = name.parse().unwrap();
                gen_ade(t.family, t.n).unwrap()
            }
        };
        assert_eq!(generated, g, "{name}");
        let on_disk = std::fs::read_to_string(
            std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join(format!("catalog/{name}.json")),
        )
        .unwrap();
        assert_eq!(generated.to_json(), on_disk, "{name}");
    }
}

#[test]
fn every_catalog_graph_is_negative_definite_tree() {
    for g in catalog::all().unwrap() {
        let report = validate(&g, Prime::new(2).unwrap());
        assert!(report.passed(checks::NEGATIVE_DEFINITE), "{}", g.name());
        assert!(report.passed(checks::FOREST), "{}", g.name());
        assert_eq!(g.component_count(), 1);
        let rows = common::to_i64_rows(&intersection_matrix(&g));
        if rows.len() <= 3 {
            assert!(common::nonnegative_witness(&rows, 3).is_none());
        }
    }
}

#[test]
fn validation_findings() {
    let bad = DualGraph::new(
        "bad",
        vec![Vertex::new("a", -1), Vertex::new("b", -1)],
        &[("a", "b", 3)],
    )
    .unwrap();
    let report = validate(&bad, Prime::new(2).unwrap());
    assert!(!report.overall);
    assert!(!report.passed(checks::NEGATIVE_DEFINITE));
    assert!(report.passed(checks::SYMMETRIC));
    assert!(
        !report.passed(checks::FOREST),
        "multiplicity-3 edge is a cycle"
    );
    assert_eq!(report.overall, report.checks.iter().all(|c| c.passed));

    let split = DualGraph::new(
        "split",
        vec![Vertex::new("a", -2), Vertex::new("b", -2)],
        &[] as &[(&str, &str, i64)],
    )
    .unwrap();
    assert!(!validate(&split, Prime::new(3).unwrap()).passed(checks::CONNECTED));

    let undivided = DualGraph::new(
        "undivided",
        vec![Vertex::new("a", -3).with_degree_gcd(2)],
        &[] as &[(&str, &str, i64)],
    )
    .unwrap();
    let report = validate(&undivided, Prime::new(3).unwrap());
    assert!(!report.passed(checks::DIVISIBILITY));
    assert!(report.passed(checks::ELL_COPRIME));
    assert!(!validate(&undivided, Prime::new(2).unwrap()).passed(checks::ELL_COPRIME));
}

#[test]
fn construction_errors() {
    let v = || vec![Vertex::new("a", -2), Vertex::new("b", -2)];
    assert!(matches!(
        DualGraph::new(
            "g",
            vec![Vertex::new("a", -2), Vertex::new("a", -2)],
            &[] as &[(&str, &str, i64)]
        ),
        Err(Error::DuplicateVertex(_))
    ));
    assert!(matches!(
        DualGraph::new("g", v(), &[("a", "c", 1)]),
        Err(Error::UnknownVertex(_))
    ));
    assert!(matches!(
        DualGraph::new("g", v(), &[("a", "a", 1)]),
        Err(Error::SelfLoop(_))
    ));
    assert!(matches!(
        DualGraph::new("g", v(), &[("a", "b", 1), ("b", "a", 1)]),
        Err(Error::DuplicateEdge(..))
    ));
    assert!(matches!(
        DualGraph::new("g", v(), &[("a", "b", 0)]),
        Err(Error::NonPositive { .. })
    ));
    assert!(DualGraph::parse_json(r#"{"name":"x","vertices":[],"edges":[],"extra":1}"#).is_err());
}
