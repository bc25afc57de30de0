mod common;

use amsreg::ams::{build_graph, Decoration};
use amsreg::proximity::{
    excesses, inverse_proximity_matrix, is_consistent, proximity_matrix, unload, unload_by, IntMatrix,
};
use amsreg::{MultiplicitySystem, ProximityGraph};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn graphs() -> Vec<ProximityGraph> {
    common::recipes(32, Decoration::Plus)
        .into_iter()
        .chain(common::recipes(16, Decoration::Minus))
        .chain(common::recipes(16, Decoration::Plain))
        .map(|r| build_graph(&r).unwrap())
        .collect()
}

fn graph_and_system() -> impl Strategy<Value = (ProximityGraph, MultiplicitySystem)> {
    let gs = graphs();
    (0..gs.len(), prop::collection::vec(0i128..10, 1..24)).prop_map(move |(k, mut v)| {
        let g = gs[k].clone();
        v.truncate(g.n_points());
        (g, MultiplicitySystem::new(v).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn unloading_is_confluent((g, m) in graph_and_system(), seed in any::<u64>()) {
        let (greedy, _) = unload(&g, &m).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (other, _) = unload_by(&g, &m, |c| rng.gen_range(0..c.len())).unwrap();
        prop_assert_eq!(greedy, other);
    }

    #[test]
    fn unloading_reaches_a_consistent_system((g, m) in graph_and_system()) {
        let (out, trace) = unload(&g, &m).unwrap();
        prop_assert!(is_consistent(&g, &out).unwrap());
        prop_assert_eq!(trace.replay(&g, &m).unwrap(), out.clone());
        prop_assert_eq!(trace.all_tame, trace.steps.iter().all(|s| s.excess == -1));
        // never decreases the multiplicity at the first point
        prop_assert!(out.get(0) >= m.get(0));
    }

    #[test]
    fn unloading_is_idempotent((g, m) in graph_and_system()) {
        let (once, _) = unload(&g, &m).unwrap();
        let (twice, trace) = unload(&g, &once).unwrap();
        prop_assert_eq!(once, twice);
        prop_assert!(trace.steps.is_empty());
    }

    #[test]
    fn padding_with_free_points_commutes_with_unloading((g, m) in graph_and_system(), extra in 1usize..5) {
        let big = g.extend_free(extra);
        let (small, _) = unload(&g, &m).unwrap();
        let (large, _) = unload(&big, &m).unwrap();
        prop_assert_eq!(large, small.padded(big.n_points()).unwrap());
    }

    #[test]
    fn excesses_are_the_proximity_matrix_applied((g, m) in graph_and_system()) {
        let p = proximity_matrix(&g);
        let m = m.padded(g.n_points()).unwrap();
        // rho_j = sum_i P_ij m_i
        let rho: Vec<i128> = (0..g.n_points())
            .map(|j| (0..g.n_points()).map(|i| p.get(i, j) * m.get(i)).sum())
            .collect();
        prop_assert_eq!(excesses(&g, &m).unwrap().0, rho);
    }
}

#[test]
fn inverse_proximity_matrices() {
    for g in graphs() {
        let p = proximity_matrix(&g);
        let q = inverse_proximity_matrix(&g).unwrap();
        assert_eq!(p.checked_mul(&q).unwrap(), IntMatrix::identity(g.n_points()));
        assert_eq!(q.checked_mul(&p).unwrap(), IntMatrix::identity(g.n_points()));
        for i in 0..g.n_points() {
            assert!(q.row(i).iter().all(|&x| x >= 0), "negative entry in row {i}");
            assert_eq!(q.get(i, i), 1);
        }
    }
}
