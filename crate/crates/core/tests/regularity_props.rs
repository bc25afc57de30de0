mod common;

use amsreg::ams::{enumerate_representatives, GraphRecipe};
use amsreg::oracle::{dim_linear_system, tau_oracle, PointSample, DEFAULT_SEED};
use amsreg::regularity::{
    beta_bound, beta_bound_with, best_beta_with, conjecture_family, exact_regularity, nonspeciality_check,
    regularity_bracket, representative_order, BestBetaOptions, BetaOptions, BoundReport, NonspecialityVerdict,
    VerdictKind,
};
use amsreg::MultiplicitySystem;
use proptest::prelude::*;

fn sys(s: &str) -> MultiplicitySystem {
    s.parse().unwrap()
}

fn recipe(s: &str) -> GraphRecipe {
    s.parse().unwrap()
}

/// Sorted systems with at most `len` points, entries up to `top` and at
/// most `budget` conditions.
fn small_system(len: usize, top: i128, budget: i128) -> impl Strategy<Value = MultiplicitySystem> {
    prop::collection::vec(1..=top, 1..=len).prop_filter_map("too many conditions", move |mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        let m = MultiplicitySystem::new(v).unwrap();
        (amsreg::arith::conditions(m.as_slice()).unwrap() <= budget).then_some(m)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn beta_bounds_the_oracle_regularity(m in small_system(9, 7, 300)) {
        let tau = tau_oracle(&m, DEFAULT_SEED).unwrap().tau;
        let sample = PointSample::new(m.support_len(), DEFAULT_SEED).unwrap();
        for r in enumerate_representatives(representative_order(&m)).unwrap() {
            let beta = beta_bound(&m, &r).unwrap().beta;
            prop_assert!(tau <= beta, "{:?} on {}: tau {} beta {}", m, r, tau, beta);
            prop_assert_eq!(dim_linear_system(beta, &m, &sample).unwrap().h1, 0);
        }
    }

    #[test]
    fn bracket_exact_and_beta_are_ordered(m in small_system(7, 6, 200)) {
        for r in enumerate_representatives(representative_order(&m)).unwrap() {
            let beta = beta_bound(&m, &r).unwrap().beta;
            let exact = exact_regularity(&m, &r).unwrap();
            let bracket = regularity_bracket(&m, &r).unwrap();
            if let (Some(tau), Some(lower)) = (exact.tau, bracket.lower) {
                prop_assert!(lower <= tau && tau <= beta, "{:?} on {}", m, r);
            }
            if exact.kind == VerdictKind::Exact {
                prop_assert_eq!(exact.tau.unwrap(), tau_oracle(&m, DEFAULT_SEED).unwrap().tau);
            }
        }
    }

    #[test]
    fn certified_nonspeciality_holds_at_generic_points(m in small_system(7, 6, 200), extra in 0i128..4) {
        let sample = PointSample::new(m.support_len(), DEFAULT_SEED).unwrap();
        for r in enumerate_representatives(representative_order(&m)).unwrap() {
            let d = m.get(0) + m.get(1) - 1 + extra;
            let certified = match nonspeciality_check(d, &m, &r).unwrap() {
                NonspecialityVerdict::NonspecialCertified { .. } => true,
                NonspecialityVerdict::Equivalence { nonspecial, .. } => nonspecial,
                NonspecialityVerdict::Inapplicable { .. } => false,
            };
            if certified {
                let dim = dim_linear_system(d, &m, &sample).unwrap();
                prop_assert_eq!(dim.h1, 0, "{:?} on {} at degree {}", m, r, d);
            }
        }
    }
}

#[test]
fn short_recipes_never_lose_to_the_full_chain() {
    for points in [10usize, 20, 50] {
        let n = points - 1;
        let short = GraphRecipe::plus(vec![(n / 2 + 1) as u64]).unwrap();
        let long = GraphRecipe::plus(vec![points as u64]).unwrap();
        for mult in 1..=6 {
            let m = MultiplicitySystem::new(vec![mult; points]).unwrap();
            let a = beta_bound(&m, &short).unwrap().beta;
            let b = beta_bound(&m, &long).unwrap().beta;
            assert!(a <= b, "{points} points of multiplicity {mult}: {a} > {b}");
        }
    }
}

#[test]
fn reports_are_deterministic_and_round_trip() {
    let opts = BetaOptions { trace: true, timing: false };
    let m = sys("40,10x19");
    let r = recipe("(10)+");
    let a = beta_bound_with(&m, &r, opts).unwrap();
    let b = beta_bound_with(&m, &r, opts).unwrap();
    assert_eq!(a, b);
    let json = serde_json::to_string(&a).unwrap();
    assert_eq!(json, serde_json::to_string(&b).unwrap());
    let back: BoundReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, a);
    assert_eq!(serde_json::to_string(&back).unwrap(), json);
    // field order is the declaration order
    let keys: Vec<&str> = ["\"input\"", "\"recipe\"", "\"permutation\"", "\"a\"", "\"stage_indices\"", "\"beta\""]
        .into_iter()
        .collect();
    let positions: Vec<usize> = keys.iter().map(|k| json.find(k).unwrap()).collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn best_beta_does_not_depend_on_the_worker_count() {
    for m in ["5,3,3,2,2,1", "4,4,4,4,4,4,4"] {
        let m = sys(m);
        let one = best_beta_with(&m, BestBetaOptions { jobs: Some(1), ..Default::default() }).unwrap();
        let four = best_beta_with(&m, BestBetaOptions { jobs: Some(4), ..Default::default() }).unwrap();
        assert_eq!(one, four);
        assert_eq!(one.beta, one.candidates.iter().map(|c| c.beta).min().unwrap());
    }
}

#[test]
fn published_families() {
    let f = conjecture_family(&recipe("(2,2)+"), 6).unwrap();
    assert!(f.iter().any(|q| q.to_string() == "m2 - m3 - m4 >= 0"), "{f:?}");
    let f = conjecture_family(&recipe("(3)+"), 4).unwrap();
    assert!(f.iter().any(|q| q.to_string() == "m0 - m1 - m2 >= 0"), "{f:?}");
}

#[test]
fn exact_family_at_the_published_starting_point() {
    let v = regularity_bracket(&sys("9000,1000x19"), &recipe("(10)+")).unwrap();
    assert_eq!((v.kind, v.tau), (VerdictKind::Exact, Some(10000)));
}
