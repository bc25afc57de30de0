use amsreg::oracle::{dim_linear_system, tau_oracle, PointSample};
use amsreg::regularity::{expected_dimension, virtual_dimension};
use amsreg::MultiplicitySystem;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chi_identity_and_determinism(v in prop::collection::vec(1i128..6, 1..8), d in 1i128..14, seed in any::<u64>()) {
        let m = MultiplicitySystem::new(v).unwrap();
        let sample = PointSample::new(m.len(), seed).unwrap();
        let a = dim_linear_system(d, &m, &sample).unwrap();
        let b = dim_linear_system(d, &m, &PointSample::new(m.len(), seed).unwrap()).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.dimension >= -1 && a.h1 >= 0);
        prop_assert_eq!(a.dimension - a.h1, virtual_dimension(d, &m).unwrap());
    }

    #[test]
    fn regularity_is_at_least_the_counting_bound(v in prop::collection::vec(1i128..5, 1..7)) {
        let m = MultiplicitySystem::new(v).unwrap();
        let t = tau_oracle(&m, 1).unwrap();
        prop_assert!(expected_dimension(t.tau, &m).unwrap() >= -1);
        prop_assert_eq!(t, tau_oracle(&m, 1).unwrap());
    }
}
