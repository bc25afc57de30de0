mod common;

use amsreg::ams::Decoration;
use amsreg::surface::{euler_characteristic, intersect, DivisorClass, SurfaceModel};
use proptest::prelude::*;

fn surfaces() -> Vec<SurfaceModel> {
    common::recipes(32, Decoration::Plus).iter().map(|r| SurfaceModel::from_recipe(r).unwrap()).collect()
}

fn class_on(rank: usize) -> impl Strategy<Value = DivisorClass> {
    (-4i128..14, prop::collection::vec(-5i128..3, rank)).prop_map(|(a, c)| DivisorClass::new(a, c))
}

fn surface_and_class() -> impl Strategy<Value = (SurfaceModel, DivisorClass)> {
    let ss = surfaces();
    (0..ss.len()).prop_flat_map(move |k| {
        let s = ss[k].clone();
        class_on(s.rank()).prop_map(move |d| (s.clone(), d))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn serre_duality_for_chi((s, d) in surface_and_class()) {
        let kd = s.canonical().checked_sub(&d).unwrap();
        prop_assert_eq!(euler_characteristic(&d).unwrap(), euler_characteristic(&kd).unwrap());
    }

    #[test]
    fn cone_coordinates_round_trip((s, d) in surface_and_class()) {
        let coords = s.cone_coordinates(&d).unwrap();
        prop_assert_eq!(s.from_cone_coordinates(&coords).unwrap(), d.clone());
        prop_assert_eq!(s.is_effective(&d).unwrap(), coords.iter().all(|&x| x >= 0));
    }

    #[test]
    fn cohomology_is_consistent((s, d) in surface_and_class()) {
        let c = s.cohomology(&d).unwrap();
        prop_assert!(c.h0 >= 0 && c.h1 >= 0 && c.h2 >= 0);
        prop_assert_eq!(c.h0 - c.h1 + c.h2, c.chi);
        prop_assert_eq!(c.chi, euler_characteristic(&d).unwrap());
        // sections of a plane curve of degree a through the points
        let a = d.degree();
        let plane = if a < 0 { 0 } else { (a + 1) * (a + 2) / 2 };
        prop_assert!(c.h0 <= plane);
        if s.is_nef(&d).unwrap() {
            prop_assert_eq!(c.h1, 0);
        }
    }

    #[test]
    fn adding_a_curve_does_not_lose_sections((s, d) in surface_and_class(), i in 0usize..64) {
        let h0 = s.h0(&d).unwrap();
        let curve = if i >= s.rank() { s.h_tilde() } else { s.e_tilde(i) };
        let bigger = d.checked_add(&curve).unwrap();
        prop_assert!(s.h0(&bigger).unwrap() >= h0);
    }

    #[test]
    fn nef_reduction_keeps_sections((s, d) in surface_and_class()) {
        let r = s.nef_reduce(&d).unwrap();
        let mut back = r.terminal.clone().checked_add(&s.h_tilde().scaled(r.h_tilde_removed).unwrap()).unwrap();
        for (i, &k) in r.e_tilde_removed.iter().enumerate() {
            back = back.checked_add(&s.e_tilde(i).scaled(k).unwrap()).unwrap();
        }
        prop_assert_eq!(back, d.clone());
        prop_assert_eq!(s.h0(&r.terminal).unwrap(), s.h0(&d).unwrap());
    }

    #[test]
    fn intersection_is_symmetric_and_bilinear((s, d) in surface_and_class(), e in 0usize..64) {
        let other = if e >= s.rank() { s.canonical() } else { s.e_tilde(e) };
        prop_assert_eq!(intersect(&d, &other).unwrap(), intersect(&other, &d).unwrap());
        let twice = d.scaled(2).unwrap();
        prop_assert_eq!(intersect(&twice, &other).unwrap(), 2 * intersect(&d, &other).unwrap());
    }
}

#[test]
fn basis_curves_are_rational_with_negative_square() {
    for s in surfaces() {
        let k = s.canonical();
        let h = s.h_tilde();
        assert_eq!(intersect(&h, &h).unwrap(), -1);
        assert_eq!(intersect(&k, &h).unwrap(), -1);
        for i in 0..s.rank() {
            let e = s.e_tilde(i);
            let e2 = intersect(&e, &e).unwrap();
            assert!(e2 < 0);
            // arithmetic genus 0
            assert_eq!(e2 + intersect(&k, &e).unwrap(), -2);
        }
        assert_eq!(intersect(&s.e_tilde(s.rank() - 1), &s.e_tilde(s.rank() - 1)).unwrap(), -1);
    }
}
