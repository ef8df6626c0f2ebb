mod common;

use std::sync::Arc;

use common::finite_space;
use crossprod_core::commutant::{commutes_oracle, e1, e1_prime, is_in_commutant};
use crossprod_core::dynsys::DynSys;
use crossprod_core::sample::Sampler;
use crossprod_core::verify::{circle_positive_closed_form, point_positive_closed_form, projected_square_closed_form};
use crossprod_core::{fixtures, Complex64, Element};
use proptest::prelude::*;

fn fixture() -> impl Strategy<Value = DynSys> {
    (0usize..5).prop_map(|i| fixtures::all().swap_remove(i).1)
}

fn degree(sys: &DynSys) -> u64 {
    crossprod_core::verify::sample_degree(sys)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(sys in fixture(), seed in any::<u64>()) {
        let d = degree(&sys);
        let mut s = Sampler::new(sys.space(), seed);
        let (a, b, c) = (s.element(d), s.element(d), s.element(d));
        let left = a.multiply(&b.add(&c).unwrap()).unwrap();
        let right = a.multiply(&b).unwrap().add(&a.multiply(&c).unwrap()).unwrap();
        prop_assert!(left.distance(&right).unwrap() < 1e-9);
        let assoc = a.multiply(&b).unwrap().multiply(&c).unwrap().distance(&a.multiply(&b.multiply(&c).unwrap()).unwrap()).unwrap();
        prop_assert!(assoc < 1e-9);
        prop_assert!(a.multiply(&b).unwrap().ell1_norm() <= a.ell1_norm() * b.ell1_norm() * (1.0 + 1e-12));
    }

    #[test]
    fn involution_axioms(sys in fixture(), seed in any::<u64>(), re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let d = degree(&sys);
        let mut s = Sampler::new(sys.space(), seed);
        let (a, b) = (s.element(d), s.element(d));
        let z = Complex64::new(re, im);
        prop_assert_eq!(a.adjoint().unwrap().adjoint().unwrap(), a.clone());
        prop_assert_eq!(a.adjoint().unwrap().ell1_norm(), a.ell1_norm());
        let scaled = a.scale(z).adjoint().unwrap().distance(&a.adjoint().unwrap().scale(z.conj())).unwrap();
        prop_assert!(scaled < 1e-12);
        let anti = a.multiply(&b).unwrap().adjoint().unwrap()
            .distance(&b.adjoint().unwrap().multiply(&a.adjoint().unwrap()).unwrap()).unwrap();
        prop_assert!(anti < 1e-9);
    }

    #[test]
    fn support_criterion_implies_commutation(space in finite_space(), seed in any::<u64>()) {
        // One direction holds on every finite space, Hausdorff or not.
        let sys = DynSys::new(space);
        let mut s = Sampler::new(sys.space(), seed);
        let l = s.commutant_element(&sys, 3);
        prop_assert!(is_in_commutant(&sys, &l));
        prop_assert!(commutes_oracle(&sys, &l).unwrap());
    }

    #[test]
    fn oracle_matches_support_criterion(sys in common::discrete_system(), seed in any::<u64>()) {
        let mut s = Sampler::new(sys.space(), seed);
        let l = if seed % 2 == 0 { s.element(3) } else { s.commutant_element(&sys, 3) };
        prop_assert_eq!(is_in_commutant(&sys, &l), commutes_oracle(&sys, &l).unwrap());
    }

    #[test]
    fn projection_properties(sys in common::discrete_system(), seed in any::<u64>()) {
        let mut s = Sampler::new(sys.space(), seed);
        let l = s.element(3);
        let p = e1_prime(&sys, &l).unwrap();
        prop_assert!(is_in_commutant(&sys, &p));
        prop_assert_eq!(e1_prime(&sys, &p).unwrap(), p.clone());
        prop_assert!(p.ell1_norm() <= l.ell1_norm());
        prop_assert_eq!(e1(&p), e1(&l));
        let sq = l.adjoint().unwrap().multiply(&l).unwrap();
        let closed = projected_square_closed_form(&sys, &l).unwrap();
        prop_assert!(e1_prime(&sys, &sq).unwrap().distance(&closed).unwrap() < 1e-9);
    }

    #[test]
    fn positive_closed_forms(sys in common::discrete_system(), seed in any::<u64>(), theta in 0.0f64..6.283) {
        let sp = Arc::clone(sys.space());
        let mut s = Sampler::new(&sp, seed);
        let l = s.element(3);
        let sq = e1_prime(&sys, &l.adjoint().unwrap().multiply(&l).unwrap()).unwrap();
        let c = Complex64::from_polar(1.0, theta);
        for x in sp.rep_points() {
            prop_assert!((sq.coefficient_at(0, &x).unwrap().re - point_positive_closed_form(&l, &x).unwrap()).abs() < 1e-9);
            if let Some(n) = sys.minimal_interior_order(&x).unwrap() {
                let direct = crossprod_core::characters::eval_formal(&sq, &x, n, c).unwrap();
                let closed = circle_positive_closed_form(&l, &x, n, c).unwrap();
                prop_assert!((direct - closed).norm() < 1e-9);
                prop_assert!(closed >= 0.0);
            }
        }
    }

    #[test]
    fn cesaro_error_bound(sys in fixture(), seed in any::<u64>(), n in 0u64..30) {
        let mut s = Sampler::new(sys.space(), seed);
        let l = s.element(degree(&sys));
        let d = l.degree();
        let gap = l.cesaro_mean(n).distance(&l).unwrap();
        prop_assert!(gap <= d as f64 / (n as f64 + 1.0) * l.ell1_norm() + 1e-12);
    }
}

#[test]
fn delta_powers_compose() {
    let sys = fixtures::cycle3();
    let sp = sys.space();
    let d = Element::delta(sp, 1);
    let cube = d.multiply(&d).unwrap().multiply(&d).unwrap();
    assert_eq!(cube, Element::delta(sp, 3));
    assert_eq!(d.multiply(&Element::delta(sp, -1)).unwrap(), Element::identity(sp));
    assert!(is_in_commutant(&sys, &cube));
    assert!(!is_in_commutant(&sys, &d));
}
