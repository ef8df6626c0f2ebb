mod common;

use crossprod_core::characters::{eval_character, eval_psi, psi_factorization, separating_family, Character};
use crossprod_core::gns::{cstar_norm, rep_matrix, state_eval, RepDescriptor};
use crossprod_core::sample::Sampler;
use crossprod_core::{fixtures, Complex64, Element, Point, TGrid};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn characters_are_multiplicative(sys in common::discrete_system(), seed in any::<u64>()) {
        let grid = TGrid::new(8).unwrap();
        let mut s = Sampler::new(sys.space(), seed);
        let (a, b) = (s.commutant_element(&sys, 4), s.commutant_element(&sys, 4));
        let ab = a.multiply(&b).unwrap();
        for chi in separating_family(&sys, &grid).unwrap() {
            let lhs = eval_character(&sys, &chi, &ab).unwrap();
            let rhs = eval_character(&sys, &chi, &a).unwrap() * eval_character(&sys, &chi, &b).unwrap();
            prop_assert!((lhs - rhs).norm() < 1e-9);
            prop_assert!(eval_character(&sys, &chi, &a).unwrap().norm() <= a.ell1_norm() + 1e-12);
        }
    }

    #[test]
    fn psi_factors(sys in common::discrete_system(), seed in any::<u64>(), theta in 0.0f64..6.283) {
        let mut s = Sampler::new(sys.space(), seed);
        let l = s.commutant_element(&sys, 4);
        let z = Complex64::from_polar(1.0, theta);
        for x in sys.space().rep_points() {
            let via = eval_character(&sys, &psi_factorization(&sys, &x, z).unwrap(), &l).unwrap();
            prop_assert!((eval_psi(&sys, &x, z, &l).unwrap() - via).norm() < 1e-10);
        }
    }

    #[test]
    fn periodic_models_are_star_homomorphisms(sys in common::discrete_system(), seed in any::<u64>(), theta in 0.0f64..6.283) {
        let mut s = Sampler::new(sys.space(), seed);
        let (a, b) = (s.element(3), s.element(3));
        let lambda = Complex64::from_polar(1.0, theta);
        for (x, p) in sys.periodic_orbit_representatives() {
            let d = RepDescriptor::Periodic { x, p, lambda };
            let ma = rep_matrix(&sys, &d, &a).unwrap().matrix;
            let mb = rep_matrix(&sys, &d, &b).unwrap().matrix;
            let mab = rep_matrix(&sys, &d, &a.multiply(&b).unwrap()).unwrap().matrix;
            prop_assert!((mab - &ma * &mb).norm() < 1e-9);
            let mstar = rep_matrix(&sys, &d, &a.adjoint().unwrap()).unwrap().matrix;
            prop_assert!((mstar - ma.adjoint()).norm() < 1e-12);
            let sq = a.adjoint().unwrap().multiply(&a).unwrap();
            let st = state_eval(&sys, &d, &sq).unwrap();
            prop_assert!(st.re >= -1e-12 && st.im.abs() < 1e-9);
        }
    }

    #[test]
    fn enveloping_norm_between_state_bound_and_l1(seed in any::<u64>()) {
        let sys = fixtures::cycle3();
        let grid = TGrid::new(32).unwrap();
        let l = Sampler::new(sys.space(), seed).element(3);
        let c = cstar_norm(&sys, &l, &grid, 4).unwrap().estimate;
        prop_assert!(c.value <= l.ell1_norm() * (1.0 + 1e-12));
        for x in sys.space().rep_points() {
            prop_assert!(l.coefficient_at(0, &x).unwrap().norm() <= c.value + 1e-9);
        }
    }
}

#[test]
fn separating_family_shapes() {
    let grid = TGrid::new(4).unwrap();
    let z = fixtures::int_shift(3);
    let fam = separating_family(&z, &grid).unwrap();
    assert!(fam.iter().all(|c| matches!(c, Character::OmegaX(_))));
    assert!(fam.iter().any(|c| c.point() == &Point::Int(0)));

    let swap = fixtures::swap2();
    let fam = separating_family(&swap, &grid).unwrap();
    assert_eq!(fam.len(), 2 * 4);
    assert!(fam.iter().all(|c| matches!(c, Character::OmegaXC { n: 2, .. })));
}

#[test]
fn off_circle_characters_on_a_monomial() {
    let one = fixtures::one_point();
    let sp = one.space();
    let chi = Character::omega_xc(&one, Point::Finite(0), Complex64::new(0.0, 1.0)).unwrap();
    let l = Element::delta(sp, 2).add(&Element::delta(sp, 1)).unwrap();
    let v = eval_character(&one, &chi, &l).unwrap();
    assert!((v - Complex64::new(-1.0, 1.0)).norm() < 1e-15);
}
