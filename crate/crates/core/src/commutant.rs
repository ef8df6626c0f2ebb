//! The commutant of `C(X)`: membership, spanning families and the
//! projection `E′₁(Σ f_k δ^k) = Σ χ_k f_k δ^k`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::Element;
use crate::dynsys::DynSys;
use crate::error::{Error, Result};
use crate::space::{CtsFun, Space};
use crate::EPS_SUPP;

/// Tolerance of the direct commutation test.
pub const COMMUTATOR_TOL: f64 = 1e-9;

fn check_space(sys: &DynSys, l: &Element) -> Result<()> {
    if Arc::ptr_eq(sys.space(), l.space()) || **sys.space() == **l.space() {
        Ok(())
    } else {
        Err(Error::SpaceMismatch)
    }
}

/// First index `k` whose coefficient has support outside `Fix_k`.
pub fn commutant_violation(sys: &DynSys, l: &Element) -> Option<i64> {
    let sp = sys.space();
    l.terms()
        .find(|&(k, f)| !sp.support(f, EPS_SUPP).is_subset(&sys.fix_set(k)))
        .map(|(k, _)| k)
}

/// `supp(f_k) ⊆ Fix_k` for every `k`.
pub fn is_in_commutant(sys: &DynSys, l: &Element) -> bool {
    commutant_violation(sys, l).is_none()
}

pub fn require_commutant(sys: &DynSys, l: &Element) -> Result<()> {
    check_space(sys, l)?;
    match commutant_violation(sys, l) {
        Some(k) => Err(Error::NotInCommutant { k }),
        None => Ok(()),
    }
}

/// Largest `‖ℓg − gℓ‖₁` over a spanning family of test functions `g`.
///
/// On the infinite backends the element is first moved to a wider window so
/// that bump functions can also probe points just beyond the original one,
/// where coefficients take their limit values.
pub fn commutator_defect(sys: &DynSys, l: &Element) -> Result<f64> {
    check_space(sys, l)?;
    let sp = sys.space();
    let (target, tests): (Arc<Space>, Vec<CtsFun>) = match sp.window() {
        None => (Arc::clone(sp), sp.continuous_basis()),
        Some(w) => {
            let deg = l.degree();
            let big = Arc::new(sp.enlarged(2 * deg + 4));
            let reach = w + deg + 2;
            let mut tests = vec![big.constant(num_complex::Complex64::new(1.0, 0.0))];
            tests.extend((0..big.window_len()).filter(|&i| big.rep_radius(i) <= reach).map(|i| big.bump(i)));
            (big, tests)
        }
    };
    let l = l.embed(&target)?;
    let mut worst: f64 = 0.0;
    for g in &tests {
        let d = l.right_mul_fn(g)?.sub(&l.left_mul_fn(g)?)?.ell1_norm();
        worst = worst.max(d);
    }
    Ok(worst)
}

/// Membership decided by commuting with test functions.
pub fn commutes_oracle(sys: &DynSys, l: &Element) -> Result<bool> {
    Ok(commutator_defect(sys, l)? <= COMMUTATOR_TOL)
}

/// The characteristic functions `χ_k` of `Fix°_k`, stored for the reduced
/// indices only.
#[derive(Clone, Debug, PartialEq)]
pub struct ChiFamily {
    lcm: Option<u64>,
    one: CtsFun,
    chi: BTreeMap<u64, CtsFun>,
}

impl ChiFamily {
    pub fn get(&self, k: i64) -> &CtsFun {
        if k == 0 {
            return &self.one;
        }
        let q = match self.lcm {
            Some(l) => crate::space::gcd_u64(k.unsigned_abs(), l),
            None => 1,
        };
        &self.chi[&q]
    }

    pub fn entries(&self) -> impl Iterator<Item = (u64, &CtsFun)> + '_ {
        self.chi.iter().map(|(&q, f)| (q, f))
    }
}

fn build_chi(sys: &DynSys) -> Result<ChiFamily> {
    if let Some((k, p)) = sys.projection_witness() {
        return Err(Error::ProjectionUnavailable { k, point: sys.space().label(&p) });
    }
    let sp = sys.space();
    let mut chi = BTreeMap::new();
    for q in sys.reduced_indices() {
        chi.insert(q, sp.indicator(&sp.interior(&sys.fix_set(q as i64)))?);
    }
    Ok(ChiFamily { lcm: sys.lcm(), one: sp.constant(num_complex::Complex64::new(1.0, 0.0)), chi })
}

/// The family `{χ_k}`, computed once per system.
pub fn chi_family(sys: &DynSys) -> Result<&ChiFamily> {
    sys.chi_cell().get_or_init(|| build_chi(sys)).as_ref().map_err(Clone::clone)
}

/// `E′₁(Σ f_k δ^k) = Σ χ_k f_k δ^k`.
pub fn e1_prime(sys: &DynSys, l: &Element) -> Result<Element> {
    check_space(sys, l)?;
    let chi = chi_family(sys)?;
    Ok(Element::from_terms(l.space(), l.terms().map(|(k, f)| (k, chi.get(k).mul(f)))))
}

/// `E₁(ℓ) = f₀ δ^0`.
pub fn e1(l: &Element) -> Element {
    Element::function(l.space(), l.coefficient(0))
}

/// A spanning family `{g δ^k : supp g ⊆ Fix_k, |k| ≤ bound}` of the
/// commutant elements of degree at most `bound`.
pub fn commutant_basis(sys: &DynSys, bound: u64) -> Vec<Element> {
    let sp = sys.space();
    let b = bound as i64;
    let mut out = Vec::new();
    for k in -b..=b {
        let fix = sys.fix_set(k);
        match sp.components() {
            Some((comp, count)) => {
                for c in 0..count {
                    if (0..comp.len()).all(|i| comp[i] != c || fix.members()[i]) {
                        let g = sp.bump(comp.iter().position(|&x| x == c).unwrap());
                        out.push(Element::monomial(sp, g, k));
                    }
                }
            }
            None => {
                for i in 0..sp.window_len() {
                    if fix.members()[i] {
                        out.push(Element::monomial(sp, sp.bump(i), k));
                    }
                }
                if let Ok(ind) = sp.indicator(&fix) {
                    if !ind.is_zero(0.0) {
                        out.push(Element::monomial(sp, ind, k));
                    }
                }
            }
        }
    }
    out
}

/// Why no projection exists, in a serializable form.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProjectionWitness {
    pub k: i64,
    pub point: String,
}

impl ProjectionWitness {
    pub fn from_error(e: &Error) -> Option<ProjectionWitness> {
        match e {
            Error::ProjectionUnavailable { k, point } => Some(ProjectionWitness { k: *k, point: point.clone() }),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::space::Point;
    use num_complex::Complex64;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn membership_examples() {
        let swap = fixtures::swap2();
        let sp = swap.space();
        let f = sp.function_from_values(vec![c(1.0), c(2.0)]).unwrap();
        assert!(is_in_commutant(&swap, &Element::function(sp, f.clone())));
        assert!(!is_in_commutant(&swap, &Element::monomial(sp, f.clone(), 1)));
        assert!(is_in_commutant(&swap, &Element::monomial(sp, f, 2)));

        let z = fixtures::int_shift(8);
        let sp = z.space();
        let g = sp.bump(sp.value_index(&Point::Int(0)).unwrap());
        assert!(!is_in_commutant(&z, &Element::monomial(sp, g, 1)));
    }

    #[test]
    fn oracle_examples() {
        let swap = fixtures::swap2();
        let sp = swap.space();
        let f = sp.function_from_values(vec![c(1.0), c(0.0)]).unwrap();
        assert!(commutes_oracle(&swap, &Element::function(sp, f.clone())).unwrap());
        assert!(commutes_oracle(&swap, &Element::monomial(sp, f, 2)).unwrap());
        assert!(!commutes_oracle(&swap, &Element::delta(sp, 1)).unwrap());
    }

    #[test]
    fn oracle_sees_beyond_the_window() {
        // Coefficient vanishing on the whole window but not at infinity.
        let z = fixtures::int_shift(4);
        let sp = z.space();
        let mut values = vec![c(0.0); sp.rep_count()];
        values[sp.limit_index().unwrap()] = c(1.0);
        let f = sp.function_from_values(values).unwrap();
        let l = Element::monomial(sp, f, 1);
        assert!(!is_in_commutant(&z, &l));
        assert!(!commutes_oracle(&z, &l).unwrap());
    }

    #[test]
    fn chi_examples() {
        let swap = fixtures::swap2();
        let chi = chi_family(&swap).unwrap();
        for k in -4..=4 {
            let expect = if k % 2 == 0 { 1.0 } else { 0.0 };
            assert_eq!(chi.get(k).values(), &[c(expect), c(expect)]);
        }
        let z = fixtures::int_shift(8);
        let chi = chi_family(&z).unwrap();
        assert!(chi.get(3).is_zero(0.0));
        assert_eq!(chi.get(0).values()[0], c(1.0));
        let t = fixtures::pair_swap_tails(8);
        assert_eq!(
            chi_family(&t).unwrap_err(),
            Error::ProjectionUnavailable { k: 1, point: "Origin".into() }
        );
    }

    #[test]
    fn projection_examples() {
        let swap = fixtures::swap2();
        let sp = swap.space();
        let f = |a: f64, b: f64| sp.function_from_values(vec![c(a), c(b)]).unwrap();
        let l = Element::from_terms(sp, [(0, f(1.0, 2.0)), (1, f(3.0, 4.0)), (2, f(5.0, 6.0))]);
        let expect = Element::from_terms(sp, [(0, f(1.0, 2.0)), (2, f(5.0, 6.0))]);
        assert_eq!(e1_prime(&swap, &l).unwrap(), expect);

        let z = fixtures::int_shift(8);
        let mut s = crate::sample::Sampler::new(z.space(), 1);
        let l = s.element(2);
        assert_eq!(e1_prime(&z, &l).unwrap(), e1(&l));
    }

    #[test]
    fn basis_examples() {
        let swap = fixtures::swap2();
        let b = commutant_basis(&swap, 2);
        assert_eq!(b.len(), 6);
        let mut ks: Vec<i64> = b.iter().map(|e| e.terms().next().unwrap().0).collect();
        ks.sort();
        assert_eq!(ks, vec![-2, -2, 0, 0, 2, 2]);

        let z = fixtures::int_shift(8);
        assert!(commutant_basis(&z, 1).iter().all(|e| e.terms().all(|(k, _)| k == 0)));

        let one = fixtures::one_point();
        let b = commutant_basis(&one, 3);
        assert_eq!(b.len(), 7);
        for (i, e) in b.iter().enumerate() {
            assert_eq!(*e, Element::delta(one.space(), i as i64 - 3));
        }
    }
}
