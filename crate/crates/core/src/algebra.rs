//! Finitely supported elements `Σ_k f_k δ^k` of the crossed product and
//! their twisted convolution, involution and norms.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::sample::Sampler;
use crate::space::{CtsFun, Point, Space};
use crate::EPS_ZERO;

/// `Σ_k f_k δ^k` with finitely many nonzero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Element {
    space: Arc<Space>,
    terms: BTreeMap<i64, CtsFun>,
}

fn same_space(a: &Arc<Space>, b: &Arc<Space>) -> Result<()> {
    if Arc::ptr_eq(a, b) || **a == **b {
        Ok(())
    } else {
        Err(Error::SpaceMismatch)
    }
}

/// Sum of nonnegative reals in increasing order, so that the result does not
/// depend on the order the terms were produced in.
fn ordered_sum(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    xs.into_iter().sum()
}

impl Element {
    pub fn zero(space: &Arc<Space>) -> Element {
        Element { space: Arc::clone(space), terms: BTreeMap::new() }
    }

    /// The unit `1·δ^0`.
    pub fn identity(space: &Arc<Space>) -> Element {
        Element::delta(space, 0)
    }

    pub fn delta(space: &Arc<Space>, k: i64) -> Element {
        Element::monomial(space, space.constant(Complex64::new(1.0, 0.0)), k)
    }

    /// `f δ^k`.
    pub fn monomial(space: &Arc<Space>, f: CtsFun, k: i64) -> Element {
        Element::from_terms(space, [(k, f)])
    }

    /// `f δ^0`.
    pub fn function(space: &Arc<Space>, f: CtsFun) -> Element {
        Element::monomial(space, f, 0)
    }

    /// Collects terms, adding repeated indices and dropping negligible ones.
    pub fn from_terms(space: &Arc<Space>, terms: impl IntoIterator<Item = (i64, CtsFun)>) -> Element {
        let mut map: BTreeMap<i64, CtsFun> = BTreeMap::new();
        for (k, f) in terms {
            assert_eq!(f.len(), space.rep_count(), "coefficient does not fit the space");
            match map.get_mut(&k) {
                Some(g) => *g = g.add(&f),
                None => {
                    map.insert(k, f);
                }
            }
        }
        let mut e = Element { space: Arc::clone(space), terms: map };
        e.prune();
        e
    }

    fn prune(&mut self) {
        self.terms.retain(|_, f| !f.is_zero(EPS_ZERO));
    }

    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &CtsFun)> + '_ {
        self.terms.iter().map(|(&k, f)| (k, f))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `max |k|` over stored coefficients (0 for the zero element).
    pub fn degree(&self) -> u64 {
        self.terms.keys().map(|k| k.unsigned_abs()).max().unwrap_or(0)
    }

    /// Smallest and largest stored index.
    pub fn index_range(&self) -> Option<(i64, i64)> {
        Some((*self.terms.keys().next()?, *self.terms.keys().next_back()?))
    }

    /// `f_k`; the zero function when absent. `coefficient(0)` is `E₁(ℓ)`.
    pub fn coefficient(&self, k: i64) -> CtsFun {
        self.terms.get(&k).cloned().unwrap_or_else(|| self.space.zero_fn())
    }

    /// `f_k(x)`.
    pub fn coefficient_at(&self, k: i64, x: &Point) -> Result<Complex64> {
        match self.terms.get(&k) {
            Some(f) => self.space.eval(f, x),
            None => {
                self.space.locate(x)?;
                Ok(Complex64::new(0.0, 0.0))
            }
        }
    }

    /// `a·ℓ + b·ℓ′`.
    pub fn linear_combine(a: Complex64, l: &Element, b: Complex64, m: &Element) -> Result<Element> {
        same_space(&l.space, &m.space)?;
        let terms = l.terms().map(|(k, f)| (k, f.scale(a))).chain(m.terms().map(|(k, f)| (k, f.scale(b))));
        Ok(Element::from_terms(&l.space, terms))
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        Element::linear_combine(Complex64::new(1.0, 0.0), self, Complex64::new(1.0, 0.0), other)
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        Element::linear_combine(Complex64::new(1.0, 0.0), self, Complex64::new(-1.0, 0.0), other)
    }

    pub fn scale(&self, c: Complex64) -> Element {
        Element::from_terms(&self.space, self.terms().map(|(k, f)| (k, f.scale(c))))
    }

    /// Twisted convolution `(ℓℓ′)(n) = Σ_k ℓ(k)·α^k(ℓ′(n−k))` with
    /// `α^k(f) = f∘σ^{−k}`.
    pub fn multiply(&self, other: &Element) -> Result<Element> {
        same_space(&self.space, &other.space)?;
        let mut out: BTreeMap<i64, CtsFun> = BTreeMap::new();
        for (k, f) in self.terms() {
            for (j, g) in other.terms() {
                let term = f.mul(&self.space.compose_sigma(g, -k)?);
                match out.get_mut(&(k + j)) {
                    Some(acc) => *acc = acc.add(&term),
                    None => {
                        out.insert(k + j, term);
                    }
                }
            }
        }
        let mut e = Element { space: Arc::clone(&self.space), terms: out };
        e.prune();
        Ok(e)
    }

    /// `ℓ*(n) = conj(α^n(ℓ(−n)))`, i.e. `f δ^k ↦ conj(f∘σ^k) δ^{−k}`.
    pub fn adjoint(&self) -> Result<Element> {
        let terms = self
            .terms()
            .map(|(k, f)| Ok((-k, self.space.compose_sigma(f, k)?.conj())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Element::from_terms(&self.space, terms))
    }

    /// `Σ_k sup|f_k|`.
    pub fn ell1_norm(&self) -> f64 {
        ordered_sum(self.terms.values().map(CtsFun::sup_norm).collect())
    }

    /// `‖ℓ − ℓ′‖₁`.
    pub fn distance(&self, other: &Element) -> Result<f64> {
        Ok(self.sub(other)?.ell1_norm())
    }

    /// `Σ_{|j|≤N} (1 − |j|/(N+1)) f_j δ^j`.
    pub fn cesaro_mean(&self, n: u64) -> Element {
        let terms = self.terms().filter(|(k, _)| k.unsigned_abs() <= n).map(|(k, f)| {
            let w = 1.0 - k.unsigned_abs() as f64 / (n as f64 + 1.0);
            (k, f.scale(Complex64::new(w, 0.0)))
        });
        Element::from_terms(&self.space, terms)
    }

    /// Re-expresses the element over an enlargement of its space.
    pub fn embed(&self, target: &Arc<Space>) -> Result<Element> {
        let terms = self
            .terms()
            .map(|(k, f)| Ok((k, self.space.embed(f, target)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Element::from_terms(target, terms))
    }

    /// `g·ℓ` for a function `g`.
    pub fn left_mul_fn(&self, g: &CtsFun) -> Result<Element> {
        Element::function(&self.space, g.clone()).multiply(self)
    }

    /// `ℓ·g` for a function `g`.
    pub fn right_mul_fn(&self, g: &CtsFun) -> Result<Element> {
        self.multiply(&Element::function(&self.space, g.clone()))
    }
}

/// A pseudo-random positive element `Σ_j l_j* l_j`, together with the
/// factors `l_j`.
pub fn random_positive_with_factors(
    space: &Arc<Space>,
    seed: u64,
    count: usize,
    degree_bound: u64,
) -> Result<(Element, Vec<Element>)> {
    assert!(count >= 1, "count must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sampler = Sampler::new(space, rng.random());
    let mut sum = Element::zero(space);
    let mut factors = Vec::with_capacity(count);
    for _ in 0..count {
        let deg = rng.random_range(0..=degree_bound);
        let l = sampler.element(deg);
        sum = sum.add(&l.adjoint()?.multiply(&l)?)?;
        factors.push(l);
    }
    Ok((sum, factors))
}

pub fn random_positive(space: &Arc<Space>, seed: u64, count: usize, degree_bound: u64) -> Result<Element> {
    random_positive_with_factors(space, seed, count, degree_bound).map(|(e, _)| e)
}
