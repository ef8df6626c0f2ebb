//! Seeded generators for functions and elements, used by tests and the
//! verification suites.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::Element;
use crate::dynsys::DynSys;
use crate::space::{CtsFun, Point, Space, SpaceKind};

pub struct Sampler {
    space: Arc<Space>,
    rng: ChaCha8Rng,
    radius: u64,
}

impl Sampler {
    /// Exceptional data is kept close to the centre of the window on the
    /// integer shift so that products and adjoints of small-degree elements
    /// stay representable.
    pub fn new(space: &Arc<Space>, seed: u64) -> Sampler {
        let radius = match space.kind() {
            SpaceKind::IntShift => 2.min(space.window().unwrap_or(0)),
            _ => space.window().unwrap_or(0),
        };
        Sampler { space: Arc::clone(space), rng: ChaCha8Rng::seed_from_u64(seed), radius }
    }

    pub fn with_radius(mut self, radius: u64) -> Sampler {
        self.radius = radius;
        self
    }

    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn complex(&mut self) -> Complex64 {
        Complex64::new(self.rng.random_range(-1.0..=1.0), self.rng.random_range(-1.0..=1.0))
    }

    pub fn unit(&mut self) -> Complex64 {
        Complex64::from_polar(1.0, self.rng.random_range(0.0..std::f64::consts::TAU))
    }

    /// A value that is zero a quarter of the time.
    fn sparse_complex(&mut self) -> Complex64 {
        if self.rng.random_bool(0.25) {
            Complex64::new(0.0, 0.0)
        } else {
            self.complex()
        }
    }

    pub fn function(&mut self) -> CtsFun {
        let sp = Arc::clone(&self.space);
        let values = match sp.components() {
            Some((comp, count)) => {
                let per: Vec<Complex64> = (0..count).map(|_| self.sparse_complex()).collect();
                comp.iter().map(|&c| per[c]).collect()
            }
            None => {
                let limit = self.sparse_complex();
                let lim = sp.limit_index().expect("infinite backend");
                (0..sp.rep_count())
                    .map(|i| {
                        if i != lim && sp.rep_radius(i) <= self.radius {
                            self.sparse_complex()
                        } else {
                            limit
                        }
                    })
                    .collect()
            }
        };
        sp.function_from_values(values).expect("sampled functions are continuous")
    }

    /// A function with closed support inside `Fix_k`.
    pub fn commutant_function(&mut self, sys: &DynSys, k: i64) -> CtsFun {
        let sp = Arc::clone(&self.space);
        let fix = sys.fix_set(k);
        let f = self.function();
        let inside: Vec<bool> = match sp.components() {
            Some((comp, count)) => {
                let ok: Vec<bool> = (0..count)
                    .map(|c| (0..comp.len()).all(|i| comp[i] != c || fix.members()[i]))
                    .collect();
                comp.iter().map(|&c| ok[c]).collect()
            }
            None => fix.members().to_vec(),
        };
        let mut values: Vec<Complex64> = f
            .values()
            .iter()
            .zip(&inside)
            .map(|(&v, &keep)| if keep { v } else { Complex64::new(0.0, 0.0) })
            .collect();
        if let Some(lim) = sp.limit_index() {
            // Tails outside Fix_k force the limit value, and with it every
            // value beyond the window, to vanish.
            if !fix.tails().iter().all(|&t| t) {
                values[lim] = Complex64::new(0.0, 0.0);
            }
        }
        sp.function_from_values(values).expect("masked function stays continuous")
    }

    /// Random element with indices in `[-degree, degree]`.
    pub fn element(&mut self, degree: u64) -> Element {
        let d = degree as i64;
        let mut terms = Vec::new();
        for k in -d..=d {
            if k == -d || k == d || self.rng.random_bool(0.7) {
                terms.push((k, self.function()));
            }
        }
        Element::from_terms(&self.space, terms)
    }

    /// Random element of the commutant of `C(X)`.
    pub fn commutant_element(&mut self, sys: &DynSys, degree: u64) -> Element {
        let d = degree as i64;
        let mut terms = Vec::new();
        for k in -d..=d {
            if self.rng.random_bool(0.8) {
                terms.push((k, self.commutant_function(sys, k)));
            }
        }
        Element::from_terms(&self.space, terms)
    }

    pub fn rep_point(&mut self) -> Point {
        let i = self.rng.random_range(0..self.space.rep_count());
        self.space.rep_point(i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::commutant::is_in_commutant;
    use crate::fixtures;

    #[test]
    fn sampled_commutant_elements_are_in_the_commutant() {
        for (_, sys) in fixtures::all() {
            let mut s = Sampler::new(sys.space(), 11);
            for _ in 0..30 {
                let e = s.commutant_element(&sys, 4);
                assert!(is_in_commutant(&sys, &e));
            }
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let sys = fixtures::pair_swap_tails(8);
        let a = Sampler::new(sys.space(), 5).element(3);
        let b = Sampler::new(sys.space(), 5).element(3);
        assert_eq!(a, b);
    }
}
