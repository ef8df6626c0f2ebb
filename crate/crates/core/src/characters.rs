//! Characters of the commutant of `C(X)` and sup norms over them.
//!
//! Every character is `ω_x: ℓ ↦ f₀(x)` for `x` outside `∪_q Fix°_q`, or
//! `ω_{x,c}: ℓ ↦ Σ_j f_{jn}(x) c^j` with `|c| = 1`, where `n` is the least
//! order with `x ∈ Fix°_n`. They are the images of `(x, z) ↦ ψ_{x,z}`,
//! `ψ_{x,z}(ℓ) = Σ_k f_k(x) z^k`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::Element;
use crate::commutant::require_commutant;
use crate::dynsys::DynSys;
use crate::error::{Error, Result};
use crate::space::Point;

const UNIT_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum Character {
    OmegaX(Point),
    OmegaXC { x: Point, n: u64, c: Complex64 },
}

/// The fibre type of a point under restriction to `C(X)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PointClass {
    /// One character over `ev_x`.
    Single,
    /// A circle `{ω_{x,c} : c ∈ T}` over `ev_x`.
    Circle { n: u64 },
}

pub fn classify_point(sys: &DynSys, x: &Point) -> Result<PointClass> {
    Ok(match sys.minimal_interior_order(x)? {
        None => PointClass::Single,
        Some(n) => PointClass::Circle { n },
    })
}

impl Character {
    pub fn omega_x(sys: &DynSys, x: Point) -> Result<Character> {
        match classify_point(sys, &x)? {
            PointClass::Single => Ok(Character::OmegaX(x)),
            PointClass::Circle { .. } => Err(Error::InvalidCharacter(format!(
                "{} lies in the interior of a fixed-point set",
                sys.space().label(&x)
            ))),
        }
    }

    pub fn omega_xc(sys: &DynSys, x: Point, c: Complex64) -> Result<Character> {
        if (c.norm() - 1.0).abs() > UNIT_TOL {
            return Err(Error::InvalidCharacter(format!("|c| = {} is not 1", c.norm())));
        }
        match classify_point(sys, &x)? {
            PointClass::Circle { n } => Ok(Character::OmegaXC { x, n, c }),
            PointClass::Single => Err(Error::InvalidCharacter(format!(
                "{} lies outside every interior of a fixed-point set",
                sys.space().label(&x)
            ))),
        }
    }

    pub fn point(&self) -> &Point {
        match self {
            Character::OmegaX(x) | Character::OmegaXC { x, .. } => x,
        }
    }
}

/// `Σ_j f_{jn}(x) c^j` for arbitrary nonzero `c`, without membership checks.
pub fn eval_formal(l: &Element, x: &Point, n: u64, c: Complex64) -> Result<Complex64> {
    let n = n as i64;
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, f) in l.terms() {
        if k % n == 0 {
            acc += l.space().eval(f, x)? * c.powi((k / n) as i32);
        }
    }
    Ok(acc)
}

pub fn eval_character(sys: &DynSys, chi: &Character, l: &Element) -> Result<Complex64> {
    require_commutant(sys, l)?;
    match chi {
        Character::OmegaX(x) => l.coefficient_at(0, x),
        Character::OmegaXC { x, n, c } => eval_formal(l, x, *n, *c),
    }
}

/// `ψ_{x,z}(ℓ) = Σ_k f_k(x) z^k`.
pub fn eval_psi(sys: &DynSys, x: &Point, z: Complex64, l: &Element) -> Result<Complex64> {
    require_commutant(sys, l)?;
    psi_unchecked(l, x, z)
}

fn psi_unchecked(l: &Element, x: &Point, z: Complex64) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, f) in l.terms() {
        acc += l.space().eval(f, x)? * z.powi(k as i32);
    }
    Ok(acc)
}

/// The character `ψ_{x,z}`: `ω_x`, or `ω_{x, z^n}`.
pub fn psi_factorization(sys: &DynSys, x: &Point, z: Complex64) -> Result<Character> {
    Ok(match classify_point(sys, x)? {
        PointClass::Single => Character::OmegaX(*x),
        PointClass::Circle { n } => Character::OmegaXC { x: *x, n, c: z.powi(n as i32) },
    })
}

/// `ω ↦ ω*`, with `ω*_{x,c} = ω_{x, 1/c̄}`.
pub fn adjoint_character(chi: &Character) -> Character {
    match chi {
        Character::OmegaX(x) => Character::OmegaX(*x),
        Character::OmegaXC { x, n, c } => Character::OmegaXC { x: *x, n: *n, c: c.conj().inv() },
    }
}

/// Equispaced sample of the unit circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TGrid {
    g: usize,
}

impl TGrid {
    pub fn new(g: usize) -> Result<TGrid> {
        if g < 4 {
            return Err(Error::Parse(format!("grid resolution must be at least 4, got {g}")));
        }
        Ok(TGrid { g })
    }

    pub fn resolution(&self) -> usize {
        self.g
    }

    pub fn angle(&self, j: usize) -> f64 {
        TAU * j as f64 / self.g as f64
    }

    pub fn sample(&self, j: usize) -> Complex64 {
        Complex64::from_polar(1.0, self.angle(j))
    }

    pub fn samples(&self) -> impl Iterator<Item = Complex64> + '_ {
        (0..self.g).map(|j| self.sample(j))
    }
}

/// A norm computed as a sup over samples: `value ≤ true ≤ value + error_bound`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NormEstimate {
    pub value: f64,
    pub error_bound: f64,
}

impl NormEstimate {
    pub fn upper(&self) -> f64 {
        self.value + self.error_bound
    }
}

/// Golden-section search for a local maximum of `f` on `[a, b]`.
pub(crate) fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..iters {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        }
    }
    if f1 > f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Certified slack for the sup over `T` of `|p|`, `p` a trigonometric
/// polynomial with frequencies in `[lo, hi]`, given its maximum `grid_max` on
/// a `G`-point grid and the Lipschitz constant `lip` of `θ ↦ p(e^{iθ})`.
///
/// Uses the smaller of `lip·π/G` and `grid_max·(sec(Dπ/G) − 1)`,
/// `D = (hi − lo)/2`; the latter follows from the van der Corput-Schaake
/// inequality applied to `Re(e^{−iφ} e^{−i(lo+hi)θ/2} p)`.
pub(crate) fn grid_slack(grid_max: f64, lip: f64, lo: i64, hi: i64, g: usize) -> f64 {
    let h = PI / g as f64;
    let lip_bound = lip * h;
    let d = (hi - lo) as f64 / 2.0;
    let cos_bound = if d * h < PI / 2.0 {
        grid_max * (1.0 / (d * h).cos() - 1.0)
    } else {
        f64::INFINITY
    };
    lip_bound.min(cos_bound)
}

/// `sup_{x,z} |ψ_{x,z}(ℓ)|`, the sup norm over all characters.
pub fn gelfand_norm(sys: &DynSys, l: &Element, grid: &TGrid) -> Result<NormEstimate> {
    require_commutant(sys, l)?;
    let Some((lo, hi)) = l.index_range() else {
        return Ok(NormEstimate { value: 0.0, error_bound: 0.0 });
    };
    let sp = sys.space();
    let mut best = (0.0, sp.rep_point(0), 0.0);
    for x in sp.rep_points() {
        for j in 0..grid.resolution() {
            let v = psi_unchecked(l, &x, grid.sample(j))?.norm();
            if v > best.0 {
                best = (v, x, grid.angle(j));
            }
        }
    }
    let (grid_max, x, theta) = best;
    let h = TAU / grid.resolution() as f64;
    let f = |t: f64| psi_unchecked(l, &x, Complex64::from_polar(1.0, t)).map(|v| v.norm()).unwrap_or(0.0);
    let (_, refined) = golden_max(f, theta - h, theta + h, 60);
    let value = grid_max.max(refined);
    let lip: f64 = l.terms().map(|(k, f)| k.unsigned_abs() as f64 * f.sup_norm()).sum();
    let upper = grid_max + grid_slack(grid_max, lip, lo, hi, grid.resolution());
    let arith = 1e-12 * l.ell1_norm();
    Ok(NormEstimate { value, error_bound: (upper - value).max(0.0) + arith })
}

/// Characters at representatives of `Aper(σ) ∪ ∪_q Fix°_q`: every window and
/// limit point of that set, and the first point beyond the window on each
/// tail that belongs to it. The outer points carry the limit values of
/// coefficients, which window points alone cannot see.
pub fn separating_family(sys: &DynSys, grid: &TGrid) -> Result<Vec<Character>> {
    let sp = sys.space();
    let set = sys.aper_set().union(&sys.union_fix_interiors());
    let mut points: Vec<Point> = sp.rep_points().filter(|p| sp.contains(&set, p).unwrap()).collect();
    for t in 0..sp.tail_count() {
        let p = sp.tail_point(t, 1);
        if sp.contains(&set, &p)? {
            points.push(p);
        }
    }
    let mut out = Vec::new();
    for x in points {
        match classify_point(sys, &x)? {
            PointClass::Single => out.push(Character::OmegaX(x)),
            PointClass::Circle { n } => {
                out.extend(grid.samples().map(|c| Character::OmegaXC { x, n, c }));
            }
        }
    }
    Ok(out)
}

/// Whether Fourier recovery from character values identifies `ℓ`: values of
/// the family at `x` determine the coefficients `f_{jn}(x)` by inverse DFT.
#[derive(Clone, Debug, PartialEq)]
pub struct SemisimplicityProbe {
    /// `max |ω(ℓ)|` over the separating family.
    pub max_character_value: f64,
    /// The element rebuilt from those values.
    pub reconstructed: Element,
}

pub fn semisimplicity_probe(sys: &DynSys, l: &Element, grid: &TGrid) -> Result<SemisimplicityProbe> {
    require_commutant(sys, l)?;
    let sp = sys.space();
    let g = grid.resolution();
    if let Some((lo, hi)) = l.index_range() {
        if (hi - lo) as usize >= g {
            return Err(Error::Parse(format!("grid of {g} points cannot resolve index span {lo}..{hi}")));
        }
    }
    let family = separating_family(sys, grid)?;
    let mut max_value: f64 = 0.0;
    // coefficient index -> representative index -> value
    let mut recovered: std::collections::BTreeMap<i64, Vec<Complex64>> = Default::default();
    let mut seen = vec![false; sp.rep_count()];
    let slot = |k: i64, i: usize, v: Complex64, rec: &mut std::collections::BTreeMap<i64, Vec<Complex64>>| {
        rec.entry(k).or_insert_with(|| vec![Complex64::new(0.0, 0.0); sp.rep_count()])[i] = v;
    };

    let mut i = 0;
    while i < family.len() {
        let x = *family[i].point();
        let idx = sp.value_index(&x)?;
        match &family[i] {
            Character::OmegaX(_) => {
                let v = eval_character(sys, &family[i], l)?;
                max_value = max_value.max(v.norm());
                if !seen[idx] {
                    slot(0, idx, v, &mut recovered);
                }
                i += 1;
            }
            Character::OmegaXC { n, .. } => {
                let n = *n as i64;
                let values = family[i..i + g]
                    .iter()
                    .map(|chi| eval_character(sys, chi, l))
                    .collect::<Result<Vec<_>>>()?;
                max_value = values.iter().fold(max_value, |m, v| m.max(v.norm()));
                if !seen[idx] {
                    // Σ_j a_j c_m^j sampled at c_m = e^{2πim/G}; j ≡ r mod G.
                    let (lo, hi) = l.index_range().unwrap_or((0, 0));
                    let (jlo, jhi) = (-((-lo).div_euclid(n)), hi.div_euclid(n));
                    for j in jlo..=jhi {
                        let a: Complex64 = values
                            .iter()
                            .enumerate()
                            .map(|(m, v)| v * Complex64::from_polar(1.0, -TAU * (j * m as i64) as f64 / g as f64))
                            .sum::<Complex64>()
                            / g as f64;
                        slot(j * n, idx, a, &mut recovered);
                    }
                }
                i += g;
            }
        }
        seen[idx] = true;
    }

    let terms = recovered
        .into_iter()
        .map(|(k, mut values)| {
            if let Some(lim) = sp.limit_index() {
                if !seen[lim] {
                    values[lim] = Complex64::new(0.0, 0.0);
                }
            }
            for v in values.iter_mut() {
                if v.norm() <= 1e-12 {
                    *v = Complex64::new(0.0, 0.0);
                }
            }
            Ok((k, sp.function_from_values(values)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SemisimplicityProbe { max_character_value: max_value, reconstructed: Element::from_terms(sp, terms) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn classification_examples() {
        let z = fixtures::int_shift(8);
        assert_eq!(classify_point(&z, &Point::Int(7)).unwrap(), PointClass::Single);
        assert_eq!(classify_point(&z, &Point::Infinity).unwrap(), PointClass::Single);
        let t = fixtures::pair_swap_tails(8);
        assert_eq!(classify_point(&t, &Point::Origin).unwrap(), PointClass::Circle { n: 2 });
    }

    #[test]
    fn evaluation_examples() {
        let swap = fixtures::swap2();
        let sp = swap.space();
        let l = Element::from_terms(
            sp,
            [(0, sp.constant(c(1.0, 0.0))), (2, sp.function_from_values(vec![c(4.0, 0.0), c(6.0, 0.0)]).unwrap())],
        );
        let chi = Character::omega_xc(&swap, Point::Finite(0), c(-1.0, 0.0)).unwrap();
        assert_eq!(eval_character(&swap, &chi, &l).unwrap(), c(-3.0, 0.0));

        let one = fixtures::one_point();
        let sp = one.space();
        let l = Element::from_terms(sp, [(-1, sp.constant(c(2.0, 0.0))), (3, sp.constant(c(0.0, 1.0)))]);
        let z = c(0.6, 0.8);
        let chi = Character::omega_xc(&one, Point::Finite(0), z).unwrap();
        let expected = c(2.0, 0.0) * z.inv() + c(0.0, 1.0) * z.powi(3);
        assert!((eval_character(&one, &chi, &l).unwrap() - expected).norm() < 1e-15);

        let zs = fixtures::int_shift(8);
        let sp = zs.space();
        let mut values = vec![c(0.0, 0.0); sp.rep_count()];
        values[sp.limit_index().unwrap()] = c(5.0, 0.0);
        let l = Element::function(sp, sp.function_from_values(values).unwrap());
        let chi = Character::omega_x(&zs, Point::Infinity).unwrap();
        assert_eq!(eval_character(&zs, &chi, &l).unwrap(), c(5.0, 0.0));
    }

    #[test]
    fn non_commutant_elements_are_rejected() {
        let swap = fixtures::swap2();
        let chi = Character::omega_xc(&swap, Point::Finite(0), c(1.0, 0.0)).unwrap();
        let err = eval_character(&swap, &chi, &Element::delta(swap.space(), 1)).unwrap_err();
        assert_eq!(err, Error::NotInCommutant { k: 1 });
    }

    #[test]
    fn character_invariants() {
        let swap = fixtures::swap2();
        assert!(Character::omega_xc(&swap, Point::Finite(0), c(2.0, 0.0)).is_err());
        assert!(Character::omega_x(&swap, Point::Finite(0)).is_err());
        assert!(TGrid::new(3).is_err());
    }

    #[test]
    fn psi_examples() {
        let swap = fixtures::swap2();
        let sp = swap.space();
        let l = Element::monomial(sp, sp.function_from_values(vec![c(4.0, 0.0), c(6.0, 0.0)]).unwrap(), 2);
        let z = c(0.0, 1.0);
        assert!((eval_psi(&swap, &Point::Finite(0), z, &l).unwrap() - c(4.0, 0.0) * z * z).norm() < 1e-15);
        assert_eq!(
            psi_factorization(&swap, &Point::Finite(0), c(1.0, 0.0)).unwrap(),
            Character::OmegaXC { x: Point::Finite(0), n: 2, c: c(1.0, 0.0) }
        );

        let t = fixtures::pair_swap_tails(8);
        match psi_factorization(&t, &Point::Origin, c(0.0, 1.0)).unwrap() {
            Character::OmegaXC { n, c: cc, .. } => {
                assert_eq!(n, 2);
                assert!((cc - c(-1.0, 0.0)).norm() < 1e-15);
            }
            other => panic!("unexpected {other:?}"),
        }
        let z8 = fixtures::int_shift(8);
        assert_eq!(
            psi_factorization(&z8, &Point::Int(3), c(0.0, 1.0)).unwrap(),
            Character::OmegaX(Point::Int(3))
        );
        let id = Element::identity(z8.space());
        assert_eq!(eval_psi(&z8, &Point::Int(3), c(0.0, 1.0), &id).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn adjoint_character_examples() {
        let chi = Character::OmegaXC { x: Point::Finite(0), n: 2, c: c(0.0, 1.0) };
        assert_eq!(adjoint_character(&chi), chi);
        let w = Character::OmegaX(Point::Int(1));
        assert_eq!(adjoint_character(&w), w);
    }

    #[test]
    fn gelfand_norm_examples() {
        let grid = TGrid::new(1024).unwrap();
        let one = fixtures::one_point();
        let sp = one.space();
        let l = Element::delta(sp, 1).add(&Element::delta(sp, -1)).unwrap();
        let n = gelfand_norm(&one, &l, &grid).unwrap();
        assert!((n.value - 2.0).abs() < 1e-12);
        assert!(gelfand_norm(&one, &Element::identity(sp), &grid).unwrap().value == 1.0);

        let swap = fixtures::swap2();
        let sp = swap.space();
        let l = Element::monomial(sp, sp.function_from_values(vec![c(4.0, 0.0), c(6.0, 0.0)]).unwrap(), 2);
        assert!((gelfand_norm(&swap, &l, &grid).unwrap().value - 6.0).abs() < 1e-12);
    }

    #[test]
    fn separating_family_examples() {
        let grid = TGrid::new(4).unwrap();
        let z = fixtures::int_shift(8);
        let fam = separating_family(&z, &grid).unwrap();
        for k in -8..=8 {
            assert!(fam.contains(&Character::OmegaX(Point::Int(k))));
        }
        assert!(!fam.contains(&Character::OmegaX(Point::Infinity)));

        let swap = fixtures::swap2();
        let fam = separating_family(&swap, &grid).unwrap();
        assert_eq!(fam.len(), 8);

        let t = fixtures::pair_swap_tails(8);
        let fam = separating_family(&t, &grid).unwrap();
        assert!(fam.iter().any(|ch| matches!(ch, Character::OmegaXC { x: Point::Origin, n: 2, .. })));
        assert!(fam.iter().any(|ch| matches!(ch, Character::OmegaXC { x: Point::ATail(1), n: 1, .. })));
        assert!(fam.iter().any(|ch| matches!(ch, Character::OmegaXC { x: Point::BTail(1), n: 2, .. })));
    }

    #[test]
    fn grid_slack_is_tight_for_low_degree() {
        let s = grid_slack(1.0, 100.0, -8, 8, 1024);
        assert!(s < 1e-3 && s > 0.0);
        assert_eq!(grid_slack(3.0, 0.0, 0, 0, 16), 0.0);
    }
}
