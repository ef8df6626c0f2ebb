//! Matrix models of the GNS representations extending point evaluations,
//! their vector states and the enveloping C*-norm.
//!
//! For a point `x` of period `p` and `λ ∈ T`, `π_{x,λ}` acts on `C^p` with
//! `π(f)e_j = f(σ^j x)e_j`, `π(δ)e_j = e_{j+1}` and `π(δ)e_{p−1} = λe_0`.
//! For an aperiodic point, `π_x` acts on `ℓ²(Z)` with `π(f)e_n = f(σ^n x)e_n`
//! and `π(δ)e_n = e_{n+1}`; it is compressed to `span{e_{−M}, …, e_M}`.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::Element;
use crate::characters::{
    eval_character, golden_max, grid_slack, separating_family, Character, NormEstimate, TGrid,
};
use crate::commutant::{e1_prime, require_commutant};
use crate::dynsys::DynSys;
use crate::error::{Error, Result};
use crate::sample::Sampler;
use crate::space::Point;

#[derive(Clone, Debug, PartialEq)]
pub enum RepDescriptor {
    Periodic { x: Point, p: u64, lambda: Complex64 },
    AperiodicTruncated { x: Point, m: usize },
}

impl RepDescriptor {
    /// Validates the descriptor against the system.
    pub fn periodic(sys: &DynSys, x: Point, lambda: Complex64) -> Result<RepDescriptor> {
        if (lambda.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidRepresentation(format!("|λ| = {} is not 1", lambda.norm())));
        }
        match sys.space().period(&x)? {
            Some(p) => Ok(RepDescriptor::Periodic { x, p, lambda }),
            None => Err(Error::InvalidRepresentation(format!("{} is aperiodic", sys.space().label(&x)))),
        }
    }

    pub fn aperiodic(sys: &DynSys, x: Point, m: usize) -> Result<RepDescriptor> {
        match sys.space().period(&x)? {
            None => Ok(RepDescriptor::AperiodicTruncated { x, m }),
            Some(_) => Err(Error::InvalidRepresentation(format!("{} is periodic", sys.space().label(&x)))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RepMatrix {
    pub matrix: DMatrix<Complex64>,
    /// Row/column of the cyclic vector `e_0`.
    pub e0: usize,
}

pub fn rep_matrix(sys: &DynSys, d: &RepDescriptor, l: &Element) -> Result<RepMatrix> {
    let sp = sys.space();
    match d {
        RepDescriptor::Periodic { x, p, lambda } => {
            let p = *p as usize;
            let pi = p as i64;
            let mut m = DMatrix::from_element(p, p, Complex64::new(0.0, 0.0));
            for (k, f) in l.terms() {
                for j in 0..pi {
                    let t = j + k;
                    let row = t.rem_euclid(pi) as usize;
                    let e = t.div_euclid(pi);
                    let v = sp.eval(f, &sp.sigma_apply(x, t)?)? * lambda.powi(e as i32);
                    m[(row, j as usize)] += v;
                }
            }
            Ok(RepMatrix { matrix: m, e0: 0 })
        }
        RepDescriptor::AperiodicTruncated { x, m: radius } => {
            let deg = l.degree();
            if (*radius as u64) < deg + 1 {
                return Err(Error::TruncationTooSmall { radius: *radius, degree: deg });
            }
            Ok(truncated(sys, x, *radius, l)?)
        }
    }
}

fn truncated(sys: &DynSys, x: &Point, radius: usize, l: &Element) -> Result<RepMatrix> {
    let sp = sys.space();
    let r = radius as i64;
    let dim = 2 * radius + 1;
    let mut m = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for (k, f) in l.terms() {
        for n in -r..=r {
            let row = n + k;
            if row.abs() > r {
                continue;
            }
            let v = sp.eval(f, &sp.sigma_apply(x, row)?)?;
            m[((row + r) as usize, (n + r) as usize)] += v;
        }
    }
    Ok(RepMatrix { matrix: m, e0: radius })
}

/// `⟨π(ℓ)e_0, e_0⟩`, i.e. `φ_x(ℓ) = f₀(x)` or `φ_{x,λ}(ℓ) = Σ_{p|k} f_k(x)λ^{k/p}`.
pub fn state_eval(sys: &DynSys, d: &RepDescriptor, l: &Element) -> Result<Complex64> {
    match d {
        RepDescriptor::AperiodicTruncated { x, m } => {
            let deg = l.degree();
            if (*m as u64) < deg {
                return Err(Error::TruncationTooSmall { radius: *m, degree: deg });
            }
            let rm = truncated(sys, x, *m, l)?;
            Ok(rm.matrix[(rm.e0, rm.e0)])
        }
        RepDescriptor::Periodic { .. } => {
            let rm = rep_matrix(sys, d, l)?;
            Ok(rm.matrix[(rm.e0, rm.e0)])
        }
    }
}

const EIGEN_CAP: usize = 10_000;

/// Largest singular value: the square root of the top eigenvalue of the
/// Hermitian matrix `m*m`, with off-diagonal convergence threshold `tol`.
pub fn operator_norm(m: &DMatrix<Complex64>, tol: f64) -> Result<f64> {
    assert!(tol > 0.0, "tolerance must be positive");
    if m.is_empty() || m.iter().all(|v| *v == Complex64::new(0.0, 0.0)) {
        return Ok(0.0);
    }
    let a = m.adjoint() * m;
    let eig = a
        .try_symmetric_eigen(tol, EIGEN_CAP)
        .ok_or(Error::NoConvergence { iterations: EIGEN_CAP })?;
    Ok(eig.eigenvalues.max().max(0.0).sqrt())
}

/// Relative tolerance used for norms of representation matrices.
pub const NORM_TOL: f64 = 1e-14;

/// Orbit-wise contributions to the enveloping norm.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CstarReport {
    pub estimate: NormEstimate,
    /// Best value over the periodic models, with its certified slack.
    pub periodic: Option<NormEstimate>,
    /// Best compression norm over aperiodic models (a lower bound).
    pub aperiodic_lower: Option<f64>,
    pub truncation: usize,
}

/// `sup` of `‖π(ℓ)‖` over the periodic models on a `λ`-grid and over
/// window-centred compressions of the aperiodic models.
pub fn cstar_norm(sys: &DynSys, l: &Element, grid: &TGrid, m: usize) -> Result<CstarReport> {
    let sp = sys.space();
    let ell1 = l.ell1_norm();
    let arith = 1e-12 * ell1;
    let mut periodic: Option<NormEstimate> = None;
    if let Some((lo, hi)) = l.index_range() {
        for (x, p) in sys.periodic_orbit_representatives() {
            let pi = p as i64;
            let emin = lo.div_euclid(pi);
            let emax = (pi - 1 + hi).div_euclid(pi);
            let norm_at = |theta: f64| -> Result<f64> {
                let d = RepDescriptor::Periodic { x, p, lambda: Complex64::from_polar(1.0, theta) };
                operator_norm(&rep_matrix(sys, &d, l)?.matrix, NORM_TOL)
            };
            let mut best = (0.0, 0.0);
            for j in 0..grid.resolution() {
                let v = norm_at(grid.angle(j))?;
                if v > best.0 {
                    best = (v, grid.angle(j));
                }
            }
            let h = TAU / grid.resolution() as f64;
            let (_, refined) = golden_max(|t| norm_at(t).unwrap_or(0.0), best.1 - h, best.1 + h, 40);
            let lip: f64 = l
                .terms()
                .map(|(k, f)| (k.unsigned_abs() as f64 / p as f64).ceil() * f.sup_norm())
                .sum();
            let upper = best.0 + grid_slack(best.0, lip, emin, emax, grid.resolution());
            let value = best.0.max(refined);
            let est = NormEstimate { value, error_bound: (upper - value).max(0.0) + arith };
            periodic = Some(match periodic {
                Some(prev) if prev.upper() >= est.upper() && prev.value >= est.value => prev,
                Some(prev) => NormEstimate {
                    value: prev.value.max(est.value),
                    error_bound: prev.upper().max(est.upper()) - prev.value.max(est.value),
                },
                None => est,
            });
        }
    }

    let mut aperiodic_lower = None;
    let mut truncation = m;
    let aper = sys.aper_set();
    if !aper.is_empty() {
        // One orbit representative suffices on the integer shift: all integer
        // points lie on a single orbit. The compression is centred at 0 and
        // wide enough to contain every window point.
        let centre = sp.some_point(&aper).expect("non-empty");
        let centre = if sp.kind() == crate::space::SpaceKind::IntShift { Point::Int(0) } else { centre };
        let w = sp.window().unwrap_or(0) as usize;
        truncation = m.max(w + l.degree() as usize + 1);
        let rm = truncated(sys, &centre, truncation, l)?;
        aperiodic_lower = Some(operator_norm(&rm.matrix, NORM_TOL)?);
    }

    let estimate = match (periodic, aperiodic_lower) {
        (Some(p), None) => p,
        (None, Some(a)) => NormEstimate { value: a, error_bound: (ell1 - a).max(0.0) + arith },
        (Some(p), Some(a)) => {
            let value = p.value.max(a);
            NormEstimate { value, error_bound: (p.upper().max(ell1) - value).max(0.0) + arith }
        }
        (None, None) => NormEstimate { value: 0.0, error_bound: 0.0 },
    };
    Ok(CstarReport { estimate, periodic, aperiodic_lower, truncation })
}

/// How `ev_x` extends through the chain `C(X) ⊂ commutant ⊂ C*(Σ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ExtensionCase {
    /// `x` aperiodic.
    Aperiodic,
    /// `x` periodic and in some `Fix°_n`.
    InteriorPeriodic,
    /// `x` periodic, outside every `Fix°_n`.
    BoundaryPeriodic,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RestrictionReport {
    pub point: String,
    pub case: ExtensionCase,
    pub period: Option<u64>,
    pub minimal_order: Option<u64>,
    pub samples: usize,
    pub max_deviation: f64,
    pub passed: bool,
}

/// Compares GNS vector states with the characters they should restrict to on
/// random commutant elements: `φ_x = ω_x` in the aperiodic case,
/// `φ_{x,λ} = ω_{x,λ^{n/p}}` in the interior case, and `φ_{x,λ} = ω_x` for
/// every `λ` otherwise.
pub fn restriction_check(
    sys: &DynSys,
    x: &Point,
    lambdas: &[Complex64],
    samples: usize,
    degree: u64,
    seed: u64,
) -> Result<RestrictionReport> {
    let sp = sys.space();
    let period = sp.period(x)?;
    let order = sys.minimal_interior_order(x)?;
    let case = match (period, order) {
        (None, _) => ExtensionCase::Aperiodic,
        (Some(_), Some(_)) => ExtensionCase::InteriorPeriodic,
        (Some(_), None) => ExtensionCase::BoundaryPeriodic,
    };
    let mut sampler = Sampler::new(sp, seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let l = sampler.commutant_element(sys, degree);
        match case {
            ExtensionCase::Aperiodic => {
                let d = RepDescriptor::AperiodicTruncated { x: *x, m: degree as usize + 1 };
                let chi = Character::OmegaX(*x);
                worst = worst.max((state_eval(sys, &d, &l)? - eval_character(sys, &chi, &l)?).norm());
            }
            ExtensionCase::InteriorPeriodic => {
                let (p, n) = (period.unwrap(), order.unwrap());
                for &lambda in lambdas {
                    let d = RepDescriptor::periodic(sys, *x, lambda)?;
                    let chi = Character::OmegaXC { x: *x, n, c: lambda.powi((n / p) as i32) };
                    worst = worst.max((state_eval(sys, &d, &l)? - eval_character(sys, &chi, &l)?).norm());
                }
            }
            ExtensionCase::BoundaryPeriodic => {
                let chi = Character::OmegaX(*x);
                let w = eval_character(sys, &chi, &l)?;
                for &lambda in lambdas {
                    let d = RepDescriptor::periodic(sys, *x, lambda)?;
                    worst = worst.max((state_eval(sys, &d, &l)? - w).norm());
                }
            }
        }
    }
    Ok(RestrictionReport {
        point: sp.label(x),
        case,
        period,
        minimal_order: order,
        samples,
        max_deviation: worst,
        passed: worst <= 1e-9,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnvelopeReport {
    pub gelfand: NormEstimate,
    pub cstar: NormEstimate,
    pub norm_gap: f64,
    pub allowed_gap: f64,
    pub norms_agree: bool,
    /// `max |ω(E′₁(ℓ′)) − φ(ℓ′)|` over sampled `ℓ′` and characters at
    /// aperiodic points and interiors of `Per_q`; absent without a projection.
    pub extension_deviation: Option<f64>,
    pub passed: bool,
}

/// Gelfand norm against enveloping norm for a commutant element, and agreement
/// of `ω∘E′₁` with the GNS state extending `ω`.
pub fn envelope_check(
    sys: &DynSys,
    l: &Element,
    grid: &TGrid,
    m: usize,
    samples: usize,
    seed: u64,
) -> Result<EnvelopeReport> {
    require_commutant(sys, l)?;
    let gelfand = crate::characters::gelfand_norm(sys, l, grid)?.clone();
    let cstar = cstar_norm(sys, l, grid, m)?.estimate;
    let norm_gap = (gelfand.value - cstar.value).abs();
    let allowed_gap = gelfand.error_bound.max(cstar.error_bound);
    let norms_agree = norm_gap <= allowed_gap;

    let extension_deviation = if sys.projection_condition() {
        let sp = sys.space();
        let allowed = sys.aper_set().union(&sys.union_per_interiors());
        let family: Vec<Character> = separating_family(sys, &TGrid::new(8)?)?
            .into_iter()
            .filter(|c| sp.contains(&allowed, c.point()).unwrap_or(false))
            .collect();
        let mut sampler = Sampler::new(sp, seed);
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let lp = sampler.element(2);
            let proj = e1_prime(sys, &lp)?;
            for chi in &family {
                let lhs = eval_character(sys, chi, &proj)?;
                let rhs = match chi {
                    Character::OmegaX(x) => {
                        state_eval(sys, &RepDescriptor::AperiodicTruncated { x: *x, m: 3 }, &lp)?
                    }
                    // Here x ∈ Per°_p, so the least interior order equals p.
                    Character::OmegaXC { x, c, .. } => state_eval(sys, &RepDescriptor::periodic(sys, *x, *c)?, &lp)?,
                };
                worst = worst.max((lhs - rhs).norm());
            }
        }
        Some(worst)
    } else {
        None
    };
    let passed = norms_agree && extension_deviation.is_none_or(|d| d <= 1e-9);
    Ok(EnvelopeReport { gelfand, cstar, norm_gap, allowed_gap, norms_agree, extension_deviation, passed })
}
