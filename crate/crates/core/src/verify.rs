//! Randomized and exhaustive checks of the structure theory on a concrete
//! system. Each check yields a [`CheckRecord`]; a failing record carries the
//! inputs and the expected and observed quantities.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::algebra::{random_positive_with_factors, Element};
use crate::characters::{
    adjoint_character, eval_character, eval_formal, eval_psi, psi_factorization, semisimplicity_probe,
    separating_family, Character, TGrid,
};
use crate::commutant::{
    chi_family, commutant_basis, commutes_oracle, e1, e1_prime, is_in_commutant,
};
use crate::dynsys::DynSys;
use crate::error::Result;
use crate::gns::{cstar_norm, envelope_check, rep_matrix, restriction_check, state_eval, RepDescriptor};
use crate::sample::Sampler;
use crate::space::{CtsFun, Point, SpaceKind};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub suite: String,
    pub check: String,
    pub passed: bool,
    pub inputs: String,
    pub expected: String,
    pub actual: String,
}

fn bounded(suite: &str, check: &str, inputs: String, worst: f64, tol: f64) -> CheckRecord {
    CheckRecord {
        suite: suite.into(),
        check: check.into(),
        passed: worst <= tol,
        inputs,
        expected: format!("max deviation <= {tol:e}"),
        actual: format!("max deviation {:e}", worst + 0.0),
    }
}

fn flag(suite: &str, check: &str, inputs: String, ok: bool, expected: String, actual: String) -> CheckRecord {
    CheckRecord { suite: suite.into(), check: check.into(), passed: ok, inputs, expected, actual }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Algebra,
    Commutant,
    Characters,
    Gns,
    Appendix,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub samples: usize,
    pub grid: usize,
    pub trunc: usize,
    pub tol: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: 7, samples: 50, grid: 16, trunc: 12, tol: 1e-9 }
    }
}

/// Degree of random elements; smaller on the integer shift so that products
/// stay inside the window.
pub fn sample_degree(sys: &DynSys) -> u64 {
    match sys.space().kind() {
        SpaceKind::IntShift => 2,
        _ => 3,
    }
}

pub fn run(sys: &DynSys, suite: Suite, opts: &VerifyOptions) -> Result<Vec<CheckRecord>> {
    let grid = TGrid::new(opts.grid)?;
    let n = opts.samples;
    let seed = opts.seed;
    let mut out = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Algebra {
        out.extend(algebra_axioms(sys, n, seed, opts.tol)?);
        out.extend(algebra_identities(sys, n, seed, opts.tol)?);
    }
    if all || suite == Suite::Commutant {
        out.push(commutant_oracle_agreement(sys, n, seed)?);
        out.extend(commutant_structure(sys, n, seed, opts.tol)?);
        out.extend(projection_suite(sys, &grid, n, seed, opts.tol)?);
    }
    if all || suite == Suite::Characters {
        out.extend(character_suite(sys, &grid, n, seed, opts.tol)?);
        out.push(unboundedness(sys)?);
        out.extend(semisimplicity(sys, &TGrid::new(opts.grid.max(64))?, n, seed)?);
        out.push(psi_sweep(sys, &TGrid::new(opts.grid.max(64))?, n.min(20), seed)?);
    }
    if all || suite == Suite::Gns {
        out.extend(representation_suite(sys, &grid, n, seed, opts.tol)?);
        out.extend(restriction(sys, &grid, n.min(20), seed)?);
        out.push(envelope(sys, &TGrid::new(opts.grid.max(256))?, n.min(20), seed, opts.trunc)?);
        out.push(cesaro(sys, &TGrid::new(opts.grid.max(64))?, n.min(20), seed, opts.trunc)?);
    }
    if all || suite == Suite::Appendix {
        out.extend(periodic_interiors(sys));
    }
    Ok(out)
}

// ----- algebra -----

pub fn algebra_axioms(sys: &DynSys, n: usize, seed: u64, tol: f64) -> Result<Vec<CheckRecord>> {
    let deg = sample_degree(sys);
    let mut s = Sampler::new(sys.space(), seed);
    let (mut assoc, mut submult, mut iso, mut invol, mut anti): (f64, f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for _ in 0..n {
        let (a, b, c) = (s.element(deg), s.element(deg), s.element(deg));
        let ab = a.multiply(&b)?;
        assoc = assoc.max(ab.multiply(&c)?.distance(&a.multiply(&b.multiply(&c)?)?)?);
        submult = submult.max(ab.ell1_norm() - a.ell1_norm() * b.ell1_norm());
        let a_star = a.adjoint()?;
        iso = iso.max((a_star.ell1_norm() - a.ell1_norm()).abs());
        invol = invol.max(a_star.adjoint()?.distance(&a)?);
        anti = anti.max(ab.adjoint()?.distance(&b.adjoint()?.multiply(&a_star)?)?);
    }
    let inputs = format!("{n} random triples, degree <= {deg}, seed {seed}");
    Ok(vec![
        bounded("algebra", "associativity", inputs.clone(), assoc, tol),
        bounded("algebra", "submultiplicative l1 norm", inputs.clone(), submult.max(0.0), tol),
        bounded("algebra", "isometric involution (exact)", inputs.clone(), iso, 0.0),
        bounded("algebra", "involution is involutive (exact)", inputs.clone(), invol, 0.0),
        bounded("algebra", "involution reverses products", inputs, anti, tol),
    ])
}

/// `Σ_k |f_k(σ^k x)|²`, the value of `φ_x(ℓ*ℓ)`.
pub fn point_positive_closed_form(l: &Element, x: &Point) -> Result<f64> {
    let sp = l.space();
    let mut acc = 0.0;
    for (k, f) in l.terms() {
        acc += sp.eval(f, &sp.sigma_apply(x, k)?)?.norm_sqr();
    }
    Ok(acc)
}

/// `Σ_{r<n} |Σ_j f_{r+jn}(σ^r x) c^j|²`, the value of `ω_{x,c}(E′₁(ℓ*ℓ))`.
pub fn circle_positive_closed_form(l: &Element, x: &Point, n: u64, c: Complex64) -> Result<f64> {
    let sp = l.space();
    let n = n as i64;
    let mut acc = 0.0;
    for r in 0..n {
        let y = sp.sigma_apply(x, r)?;
        let mut inner = Complex64::new(0.0, 0.0);
        for (k, f) in l.terms() {
            if (k - r).rem_euclid(n) == 0 {
                inner += sp.eval(f, &y)? * c.powi(((k - r) / n) as i32);
            }
        }
        acc += inner.norm_sqr();
    }
    Ok(acc)
}

/// `Σ_m [χ_m Σ_k (f̄_k f_{k+m})∘σ^k] δ^m`, the closed form of `E′₁(ℓ*ℓ)`.
pub fn projected_square_closed_form(sys: &DynSys, l: &Element) -> Result<Element> {
    let sp = l.space();
    let chi = chi_family(sys)?;
    let mut terms = Vec::new();
    for (k, fk) in l.terms() {
        for (j, fj) in l.terms() {
            let m = j - k;
            let prod = fk.conj().mul(fj);
            terms.push((m, chi.get(m).mul(&sp.compose_sigma(&prod, k)?)));
        }
    }
    Ok(Element::from_terms(sp, terms))
}

pub fn algebra_identities(sys: &DynSys, n: usize, seed: u64, tol: f64) -> Result<Vec<CheckRecord>> {
    let sp = Arc::clone(sys.space());
    let deg = sample_degree(sys);
    let mut s = Sampler::new(&sp, seed ^ 0x5eed);
    let one = Element::identity(&sp);
    let (mut unit, mut left, mut right, mut pos, mut ces, mut conj): (f64, f64, f64, f64, f64, f64) =
        (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for _ in 0..n {
        let l = s.element(deg);
        let g = s.function();
        unit = unit.max(one.multiply(&l)?.distance(&l)?).max(l.multiply(&one)?.distance(&l)?);
        let gl = l.left_mul_fn(&g)?;
        let lg = l.right_mul_fn(&g)?;
        for k in -(deg as i64)..=deg as i64 {
            left = left.max(gl.coefficient(k).distance(&g.mul(&l.coefficient(k))));
            let shifted = sp.compose_sigma(&g, -k)?;
            right = right.max(lg.coefficient(k).distance(&shifted.mul(&l.coefficient(k))));
        }
        let sq = l.adjoint()?.multiply(&l)?;
        for x in sp.rep_points() {
            let direct = sq.coefficient_at(0, &x)?;
            pos = pos.max((direct - point_positive_closed_form(&l, &x)?).norm());
        }
        let d = l.degree();
        for big_n in d..=4 * d.max(1) {
            let gap = l.cesaro_mean(big_n).distance(&l)?;
            ces = ces.max(gap - d as f64 / (big_n as f64 + 1.0) * l.ell1_norm());
        }
        let delta = Element::delta(&sp, 1);
        let lhs = delta.multiply(&Element::function(&sp, g.clone()))?.multiply(&Element::delta(&sp, -1))?;
        conj = conj.max(lhs.distance(&Element::function(&sp, sp.compose_sigma(&g, -1)?))?);
    }
    let inputs = format!("{n} random elements and functions, degree <= {deg}, seed {seed}");

    // Vanishing of commutant coefficients at points of lower interior order.
    let mut vanish: f64 = 0.0;
    let mut cases = 0usize;
    for x in sp.rep_points() {
        let Some(order) = sys.minimal_interior_order(&x)? else { continue };
        for m in 1..=(2 * order as i64 + 2) {
            if m % order as i64 == 0 {
                continue;
            }
            for _ in 0..3 {
                let f = s.commutant_function(sys, m);
                vanish = vanish.max(sp.eval(&f, &x)?.norm());
                cases += 1;
            }
        }
    }

    Ok(vec![
        bounded("algebra", "unit is neutral", inputs.clone(), unit, tol),
        bounded("algebra", "left C(X)-module identity for coefficients", inputs.clone(), left, tol),
        bounded("algebra", "right C(X)-module identity for coefficients", inputs.clone(), right, tol),
        bounded("algebra", "delta conjugation implements alpha", inputs.clone(), conj, tol),
        bounded("algebra", "point state of l*l equals closed form", inputs.clone(), pos, tol),
        bounded("algebra", "Cesaro mean l1 error bound", inputs, ces.max(0.0), tol),
        bounded(
            "algebra",
            "commutant coefficients vanish where order does not divide index",
            format!("{cases} sampled functions supported in Fix_m"),
            vanish,
            0.0,
        ),
    ])
}

// ----- commutant -----

/// A mixture of commutant elements, general elements and commutant elements
/// with one coefficient perturbed.
fn mixed_element(s: &mut Sampler, sys: &DynSys, deg: u64) -> Element {
    match s.rng().random_range(0..3) {
        0 => s.commutant_element(sys, deg),
        1 => s.element(deg),
        _ => {
            let base = s.commutant_element(sys, deg);
            let k = s.rng().random_range(-(deg as i64)..=deg as i64);
            let g = s.function();
            let bump = Element::monomial(s.space(), g, k);
            base.add(&bump).expect("same space")
        }
    }
}

pub fn commutant_oracle_agreement(sys: &DynSys, n: usize, seed: u64) -> Result<CheckRecord> {
    let deg = sample_degree(sys);
    let mut s = Sampler::new(sys.space(), seed ^ 0xc0);
    let mut disagreements = 0;
    let mut members = 0;
    for _ in 0..n {
        let l = mixed_element(&mut s, sys, deg);
        let a = is_in_commutant(sys, &l);
        members += usize::from(a);
        if a != commutes_oracle(sys, &l)? {
            disagreements += 1;
        }
    }
    Ok(flag(
        "commutant",
        "support criterion agrees with direct commutation",
        format!("{n} random elements ({members} in the commutant), degree <= {deg}, seed {seed}"),
        disagreements == 0,
        "0 disagreements".into(),
        format!("{disagreements} disagreements"),
    ))
}

pub fn commutant_structure(sys: &DynSys, n: usize, seed: u64, tol: f64) -> Result<Vec<CheckRecord>> {
    let sp = sys.space();
    let basis = commutant_basis(sys, 2);
    let mut closed = true;
    'outer: for a in &basis {
        if !is_in_commutant(sys, &a.adjoint()?) {
            closed = false;
            break;
        }
        for b in &basis {
            if !is_in_commutant(sys, &a.multiply(b)?) {
                closed = false;
                break 'outer;
            }
        }
    }
    let mut s = Sampler::new(sp, seed ^ 0xc1);
    let deg = sample_degree(sys);
    let mut cesaro_ok = true;
    let mut comm: f64 = 0.0;
    for _ in 0..n {
        let l = s.commutant_element(sys, deg);
        let m = s.commutant_element(sys, deg);
        comm = comm.max(l.multiply(&m)?.distance(&m.multiply(&l)?)?);
        for big_n in 0..=2 * deg {
            cesaro_ok &= is_in_commutant(sys, &l.cesaro_mean(big_n));
        }
    }
    Ok(vec![
        flag(
            "commutant",
            "basis closed under products and adjoints",
            format!("{} basis elements of degree <= 2", basis.len()),
            closed,
            "all products and adjoints in the commutant".into(),
            if closed { "closed".into() } else { "not closed".into() },
        ),
        bounded("commutant", "commutant is commutative", format!("{n} random pairs, seed {seed}"), comm, tol),
        flag(
            "commutant",
            "Cesaro means stay in the commutant",
            format!("{n} random commutant elements, seed {seed}"),
            cesaro_ok,
            "all means in the commutant".into(),
            format!("{cesaro_ok}"),
        ),
    ])
}

pub fn projection_suite(sys: &DynSys, grid: &TGrid, n: usize, seed: u64, tol: f64) -> Result<Vec<CheckRecord>> {
    let sp = Arc::clone(sys.space());
    let mut out = Vec::new();
    let condition = sys.projection_condition();
    let chi = chi_family(sys);
    out.push(flag(
        "commutant",
        "projection exists iff interiors of Fix_k are closed",
        "chi family construction".into(),
        condition == chi.is_ok(),
        format!("projection available = {condition}"),
        match &chi {
            Ok(_) => "projection available = true".into(),
            Err(e) => format!("projection available = false ({e})"),
        },
    ));
    if !condition {
        return Ok(out);
    }

    let deg = sample_degree(sys);
    let mut s = Sampler::new(&sp, seed ^ 0xe1);
    let family = separating_family(sys, grid)?;
    let (mut idem, mut fix, mut invol, mut contr, mut bimod, mut e1e1, mut faith_form): (
        f64,
        f64,
        f64,
        f64,
        f64,
        f64,
        f64,
    ) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    let mut in_range = true;
    let mut faithful = true;
    for _ in 0..n {
        let l = s.element(deg);
        let p = e1_prime(sys, &l)?;
        in_range &= is_in_commutant(sys, &p);
        idem = idem.max(e1_prime(sys, &p)?.distance(&p)?);
        invol = invol.max(e1_prime(sys, &l.adjoint()?)?.distance(&p.adjoint()?)?);
        contr = contr.max(p.ell1_norm() - l.ell1_norm());
        e1e1 = e1e1.max(e1(&p).distance(&e1(&l))?);
        let c = s.commutant_element(sys, deg);
        fix = fix.max(e1_prime(sys, &c)?.distance(&c)?);
        let g = s.commutant_element(sys, 1);
        bimod = bimod.max(e1_prime(sys, &g.multiply(&l)?)?.distance(&g.multiply(&p)?)?);
        bimod = bimod.max(e1_prime(sys, &l.multiply(&g)?)?.distance(&p.multiply(&g)?)?);
        let sq = e1_prime(sys, &l.adjoint()?.multiply(&l)?)?;
        faith_form = faith_form.max(sq.distance(&projected_square_closed_form(sys, &l)?)?);
        if !l.is_zero() && sq.coefficient(0).sup_norm() <= 0.0 {
            faithful = false;
        }
    }
    let inputs = format!("{n} random elements, degree <= {deg}, seed {seed}");
    out.push(flag(
        "commutant",
        "projection lands in the commutant",
        inputs.clone(),
        in_range,
        "true".into(),
        format!("{in_range}"),
    ));
    out.push(bounded("commutant", "projection is idempotent", inputs.clone(), idem, tol));
    out.push(bounded("commutant", "projection fixes the commutant", inputs.clone(), fix, tol));
    out.push(bounded("commutant", "projection commutes with the involution", inputs.clone(), invol, tol));
    out.push(bounded("commutant", "projection is l1-contractive", inputs.clone(), contr.max(0.0), tol));
    out.push(bounded("commutant", "projection is a commutant bimodule map", inputs.clone(), bimod, tol));
    out.push(bounded("commutant", "E1 after projection equals E1", inputs.clone(), e1e1, tol));
    out.push(bounded("commutant", "projection of l*l equals closed form", inputs.clone(), faith_form, tol));
    out.push(flag(
        "commutant",
        "projection is faithful on l*l",
        inputs,
        faithful,
        "nonzero l gives nonzero E'(l*l)".into(),
        format!("{faithful}"),
    ));

    if sys.freeness_and_density_report().topologically_free() {
        let mut worst: f64 = 0.0;
        for _ in 0..n {
            let l = s.element(deg);
            worst = worst.max(e1_prime(sys, &l)?.distance(&e1(&l))?);
        }
        out.push(bounded(
            "commutant",
            "topologically free system: projection equals E1",
            format!("{n} random elements, seed {seed}"),
            worst,
            0.0,
        ));
    }

    out.push(positivity(sys, &family, n, seed, tol)?);
    Ok(out)
}

/// Positivity of characters composed with the projection on random
/// `Σ_j l_j* l_j`, with values matched against the closed forms.
pub fn positivity(sys: &DynSys, family: &[Character], n: usize, seed: u64, tol: f64) -> Result<CheckRecord> {
    let sp = sys.space();
    let deg = sample_degree(sys).min(2);
    let mut most_negative: f64 = 0.0;
    let mut form: f64 = 0.0;
    for i in 0..n {
        let (pos, factors) = random_positive_with_factors(sp, seed.wrapping_add(i as u64), 2, deg)?;
        let p = e1_prime(sys, &pos)?;
        for chi in family {
            let v = eval_character(sys, chi, &p)?;
            most_negative = most_negative.min(v.re).min(-v.im.abs());
            let mut closed = 0.0;
            for l in &factors {
                closed += match chi {
                    Character::OmegaX(x) => point_positive_closed_form(l, x)?,
                    Character::OmegaXC { x, n, c } => circle_positive_closed_form(l, x, *n, *c)?,
                };
            }
            form = form.max((v - closed).norm());
        }
    }
    Ok(flag(
        "commutant",
        "characters after projection are positive on positive elements",
        format!("{n} random positive elements, {} characters, seed {seed}", family.len()),
        most_negative >= -tol && form <= tol,
        format!("values >= -{tol:e}, closed-form deviation <= {tol:e}"),
        format!("min value {most_negative:e}, closed-form deviation {form:e}"),
    ))
}

// ----- characters -----

pub fn character_suite(sys: &DynSys, grid: &TGrid, n: usize, seed: u64, tol: f64) -> Result<Vec<CheckRecord>> {
    let sp = Arc::clone(sys.space());
    let family = separating_family(sys, grid)?;
    let deg = sample_degree(sys);
    let mut s = Sampler::new(&sp, seed ^ 0xc4);
    let one = Element::identity(&sp);
    let (mut mult, mut unit, mut herm, mut contr, mut restr, mut adj): (f64, f64, f64, f64, f64, f64) =
        (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for _ in 0..n {
        let a = s.commutant_element(sys, deg);
        let b = s.commutant_element(sys, deg);
        let ab = a.multiply(&b)?;
        let a_star = a.adjoint()?;
        let f = s.function();
        let f0 = Element::function(&sp, f.clone());
        for chi in &family {
            let va = eval_character(sys, chi, &a)?;
            let vb = eval_character(sys, chi, &b)?;
            mult = mult.max((eval_character(sys, chi, &ab)? - va * vb).norm());
            herm = herm.max((eval_character(sys, chi, &a_star)? - va.conj()).norm());
            contr = contr.max(va.norm() - a.ell1_norm());
            restr = restr.max((eval_character(sys, chi, &f0)? - sp.eval(&f, chi.point())?).norm());
            let adj_chi = adjoint_character(chi);
            adj = adj.max((eval_character(sys, &adj_chi, &a)? - va).norm());
        }
    }
    for chi in &family {
        unit = unit.max((eval_character(sys, chi, &one)? - 1.0).norm());
    }
    let inputs = format!(
        "{} characters (grid {}), {n} random commutant pairs, degree <= {deg}, seed {seed}",
        family.len(),
        grid.resolution()
    );
    Ok(vec![
        bounded("characters", "multiplicative", inputs.clone(), mult, tol),
        bounded("characters", "unital", inputs.clone(), unit, tol),
        bounded("characters", "hermitian", inputs.clone(), herm, tol),
        bounded("characters", "contractive", inputs.clone(), contr.max(0.0), tol),
        bounded("characters", "restriction to C(X) is point evaluation", inputs.clone(), restr, tol),
        bounded("characters", "unit-circle characters are self-adjoint", inputs, adj, tol),
    ])
}

/// Characters with `|c| = 2` on the monomials `f δ^{jn}`: values grow like
/// `2^j`, so they are unbounded and no such character is continuous.
pub fn unboundedness(sys: &DynSys) -> Result<CheckRecord> {
    let sp = Arc::clone(sys.space());
    let candidate = sp.rep_points().take(sp.window_len()).find_map(|x| {
        sys.minimal_interior_order(&x).ok().flatten().map(|n| (x, n))
    });
    let Some((x, n)) = candidate else {
        return Ok(flag(
            "characters",
            "off-circle parameters give unbounded functionals",
            "no point lies in an interior of a fixed-point set".into(),
            true,
            "nothing to check".into(),
            "nothing to check".into(),
        ));
    };
    let f = sp.bump(sp.value_index(&x)?);
    let c = Complex64::new(2.0, 0.0);
    let mut worst: f64 = 0.0;
    let mut prev: Option<f64> = None;
    for j in 0..=20i64 {
        let l = Element::monomial(&sp, f.clone(), j * n as i64);
        let v = eval_formal(&l, &x, n, c)?.norm();
        worst = worst.max((v - 2f64.powi(j as i32)).abs() / 2f64.powi(j as i32));
        if let Some(p) = prev {
            worst = worst.max((v / p - 2.0).abs());
        }
        prev = Some(v);
    }
    Ok(bounded(
        "characters",
        "off-circle parameters give unbounded functionals",
        format!("c = 2 at {}, n = {n}, f = indicator of the point, j = 0..=20", sp.label(&x)),
        worst,
        1e-9,
    ))
}

pub fn semisimplicity(sys: &DynSys, grid: &TGrid, n: usize, seed: u64) -> Result<Vec<CheckRecord>> {
    let sp = Arc::clone(sys.space());
    let deg = sample_degree(sys);
    let zero = semisimplicity_probe(sys, &Element::zero(&sp), grid)?;
    let mut s = Sampler::new(&sp, seed ^ 0x55);
    let tiny = s.commutant_element(sys, deg).scale(Complex64::new(1e-13, 0.0));
    let tiny_probe = semisimplicity_probe(sys, &tiny, grid)?;
    let zeros_ok = zero.max_character_value <= 1e-12
        && zero.reconstructed.is_zero()
        && tiny_probe.max_character_value <= 1e-12
        && tiny_probe.reconstructed.is_zero();

    let mut false_zeros = 0;
    let mut worst: f64 = 0.0;
    let mut trials = 0;
    while trials < n {
        let l = s.commutant_element(sys, deg);
        if l.is_zero() {
            continue;
        }
        trials += 1;
        let probe = semisimplicity_probe(sys, &l, grid)?;
        if probe.max_character_value <= 1e-12 {
            false_zeros += 1;
        }
        worst = worst.max(probe.reconstructed.distance(&l)?);
    }
    Ok(vec![
        flag(
            "characters",
            "vanishing character values reconstruct the zero element",
            format!("zero element and a 1e-13 multiple of a commutant element, grid {}", grid.resolution()),
            zeros_ok,
            "max |value| <= 1e-12 and reconstruction = 0".into(),
            format!(
                "max |value| {:e} / {:e}, reconstructions zero: {} / {}",
                zero.max_character_value,
                tiny_probe.max_character_value,
                zero.reconstructed.is_zero(),
                tiny_probe.reconstructed.is_zero()
            ),
        ),
        flag(
            "characters",
            "nonzero commutant elements are detected and recovered",
            format!("{n} random nonzero commutant elements, grid {}, seed {seed}", grid.resolution()),
            false_zeros == 0 && worst <= 1e-9,
            "0 false zeros, recovery error <= 1e-9".into(),
            format!("{false_zeros} false zeros, recovery error {worst:e}"),
        ),
    ])
}

/// `ψ_{x,z}` against the character it factors through, over all window and
/// limit points and the whole grid.
pub fn psi_sweep(sys: &DynSys, grid: &TGrid, n: usize, seed: u64) -> Result<CheckRecord> {
    let sp = Arc::clone(sys.space());
    let deg = sample_degree(sys);
    let mut s = Sampler::new(&sp, seed ^ 0x9a);
    let mut worst: f64 = 0.0;
    let mut fibre_worst: f64 = 0.0;
    for _ in 0..n {
        let l = s.commutant_element(sys, deg);
        for x in sp.rep_points() {
            let single = sys.minimal_interior_order(&x)?.is_none();
            for z in grid.samples() {
                let direct = eval_psi(sys, &x, z, &l)?;
                let via = eval_character(sys, &psi_factorization(sys, &x, z)?, &l)?;
                worst = worst.max((direct - via).norm());
                if single {
                    fibre_worst = fibre_worst.max((direct - l.coefficient_at(0, &x)?).norm());
                }
            }
        }
    }
    Ok(bounded(
        "characters",
        "psi factors through the character list",
        format!(
            "{} points x {} grid samples, {n} random commutant elements, seed {seed}",
            sp.rep_count(),
            grid.resolution()
        ),
        worst.max(fibre_worst),
        1e-10,
    ))
}

// ----- gns -----

pub fn representation_suite(sys: &DynSys, grid: &TGrid, n: usize, seed: u64, tol: f64) -> Result<Vec<CheckRecord>> {
    let sp = Arc::clone(sys.space());
    let deg = sample_degree(sys);
    let mut s = Sampler::new(&sp, seed ^ 0x6e);
    let reps = sys.periodic_orbit_representatives();
    let (mut star, mut mult, mut unit_d, mut equiv, mut dom, mut coeff): (f64, f64, f64, f64, f64, f64) =
        (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    let mut monotone = true;
    for i in 0..n {
        let a = s.element(deg);
        let b = s.element(deg);
        let g = s.function();
        let lambda = grid.sample(i % grid.resolution());
        for &(x, p) in &reps {
            let d = RepDescriptor::Periodic { x, p, lambda };
            let ma = rep_matrix(sys, &d, &a)?.matrix;
            let mb = rep_matrix(sys, &d, &b)?.matrix;
            star = star.max((rep_matrix(sys, &d, &a.adjoint()?)?.matrix - ma.adjoint()).norm());
            mult = mult.max((rep_matrix(sys, &d, &a.multiply(&b)?)?.matrix - &ma * &mb).norm());
            let md = rep_matrix(sys, &d, &Element::delta(&sp, 1))?.matrix;
            unit_d = unit_d.max((md.adjoint() * &md - DMatrix::identity(p as usize, p as usize)).norm());
            // The orbit can be started at any of its points.
            let y = sp.sigma_apply(&x, 1)?;
            let dy = RepDescriptor::Periodic { x: y, p, lambda };
            let sa = ma.singular_values();
            let sb = rep_matrix(sys, &dy, &a)?.matrix.singular_values();
            let mut sa: Vec<f64> = sa.iter().copied().collect();
            let mut sb: Vec<f64> = sb.iter().copied().collect();
            sa.sort_by(f64::total_cmp);
            sb.sort_by(f64::total_cmp);
            equiv = equiv.max(sa.iter().zip(&sb).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max));
            // State of g·ℓ equals g(x) times the state of ℓ.
            let lhs = state_eval(sys, &d, &a.left_mul_fn(&g)?)?;
            coeff = coeff.max((lhs - sp.eval(&g, &x)? * state_eval(sys, &d, &a)?).norm());
        }
        if sp.kind() == SpaceKind::IntShift {
            let mut last = 0.0;
            for m in (deg as usize + 1)..(deg as usize + 12) {
                let d = RepDescriptor::AperiodicTruncated { x: Point::Int(0), m };
                let v = crate::gns::operator_norm(&rep_matrix(sys, &d, &a)?.matrix, crate::gns::NORM_TOL)?;
                monotone &= v >= last - 1e-12 * a.ell1_norm();
                last = v;
            }
        }
        let c = cstar_norm(sys, &a, grid, deg as usize + 1)?;
        dom = dom.max(c.estimate.value - a.ell1_norm() * (1.0 + 1e-12));
    }
    let inputs = format!("{n} random elements, degree <= {deg}, {} orbit representatives, seed {seed}", reps.len());
    let mut out = vec![
        bounded("gns", "periodic models preserve adjoints", inputs.clone(), star, tol),
        bounded("gns", "periodic models are multiplicative", inputs.clone(), mult, tol),
        bounded("gns", "delta acts unitarily", inputs.clone(), unit_d, tol),
        bounded("gns", "orbit starting point does not matter", inputs.clone(), equiv, tol),
        bounded("gns", "states are C(X)-linear on the left", inputs.clone(), coeff, tol),
        bounded("gns", "enveloping norm is dominated by l1 norm", inputs.clone(), dom.max(0.0), 0.0),
    ];
    if sp.kind() == SpaceKind::IntShift {
        out.push(flag(
            "gns",
            "compression norms grow with the truncation",
            inputs,
            monotone,
            "nondecreasing".into(),
            format!("{monotone}"),
        ));
    }
    Ok(out)
}

pub fn restriction(sys: &DynSys, grid: &TGrid, n: usize, seed: u64) -> Result<Vec<CheckRecord>> {
    let sp = sys.space();
    let lambdas: Vec<Complex64> = grid.samples().collect();
    let mut out = Vec::new();
    let mut points: Vec<Point> = sp.rep_points().collect();
    if sp.kind() == SpaceKind::IntShift {
        points.retain(|p| matches!(p, Point::Infinity | Point::Int(-2..=2)));
    }
    for x in points {
        let r = restriction_check(sys, &x, &lambdas, n, sample_degree(sys), seed)?;
        out.push(bounded(
            "gns",
            &format!("state extensions restrict correctly ({:?})", r.case),
            format!(
                "x = {}, period {:?}, order {:?}, {n} commutant elements, {} lambdas",
                r.point,
                r.period,
                r.minimal_order,
                lambdas.len()
            ),
            r.max_deviation,
            1e-9,
        ));
    }
    Ok(out)
}

pub fn envelope(sys: &DynSys, grid: &TGrid, n: usize, seed: u64, trunc: usize) -> Result<CheckRecord> {
    let sp = Arc::clone(sys.space());
    let mut s = Sampler::new(&sp, seed ^ 0xe7);
    let deg = sample_degree(sys);
    let mut worst_excess: f64 = 0.0;
    let mut ext: f64 = 0.0;
    let mut passed = true;
    for i in 0..n {
        let l = s.commutant_element(sys, deg);
        let r = envelope_check(sys, &l, grid, trunc, 3, seed.wrapping_add(i as u64))?;
        passed &= r.passed;
        worst_excess = worst_excess.max(r.norm_gap - r.allowed_gap);
        ext = ext.max(r.extension_deviation.unwrap_or(0.0));
    }
    Ok(flag(
        "gns",
        "Gelfand norm equals enveloping norm; projection matches unique state extensions",
        format!("{n} random commutant elements, grid {}, truncation {trunc}, seed {seed}", grid.resolution()),
        passed,
        "norm gap within certified bound, extension deviation <= 1e-9".into(),
        format!("worst gap excess {worst_excess:e}, extension deviation {ext:e}"),
    ))
}

pub fn cesaro(sys: &DynSys, grid: &TGrid, n: usize, seed: u64, trunc: usize) -> Result<CheckRecord> {
    let sp = Arc::clone(sys.space());
    let mut s = Sampler::new(&sp, seed ^ 0xce);
    let deg = sample_degree(sys);
    let mut worst: f64 = f64::NEG_INFINITY;
    for _ in 0..n {
        let l = s.element(deg);
        let d = l.degree().max(1);
        for big_n in d..=8 * d {
            let diff = l.cesaro_mean(big_n).sub(&l)?;
            let c = cstar_norm(sys, &diff, grid, trunc)?.estimate.value;
            let bound = d as f64 / (big_n as f64 + 1.0) * l.ell1_norm();
            worst = worst.max(c - bound - 1e-12 * l.ell1_norm());
        }
    }
    Ok(flag(
        "gns",
        "Cesaro means converge in the enveloping norm at rate degree/(N+1)",
        format!("{n} random elements, N = degree..=8*degree, grid {}, seed {seed}", grid.resolution()),
        worst <= 0.0,
        "C*-norm of mean minus element <= degree/(N+1) * l1 norm".into(),
        format!("worst excess {worst:e}"),
    ))
}

// ----- periodic interiors -----

pub fn periodic_interiors(sys: &DynSys) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let mut failures = Vec::new();
    for mask in 1u32..64 {
        let s: Vec<u64> = (1..=6).filter(|i| mask & (1 << (i - 1)) != 0).collect();
        let r = sys.periodic_interior_report(&s);
        for c in r.checks.iter().filter(|c| !c.holds) {
            failures.push(format!("S={:?}: {} (witness {:?})", s, c.name, c.witness));
        }
    }
    out.push(flag(
        "appendix",
        "periodic-interior inclusions and equal closures",
        "every non-empty S within {1,...,6}".into(),
        failures.is_empty(),
        "all inclusions and closure equalities hold".into(),
        if failures.is_empty() { "all hold".into() } else { failures.join("; ") },
    ));
    let rep = sys.freeness_and_density_report();
    out.push(flag(
        "appendix",
        "topological freeness criteria agree",
        "five criteria".into(),
        rep.freeness.iter().all(|&b| b == rep.freeness[0]),
        "all equal".into(),
        format!("{:?}", rep.freeness),
    ));
    out.push(flag(
        "appendix",
        "aperiodic points with periodic interiors are dense",
        "four unions".into(),
        rep.density.iter().all(|&b| b),
        "all dense".into(),
        format!("{:?}", rep.density),
    ));
    out
}

/// Evaluates a function on every window and limit point.
pub fn values_at_points(sys: &DynSys, f: &CtsFun) -> Vec<(String, Complex64)> {
    let sp = sys.space();
    sp.rep_points().zip(f.values()).map(|(p, &v)| (sp.label(&p), v)).collect()
}
