//! Desk-scale compact spaces with a distinguished homeomorphism σ.
//!
//! Three backends are supported:
//!
//! * `finite`: a finite space given by its minimal-open-neighbourhood map
//!   (equivalently a preorder). Interior is `{x : U(x) ⊆ S}` and closure is
//!   `{x : U(x) ∩ S ≠ ∅}`.
//! * `int_shift`: the one-point compactification `Z ∪ {∞}` with the shift
//!   `n ↦ n + 1` fixing `∞`.
//! * `pair_swap_tails`: two convergent sequences `ATail(n)`, `BTail(n)` with
//!   common limit `Origin`; σ fixes `Origin` and the A-tail and swaps
//!   `BTail(2n−1) ↔ BTail(2n)`.
//!
//! The two infinite backends are handled through a window of radius `W`:
//! sets are explicit on window points, carry a membership flag for the limit
//! point and one cofinal flag per tail. Functions store a value per window
//! point plus the limit value, which is also their value on every tail point
//! beyond the window. All set calculus is exact.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest window radius accepted for the infinite backends.
pub const MAX_WINDOW: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Finite(usize),
    Int(i64),
    Infinity,
    ATail(u64),
    BTail(u64),
    Origin,
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Finite(i) => write!(f, "Finite({i})"),
            Point::Int(k) => write!(f, "Int({k})"),
            Point::Infinity => write!(f, "Infinity"),
            Point::ATail(n) => write!(f, "ATail({n})"),
            Point::BTail(n) => write!(f, "BTail({n})"),
            Point::Origin => write!(f, "Origin"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceKind {
    Finite,
    IntShift,
    PairSwapTails,
}

/// JSON description of a space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceSpec {
    Finite {
        points: Vec<String>,
        min_open_nbhd: BTreeMap<String, Vec<String>>,
        sigma: BTreeMap<String, String>,
    },
    IntShift {
        window: u64,
    },
    PairSwapTails {
        window: u64,
    },
}

/// Where a point lives relative to the window.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Loc {
    /// A window point or the limit point, by representative index.
    Rep(usize),
    /// A point beyond the window in the given tail.
    Tail(usize),
}

#[derive(Clone, Debug, PartialEq)]
struct FiniteTopology {
    labels: Vec<String>,
    /// `nbhd[x][y]` is true iff `y ∈ U(x)`.
    nbhd: Vec<Vec<bool>>,
    sigma: Vec<usize>,
    component: Vec<usize>,
    components: usize,
}

#[derive(Clone, Debug, PartialEq)]
enum Backend {
    Finite(FiniteTopology),
    IntShift { window: u64 },
    PairSwapTails { window: u64 },
}

/// A validated space together with its homeomorphism. Immutable.
#[derive(Clone, Debug, PartialEq)]
pub struct Space {
    backend: Backend,
}

/// A window-representable subset of a [`Space`].
///
/// `members` is indexed by representative index (window points, then the
/// limit point if any); `tails[t]` says whether the set contains every point
/// of tail `t` beyond the window.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetRep {
    members: Vec<bool>,
    tails: Vec<bool>,
}

impl SetRep {
    pub fn members(&self) -> &[bool] {
        &self.members
    }

    pub fn tails(&self) -> &[bool] {
        &self.tails
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().chain(&self.tails).any(|&b| b)
    }

    fn zip_with(&self, other: &SetRep, op: impl Fn(bool, bool) -> bool) -> SetRep {
        debug_assert_eq!(self.members.len(), other.members.len());
        SetRep {
            members: self.members.iter().zip(&other.members).map(|(&a, &b)| op(a, b)).collect(),
            tails: self.tails.iter().zip(&other.tails).map(|(&a, &b)| op(a, b)).collect(),
        }
    }

    pub fn union(&self, other: &SetRep) -> SetRep {
        self.zip_with(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &SetRep) -> SetRep {
        self.zip_with(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &SetRep) -> SetRep {
        self.zip_with(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> SetRep {
        SetRep {
            members: self.members.iter().map(|b| !b).collect(),
            tails: self.tails.iter().map(|b| !b).collect(),
        }
    }

    pub fn is_subset(&self, other: &SetRep) -> bool {
        self.difference(other).is_empty()
    }
}

/// Raw value assignment, before the continuity gate.
#[derive(Clone, Debug, PartialEq)]
pub struct RawFunction {
    /// One value per representative index.
    pub values: Vec<Complex64>,
    /// Limit value along each tail.
    pub tail_limits: Vec<Complex64>,
}

/// A continuous function, stored as one value per representative point.
/// Points beyond the window take the limit value.
#[derive(Clone, Debug, PartialEq)]
pub struct CtsFun {
    values: Vec<Complex64>,
}

impl CtsFun {
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self, eps: f64) -> bool {
        self.sup_norm() <= eps
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> CtsFun {
        CtsFun { values: self.values.iter().map(|&v| f(v)).collect() }
    }

    fn zip(&self, other: &CtsFun, f: impl Fn(Complex64, Complex64) -> Complex64) -> CtsFun {
        debug_assert_eq!(self.values.len(), other.values.len());
        CtsFun {
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &CtsFun) -> CtsFun {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &CtsFun) -> CtsFun {
        self.zip(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &CtsFun) -> CtsFun {
        self.zip(other, |a, b| a * b)
    }

    pub fn scale(&self, c: Complex64) -> CtsFun {
        self.map(|v| v * c)
    }

    pub fn conj(&self) -> CtsFun {
        self.map(|v| v.conj())
    }

    /// Largest pointwise distance to `other`.
    pub fn distance(&self, other: &CtsFun) -> f64 {
        self.sub(other).sup_norm()
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

pub(crate) fn gcd_u64(a: u64, b: u64) -> u64 {
    gcd(a, b)
}

impl Space {
    pub fn build(spec: &SpaceSpec) -> Result<Space> {
        let backend = match spec {
            SpaceSpec::Finite { points, min_open_nbhd, sigma } => {
                Backend::Finite(build_finite(points, min_open_nbhd, sigma)?)
            }
            &SpaceSpec::IntShift { window } => {
                if window == 0 || window > MAX_WINDOW {
                    return Err(Error::BadWindow(format!(
                        "int_shift window must lie in 1..={MAX_WINDOW}, got {window}"
                    )));
                }
                Backend::IntShift { window }
            }
            &SpaceSpec::PairSwapTails { window } => {
                if window < 2 || window % 2 != 0 || window > MAX_WINDOW {
                    return Err(Error::BadWindow(format!(
                        "pair_swap_tails window must be even and at least 2, got {window}"
                    )));
                }
                Backend::PairSwapTails { window }
            }
        };
        Ok(Space { backend })
    }

    pub fn from_json(text: &str) -> Result<Space> {
        let spec: SpaceSpec = serde_json::from_str(text)?;
        Space::build(&spec)
    }

    pub fn spec(&self) -> SpaceSpec {
        match &self.backend {
            Backend::Finite(t) => SpaceSpec::Finite {
                points: t.labels.clone(),
                min_open_nbhd: t
                    .labels
                    .iter()
                    .enumerate()
                    .map(|(x, l)| {
                        let u = (0..t.labels.len())
                            .filter(|&y| t.nbhd[x][y])
                            .map(|y| t.labels[y].clone())
                            .collect();
                        (l.clone(), u)
                    })
                    .collect(),
                sigma: t
                    .labels
                    .iter()
                    .enumerate()
                    .map(|(x, l)| (l.clone(), t.labels[t.sigma[x]].clone()))
                    .collect(),
            },
            &Backend::IntShift { window } => SpaceSpec::IntShift { window },
            &Backend::PairSwapTails { window } => SpaceSpec::PairSwapTails { window },
        }
    }

    pub fn kind(&self) -> SpaceKind {
        match self.backend {
            Backend::Finite(_) => SpaceKind::Finite,
            Backend::IntShift { .. } => SpaceKind::IntShift,
            Backend::PairSwapTails { .. } => SpaceKind::PairSwapTails,
        }
    }

    /// Window radius; `None` for finite spaces.
    pub fn window(&self) -> Option<u64> {
        match self.backend {
            Backend::Finite(_) => None,
            Backend::IntShift { window } | Backend::PairSwapTails { window } => Some(window),
        }
    }

    /// Number of window points (all points for a finite space).
    pub fn window_len(&self) -> usize {
        match &self.backend {
            Backend::Finite(t) => t.labels.len(),
            &Backend::IntShift { window } => 2 * window as usize + 1,
            &Backend::PairSwapTails { window } => 2 * window as usize,
        }
    }

    /// Window points plus the limit point.
    pub fn rep_count(&self) -> usize {
        self.window_len() + usize::from(self.limit_index().is_some())
    }

    pub fn limit_index(&self) -> Option<usize> {
        match self.backend {
            Backend::Finite(_) => None,
            _ => Some(self.window_len()),
        }
    }

    pub fn limit_point(&self) -> Option<Point> {
        match self.backend {
            Backend::Finite(_) => None,
            Backend::IntShift { .. } => Some(Point::Infinity),
            Backend::PairSwapTails { .. } => Some(Point::Origin),
        }
    }

    pub fn tail_count(&self) -> usize {
        match self.backend {
            Backend::Finite(_) => 0,
            _ => 2,
        }
    }

    pub fn tail_name(&self, t: usize) -> &'static str {
        match (&self.backend, t) {
            (Backend::IntShift { .. }, 0) => "pos",
            (Backend::IntShift { .. }, _) => "neg",
            (Backend::PairSwapTails { .. }, 0) => "A",
            (Backend::PairSwapTails { .. }, _) => "B",
            (Backend::Finite(_), _) => "",
        }
    }

    pub fn tail_index(&self, name: &str) -> Option<usize> {
        (0..self.tail_count()).find(|&t| self.tail_name(t) == name)
    }

    /// The `j`-th point (1-based) beyond the window along tail `t`.
    pub fn tail_point(&self, t: usize, j: u64) -> Point {
        match (&self.backend, t) {
            (&Backend::IntShift { window }, 0) => Point::Int((window + j) as i64),
            (&Backend::IntShift { window }, _) => Point::Int(-((window + j) as i64)),
            (&Backend::PairSwapTails { window }, 0) => Point::ATail(window + j),
            (&Backend::PairSwapTails { window }, _) => Point::BTail(window + j),
            (Backend::Finite(_), _) => panic!("finite spaces have no tails"),
        }
    }

    pub fn rep_point(&self, i: usize) -> Point {
        match &self.backend {
            Backend::Finite(_) => Point::Finite(i),
            &Backend::IntShift { window } => {
                if i == 2 * window as usize + 1 {
                    Point::Infinity
                } else {
                    Point::Int(i as i64 - window as i64)
                }
            }
            &Backend::PairSwapTails { window } => {
                let w = window as usize;
                if i < w {
                    Point::ATail(i as u64 + 1)
                } else if i < 2 * w {
                    Point::BTail((i - w) as u64 + 1)
                } else {
                    Point::Origin
                }
            }
        }
    }

    pub fn rep_points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.rep_count()).map(move |i| self.rep_point(i))
    }

    /// Distance of a representative point from the "centre" of the window;
    /// used to bound where random data is placed.
    pub fn rep_radius(&self, i: usize) -> u64 {
        match self.rep_point(i) {
            Point::Int(k) => k.unsigned_abs(),
            Point::ATail(n) | Point::BTail(n) => n,
            _ => 0,
        }
    }

    pub fn locate(&self, p: &Point) -> Result<Loc> {
        let foreign = || Error::ForeignPoint(p.to_string());
        match (&self.backend, *p) {
            (Backend::Finite(t), Point::Finite(i)) if i < t.labels.len() => Ok(Loc::Rep(i)),
            (&Backend::IntShift { window }, Point::Int(k)) => {
                let w = window as i64;
                if k > w {
                    Ok(Loc::Tail(0))
                } else if k < -w {
                    Ok(Loc::Tail(1))
                } else {
                    Ok(Loc::Rep((k + w) as usize))
                }
            }
            (&Backend::IntShift { window }, Point::Infinity) => Ok(Loc::Rep(2 * window as usize + 1)),
            (&Backend::PairSwapTails { window }, Point::ATail(n)) if n >= 1 => {
                if n > window {
                    Ok(Loc::Tail(0))
                } else {
                    Ok(Loc::Rep(n as usize - 1))
                }
            }
            (&Backend::PairSwapTails { window }, Point::BTail(n)) if n >= 1 => {
                if n > window {
                    Ok(Loc::Tail(1))
                } else {
                    Ok(Loc::Rep((window + n) as usize - 1))
                }
            }
            (&Backend::PairSwapTails { window }, Point::Origin) => Ok(Loc::Rep(2 * window as usize)),
            _ => Err(foreign()),
        }
    }

    /// Representative index whose stored function value applies at `p`.
    pub fn value_index(&self, p: &Point) -> Result<usize> {
        match self.locate(p)? {
            Loc::Rep(i) => Ok(i),
            Loc::Tail(_) => Ok(self.limit_index().expect("tails imply a limit point")),
        }
    }

    pub fn label(&self, p: &Point) -> String {
        match (&self.backend, p) {
            (Backend::Finite(t), Point::Finite(i)) if *i < t.labels.len() => t.labels[*i].clone(),
            _ => p.to_string(),
        }
    }

    pub fn parse_point(&self, text: &str) -> Result<Point> {
        let text = text.trim();
        let bad = || Error::ForeignPoint(text.to_string());
        let p = match &self.backend {
            Backend::Finite(t) => {
                let i = t.labels.iter().position(|l| l == text).ok_or_else(bad)?;
                Point::Finite(i)
            }
            _ => {
                if text == "Infinity" {
                    Point::Infinity
                } else if text == "Origin" {
                    Point::Origin
                } else {
                    let open = text.find('(').ok_or_else(bad)?;
                    let inner = text[open + 1..].strip_suffix(')').ok_or_else(bad)?;
                    match &text[..open] {
                        "Int" => Point::Int(inner.parse().map_err(|_| bad())?),
                        "ATail" => Point::ATail(inner.parse().map_err(|_| bad())?),
                        "BTail" => Point::BTail(inner.parse().map_err(|_| bad())?),
                        _ => return Err(bad()),
                    }
                }
            }
        };
        self.locate(&p)?;
        Ok(p)
    }

    /// `σ^m(x)`.
    pub fn sigma_apply(&self, x: &Point, m: i64) -> Result<Point> {
        self.locate(x)?;
        Ok(match (&self.backend, *x) {
            (Backend::Finite(t), Point::Finite(i)) => {
                let mut cycle = 1usize;
                let mut y = t.sigma[i];
                while y != i {
                    y = t.sigma[y];
                    cycle += 1;
                }
                let steps = m.rem_euclid(cycle as i64);
                let mut y = i;
                for _ in 0..steps {
                    y = t.sigma[y];
                }
                Point::Finite(y)
            }
            (Backend::IntShift { .. }, Point::Int(k)) => Point::Int(k + m),
            (Backend::PairSwapTails { .. }, Point::BTail(n)) if m.rem_euclid(2) == 1 => {
                if n % 2 == 1 {
                    Point::BTail(n + 1)
                } else {
                    Point::BTail(n - 1)
                }
            }
            (_, p) => p,
        })
    }

    /// Least `p ≥ 1` with `σ^p(x) = x`, or `None` for an aperiodic point.
    pub fn period(&self, x: &Point) -> Result<Option<u64>> {
        self.locate(x)?;
        Ok(match (&self.backend, *x) {
            (Backend::Finite(t), Point::Finite(i)) => {
                let mut p = 1u64;
                let mut y = t.sigma[i];
                while y != i {
                    y = t.sigma[y];
                    p += 1;
                }
                Some(p)
            }
            (Backend::IntShift { .. }, Point::Int(_)) => None,
            (Backend::PairSwapTails { .. }, Point::BTail(_)) => Some(2),
            _ => Some(1),
        })
    }

    // ----- sets -----

    pub fn empty_set(&self) -> SetRep {
        SetRep { members: vec![false; self.rep_count()], tails: vec![false; self.tail_count()] }
    }

    pub fn full_set(&self) -> SetRep {
        SetRep { members: vec![true; self.rep_count()], tails: vec![true; self.tail_count()] }
    }

    /// Builds a set from explicit points and cofinal tail flags.
    pub fn set_from(&self, points: &[Point], tails: &[usize]) -> Result<SetRep> {
        let mut s = self.empty_set();
        for p in points {
            match self.locate(p)? {
                Loc::Rep(i) => s.members[i] = true,
                Loc::Tail(_) => {
                    return Err(Error::WindowOverflow { shift: 0, window: self.window().unwrap_or(0) })
                }
            }
        }
        for &t in tails {
            if t >= s.tails.len() {
                return Err(Error::ForeignPoint(format!("tail {t}")));
            }
            s.tails[t] = true;
        }
        Ok(s)
    }

    /// Builds a set from raw member/tail flags.
    pub fn set_from_flags(&self, members: Vec<bool>, tails: Vec<bool>) -> Result<SetRep> {
        if members.len() != self.rep_count() || tails.len() != self.tail_count() {
            return Err(Error::Parse("set flags do not match the space layout".into()));
        }
        Ok(SetRep { members, tails })
    }

    pub fn contains(&self, s: &SetRep, p: &Point) -> Result<bool> {
        Ok(match self.locate(p)? {
            Loc::Rep(i) => s.members[i],
            Loc::Tail(t) => s.tails[t],
        })
    }

    pub fn interior(&self, s: &SetRep) -> SetRep {
        match &self.backend {
            Backend::Finite(t) => SetRep {
                members: (0..t.labels.len())
                    .map(|x| (0..t.labels.len()).all(|y| !t.nbhd[x][y] || s.members[y]))
                    .collect(),
                tails: Vec::new(),
            },
            _ => {
                let mut out = s.clone();
                let lim = self.limit_index().unwrap();
                // Neighbourhoods of the limit are cofinite.
                out.members[lim] = s.members[lim] && s.tails.iter().all(|&b| b);
                out
            }
        }
    }

    pub fn closure(&self, s: &SetRep) -> SetRep {
        match &self.backend {
            Backend::Finite(t) => SetRep {
                members: (0..t.labels.len())
                    .map(|x| (0..t.labels.len()).any(|y| t.nbhd[x][y] && s.members[y]))
                    .collect(),
                tails: Vec::new(),
            },
            _ => {
                let mut out = s.clone();
                let lim = self.limit_index().unwrap();
                out.members[lim] = s.members[lim] || s.tails.iter().any(|&b| b);
                out
            }
        }
    }

    pub fn is_open(&self, s: &SetRep) -> bool {
        self.interior(s) == *s
    }

    pub fn is_closed(&self, s: &SetRep) -> bool {
        self.closure(s) == *s
    }

    pub fn is_dense(&self, s: &SetRep) -> bool {
        self.closure(s) == self.full_set()
    }

    /// Some point of `s`, preferring window points, then the limit, then tails.
    pub fn some_point(&self, s: &SetRep) -> Option<Point> {
        if let Some(i) = s.members.iter().position(|&b| b) {
            return Some(self.rep_point(i));
        }
        s.tails.iter().position(|&b| b).map(|t| self.tail_point(t, 1))
    }

    /// Tail points whose image under `σ^m` might land inside the window.
    fn tail_probe_depth(&self, m: i64) -> u64 {
        match self.backend {
            Backend::Finite(_) => 0,
            Backend::IntShift { .. } => m.unsigned_abs() + 2,
            Backend::PairSwapTails { .. } => 2,
        }
    }

    /// `σ^m(S)`.
    pub fn image(&self, s: &SetRep, m: i64) -> Result<SetRep> {
        let mut out = self.empty_set();
        for i in 0..self.rep_count() {
            let pre = self.sigma_apply(&self.rep_point(i), -m)?;
            out.members[i] = self.contains(s, &pre)?;
        }
        let depth = self.tail_probe_depth(m);
        for t in 0..self.tail_count() {
            let far = self.sigma_apply(&self.tail_point(t, depth + 1), -m)?;
            let flag = self.contains(s, &far)?;
            for j in 1..=depth {
                let pre = self.sigma_apply(&self.tail_point(t, j), -m)?;
                if self.contains(s, &pre)? != flag {
                    return Err(Error::WindowOverflow { shift: m, window: self.window().unwrap() });
                }
            }
            out.tails[t] = flag;
        }
        Ok(out)
    }

    // ----- functions -----

    pub fn is_continuous(&self, raw: &RawFunction) -> bool {
        if raw.values.len() != self.rep_count() || raw.tail_limits.len() != self.tail_count() {
            return false;
        }
        match &self.backend {
            Backend::Finite(t) => (0..t.labels.len()).all(|x| {
                (0..t.labels.len()).all(|y| !t.nbhd[x][y] || raw.values[y] == raw.values[x])
            }),
            _ => {
                let lim = raw.values[self.limit_index().unwrap()];
                raw.tail_limits.iter().all(|&v| v == lim)
            }
        }
    }

    pub fn function(&self, raw: RawFunction) -> Result<CtsFun> {
        if !self.is_continuous(&raw) {
            return Err(Error::Discontinuous(match self.kind() {
                SpaceKind::Finite => "value not constant on a minimal open neighbourhood".into(),
                _ => "tail limit differs from the value at the limit point".into(),
            }));
        }
        Ok(CtsFun { values: raw.values })
    }

    /// Function with the given representative values; tails follow the limit.
    pub fn function_from_values(&self, values: Vec<Complex64>) -> Result<CtsFun> {
        let tail_limits = match self.limit_index() {
            Some(l) if l < values.len() => vec![values[l]; self.tail_count()],
            _ => Vec::new(),
        };
        self.function(RawFunction { values, tail_limits })
    }

    pub fn constant(&self, c: Complex64) -> CtsFun {
        CtsFun { values: vec![c; self.rep_count()] }
    }

    pub fn zero_fn(&self) -> CtsFun {
        self.constant(Complex64::new(0.0, 0.0))
    }

    /// Characteristic function of `s`; fails unless `s` is clopen.
    pub fn indicator(&self, s: &SetRep) -> Result<CtsFun> {
        let values = s.members.iter().map(|&b| Complex64::new(f64::from(u8::from(b)), 0.0)).collect();
        let tail_limits = s.tails.iter().map(|&b| Complex64::new(f64::from(u8::from(b)), 0.0)).collect();
        self.function(RawFunction { values, tail_limits })
    }

    pub fn eval(&self, f: &CtsFun, p: &Point) -> Result<Complex64> {
        Ok(f.values[self.value_index(p)?])
    }

    /// `f ∘ σ^m`. Fails with `WindowOverflow` when exceptional data would be
    /// moved onto tail points beyond the window.
    pub fn compose_sigma(&self, f: &CtsFun, m: i64) -> Result<CtsFun> {
        if m == 0 {
            return Ok(f.clone());
        }
        let mut values = Vec::with_capacity(self.rep_count());
        for i in 0..self.rep_count() {
            values.push(self.eval(f, &self.sigma_apply(&self.rep_point(i), m)?)?);
        }
        if let Some(lim) = self.limit_index() {
            let depth = self.tail_probe_depth(m);
            for t in 0..self.tail_count() {
                for j in 1..=depth {
                    let y = self.sigma_apply(&self.tail_point(t, j), m)?;
                    if self.eval(f, &y)? != f.values[lim] {
                        return Err(Error::WindowOverflow { shift: m, window: self.window().unwrap() });
                    }
                }
            }
        }
        Ok(CtsFun { values })
    }

    /// `{x : |f(x)| > eps}` (not closed).
    pub fn nonzero_set(&self, f: &CtsFun, eps: f64) -> SetRep {
        let members: Vec<bool> = f.values.iter().map(|v| v.norm() > eps).collect();
        let tails = match self.limit_index() {
            Some(l) => vec![members[l]; self.tail_count()],
            None => Vec::new(),
        };
        SetRep { members, tails }
    }

    /// Topological support: closure of the numerical nonzero set.
    pub fn support(&self, f: &CtsFun, eps: f64) -> SetRep {
        self.closure(&self.nonzero_set(f, eps))
    }

    /// A spanning family of the representable continuous functions: for a
    /// finite space the indicators of the connected components, otherwise the
    /// constant 1 together with the indicators of the (isolated) window points.
    pub fn continuous_basis(&self) -> Vec<CtsFun> {
        match &self.backend {
            Backend::Finite(t) => (0..t.components)
                .map(|c| CtsFun {
                    values: t
                        .component
                        .iter()
                        .map(|&cx| Complex64::new(f64::from(u8::from(cx == c)), 0.0))
                        .collect(),
                })
                .collect(),
            _ => {
                let mut basis = vec![self.constant(Complex64::new(1.0, 0.0))];
                basis.extend((0..self.window_len()).map(|i| self.bump(i)));
                basis
            }
        }
    }

    /// Indicator of the window point with representative index `i` (infinite
    /// backends) or of its component (finite backend).
    pub fn bump(&self, i: usize) -> CtsFun {
        match &self.backend {
            Backend::Finite(t) => CtsFun {
                values: t
                    .component
                    .iter()
                    .map(|&c| Complex64::new(f64::from(u8::from(c == t.component[i])), 0.0))
                    .collect(),
            },
            _ => {
                let mut values = vec![Complex64::new(0.0, 0.0); self.rep_count()];
                values[i] = Complex64::new(1.0, 0.0);
                CtsFun { values }
            }
        }
    }

    /// Connected component index of each point (finite backend only).
    pub fn components(&self) -> Option<(&[usize], usize)> {
        match &self.backend {
            Backend::Finite(t) => Some((&t.component, t.components)),
            _ => None,
        }
    }

    /// The same system with the window enlarged by at least `extra`.
    pub fn enlarged(&self, extra: u64) -> Space {
        let backend = match &self.backend {
            Backend::Finite(t) => Backend::Finite(t.clone()),
            &Backend::IntShift { window } => Backend::IntShift { window: window + extra },
            &Backend::PairSwapTails { window } => {
                Backend::PairSwapTails { window: window + extra + (extra % 2) }
            }
        };
        Space { backend }
    }

    /// Re-expresses `f` over `target`, which must be an enlargement of `self`.
    pub fn embed(&self, f: &CtsFun, target: &Space) -> Result<CtsFun> {
        if self.kind() != target.kind() {
            return Err(Error::SpaceMismatch);
        }
        let values = target
            .rep_points()
            .map(|p| self.eval(f, &p))
            .collect::<Result<Vec<_>>>()?;
        Ok(CtsFun { values })
    }
}

fn build_finite(
    points: &[String],
    min_open_nbhd: &BTreeMap<String, Vec<String>>,
    sigma: &BTreeMap<String, String>,
) -> Result<FiniteTopology> {
    let n = points.len();
    if n == 0 {
        return Err(Error::InvalidTopology("the space must be non-empty".into()));
    }
    let index: BTreeMap<&str, usize> = points.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    if index.len() != n {
        return Err(Error::InvalidTopology("duplicate point labels".into()));
    }
    let lookup = |l: &str, what: fn(String) -> Error| {
        index.get(l).copied().ok_or_else(|| what(format!("unknown point {l:?}")))
    };

    let mut nbhd = vec![vec![false; n]; n];
    for (x, label) in points.iter().enumerate() {
        let u = min_open_nbhd
            .get(label)
            .ok_or_else(|| Error::InvalidTopology(format!("no neighbourhood given for {label:?}")))?;
        for y in u {
            nbhd[x][lookup(y, Error::InvalidTopology)?] = true;
        }
    }
    for label in min_open_nbhd.keys() {
        lookup(label, Error::InvalidTopology)?;
    }
    for x in 0..n {
        if !nbhd[x][x] {
            return Err(Error::InvalidTopology(format!("{:?} is not in its own neighbourhood", points[x])));
        }
        for y in 0..n {
            if nbhd[x][y] && (0..n).any(|z| nbhd[y][z] && !nbhd[x][z]) {
                return Err(Error::InvalidTopology(format!(
                    "U({:?}) is not contained in U({:?})",
                    points[y], points[x]
                )));
            }
        }
    }

    let mut perm = vec![usize::MAX; n];
    for (x, label) in points.iter().enumerate() {
        let image = sigma
            .get(label)
            .ok_or_else(|| Error::NotHomeomorphism(format!("sigma undefined at {label:?}")))?;
        perm[x] = lookup(image, Error::NotHomeomorphism)?;
    }
    for label in sigma.keys() {
        lookup(label, Error::NotHomeomorphism)?;
    }
    let mut inv = vec![usize::MAX; n];
    for (x, &y) in perm.iter().enumerate() {
        if inv[y] != usize::MAX {
            return Err(Error::NotHomeomorphism("sigma is not injective".into()));
        }
        inv[y] = x;
    }
    // σ is a homeomorphism of the preorder topology iff σ(U(x)) = U(σ(x)).
    for x in 0..n {
        for y in 0..n {
            if nbhd[x][y] != nbhd[perm[x]][perm[y]] {
                return Err(Error::NotHomeomorphism(format!(
                    "sigma does not map U({:?}) onto U({:?})",
                    points[x], points[perm[x]]
                )));
            }
        }
    }

    // Connected components of the specialisation preorder.
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    for x in 0..n {
        for y in 0..n {
            if nbhd[x][y] {
                let (a, b) = (find(&mut parent, x), find(&mut parent, y));
                parent[a] = b;
            }
        }
    }
    let mut ids = BTreeMap::new();
    let component: Vec<usize> = (0..n)
        .map(|x| {
            let r = find(&mut parent, x);
            let next = ids.len();
            *ids.entry(r).or_insert(next)
        })
        .collect();

    Ok(FiniteTopology {
        labels: points.to_vec(),
        nbhd,
        sigma: perm,
        component,
        components: ids.len(),
    })
}
