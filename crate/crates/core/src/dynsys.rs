//! Periodic-point combinatorics of a system `(X, σ)`.

use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::commutant::ChiFamily;
use crate::error::Result;
use crate::space::{gcd_u64, lcm, Point, SetRep, Space, SpaceKind};

/// A space together with the period data of its homeomorphism.
#[derive(Debug)]
pub struct DynSys {
    space: Arc<Space>,
    lcm: Option<u64>,
    chi: OnceLock<Result<ChiFamily>>,
}

impl Clone for DynSys {
    fn clone(&self) -> Self {
        DynSys { space: Arc::clone(&self.space), lcm: self.lcm, chi: OnceLock::new() }
    }
}

/// Positive divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

impl DynSys {
    pub fn new(space: Space) -> DynSys {
        DynSys::from_arc(Arc::new(space))
    }

    pub fn from_arc(space: Arc<Space>) -> DynSys {
        let lcm = match space.kind() {
            SpaceKind::IntShift => None,
            SpaceKind::PairSwapTails => Some(2),
            SpaceKind::Finite => Some(space.rep_points().fold(1, |acc, p| {
                lcm(acc, space.period(&p).ok().flatten().expect("finite points are periodic"))
            })),
        };
        DynSys { space, lcm, chi: OnceLock::new() }
    }

    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    /// Least common multiple of all periods, if every point is periodic.
    pub fn lcm(&self) -> Option<u64> {
        self.lcm
    }

    /// The finitely many positive indices that represent every `Fix_k`, `k ≠ 0`.
    pub fn reduced_indices(&self) -> Vec<u64> {
        match self.lcm {
            Some(l) => divisors(l),
            None => vec![1],
        }
    }

    /// Positive representative of `k` for `Fix_k`; `None` means `k = 0`.
    pub fn reduce(&self, k: i64) -> Option<u64> {
        if k == 0 {
            return None;
        }
        Some(match self.lcm {
            Some(l) => gcd_u64(k.unsigned_abs(), l),
            None => 1,
        })
    }

    pub(crate) fn chi_cell(&self) -> &OnceLock<Result<ChiFamily>> {
        &self.chi
    }

    /// `Fix_k = {x : σ^k x = x}`.
    pub fn fix_set(&self, k: i64) -> SetRep {
        let sp = &self.space;
        let Some(q) = self.reduce(k) else {
            return sp.full_set();
        };
        let q = q as i64;
        let fixed = |p: &Point| sp.sigma_apply(p, q).map(|y| y == *p).unwrap_or(false);
        let members = sp.rep_points().map(|p| fixed(&p)).collect();
        // A tail is cofinally fixed iff its first two outer points are; the
        // backends repeat with period at most 2 along a tail.
        let tails = (0..sp.tail_count())
            .map(|t| fixed(&sp.tail_point(t, 1)) && fixed(&sp.tail_point(t, 2)))
            .collect();
        sp.set_from_flags(members, tails).expect("layout matches")
    }

    /// `Per_p`: points of exact period `p`.
    pub fn per_set(&self, p: u64) -> SetRep {
        assert!(p >= 1, "periods are positive");
        let mut s = self.fix_set(p as i64);
        for d in divisors(p) {
            if d < p {
                s = s.difference(&self.fix_set(d as i64));
            }
        }
        s
    }

    /// All periodic points, `∪_q Fix_q`.
    pub fn periodic_set(&self) -> SetRep {
        self.union_over(|q| self.fix_set(q as i64))
    }

    pub fn aper_set(&self) -> SetRep {
        self.periodic_set().complement()
    }

    fn union_over(&self, f: impl Fn(u64) -> SetRep) -> SetRep {
        self.reduced_indices()
            .into_iter()
            .fold(self.space.empty_set(), |acc, q| acc.union(&f(q)))
    }

    /// `∪_{q≥1} Fix°_q`.
    pub fn union_fix_interiors(&self) -> SetRep {
        self.union_over(|q| self.space.interior(&self.fix_set(q as i64)))
    }

    /// `∪_{q≥1} Per°_q`. Every period divides the lcm, so other `q` add nothing.
    pub fn union_per_interiors(&self) -> SetRep {
        self.union_over(|q| self.space.interior(&self.per_set(q)))
    }

    pub fn minimal_interior_order(&self, x: &Point) -> Result<Option<u64>> {
        self.space.locate(x)?;
        for q in self.reduced_indices() {
            let int = self.space.interior(&self.fix_set(q as i64));
            if self.space.contains(&int, x)? {
                return Ok(Some(q));
            }
        }
        Ok(None)
    }

    /// First `k` (with a point) at which `Fix°_k` fails to be closed.
    pub fn projection_witness(&self) -> Option<(i64, Point)> {
        let sp = &self.space;
        std::iter::once(0)
            .chain(self.reduced_indices().into_iter().map(|q| q as i64))
            .find_map(|k| {
                let int = sp.interior(&self.fix_set(k));
                sp.some_point(&sp.closure(&int).difference(&int)).map(|p| (k, p))
            })
    }

    /// True iff every `Fix°_k` is closed.
    pub fn projection_condition(&self) -> bool {
        self.projection_witness().is_none()
    }

    /// Orbit of a periodic point, or `None` for an aperiodic one.
    pub fn orbit(&self, x: &Point) -> Result<Option<Vec<Point>>> {
        let Some(p) = self.space.period(x)? else {
            return Ok(None);
        };
        (0..p as i64).map(|j| self.space.sigma_apply(x, j)).collect::<Result<Vec<_>>>().map(Some)
    }

    /// One representative per orbit among window and limit points.
    pub fn periodic_orbit_representatives(&self) -> Vec<(Point, u64)> {
        let mut seen = vec![false; self.space.rep_count()];
        let mut reps = Vec::new();
        for i in 0..self.space.rep_count() {
            if seen[i] {
                continue;
            }
            let x = self.space.rep_point(i);
            let Some(orbit) = self.orbit(&x).expect("own point") else {
                continue;
            };
            for y in &orbit {
                if let Ok(crate::space::Loc::Rep(j)) = self.space.locate(y) {
                    seen[j] = true;
                }
            }
            reps.push((x, orbit.len() as u64));
        }
        reps
    }

    pub fn periodic_interior_report(&self, s: &[u64]) -> PeriodicInteriorReport {
        let sp = &self.space;
        let mut s: Vec<u64> = s.iter().copied().filter(|&q| q >= 1).collect();
        s.sort_unstable();
        s.dedup();
        let mut p_s: Vec<u64> = s.iter().flat_map(|&q| divisors(q)).collect();
        p_s.sort_unstable();
        p_s.dedup();

        let union = |it: &mut dyn Iterator<Item = SetRep>| it.fold(sp.empty_set(), |a, b| a.union(&b));
        let per_int = union(&mut p_s.iter().map(|&p| sp.interior(&self.per_set(p))));
        let fix_int = union(&mut s.iter().map(|&q| sp.interior(&self.fix_set(q as i64))));
        let int_fix_union = sp.interior(&union(&mut s.iter().map(|&q| self.fix_set(q as i64))));
        let int_per_union = sp.interior(&union(&mut p_s.iter().map(|&p| self.per_set(p))));
        let cl_per_int = sp.closure(&per_int);

        let mut checks = Vec::new();
        let mut subset = |name: &str, a: &SetRep, b: &SetRep| {
            let witness = sp.some_point(&a.difference(b)).map(|p| sp.label(&p));
            checks.push(SetCheck { name: name.to_string(), holds: witness.is_none(), witness });
        };
        subset("union Per° within union Fix°", &per_int, &fix_int);
        subset("union Fix° within interior of union Fix", &fix_int, &int_fix_union);
        subset("interior of union Fix within closure of union Per°", &int_fix_union, &cl_per_int);
        subset("union Per° within interior of union Per", &per_int, &int_per_union);
        subset("interior of union Per within interior of union Fix", &int_per_union, &int_fix_union);

        let closures = [
            ("closure of interior of union Per", sp.closure(&int_per_union)),
            ("closure of union Per°", cl_per_int.clone()),
            ("closure of union Fix°", sp.closure(&fix_int)),
            ("closure of interior of union Fix", sp.closure(&int_fix_union)),
        ];
        for pair in closures.windows(2) {
            let diff = pair[0].1.difference(&pair[1].1).union(&pair[1].1.difference(&pair[0].1));
            let witness = sp.some_point(&diff).map(|p| sp.label(&p));
            checks.push(SetCheck {
                name: format!("{} equals {}", pair[0].0, pair[1].0),
                holds: witness.is_none(),
                witness,
            });
        }
        let common_closure = sp.rep_points().filter(|p| sp.contains(&cl_per_int, p).unwrap()).map(|p| sp.label(&p)).collect();
        PeriodicInteriorReport { s, p_s, checks, common_closure }
    }

    pub fn freeness_and_density_report(&self) -> FreenessReport {
        let sp = &self.space;
        let qs = self.reduced_indices();
        let aper = self.aper_set();
        let periodic = self.periodic_set();
        let per_union = qs.iter().fold(sp.empty_set(), |a, &q| a.union(&self.per_set(q)));
        let freeness = [
            sp.is_dense(&aper),
            qs.iter().all(|&q| sp.interior(&self.fix_set(q as i64)).is_empty()),
            sp.interior(&periodic).is_empty(),
            qs.iter().all(|&q| sp.interior(&self.per_set(q)).is_empty()),
            sp.interior(&per_union).is_empty(),
        ];
        let density = [
            sp.is_dense(&aper.union(&self.union_fix_interiors())),
            sp.is_dense(&aper.union(&sp.interior(&periodic))),
            sp.is_dense(&aper.union(&self.union_per_interiors())),
            sp.is_dense(&aper.union(&sp.interior(&per_union))),
        ];
        FreenessReport { freeness, density }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SetCheck {
    pub name: String,
    pub holds: bool,
    /// A point separating the two sides when the check fails.
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeriodicInteriorReport {
    pub s: Vec<u64>,
    pub p_s: Vec<u64>,
    pub checks: Vec<SetCheck>,
    /// Window and limit points of the common closure.
    pub common_closure: Vec<String>,
}

impl PeriodicInteriorReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// Topological freeness criteria and density statements.
///
/// `freeness`: aperiodic points dense; every `Fix°_q` empty; `(∪Fix_q)°`
/// empty; every `Per°_q` empty; `(∪Per_q)°` empty.
/// `density`: `Aper` united with `∪Fix°_q`, `(∪Fix_q)°`, `∪Per°_q`,
/// `(∪Per_q)°` respectively is dense.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FreenessReport {
    pub freeness: [bool; 5],
    pub density: [bool; 4],
}

impl FreenessReport {
    pub fn topologically_free(&self) -> bool {
        self.freeness[0]
    }

    pub fn consistent(&self) -> bool {
        self.freeness.iter().all(|&b| b == self.freeness[0]) && self.density.iter().all(|&b| b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(9), vec![1, 3, 9]);
    }

    #[test]
    fn fix_sets() {
        let swap = fixtures::swap2();
        assert!(swap.fix_set(1).is_empty());
        assert_eq!(swap.fix_set(2), swap.space().full_set());
        assert_eq!(swap.fix_set(-4), swap.space().full_set());

        let z = fixtures::int_shift(8);
        let inf = z.space().set_from(&[Point::Infinity], &[]).unwrap();
        assert_eq!(z.fix_set(3), inf);
        assert_eq!(z.fix_set(0), z.space().full_set());

        let t = fixtures::pair_swap_tails(8);
        let sp = t.space();
        let mut pts: Vec<Point> = (1..=8).map(Point::ATail).collect();
        pts.push(Point::Origin);
        assert_eq!(t.fix_set(1), sp.set_from(&pts, &[0]).unwrap());
        assert_eq!(t.fix_set(2), sp.full_set());
    }

    #[test]
    fn per_sets() {
        let c3 = fixtures::cycle3();
        assert_eq!(c3.per_set(3), c3.space().full_set());
        assert!(c3.per_set(1).is_empty());

        let t = fixtures::pair_swap_tails(8);
        let b: Vec<Point> = (1..=8).map(Point::BTail).collect();
        assert_eq!(t.per_set(2), t.space().set_from(&b, &[1]).unwrap());

        let z = fixtures::int_shift(8);
        assert_eq!(z.per_set(1), z.space().set_from(&[Point::Infinity], &[]).unwrap());
        let ints: Vec<Point> = (-8..=8).map(Point::Int).collect();
        assert_eq!(z.aper_set(), z.space().set_from(&ints, &[0, 1]).unwrap());
    }

    #[test]
    fn minimal_orders() {
        let swap = fixtures::swap2();
        assert_eq!(swap.minimal_interior_order(&Point::Finite(0)).unwrap(), Some(2));
        let t = fixtures::pair_swap_tails(8);
        assert_eq!(t.minimal_interior_order(&Point::Origin).unwrap(), Some(2));
        assert_eq!(t.minimal_interior_order(&Point::ATail(3)).unwrap(), Some(1));
        let z = fixtures::int_shift(8);
        assert_eq!(z.minimal_interior_order(&Point::Infinity).unwrap(), None);
        assert_eq!(z.minimal_interior_order(&Point::Int(7)).unwrap(), None);
    }

    #[test]
    fn projection_conditions() {
        assert!(fixtures::swap2().projection_condition());
        assert!(fixtures::cycle3().projection_condition());
        assert!(fixtures::int_shift(8).projection_condition());
        let t = fixtures::pair_swap_tails(8);
        assert_eq!(t.projection_witness(), Some((1, Point::Origin)));
    }

    #[test]
    fn periodic_interior_examples() {
        let swap = fixtures::swap2();
        let r = swap.periodic_interior_report(&[2]);
        assert!(r.all_hold());
        assert_eq!(r.common_closure, vec!["a", "b"]);

        let t = fixtures::pair_swap_tails(8);
        let r = t.periodic_interior_report(&[1]);
        assert_eq!(r.p_s, vec![1]);
        assert!(r.all_hold());
        assert!(r.common_closure.contains(&"Origin".to_string()));
        assert!(!r.common_closure.iter().any(|l| l.starts_with("BTail")));

        let z = fixtures::int_shift(8);
        let r = z.periodic_interior_report(&[5]);
        assert!(r.all_hold());
        assert!(r.common_closure.is_empty());
    }

    #[test]
    fn freeness_examples() {
        let z = fixtures::int_shift(8).freeness_and_density_report();
        assert_eq!(z.freeness, [true; 5]);
        assert_eq!(z.density, [true; 4]);
        let s = fixtures::swap2().freeness_and_density_report();
        assert_eq!(s.freeness, [false; 5]);
        assert_eq!(s.density, [true; 4]);
        let t = fixtures::pair_swap_tails(8).freeness_and_density_report();
        assert_eq!(t.freeness, [false; 5]);
        assert_eq!(t.density, [true; 4]);
    }
}
