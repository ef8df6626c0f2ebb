use std::process::ExitCode;
use std::sync::Arc;

use crossprod_core::characters::{gelfand_norm, TGrid};
use crossprod_core::dynsys::DynSys;
use crossprod_core::gns::{cstar_norm, envelope_check, restriction_check, ExtensionCase};
use crossprod_core::sample::Sampler;
use crossprod_core::verify::{self, CheckRecord};
use crossprod_core::{fixtures, Complex64, Element, Point, Result};

const SEED: u64 = 2024;

struct Outcome {
    passed: bool,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { passed: true, notes: Vec::new() }
    }

    fn records(&mut self, fixture: &str, records: impl IntoIterator<Item = CheckRecord>) {
        for r in records {
            self.check(fixture, r.passed, format!("{}: {}", r.check, r.actual));
        }
    }

    fn check(&mut self, fixture: &str, ok: bool, what: String) {
        if !ok {
            self.passed = false;
            self.notes.push(format!("{fixture}: {what}"));
        }
    }
}

fn algebra_axioms(all: &[(&str, DynSys)]) -> Result<Outcome> {
    let mut o = Outcome::new();
    for (name, sys) in all {
        o.records(name, verify::algebra_axioms(sys, 200, SEED, 1e-9)?);
    }
    Ok(o)
}

fn oracle_equivalence(all: &[(&str, DynSys)]) -> Result<Outcome> {
    let mut o = Outcome::new();
    for (name, sys) in all {
        o.records(name, [verify::commutant_oracle_agreement(sys, 200, SEED)?]);
    }
    Ok(o)
}

fn characters(all: &[(&str, DynSys)]) -> Result<Outcome> {
    let mut o = Outcome::new();
    let grid = TGrid::new(16)?;
    for (name, sys) in all {
        o.records(name, verify::character_suite(sys, &grid, 100, SEED, 1e-9)?);
        o.records(name, [verify::unboundedness(sys)?]);
    }
    Ok(o)
}

fn semisimplicity(all: &[(&str, DynSys)]) -> Result<Outcome> {
    let mut o = Outcome::new();
    let grid = TGrid::new(64)?;
    for (name, sys) in all {
        o.records(name, verify::semisimplicity(sys, &grid, 100, SEED)?);
    }
    Ok(o)
}

fn quotient(all: &[(&str, DynSys)]) -> Result<Outcome> {
    let mut o = Outcome::new();
    let grid = TGrid::new(64)?;
    for (name, sys) in all {
        o.records(name, [verify::psi_sweep(sys, &grid, 10, SEED)?]);
    }
    Ok(o)
}

fn projections(all: &[(&str, DynSys)]) -> Result<Outcome> {
    let mut o = Outcome::new();
    let grid = TGrid::new(16)?;
    for (name, sys) in all {
        let expect = *name != "pair_swap_tails";
        o.check(name, sys.projection_condition() == expect, format!("projection condition should be {expect}"));
        if !expect {
            let w = sys.projection_witness();
            o.check(name, w == Some((1, Point::Origin)), format!("witness {w:?}, expected (1, Origin)"));
        }
        o.records(name, verify::projection_suite(sys, &grid, 100, SEED, 1e-9)?);
    }
    Ok(o)
}

fn envelope(all: &[(&str, DynSys)]) -> Result<Outcome> {
    let mut o = Outcome::new();
    let grid = TGrid::new(1024)?;
    for (name, sys) in all.iter().filter(|(n, _)| ["one_point", "swap2", "cycle3"].contains(n)) {
        let mut s = Sampler::new(sys.space(), SEED);
        for i in 0..20u64 {
            let l = s.commutant_element(sys, 8);
            let r = envelope_check(sys, &l, &grid, 9, 3, SEED + i)?;
            let budget = 1e-3 * l.ell1_norm();
            o.check(name, r.passed, format!("envelope gap {:e} > allowed {:e}", r.norm_gap, r.allowed_gap));
            o.check(name, r.allowed_gap <= budget, format!("certified bound {:e} > {budget:e}", r.allowed_gap));
        }
    }
    let one = fixtures::one_point();
    let sp = Arc::clone(one.space());
    let l = Element::delta(&sp, 1).add(&Element::delta(&sp, -1))?;
    let g = gelfand_norm(&one, &l, &grid)?.value;
    let c = cstar_norm(&one, &l, &grid, 2)?.estimate.value;
    o.check("one_point", (g - 2.0).abs() <= 1e-6, format!("Gelfand norm of delta + delta^-1 is {g}"));
    o.check("one_point", (c - 2.0).abs() <= 1e-6, format!("enveloping norm of delta + delta^-1 is {c}"));
    Ok(o)
}

fn restriction() -> Result<Outcome> {
    let mut o = Outcome::new();
    let lambdas: Vec<Complex64> = TGrid::new(64)?.samples().collect();
    let z = fixtures::int_shift(8);
    for (x, case) in [(Point::Int(2), ExtensionCase::Aperiodic), (Point::Infinity, ExtensionCase::BoundaryPeriodic)] {
        let r = restriction_check(&z, &x, &lambdas, 100, 2, SEED)?;
        o.check("int_shift", r.case == case, format!("{x:?} classified as {:?}", r.case));
        o.check("int_shift", r.max_deviation <= 1e-10, format!("{x:?} deviation {:e}", r.max_deviation));
    }
    let t = fixtures::pair_swap_tails(8);
    let r = restriction_check(&t, &Point::Origin, &lambdas, 100, 3, SEED)?;
    o.check("pair_swap_tails", r.case == ExtensionCase::InteriorPeriodic, format!("Origin classified as {:?}", r.case));
    o.check(
        "pair_swap_tails",
        r.period == Some(1) && r.minimal_order == Some(2),
        format!("Origin period {:?}, order {:?}", r.period, r.minimal_order),
    );
    o.check("pair_swap_tails", r.max_deviation <= 1e-9, format!("Origin deviation {:e}", r.max_deviation));
    Ok(o)
}

fn periodic_interiors(all: &[(&str, DynSys)]) -> Result<Outcome> {
    let mut o = Outcome::new();
    for (name, sys) in all {
        o.records(name, verify::periodic_interiors(sys));
        let free = sys.freeness_and_density_report().topologically_free();
        o.check(name, free == (*name == "int_shift"), format!("topologically free = {free}"));
    }
    Ok(o)
}

fn cesaro(all: &[(&str, DynSys)]) -> Result<Outcome> {
    let mut o = Outcome::new();
    let grid = TGrid::new(64)?;
    for (name, sys) in all {
        o.records(name, [verify::cesaro(sys, &grid, 50, SEED, 12)?]);
    }
    Ok(o)
}

fn main() -> ExitCode {
    let all = fixtures::all();
    type Criterion<'a> = (&'a str, Box<dyn Fn() -> Result<Outcome> + 'a>);
    let criteria: Vec<Criterion> = vec![
        ("algebra axioms", Box::new(|| algebra_axioms(&all))),
        ("commutant oracle equivalence", Box::new(|| oracle_equivalence(&all))),
        ("character suite", Box::new(|| characters(&all))),
        ("semisimplicity", Box::new(|| semisimplicity(&all))),
        ("quotient structure", Box::new(|| quotient(&all))),
        ("projections", Box::new(|| projections(&all))),
        ("envelope identity", Box::new(|| envelope(&all))),
        ("restriction cases", Box::new(restriction)),
        ("periodic interior identities", Box::new(|| periodic_interiors(&all))),
        ("Cesaro convergence", Box::new(|| cesaro(&all))),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = run().unwrap_or_else(|e| Outcome { passed: false, notes: vec![format!("error: {e}")] });
        let tag = if outcome.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] AC{} {name}", i + 1);
        for note in &outcome.notes {
            println!("       {note}");
        }
        failures += usize::from(!outcome.passed);
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
