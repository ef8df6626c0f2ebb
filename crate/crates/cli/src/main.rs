use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crossprod_core::characters::{classify_point, gelfand_norm, PointClass};
use crossprod_core::commutant::{e1_prime, require_commutant, ProjectionWitness};
use crossprod_core::gns::cstar_norm;
use crossprod_core::io::{element_to_json, parse_element};
use crossprod_core::verify::{self, Suite, VerifyOptions};
use crossprod_core::{fixtures, DynSys, Element, Error, SetRep, Space, TGrid};

const DEFAULT_SEED: u64 = 7;

#[derive(Parser)]
#[command(name = "crossprod", version, about = "Crossed-product algebras of desk-scale dynamical systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// System description: a JSON file or one of the bundled names
    /// (one_point, swap2, cycle3, int_shift, pair_swap_tails).
    #[arg(long, global = true)]
    space: Option<String>,

    /// Element JSON file.
    #[arg(long, global = true)]
    element: Option<String>,

    /// Number of points in the unit-circle grid.
    #[arg(long, global = true)]
    grid: Option<usize>,

    /// Truncation radius for aperiodic representations.
    #[arg(long, global = true)]
    trunc: Option<usize>,

    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Tolerance for approximate identities.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Emit JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Orbits, fixed-point and period table, projection condition.
    Describe,
    /// Characters of the commutant, organised by point.
    Charspace,
    /// Apply the projection onto the commutant.
    Project,
    /// l1, Gelfand and enveloping norms of an element.
    Norms,
    /// Run verification suites.
    Verify {
        #[arg(value_enum)]
        target: Target,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Algebra,
    Commutant,
    Characters,
    Gns,
    Appendix,
    All,
}

impl From<Target> for Suite {
    fn from(t: Target) -> Suite {
        match t {
            Target::Algebra => Suite::Algebra,
            Target::Commutant => Suite::Commutant,
            Target::Characters => Suite::Characters,
            Target::Gns => Suite::Gns,
            Target::Appendix => Suite::Appendix,
            Target::All => Suite::All,
        }
    }
}

enum Failure {
    Input(String),
    Verification(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Input(e.to_string())
    }
}

fn bundled(name: &str) -> Option<DynSys> {
    fixtures::all().into_iter().find(|(n, _)| *n == name).map(|(_, s)| s)
}

fn load_system(arg: &str) -> Result<DynSys, Failure> {
    if let Some(sys) = bundled(arg) {
        return Ok(sys);
    }
    let text = fs::read_to_string(arg).map_err(|e| Failure::Input(format!("{arg}: {e}")))?;
    let space = Space::from_json(&text).map_err(|e| Failure::Input(format!("{arg}: {e}")))?;
    Ok(DynSys::new(space))
}

fn require_system(cli: &Cli) -> Result<DynSys, Failure> {
    match &cli.space {
        Some(arg) => load_system(arg),
        None => Err(Failure::Input("--space is required".into())),
    }
}

fn load_element(cli: &Cli, sys: &DynSys) -> Result<Element, Failure> {
    let path = cli.element.as_deref().ok_or_else(|| Failure::Input("--element is required".into()))?;
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))?;
    parse_element(sys.space(), &text).map_err(|e| Failure::Input(format!("{path}: {e}")))
}

fn grid(cli: &Cli, default: usize) -> Result<TGrid, Failure> {
    Ok(TGrid::new(cli.grid.unwrap_or(default))?)
}

fn set_labels(sp: &Space, s: &SetRep) -> Vec<String> {
    let mut out: Vec<String> = sp.rep_points().zip(s.members()).filter(|(_, &m)| m).map(|(p, _)| sp.label(&p)).collect();
    for (t, &flag) in s.tails().iter().enumerate() {
        if flag {
            out.push(format!("{} tail beyond window", sp.tail_name(t)));
        }
    }
    out
}

fn describe(cli: &Cli) -> Result<Value, Failure> {
    let sys = require_system(cli)?;
    let sp = sys.space();
    let orbits: Vec<Value> = sys
        .periodic_orbit_representatives()
        .into_iter()
        .map(|(x, p)| {
            let orbit = sys.orbit(&x).ok().flatten().unwrap_or_default();
            json!({"period": p, "points": orbit.iter().map(|y| sp.label(y)).collect::<Vec<_>>()})
        })
        .collect();
    let top = sys.lcm().unwrap_or(1).max(6);
    let table: Vec<Value> = (1..=top)
        .map(|k| {
            let fix = sys.fix_set(k as i64);
            json!({
                "k": k,
                "fix": set_labels(sp, &fix),
                "fix_interior": set_labels(sp, &sp.interior(&fix)),
                "per": set_labels(sp, &sys.per_set(k)),
            })
        })
        .collect();
    let witness = sys.projection_witness().map(|(k, p)| json!({"k": k, "point": sp.label(&p)}));
    let freeness = sys.freeness_and_density_report();
    Ok(json!({
        "space": serde_json::to_value(sp.spec()).map_err(Error::from)?,
        "points": sp.rep_points().map(|p| sp.label(&p)).collect::<Vec<_>>(),
        "periodic_orbits": orbits,
        "aperiodic": set_labels(sp, &sys.aper_set()),
        "fix_per_table": table,
        "projection_condition": sys.projection_condition(),
        "projection_witness": witness,
        "topologically_free": freeness.topologically_free(),
    }))
}

fn class_row(sys: &DynSys, label: String, x: &crossprod_core::Point) -> Result<Value, Failure> {
    Ok(match classify_point(sys, x)? {
        PointClass::Single => json!({"point": label, "n": null, "fiber": "point", "characters": "omega_x"}),
        PointClass::Circle { n } => {
            json!({"point": label, "n": n, "fiber": "circle", "characters": "omega_{x,c}, |c| = 1"})
        }
    })
}

fn charspace(cli: &Cli) -> Result<Value, Failure> {
    let sys = require_system(cli)?;
    let sp = sys.space();
    let mut rows = Vec::new();
    for x in sp.rep_points() {
        rows.push(class_row(&sys, sp.label(&x), &x)?);
    }
    if let Some(w) = sp.window() {
        for t in 0..sp.tail_count() {
            let x = sp.tail_point(t, 1);
            rows.push(class_row(&sys, format!("{} tail beyond window {w}", sp.tail_name(t)), &x)?);
        }
    }
    Ok(json!({"characters": rows}))
}

fn project(cli: &Cli) -> Result<Value, Failure> {
    let sys = require_system(cli)?;
    let l = load_element(cli, &sys)?;
    match e1_prime(&sys, &l) {
        Ok(p) => Ok(json!({"projection": serde_json::to_value(element_to_json(&p)).map_err(Error::from)?})),
        Err(e) => match ProjectionWitness::from_error(&e) {
            Some(w) => Ok(json!({
                "projection": null,
                "reason": "an interior of a fixed-point set is not closed",
                "witness": {"k": w.k, "point": w.point},
            })),
            None => Err(e.into()),
        },
    }
}

fn norms(cli: &Cli) -> Result<Value, Failure> {
    let sys = require_system(cli)?;
    let l = load_element(cli, &sys)?;
    let g = grid(cli, 256)?;
    let trunc = cli.trunc.unwrap_or(verify::sample_degree(&sys) as usize + 10).max(l.degree() as usize + 1);
    let gelfand = match require_commutant(&sys, &l) {
        Ok(()) => serde_json::to_value(gelfand_norm(&sys, &l, &g)?).map_err(Error::from)?,
        Err(Error::NotInCommutant { k }) => json!({"value": null, "reason": format!("coefficient {k} leaves the commutant")}),
        Err(e) => return Err(e.into()),
    };
    let cstar = cstar_norm(&sys, &l, &g, trunc)?;
    Ok(json!({
        "ell1": l.ell1_norm(),
        "gelfand": gelfand,
        "cstar": serde_json::to_value(cstar).map_err(Error::from)?,
        "grid": g.resolution(),
    }))
}

fn run_verify(cli: &Cli, target: Target) -> Result<Value, Failure> {
    let defaults = VerifyOptions::default();
    let opts = VerifyOptions {
        seed: cli.seed,
        grid: cli.grid.unwrap_or(defaults.grid),
        trunc: cli.trunc.unwrap_or(defaults.trunc),
        tol: cli.tol.unwrap_or(defaults.tol),
        ..defaults
    };
    let systems: Vec<(String, DynSys)> = match &cli.space {
        Some(arg) => vec![(arg.clone(), load_system(arg)?)],
        None => fixtures::all().into_iter().map(|(n, s)| (n.to_string(), s)).collect(),
    };
    let mut reports = Vec::new();
    let mut all_passed = true;
    for (name, sys) in &systems {
        let records = verify::run(sys, target.into(), &opts)?;
        let failed = records.iter().filter(|r| !r.passed).count();
        all_passed &= failed == 0;
        reports.push(json!({
            "system": name,
            "checks": records.len(),
            "failed": failed,
            "records": serde_json::to_value(&records).map_err(Error::from)?,
        }));
    }
    let out = json!({"passed": all_passed, "seed": cli.seed, "systems": reports});
    if all_passed {
        Ok(out)
    } else {
        Err(Failure::Verification(out))
    }
}

fn render(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => render_map(map, indent, out),
        Value::Array(items) => {
            for item in items {
                match item {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}-\n"));
                        render(item, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}- {}\n", scalar(item))),
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar(v))),
    }
}

fn render_map(map: &Map<String, Value>, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    for (k, v) in map {
        match v {
            Value::Object(m) if !m.is_empty() => {
                out.push_str(&format!("{pad}{k}:\n"));
                render(v, indent + 1, out);
            }
            Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
                out.push_str(&format!("{pad}{k}:\n"));
                render(v, indent + 1, out);
            }
            Value::Array(a) => {
                let items: Vec<String> = a.iter().map(scalar).collect();
                out.push_str(&format!("{pad}{k}: [{}]\n", items.join(", ")));
            }
            _ => out.push_str(&format!("{pad}{k}: {}\n", scalar(v))),
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn emit(cli: &Cli, v: &Value) {
    if cli.json {
        println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
    } else {
        let mut out = String::new();
        render(v, 0, &mut out);
        print!("{out}");
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Describe => describe(&cli),
        Command::Charspace => charspace(&cli),
        Command::Project => project(&cli),
        Command::Norms => norms(&cli),
        Command::Verify { target } => run_verify(&cli, *target),
    };
    match result {
        Ok(v) => {
            emit(&cli, &v);
            ExitCode::SUCCESS
        }
        Err(Failure::Verification(v)) => {
            emit(&cli, &v);
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
