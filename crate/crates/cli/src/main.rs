use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use whistle::euclid::{AgentOrder, EuclideanScheme};
use whistle::verifier::TypeMatrix;
use whistle::{
    atomic_unit, build_cyclic, build_euclidean, build_proportions, direct_sum, extend_to_p, fibonacci_analysis,
    gcd_reduce, grid, halt_statistics, matrix_from_csv, matrix_to_csv, matrix_to_scheme, optimum_time, parse_time_list,
    scheme_to_matrix, stage_lengths, timing, two_type_spec, type_matrix, validate, AssignmentMatrix, ProblemSpec,
    Rational, Scheme,
};

mod render;
use render::{dec, pct, print_json};

#[derive(Parser)]
#[command(name = "whistle", version, about = "Minimum-time production schemes with few halts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    Cyclic,
    Euclid,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    Type1First,
    Type2First,
}

impl From<Order> for AgentOrder {
    fn from(o: Order) -> Self {
        match o {
            Order::Type1First => AgentOrder::Type1First,
            Order::Type2First => AgentOrder::Type2First,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build a scheme and print its summary; optionally write artifacts.
    Plan {
        #[arg(long, value_enum)]
        strategy: Strategy,
        /// Problem file (JSON); cyclic only.
        #[arg(long, conflicts_with_all = ["r1", "r2"])]
        spec: Option<PathBuf>,
        /// Agents taking 1 hour per object.
        #[arg(long)]
        r1: Option<u64>,
        /// Agents taking T hours per object.
        #[arg(long)]
        r2: Option<u64>,
        #[arg(long = "T", default_value = "2")]
        slow_time: Rational,
        #[arg(long, value_enum, default_value = "type1-first")]
        agent_order: Order,
        /// Split agents into gcd-sized groups and run one scheme per group.
        #[arg(long)]
        reduce_gcd: bool,
        /// Directory for spec.json, the scheme, types.csv and summary.json.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Write types.csv as 0/1 with zeros on this class (1 or 2).
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        binary_zero: Option<u8>,
    },
    /// Check a scheme against a problem; exit 0 iff it is optimal.
    Verify {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, required_unless_present = "scheme", conflicts_with = "scheme")]
        matrix: Option<PathBuf>,
        #[arg(long)]
        scheme: Option<PathBuf>,
    },
    /// Split a list of completion times into parts with equal harmonic mean.
    Partition {
        /// Comma-separated rationals, e.g. 2,3,4.5,7/2
        #[arg(long)]
        list: String,
        #[arg(long, default_value_t = whistle::harmonic::DEFAULT_SPLIT_BOUND)]
        bound: usize,
    },
    /// Production time once every halt costs epsilon hours.
    Timing {
        #[arg(long)]
        r1: u64,
        #[arg(long)]
        r2: u64,
        #[arg(long = "T", default_value = "2")]
        slow_time: Rational,
        #[arg(long)]
        epsilon: Rational,
        /// Report one strategy only.
        #[arg(long, value_enum)]
        strategy: Option<Strategy>,
    },
    /// Halts of the scheme for consecutive Fibonacci numbers.
    Fib {
        #[arg(long)]
        p: u32,
    },
    /// Mean halt number over coprime splits of n.
    HaltStats {
        #[arg(long)]
        n: u64,
    },
}

/// Validation failed; everything else that goes wrong is a usage error.
const EXIT_NOT_OPTIMAL: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Plan { strategy, spec, r1, r2, slow_time, agent_order, reduce_gcd, out, format, binary_zero } => {
            let built = match strategy {
                Strategy::Cyclic => {
                    let problem = match (spec, r1, r2) {
                        (Some(path), _, _) => read_spec(&path)?,
                        (None, Some(r1), Some(r2)) => two_type_spec(r1, r2, &slow_time, agent_order.into())?,
                        _ => bail!("cyclic plans need --spec or both --r1 and --r2"),
                    };
                    plan_cyclic(&problem, reduce_gcd)?
                }
                Strategy::Euclid => {
                    let (Some(r1), Some(r2)) = (r1, r2) else {
                        bail!("euclid plans need --r1 and --r2");
                    };
                    plan_euclid(r1, r2, &slow_time, agent_order.into(), reduce_gcd)?
                }
            };
            if let Some(dir) = out {
                write_artifacts(&dir, &built, format, binary_zero)?;
            }
            print_json(&built.summary)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { spec, matrix, scheme } => verify(&spec, matrix.as_deref(), scheme.as_deref()),
        Command::Partition { list, bound } => {
            let times = parse_time_list(&list)?;
            let splits = whistle::harmonic::split_search_bounded(&times, bound)?;
            let rep = whistle::harmonic::irreducible_representation_bounded(&times, bound)?;
            print_json(&json!({
                "list": times,
                "mean": rep.mean,
                "mean_decimal": dec(&rep.mean),
                "split_count": splits.len(),
                "splits": splits.iter().map(|s| &s.parts).collect::<Vec<_>>(),
                "irreducible": rep.parts,
            }))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Timing { r1, r2, slow_time, epsilon, strategy } => {
            print_json(&timing_report(r1, r2, &slow_time, &epsilon, strategy)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Fib { p } => {
            let r = fibonacci_analysis(p)?;
            print_json(&json!(r))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::HaltStats { n } => {
            let s = halt_statistics(n)?;
            print_json(&json!({
                "n": s.n,
                "pairs": s.per_pair.len(),
                "mean": s.mean,
                "mean_decimal": dec(&s.mean),
                "per_pair": s.per_pair,
            }))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn read_spec(path: &Path) -> Result<ProblemSpec> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(ProblemSpec::from_json_str(&text)?)
}

struct Built {
    spec: ProblemSpec,
    scheme: Scheme,
    summary: Value,
}

fn grid_of(spec: &ProblemSpec, scheme: &Scheme) -> Option<AssignmentMatrix> {
    scheme_to_matrix(scheme, spec).ok()
}

fn check_summary(spec: &ProblemSpec, scheme: &Scheme) -> Result<Value> {
    let report = validate(spec, scheme)?;
    let k_uniform = match grid_of(spec, scheme) {
        Some(m) if spec.class_count() == 2 => Some(type_matrix(spec, &m)?.k_uniform),
        _ => None,
    };
    Ok(json!({ "optimal": report.optimal, "uniform": report.uniform, "k_uniform": k_uniform }))
}

/// `copies` side-by-side runs of one scheme.
fn replicate(spec: &ProblemSpec, scheme: &Scheme, copies: u64) -> Result<(ProblemSpec, Scheme)> {
    if copies == 1 {
        return Ok((spec.clone(), scheme.clone()));
    }
    let parts = vec![(spec.clone(), scheme.clone()); copies as usize];
    Ok(direct_sum(&parts)?)
}

fn plan_cyclic(problem: &ProblemSpec, reduce: bool) -> Result<Built> {
    let square = problem.square();
    let (base_spec, copies) = if reduce { gcd_reduce(&square)? } else { (square.clone(), 1) };
    let base = matrix_to_scheme(&build_cyclic(&base_spec)?);
    let (spec, scheme) = replicate(&base_spec, &base, copies)?;
    let h = optimum_time(&spec);
    let au = atomic_unit(&spec);
    let mut summary = json!({
        "strategy": "cyclic",
        "n": spec.agents(),
        "classes": spec.classes(),
        "copies": copies,
        "H": h,
        "H_decimal": dec(&h),
        "au_hours": au,
        "au_decimal": dec(&au),
        "proportions": build_proportions(&spec),
        "halts": scheme.halt_instants().len(),
        "halt_instants": scheme.halt_instants(),
        "check": check_summary(&spec, &scheme)?,
    });
    if problem.objects() > problem.agents() as u64 {
        let plan = extend_to_p(problem, &scheme)?;
        summary["extension"] = json!({
            "objects": problem.objects(),
            "rounds": plan.rounds,
            "remainder": plan.remainder,
            "remainder_agents": plan.remainder_agents,
            "remainder_spec": plan.remainder_spec,
            "remainder_scheme": plan.remainder_scheme,
            "total_time": plan.total_time,
            "total_time_decimal": dec(&plan.total_time),
        });
    }
    Ok(Built { spec, scheme, summary })
}

fn stage_json(e: &EuclideanScheme) -> Vec<Value> {
    e.stages()
        .iter()
        .map(|s| {
            json!({
                "stage": s.stage,
                "length_au": s.length_au,
                "halts_at": s.halts_at,
                "passive_record": [s.passive_record.0, s.passive_record.1],
                "active_record": [s.active_record.0, s.active_record.1],
                "records_at_last_exchange": {
                    "passive": [s.records_at_last_exchange.passive.0, s.records_at_last_exchange.passive.1],
                    "active": [s.records_at_last_exchange.active.0, s.records_at_last_exchange.active.1],
                },
            })
        })
        .collect()
}

fn plan_euclid(r1: u64, r2: u64, slow_time: &Rational, order: AgentOrder, reduce: bool) -> Result<Built> {
    let d = gcd(r1, r2);
    let copies = if reduce { d } else { 1 };
    let e = build_euclidean(r1 / copies, r2 / copies, order)?;
    let base_spec = e.spec(slow_time)?;
    let base = e.scheme(&atomic_unit(&base_spec));
    let (spec, scheme) = replicate(&base_spec, &base, copies)?;
    let h = optimum_time(&spec);
    let au = atomic_unit(&spec);
    let order_name = match order {
        AgentOrder::Type1First => "type1-first",
        AgentOrder::Type2First => "type2-first",
    };
    let summary = json!({
        "strategy": "euclid",
        "agent_order": order_name,
        "r1": r1,
        "r2": r2,
        "n": r1 + r2,
        "T": slow_time,
        "copies": copies,
        "H": h,
        "H_decimal": dec(&h),
        "au_hours": au,
        "au_decimal": dec(&au),
        "halts": e.halts().len(),
        "halt_instants_au": e.halts(),
        "quotients": e.trace().quotients(),
        "stage_lengths": stage_lengths(e.trace()),
        "stages": stage_json(&e),
        "check": check_summary(&spec, &scheme)?,
    });
    Ok(Built { spec, scheme, summary })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn write_artifacts(dir: &Path, built: &Built, format: Format, binary_zero: Option<u8>) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let write = |name: &str, text: String| -> Result<()> {
        let path = dir.join(name);
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
    };
    write("spec.json", built.spec.to_json_string() + "\n")?;
    let matrix = grid_of(&built.spec, &built.scheme);
    match (format, &matrix) {
        (Format::Csv, Some(m)) => write("matrix.csv", matrix_to_csv(m))?,
        (Format::Csv, None) => bail!("scheme is not on the a.u. grid; use --format json"),
        (Format::Json, _) => write("scheme.json", built.scheme.to_json_string() + "\n")?,
    }
    if let Some(m) = &matrix {
        if built.spec.class_count() == 2 {
            let t: TypeMatrix = type_matrix(&built.spec, m)?;
            let text = match binary_zero {
                Some(zero) => grid::cells_to_csv(&t.binary(zero)),
                None => grid::cells_to_csv(&t.cells),
            };
            write("types.csv", text)?;
        }
    }
    write("summary.json", render::to_pretty(&built.summary) + "\n")
}

fn verify(spec_path: &Path, matrix: Option<&Path>, scheme: Option<&Path>) -> Result<ExitCode> {
    let spec = read_spec(spec_path)?;
    let (scheme, grid) = match (matrix, scheme) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let m = matrix_from_csv(&text)?;
            (matrix_to_scheme(&m), Some(m))
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            (Scheme::from_json_str(&text)?, None)
        }
        (None, None) => bail!("verify needs --matrix or --scheme"),
    };
    let report = validate(&spec, &scheme)?;
    let mut out = json!(report);
    out["duration_decimal"] = json!(dec(&report.duration));
    out["optimum_time_decimal"] = json!(dec(&report.optimum_time));
    if spec.class_count() == 2 {
        let grid = grid.or_else(|| grid_of(&spec, &scheme));
        if let Some(m) = grid {
            if m.size() == spec.agents() {
                out["k_uniform"] = json!(type_matrix(&spec, &m)?.k_uniform);
            }
        }
    }
    print_json(&out)?;
    Ok(if report.optimal { ExitCode::SUCCESS } else { ExitCode::from(EXIT_NOT_OPTIMAL) })
}

fn timing_entry(h: &Rational, halts: u64, epsilon: &Rational) -> Result<Value> {
    let r = timing::total_time(h, halts, epsilon)?;
    Ok(json!({
        "halt_count": r.halt_count,
        "total": r.total,
        "total_decimal": dec(&r.total),
        "excess_percent": r.excess_percent,
        "excess_percent_decimal": pct(&r.excess_percent),
    }))
}

fn timing_report(r1: u64, r2: u64, slow_time: &Rational, epsilon: &Rational, only: Option<Strategy>) -> Result<Value> {
    let h = timing::optimal_time_two_type(r1, r2, slow_time)?;
    let bh = timing::biker_hiker_time(r1, r2, slow_time)?;
    let mut out = json!({
        "r1": r1,
        "r2": r2,
        "n": r1 + r2,
        "T": slow_time,
        "epsilon": epsilon,
        "H": h,
        "H_decimal": dec(&h),
        "biker_hiker": bh,
        "biker_hiker_decimal": dec(&bh),
        "beats_biker_hiker": h < bh,
    });
    if !matches!(only, Some(Strategy::Euclid)) {
        out["cyclic"] = timing_entry(&h, r1 + r2 - 1, epsilon)?;
    }
    if !matches!(only, Some(Strategy::Cyclic)) {
        let trace = whistle::euclid_trace(r1, r2)?;
        out["euclid"] = timing_entry(&h, whistle::halt_number(&trace), epsilon)?;
    }
    Ok(out)
}
