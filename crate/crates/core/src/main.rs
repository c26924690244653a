use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use corner_ascent::arith::{format_point, format_rational, parse_rational, ExtendedRational, Rational};
use corner_ascent::ascent::{Ascent, SolveOptions, SolveOutcome, Start};
use corner_ascent::instance::{parse_instance, InstanceFile};
use corner_ascent::model::{FeasibleRegion, GroupForm};
use corner_ascent::oracle::{brute_force_ip, weak_duality_audit};
use corner_ascent::trace::{format_outcome, format_record};

#[derive(Parser)]
#[command(name = "corner-ascent", version, about = "Subadditive dual ascent for pure integer programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the ascent and print the outcome.
    Solve(SolveArgs),
    /// Enumerate the box and print the optimum.
    Oracle(OracleArgs),
    /// Run the ascent while checking every iteration against the oracle.
    Audit(SolveArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum RegionArg {
    Si,
    Sl,
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long, overrides_with = "no_param_adjust")]
    param_adjust: bool,
    #[arg(long)]
    no_param_adjust: bool,
    /// Uniform upper bound on every nonbasic variable.
    #[arg(long = "box", value_name = "K")]
    bound: Option<i64>,
    /// Fix variables whose unit vector is infeasible (needs a box).
    #[arg(long)]
    preprocess: bool,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    stall_window: Option<usize>,
    #[arg(long, overrides_with = "asymmetric")]
    symmetric: bool,
    #[arg(long)]
    asymmetric: bool,
    #[arg(long, value_enum)]
    region: Option<RegionArg>,
    /// Print one record per iteration.
    #[arg(long)]
    trace: bool,
    /// Bound used for unbounded variables during enumeration.
    #[arg(long)]
    search_bound: Option<i64>,
    #[arg(long)]
    adjust_rounds: Option<usize>,
    /// Upper bound on every gauge weight in the adjustment LP.
    #[arg(long)]
    param_cap: Option<String>,
}

#[derive(Args)]
struct OracleArgs {
    instance: PathBuf,
    #[arg(long = "box", value_name = "K")]
    bound: Option<i64>,
}

struct Settings {
    options: SolveOptions,
    bound: Option<i64>,
    preprocess: bool,
    trace: bool,
}

fn load(path: &PathBuf) -> Result<InstanceFile, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_instance(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn parse_flag<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
    value.parse().map_err(|_| format!("option {key}: bad value {value:?}"))
}

fn parse_region(value: &str) -> Result<FeasibleRegion, String> {
    match value {
        "si" => Ok(FeasibleRegion::Integer),
        "sl" => Ok(FeasibleRegion::Linear),
        other => Err(format!("unknown region {other:?}")),
    }
}

fn parse_cap(value: &str) -> Result<Rational, String> {
    parse_rational(value).map_err(|e| format!("param cap: {e}"))
}

/// Defaults, then file options, then command-line flags.
fn settings(args: &SolveArgs, file_options: &BTreeMap<String, String>) -> Result<Settings, String> {
    let mut s = Settings {
        options: SolveOptions::default(),
        bound: None,
        preprocess: false,
        trace: args.trace,
    };
    for (key, value) in file_options {
        let o = &mut s.options;
        match key.as_str() {
            "param-adjust" => o.param_adjust = parse_flag(key, value)?,
            "box" => s.bound = Some(parse_flag(key, value)?),
            "preprocess" => s.preprocess = parse_flag(key, value)?,
            "max-iters" => o.max_iterations = parse_flag(key, value)?,
            "stall-window" => o.stall_window = parse_flag(key, value)?,
            "symmetric" => o.adjust.symmetric = parse_flag(key, value)?,
            "region" => o.region = parse_region(value)?,
            "search-bound" => o.search_bound = parse_flag(key, value)?,
            "adjust-rounds" => o.adjust.rounds = parse_flag(key, value)?,
            "param-cap" => o.adjust.cap = parse_cap(value)?,
            other => return Err(format!("unknown option {other:?}")),
        }
    }
    let o = &mut s.options;
    if args.param_adjust {
        o.param_adjust = true;
    }
    if args.no_param_adjust {
        o.param_adjust = false;
    }
    if args.symmetric {
        o.adjust.symmetric = true;
    }
    if args.asymmetric {
        o.adjust.symmetric = false;
    }
    if let Some(r) = args.region {
        o.region = match r {
            RegionArg::Si => FeasibleRegion::Integer,
            RegionArg::Sl => FeasibleRegion::Linear,
        };
    }
    if let Some(v) = args.max_iters {
        o.max_iterations = v;
    }
    if let Some(v) = args.stall_window {
        o.stall_window = v;
    }
    if let Some(v) = args.search_bound {
        o.search_bound = v;
    }
    if let Some(v) = args.adjust_rounds {
        o.adjust.rounds = v;
    }
    if let Some(v) = &args.param_cap {
        o.adjust.cap = parse_cap(v)?;
    }
    if args.bound.is_some() {
        s.bound = args.bound;
    }
    if args.preprocess {
        s.preprocess = true;
    }
    if s.options.search_bound < 0 || s.bound.is_some_and(|k| k < 0) {
        return Err("bounds must be nonnegative".into());
    }
    Ok(s)
}

fn group_form(file: &InstanceFile, bound: Option<i64>) -> Result<GroupForm, String> {
    let gf = file.group_form().map_err(|e| e.to_string())?;
    Ok(match bound {
        Some(k) => gf.with_uniform_box(k),
        None => gf,
    })
}

fn exit_code(outcome: &SolveOutcome) -> u8 {
    match outcome {
        SolveOutcome::Optimal(_) => 0,
        SolveOutcome::Stalled(_) => 2,
        SolveOutcome::IterationLimit => 3,
        SolveOutcome::Infeasible => 4,
    }
}

/// Solution coordinates over the unreduced nonbasic variables.
fn expand(full: &GroupForm, reduced: &GroupForm, xn: &[i64]) -> Vec<i64> {
    full.nonbasis
        .iter()
        .map(|j| reduced.nonbasis.iter().position(|k| k == j).map_or(0, |p| xn[p]))
        .collect()
}

fn run_solve(args: &SolveArgs, audit: bool) -> Result<u8, String> {
    let file = load(&args.instance)?;
    let s = settings(args, &file.options)?;
    let full = group_form(&file, s.bound)?;
    let gf = if s.preprocess {
        let (reduced, gone) = full.preprocess_unit_elimination().map_err(|e| e.to_string())?;
        if !gone.is_empty() {
            let names: Vec<String> = gone.iter().map(|j| format!("x{}", j + 1)).collect();
            eprintln!("preprocess: fixed {} to zero", names.join(","));
        }
        reduced
    } else {
        full.clone()
    };
    let oracle_box = if audit {
        if !gf.is_boxed() {
            return Err("audit needs a finite box (use --box or a bounds line)".into());
        }
        Some(gf.bounds.iter().map(|b| b.expect("boxed")).collect::<Vec<i64>>())
    } else {
        None
    };
    let mut options = s.options.clone();
    options.check_invariants = audit;

    let mut failures = 0usize;
    let (outcome, last) = match Ascent::init(&gf, options).map_err(|e| e.to_string())? {
        Start::Finished(outcome) => (outcome, None),
        Start::Running(mut ascent) => loop {
            let seen = ascent.records().len();
            let done = ascent.step().map_err(|e| e.to_string())?;
            if let Some(r) = ascent.records().get(seen) {
                if s.trace {
                    println!("{}", format_record(r));
                }
                if let Some(bounds) = &oracle_box {
                    let dual = match weak_duality_audit(&gf, &r.pi0, bounds) {
                        Ok(()) => "ok".to_string(),
                        Err(x) => {
                            failures += 1;
                            format!("violated{}", format_point(&x))
                        }
                    };
                    let broken = ascent.subadditivity_audit().len();
                    failures += usize::from(broken > 0);
                    println!(
                        "audit iter={} pi0={} weak_duality={dual} subadditivity_violations={broken}",
                        r.iteration,
                        format_rational(&r.pi0)
                    );
                }
            }
            if let Some(outcome) = done {
                break (outcome, ascent.records().last().cloned());
            }
        },
    };
    let point = match &outcome {
        SolveOutcome::Optimal(sol) => Some(expand(&full, &gf, &sol.xn)),
        _ => None,
    };
    println!("{}", format_outcome(&outcome, point.as_deref(), last.as_ref()));
    if let (Some(bounds), SolveOutcome::Optimal(sol)) = (&oracle_box, &outcome) {
        let best = brute_force_ip(&gf, bounds);
        let agrees = best.value == ExtendedRational::Finite(&sol.value - &gf.zstar);
        println!("oracle value={} agrees={agrees}", best.value);
        if !agrees {
            failures += 1;
        }
    }
    if audit {
        return Ok(if failures == 0 { 0 } else { 1 });
    }
    Ok(exit_code(&outcome))
}

fn run_oracle(args: &OracleArgs) -> Result<u8, String> {
    let file = load(&args.instance)?;
    let gf = group_form(&file, args.bound)?;
    let bounds: Vec<i64> = gf
        .bounds
        .iter()
        .map(|b| b.ok_or("oracle needs a finite box (use --box or a bounds line)"))
        .collect::<Result<_, _>>()?;
    let result = brute_force_ip(&gf, &bounds);
    match (&result.point, &result.value) {
        (Some(x), ExtendedRational::Finite(v)) => {
            println!("{} {}", format_point(x), format_rational(&(v + &gf.zstar)))
        }
        _ => println!("infeasible"),
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(args) => run_solve(args, false),
        Command::Audit(args) => run_solve(args, true),
        Command::Oracle(args) => run_oracle(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
