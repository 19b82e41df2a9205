//! `convdyn`: command-line front end for the convolution dynamics library.

mod pretty;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use convdyn::dynamics::{
    accumulation_points, acyclic_perturbation, basin, fixed_points, is_recurrent, limit_of_powers, omega_limit,
};
use convdyn::group::{check_homomorphism, validate_table, GroupSpec, DEFAULT_MAX_ORDER};
use convdyn::io::{
    basin_json, labelled_sets, load, load_group, load_measure, matrix_json, measure_json, omega_report_json,
    parse_group, parse_map, MeasureFile,
};
use convdyn::measure::support_orbit;
use convdyn::montecarlo::{exact_power, sample_and_compare, WalkConfig, DEFAULT_BUDGET};
use convdyn::scalar::parse_rational;
use convdyn::transition::{matrix_power, power_convergence, transition_matrix, PowerOutcome, DEFAULT_MAX_ITER, DEFAULT_TOL};
use convdyn::{Error, GroupRef, ProbMeasure, Rational, Result, Scalar};
use serde_json::{json, Value};

/// Exact dynamics of T_ν(μ) = μ * ν on probability measures over finite groups.
///
/// Groups and measures are JSON, given as a file path or inline text.
/// Exit status: 0 on success, 1 on a domain error, 2 on malformed input.
#[derive(Parser, Debug)]
#[command(name = "convdyn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Group file or inline JSON. Optional when the measure embeds its group.
    #[arg(long, global = true)]
    group: Option<String>,

    /// Arithmetic mode. Defaults to the mode of the measure's weights.
    #[arg(long, global = true, value_enum)]
    mode: Option<Mode>,

    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    output: Output,

    /// Largest group order accepted.
    #[arg(long, global = true, env = "MAX_GROUP_ORDER", default_value_t = DEFAULT_MAX_ORDER)]
    max_group_order: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Float,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Output {
    Pretty,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the group axioms of --group.
    Validate,
    /// μ * ν, with ν from --measure and μ from --mu.
    Convolve {
        #[arg(long)]
        measure: String,
        #[arg(long)]
        mu: String,
    },
    /// ν^n and A(ν)^n, or with --iterative the float limit of A(ν)^n.
    Power {
        #[arg(long)]
        measure: String,
        #[arg(long, default_value_t = 1)]
        n: u64,
        #[arg(long)]
        iterative: bool,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
    },
    /// The transition matrix A(ν), a_ij = ν(g_i⁻¹ g_j).
    Transition {
        #[arg(long)]
        measure: String,
    },
    /// Support orbit of ν: acyclicity, period and cycle sets.
    CheckAcyclic {
        #[arg(long)]
        measure: String,
        #[arg(long)]
        max_steps: Option<usize>,
    },
    /// lim ν^n for acyclic ν.
    Limit {
        #[arg(long)]
        measure: String,
    },
    /// The ω-limit of μ (--mu) under T_ν.
    OmegaLimit {
        #[arg(long)]
        measure: String,
        #[arg(long)]
        mu: String,
    },
    /// Accumulation points of (ν^n), one per cycle phase.
    AccumulationPoints {
        #[arg(long)]
        measure: String,
    },
    /// Solutions of μ * ν = μ (exact mode).
    FixedPoints {
        #[arg(long)]
        measure: String,
    },
    /// Whether μ (--mu) lies in its own ω-limit set.
    Recurrent {
        #[arg(long)]
        measure: String,
        #[arg(long)]
        mu: String,
    },
    /// Basin of attraction of η (--eta) under T_ν.
    Basin {
        #[arg(long)]
        measure: String,
        #[arg(long)]
        eta: String,
    },
    /// An acyclic measure within ℓ1 distance --eps of ν.
    Perturb {
        #[arg(long)]
        measure: String,
        #[arg(long)]
        eps: String,
    },
    /// Image of ν under the homomorphism --map into --target.
    Pushforward {
        #[arg(long)]
        measure: String,
        /// Target group file or inline JSON.
        #[arg(long)]
        target: String,
        /// JSON array of target indices or labels, one per source element.
        #[arg(long)]
        map: String,
    },
    /// Empirical law of --trials random walks of --steps steps.
    Sample {
        #[arg(long)]
        measure: String,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Cap on trials × steps.
        #[arg(long, env = "MC_BUDGET", default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
}

/// Scalar types the CLI can read measures and parameters in.
trait CliScalar: Scalar {
    fn measure(file: &MeasureFile) -> Result<ProbMeasure<Self>>;
    fn parameter(text: &str) -> Result<Self>;
}

impl CliScalar for Rational {
    fn measure(file: &MeasureFile) -> Result<ProbMeasure<Self>> {
        file.exact()
    }

    fn parameter(text: &str) -> Result<Self> {
        parse_rational(text)
    }
}

impl CliScalar for f64 {
    fn measure(file: &MeasureFile) -> Result<ProbMeasure<Self>> {
        file.float()
    }

    fn parameter(text: &str) -> Result<Self> {
        match text.parse::<f64>() {
            Ok(x) => Ok(x),
            Err(_) => Ok(parse_rational(text)?.to_f64()),
        }
    }
}

struct Ctx {
    group: Option<GroupRef>,
    mode: Option<Mode>,
    max_order: usize,
}

impl Ctx {
    fn file(&self, arg: &str) -> Result<MeasureFile> {
        load_measure(arg, self.group.as_ref(), self.max_order)
    }

    /// Explicit --mode, else the mode of the weights.
    fn mode_for(&self, file: &MeasureFile) -> Mode {
        self.mode.unwrap_or(if file.weights.is_exact() { Mode::Exact } else { Mode::Float })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(value) => {
            match cli.output {
                Output::Json => println!("{}", serde_json::to_string(&value).expect("serializable")),
                Output::Pretty => print!("{}", pretty::render(&value)),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(if e.is_input_error() { 2 } else { 1 })
        }
    }
}

fn run(cli: &Cli) -> Result<Value> {
    if let Command::Validate = cli.command {
        let arg = cli.group.as_deref().ok_or_else(|| Error::Parse("validate needs --group".into()))?;
        return validate(arg, cli.max_group_order);
    }
    let ctx = Ctx {
        group: cli.group.as_deref().map(|g| load_group(g, cli.max_group_order)).transpose()?,
        mode: cli.mode,
        max_order: cli.max_group_order,
    };
    let measure = match &cli.command {
        Command::Validate => unreachable!(),
        Command::Convolve { measure, .. }
        | Command::Power { measure, .. }
        | Command::Transition { measure }
        | Command::CheckAcyclic { measure, .. }
        | Command::Limit { measure }
        | Command::OmegaLimit { measure, .. }
        | Command::AccumulationPoints { measure }
        | Command::FixedPoints { measure }
        | Command::Recurrent { measure, .. }
        | Command::Basin { measure, .. }
        | Command::Perturb { measure, .. }
        | Command::Pushforward { measure, .. }
        | Command::Sample { measure, .. } => ctx.file(measure)?,
    };
    // every later measure must live on the same group as ν
    let ctx = Ctx { group: Some(measure.group.clone()), ..ctx };

    if let Command::Power { iterative: true, tol, max_iter, .. } = cli.command {
        if ctx.mode == Some(Mode::Exact) {
            return Err(Error::ModeMismatch("power --iterative runs in float mode".into()));
        }
        return iterate(&measure.float()?, tol, max_iter);
    }
    if let Command::FixedPoints { .. } = cli.command {
        if ctx.mode_for(&measure) == Mode::Float {
            return Err(Error::ModeMismatch("fixed-points is exact-only".into()));
        }
        let fp = fixed_points(&measure.exact()?)?;
        let basis: Vec<Value> = fp.basis.iter().map(measure_json).collect();
        return Ok(json!({"basis": basis, "dimension": fp.dimension}));
    }
    match ctx.mode_for(&measure) {
        Mode::Exact => dispatch::<Rational>(&cli.command, &ctx, &measure),
        Mode::Float => dispatch::<f64>(&cli.command, &ctx, &measure),
    }
}

fn validate(arg: &str, max_order: usize) -> Result<Value> {
    let doc = load(arg, std::path::Path::new(""))?;
    let spec: Option<GroupSpec> = serde_json::from_value(doc.value.clone()).ok();
    let report = match spec {
        Some(GroupSpec::Table { labels, cayley }) => validate_table(&labels, &cayley),
        _ => parse_group(&doc.value, &doc.base, max_order)?.validate(),
    };
    if let Some(v) = report.violations.first() {
        return Err(Error::AxiomViolation(v.clone()));
    }
    let g = parse_group(&doc.value, &doc.base, max_order)?;
    Ok(json!({
        "valid": true,
        "order": g.order(),
        "abelian": g.is_abelian(),
        "labels": g.labels(),
        "identity": g.label(g.identity()),
    }))
}

fn iterate(nu: &ProbMeasure<f64>, tol: f64, max_iter: usize) -> Result<Value> {
    let a = transition_matrix(nu);
    Ok(match power_convergence(&a, tol, max_iter)? {
        PowerOutcome::Converged { matrix, iterations } => json!({
            "converged": true,
            "iterations": iterations,
            "limit": matrix_json(&matrix),
            "limit_of_powers": convdyn::io::vector_json(&matrix.left_mul_vec(nu.weights())),
        }),
        PowerOutcome::Oscillating { period, phases, iterations } => json!({
            "converged": false,
            "iterations": iterations,
            "period": period,
            "phases": phases.iter().map(matrix_json).collect::<Vec<_>>(),
        }),
    })
}

fn dispatch<S: CliScalar>(command: &Command, ctx: &Ctx, file: &MeasureFile) -> Result<Value> {
    let nu = S::measure(file)?;
    let other = |arg: &str| -> Result<ProbMeasure<S>> { S::measure(&ctx.file(arg)?) };
    let g = nu.group();
    Ok(match command {
        Command::Convolve { mu, .. } => json!({"convolution": measure_json(&other(mu)?.convolve(&nu)?)}),
        Command::Power { n, .. } => {
            let power = exact_power(&nu, usize::try_from(*n).map_err(|_| Error::InvalidParameter("n too large".into()))?)?;
            let matrix = matrix_power(&transition_matrix(&nu), *n)?;
            json!({"n": n, "power": measure_json(&power), "matrix": matrix_json(&matrix)})
        }
        Command::Transition { .. } => matrix_json(transition_matrix(&nu).entries()),
        Command::CheckAcyclic { max_steps, .. } => {
            let orbit = support_orbit(&nu, *max_steps)?;
            json!({
                "acyclic": orbit.acyclic,
                "period": orbit.period,
                "pre_period": orbit.pre_period,
                "cycle_sets": labelled_sets(g, &orbit.phase_sets()),
                "subgroup": labelled_sets(g, &[orbit.subgroup.members().to_vec()])[0],
                "witness_n": orbit.witness_n,
            })
        }
        Command::Limit { .. } => json!({"limit": measure_json(&limit_of_powers(&nu)?)}),
        Command::OmegaLimit { mu, .. } => omega_report_json(&omega_limit(&nu, &other(mu)?)?),
        Command::AccumulationPoints { .. } => omega_report_json(&accumulation_points(&nu)?),
        Command::Recurrent { mu, .. } => json!({"recurrent": is_recurrent(&nu, &other(mu)?)?}),
        Command::Basin { eta, .. } => basin_json(&basin(&nu, &other(eta)?)?),
        Command::Perturb { eps, .. } => {
            let p = acyclic_perturbation(&nu, &S::parameter(eps)?)?;
            let d = p.l1_distance(&nu)?;
            json!({"perturbed": measure_json(&p), "l1_distance": convdyn::io::scalar_json(&d)})
        }
        Command::Pushforward { target, map, .. } => {
            let target = load_group(target, ctx.max_order)?;
            let map = parse_map(&load(map, std::path::Path::new(""))?.value, &target)?;
            let phi = check_homomorphism(g, &target, &map)?;
            json!({"pushforward": measure_json(&nu.pushforward(&phi)?)})
        }
        Command::Sample { steps, trials, seed, budget, .. } => {
            let cfg = WalkConfig::with_budget(nu.clone(), *steps, *trials, *seed, *budget)?;
            let rep = sample_and_compare(&cfg)?;
            json!({
                "frequencies": measure_json(&rep.frequencies),
                "tv_distance_to_exact": rep.tv_distance_to_exact,
            })
        }
        Command::Validate | Command::FixedPoints { .. } => unreachable!("handled before dispatch"),
    })
}
