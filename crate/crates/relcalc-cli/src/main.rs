//! Command-line front end for the linear-relation calculus: generate
//! instances, inspect them, compute relative bounds, and run the theorem
//! suites.
//!
//! Exit codes: 0 all checks passed, 1 a theorem check failed, 2 usage or
//! configuration error, 3 numerical breakdown.

mod instance;
mod report;

use clap::{Args, Parser, Subcommand};
use instance::InstanceFile;
use relcalc::bounds::{bound_curve, default_a_grid};
use relcalc::harness::{
    gen_hermitian, gen_perturbation, gen_self_adjoint, run_fuzz, run_suite, HarnessError,
    InstanceSpec, SuiteConfig, TheoremId,
};
use relcalc::{deficiency_pair, lower_bound_constant, relation_norm, Relation, TolerancePolicy};
use report::{
    bounds_rendering, render_bounds, render_check, render_curve_csv, render_suite, suite_rendering,
    CheckReport, Format, RelationSummary,
};
use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

pub const SEED_ENV: &str = "RELCALC_SEED";

#[derive(Debug)]
pub enum AppError {
    /// Bad flags, unreadable/unwritable files, malformed instances.
    Usage(String),
    /// The computation itself broke down.
    Numerical(String),
}

impl AppError {
    pub fn usage(msg: String) -> Self {
        AppError::Usage(msg)
    }

    pub fn numerical(msg: String) -> Self {
        AppError::Numerical(msg)
    }

    fn exit_code(&self) -> ExitCode {
        match self {
            AppError::Usage(_) => ExitCode::from(2),
            AppError::Numerical(_) => ExitCode::from(3),
        }
    }
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Usage(msg) | AppError::Numerical(msg) => f.write_str(msg),
        }
    }
}

impl From<HarnessError> for AppError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::InvalidConfig(_) | HarnessError::InvalidSpec(_) => {
                AppError::Usage(e.to_string())
            }
            other => AppError::Numerical(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "relcalc",
    about = "Calculus of linear relations on C^n: instances, bounds, theorem suites"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance file with seeded random relations
    Generate(GenerateArgs),
    /// Inspect the relations stored in an instance file
    Check(CheckArgs),
    /// Compute relative bounds of one stored relation against another
    Bounds(BoundsArgs),
    /// Run a theorem suite over generated instances
    Suite(SuiteArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum GenerateKind {
    /// One self-adjoint relation named "t"
    SelfAdjoint,
    /// One Hermitian relation named "t"
    Hermitian,
    /// A Hermitian relation "t" plus a relatively bounded perturbation "s"
    Pair,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum, default_value = "self-adjoint")]
    kind: GenerateKind,
    /// Space dimension n
    #[arg(long)]
    n: usize,
    /// Dimension of the multivalued part
    #[arg(long, default_value_t = 0)]
    dim_mul: usize,
    /// Domain dimension (hermitian kind; defaults to n - dim_mul)
    #[arg(long)]
    dim_dom: Option<usize>,
    /// Witness bound targeted by the perturbation of a pair
    #[arg(long, default_value_t = 0.5)]
    target_b: f64,
    /// Master seed (falls back to RELCALC_SEED; required)
    #[arg(long)]
    seed: Option<u64>,
    /// Override the rank truncation tolerance
    #[arg(long)]
    tol_rank: Option<f64>,
    /// Override the principal-angle tolerance
    #[arg(long)]
    tol_angle: Option<f64>,
    #[arg(long, short)]
    output: PathBuf,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, short)]
    input: PathBuf,
    /// Name of the base relation T in the instance file
    #[arg(long, default_value = "t")]
    t_name: String,
    /// Name of the perturbing relation S in the instance file
    #[arg(long, default_value = "s")]
    s_name: String,
    /// Seed of the sampling refinement (defaults to RELCALC_SEED or 0)
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Also export the curve as CSV (a,b_certified,b_sampled)
    #[arg(long)]
    curve_out: Option<PathBuf>,
}

#[derive(Args)]
struct SuiteArgs {
    /// Statement to exercise: 2.4, 2.5, 3.1-lemma, 3.2, 3.3, 3.1-theorem
    /// (alias 3.1), 3.2-corollary
    #[arg(long)]
    theorem: String,
    /// Number of generated instances
    #[arg(long)]
    instances: usize,
    /// Master seed (falls back to RELCALC_SEED; required)
    #[arg(long)]
    seed: Option<u64>,
    /// Space dimensions to draw from, as "lo..hi" (inclusive) or a single n
    #[arg(long, default_value = "2..6")]
    n: String,
    /// Witness bound targeted by perturbation generation
    #[arg(long, default_value_t = 0.5)]
    target_b: f64,
    #[arg(long)]
    tol_rank: Option<f64>,
    #[arg(long)]
    tol_angle: Option<f64>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the report here in addition to stdout
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Exploratory mode: generate hypothesis-violating instances and report
    /// conclusion-violation frequencies instead of asserting
    #[arg(long)]
    fuzz: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, AppError> {
    match cli.command {
        Command::Generate(args) => generate(args),
        Command::Check(args) => check(args),
        Command::Bounds(args) => bounds(args),
        Command::Suite(args) => suite(args),
    }
}

/// Seed resolution: explicit flag, then the RELCALC_SEED environment
/// variable. There is deliberately no wall-clock default.
fn resolve_seed(flag: Option<u64>, required: bool) -> Result<u64, AppError> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    if let Ok(text) = std::env::var(SEED_ENV) {
        return text
            .trim()
            .parse::<u64>()
            .map_err(|_| AppError::usage(format!("{SEED_ENV} is not a valid u64: {text:?}")));
    }
    if required {
        Err(AppError::usage(format!(
            "a seed is required: pass --seed or set {SEED_ENV}"
        )))
    } else {
        Ok(0)
    }
}

fn resolve_tol(rank: Option<f64>, angle: Option<f64>) -> Result<TolerancePolicy, AppError> {
    let defaults = TolerancePolicy::default();
    TolerancePolicy::new(
        rank.unwrap_or(defaults.rank_rel_tol),
        angle.unwrap_or(defaults.angle_tol),
    )
    .map_err(|e| AppError::usage(e.to_string()))
}

fn parse_n_range(text: &str) -> Result<(usize, usize), AppError> {
    let bad = || {
        AppError::usage(format!(
            "cannot parse n range {text:?}; expected lo..hi or n"
        ))
    };
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi = hi.trim();
        let hi: usize = hi
            .strip_prefix('=')
            .unwrap_or(hi)
            .parse()
            .map_err(|_| bad())?;
        Ok((lo, hi))
    } else {
        let n: usize = text.trim().parse().map_err(|_| bad())?;
        Ok((n, n))
    }
}

fn emit(text: &str, output: Option<&PathBuf>) -> Result<(), AppError> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| AppError::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn generate(args: GenerateArgs) -> Result<ExitCode, AppError> {
    let seed = resolve_seed(args.seed, true)?;
    let tol = resolve_tol(args.tol_rank, args.tol_angle)?;
    if args.n == 0 {
        return Err(AppError::usage("n must be at least 1".into()));
    }
    let dim_dom = args.dim_dom.unwrap_or(args.n.saturating_sub(args.dim_mul));
    let spec = InstanceSpec {
        n: args.n,
        dim_mul: args.dim_mul,
        dim_dom,
        seed,
        perturbation_target_b: args.target_b,
        tol,
    };
    let mut file = InstanceFile::new(args.n, tol);
    match args.kind {
        GenerateKind::SelfAdjoint => {
            file.insert("t", &gen_self_adjoint(&spec)?);
        }
        GenerateKind::Hermitian => {
            file.insert("t", &gen_hermitian(&spec)?);
        }
        GenerateKind::Pair => {
            let t = gen_hermitian(&spec)?;
            let p = gen_perturbation(&t, &spec)?;
            file.insert("t", &t);
            file.insert("s", &p.relation);
        }
    }
    file.save(&args.output)?;
    Ok(ExitCode::SUCCESS)
}

fn summarize(name: &str, relation: &Relation) -> Result<RelationSummary, AppError> {
    let parts = relation.components();
    let hermitian = relation.is_hermitian();
    let deficiency = if hermitian {
        Some(deficiency_pair(relation).map_err(|e| AppError::numerical(e.to_string()))?)
    } else {
        None
    };
    let lower = lower_bound_constant(relation);
    Ok(RelationSummary {
        name: name.to_string(),
        space_dim: relation.space_dim(),
        graph_dim: relation.dim(),
        domain_dim: parts.domain.dim(),
        range_dim: parts.range.dim(),
        mul_dim: parts.mul_part.dim(),
        kernel_dim: parts.kernel.dim(),
        hermitian,
        self_adjoint: relation.is_self_adjoint(),
        deficiency,
        norm: relation_norm(relation),
        lower_bound: lower.is_finite().then_some(lower),
    })
}

fn check(args: CheckArgs) -> Result<ExitCode, AppError> {
    let file = InstanceFile::load(&args.input)?;
    let mut relations = Vec::new();
    for name in file.relations.keys() {
        let relation = file.relation(name)?;
        relations.push(summarize(name, &relation)?);
    }
    let report = CheckReport {
        space_dim: file.space_dim,
        relations,
    };
    emit(&render_check(&report, args.format), args.output.as_ref())?;
    Ok(ExitCode::SUCCESS)
}

fn bounds(args: BoundsArgs) -> Result<ExitCode, AppError> {
    let seed = resolve_seed(args.seed, false)?;
    let file = InstanceFile::load(&args.input)?;
    let t = file.relation(&args.t_name)?;
    let s = file.relation(&args.s_name)?;
    let grid =
        default_a_grid(&s, &t).map_err(|e| AppError::usage(format!("bound computation: {e}")))?;
    let report = bound_curve(&s, &t, &grid, seed)
        .map_err(|e| AppError::numerical(format!("bound computation: {e}")))?;
    if let Some(path) = &args.curve_out {
        std::fs::write(path, render_curve_csv(&report))
            .map_err(|e| AppError::usage(format!("cannot write {}: {e}", path.display())))?;
    }
    let rendering = bounds_rendering(&report, &args.t_name, &args.s_name, seed);
    emit(
        &render_bounds(&rendering, args.format),
        args.output.as_ref(),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn suite(args: SuiteArgs) -> Result<ExitCode, AppError> {
    let seed = resolve_seed(args.seed, true)?;
    let theorem: TheoremId = args.theorem.parse().map_err(AppError::Usage)?;
    let tol = resolve_tol(args.tol_rank, args.tol_angle)?;
    let n_range = parse_n_range(&args.n)?;
    let mut config = SuiteConfig::new(theorem, args.instances, seed);
    config.n_range = n_range;
    config.target_b = args.target_b;
    config.tol = tol;
    if args.fuzz {
        let report = run_fuzz(&config)?;
        let text = report::render_fuzz(&report, args.format);
        print!("{text}");
        if let Some(path) = &args.output {
            std::fs::write(path, &text)
                .map_err(|e| AppError::usage(format!("cannot write {}: {e}", path.display())))?;
        }
        return Ok(ExitCode::SUCCESS);
    }
    let report = run_suite(&config)?;
    let rendering = suite_rendering(&report, theorem.describe(), seed, n_range, args.target_b);
    let text = render_suite(&rendering, args.format);
    print!("{text}");
    if let Some(path) = &args.output {
        std::fs::write(path, &text)
            .map_err(|e| AppError::usage(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
