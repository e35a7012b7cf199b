//! Deterministic rendering of check, suite and bounds results as text,
//! JSON or CSV. Nothing here depends on time, paths or thread scheduling,
//! so identical inputs produce byte-identical reports.

use relcalc::bounds::BoundReport;
use relcalc::harness::{FuzzReport, TheoremReport};
use serde::Serialize;
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Display floats so that infinities stay readable in text output.
fn show(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".into()
    } else {
        format!("{v}")
    }
}

#[derive(Debug, Serialize)]
pub struct RelationSummary {
    pub name: String,
    pub space_dim: usize,
    pub graph_dim: usize,
    pub domain_dim: usize,
    pub range_dim: usize,
    pub mul_dim: usize,
    pub kernel_dim: usize,
    pub hermitian: bool,
    pub self_adjoint: bool,
    /// (d_plus, d_minus); absent for non-Hermitian relations.
    pub deficiency: Option<(usize, usize)>,
    pub norm: f64,
    /// Smallest gain |T(x)|/|x|; None encodes the +infinity sentinel of a
    /// trivial domain.
    pub lower_bound: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct CheckReport {
    pub space_dim: usize,
    pub relations: Vec<RelationSummary>,
}

pub fn render_check(report: &CheckReport, format: Format) -> String {
    match format {
        Format::Json => to_json(report),
        Format::Csv => {
            let mut out = String::from(
                "name,space_dim,graph_dim,domain_dim,range_dim,mul_dim,kernel_dim,hermitian,self_adjoint,d_plus,d_minus,norm,lower_bound\n",
            );
            for r in &report.relations {
                let (dp, dm) = r
                    .deficiency
                    .map(|(p, m)| (p.to_string(), m.to_string()))
                    .unwrap_or_default();
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                    r.name,
                    r.space_dim,
                    r.graph_dim,
                    r.domain_dim,
                    r.range_dim,
                    r.mul_dim,
                    r.kernel_dim,
                    r.hermitian,
                    r.self_adjoint,
                    dp,
                    dm,
                    show(r.norm),
                    r.lower_bound.map(show).unwrap_or_else(|| "inf".into()),
                );
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "space_dim: {}", report.space_dim);
            for r in &report.relations {
                let _ = writeln!(
                    out,
                    "relation {}: graph_dim={} domain={} range={} mul={} kernel={}",
                    r.name, r.graph_dim, r.domain_dim, r.range_dim, r.mul_dim, r.kernel_dim
                );
                let _ = writeln!(out, "  hermitian: {}", r.hermitian);
                let _ = writeln!(out, "  self_adjoint: {}", r.self_adjoint);
                if let Some((dp, dm)) = r.deficiency {
                    let _ = writeln!(out, "  deficiency: ({dp}, {dm})");
                }
                let _ = writeln!(out, "  norm: {}", show(r.norm));
                let _ = writeln!(
                    out,
                    "  lower_bound: {}",
                    r.lower_bound.map(show).unwrap_or_else(|| "inf".into())
                );
            }
            out
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SuiteRendering {
    pub theorem: String,
    pub description: String,
    pub seed: u64,
    pub n_lo: usize,
    pub n_hi: usize,
    pub target_b: f64,
    pub instances_run: usize,
    pub passes: usize,
    pub failures: Vec<FailureRendering>,
    pub tolerances: Vec<(String, f64)>,
    pub passed: bool,
}

#[derive(Debug, Serialize)]
pub struct FailureRendering {
    pub seed: u64,
    pub diagnostic: String,
}

pub fn suite_rendering(
    report: &TheoremReport,
    description: &str,
    seed: u64,
    n_range: (usize, usize),
    target_b: f64,
) -> SuiteRendering {
    SuiteRendering {
        theorem: report.theorem_id.clone(),
        description: description.to_string(),
        seed,
        n_lo: n_range.0,
        n_hi: n_range.1,
        target_b,
        instances_run: report.instances_run,
        passes: report.passes,
        failures: report
            .failures
            .iter()
            .map(|f| FailureRendering {
                seed: f.seed,
                diagnostic: f.diagnostic.clone(),
            })
            .collect(),
        tolerances: report.tolerances.clone(),
        passed: report.all_passed(),
    }
}

pub fn render_suite(r: &SuiteRendering, format: Format) -> String {
    match format {
        Format::Json => to_json(r),
        Format::Csv => {
            let mut out = String::from("theorem,instances,passes,failures\n");
            let _ = writeln!(
                out,
                "{},{},{},{}",
                r.theorem,
                r.instances_run,
                r.passes,
                r.failures.len()
            );
            out
        }
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "suite {}: {}", r.theorem, r.description);
            let _ = writeln!(
                out,
                "seed: {}  n: {}..{}  target-b: {}",
                r.seed, r.n_lo, r.n_hi, r.target_b
            );
            let tols: Vec<String> = r
                .tolerances
                .iter()
                .map(|(name, v)| format!("{name}={v:e}"))
                .collect();
            let _ = writeln!(out, "tolerances: {}", tols.join(" "));
            let _ = writeln!(out, "passes: {}/{}", r.passes, r.instances_run);
            if !r.failures.is_empty() {
                let _ = writeln!(out, "failing seeds:");
                for f in &r.failures {
                    let _ = writeln!(out, "  {}: {}", f.seed, f.diagnostic);
                }
            }
            let _ = writeln!(out, "result: {}", if r.passed { "PASS" } else { "FAIL" });
            out
        }
    }
}

#[derive(Debug, Serialize)]
pub struct BoundsRendering {
    pub t_name: String,
    pub s_name: String,
    pub seed: u64,
    /// Pure bound; None encodes infinity.
    pub pure_b: Option<f64>,
    pub quadratic_b_at_zero: Option<f64>,
    pub t_bound: f64,
    pub curve: Vec<CurveRow>,
}

#[derive(Debug, Serialize)]
pub struct CurveRow {
    pub a: f64,
    pub b_certified: Option<f64>,
    pub b_sampled: Option<f64>,
}

fn opt(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

pub fn bounds_rendering(
    report: &BoundReport,
    t_name: &str,
    s_name: &str,
    seed: u64,
) -> BoundsRendering {
    BoundsRendering {
        t_name: t_name.to_string(),
        s_name: s_name.to_string(),
        seed,
        pure_b: opt(report.pure_b),
        quadratic_b_at_zero: report.quadratic.and_then(|(_, b)| opt(b)),
        t_bound: report.t_bound,
        curve: report
            .curve
            .iter()
            .map(|p| CurveRow {
                a: p.a,
                b_certified: opt(p.b_certified),
                b_sampled: opt(p.b_sampled),
            })
            .collect(),
    }
}

/// CSV bound-curve export: plot-ready, one row per grid value.
pub fn render_curve_csv(report: &BoundReport) -> String {
    let mut out = String::from("a,b_certified,b_sampled\n");
    for p in &report.curve {
        let _ = writeln!(out, "{},{},{}", p.a, show(p.b_certified), show(p.b_sampled));
    }
    out
}

pub fn render_bounds(r: &BoundsRendering, format: Format) -> String {
    match format {
        Format::Json => to_json(r),
        Format::Csv => {
            let mut out = String::from("a,b_certified,b_sampled\n");
            for p in &r.curve {
                let _ = writeln!(
                    out,
                    "{},{},{}",
                    p.a,
                    p.b_certified.map(show).unwrap_or_else(|| "inf".into()),
                    p.b_sampled.map(show).unwrap_or_else(|| "inf".into()),
                );
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "bounds of {} against {}", r.s_name, r.t_name);
            let _ = writeln!(
                out,
                "pure_b: {}",
                r.pure_b.map(show).unwrap_or_else(|| "inf".into())
            );
            if let Some(b) = r.quadratic_b_at_zero {
                let _ = writeln!(out, "quadratic b' at a' = 0: {}", show(b));
            }
            let _ = writeln!(out, "t_bound: {}", show(r.t_bound));
            let _ = writeln!(out, "a  b_certified  b_sampled");
            for p in &r.curve {
                let _ = writeln!(
                    out,
                    "{}  {}  {}",
                    p.a,
                    p.b_certified.map(show).unwrap_or_else(|| "inf".into()),
                    p.b_sampled.map(show).unwrap_or_else(|| "inf".into()),
                );
            }
            out
        }
    }
}

#[derive(Debug, Serialize)]
struct FuzzRendering<'a> {
    theorem: &'a str,
    instances_run: usize,
    violations_confirmed: usize,
    conclusion_held: usize,
    conclusion_violated: usize,
}

/// Exploratory-mode report: frequencies only, no pass/fail verdict.
pub fn render_fuzz(report: &FuzzReport, format: Format) -> String {
    let r = FuzzRendering {
        theorem: &report.theorem_id,
        instances_run: report.instances_run,
        violations_confirmed: report.violations_confirmed,
        conclusion_held: report.conclusion_held,
        conclusion_violated: report.conclusion_violated,
    };
    match format {
        Format::Json => to_json(&r),
        Format::Csv => {
            let mut out = String::from(
                "theorem,instances,violations_confirmed,conclusion_held,conclusion_violated\n",
            );
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                r.theorem,
                r.instances_run,
                r.violations_confirmed,
                r.conclusion_held,
                r.conclusion_violated
            );
            out
        }
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "fuzz {}: hypothesis-violating instances", r.theorem);
            let _ = writeln!(
                out,
                "instances: {} (confirmed violating: {})",
                r.instances_run, r.violations_confirmed
            );
            let _ = writeln!(
                out,
                "conclusion held: {}  violated: {}",
                r.conclusion_held, r.conclusion_violated
            );
            out
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serialization");
    text.push('\n');
    text
}
