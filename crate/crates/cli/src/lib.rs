//! The `qdyson` command line: argument handling, documents and exit codes.
//!
//! Exit codes: 0 success, 1 usage error (including a coefficient that is zero by
//! homogeneity), 2 a violated internal invariant, 3 a verification mismatch.

pub mod args;
mod article;
pub mod json;
pub mod render;

use std::ffi::OsString;
use std::time::Instant;

use clap::Parser;
use qdyson_core::engine::{coefficient_split_with, constant_term_identity};
use qdyson_core::latticepoints::{best_shift, default_radius, evaluation_set_size};
use qdyson_core::oracle::{sweep, verify_query};
use qdyson_core::par::{self, Execution};
use qdyson_core::{
    CoefficientQuery, CombinedResult, RationalQZ, ShiftPolicy, ShiftVector, SplitResult, SweepConfig, SweepSummary,
    VerificationReport,
};

use args::{Cli, Command, Format};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] qdyson_core::Error),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_internal() => 2,
            _ => 1,
        }
    }
}

/// What a finished invocation printed and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Default)]
struct Document {
    body: String,
    notes: Vec<String>,
    code: i32,
}

impl Document {
    fn new(body: String) -> Self {
        Document { body, ..Default::default() }
    }
}

pub fn policy_label(p: &ShiftPolicy) -> String {
    match p {
        ShiftPolicy::Zero => "zero".into(),
        ShiftPolicy::Best => "auto".into(),
        ShiftPolicy::BestWithin(r) => format!("auto(radius {r})"),
        ShiftPolicy::Given(c) => c.to_string(),
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 1, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    let (result, out) = match cli.command {
        Command::Coeff(a) => (coeff(&a), a.output.out),
        Command::ConstantTerm(a) => (constant_term(&a), a.output.out),
        Command::BestShift(a) => (best_shift_cmd(&a), a.output.out),
        Command::Verify(a) => (verify(&a), a.output.out),
        Command::Sweep(a) => (sweep_cmd(&a), a.output.out),
        Command::Article(a) => (article::run(&a), a.output.out),
    };
    let doc = match result {
        Ok(d) => d,
        Err(e) => return Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    };
    let mut stderr: String = doc.notes.iter().map(|n| format!("{n}\n")).collect();
    let mut body = doc.body;
    if !body.ends_with('\n') {
        body.push('\n');
    }
    let stdout = match out {
        None => body,
        Some(path) => match std::fs::write(&path, body) {
            Ok(()) => String::new(),
            Err(source) => {
                let e = CliError::Io { path: path.display().to_string(), source };
                stderr.push_str(&format!("error: {e}\n"));
                return Outcome { code: e.exit_code(), stdout: String::new(), stderr };
            }
        },
    };
    Outcome { code: doc.code, stdout, stderr }
}

fn homogeneity_note(delta: &[i64], doc: &mut Document) {
    let s: i64 = delta.iter().sum();
    if s != 0 {
        doc.notes.push(format!(
            "warning: exponents sum to {s}; the product has x-degree 0, so this coefficient is 0"
        ));
        doc.code = 1;
    }
}

fn point_count_text(k: usize) -> String {
    if k == 1 { "1 evaluation point".into() } else { format!("{k} evaluation points") }
}

fn combined_document(res: &CombinedResult, format: Format) -> String {
    match format {
        Format::Text => format!(
            "{}\nwhere z_i = q^a_i; shift {}, {}",
            render::formula_text(&res.r),
            res.shift_used,
            point_count_text(res.point_count)
        ),
        Format::Latex => render::coefficient_latex(&res.delta, &res.r),
        Format::Json => json::to_string(&json::FormulaJson::from_combined(res)),
    }
}

fn split_document(split: &SplitResult, r: &RationalQZ, format: Format) -> String {
    match format {
        Format::Text => {
            let mut lines = vec![format!("shift {}, {}", split.shift_used, point_count_text(split.terms.len()))];
            for (k, (p, t)) in split.terms.iter().enumerate() {
                lines.push(format!("[{}] pi={} m={}: {t}", k + 1, p.perm, render::tuple(&p.m)));
            }
            lines.push(format!("sum: {}", render::formula_text(r)));
            lines.join("\n")
        }
        Format::Latex => {
            let mut lines: Vec<String> = split
                .terms
                .iter()
                .enumerate()
                .map(|(k, (_, t))| format!("T_{{{}}} = {}", k + 1, render::rational_latex(t)))
                .collect();
            let sum: Vec<String> = (1..=split.terms.len()).map(|k| format!("T_{{{k}}}")).collect();
            let sum = if sum.is_empty() { "0".to_string() } else { sum.join(" + ") };
            lines.push(format!("R_{{{}}} = {sum}", render::tuple(&split.delta)));
            lines.join("\n")
        }
        Format::Json => json::to_string(&json::SplitJson::from(split)),
    }
}

/// Shifts used by `--cross-check-shifts` besides the requested one.
pub fn cross_check_policies(n: usize) -> Vec<ShiftPolicy> {
    vec![
        ShiftPolicy::Zero,
        ShiftPolicy::Best,
        ShiftPolicy::Given(ShiftVector((0..n as i64).map(|i| i % 3 - 1).collect())),
        ShiftPolicy::Given(ShiftVector((0..n as i64).map(|i| i % 2).collect())),
    ]
}

fn coeff(a: &args::CoeffArgs) -> Result<Document, CliError> {
    let delta = a.delta.delta.0.clone();
    let query = CoefficientQuery::new(delta.clone()).with_shift(a.shift.policy());
    let exec = Execution::Parallel;
    let split = par::with_jobs(exec, a.jobs.jobs, || coefficient_split_with(&query, exec))?;
    let r = split.combine()?;
    let combined =
        CombinedResult { delta: delta.clone(), r, shift_used: split.shift_used.clone(), point_count: split.terms.len() };
    let body = if a.split {
        split_document(&split, &combined.r, a.output.format)
    } else {
        combined_document(&combined, a.output.format)
    };
    let mut doc = Document::new(body);
    homogeneity_note(&delta, &mut doc);
    if a.cross_check_shifts {
        let mut disagreeing = Vec::new();
        for policy in cross_check_policies(delta.len()) {
            let other = par::with_jobs(exec, a.jobs.jobs, || {
                qdyson_core::engine::coefficient_combined_with(&query.clone().with_shift(policy.clone()), exec)
            })?;
            if !other.r.equivalent(&combined.r) {
                disagreeing.push(format!("{} (shift {})", policy_label(&policy), other.shift_used));
            }
        }
        if disagreeing.is_empty() {
            doc.notes.push("cross-check: all shifts give equivalent results".into());
        } else {
            doc.notes.push(format!("cross-check failed: results differ under {}", disagreeing.join(", ")));
            doc.code = 3;
        }
    }
    Ok(doc)
}

fn constant_term(a: &args::ConstantTermArgs) -> Result<Document, CliError> {
    let res = constant_term_identity(a.n)?;
    Ok(Document::new(combined_document(&res, a.output.format)))
}

fn best_shift_cmd(a: &args::BestShiftArgs) -> Result<Document, CliError> {
    let delta = &a.delta.delta.0;
    let radius = a.radius.unwrap_or_else(|| default_radius(delta));
    let (shift, size) = best_shift(delta, radius)?;
    let zero_size = evaluation_set_size(delta, &ShiftVector::zero(delta.len()))?;
    let body = match a.output.format {
        Format::Text => format!("shift {shift}: {} (zero shift: {zero_size})", point_count_text(size as usize)),
        Format::Latex => format!("c = {shift}, \\quad |S| = {size}, \\quad |S_0| = {zero_size}"),
        Format::Json => json::to_string(&json::BestShiftJson {
            delta: delta.clone(),
            shift: shift.0,
            size,
            zero_size,
        }),
    };
    Ok(Document::new(body))
}

fn exact_quotient(num: &qdyson_core::QPolynomial, den: &qdyson_core::QPolynomial) -> String {
    match num.div_exact(den) {
        Some(p) => p.to_string(),
        None => format!("({num}) / ({den})"),
    }
}

fn report_text(r: &VerificationReport) -> String {
    let verdict = match (&r.error, r.matched) {
        (Some(e), _) => format!("error: {e}"),
        (None, true) => "match".into(),
        (None, false) => "MISMATCH".into(),
    };
    let mut line = format!("delta {} a {}: {verdict}", render::tuple(&r.delta), render::tuple(&r.a));
    if let Some((num, den)) = &r.engine {
        line.push_str(&format!("\n  engine: {}", exact_quotient(num, den)));
    }
    line.push_str(&format!("\n  oracle: {}", r.oracle));
    if let Some(s) = &r.shift {
        line.push_str(&format!("\n  shift {s}, {:.1} ms", r.elapsed.as_secs_f64() * 1e3));
    }
    line
}

fn report_code(r: &VerificationReport) -> i32 {
    match (&r.error, r.internal_error, r.matched) {
        (Some(_), true, _) => 2,
        (Some(_), false, _) => 1,
        (None, _, true) => 0,
        (None, _, false) => 3,
    }
}

fn nonnegative(list: &args::IntList) -> Result<Vec<u64>, CliError> {
    list.0
        .iter()
        .map(|&x| u64::try_from(x).map_err(|_| CliError::Usage(format!("a_i must be nonnegative, got {x}"))))
        .collect()
}

fn verify(a: &args::VerifyArgs) -> Result<Document, CliError> {
    let delta = &a.delta.delta.0;
    let avec = nonnegative(&a.a)?;
    let report = verify_query(delta, &avec, a.shift.policy())?;
    let body = match a.output.format {
        Format::Text => report_text(&report),
        Format::Latex => format!(
            "\\left[{}\\right] {} \\Big|_{{a = {}}} = {}",
            render::monomial_x_latex(delta),
            render::product_latex(delta.len()),
            render::tuple(&avec),
            render::qpoly_latex(&report.oracle)
        ),
        Format::Json => json::to_string(&json::ReportJson::from(&report)),
    };
    let mut doc = Document::new(body);
    doc.code = report_code(&report);
    if let Some(e) = &report.error {
        doc.notes.push(format!("error: {e}"));
    }
    Ok(doc)
}

fn sweep_cmd(a: &args::SweepArgs) -> Result<Document, CliError> {
    if a.output.format == Format::Latex {
        return Err(CliError::Usage("sweep writes text or json".into()));
    }
    let config = SweepConfig {
        n_min: a.n_min,
        n_max: a.n_max,
        a_max: a.a_max,
        delta_budget: a.budget,
        policies: a.shifts.iter().map(|s| s.policy(a.radius)).collect(),
        include_inhomogeneous: a.inhomogeneous,
        jobs: a.jobs.jobs,
        execution: if a.sequential { Execution::Sequential } else { Execution::Parallel },
        unbounded: a.unbounded,
    };
    let started = Instant::now();
    let reports = sweep(&config)?;
    let summary = SweepSummary::of(&reports);
    let body = match a.output.format {
        Format::Json => json::to_string(&json::SweepJson {
            summary: (&summary).into(),
            reports: reports.iter().map(json::ReportJson::from).collect(),
        }),
        _ => {
            let mut lines = vec![format!(
                "n {}..{}, a_i <= {}, sum |delta_i| <= {}: {}/{} matched, {} mismatches, {} internal errors, {} other errors ({:.2} s)",
                a.n_min,
                a.n_max,
                a.a_max,
                a.budget,
                summary.matched,
                summary.total,
                summary.mismatches,
                summary.internal_errors,
                summary.other_errors,
                started.elapsed().as_secs_f64()
            )];
            lines.extend(reports.iter().filter(|r| a.all || report_code(r) != 0).map(report_text));
            lines.join("\n")
        }
    };
    let mut doc = Document::new(body);
    doc.code = if summary.internal_errors + summary.other_errors > 0 {
        2
    } else if summary.mismatches > 0 {
        3
    } else {
        0
    };
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qd(args: &[&str]) -> Outcome {
        run(std::iter::once("qdyson").chain(args.iter().copied()))
    }

    #[test]
    fn constant_term_text() {
        let o = qd(&["coeff", "--delta", "0,0,0"]);
        assert_eq!(o.code, 0, "{o:?}");
        assert_eq!(o.stdout.lines().next(), Some("1 · qMultinomial(a1,a2,a3)"));
    }

    #[test]
    fn labels() {
        assert_eq!(policy_label(&ShiftPolicy::Given(ShiftVector(vec![0, -1]))), "(0,-1)");
        assert_eq!(policy_label(&ShiftPolicy::Best), "auto");
    }
}
