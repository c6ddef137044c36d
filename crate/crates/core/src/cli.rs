//! The `taxicab` command line.
//!
//! Exit codes: 0 success, 1 invariant violation, 2 usage or domain error,
//! 3 I/O or parse error.

use std::ffi::OsString;
use std::fmt::Display;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::conjugation::conjugate_gram_schmidt;
use crate::error::Error;
use crate::factorize::{
    decompose, norm_accounting, AccountingKind, Decomposition, FactorMethod, FactorOptions,
    InitStrategy, NormAccounting, Termination,
};
use crate::io::{read_matrix, read_vector, MatrixFile, ReadError};
use crate::linalg::{lp_norm, norming_functional, NormOrder, RealMatrix, RealVector};
use crate::projections::{
    l1_objective, project, projection_operator, ProjectionMethod, ProjectionResult, Relation,
};
use crate::report::{write_report, CheckLine, DecompositionReport, InputDigest, RunReport};
use crate::tolerance::{approx_eq, REL_TOL};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_IO: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "taxicab", version, about = "Projections and rank-1 decompositions in l1 and l2")]
struct Cli {
    /// Field delimiter of the input CSV files.
    #[arg(long, global = true, default_value_t = ',')]
    delimiter: char,
    /// Skip the first line of every input file.
    #[arg(long, global = true)]
    header: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Regress the vector y on the vector x.
    Project(ProjectArgs),
    /// Stepwise rank-1 decomposition of a matrix.
    Decompose(DecomposeArgs),
    /// Conjugate the rows of a matrix in order.
    Conjugate(ConjugateArgs),
    /// Run the invariant checks on a matrix.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct Output {
    /// Write a JSON report to this file.
    #[arg(long, value_name = "OUT")]
    json: Option<PathBuf>,
    /// Record the wall time in the JSON report.
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProjectMethodArg {
    Eucl,
    L1op,
    L1min,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FactorMethodArg {
    Svd,
    Tsvd,
    L1min,
}

#[derive(Debug, Args)]
struct ProjectArgs {
    #[arg(long, value_enum)]
    method: ProjectMethodArg,
    /// The regressor.
    #[arg(long, value_name = "FILE")]
    x: PathBuf,
    /// The regressand.
    #[arg(long, value_name = "FILE")]
    y: PathBuf,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct DecomposeArgs {
    #[arg(long, value_enum)]
    method: FactorMethodArg,
    /// Number of rank-1 terms.
    #[arg(short, value_name = "K")]
    k: usize,
    /// Start the Taxicab iterations from the exact maximizer (at most 20 columns).
    #[arg(long)]
    exhaustive: bool,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, default_value_t = 10_000)]
    max_iter: usize,
    matrix: PathBuf,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct ConjugateArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    p: u8,
    matrix: PathBuf,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    matrix: PathBuf,
    #[command(flatten)]
    output: Output,
}

enum Failure {
    Domain(Error),
    Read(ReadError),
    Write(PathBuf, std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<ReadError> for Failure {
    fn from(e: ReadError) -> Self {
        Failure::Read(e)
    }
}

struct Ctx<'a> {
    header: bool,
    delimiter: u8,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn file(&self, path: &Path) -> MatrixFile {
        MatrixFile {
            path: path.to_path_buf(),
            has_header: self.header,
            delimiter: self.delimiter,
        }
    }

    fn line(&mut self, text: impl Display) {
        let _ = writeln!(self.out, "{text}");
    }
}

/// Parses `args` (program name first) and runs the selected subcommand.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    if !cli.delimiter.is_ascii() {
        let _ = writeln!(err, "error: the delimiter must be a single ASCII character");
        return EXIT_USAGE;
    }
    let mut ctx = Ctx {
        header: cli.header,
        delimiter: cli.delimiter as u8,
        out,
    };
    let result = match &cli.command {
        Command::Project(a) => run_project(&mut ctx, a),
        Command::Decompose(a) => run_decompose(&mut ctx, a),
        Command::Conjugate(a) => run_conjugate(&mut ctx, a),
        Command::Verify(a) => run_verify(&mut ctx, a),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Domain(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
        Err(Failure::Read(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_IO
        }
        Err(Failure::Write(path, e)) => {
            let _ = writeln!(err, "error: {}: {e}", path.display());
            EXIT_IO
        }
    }
}

fn join(v: &[f64]) -> String {
    v.iter().map(f64::to_string).collect::<Vec<_>>().join(", ")
}

fn emit(output: &Output, mut report: RunReport, started: Instant) -> Result<(), Failure> {
    let Some(path) = &output.json else {
        return Ok(());
    };
    if output.timing {
        report.wall_time_ms = Some(started.elapsed().as_secs_f64() * 1e3);
    }
    let fail = |e| Failure::Write(path.clone(), e);
    let mut w = BufWriter::new(File::create(path).map_err(fail)?);
    write_report(&report, &mut w).map_err(fail)?;
    w.flush().map_err(fail)
}

fn run_project(ctx: &mut Ctx, a: &ProjectArgs) -> Result<u8, Failure> {
    let started = Instant::now();
    let x = read_vector(&ctx.file(&a.x))?;
    let y = read_vector(&ctx.file(&a.y))?;
    let (method, name) = match a.method {
        ProjectMethodArg::Eucl => (ProjectionMethod::Euclidean, "eucl"),
        ProjectMethodArg::L1op => (ProjectionMethod::L1Operator, "l1op"),
        ProjectMethodArg::L1min => (ProjectionMethod::L1Min, "l1min"),
    };
    let r = project(&y, &x, method)?;
    ctx.line(format_args!("method: {name}"));
    ctx.line(format_args!("alpha: {}", r.alpha));
    ctx.line(format_args!("fitted: {}", join(r.fitted.as_slice())));
    ctx.line(format_args!("residual: {}", join(r.residual.as_slice())));
    ctx.line(format_args!("b: {}", join(r.b_coeffs.values.as_slice())));
    ctx.line(&r.verdict);

    let mut report = RunReport::new("project", Some(name.to_string()));
    report.inputs.push(digest_vector("x", &x));
    report.inputs.push(digest_vector("y", &y));
    report.projection = Some(r);
    emit(&a.output, report, started)?;
    Ok(EXIT_OK)
}

fn digest_vector(name: &str, v: &RealVector) -> InputDigest {
    let m = RealMatrix::new(1, v.len(), v.as_slice().to_vec()).expect("finite entries");
    InputDigest::of(name, &m)
}

fn termination_text(t: Termination) -> String {
    match t {
        Termination::Completed => "completed".into(),
        Termination::RankReached => "rank reached".into(),
        Termination::DegenerateFactor { step } => format!("factor {} collapsed", step + 1),
    }
}

fn print_accounting(ctx: &mut Ctx, acc: &NormAccounting) {
    let (label, rel) = match acc.kind {
        AccountingKind::EnergyIdentity => ("energy identity", "="),
        AccountingKind::L1Inequality => ("l1 inequality", "<="),
    };
    ctx.line(format_args!(
        "{label}: {} {rel} {} + {} (margin {}){}",
        acc.total_lhs,
        acc.total_delta,
        acc.residual_term,
        acc.margin,
        if acc.holds { "" } else { " VIOLATED" }
    ));
}

fn run_decompose(ctx: &mut Ctx, a: &DecomposeArgs) -> Result<u8, Failure> {
    let started = Instant::now();
    let x = read_matrix(&ctx.file(&a.matrix))?;
    let (method, name) = match a.method {
        FactorMethodArg::Svd => (FactorMethod::SvdL2, "svd"),
        FactorMethodArg::Tsvd => (FactorMethod::TaxicabSvd, "tsvd"),
        FactorMethodArg::L1min => (FactorMethod::L1MinSvd, "l1min"),
    };
    let options = FactorOptions {
        strategy: if a.exhaustive {
            InitStrategy::Exhaustive
        } else {
            InitStrategy::AllColumns
        },
        tol: a.tol,
        max_iter: a.max_iter,
    };
    let d = decompose(&x, method, a.k, &options)?;
    let acc = norm_accounting(&x, &d)?;

    ctx.line(format_args!("method: {name}"));
    ctx.line(format_args!("deltas: {}", join(&d.deltas())));
    for (i, s) in d.steps.iter().enumerate() {
        ctx.line(format_args!(
            "step {}: delta {}, iterations {}, converged {}, start {}",
            i + 1,
            s.delta,
            s.iterations,
            s.converged,
            s.start_label
        ));
        ctx.line(format_args!("  a: {}", join(s.a.as_slice())));
        ctx.line(format_args!("  b: {}", join(s.b.as_slice())));
    }
    ctx.line(format_args!("residual trace: {}", join(&d.residual_trace)));
    ctx.line(format_args!("reconstruction error: {}", d.reconstruction_error));
    ctx.line(format_args!("termination: {}", termination_text(d.termination)));
    print_accounting(ctx, &acc);

    let code = if acc.holds { EXIT_OK } else { EXIT_VIOLATION };
    let mut report = RunReport::new("decompose", Some(name.to_string()));
    report.inputs.push(InputDigest::of("x", &x));
    report.decompositions.push(DecompositionReport::new(&d, acc));
    emit(&a.output, report, started)?;
    Ok(code)
}

fn run_conjugate(ctx: &mut Ctx, a: &ConjugateArgs) -> Result<u8, Failure> {
    let started = Instant::now();
    let x = read_matrix(&ctx.file(&a.matrix))?;
    let p = if a.p == 1 { NormOrder::L1 } else { NormOrder::L2 };
    let rows: Vec<RealVector> = (0..x.rows()).map(|i| x.row_vector(i)).collect();
    let set = conjugate_gram_schmidt(&rows, p)?;
    ctx.line(format_args!("norm: {p}"));
    for (i, y) in set.vectors.iter().enumerate() {
        ctx.line(format_args!("y{}: {}", i + 1, join(y.as_slice())));
    }
    ctx.line("gram:");
    for row in set.gram.to_rows() {
        ctx.line(format_args!("  {}", join(&row)));
    }

    let mut report = RunReport::new("conjugate", Some(format!("p{}", a.p)));
    report.inputs.push(InputDigest::of("x", &x));
    report.conjugate = Some(set);
    emit(&a.output, report, started)?;
    Ok(EXIT_OK)
}

struct Checks(Vec<CheckLine>);

impl Checks {
    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.0.push(CheckLine {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }
}

fn within(value: f64, scale: f64) -> bool {
    value <= REL_TOL * scale.max(1.0)
}

fn check_pair(checks: &mut Checks, tag: &str, x: &RealVector, y: &RealVector) -> Result<(), Error> {
    if x.is_zero() {
        return Ok(());
    }
    for p in [NormOrder::L1, NormOrder::L2] {
        let r = y.sub(&projection_operator(x, y, p)?)?;
        let gap = norming_functional(x, p)?.dot(&r)?.abs();
        let scale = lp_norm(y, p);
        checks.push(format!("conjugate residual {p} {tag}"), within(gap, scale), format!("|phi(x)'r| = {gap:e}"));
    }

    let eucl = project(y, x, ProjectionMethod::Euclidean)?;
    checks.push(
        format!("euclidean pythagoras {tag}"),
        eucl.verdict.relation == Relation::Equality,
        eucl.verdict.to_string(),
    );

    let op = project(y, x, ProjectionMethod::L1Operator)?;
    let proj = crate::linalg::sign_vector(x).dot(y)?.abs();
    checks.push(
        format!("l1 operator fit norm {tag}"),
        approx_eq(op.verdict.fit_term, proj),
        format!("||Qy||_1 = {}, |sgn(x)'y| = {proj}", op.verdict.fit_term),
    );

    let opt = project(y, x, ProjectionMethod::L1Min)?;
    let best = l1_objective(y, x, opt.alpha);
    let worst_gap = x
        .iter()
        .zip(y.iter())
        .filter(|(xi, _)| **xi != 0.0)
        .map(|(xi, yi)| best - l1_objective(y, x, yi / xi))
        .fold(f64::NEG_INFINITY, f64::max);
    checks.push(
        format!("l1 min optimality {tag}"),
        worst_gap <= REL_TOL * best.max(1.0),
        format!("objective {best}, best breakpoint gap {worst_gap:e}"),
    );
    for r in [&op, &opt] {
        check_verdict_split(checks, tag, r);
    }
    Ok(())
}

fn check_verdict_split(checks: &mut Checks, tag: &str, r: &ProjectionResult) {
    let v = &r.verdict;
    let name = match r.method {
        ProjectionMethod::L1Operator => "l1op",
        ProjectionMethod::L1Min => "l1min",
        ProjectionMethod::Euclidean => "eucl",
    };
    checks.push(
        format!("{name} verdict terms {tag}"),
        approx_eq(v.rhs, v.fit_term + v.residual_term) && v.lhs <= v.rhs + REL_TOL * v.rhs.max(1.0),
        v.to_string(),
    );
}

fn check_decomposition(checks: &mut Checks, x: &RealMatrix, d: &Decomposition, acc: &NormAccounting, name: &str) {
    let p = d.method.norm();
    for (i, s) in d.steps.iter().enumerate() {
        let na = lp_norm(&s.a, p);
        let nb = lp_norm(&s.b, p);
        checks.push(
            format!("{name} step {} normalization", i + 1),
            approx_eq(na, s.delta) && approx_eq(nb, s.delta),
            format!("||a|| = {na}, ||b|| = {nb}, delta = {}", s.delta),
        );
    }
    for (i, s) in acc.steps.iter().enumerate() {
        checks.push(
            format!("{name} step {} triangle inequality", i + 1),
            s.holds,
            format!("{} <= {} + {}", s.lhs, s.fit_term, s.residual_term),
        );
    }
    checks.push(
        format!("{name} norm accounting"),
        acc.holds,
        format!("{} vs {} + {}", acc.total_lhs, acc.total_delta, acc.residual_term),
    );
    if d.method == FactorMethod::TaxicabSvd {
        let mut current = x.clone();
        for (i, s) in d.steps.iter().enumerate() {
            let Ok(next) = crate::factorize::deflate(&current, s) else { break };
            if s.converged {
                let gap = next.mul_vec(&crate::linalg::sign_vector(&s.b)).map(|v| lp_norm(&v, NormOrder::L1));
                let scale = crate::linalg::matrix_entrywise_norm(&current, NormOrder::L1);
                let gap = gap.unwrap_or(f64::INFINITY);
                checks.push(
                    format!("{name} step {} residual conjugacy", i + 1),
                    within(gap, scale),
                    format!("||X sgn(b)||_1 = {gap:e}"),
                );
            }
            current = next;
        }
    }
}

fn run_verify(ctx: &mut Ctx, a: &VerifyArgs) -> Result<u8, Failure> {
    let started = Instant::now();
    let x = read_matrix(&ctx.file(&a.matrix))?;
    let mut checks = Checks(Vec::new());

    for i in 1..x.rows() {
        check_pair(&mut checks, &format!("rows {} {}", i, i + 1), &x.row_vector(i - 1), &x.row_vector(i))?;
    }
    for j in 1..x.cols() {
        check_pair(&mut checks, &format!("cols {} {}", j, j + 1), &x.col_vector(j - 1), &x.col_vector(j))?;
    }

    let mut report = RunReport::new("verify", None);
    report.inputs.push(InputDigest::of("x", &x));
    if !x.is_zero() {
        let k = x.rows().min(x.cols());
        let options = FactorOptions::default();
        for (method, name) in [
            (FactorMethod::SvdL2, "svd"),
            (FactorMethod::TaxicabSvd, "tsvd"),
            (FactorMethod::L1MinSvd, "l1min"),
        ] {
            let d = decompose(&x, method, k, &options)?;
            let acc = norm_accounting(&x, &d)?;
            check_decomposition(&mut checks, &x, &d, &acc, name);
            report.decompositions.push(DecompositionReport::new(&d, acc));
        }
    }

    let failed = checks.0.iter().filter(|c| !c.passed).count();
    for c in &checks.0 {
        ctx.line(format_args!("{} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail));
    }
    ctx.line(format_args!("{} checks, {} failed", checks.0.len(), failed));
    report.verdicts = checks.0;
    emit(&a.output, report, started)?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_VIOLATION })
}
