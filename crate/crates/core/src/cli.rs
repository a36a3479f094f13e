//! Benchmark harness behind the `ssarc` binary.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::problem::{builtin_collection, find_builtin, Problem, TestProblem};
use crate::solver::{solve, RejectionBeta, SolverConfig, SolverReport, SolverStatus, TrialRecord};

/// Reference rows for the built-in problems, as published.
pub const BUNDLED_REFERENCE: &str = include_str!("../data/table1_reference.csv");

/// Loosest accepted iteration ratio against the reference.
pub const NIT_RATIO_LIMIT: f64 = 3.0;
/// Largest accepted final residual.
pub const RES_LIMIT: f64 = 1e-8;

fn nan_for_null<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub problem: String,
    pub n: usize,
    pub m: usize,
    pub nit: usize,
    pub cpu_s: f64,
    #[serde(deserialize_with = "nan_for_null")]
    pub res: f64,
    pub nif: usize,
    pub nig: usize,
    pub status: SolverStatus,
}

impl RunRecord {
    pub fn from_report(p: &dyn Problem, report: &SolverReport, cpu_s: f64) -> Self {
        Self {
            problem: p.name().to_string(),
            n: p.n(),
            m: p.m(),
            nit: report.nit,
            cpu_s,
            res: report.res,
            nif: report.nif,
            nig: report.nig,
            status: report.status,
        }
    }
}

pub struct RunOutcome {
    pub record: RunRecord,
    pub report: SolverReport,
}

/// Resolves names against the built-in collection; `all` selects everything.
pub fn resolve_problems(names: &[String]) -> Result<Vec<TestProblem>> {
    if names.iter().any(|n| n.eq_ignore_ascii_case("all")) {
        return Ok(builtin_collection());
    }
    names
        .iter()
        .map(|n| find_builtin(n).ok_or_else(|| Error::UnknownProblem(n.clone())))
        .collect()
}

/// Solves each problem, in parallel, returning outcomes in input order.
pub fn run_problems(problems: &[TestProblem], cfg: &SolverConfig) -> Result<Vec<RunOutcome>> {
    cfg.validate()?;
    problems
        .par_iter()
        .map(|p| {
            let start = Instant::now();
            let report = solve(p, cfg)?;
            let cpu_s = start.elapsed().as_secs_f64();
            Ok(RunOutcome { record: RunRecord::from_report(p, &report, cpu_s), report })
        })
        .collect()
}

pub fn write_csv<W: Write>(records: &[RunRecord], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in records {
        out.serialize(r).map_err(io_error)?;
    }
    out.flush().map_err(io_error)
}

pub fn read_csv<R: Read>(r: R) -> Result<Vec<RunRecord>> {
    csv::Reader::from_reader(r)
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::InvalidConfig(format!("malformed run records: {e}")))
}

pub fn write_json<W: Write>(records: &[RunRecord], w: W) -> Result<()> {
    serde_json::to_writer_pretty(w, records).map_err(|e| Error::InvalidConfig(e.to_string()))
}

pub fn read_json<R: Read>(r: R) -> Result<Vec<RunRecord>> {
    serde_json::from_reader(r).map_err(|e| Error::InvalidConfig(format!("malformed run records: {e}")))
}

fn io_error(e: impl std::fmt::Display) -> Error {
    Error::Evaluation(format!("I/O: {e}"))
}

pub fn render_table(records: &[RunRecord]) -> String {
    let mut s = format!(
        "{:<10} {:>4} {:>4} {:>5} {:>10} {:>12} {:>5} {:>5}  {}\n",
        "Problem", "n", "m", "NIT", "CPU-time", "Res", "NIF", "NIG", "Status"
    );
    for r in records {
        s += &format!(
            "{:<10} {:>4} {:>4} {:>5} {:>10.6} {:>12.4e} {:>5} {:>5}  {}\n",
            r.problem, r.n, r.m, r.nit, r.cpu_s, r.res, r.nif, r.nig, r.status
        );
    }
    s
}

/// One trial in a trace dump.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceLine {
    pub problem: String,
    #[serde(flatten)]
    pub record: TrialRecord,
}

/// Writes one JSON object per line and trial.
pub fn write_trace<W: Write>(outcomes: &[RunOutcome], mut w: W) -> Result<()> {
    for o in outcomes {
        for t in &o.report.trace {
            let line = TraceLine { problem: o.record.problem.clone(), record: t.clone() };
            serde_json::to_writer(&mut w, &line).map_err(io_error)?;
            writeln!(w).map_err(io_error)?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceRow {
    pub problem: String,
    pub n: usize,
    pub m: usize,
    pub nit: usize,
    pub cpu_s: f64,
    pub res: f64,
    pub nif: usize,
    pub nig: usize,
}

pub fn read_reference<R: Read>(r: R) -> Result<Vec<ReferenceRow>> {
    let rows: Vec<ReferenceRow> = csv::Reader::from_reader(r)
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::InvalidConfig(format!("malformed reference: {e}")))?;
    if rows.is_empty() {
        return Err(Error::InvalidConfig("reference has no rows".into()));
    }
    Ok(rows)
}

pub fn bundled_reference() -> Vec<ReferenceRow> {
    read_reference(BUNDLED_REFERENCE.as_bytes()).expect("bundled reference parses")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub problem: String,
    pub nit: usize,
    pub reference_nit: usize,
    pub ratio: f64,
    pub res: f64,
    pub status: SolverStatus,
    pub divergence: Option<String>,
}

/// Checks each run that has a reference row: the run must converge with
/// `Res ≤ 1e-8` and take between 1 and 3× the reference iteration count.
pub fn compare(records: &[RunRecord], reference: &[ReferenceRow]) -> Vec<ComparisonRow> {
    records
        .iter()
        .filter_map(|r| {
            let refr = reference.iter().find(|x| x.problem.eq_ignore_ascii_case(&r.problem))?;
            let ratio = if refr.nit == 0 { f64::INFINITY } else { r.nit as f64 / refr.nit as f64 };
            let divergence = if r.status != SolverStatus::Converged {
                Some(format!("status {}", r.status))
            } else if !(r.res <= RES_LIMIT) {
                Some(format!("Res {:e} above {RES_LIMIT:e}", r.res))
            } else if refr.nit >= 1 && r.nit == 0 {
                Some("no iterations taken".to_string())
            } else if refr.nit >= 1 && ratio > NIT_RATIO_LIMIT {
                Some(format!("NIT ratio {ratio:.2} above {NIT_RATIO_LIMIT}"))
            } else {
                None
            };
            Some(ComparisonRow {
                problem: r.problem.clone(),
                nit: r.nit,
                reference_nit: refr.nit,
                ratio,
                res: r.res,
                status: r.status,
                divergence,
            })
        })
        .collect()
}

pub fn render_comparison(rows: &[ComparisonRow]) -> String {
    let mut s = format!("{:<10} {:>5} {:>5} {:>6} {:>12}  {}\n", "Problem", "NIT", "ref", "ratio", "Res", "verdict");
    for r in rows {
        s += &format!(
            "{:<10} {:>5} {:>5} {:>6.2} {:>12.4e}  {}\n",
            r.problem,
            r.nit,
            r.reference_nit,
            r.ratio,
            r.res,
            r.divergence.as_deref().map_or("ok".to_string(), |d| format!("DIVERGES: {d}"))
        );
    }
    let bad = rows.iter().filter(|r| r.divergence.is_some()).count();
    s += &format!("{} compared, {} divergent\n", rows.len(), bad);
    s
}

#[derive(Debug, Parser)]
#[command(name = "ssarc", version, about = "Equality-constrained optimization benchmark harness")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve built-in problems and report one record per problem.
    Run(Box<RunArgs>),
    /// Check run records against reference iteration counts.
    Compare(CompareArgs),
    /// List the built-in problems.
    List,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Problem names, or `all`.
    #[arg(required = true)]
    pub names: Vec<String>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Write a JSON-lines trace of every trial to this file.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[command(flatten)]
    pub config: ConfigArgs,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Reference CSV (`problem,n,m,nit,cpu_s,res,nif,nig`); defaults to the
    /// bundled table.
    #[arg(long)]
    pub reference: Option<PathBuf>,
    /// Run records in CSV, or JSON when the file name ends in `.json`.
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Debug, Default, Args)]
pub struct ConfigArgs {
    #[arg(long)]
    pub beta0: Option<f64>,
    #[arg(long)]
    pub eta1: Option<f64>,
    #[arg(long)]
    pub eta2: Option<f64>,
    #[arg(long)]
    pub gamma1: Option<f64>,
    #[arg(long)]
    pub gamma2: Option<f64>,
    #[arg(long)]
    pub mu_init: Option<f64>,
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub tau1: Option<f64>,
    #[arg(long)]
    pub tau2: Option<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub xi: Option<f64>,
    #[arg(long)]
    pub zeta: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub lambda0: Option<f64>,
    #[arg(long)]
    pub psi: Option<f64>,
    #[arg(long)]
    pub ladder_m: Option<usize>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub max_outer: Option<usize>,
    #[arg(long)]
    pub max_inner: Option<usize>,
    #[arg(long)]
    pub max_ladder_extensions: Option<usize>,
    #[arg(long)]
    pub reorthogonalize: bool,
    /// Which `β` the next trial uses after a rejection.
    #[arg(long, value_enum)]
    pub rejection_beta: Option<RejectionBeta>,
}

impl ConfigArgs {
    pub fn apply(&self, mut cfg: SolverConfig) -> SolverConfig {
        macro_rules! set {
            ($($field:ident),*) => {
                $(if let Some(v) = self.$field { cfg.$field = v; })*
            };
        }
        set!(beta0, eta1, eta2, gamma1, gamma2, mu_init, nu, tau1, tau2, theta, xi, zeta, t, lambda0, psi,
             ladder_m, epsilon, max_outer, max_ladder_extensions);
        if self.max_inner.is_some() {
            cfg.max_inner = self.max_inner;
        }
        cfg.reorthogonalize |= self.reorthogonalize;
        if let Some(r) = self.rejection_beta {
            cfg.rejection_beta = r;
        }
        cfg
    }
}

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const NOT_CONVERGED: i32 = 1;
    pub const USAGE: i32 = 2;
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Run(args) => run_command(&args, out),
        Command::Compare(args) => compare_command(&args, out),
        Command::List => list_command(out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit::USAGE
        }
    }
}

fn run_command(args: &RunArgs, out: &mut dyn Write) -> Result<i32> {
    let cfg = args.config.apply(SolverConfig::default());
    let problems = resolve_problems(&args.names)?;
    let outcomes = run_problems(&problems, &cfg)?;
    let records: Vec<RunRecord> = outcomes.iter().map(|o| o.record.clone()).collect();
    match args.format {
        Format::Table => out.write_all(render_table(&records).as_bytes()).map_err(io_error)?,
        Format::Csv => write_csv(&records, &mut *out)?,
        Format::Json => {
            write_json(&records, &mut *out)?;
            writeln!(out).map_err(io_error)?;
        }
    }
    if let Some(path) = &args.trace {
        let file = File::create(path).map_err(io_error)?;
        let mut w = BufWriter::new(file);
        write_trace(&outcomes, &mut w)?;
        w.flush().map_err(io_error)?;
    }
    let all_ok = records.iter().all(|r| r.status == SolverStatus::Converged);
    Ok(if all_ok { exit::OK } else { exit::NOT_CONVERGED })
}

fn read_records(path: &Path) -> Result<Vec<RunRecord>> {
    let file = File::open(path).map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?;
    if path.extension().is_some_and(|e| e == "json") {
        read_json(file)
    } else {
        read_csv(file)
    }
}

fn compare_command(args: &CompareArgs, out: &mut dyn Write) -> Result<i32> {
    let reference = match &args.reference {
        Some(path) => {
            let file = File::open(path).map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?;
            read_reference(file)?
        }
        None => bundled_reference(),
    };
    let records = read_records(&args.input)?;
    let rows = compare(&records, &reference);
    out.write_all(render_comparison(&rows).as_bytes()).map_err(io_error)?;
    let diverged = rows.iter().any(|r| r.divergence.is_some());
    Ok(if diverged { exit::NOT_CONVERGED } else { exit::OK })
}

fn list_command(out: &mut dyn Write) -> Result<i32> {
    for p in builtin_collection() {
        writeln!(out, "{:<10} n={:<3} m={:<3} {}", p.name(), p.n(), p.m(), p.source()).map_err(io_error)?;
    }
    Ok(exit::OK)
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    main_with_args(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(problem: &str, nit: usize, res: f64, status: SolverStatus) -> RunRecord {
        RunRecord { problem: problem.into(), n: 2, m: 1, nit, cpu_s: 0.01, res, nif: nit + 1, nig: nit, status }
    }

    #[test]
    fn bundled_reference_covers_collection() {
        let refs = bundled_reference();
        assert!(refs.len() >= 25);
        for p in builtin_collection() {
            let r = refs.iter().find(|r| r.problem == p.name()).unwrap();
            assert_eq!((r.n, r.m), (p.n(), p.m()), "{}", p.name());
        }
        let bt2 = refs.iter().find(|r| r.problem == "BT2").unwrap();
        assert_eq!((bt2.n, bt2.m, bt2.nit), (3, 1, 11));
    }

    #[test]
    fn comparison_rules() {
        let refs = bundled_reference();
        let rows = compare(&[record("BT2", 22, 1e-10, SolverStatus::Converged)], &refs);
        assert_eq!(rows[0].ratio, 2.0);
        assert!(rows[0].divergence.is_none());

        let rows = compare(&[record("BT2", 34, 1e-10, SolverStatus::Converged)], &refs);
        assert!(rows[0].divergence.is_some());

        let rows = compare(&[record("BOOTH", 2, f64::NAN, SolverStatus::LadderExhausted)], &refs);
        assert!(rows[0].divergence.as_deref().unwrap().contains("LadderExhausted"));

        let rows = compare(&[record("BOOTH", 0, 0.0, SolverStatus::Converged)], &refs);
        assert!(rows[0].divergence.is_some());

        let rows = compare(&[record("NOT-IN-TABLE", 3, 0.0, SolverStatus::Converged)], &refs);
        assert!(rows.is_empty());
    }

    #[test]
    fn malformed_reference_is_rejected() {
        assert!(read_reference("problem,n\nBOOTH,x\n".as_bytes()).is_err());
        assert!(read_reference("problem,n,m,nit,cpu_s,res,nif,nig\n".as_bytes()).is_err());
    }

    #[test]
    fn records_round_trip() {
        let recs = vec![
            record("A", 3, 1.234_567_890_123_4e-9, SolverStatus::Converged),
            record("B", 7, f64::NAN, SolverStatus::IterationCap),
        ];
        let mut buf = Vec::new();
        write_csv(&recs, &mut buf).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with("problem,n,m,nit,cpu_s,res,nif,nig,status\n"));
        let back = read_csv(buf.as_slice()).unwrap();
        assert_eq!(back[0], recs[0]);
        assert!(back[1].res.is_nan());

        let mut buf = Vec::new();
        write_json(&recs, &mut buf).unwrap();
        let back = read_json(buf.as_slice()).unwrap();
        assert_eq!(back[0], recs[0]);
        assert!(back[1].res.is_nan());
    }

    #[test]
    fn unknown_problem_is_usage_error() {
        assert!(matches!(resolve_problems(&["NOPE".into()]), Err(Error::UnknownProblem(_))));
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(main_with_args(["ssarc", "run", "NOPE"], &mut out, &mut err), exit::USAGE);
        assert_eq!(main_with_args(["ssarc", "frobnicate"], &mut out, &mut err), exit::USAGE);
        assert_eq!(main_with_args(["ssarc", "run", "BOOTH", "--xi", "abc"], &mut out, &mut err), exit::USAGE);
    }

    #[test]
    fn flags_override_defaults() {
        let args = ConfigArgs { epsilon: Some(1e-4), ladder_m: Some(10), max_inner: Some(7), ..Default::default() };
        let cfg = args.apply(SolverConfig::default());
        assert_eq!((cfg.epsilon, cfg.ladder_m, cfg.max_inner), (1e-4, 10, Some(7)));
        assert_eq!(cfg.beta0, SolverConfig::default().beta0);
    }
}
