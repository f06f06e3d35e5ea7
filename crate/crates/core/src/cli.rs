//! The `tailsim` command line: `run`, `compare` and `report`.
//!
//! Settings come from flags, optionally layered over a TOML file given with
//! `--config`; a flag always wins over the file. Exit codes: `0` success,
//! `1` runtime failure, `2` usage or configuration error, `3` tolerance
//! exceeded.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::builtin::BuiltinTarget;
use crate::equal_scores::DEFAULT_RESOLUTION;
use crate::error::{Result, TailError};
use crate::estimator::{assemble_tail_cdf, TailCdf};
use crate::oracles::Oracle;
use crate::reduced::RegionKind;
use crate::runner::{simulate, Method, RunSettings};
use crate::sample::SimulationRun;
use crate::tail::{TailProblem, TailSide};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_TOLERANCE: i32 = 3;

const DEFAULT_TOL: f64 = 0.07;
const DEFAULT_REPLICATIONS: usize = 10;

#[derive(Debug, Parser)]
#[command(name = "tailsim", version, about = "Tail simulation for monotone functions of bounded random variables")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate one tail and write `z,cdf,weight` rows.
    Run(CommonArgs),
    /// Simulate one tail and overlay the exact CDF.
    Compare(CommonArgs),
    /// Compare every method over several seeds.
    Report(CommonArgs),
}

#[derive(Debug, Args, Default)]
struct CommonArgs {
    /// TOML file with any of the options below; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// sum-uniform, product-uniform or reliability.
    #[arg(long)]
    target: Option<String>,
    /// Number of variables (sum-uniform, product-uniform).
    #[arg(long)]
    n: Option<usize>,
    /// Reliability scale α.
    #[arg(long)]
    alpha: Option<f64>,
    /// Reliability lower bound β.
    #[arg(long)]
    beta: Option<f64>,
    /// left or right.
    #[arg(long)]
    tail: Option<String>,
    /// Tail width ε.
    #[arg(long, allow_negative_numbers = true)]
    epsilon: Option<f64>,
    /// Number of draws m.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// no-rejection, equal-scores, reduced or mc.
    #[arg(long)]
    method: Option<String>,
    /// tangent, secant or min-corner (reduced method).
    #[arg(long)]
    region: Option<String>,
    /// Simpson subintervals per stage (equal-scores method).
    #[arg(long)]
    resolution: Option<usize>,
    /// Largest sup distance accepted by `compare`.
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
    /// Compare conditional CDFs given the tail instead of absolute ones.
    #[arg(long)]
    conditional: bool,
    /// Comma-separated methods for `report`.
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<String>>,
    /// Seeds per method for `report`, starting at `--seed`.
    #[arg(long)]
    replications: Option<usize>,
}

/// Options accepted in the `--config` file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    target: Option<String>,
    n: Option<usize>,
    alpha: Option<f64>,
    beta: Option<f64>,
    tail: Option<String>,
    epsilon: Option<f64>,
    samples: Option<usize>,
    seed: Option<u64>,
    method: Option<String>,
    region: Option<String>,
    resolution: Option<usize>,
    tol: Option<f64>,
    out: Option<PathBuf>,
    jobs: Option<usize>,
    conditional: Option<bool>,
    methods: Option<Vec<String>>,
    replications: Option<usize>,
}

/// Fully resolved settings of one invocation.
#[derive(Debug, Clone)]
struct Settings {
    target: BuiltinTarget,
    side: TailSide,
    epsilon: f64,
    run: RunSettings,
    tol: f64,
    out: Option<PathBuf>,
    conditional: bool,
    methods: Vec<Method>,
    replications: usize,
}

fn resolve(args: CommonArgs) -> Result<Settings> {
    let file = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| TailError::Config(format!("cannot read {}: {e}", path.display())))?;
            toml::from_str::<FileConfig>(&text)
                .map_err(|e| TailError::Config(format!("malformed config {}: {e}", path.display())))?
        }
        None => FileConfig::default(),
    };
    let target_name = args.target.or(file.target).unwrap_or_else(|| "sum-uniform".into());
    let n = args.n.or(file.n).unwrap_or(4);
    let alpha = args.alpha.or(file.alpha).unwrap_or(0.999);
    let beta = args.beta.or(file.beta).unwrap_or(0.9999);
    let target = BuiltinTarget::from_name(&target_name, n, alpha, beta)?;
    let side: TailSide = args.tail.or(file.tail).unwrap_or_else(|| "right".into()).parse()?;
    let epsilon = args
        .epsilon
        .or(file.epsilon)
        .ok_or_else(|| TailError::Config("--epsilon is required".into()))?;
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(TailError::Config(format!("--epsilon must be positive, got {epsilon}")));
    }
    let samples = args.samples.or(file.samples).unwrap_or(1000);
    if samples == 0 {
        return Err(TailError::Config("--samples must be at least 1".into()));
    }
    let method: Method = args
        .method
        .or(file.method)
        .unwrap_or_else(|| "no-rejection".into())
        .parse()?;
    let region: RegionKind = args.region.or(file.region).unwrap_or_else(|| "tangent".into()).parse()?;
    let resolution = args.resolution.or(file.resolution).unwrap_or(DEFAULT_RESOLUTION);
    let jobs = args.jobs.or(file.jobs).unwrap_or(1).max(1);
    let tol = args.tol.or(file.tol).unwrap_or(DEFAULT_TOL);
    if !(tol >= 0.0) {
        return Err(TailError::Config(format!("--tol must be non-negative, got {tol}")));
    }
    let methods = match args.methods.or(file.methods) {
        Some(list) => list.iter().map(|m| m.trim().parse()).collect::<Result<Vec<Method>>>()?,
        None => Method::ALL.to_vec(),
    };
    let replications = args.replications.or(file.replications).unwrap_or(DEFAULT_REPLICATIONS);
    if replications == 0 {
        return Err(TailError::Config("--replications must be at least 1".into()));
    }
    Ok(Settings {
        target,
        side,
        epsilon,
        run: RunSettings {
            method,
            region,
            resolution,
            samples,
            seed: args.seed.or(file.seed).unwrap_or(42),
            jobs,
        },
        tol,
        out: args.out.or(file.out),
        conditional: args.conditional || file.conditional.unwrap_or(false),
        methods,
        replications,
    })
}

/// Formats a float with 17 significant digits.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// `z,cdf,weight` rows of an assembled CDF.
pub fn tail_csv(cdf: Option<&TailCdf>) -> String {
    let mut out = String::from("z,cdf,weight\n");
    if let Some(c) = cdf {
        for ((z, p), w) in c.points().zip(c.weights()) {
            let _ = writeln!(out, "{},{},{}", fmt_float(z), fmt_float(p), fmt_float(*w));
        }
    }
    out
}

fn write_output(path: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| TailError::Config(format!("cannot write {}: {e}", p.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| TailError::Config(format!("cannot write output: {e}"))),
    }
}

fn assemble(problem: &TailProblem, run: &SimulationRun) -> Result<Option<TailCdf>> {
    if run.points.is_empty() {
        return Ok(None);
    }
    assemble_tail_cdf(&run.points, run.stats.m_total, problem.original_spec().side()).map(Some)
}

fn stats_text(s: &Settings, run: &SimulationRun, seconds: f64) -> String {
    let st = &run.stats;
    let vol = st.volume_rejection.map_or("n/a".to_string(), fmt_float);
    format!(
        "target={} tail={} epsilon={} method={} samples={} seed={}\n\
         accepted={}\ntail_mass={}\ncount_rejection={}\nvolume_rejection={}\nruntime_s={:.6}\n",
        s.target.name(),
        s.side,
        s.epsilon,
        s.run.method,
        st.m_total,
        s.run.seed,
        st.m_accepted,
        fmt_float(st.tail_mass()),
        fmt_float(st.count_rejection),
        vol,
        seconds
    )
}

fn cmd_run(s: &Settings, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let problem = s.target.problem(s.side, s.epsilon)?;
    let start = Instant::now();
    let run = simulate(&problem, &s.run)?;
    let seconds = start.elapsed().as_secs_f64();
    let cdf = assemble(&problem, &run)?;
    write_output(s.out.as_deref(), &tail_csv(cdf.as_ref()), stdout)?;
    let stats = stats_text(s, &run, seconds);
    let sink: &mut dyn Write = if s.out.is_some() { stdout } else { stderr };
    let _ = sink.write_all(stats.as_bytes());
    Ok(EXIT_OK)
}

/// `z,cdf_sim,cdf_exact,abs_err` rows and the sup distance.
fn compare_csv(cdf: &TailCdf, oracle: &Oracle, problem: &TailProblem, conditional: bool) -> Result<(String, f64)> {
    let spec = problem.original_spec();
    let sim: Vec<(f64, f64)> = if conditional {
        cdf.conditional()
    } else {
        cdf.points().collect()
    };
    let mut out = String::from("z,cdf_sim,cdf_exact,abs_err\n");
    let mut sup: f64 = 0.0;
    for (z, p) in sim {
        let exact = if conditional {
            oracle.conditional_cdf(spec, z)?
        } else {
            oracle.cdf(z)?
        };
        let err = (p - exact).abs();
        sup = sup.max(err);
        let _ = writeln!(out, "{},{},{},{}", fmt_float(z), fmt_float(p), fmt_float(exact), fmt_float(err));
    }
    Ok((out, sup))
}

fn cmd_compare(s: &Settings, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let problem = s.target.problem(s.side, s.epsilon)?;
    let oracle = s.target.oracle()?;
    let run = simulate(&problem, &s.run)?;
    let cdf = assemble(&problem, &run)?.ok_or(TailError::NoTailHits)?;
    let (csv, sup) = compare_csv(&cdf, &oracle, &problem, s.conditional)?;
    write_output(s.out.as_deref(), &csv, stdout)?;
    let summary = format!("sup_distance={}\n", fmt_float(sup));
    let sink: &mut dyn Write = if s.out.is_some() { stdout } else { stderr };
    let _ = sink.write_all(summary.as_bytes());
    Ok(if sup <= s.tol { EXIT_OK } else { EXIT_TOLERANCE })
}

/// One report row: per-seed results of a method.
struct MethodSummary {
    method: Method,
    outcome: std::result::Result<Vec<SimulationRun>, String>,
    seconds: f64,
}

fn mean_and_stderr(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn report_text(s: &Settings, problem: &TailProblem, rows: &[MethodSummary]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# target={} tail={} epsilon={} samples={} seeds={}..={}",
        s.target.name(),
        s.side,
        s.epsilon,
        s.run.samples,
        s.run.seed,
        s.run.seed + s.replications as u64 - 1
    );
    if let Ok(oracle) = s.target.oracle() {
        if let Ok(p) = oracle.tail_probability(problem.original_spec()) {
            let _ = writeln!(out, "# exact tail probability = {p:.6e}");
        }
    }
    let _ = writeln!(
        out,
        "{:<14} {:>12} {:>17} {:>27} {:>12} {:>12}",
        "method", "tail_hits", "hits_min..max", "tail_mass ± stderr", "count_rej", "volume_rej"
    );
    for row in rows {
        match &row.outcome {
            Ok(runs) => {
                let hits: Vec<f64> = runs.iter().map(|r| r.stats.m_accepted as f64).collect();
                let masses: Vec<f64> = runs.iter().map(|r| r.stats.tail_mass()).collect();
                let rej: Vec<f64> = runs.iter().map(|r| r.stats.count_rejection).collect();
                let vol: Vec<f64> = runs.iter().filter_map(|r| r.stats.volume_rejection).collect();
                let (hm, _) = mean_and_stderr(&hits);
                let (mm, ms) = mean_and_stderr(&masses);
                let (rm, _) = mean_and_stderr(&rej);
                let vol_text = if vol.len() == runs.len() {
                    format!("{:.6}", mean_and_stderr(&vol).0)
                } else {
                    "n/a".into()
                };
                let lo = runs.iter().map(|r| r.stats.m_accepted).min().unwrap_or(0);
                let hi = runs.iter().map(|r| r.stats.m_accepted).max().unwrap_or(0);
                let _ = writeln!(
                    out,
                    "{:<14} {:>12.1} {:>17} {:>27} {:>12.6} {:>12}",
                    row.method.to_string(),
                    hm,
                    format!("{lo}..{hi}"),
                    format!("{mm:.6e} ± {ms:.2e}"),
                    rm,
                    vol_text
                );
            }
            Err(msg) => {
                let _ = writeln!(out, "{:<14} unavailable: {msg}", row.method.to_string());
            }
        }
    }
    out
}

fn cmd_report(s: &Settings, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let problem = s.target.problem(s.side, s.epsilon)?;
    let mut rows = Vec::new();
    for &method in &s.methods {
        let start = Instant::now();
        let outcome = (0..s.replications as u64)
            .map(|k| {
                let settings = RunSettings {
                    method,
                    seed: s.run.seed + k,
                    ..s.run
                };
                simulate(&problem, &settings)
            })
            .collect::<Result<Vec<_>>>()
            .map_err(|e| e.to_string());
        rows.push(MethodSummary {
            method,
            outcome,
            seconds: start.elapsed().as_secs_f64(),
        });
    }
    write_output(s.out.as_deref(), &report_text(s, &problem, &rows), stdout)?;
    let mut timing = String::from("# wall time per method (not part of the table)\n");
    for row in &rows {
        let _ = writeln!(timing, "# {}: {:.3} s", row.method, row.seconds);
    }
    let sink: &mut dyn Write = if s.out.is_some() { stdout } else { stderr };
    let _ = sink.write_all(timing.as_bytes());
    Ok(EXIT_OK)
}

fn exit_code(e: &TailError) -> i32 {
    match e {
        TailError::Config(_) | TailError::NoOracle(_) | TailError::RegionNotCertified(_) => EXIT_USAGE,
        _ => EXIT_RUNTIME,
    }
}

/// Parses `args` (including the program name) and runs the command,
/// writing to the given streams. Returns the process exit code.
pub fn run_cli<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let (args, cmd): (CommonArgs, fn(&Settings, &mut dyn Write, &mut dyn Write) -> Result<i32>) = match cli.command {
        Command::Run(a) => (a, cmd_run),
        Command::Compare(a) => (a, cmd_compare),
        Command::Report(a) => (a, cmd_report),
    };
    let result = resolve(args).and_then(|s| cmd(&s, stdout, stderr));
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Entry point used by the binary.
pub fn main_entry() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_cli(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["tailsim"];
        full.extend_from_slice(args);
        let code = run_cli(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn float_format_has_17_digits() {
        assert_eq!(fmt_float(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_float(0.1).parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn zero_epsilon_is_usage_error() {
        let (code, _, err) = call(&["run", "--epsilon", "0"]);
        assert_eq!(code, EXIT_USAGE, "{err}");
        let (code, _, _) = call(&["run", "--bogus"]);
        assert_eq!(code, EXIT_USAGE);
        let (code, _, _) = call(&["run", "--epsilon", "0.1", "--target", "nope"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn run_writes_header_and_rows() {
        let (code, out, err) = call(&[
            "run", "--target", "product-uniform", "--n", "3", "--tail", "left", "--epsilon", "0.001", "--samples", "50",
        ]);
        assert_eq!(code, EXIT_OK, "{err}");
        let mut lines = out.lines();
        assert_eq!(lines.next(), Some("z,cdf,weight"));
        assert_eq!(lines.count(), 50);
        assert!(err.contains("count_rejection=0.0000000000000000e0"));
    }

    #[test]
    fn compare_tolerance_exit() {
        let base = ["compare", "--target", "product-uniform", "--n", "3", "--tail", "left", "--epsilon", "0.001"];
        let mut loose = base.to_vec();
        loose.extend_from_slice(&["--tol", "1.0"]);
        assert_eq!(call(&loose).0, EXIT_OK);
        let mut tight = base.to_vec();
        tight.extend_from_slice(&["--tol", "0", "--conditional"]);
        let (code, _, err) = call(&tight);
        assert_eq!(code, EXIT_TOLERANCE);
        assert!(err.starts_with("sup_distance="));
    }
}
