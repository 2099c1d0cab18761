//! Subcommands of the `fracns` binary.
//!
//! Exit codes: 0 success, 2 usage/configuration/IO errors, 3 numerical
//! instability (partial outputs kept), 4 domain or fit errors. Failures also
//! print one JSON error record on stderr.

pub mod format;

use std::fs;
use std::ops::Range;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use fracns_core::diagnostics::{
    hausdorff_exponent, scaling_exponent, DataSource, EnergySeries, RegularityReport,
};
use fracns_core::io::{
    energy_csv_string, read_energy_csv, read_intervals_csv, read_norm_series, to_json, write_intervals_csv,
    write_sweep_summary, RunConfig, SweepRow, SweepSpec,
};
use fracns_core::singular::{cover_sum, decompose_regular_set, fit_blowup, BlowupFit, CoverMeasure, IntervalSet};
use fracns_core::solver::{short_digest, Simulation};
use fracns_core::spectral::snapshot::save_snapshot;
use fracns_core::Error;
use rayon::prelude::*;
use serde::Serialize;

use format::{g12, g12_opt};

pub const OUTPUT_ROOT_ENV: &str = "OUTPUT_ROOT";

const AFTER_HELP: &str = "\
Files:
  energy CSV      t,l2_sq,halpha_sq,h2alpha_sq,diss_integral,Q,residual,nonlin_flux
  sweep summary   alpha,d_alpha,t_star,eventual_time,max_Q_ratio,final_energy,status
  intervals CSV   tau,s
  norm series     t,y   (an energy CSV is also accepted: y = sqrt(halpha_sq))
CSV files end with one '# key=value ...' line carrying the config digest and run tags.

Environment:
  OUTPUT_ROOT     overrides the output directory of run/sweep configs

Exit codes: 0 ok, 2 usage/config/IO error, 3 numerical instability, 4 domain/fit error";

#[derive(Debug, Parser)]
#[command(name = "fracns", version, about = "Fractional Navier-Stokes Galerkin runs and regularity diagnostics", after_help = AFTER_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate one run and write energy.csv, report.json and snapshots.
    Run(RunArgs),
    /// One run per alpha of a sweep file, plus summary.csv.
    Sweep(SweepArgs),
    /// Fit the blow-up envelope y = A (t0 - t)^(-beta) to a norm series.
    Fit(FitArgs),
    /// Hausdorff pre-measure sum over the gaps of a regular-interval set.
    Cover(CoverArgs),
    /// Singular-time dimension bound (n+2-4 alpha)/(2 alpha).
    Exponent(ExponentArgs),
    /// Regularity report for an energy CSV.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Constants {
    /// Constant C of the local horizon and growth estimates
    #[arg(long = "constant-C", default_value_t = 1.0)]
    pub c: f64,
    /// Constant C1 of the smallness threshold nu/C1
    #[arg(long = "constant-C1", default_value_t = 1.0)]
    pub c1: f64,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Run config (JSON)
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory; takes precedence over OUTPUT_ROOT and the config
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Override the config's alpha
    #[arg(long, value_parser = parse_real)]
    pub alpha: Option<f64>,
    /// Override the seed of a random initial field
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub constants: Constants,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Sweep file (JSON): {base, alpha_list, output_root, parallel_width}
    #[arg(long)]
    pub config: PathBuf,
    /// Output root; takes precedence over OUTPUT_ROOT and the sweep file
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub constants: Constants,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Norm series CSV (t,y) or energy CSV
    #[arg(long)]
    pub input: PathBuf,
    /// alpha tag, if the file has none or to override it
    #[arg(long, value_parser = parse_real)]
    pub alpha: Option<f64>,
    /// Sample index range START:END (end exclusive); default all samples
    #[arg(long, value_parser = parse_window)]
    pub window: Option<Range<usize>>,
    /// Write the fit as JSON
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CoverArgs {
    /// Exponent gamma > 0
    #[arg(long, value_parser = parse_real)]
    pub gamma: f64,
    /// Regular intervals CSV (tau,s)
    #[arg(long, conflicts_with = "input")]
    pub intervals: Option<PathBuf>,
    /// Norm series to decompose first (needs --threshold)
    #[arg(long, requires = "threshold")]
    pub input: Option<PathBuf>,
    /// Regular threshold on y for --input
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Eventual regularity time for --input
    #[arg(long)]
    pub eventual_time: Option<f64>,
    /// Right end of the covered span; default from the file or max s
    #[arg(long)]
    pub tail_start: Option<f64>,
    /// Write the cover measure as JSON
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Write the decomposed intervals as CSV
    #[arg(long)]
    pub intervals_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExponentArgs {
    /// Dissipation index; accepts decimals or fractions like 5/6
    #[arg(long, value_parser = parse_real)]
    pub alpha: f64,
    /// Spatial dimension n
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    /// Write both exponents as JSON
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum SourceArg {
    GalerkinRun,
    Synthetic,
    Extrapolated,
}

impl From<SourceArg> for DataSource {
    fn from(s: SourceArg) -> Self {
        match s {
            SourceArg::GalerkinRun => DataSource::GalerkinRun,
            SourceArg::Synthetic => DataSource::Synthetic,
            SourceArg::Extrapolated => DataSource::Extrapolated,
        }
    }
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Energy CSV
    #[arg(long)]
    pub input: PathBuf,
    /// Write the report as JSON
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "galerkin-run")]
    pub source: SourceArg,
    #[command(flatten)]
    pub constants: Constants,
}

/// Parse `0.75`, `5/6` or `-1/2`.
pub fn parse_real(s: &str) -> Result<f64, String> {
    let v = match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| format!("bad numerator in `{s}`"))?;
            let b: f64 = b.trim().parse().map_err(|_| format!("bad denominator in `{s}`"))?;
            a / b
        }
        None => s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

fn parse_window(s: &str) -> Result<Range<usize>, String> {
    let (a, b) = s.split_once(':').ok_or("expected START:END")?;
    let a = a.parse().map_err(|_| format!("bad start in `{s}`"))?;
    let b = b.parse().map_err(|_| format!("bad end in `{s}`"))?;
    Ok(a..b)
}

/// Exit status for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Stability { .. } => 3,
        Error::Domain(_) | Error::Fit(_) | Error::Overflow(_) => 4,
        _ => 2,
    }
}

#[derive(Serialize)]
struct ErrorRecord<'a> {
    error: &'a str,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    field: Option<&'a str>,
    exit_code: i32,
}

/// One-line JSON description of an error for stderr.
pub fn error_record(err: &Error) -> String {
    let field = match err {
        Error::Config { field, .. } => Some(field.as_str()),
        _ => None,
    };
    serde_json::to_string(&ErrorRecord {
        error: err.kind(),
        message: err.to_string(),
        field,
        exit_code: exit_code(err),
    })
    .expect("error record serializes")
}

pub fn execute(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Run(a) => cmd_run(&a),
        Command::Sweep(a) => cmd_sweep(&a),
        Command::Fit(a) => cmd_fit(&a),
        Command::Cover(a) => cmd_cover(&a),
        Command::Exponent(a) => cmd_exponent(&a),
        Command::Report(a) => cmd_report(&a),
    }
}

fn read_text(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Error> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, contents)?;
    Ok(())
}

fn resolve_output(flag: Option<&PathBuf>, configured: Option<&PathBuf>) -> PathBuf {
    if let Some(p) = flag {
        return p.clone();
    }
    if let Some(env) = std::env::var_os(OUTPUT_ROOT_ENV).filter(|v| !v.is_empty()) {
        return PathBuf::from(env);
    }
    configured.cloned().unwrap_or_else(|| PathBuf::from("."))
}

/// Report written next to each run's energy CSV.
#[derive(Debug, Serialize)]
pub struct RunReport {
    #[serde(flatten)]
    pub report: RegularityReport,
    pub status: String,
    pub final_time: f64,
    pub final_energy: Option<f64>,
    pub max_abs_residual: f64,
}

/// Outcome of one member run.
pub struct RunSummary {
    pub report: RunReport,
    pub error: Option<Error>,
}

fn execute_run(cfg: &RunConfig, out_dir: &Path, constants: &Constants) -> Result<RunSummary, Error> {
    let solver_cfg = cfg.solver_config()?;
    let u0 = cfg.initial_field()?;
    let mut sim = Simulation::new(solver_cfg, &u0)?;
    let mut failure = None;
    loop {
        match sim.advance() {
            Ok(true) => continue,
            Ok(false) => break,
            Err(e) => {
                failure = Some(e);
                break;
            }
        }
    }
    let mut output = sim.into_output();
    output.series.config_digest = cfg.digest();
    fs::create_dir_all(out_dir)?;
    write_file(&out_dir.join("energy.csv"), &energy_csv_string(&output.series)?)?;
    let snapshot_records: Vec<_> = output.trajectory.iter().filter(|r| r.field.is_some()).collect();
    if !snapshot_records.is_empty() {
        let dir = out_dir.join("snapshots");
        fs::create_dir_all(&dir)?;
        for (i, rec) in snapshot_records.iter().enumerate() {
            let field = rec.field.as_ref().expect("filtered");
            save_snapshot(&dir.join(format!("snap_{i:05}.fnss")), field, cfg.alpha)?;
        }
    }
    let report = RegularityReport::from_series(&output.series, constants.c, constants.c1, DataSource::GalerkinRun)?;
    let run_report = RunReport {
        report,
        status: failure.as_ref().map_or_else(|| "complete".to_string(), |e| e.kind().to_string()),
        final_time: output.final_time,
        final_energy: output.series.records.last().map(|r| r.l2_sq),
        max_abs_residual: output.series.records.iter().map(|r| r.residual.abs()).fold(0.0, f64::max),
    };
    write_file(&out_dir.join("report.json"), &to_json(&run_report)?)?;
    Ok(RunSummary {
        report: run_report,
        error: failure,
    })
}

fn print_kv(key: &str, value: impl std::fmt::Display) {
    println!("{key}: {value}");
}

pub fn cmd_run(args: &RunArgs) -> Result<(), Error> {
    let mut cfg: RunConfig = RunConfig::from_json(&read_text(&args.config)?)?;
    if let Some(a) = args.alpha {
        cfg.alpha = a;
    }
    if let Some(seed) = args.seed {
        cfg.initial.seed = seed;
    }
    cfg.validate()?;
    let out_dir = resolve_output(args.output.as_ref(), cfg.output_dir.as_ref());
    let summary = execute_run(&cfg, &out_dir, &args.constants)?;
    let r = &summary.report;
    print_kv("config_digest", &r.report.provenance.config_digest);
    print_kv("output_dir", out_dir.display());
    print_kv("status", &r.status);
    print_kv("final_time", g12(r.final_time));
    print_kv("final_energy", g12_opt(r.final_energy));
    print_kv("max_abs_residual", g12(r.max_abs_residual));
    print_kv("q_threshold_ratio", g12_opt(r.report.q_threshold_ratio));
    print_kv("t_star_local", g12_opt(r.report.t_star_local));
    print_kv("eventual_time", g12_opt(r.report.eventual_time));
    match summary.error {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn alpha_dir_name(alpha: f64) -> String {
    format!("alpha_{}", fracns_core::io::fmt_f64(alpha))
}

fn sweep_row(alpha: f64, dim: usize, outcome: &Result<RunSummary, Error>) -> SweepRow {
    let d_alpha = hausdorff_exponent(alpha, dim).ok();
    match outcome {
        Ok(s) => SweepRow {
            alpha,
            d_alpha,
            t_star: s.report.report.t_star_local,
            eventual_time: s.report.report.eventual_time,
            max_q_ratio: s.report.report.q_threshold_ratio,
            final_energy: s.report.final_energy,
            status: match &s.error {
                None => "ok".into(),
                Some(e) => e.kind().into(),
            },
        },
        Err(e) => SweepRow {
            alpha,
            d_alpha,
            t_star: None,
            eventual_time: None,
            max_q_ratio: None,
            final_energy: None,
            status: e.kind().into(),
        },
    }
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<(), Error> {
    let spec = SweepSpec::from_json(&read_text(&args.config)?)?;
    let root = resolve_output(args.output.as_ref(), Some(&spec.output_root));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.parallel_width)
        .build()
        .map_err(|e| Error::config("parallel_width", e.to_string()))?;
    let outcomes: Vec<(f64, Result<RunSummary, Error>)> = pool.install(|| {
        spec.alpha_list
            .par_iter()
            .map(|&alpha| {
                let outcome = spec
                    .member(alpha)
                    .and_then(|cfg| execute_run(&cfg, &root.join(alpha_dir_name(alpha)), &args.constants));
                (alpha, outcome)
            })
            .collect()
    });
    let rows: Vec<SweepRow> = outcomes
        .iter()
        .map(|(alpha, o)| sweep_row(*alpha, spec.base.dim, o))
        .collect();
    let mut digest_src = spec.clone();
    digest_src.output_root = PathBuf::new();
    digest_src.base.output_dir = None;
    digest_src.parallel_width = 1;
    let digest = short_digest(&serde_json::to_vec(&digest_src)?);
    let mut buf = Vec::new();
    write_sweep_summary(&mut buf, &rows, &digest)?;
    let summary_path = root.join("summary.csv");
    write_file(&summary_path, &String::from_utf8(buf).expect("utf-8 csv"))?;
    print_kv("summary", summary_path.display());
    let mut worst: Option<Error> = None;
    for (alpha, outcome) in outcomes {
        let err = match outcome {
            Ok(s) => s.error,
            Err(e) => Some(e),
        };
        if let Some(e) = err {
            log::warn!("alpha = {alpha}: {e}");
            if worst.as_ref().is_none_or(|w| exit_code(&e) > exit_code(w)) {
                worst = Some(e);
            }
        }
    }
    match worst {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

#[derive(Serialize)]
struct FitOutput<'a> {
    #[serde(flatten)]
    fit: &'a BlowupFit,
    window: [usize; 2],
    input_digest: String,
}

pub fn cmd_fit(args: &FitArgs) -> Result<(), Error> {
    let text = read_text(&args.input)?;
    let series = read_norm_series(&text, args.alpha, None)?;
    let window = args.window.clone().unwrap_or(0..series.len());
    let fit = fit_blowup(&series, window.clone())?;
    print_kv("t0", g12(fit.t0));
    print_kv("beta", g12(fit.beta));
    print_kv("A", g12(fit.amplitude));
    print_kv("rms_log_error", g12(fit.rms_log_error));
    print_kv("beta_theory", g12(fit.beta_theory));
    print_kv("beta_discrepancy", g12(fit.beta_discrepancy));
    if let Some(path) = &args.output {
        let out = FitOutput {
            fit: &fit,
            window: [window.start, window.end],
            input_digest: short_digest(text.as_bytes()),
        };
        write_file(path, &to_json(&out)?)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct CoverOutput<'a> {
    #[serde(flatten)]
    measure: &'a CoverMeasure,
    tail_start: f64,
    gaps: Vec<f64>,
    input_digest: String,
}

pub fn cmd_cover(args: &CoverArgs) -> Result<(), Error> {
    let (set, text) = match (&args.intervals, &args.input) {
        (Some(path), None) => {
            let text = read_text(path)?;
            let (rows, tagged) = read_intervals_csv(&text)?;
            let tail = args
                .tail_start
                .or(tagged)
                .unwrap_or_else(|| rows.iter().map(|r| r.1).fold(0.0, f64::max));
            (IntervalSet::new(rows, tail)?, text)
        }
        (None, Some(path)) => {
            let text = read_text(path)?;
            let series = read_norm_series(&text, Some(1.0), None)?;
            let threshold = args.threshold.expect("clap enforces --threshold");
            let eventual = args.eventual_time.or(args.tail_start);
            (decompose_regular_set(&series, threshold, eventual)?, text)
        }
        _ => {
            return Err(Error::config("intervals", "pass exactly one of --intervals or --input"));
        }
    };
    if let Some(path) = &args.intervals_out {
        let mut buf = Vec::new();
        write_intervals_csv(&mut buf, set.intervals(), set.tail_start())?;
        write_file(path, &String::from_utf8(buf).expect("utf-8 csv"))?;
    }
    let measure = cover_sum(&set, args.gamma)?;
    print_kv("gamma", g12(measure.gamma));
    print_kv("raw_sum", g12(measure.raw_sum));
    print_kv("normalized_sum", g12(measure.normalized_sum));
    print_kv("gaps", set.gaps().len());
    if let Some(path) = &args.output {
        let out = CoverOutput {
            measure: &measure,
            tail_start: set.tail_start(),
            gaps: set.gaps(),
            input_digest: short_digest(text.as_bytes()),
        };
        write_file(path, &to_json(&out)?)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct ExponentOutput {
    alpha: f64,
    dim: usize,
    hausdorff_exponent: f64,
    scaling_exponent: f64,
}

pub fn cmd_exponent(args: &ExponentArgs) -> Result<(), Error> {
    let d = hausdorff_exponent(args.alpha, args.dim)?;
    println!("{}", g12(d));
    if let Some(path) = &args.output {
        let out = ExponentOutput {
            alpha: args.alpha,
            dim: args.dim,
            hausdorff_exponent: d,
            scaling_exponent: scaling_exponent(args.alpha, args.dim),
        };
        write_file(path, &to_json(&out)?)?;
    }
    Ok(())
}

pub fn cmd_report(args: &ReportArgs) -> Result<(), Error> {
    let series: EnergySeries = read_energy_csv(&read_text(&args.input)?)?;
    let report = RegularityReport::from_series(&series, args.constants.c, args.constants.c1, args.source.into())?;
    print_kv("alpha", g12(report.alpha));
    print_kv("nu", g12(report.nu));
    print_kv("q_threshold_ratio", g12_opt(report.q_threshold_ratio));
    print_kv(
        "smallness_holds",
        report.smallness_holds.map_or("none".into(), |b| b.to_string()),
    );
    print_kv("t_star_local", g12_opt(report.t_star_local));
    print_kv("eventual_time", g12_opt(report.eventual_time));
    print_kv(
        "monotone_decay_verified",
        report.monotone_decay_verified.map_or("none".into(), |b| b.to_string()),
    );
    print_kv("c1_lower_bound_heuristic", g12_opt(report.c1_lower_bound_heuristic));
    print_kv("config_digest", &report.provenance.config_digest);
    if let Some(path) = &args.output {
        write_file(path, &to_json(&report)?)?;
    }
    Ok(())
}
