//! Command-line front end: `sample`, `bounds`, `figure`, `fit` and
//! `oracle-check`.

mod config;
pub mod figure;
pub mod output;

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{oracle_suite, OracleConfig};
use crate::metrology::{bound, BoundCurve, QfiConfig};
use crate::montecarlo::{fit_exponential, lower_envelope_xy, run_sweep_with, FitOptions, SamplerConfig, DEFAULT_BINS};
use crate::states::StateClass;

pub use config::{merge_config, parse_config};
pub use figure::{write_figure, FigureOptions};
pub use output::{fmt_sig, read_sweep_csv, CsvRow, RunManifest};

#[derive(Debug, Parser)]
#[command(
    name = "gqfi",
    version,
    about = "Phase-averaged QFI of Gaussian probes for squeezing estimation"
)]
pub struct Cli {
    /// Worker threads; output does not depend on it.
    #[arg(long, env = "GQFI_WORKERS", global = true)]
    pub workers: Option<usize>,
    /// `key = value` file presetting any flag; explicit flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a state class and write one CSV row per state.
    Sample(SampleArgs),
    /// Tabulate a closed-form bound curve.
    Bounds(BoundsArgs),
    /// Generate the data and plot script of a figure.
    Figure(FigureArgs),
    /// Fit the exponential lower envelope of an entangled sweep.
    Fit(FitArgs),
    /// Compare Gaussian formulas against the truncated Fock oracle.
    OracleCheck(OracleArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct QfiArgs {
    #[arg(long, default_value_t = 1e-3)]
    pub d_epsilon: f64,
    #[arg(long, default_value_t = 128)]
    pub theta_nodes: usize,
    /// Use the plain finite difference without extrapolation.
    #[arg(long)]
    pub no_richardson: bool,
    #[arg(long, default_value_t = 0.0)]
    pub base_epsilon: f64,
}

impl QfiArgs {
    pub fn config(&self) -> QfiConfig {
        QfiConfig {
            d_epsilon: self.d_epsilon,
            theta_nodes: self.theta_nodes,
            richardson: !self.no_richardson,
            base_epsilon: self.base_epsilon,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SamplerArgs {
    /// Mode-B diagonal entries range over `[1, 1 + 2 n_A · factor]`.
    #[arg(long, default_value_t = 5.0)]
    pub b_range_factor: f64,
    #[arg(long, default_value_t = 10_000)]
    pub attempt_cap: usize,
}

impl SamplerArgs {
    pub fn config(&self) -> SamplerConfig {
        SamplerConfig {
            b_range_factor: self.b_range_factor,
            attempt_cap: self.attempt_cap,
            ..SamplerConfig::default()
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SampleArgs {
    #[arg(long, value_enum)]
    pub class: StateClass,
    #[arg(long)]
    pub n_a: f64,
    #[arg(long, default_value_t = 100_000)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub qfi: QfiArgs,
    #[command(flatten)]
    pub sampler: SamplerArgs,
    /// Output CSV; stdout when absent (no manifest is written then).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BoundsArgs {
    #[arg(long, value_enum)]
    pub curve: BoundCurve,
    /// Inclusive grid `start:stop:step` over n_A, or over E_N for the entangled curve.
    #[arg(long)]
    pub range: String,
    /// Mode-A energy for the entangled curve.
    #[arg(long)]
    pub n_a: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FigureArgs {
    #[arg(long)]
    pub id: u8,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// States per scatter (per panel and class on panel figures).
    #[arg(long, default_value_t = 100_000)]
    pub count: usize,
    /// Defaults to `figure-<id>`.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[arg(long, default_value_t = 5.0)]
    pub n_max: f64,
    #[arg(long, default_value_t = 20)]
    pub n_steps: usize,
    #[command(flatten)]
    pub qfi: QfiArgs,
    #[command(flatten)]
    pub sampler: SamplerArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FitArgs {
    /// CSV written by `sample` for a two-mode class.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_BINS)]
    pub bins: usize,
    /// Starting guess `A1,A2,B1`.
    #[arg(long)]
    pub init: Option<String>,
    #[arg(long, default_value_t = 200)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OracleArgs {
    /// Single-mode cutoff; also caps the two-mode cutoff unless that is set.
    #[arg(long)]
    pub cutoff: Option<usize>,
    #[arg(long)]
    pub cutoff_two_mode: Option<usize>,
    #[arg(long)]
    pub tol_fidelity: Option<f64>,
    #[arg(long)]
    pub tol_entropy: Option<f64>,
    #[arg(long)]
    pub tol_negativity: Option<f64>,
    /// Relative tolerance on QFI.
    #[arg(long)]
    pub tol_qfi: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl OracleArgs {
    pub fn config(&self) -> OracleConfig {
        let d = OracleConfig::default();
        let single = self.cutoff.unwrap_or(d.cutoff_single);
        OracleConfig {
            cutoff_single: single,
            cutoff_two_mode: self.cutoff_two_mode.unwrap_or(single.min(d.cutoff_two_mode)),
            tol_fidelity: self.tol_fidelity.unwrap_or(d.tol_fidelity),
            tol_entropy: self.tol_entropy.unwrap_or(d.tol_entropy),
            tol_negativity: self.tol_negativity.unwrap_or(d.tol_negativity),
            tol_qfi: self.tol_qfi.unwrap_or(d.tol_qfi),
            ..d
        }
    }
}

/// Parses an inclusive `start:stop:step` grid.
pub fn parse_range(spec: &str) -> Result<Vec<f64>> {
    let bad = || Error::Config(format!("malformed range `{spec}`; expected start:stop:step"));
    let parts: Vec<f64> = spec
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    let [start, stop, step] = parts[..] else {
        return Err(bad());
    };
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) || step <= 0.0 || stop < start {
        return Err(bad());
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    if n > 10_000_000 {
        return Err(Error::Config(format!("range `{spec}` has too many points")));
    }
    Ok((0..=n).map(|k| start + k as f64 * step).collect())
}

fn parse_init(s: &str) -> Result<(f64, f64, f64)> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Config(format!("malformed --init `{s}`; expected A1,A2,B1")))?;
    match v[..] {
        [a1, a2, b1] => Ok((a1, a2, b1)),
        _ => Err(Error::Config(format!("--init needs three values, got {}", v.len()))),
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<serde_json::Value> {
    Ok(serde_json::to_value(v)?)
}

fn write_output(out: Option<&Path>, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match out {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent)?;
            }
            let mut w = BufWriter::new(File::create(path)?);
            body(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            body(&mut lock)?;
            lock.flush()?;
        }
    }
    Ok(())
}

fn finish_manifest(mut manifest: RunManifest, out: Option<&Path>) -> Result<()> {
    if let Some(path) = out {
        manifest.record(path)?;
        manifest.write(&output::manifest_path(path))?;
    }
    Ok(())
}

pub fn cmd_sample(args: &SampleArgs) -> Result<()> {
    if args.count == 0 {
        return Err(Error::Config("count must be >= 1".into()));
    }
    let sampler = args.sampler.config();
    sampler.validate()?;
    let records = run_sweep_with(
        args.class,
        args.n_a,
        args.count,
        args.seed,
        &args.qfi.config(),
        &sampler,
    )?;
    write_output(args.out.as_deref(), |w| output::write_sweep_csv(w, &records, 0))?;
    let manifest = RunManifest::new(to_json(args)?, Some(args.seed), Some(to_json(&sampler)?));
    finish_manifest(manifest, args.out.as_deref())
}

pub fn cmd_bounds(args: &BoundsArgs) -> Result<()> {
    let grid = parse_range(&args.range)?;
    let rows = grid
        .iter()
        .map(|&x| {
            let y = if args.curve == BoundCurve::EntangledVsNegativity {
                let n_a = args
                    .n_a
                    .ok_or_else(|| Error::Config("--n-a is required for the entangled curve".into()))?;
                bound(args.curve, n_a, Some(x))?
            } else {
                bound(args.curve, x, None)?
            };
            Ok((x, y))
        })
        .collect::<Result<Vec<_>>>()?;
    write_output(args.out.as_deref(), |w| output::write_xy_csv(w, ["x", "value"], &rows))?;
    finish_manifest(RunManifest::new(to_json(args)?, None, None), args.out.as_deref())
}

pub fn cmd_figure(args: &FigureArgs) -> Result<()> {
    let sampler = args.sampler.config();
    let opts = FigureOptions {
        id: args.id,
        seed: args.seed,
        count: args.count,
        out_dir: args
            .out_dir
            .clone()
            .unwrap_or_else(|| PathBuf::from(format!("figure-{}", args.id))),
        n_max: args.n_max,
        n_steps: args.n_steps,
        qfi: args.qfi.config(),
        sampler,
    };
    let files = write_figure(&opts)?;
    let mut manifest = RunManifest::new(to_json(args)?, Some(args.seed), Some(to_json(&sampler)?));
    for f in &files {
        manifest.record(f)?;
        println!("{}", f.display());
    }
    manifest.write(&opts.out_dir.join(format!("figure-{}.manifest.json", args.id)))
}

/// Envelope points `(E_N, min avg_qfi)` and the mode-A energy of a sweep CSV.
pub fn envelope_from_rows(rows: &[CsvRow], bins: usize) -> Result<(Vec<(f64, f64)>, f64)> {
    let first = rows
        .first()
        .ok_or_else(|| Error::InsufficientData("input has no rows".into()))?;
    if rows
        .iter()
        .any(|r| (r.n_a - first.n_a).abs() > 1e-9 * first.n_a.abs().max(1.0))
    {
        return Err(Error::InsufficientData("input mixes several n_a values".into()));
    }
    let points = rows
        .iter()
        .map(|r| {
            r.log_negativity
                .map(|e| (e, r.avg_qfi))
                .ok_or_else(|| Error::InsufficientData(format!("row {} has no log_negativity", r.index)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((lower_envelope_xy(&points, bins)?, first.n_a))
}

pub fn cmd_fit(args: &FitArgs) -> Result<()> {
    let rows = read_sweep_csv(&args.input)?;
    let (envelope, n_a) = envelope_from_rows(&rows, args.bins)?;
    let opts = FitOptions {
        init: args.init.as_deref().map(parse_init).transpose()?,
        max_iter: args.max_iter,
        tol: args.tol,
    };
    let fit = fit_exponential(&envelope, n_a, &opts)?;
    write_output(args.out.as_deref(), |w| {
        serde_json::to_writer_pretty(&mut *w, &fit)?;
        writeln!(w)?;
        Ok(())
    })?;
    let mut manifest = RunManifest::new(to_json(args)?, None, None);
    manifest.record(&args.input)?;
    finish_manifest(manifest, args.out.as_deref())
}

pub fn cmd_oracle_check(args: &OracleArgs) -> Result<()> {
    let cfg = args.config();
    let report = oracle_suite(&cfg);
    write_output(args.out.as_deref(), |w| {
        serde_json::to_writer_pretty(&mut *w, &report)?;
        writeln!(w)?;
        Ok(())
    })?;
    finish_manifest(RunManifest::new(to_json(&cfg)?, None, None), args.out.as_deref())?;
    let failed: Vec<String> = report
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{} [{}]", c.quantity, c.recipe))
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Error::Validation(format!(
            "{} of {} oracle checks failed: {}",
            failed.len(),
            report.len(),
            failed.join(", ")
        )))
    }
}

fn dispatch(cmd: &Command) -> Result<()> {
    match cmd {
        Command::Sample(a) => cmd_sample(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Figure(a) => cmd_figure(a),
        Command::Fit(a) => cmd_fit(a),
        Command::OracleCheck(a) => cmd_oracle_check(a),
    }
}

fn parse(argv: &[OsString]) -> std::result::Result<Cli, i32> {
    Cli::try_parse_from(argv).map_err(|e| {
        let _ = e.print();
        if e.use_stderr() {
            2
        } else {
            0
        }
    })
}

fn execute(argv: &[OsString]) -> std::result::Result<(), i32> {
    let report = |e: Error| {
        eprintln!("error: {e}");
        e.exit_code()
    };
    let cli = match config::prescan(&Cli::command(), argv) {
        (Some(path), Some(sub)) => {
            let text = fs::read_to_string(&path)
                .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))
                .map_err(report)?;
            let entries = parse_config(&text).map_err(report)?;
            parse(&merge_config(&Cli::command(), argv, &sub, &entries).map_err(report)?)?
        }
        _ => parse(argv)?,
    };
    match cli.workers {
        Some(0) => Err(report(Error::Config("--workers must be >= 1".into()))),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| report(Error::Config(format!("thread pool: {e}"))))?;
            pool.install(|| dispatch(&cli.command)).map_err(report)
        }
        None => dispatch(&cli.command).map_err(report),
    }
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    match execute(&argv) {
        Ok(()) => 0,
        Err(code) => code,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_is_inclusive() {
        assert_eq!(parse_range("0:2:1").unwrap(), vec![0.0, 1.0, 2.0]);
        assert_eq!(parse_range("1:1:1").unwrap(), vec![1.0]);
        assert_eq!(parse_range("0:1:0.25").unwrap().len(), 5);
    }

    #[test]
    fn malformed_ranges() {
        for bad in ["0:2", "0:2:0", "2:0:1", "a:b:c", "0:1:-1", "0:1:1:1"] {
            assert!(matches!(parse_range(bad), Err(Error::Config(_))), "{bad}");
        }
    }

    #[test]
    fn init_triplet() {
        assert_eq!(parse_init("0.1, 2, -3").unwrap(), (0.1, 2.0, -3.0));
        assert!(parse_init("1,2").is_err());
    }

    #[test]
    fn config_keys_fill_missing_flags() {
        let argv: Vec<OsString> = ["gqfi", "sample", "--class", "tmsv", "--count", "3"]
            .iter()
            .map(OsString::from)
            .collect();
        let entries = parse_config("n_a = 2\ncount = 50\nworkers = 2\ncurve = upper-single # bounds only\n").unwrap();
        let merged = merge_config(&Cli::command(), &argv, "sample", &entries).unwrap();
        let cli = Cli::try_parse_from(&merged).unwrap();
        assert_eq!(cli.workers, Some(2));
        match cli.command {
            Command::Sample(a) => {
                assert_eq!(a.n_a, 2.0);
                assert_eq!(a.count, 3);
            }
            _ => panic!("wrong subcommand"),
        }
    }

    #[test]
    fn unknown_config_key_rejected() {
        let argv: Vec<OsString> = ["gqfi", "bounds", "--curve", "upper-single", "--range", "0:1:1"]
            .iter()
            .map(OsString::from)
            .collect();
        let entries = parse_config("colour = red").unwrap();
        assert!(matches!(
            merge_config(&Cli::command(), &argv, "bounds", &entries),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn boolean_config_flag() {
        let argv: Vec<OsString> = ["gqfi", "sample", "--class", "tmsv", "--n-a", "1"]
            .iter()
            .map(OsString::from)
            .collect();
        let entries = parse_config("no-richardson = true").unwrap();
        let merged = merge_config(&Cli::command(), &argv, "sample", &entries).unwrap();
        match Cli::try_parse_from(&merged).unwrap().command {
            Command::Sample(a) => assert!(a.qfi.no_richardson),
            _ => panic!("wrong subcommand"),
        }
    }

    #[test]
    fn prescan_skips_global_values() {
        let argv: Vec<OsString> = [
            "gqfi",
            "--workers",
            "2",
            "--config=run.conf",
            "bounds",
            "--curve",
            "sample",
        ]
        .iter()
        .map(OsString::from)
        .collect();
        let (config, sub) = config::prescan(&Cli::command(), &argv);
        assert_eq!(config, Some(PathBuf::from("run.conf")));
        assert_eq!(sub.as_deref(), Some("bounds"));
    }
}
