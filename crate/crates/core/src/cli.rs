//! Command-line front end. Every subcommand writes a self-describing CSV or
//! JSON file and maps failures onto a fixed set of exit codes.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::correlations::pair_correlation_theory;
use crate::ensembles::{sample_gue_spectrum, unfold_semicircle, GueConfig, RNG_ALGORITHM};
use crate::error::{Error, Result};
use crate::kernel::{kernel_value, KernelParams};
use crate::report::{write_json, RunMetadata, Table};
use crate::stats::{
    curve_distance, estimate_pair_correlation, estimate_pooled, theory_on_bins,
    PairCorrelationEstimate,
};
use crate::verify::{run_suite, Check, Suite};
use crate::zeta::{
    find_zeros, load_zeros_file, unfold_zeros_with, write_zero_table, ZeroScan, ZeroUnfolding,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INVALID_INPUT: i32 = 2;
pub const EXIT_INSUFFICIENT_DATA: i32 = 3;
pub const EXIT_WARNING: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "fermikernel",
    version,
    about = "Free-fermion correlation kernels, GUE spectra and zeta zeros"
)]
pub struct Cli {
    /// Worker threads for the GUE sampler and the zero scan (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate K(r; nu) on a uniform grid.
    Kernel(KernelArgs),
    /// Tabulate the pair correlation 1 - K^2 in unfolded units.
    PaircorrTheory(PaircorrArgs),
    /// Sample GUE spectra and compare their pair correlation with the sine kernel.
    Gue(GueArgs),
    /// Locate (or load) zeta zeros and compare their pair correlation with the sine kernel.
    Zeta(ZetaArgs),
    /// Run the invariant suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum UnfoldingArg {
    Leading,
    Smooth,
}

impl From<UnfoldingArg> for ZeroUnfolding {
    fn from(u: UnfoldingArg) -> Self {
        match u {
            UnfoldingArg::Leading => ZeroUnfolding::Leading,
            UnfoldingArg::Smooth => ZeroUnfolding::Smooth,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct KernelArgs {
    #[arg(long)]
    pub nu: f64,
    #[arg(long = "kf")]
    pub k_f: f64,
    #[arg(long = "rmin", default_value_t = 0.0)]
    pub r_min: f64,
    #[arg(long = "rmax")]
    pub r_max: f64,
    #[arg(long = "n", default_value_t = 200)]
    pub n_points: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Destination file (default: standard output).
    #[arg(long, short)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PaircorrArgs {
    #[arg(long, default_value_t = 0.5)]
    pub nu: f64,
    #[arg(long = "wmax", default_value_t = 3.0)]
    pub w_max: f64,
    #[arg(long = "n", default_value_t = 301)]
    pub n_points: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, short)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GueArgs {
    #[arg(long = "n", default_value_t = 200)]
    pub matrix_size: usize,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long = "bulk", default_value_t = 0.5)]
    pub bulk_fraction: f64,
    #[arg(long = "wmax", default_value_t = 3.0)]
    pub w_max: f64,
    #[arg(long = "bin-width", default_value_t = 0.05)]
    pub bin_width: f64,
    /// Lower end of the window used for the reported distances.
    #[arg(long = "w-low", default_value_t = 0.25)]
    pub w_low: f64,
    #[arg(long = "w-high", default_value_t = 2.0)]
    pub w_high: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, short)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
    /// JSON report with distances and the configuration echo.
    #[arg(long)]
    #[serde(skip)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ZetaArgs {
    #[arg(long = "tmin")]
    pub t_min: Option<f64>,
    #[arg(long = "tmax")]
    pub t_max: Option<f64>,
    #[arg(long = "grid-step", default_value_t = 0.05)]
    pub grid_step: f64,
    #[arg(long = "refine-tol", default_value_t = 1e-8)]
    pub refine_tol: f64,
    /// Read zeros from a table instead of computing them.
    #[arg(long = "zeros-file")]
    pub zeros_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = UnfoldingArg::Leading)]
    pub unfolding: UnfoldingArg,
    #[arg(long = "wmax", default_value_t = 3.0)]
    pub w_max: f64,
    #[arg(long = "bin-width", default_value_t = 0.25)]
    pub bin_width: f64,
    #[arg(long = "w-low", default_value_t = 0.25)]
    pub w_low: f64,
    #[arg(long = "w-high", default_value_t = 1.5)]
    pub w_high: f64,
    /// Treat a counting-consistency warning as an error (exit 4).
    #[arg(long)]
    pub strict: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, short)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub report: Option<PathBuf>,
    /// Write the zero table used for the estimate.
    #[arg(long = "zeros-out")]
    #[serde(skip)]
    pub zeros_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long)]
    #[serde(skip)]
    pub report: Option<PathBuf>,
}

pub const DEFAULT_T_MIN: f64 = 10.0;
pub const DEFAULT_T_MAX: f64 = 500.0;

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_INVALID_INPUT
            } else {
                EXIT_OK
            };
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return EXIT_INVALID_INPUT;
        }
        builder = builder.num_threads(n);
    }
    let pool = match builder.build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID_INPUT;
        }
    };
    match pool.install(|| dispatch(&cli.command)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InsufficientData(_) => EXIT_INSUFFICIENT_DATA,
        _ => EXIT_INVALID_INPUT,
    }
}

fn dispatch(command: &Command) -> Result<i32> {
    match command {
        Command::Kernel(a) => cmd_kernel(a).map(|_| EXIT_OK),
        Command::PaircorrTheory(a) => cmd_paircorr_theory(a).map(|_| EXIT_OK),
        Command::Gue(a) => cmd_gue(a).map(|_| EXIT_OK),
        Command::Zeta(a) => cmd_zeta(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit_table(
    table: &Table,
    meta: &RunMetadata,
    format: Format,
    path: Option<&Path>,
) -> Result<()> {
    let mut out = open_output(path)?;
    match format {
        Format::Csv => table.write_csv(meta, &mut out)?,
        Format::Json => write_json(&table.to_json(meta), &mut out)?,
    }
    out.flush()?;
    Ok(())
}

fn grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if n == 0 || !(lo.is_finite() && hi.is_finite()) || hi < lo {
        return Err(Error::Domain(format!(
            "need n >= 1 and a finite range lo <= hi, got [{lo}, {hi}] with n = {n}"
        )));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    let step = (hi - lo) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
        .collect())
}

pub fn kernel_table(args: &KernelArgs) -> Result<Table> {
    let params = KernelParams::new(args.nu, args.k_f)?;
    if args.r_min < 0.0 {
        return Err(Error::Domain(format!(
            "r must be non-negative, got {}",
            args.r_min
        )));
    }
    let mut table = Table::new(&["r", "K"]);
    for r in grid(args.r_min, args.r_max, args.n_points)? {
        table.push(vec![r, kernel_value(&params, r)]);
    }
    Ok(table)
}

pub fn cmd_kernel(args: &KernelArgs) -> Result<()> {
    let table = kernel_table(args)?;
    emit_table(
        &table,
        &RunMetadata::new("kernel", args),
        args.format,
        args.output.as_deref(),
    )
}

pub fn paircorr_table(args: &PaircorrArgs) -> Result<Table> {
    KernelParams::new(args.nu, 1.0)?;
    let mut table = Table::new(&["w", "R2"]);
    for w in grid(0.0, args.w_max, args.n_points)? {
        table.push(vec![w, pair_correlation_theory(args.nu, w)?]);
    }
    Ok(table)
}

pub fn cmd_paircorr_theory(args: &PaircorrArgs) -> Result<()> {
    let table = paircorr_table(args)?;
    emit_table(
        &table,
        &RunMetadata::new("paircorr-theory", args),
        args.format,
        args.output.as_deref(),
    )
}

/// Binned estimate next to the bin-averaged theory curve.
fn estimate_table(est: &PairCorrelationEstimate, theory: &[f64]) -> Table {
    let mut table = Table::new(&["w_lo", "w_hi", "R2_est", "R2_theory", "pairs"]);
    for (k, value) in est.values.iter().enumerate() {
        table.push(vec![
            est.bin_edges[k],
            est.bin_edges[k + 1],
            *value,
            theory[k],
            est.pair_counts[k] as f64,
        ]);
    }
    table
}

/// Result of a pair-correlation run, as written to the JSON report.
#[derive(Debug, Clone, Serialize)]
pub struct PairReport {
    pub l_inf: f64,
    pub l2: f64,
    pub bins_compared: usize,
    pub n_points_used: u64,
    pub mean_spacing: f64,
    pub flagged_points: usize,
}

fn compare_with_sine(
    est: &PairCorrelationEstimate,
    w_low: f64,
    w_high: f64,
) -> Result<(Vec<f64>, f64, f64, usize)> {
    let theory = theory_on_bins(&est.bin_edges, |w| {
        pair_correlation_theory(0.5, w).unwrap_or(f64::NAN)
    });
    let d = curve_distance(est, &theory, w_low, w_high)?;
    Ok((theory, d.l_inf, d.l2, d.bins_compared))
}

pub fn run_gue(args: &GueArgs) -> Result<(Table, PairReport)> {
    let config = GueConfig::new(args.matrix_size, args.samples, args.seed)?;
    let seqs = sample_gue_spectrum(&config)
        .iter()
        .map(|sp| unfold_semicircle(sp, args.bulk_fraction))
        .collect::<Result<Vec<_>>>()?;
    let est = estimate_pooled(&seqs, args.w_max, args.bin_width)?;
    let (theory, l_inf, l2, bins_compared) = compare_with_sine(&est, args.w_low, args.w_high)?;
    let spacings: Vec<f64> = seqs.iter().filter_map(|s| s.mean_spacing()).collect();
    let report = PairReport {
        l_inf,
        l2,
        bins_compared,
        n_points_used: est.n_points_used,
        mean_spacing: spacings.iter().sum::<f64>() / spacings.len().max(1) as f64,
        flagged_points: seqs.iter().map(|s| s.flagged()).sum(),
    };
    Ok((estimate_table(&est, &theory), report))
}

pub fn cmd_gue(args: &GueArgs) -> Result<()> {
    let (table, report) = run_gue(args)?;
    let meta = RunMetadata::new("gue", json!({ "args": args, "rng": RNG_ALGORITHM }));
    emit_table(&table, &meta, args.format, args.output.as_deref())?;
    eprintln!(
        "gue: l_inf {:.4}, l2 {:.4} over {} bins",
        report.l_inf, report.l2, report.bins_compared
    );
    if let Some(path) = &args.report {
        write_json(
            &json!({ "metadata": meta, "result": report }),
            File::create(path)?,
        )?;
    }
    Ok(())
}

pub fn cmd_zeta(args: &ZetaArgs) -> Result<i32> {
    let (zeros, expected, warning) = match &args.zeros_file {
        Some(path) => {
            let all = load_zeros_file(path)?;
            let zeros = match (args.t_min, args.t_max) {
                (None, None) => all,
                (lo, hi) => {
                    all.window(lo.unwrap_or(f64::NEG_INFINITY), hi.unwrap_or(f64::INFINITY))
                }
            };
            (zeros, None, None)
        }
        None => {
            let scan = ZeroScan::new(
                args.t_min.unwrap_or(DEFAULT_T_MIN),
                args.t_max.unwrap_or(DEFAULT_T_MAX),
            )
            .grid_step(args.grid_step)
            .refine_tol(args.refine_tol);
            let started = Instant::now();
            let rep = find_zeros(&scan)?;
            eprintln!(
                "zeta: {} zeros in {:.1} s",
                rep.zeros.len(),
                started.elapsed().as_secs_f64()
            );
            (rep.zeros, Some(rep.expected_count), rep.warning)
        }
    };
    if let Some(w) = &warning {
        eprintln!("warning: {w}");
    }
    let mut resolved = args.clone();
    if args.zeros_file.is_none() {
        resolved.t_min = Some(args.t_min.unwrap_or(DEFAULT_T_MIN));
        resolved.t_max = Some(args.t_max.unwrap_or(DEFAULT_T_MAX));
    }
    let meta = RunMetadata::new("zeta", &resolved);
    if let Some(path) = &args.zeros_out {
        write_zero_table(
            &zeros,
            &meta.header_lines(),
            BufWriter::new(File::create(path)?),
        )?;
    }
    let unfolded = unfold_zeros_with(&zeros, args.unfolding.into())?;
    let est = estimate_pair_correlation(&unfolded, args.w_max, args.bin_width)?;
    let (theory, l_inf, l2, bins_compared) = compare_with_sine(&est, args.w_low, args.w_high)?;
    let report = PairReport {
        l_inf,
        l2,
        bins_compared,
        n_points_used: est.n_points_used,
        mean_spacing: unfolded.mean_spacing().unwrap_or(f64::NAN),
        flagged_points: unfolded.flagged(),
    };
    emit_table(
        &estimate_table(&est, &theory),
        &meta,
        args.format,
        args.output.as_deref(),
    )?;
    eprintln!(
        "zeta: l_inf {:.4}, l2 {:.4} over {} bins",
        report.l_inf, report.l2, report.bins_compared
    );
    if let Some(path) = &args.report {
        let body = json!({
            "metadata": meta,
            "provenance": zeros.provenance().to_string(),
            "zero_count": zeros.len(),
            "expected_count": expected,
            "warning": warning,
            "result": report,
        });
        write_json(&body, File::create(path)?)?;
    }
    Ok(if warning.is_some() && args.strict {
        EXIT_WARNING
    } else {
        EXIT_OK
    })
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<i32> {
    let suite: Suite = args.suite.parse()?;
    let started = Instant::now();
    let checks = run_suite(suite);
    for c in &checks {
        println!("{c}");
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    println!(
        "{} checks, {} failed, {:.1} s",
        checks.len(),
        failed,
        started.elapsed().as_secs_f64()
    );
    if let Some(path) = &args.report {
        let meta = RunMetadata::new("verify", args);
        write_json(
            &json!({ "metadata": meta, "checks": checks }),
            File::create(path)?,
        )?;
    }
    Ok(if failed == 0 {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}

/// Round-trip and determinism checks over the in-memory output paths.
pub(crate) fn self_checks() -> Vec<Check> {
    let s = Suite::Cli;
    let mut out = Vec::new();

    let args = KernelArgs {
        nu: 1.5,
        k_f: std::f64::consts::PI,
        r_min: 0.0,
        r_max: 3.0,
        n_points: 301,
        format: Format::Csv,
        output: None,
    };
    let table = kernel_table(&args).expect("valid kernel arguments");
    let meta = RunMetadata::new("kernel", &args);
    let mut buf = Vec::new();
    table.write_csv(&meta, &mut buf).expect("writing to memory");
    let csv_ok = Table::parse_csv(&String::from_utf8_lossy(&buf)).is_ok_and(|(_, t)| t == table);
    out.push(Check::holds_pub(
        s,
        "csv_round_trip",
        csv_ok,
        "kernel table, nu = 3/2",
    ));

    let json = table.to_json(&meta);
    let back: Option<Vec<Vec<f64>>> = serde_json::to_string(&json)
        .ok()
        .and_then(|text| serde_json::from_str::<serde_json::Value>(&text).ok())
        .and_then(|v| serde_json::from_value(v["rows"].clone()).ok());
    out.push(Check::holds_pub(
        s,
        "json_round_trip",
        back.as_ref() == Some(&table.rows),
        "kernel table rows",
    ));

    let gue = GueArgs {
        matrix_size: 120,
        samples: 4,
        seed: 17,
        bulk_fraction: 0.5,
        w_max: 3.0,
        bin_width: 0.25,
        w_low: 0.25,
        w_high: 2.0,
        format: Format::Csv,
        output: None,
        report: None,
    };
    let render = || -> Option<Vec<u8>> {
        let (table, _) = run_gue(&gue).ok()?;
        let mut buf = Vec::new();
        table
            .write_csv(&RunMetadata::new("gue", &gue), &mut buf)
            .ok()?;
        Some(buf)
    };
    let first = render();
    out.push(Check::holds_pub(
        s,
        "gue_output_deterministic",
        first.is_some() && first == render(),
        "same seed, byte-identical CSV",
    ));
    out
}
