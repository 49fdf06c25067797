//! `riskshrink` command line.
//!
//! Exit codes: 0 success, 1 failed check or runtime failure, 2 usage or
//! configuration error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::audio_io::read_wav;
use crate::error::{Error, Result};
use crate::experiment::{curves, evaluate, parse_range, write_curves_csv, write_evaluation_csv, EvaluateOptions};
use crate::pipeline::{denoise_file, DenoiserConfig};
use crate::risk_lab::suite::{run_all, VerifyOptions};
use crate::risk_lab::DEFAULT_GRID_STEP;
use crate::shrinkage::{ShrinkageKind, DEFAULT_ALPHA};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "riskshrink",
    version,
    about = "Risk-optimal DCT shrinkage speech enhancement"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Denoise a 16-bit mono WAV file.
    Denoise(DenoiseArgs),
    /// Mix clean speech with noise, denoise and report SNR/SSNR gains as CSV.
    Evaluate(EvaluateArgs),
    /// Export gain curves against a-posteriori SNR as CSV.
    Curves(CurvesArgs),
    /// Run the numerical checks of the risk estimates.
    Verify(VerifyArgs),
}

/// Denoiser settings. Flags override `--config`, which overrides defaults.
#[derive(Debug, Default, Args)]
pub struct ConfigArgs {
    /// File of key=value lines.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Expected sample rate in Hz.
    #[arg(long)]
    pub sample_rate: Option<u32>,
    /// Analysis frame length in milliseconds.
    #[arg(long)]
    pub frame_ms: Option<f64>,
    /// Fraction of a frame shared with the next one.
    #[arg(long)]
    pub overlap: Option<f64>,
    /// Divisor applied to the a-posteriori SNR before the gain.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Smoothing weight of the inverse-SNR recursion.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Smoothing weight of the noise-variance update.
    #[arg(long)]
    pub eta: Option<f64>,
    /// Leading frames assumed to hold noise only.
    #[arg(long)]
    pub init_frames: Option<usize>,
    /// Speech is declared when the VAD statistic exceeds this.
    #[arg(long, allow_hyphen_values = true)]
    pub vad_threshold: Option<f64>,
    /// Frames a speech decision persists after the detector falls silent.
    #[arg(long)]
    pub vad_hangover: Option<usize>,
}

impl ConfigArgs {
    pub fn resolve(&self, kind: Option<ShrinkageKind>) -> Result<DenoiserConfig> {
        let mut cfg = DenoiserConfig::default();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            cfg.apply_kv(&text)?;
        }
        macro_rules! over {
            ($($flag:ident => $field:ident),*) => {$(
                if let Some(v) = self.$flag { cfg.$field = v; }
            )*};
        }
        over!(sample_rate => sample_rate, frame_ms => frame_ms, overlap => overlap_fraction,
              alpha => alpha, beta => beta, eta => eta, init_frames => init_noise_frames,
              vad_threshold => vad_threshold, vad_hangover => vad_hangover);
        if let Some(k) = kind {
            cfg.kind = k;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct DenoiseArgs {
    /// Noisy 16-bit mono input.
    #[arg(long = "in", value_name = "WAV")]
    pub input: PathBuf,
    /// Destination of the enhanced signal.
    #[arg(long = "out", value_name = "WAV")]
    pub output: PathBuf,
    /// mse, we, log-mse, is, is-ii, cosh or wcosh.
    #[arg(long)]
    pub kind: Option<ShrinkageKind>,
    #[command(flatten)]
    pub config: ConfigArgs,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Clean reference speech.
    #[arg(long, value_name = "WAV")]
    pub clean: PathBuf,
    /// Noise recording; white Gaussian noise when omitted.
    #[arg(long, value_name = "WAV")]
    pub noise: Option<PathBuf>,
    /// Comma-separated input SNRs in dB.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "10")]
    pub snr_list: Vec<f64>,
    /// Comma-separated kinds, or `all`.
    #[arg(long, default_value = "all")]
    pub kinds: String,
    /// Number of noise realisations per condition.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub seeds: u64,
    /// One row per seed instead of per-condition means.
    #[arg(long)]
    pub per_seed: bool,
    /// Destination CSV; stdout when omitted.
    #[arg(long, value_name = "CSV")]
    pub out_csv: Option<PathBuf>,
    #[command(flatten)]
    pub config: ConfigArgs,
}

#[derive(Debug, Args)]
pub struct CurvesArgs {
    /// START:STOP:STEP in dB, inclusive.
    #[arg(long, default_value = "-10:40:0.5", allow_hyphen_values = true)]
    pub xi_db_range: String,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    pub alpha: f64,
    #[arg(long, value_name = "CSV")]
    pub out_csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Monte Carlo draws per check.
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    /// Base seed; every check derives its own stream from it.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Step of the brute-force gain search, at most 0.1.
    #[arg(long, default_value_t = DEFAULT_GRID_STEP)]
    pub grid_step: f64,
}

pub fn parse_kinds(text: &str) -> Result<Vec<ShrinkageKind>> {
    if text.trim().eq_ignore_ascii_case("all") {
        return Ok(ShrinkageKind::ALL.to_vec());
    }
    text.split(',').map(|s| s.trim().parse()).collect()
}

fn output_sink(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn cmd_denoise(args: &DenoiseArgs) -> Result<i32> {
    let cfg = args.config.resolve(args.kind)?;
    let summary = denoise_file(&args.input, &args.output, &cfg)?;
    println!("{}", summary.to_json_line());
    Ok(EXIT_OK)
}

fn cmd_evaluate(args: &EvaluateArgs) -> Result<i32> {
    let base = args.config.resolve(None)?;
    let kinds = parse_kinds(&args.kinds)?;
    let clean = read_wav(&args.clean)?;
    let noise = args.noise.as_ref().map(read_wav).transpose()?;
    let opts = EvaluateOptions {
        label: args.clean.display().to_string(),
        snr_list: args.snr_list.clone(),
        kinds,
        seeds: args.seeds,
        per_seed: args.per_seed,
        base,
    };
    let rows = evaluate(&clean, noise.as_ref(), &opts)?;
    write_evaluation_csv(output_sink(&args.out_csv)?, &rows)?;
    Ok(EXIT_OK)
}

fn cmd_curves(args: &CurvesArgs) -> Result<i32> {
    let grid = parse_range(&args.xi_db_range)?;
    let rows = curves(&grid, args.alpha)?;
    write_curves_csv(output_sink(&args.out_csv)?, &rows)?;
    Ok(EXIT_OK)
}

fn cmd_verify(args: &VerifyArgs) -> Result<i32> {
    let opts = VerifyOptions {
        samples: args.samples as usize,
        seed: args.seed,
        grid_step: args.grid_step,
        ..VerifyOptions::default()
    };
    let rows = run_all(&opts)?;
    let width = rows.iter().map(|r| r.name.chars().count()).max().unwrap_or(0);
    let mut out = io::stdout().lock();
    writeln!(
        out,
        "{:<width$}  {:>16}  {:>16}  {:>12}  result",
        "check", "lhs", "rhs", "tolerance"
    )?;
    for r in &rows {
        writeln!(
            out,
            "{:<width$}  {:>16.9e}  {:>16.9e}  {:>12.3e}  {}",
            r.name,
            r.lhs,
            r.rhs,
            r.tolerance,
            if r.passed { "PASS" } else { "FAIL" }
        )?;
    }
    let failed = rows.iter().filter(|r| !r.passed).count();
    writeln!(out, "{} checks, {} failed", rows.len(), failed)?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILURE })
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::Parameter(_) => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

pub fn execute(cli: &Cli) -> i32 {
    let result = match &cli.command {
        Command::Denoise(a) => cmd_denoise(a),
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::Curves(a) => cmd_curves(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("riskshrink: {e}");
            exit_code_for(&e)
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_OK
            }
        }
    }
}
