//! Batch evaluation and gain-curve export.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::audio_io::{generate_white_noise, mix_at_snr, AudioBuffer};
use crate::error::{param, Result};
use crate::metrics::{gain_report, GainReport};
use crate::pipeline::{Denoiser, DenoiserConfig};
use crate::shrinkage::{gain, GainRequest, ShrinkageKind};

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluateOptions {
    /// Label written to the `file` column.
    pub label: String,
    pub snr_list: Vec<f64>,
    pub kinds: Vec<ShrinkageKind>,
    /// Realisations `0..seeds` are run per condition.
    pub seeds: u64,
    /// Emit one row per seed instead of per-condition means.
    pub per_seed: bool,
    pub base: DenoiserConfig,
}

impl EvaluateOptions {
    pub fn new(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            snr_list: vec![10.0],
            kinds: ShrinkageKind::ALL.to_vec(),
            seeds: 1,
            per_seed: false,
            base: DenoiserConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationRow {
    pub file: String,
    pub snr_db: f64,
    pub kind: ShrinkageKind,
    pub alpha: f64,
    /// Seed of the row, or the number of seeds averaged.
    pub seeds: u64,
    pub input_snr_db: f64,
    pub output_snr_db: f64,
    pub snr_gain_db: f64,
    pub input_ssnr_db: f64,
    pub output_ssnr_db: f64,
    pub ssnr_gain_db: f64,
}

impl EvaluationRow {
    fn new(opts: &EvaluateOptions, snr_db: f64, kind: ShrinkageKind, seeds: u64, r: &GainReport) -> Self {
        Self {
            file: opts.label.clone(),
            snr_db,
            kind,
            alpha: opts.base.alpha,
            seeds,
            input_snr_db: r.input_snr_db,
            output_snr_db: r.output_snr_db,
            snr_gain_db: r.snr_gain_db,
            input_ssnr_db: r.input_ssnr_db,
            output_ssnr_db: r.output_ssnr_db,
            ssnr_gain_db: r.ssnr_gain_db,
        }
    }
}

fn mean_report(reports: &[GainReport]) -> GainReport {
    let n = reports.len() as f64;
    let avg = |f: fn(&GainReport) -> f64| reports.iter().map(f).sum::<f64>() / n;
    GainReport::from_levels(
        avg(|r| r.input_snr_db),
        avg(|r| r.output_snr_db),
        avg(|r| r.input_ssnr_db),
        avg(|r| r.output_ssnr_db),
    )
}

fn noisy_mixture(clean: &AudioBuffer, noise: Option<&AudioBuffer>, snr_db: f64, seed: u64) -> Result<AudioBuffer> {
    let generated;
    let noise = match noise {
        Some(n) => n,
        None => {
            generated = generate_white_noise(clean.len(), 1.0, seed, clean.sample_rate)?;
            &generated
        }
    };
    Ok(mix_at_snr(clean, noise, snr_db, seed)?.0)
}

/// Mixes `clean` with `noise` (white Gaussian noise when absent) at every
/// SNR and seed, denoises with every kind and reports SNR/SSNR levels.
///
/// Rows are ordered by SNR list order, then kind order, then seed, and are
/// identical whatever the thread count.
pub fn evaluate(
    clean: &AudioBuffer,
    noise: Option<&AudioBuffer>,
    opts: &EvaluateOptions,
) -> Result<Vec<EvaluationRow>> {
    if opts.snr_list.is_empty() || opts.kinds.is_empty() {
        return Err(param("evaluation needs at least one SNR and one kind"));
    }
    if opts.seeds == 0 {
        return Err(param("evaluation needs at least one seed"));
    }
    if clean.sample_rate != opts.base.sample_rate {
        return Err(crate::error::config(format!(
            "clean signal is sampled at {} Hz but the configuration expects {} Hz",
            clean.sample_rate, opts.base.sample_rate
        )));
    }

    let mixtures: Vec<(f64, u64, AudioBuffer)> = opts
        .snr_list
        .iter()
        .flat_map(|&snr| (0..opts.seeds).map(move |seed| (snr, seed)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(snr, seed)| Ok((snr, seed, noisy_mixture(clean, noise, snr, seed)?)))
        .collect::<Result<_>>()?;

    let denoisers: Vec<Denoiser> = opts
        .kinds
        .iter()
        .map(|&kind| {
            Denoiser::new(DenoiserConfig {
                kind,
                ..opts.base.clone()
            })
        })
        .collect::<Result<_>>()?;

    let jobs: Vec<(usize, usize)> = (0..opts.snr_list.len() * opts.seeds as usize)
        .flat_map(|m| (0..denoisers.len()).map(move |k| (m, k)))
        .collect();
    let reports: Vec<GainReport> = jobs
        .par_iter()
        .map(|&(m, k)| {
            let noisy = &mixtures[m].2;
            let out = denoisers[k].process(&noisy.samples)?;
            gain_report(&clean.samples, &noisy.samples, &out.samples)
        })
        .collect::<Result<_>>()?;

    let seeds = opts.seeds as usize;
    let kinds = denoisers.len();
    let report_at = |snr_idx: usize, seed: usize, k: usize| &reports[(snr_idx * seeds + seed) * kinds + k];
    let mut rows = Vec::new();
    for (si, &snr) in opts.snr_list.iter().enumerate() {
        for (k, &kind) in opts.kinds.iter().enumerate() {
            if opts.per_seed {
                for seed in 0..seeds {
                    rows.push(EvaluationRow::new(opts, snr, kind, seed as u64, report_at(si, seed, k)));
                }
            } else {
                let group: Vec<GainReport> = (0..seeds).map(|seed| *report_at(si, seed, k)).collect();
                rows.push(EvaluationRow::new(opts, snr, kind, opts.seeds, &mean_report(&group)));
            }
        }
    }
    Ok(rows)
}

pub fn write_evaluation_csv<W: Write>(out: W, rows: &[EvaluationRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Parses `START:STOP:STEP` into an inclusive grid.
pub fn parse_range(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let [start, stop, step] = parts.as_slice() else {
        return Err(param(format!("expected START:STOP:STEP, got '{text}'")));
    };
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| param(format!("'{s}' is not a number")))
    };
    linear_grid(num(start)?, num(stop)?, num(step)?)
}

pub fn linear_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) || step <= 0.0 || stop < start {
        return Err(param(format!("invalid range {start}:{stop}:{step}")));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + i as f64 * step).collect())
}

/// One row per grid point: the a-posteriori SNR in dB, then the gain of
/// every kind in [`ShrinkageKind::ALL`] order.
pub fn curves(xi_db: &[f64], alpha: f64) -> Result<Vec<(f64, Vec<f64>)>> {
    xi_db
        .iter()
        .map(|&db| {
            let req = GainRequest::new(10f64.powf(db / 10.0), alpha)?;
            Ok((db, ShrinkageKind::ALL.iter().map(|&k| gain(k, req)).collect()))
        })
        .collect()
}

pub fn write_curves_csv<W: Write>(out: W, rows: &[(f64, Vec<f64>)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["xi_db".to_string()];
    header.extend(ShrinkageKind::ALL.iter().map(|k| k.name().to_string()));
    w.write_record(&header)?;
    for (db, gains) in rows {
        let mut rec = vec![db.to_string()];
        rec.extend(gains.iter().map(|g| format!("{g:?}")));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
