//! Global and segmental SNR.

use serde::Serialize;

use crate::error::{param, Result};

/// Reported when the test signal equals the clean one exactly.
pub const SNR_CAP_DB: f64 = 100.0;
pub const SSNR_FLOOR_DB: f64 = -10.0;
pub const SSNR_CEIL_DB: f64 = 35.0;
pub const DEFAULT_SEGMENT_LEN: usize = 320;

fn check_pair(clean: &[f64], test: &[f64]) -> Result<()> {
    if clean.len() != test.len() {
        return Err(param(format!(
            "signals differ in length: {} vs {}",
            clean.len(),
            test.len()
        )));
    }
    if clean.iter().all(|&s| s == 0.0) {
        return Err(param("clean signal is identically zero"));
    }
    Ok(())
}

fn energies(clean: &[f64], test: &[f64]) -> (f64, f64) {
    clean.iter().zip(test).fold((0.0, 0.0), |(es, ee), (s, t)| {
        let e = s - t;
        (es + s * s, ee + e * e)
    })
}

/// `10 log₁₀(Σs² / Σ(s − t)²)`, capped at [`SNR_CAP_DB`].
pub fn global_snr_db(clean: &[f64], test: &[f64]) -> Result<f64> {
    check_pair(clean, test)?;
    let (signal, error) = energies(clean, test);
    if error == 0.0 {
        return Ok(SNR_CAP_DB);
    }
    Ok((10.0 * (signal / error).log10()).min(SNR_CAP_DB))
}

/// Mean of per-segment SNRs clamped to `[floor_db, ceil_db]`, over
/// non-overlapping segments whose clean energy is non-zero. A trailing
/// partial segment counts as a segment.
pub fn segmental_snr_db(clean: &[f64], test: &[f64], seg_len: usize, floor_db: f64, ceil_db: f64) -> Result<f64> {
    check_pair(clean, test)?;
    if seg_len == 0 {
        return Err(param("segment length must be positive"));
    }
    if floor_db > ceil_db {
        return Err(param("segment SNR floor exceeds ceiling"));
    }
    let mut total = 0.0;
    let mut count = 0usize;
    for (c, t) in clean.chunks(seg_len).zip(test.chunks(seg_len)) {
        let (signal, error) = energies(c, t);
        if signal == 0.0 {
            continue;
        }
        let snr = if error == 0.0 {
            ceil_db
        } else {
            (10.0 * (signal / error).log10()).clamp(floor_db, ceil_db)
        };
        total += snr;
        count += 1;
    }
    Ok(total / count as f64)
}

pub fn segmental_snr_default(clean: &[f64], test: &[f64]) -> Result<f64> {
    segmental_snr_db(clean, test, DEFAULT_SEGMENT_LEN, SSNR_FLOOR_DB, SSNR_CEIL_DB)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GainReport {
    pub input_snr_db: f64,
    pub output_snr_db: f64,
    pub snr_gain_db: f64,
    pub input_ssnr_db: f64,
    pub output_ssnr_db: f64,
    pub ssnr_gain_db: f64,
}

impl GainReport {
    pub fn from_levels(input_snr_db: f64, output_snr_db: f64, input_ssnr_db: f64, output_ssnr_db: f64) -> Self {
        Self {
            input_snr_db,
            output_snr_db,
            snr_gain_db: output_snr_db - input_snr_db,
            input_ssnr_db,
            output_ssnr_db,
            ssnr_gain_db: output_ssnr_db - input_ssnr_db,
        }
    }
}

pub fn gain_report(clean: &[f64], noisy: &[f64], denoised: &[f64]) -> Result<GainReport> {
    Ok(GainReport::from_levels(
        global_snr_db(clean, noisy)?,
        global_snr_db(clean, denoised)?,
        segmental_snr_default(clean, noisy)?,
        segmental_snr_default(clean, denoised)?,
    ))
}
