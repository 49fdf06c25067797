//! Per-bin noise variance, VAD gating and the recursive inverse
//! a-posteriori SNR.
//!
//! The tracker state is a plain value: each update consumes the previous
//! state and returns the next one. A stream's frames must be fed in order.

use crate::dsp::DctFrame;
use crate::error::{config, Result};

pub const DEFAULT_INIT_FRAMES: usize = 10;
pub const DEFAULT_BETA: f64 = 0.98;
pub const DEFAULT_ETA: f64 = 0.98;
pub const DEFAULT_VAD_THRESHOLD: f64 = 0.15;
pub const DEFAULT_VAD_HANGOVER: usize = 2;

/// Weight of the previous enhanced frame in the VAD's prior SNR.
const VAD_PRIOR_WEIGHT: f64 = 0.98;
const VAD_GAMMA_CAP: f64 = 1e6;

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseTrackerState {
    /// `σ̂²_k(i)`
    pub noise_var: Vec<f64>,
    /// `Ŝ_k(i−1)`
    pub prev_denoised: Vec<f64>,
    /// `X_k(i−1)`
    pub prev_noisy: Vec<f64>,
    /// `1/ξ̂_k(i)`; `+∞` on bins whose observation is exactly zero.
    pub inv_xi: Vec<f64>,
    pub frames_seen: usize,
    /// Prior SNR the VAD used on the last frame.
    pub prior_snr_vad: Vec<f64>,
}

impl NoiseTrackerState {
    pub fn num_bins(&self) -> usize {
        self.noise_var.len()
    }

    /// A-posteriori SNR `ξ̂ = 1/inv_xi` per bin.
    pub fn xi(&self) -> Vec<f64> {
        self.inv_xi.iter().map(|&v| 1.0 / v).collect()
    }

    /// Stores the current frame and its enhanced version for the next recursion step.
    pub fn record(mut self, noisy: &DctFrame, denoised: &DctFrame) -> Self {
        self.prev_noisy.clone_from(&noisy.coeffs);
        self.prev_denoised.clone_from(&denoised.coeffs);
        self.frames_seen += 1;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    /// Noise only.
    H0,
    /// Speech present.
    H1,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VadDecision {
    pub hypothesis: Hypothesis,
    pub statistic: f64,
}

/// Builds the initial state from frames assumed to hold noise only.
pub fn initialize(first_frames: &[DctFrame], init_count: usize) -> Result<NoiseTrackerState> {
    if init_count == 0 {
        return Err(config("at least one initialisation frame is required"));
    }
    if first_frames.len() < init_count {
        return Err(config(format!(
            "need {init_count} initialisation frames, got {}",
            first_frames.len()
        )));
    }
    let bins = first_frames[0].len();
    if first_frames[..init_count].iter().any(|f| f.len() != bins) {
        return Err(config("initialisation frames differ in length"));
    }
    let mut noise_var = vec![0.0; bins];
    for frame in &first_frames[..init_count] {
        for (v, x) in noise_var.iter_mut().zip(&frame.coeffs) {
            *v += x * x;
        }
    }
    for v in &mut noise_var {
        *v /= init_count as f64;
    }
    // β = 1 on the first frame: plain a-posteriori SNR
    let inv_xi = noise_var
        .iter()
        .zip(&first_frames[0].coeffs)
        .map(|(&v, &x)| inv_ratio(v, x * x))
        .collect();
    Ok(NoiseTrackerState {
        noise_var,
        prev_denoised: vec![0.0; bins],
        prev_noisy: vec![0.0; bins],
        inv_xi,
        frames_seen: 0,
        prior_snr_vad: vec![0.0; bins],
    })
}

/// `v / x2`, with a zero observation mapped to `+∞` (gain 0 downstream).
fn inv_ratio(v: f64, x2: f64) -> f64 {
    if x2 == 0.0 {
        f64::INFINITY
    } else {
        v / x2
    }
}

/// Gaussian likelihood-ratio statistic averaged over bins, with a
/// decision-directed prior SNR. Bins with zero noise variance are skipped.
pub fn vad_statistic(frame: &DctFrame, state: &NoiseTrackerState) -> (f64, Vec<f64>) {
    let mut sum = 0.0;
    let mut used = 0usize;
    let mut priors = vec![0.0; frame.len()];
    for (k, &x) in frame.coeffs.iter().enumerate() {
        let var = state.noise_var[k];
        if !(var > 0.0) {
            continue;
        }
        let gamma = (x * x / var).min(VAD_GAMMA_CAP);
        let prev = state.prev_denoised[k];
        let rho = VAD_PRIOR_WEIGHT * (prev * prev / var).min(VAD_GAMMA_CAP)
            + (1.0 - VAD_PRIOR_WEIGHT) * (gamma - 1.0).max(0.0);
        priors[k] = rho;
        sum += gamma * rho / (1.0 + rho) - rho.ln_1p();
        used += 1;
    }
    let stat = if used == 0 { 0.0 } else { sum / used as f64 };
    (stat, priors)
}

pub fn vad(frame: &DctFrame, state: &NoiseTrackerState, threshold: f64) -> VadDecision {
    let (statistic, _) = vad_statistic(frame, state);
    VadDecision {
        hypothesis: if statistic > threshold {
            Hypothesis::H1
        } else {
            Hypothesis::H0
        },
        statistic,
    }
}

/// Like [`vad`], also recording the prior SNR in the state.
pub fn vad_update(frame: &DctFrame, state: NoiseTrackerState, threshold: f64) -> (VadDecision, NoiseTrackerState) {
    let (statistic, priors) = vad_statistic(frame, &state);
    let decision = VadDecision {
        hypothesis: if statistic > threshold {
            Hypothesis::H1
        } else {
            Hypothesis::H0
        },
        statistic,
    };
    (
        decision,
        NoiseTrackerState {
            prior_snr_vad: priors,
            ..state
        },
    )
}

/// Keeps speech decisions alive for a few frames after the last raw H1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Hangover {
    frames: usize,
    remaining: usize,
}

impl Hangover {
    pub fn new(frames: usize) -> Self {
        Self { frames, remaining: 0 }
    }

    pub fn apply(&mut self, raw: VadDecision) -> VadDecision {
        match raw.hypothesis {
            Hypothesis::H1 => {
                self.remaining = self.frames;
                raw
            }
            Hypothesis::H0 if self.remaining > 0 => {
                self.remaining -= 1;
                VadDecision {
                    hypothesis: Hypothesis::H1,
                    ..raw
                }
            }
            Hypothesis::H0 => raw,
        }
    }
}

/// Exponential noise-variance update, applied on noise-only frames.
pub fn update_noise(
    frame: &DctFrame,
    decision: VadDecision,
    mut state: NoiseTrackerState,
    eta: f64,
) -> NoiseTrackerState {
    if decision.hypothesis == Hypothesis::H0 {
        for (v, x) in state.noise_var.iter_mut().zip(&frame.coeffs) {
            *v = eta * *v + (1.0 - eta) * x * x;
        }
    }
    state
}

/// `1/ξ̂(i) = β σ̂²(i)/X²(i) + (1 − β) max(1 − Ŝ²(i−1)/X²(i−1), 0)`.
///
/// A zero `X(i−1)` counts as a frame without signal, so its second term is `1 − β`.
pub fn update_inv_xi(frame: &DctFrame, mut state: NoiseTrackerState, beta: f64) -> NoiseTrackerState {
    for k in 0..frame.len() {
        let x = frame.coeffs[k];
        let direct = inv_ratio(state.noise_var[k], x * x);
        if direct.is_infinite() {
            state.inv_xi[k] = f64::INFINITY;
            continue;
        }
        let prev_x = state.prev_noisy[k];
        let prev_s = state.prev_denoised[k];
        let retained = if prev_x == 0.0 {
            1.0
        } else {
            (1.0 - (prev_s * prev_s) / (prev_x * prev_x)).max(0.0)
        };
        state.inv_xi[k] = beta * direct + (1.0 - beta) * retained;
    }
    state
}
