//! The full battery of numerical checks behind `riskshrink verify`.

use rand::Rng;
use serde::Serialize;

use super::montecarlo::{high_snr_event_check, unbiasedness_report, SyntheticScene};
use super::oracle::{oracle_argmin, DEFAULT_GRID_STEP, MAX_GRID_STEP};
use super::stein::{generalized_stein_check_on, stein_check_on, IdentityCheck, TestFunction};
use super::truncated::{lab_rng, sample_truncated_gaussian, TruncatedGaussianSpec};
use crate::error::{param, Result};
use crate::shrinkage::{gain, GainRequest, ShrinkageKind};

pub const STEIN_SIGMAS: [f64; 3] = [0.5, 1.0, 2.0];
pub const TRUNCATION: f64 = 5.0;
/// Smallest a-posteriori SNR used for the closed-form/oracle comparison.
pub const ORACLE_MIN_XI: f64 = 25.0;
/// Signal-to-noise amplitude ratios of the unbiasedness scenes (`|S|/σ`).
pub const UNBIASED_RATIOS: [f64; 2] = [25.0, -40.0];
pub const UNBIASED_REL_TOL: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub samples: usize,
    pub seed: u64,
    pub grid_step: f64,
    pub oracle_scenes: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            samples: 1_000_000,
            seed: 0,
            grid_step: DEFAULT_GRID_STEP,
            oracle_scenes: 200,
        }
    }
}

impl VerifyOptions {
    fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(param("sample count must be positive"));
        }
        if !(self.grid_step > 0.0 && self.grid_step <= MAX_GRID_STEP) {
            return Err(param(format!("grid step must lie in (0, {MAX_GRID_STEP}]")));
        }
        Ok(())
    }
}

/// One row of the verification table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckOutcome {
    fn from_identity(name: String, c: &IdentityCheck) -> Self {
        Self {
            name,
            lhs: c.lhs,
            rhs: c.rhs,
            tolerance: c.tolerance(),
            passed: c.passes(),
        }
    }
}

/// First-order and generalized Stein identities for every catalog function.
pub fn stein_checks(opts: &VerifyOptions) -> Result<Vec<CheckOutcome>> {
    opts.validate()?;
    let mut out = Vec::new();
    for (i, &sigma) in STEIN_SIGMAS.iter().enumerate() {
        let spec = TruncatedGaussianSpec::new(sigma, TRUNCATION)?;
        let samples = sample_truncated_gaussian(&spec, opts.samples, opts.seed.wrapping_add(i as u64));
        for f in TestFunction::ALL {
            let c = stein_check_on(&samples, f, &spec);
            out.push(CheckOutcome::from_identity(format!("stein[σ={sigma}] {f}"), &c));
            for order in 1..=4 {
                let c = generalized_stein_check_on(&samples, f, order, &spec)?;
                out.push(CheckOutcome::from_identity(
                    format!("stein-gen[σ={sigma},n={order}] {f}"),
                    &c,
                ));
            }
        }
    }
    Ok(out)
}

/// Random high-SNR observation `(X, σ, sign S)` with `X²/σ² ≥ ORACLE_MIN_XI`.
fn random_scene<R: Rng>(rng: &mut R) -> (f64, f64, f64) {
    let sigma = 10f64.powf(rng.random_range(-1.0..1.0));
    let xi = ORACLE_MIN_XI * 10f64.powf(rng.random_range(0.0..3.0));
    let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    (sign * sigma * xi.sqrt(), sigma, sign)
}

/// Largest gap between the closed-form gain and the grid optimum of the
/// risk estimate, per measure.
pub fn oracle_checks(opts: &VerifyOptions) -> Result<Vec<CheckOutcome>> {
    opts.validate()?;
    let tolerance = opts.grid_step + 1e-6;
    let mut out = Vec::new();
    for (k, kind) in ShrinkageKind::ALL.into_iter().enumerate() {
        let mut rng = lab_rng(opts.seed.wrapping_add(1000 + k as u64));
        let mut worst = 0.0f64;
        let mut worst_gain = 1.0;
        for _ in 0..opts.oracle_scenes {
            let (x, sigma, sign) = random_scene(&mut rng);
            let closed = gain(kind, GainRequest::new(x * x / (sigma * sigma), 1.0)?);
            let grid = oracle_argmin(kind, x, sigma, sign, opts.grid_step)?;
            let gap = (closed - grid).abs();
            if gap >= worst {
                worst = gap;
                worst_gain = closed;
            }
        }
        out.push(CheckOutcome {
            name: format!("oracle[{kind}] max |closed − grid| (gain {worst_gain:.6})"),
            lhs: worst,
            rhs: 0.0,
            tolerance,
            passed: worst <= tolerance,
        });
    }
    Ok(out)
}

/// Mean risk estimate against mean true distortion on high-SNR scenes.
pub fn unbiasedness_checks(opts: &VerifyOptions) -> Result<Vec<CheckOutcome>> {
    opts.validate()?;
    let spec = TruncatedGaussianSpec::new(1.0, TRUNCATION)?;
    let mut out = Vec::new();
    for (k, kind) in ShrinkageKind::ALL.into_iter().enumerate() {
        for (j, &ratio) in UNBIASED_RATIOS.iter().enumerate() {
            let scene = SyntheticScene::new(ratio * spec.sigma(), spec)?;
            let xi = ratio * ratio;
            for a in [0.9, gain(kind, GainRequest::new(xi, 1.0)?)] {
                let seed = opts.seed.wrapping_add(2000 + 10 * k as u64 + j as u64);
                let rep = unbiasedness_report(kind, a, &scene, opts.samples, seed)?;
                let (rel, abs) = if kind == ShrinkageKind::Mse {
                    (0.0, spec.stein_slack())
                } else {
                    (UNBIASED_REL_TOL, 0.0)
                };
                out.push(CheckOutcome {
                    name: format!("unbiased[{kind}] S={} a={a:.6}", scene.signal),
                    lhs: rep.mean_true,
                    rhs: rep.mean_estimate,
                    tolerance: rep.tolerance(rel, abs),
                    passed: rep.within(rel, abs),
                });
            }
        }
    }
    Ok(out)
}

/// `Prob{|W| < |X|} = 1` whenever `|S| > 2cσ`.
pub fn high_snr_checks(opts: &VerifyOptions) -> Result<Vec<CheckOutcome>> {
    opts.validate()?;
    let spec = TruncatedGaussianSpec::new(1.0, TRUNCATION)?;
    let mut out = Vec::new();
    for (i, s) in [11.0, -10.5].into_iter().enumerate() {
        let scene = SyntheticScene::new(s, spec)?;
        let frac = high_snr_event_check(&scene, opts.samples, opts.seed.wrapping_add(3000 + i as u64));
        out.push(CheckOutcome {
            name: format!("high-snr event S={s}"),
            lhs: frac,
            rhs: 1.0,
            tolerance: 0.0,
            passed: frac == 1.0,
        });
    }
    Ok(out)
}

pub fn run_all(opts: &VerifyOptions) -> Result<Vec<CheckOutcome>> {
    let mut out = stein_checks(opts)?;
    out.extend(oracle_checks(opts)?);
    out.extend(unbiasedness_checks(opts)?);
    out.extend(high_snr_checks(opts)?);
    Ok(out)
}
