use super::estimate::risk_estimate;
use crate::error::{param, Result};
use crate::shrinkage::ShrinkageKind;

pub const DEFAULT_GRID_STEP: f64 = 1e-4;
pub const MAX_GRID_STEP: f64 = 0.1;

/// Brute-force optimum of the risk estimate over `a ∈ {0, h, 2h, …, 1}`.
///
/// Minimises `R̂`, except for the signed measures (WE, WCOSH) with a
/// negative signal, whose estimate is maximised. Ties go to the smaller `a`.
pub fn oracle_argmin(kind: ShrinkageKind, x: f64, sigma: f64, sign_of_s: f64, grid_step: f64) -> Result<f64> {
    if !(grid_step > 0.0 && grid_step <= MAX_GRID_STEP) {
        return Err(param(format!(
            "grid step must lie in (0, {MAX_GRID_STEP}], got {grid_step}"
        )));
    }
    if sign_of_s == 0.0 || sign_of_s.is_nan() {
        return Err(param("sign of S must be ±1"));
    }
    let maximise = kind.is_signed() && sign_of_s < 0.0;
    let steps = (1.0 / grid_step - 1e-9).ceil() as usize;

    let mut best_a = 0.0;
    let mut best = f64::NAN;
    for i in 0..=steps {
        let a = (i as f64 * grid_step).min(1.0);
        let v = risk_estimate(kind, a, x, sigma, None)?.value;
        let score = if maximise { -v } else { v };
        if best.is_nan() || score < best {
            best = score;
            best_a = a;
        }
    }
    Ok(best_a)
}
