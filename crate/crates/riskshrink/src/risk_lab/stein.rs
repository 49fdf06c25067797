use std::fmt;
use std::str::FromStr;

use super::stats::McStats;
use super::truncated::{sample_truncated_gaussian, TruncatedGaussianSpec};
use crate::error::{param, Result};

/// Catalog of smooth test functions with known derivatives.
///
/// The rational entries are shifted by `10cσ` so their poles sit well
/// outside the support of the truncated noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TestFunction {
    One,
    Linear,
    Quadratic,
    Cubic,
    Quartic,
    /// `0.5w⁴ − w³ + 2w − 3`
    MixedQuartic,
    /// `1 / (w + 10cσ)`
    ShiftedReciprocal,
    /// `1 / (w + 10cσ)²`
    ShiftedReciprocalSquared,
}

impl TestFunction {
    pub const ALL: [TestFunction; 8] = [
        TestFunction::One,
        TestFunction::Linear,
        TestFunction::Quadratic,
        TestFunction::Cubic,
        TestFunction::Quartic,
        TestFunction::MixedQuartic,
        TestFunction::ShiftedReciprocal,
        TestFunction::ShiftedReciprocalSquared,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TestFunction::One => "one",
            TestFunction::Linear => "w",
            TestFunction::Quadratic => "w^2",
            TestFunction::Cubic => "w^3",
            TestFunction::Quartic => "w^4",
            TestFunction::MixedQuartic => "mixed-quartic",
            TestFunction::ShiftedReciprocal => "recip-shift",
            TestFunction::ShiftedReciprocalSquared => "recip-sq-shift",
        }
    }

    /// Returns `(f(w), f'(w))`.
    pub fn eval(self, w: f64, spec: &TruncatedGaussianSpec) -> (f64, f64) {
        match self {
            TestFunction::One => (1.0, 0.0),
            TestFunction::Linear => (w, 1.0),
            TestFunction::Quadratic => (w * w, 2.0 * w),
            TestFunction::Cubic => (w * w * w, 3.0 * w * w),
            TestFunction::Quartic => (w * w * w * w, 4.0 * w * w * w),
            TestFunction::MixedQuartic => {
                let w2 = w * w;
                (0.5 * w2 * w2 - w2 * w + 2.0 * w - 3.0, 2.0 * w2 * w - 3.0 * w2 + 2.0)
            }
            TestFunction::ShiftedReciprocal => {
                let d = w + 10.0 * spec.bound();
                (1.0 / d, -1.0 / (d * d))
            }
            TestFunction::ShiftedReciprocalSquared => {
                let d = w + 10.0 * spec.bound();
                (1.0 / (d * d), -2.0 / (d * d * d))
            }
        }
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TestFunction {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        TestFunction::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| param(format!("unknown test function '{s}'")))
    }
}

/// Both sides of a Stein-type identity estimated on the same draws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    /// Standard error of the paired per-draw difference `lhs_i − rhs_i`.
    pub stderr: f64,
    /// Truncation allowance, `exp(−c²)`.
    pub slack: f64,
}

impl IdentityCheck {
    pub fn tolerance(&self) -> f64 {
        3.0 * self.stderr + self.slack
    }

    pub fn passes(&self) -> bool {
        (self.lhs - self.rhs).abs() <= self.tolerance()
    }
}

fn check_from<I>(pairs: I, spec: &TruncatedGaussianSpec) -> IdentityCheck
where
    I: Iterator<Item = (f64, f64)>,
{
    let mut lhs = McStats::new();
    let mut rhs = McStats::new();
    let mut diff = McStats::new();
    for (l, r) in pairs {
        lhs.push(l);
        rhs.push(r);
        diff.push(l - r);
    }
    IdentityCheck {
        lhs: lhs.mean(),
        rhs: rhs.mean(),
        stderr: diff.stderr(),
        slack: spec.stein_slack(),
    }
}

/// `E{W f(W)}` against `σ² E{f'(W)}` on pre-drawn noise.
pub fn stein_check_on(samples: &[f64], f: TestFunction, spec: &TruncatedGaussianSpec) -> IdentityCheck {
    let s2 = spec.sigma() * spec.sigma();
    check_from(
        samples.iter().map(|&w| {
            let (fw, dfw) = f.eval(w, spec);
            (w * fw, s2 * dfw)
        }),
        spec,
    )
}

/// `E{Wⁿ⁺¹ f(W)}` against `σ² E{f'(W) Wⁿ} + nσ² E{f(W) Wⁿ⁻¹}` on pre-drawn noise.
pub fn generalized_stein_check_on(
    samples: &[f64],
    f: TestFunction,
    order: u32,
    spec: &TruncatedGaussianSpec,
) -> Result<IdentityCheck> {
    if !(1..=4).contains(&order) {
        return Err(param(format!("order must be in 1..=4, got {order}")));
    }
    let s2 = spec.sigma() * spec.sigma();
    let n = order as i32;
    Ok(check_from(
        samples.iter().map(|&w| {
            let (fw, dfw) = f.eval(w, spec);
            let wn = w.powi(n);
            let lhs = wn * w * fw;
            let rhs = s2 * dfw * wn + s2 * f64::from(order) * fw * w.powi(n - 1);
            (lhs, rhs)
        }),
        spec,
    ))
}

pub fn stein_identity_check(
    f: TestFunction,
    spec: &TruncatedGaussianSpec,
    n_samples: usize,
    seed: u64,
) -> IdentityCheck {
    let samples = sample_truncated_gaussian(spec, n_samples, seed);
    stein_check_on(&samples, f, spec)
}

pub fn generalized_stein_check(
    f: TestFunction,
    order: u32,
    spec: &TruncatedGaussianSpec,
    n_samples: usize,
    seed: u64,
) -> Result<IdentityCheck> {
    if !(1..=4).contains(&order) {
        return Err(param(format!("order must be in 1..=4, got {order}")));
    }
    let samples = sample_truncated_gaussian(spec, n_samples, seed);
    generalized_stein_check_on(&samples, f, order, spec)
}
