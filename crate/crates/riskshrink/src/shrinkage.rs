//! Closed-form risk-optimal gains.
//!
//! Every gain is a function of the effective a-posteriori SNR `ξ' = ξ/α`.
//! Formulas are written in terms of `u = 1/ξ'` and evaluated in Horner form
//! so that tiny `ξ` overflows cleanly to a gain of zero instead of `NaN`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dsp::DctFrame;
use crate::error::{param, Result};

/// Default parametric factor, shared by all measures.
pub const DEFAULT_ALPHA: f64 = 1.75;

/// Distortion measure whose risk estimate a gain minimises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShrinkageKind {
    /// Squared error.
    Mse,
    /// Weighted Euclidean, `(Ŝ − S)² / S`.
    We,
    /// Squared log ratio.
    LogMse,
    /// Itakura-Saito between amplitudes.
    Is,
    /// Itakura-Saito between powers.
    IsII,
    /// Hyperbolic cosine of the log ratio.
    Cosh,
    /// Hyperbolic cosine weighted by `1/S`.
    Wcosh,
}

impl ShrinkageKind {
    pub const ALL: [ShrinkageKind; 7] = [
        ShrinkageKind::Mse,
        ShrinkageKind::We,
        ShrinkageKind::LogMse,
        ShrinkageKind::Is,
        ShrinkageKind::IsII,
        ShrinkageKind::Cosh,
        ShrinkageKind::Wcosh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ShrinkageKind::Mse => "mse",
            ShrinkageKind::We => "we",
            ShrinkageKind::LogMse => "log-mse",
            ShrinkageKind::Is => "is",
            ShrinkageKind::IsII => "is-ii",
            ShrinkageKind::Cosh => "cosh",
            ShrinkageKind::Wcosh => "wcosh",
        }
    }

    /// Measures whose distortion carries the sign of `S`, so the risk is
    /// maximised rather than minimised when `S < 0`.
    pub fn is_signed(self) -> bool {
        matches!(self, ShrinkageKind::We | ShrinkageKind::Wcosh)
    }

    /// Gain at unit `α` for an effective SNR `ξ' ≥ 0`. `ξ' = 0` yields 0.
    pub fn gain_at(self, xi_eff: f64) -> f64 {
        if !(xi_eff > 0.0) {
            return 0.0;
        }
        let u = 1.0 / xi_eff;
        let g = match self {
            ShrinkageKind::Mse => (1.0 - u).max(0.0),
            ShrinkageKind::We => 1.0 / (1.0 + u * (1.0 + u * (-1.0 + u * (48.0 + 360.0 * u)))),
            ShrinkageKind::LogMse => {
                let exponent = u * (0.5 + u * (-0.75 + u * (-10.0 - 210.0 * u)));
                exponent.exp().min(1.0)
            }
            ShrinkageKind::Is => 1.0 / (1.0 + u * u * u * (60.0 + 840.0 * u)),
            ShrinkageKind::IsII => {
                let p = 1.0 + u * (1.0 + u * (-3.0 + u * (360.0 + 4200.0 * u)));
                p.sqrt().recip().min(1.0)
            }
            ShrinkageKind::Cosh => {
                let num = 1.0 + u;
                let den = 1.0 + u * u * u * (60.0 + 840.0 * u);
                if den.is_infinite() {
                    0.0
                } else {
                    (num / den).sqrt().min(1.0)
                }
            }
            ShrinkageKind::Wcosh => {
                let p = 1.0 + u * (-1.0 + u * (3.0 + u * (420.0 + 8400.0 * u)));
                p.sqrt().recip().min(1.0)
            }
        };
        if g.is_nan() {
            0.0
        } else {
            g.clamp(0.0, 1.0)
        }
    }
}

impl fmt::Display for ShrinkageKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ShrinkageKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('_', "-");
        let kind = match norm.as_str() {
            "mse" => ShrinkageKind::Mse,
            "we" => ShrinkageKind::We,
            "log-mse" | "logmse" => ShrinkageKind::LogMse,
            "is" => ShrinkageKind::Is,
            "is-ii" | "is2" | "isii" => ShrinkageKind::IsII,
            "cosh" => ShrinkageKind::Cosh,
            "wcosh" => ShrinkageKind::Wcosh,
            _ => return Err(param(format!("unknown shrinkage kind '{s}'"))),
        };
        Ok(kind)
    }
}

/// A-posteriori SNR and parametric factor for one gain evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainRequest {
    xi: f64,
    alpha: f64,
}

impl GainRequest {
    pub fn new(xi: f64, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(param(format!("alpha must be positive and finite, got {alpha}")));
        }
        if !(xi >= 0.0) {
            return Err(param(format!("a-posteriori SNR must be non-negative, got {xi}")));
        }
        Ok(Self { xi, alpha })
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn effective_xi(&self) -> f64 {
        self.xi / self.alpha
    }
}

pub fn gain(kind: ShrinkageKind, req: GainRequest) -> f64 {
    kind.gain_at(req.effective_xi())
}

/// Scales each coefficient by the gain of its a-posteriori SNR.
pub fn apply_shrinkage(frame: &DctFrame, xi_per_bin: &[f64], kind: ShrinkageKind, alpha: f64) -> Result<DctFrame> {
    if frame.len() != xi_per_bin.len() {
        return Err(param(format!(
            "frame has {} bins but {} SNR values were given",
            frame.len(),
            xi_per_bin.len()
        )));
    }
    let mut coeffs = Vec::with_capacity(frame.len());
    for (&x, &xi) in frame.coeffs.iter().zip(xi_per_bin) {
        coeffs.push(gain(kind, GainRequest::new(xi, alpha)?) * x);
    }
    Ok(DctFrame::new(coeffs, frame.index))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit(kind: ShrinkageKind, xi: f64) -> f64 {
        gain(kind, GainRequest::new(xi, 1.0).unwrap())
    }

    #[test]
    fn hand_evaluated_points_at_xi_10() {
        // hand evaluation of each closed form at ξ = 10
        let expected = [
            (ShrinkageKind::Mse, 0.9),
            (ShrinkageKind::We, 1.0 / 1.174),
            (ShrinkageKind::LogMse, 1.0),
            (ShrinkageKind::Is, 1.0 / 1.144),
            (ShrinkageKind::IsII, 1.0 / 1.85f64.sqrt()),
            (ShrinkageKind::Cosh, (1.1f64 / 1.144).sqrt()),
            (ShrinkageKind::Wcosh, 1.0 / 2.19f64.sqrt()),
        ];
        for (kind, want) in expected {
            assert!((unit(kind, 10.0) - want).abs() < 1e-12, "{kind}");
        }
        assert!((unit(ShrinkageKind::Is, 10.0) - 0.874126).abs() < 1e-6);
        assert!((unit(ShrinkageKind::We, 10.0) - 0.851789).abs() < 1e-6);
        assert!((unit(ShrinkageKind::Wcosh, 10.0) - 0.675737).abs() < 1e-6);
        assert!((unit(ShrinkageKind::IsII, 10.0) - 0.735215).abs() < 1e-6);
        assert!((unit(ShrinkageKind::Cosh, 10.0) - 0.980581).abs() < 1e-6);
    }

    #[test]
    fn mse_examples() {
        assert_eq!(unit(ShrinkageKind::Mse, 2.0), 0.5);
        assert_eq!(unit(ShrinkageKind::Mse, 0.5), 0.0);
    }

    #[test]
    fn zero_snr_gives_zero_gain() {
        for kind in ShrinkageKind::ALL {
            assert_eq!(unit(kind, 0.0), 0.0);
        }
    }

    #[test]
    fn asymptote() {
        for kind in ShrinkageKind::ALL {
            assert!((unit(kind, 1e9) - 1.0).abs() < 1e-6, "{kind}");
            assert_eq!(unit(kind, f64::INFINITY), 1.0);
        }
    }

    #[test]
    fn extreme_small_snr_is_finite() {
        for kind in ShrinkageKind::ALL {
            for xi in [1e-300, 1e-200, 1e-100, 1e-30, 1e-5] {
                let g = unit(kind, xi);
                assert!((0.0..=1.0).contains(&g), "{kind} at {xi}: {g}");
            }
        }
    }

    #[test]
    fn invalid_requests() {
        assert!(GainRequest::new(1.0, 0.0).is_err());
        assert!(GainRequest::new(1.0, -1.0).is_err());
        assert!(GainRequest::new(-1.0, 1.0).is_err());
        assert!(GainRequest::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn names_round_trip() {
        for kind in ShrinkageKind::ALL {
            assert_eq!(kind.name().parse::<ShrinkageKind>().unwrap(), kind);
        }
        assert!("foo".parse::<ShrinkageKind>().is_err());
    }

    #[test]
    fn apply_shrinkage_examples() {
        let frame = DctFrame::new(vec![1.0, -2.0, 3.0], 0);
        let out = apply_shrinkage(&frame, &[0.0; 3], ShrinkageKind::Is, 1.0).unwrap();
        assert_eq!(out.coeffs, vec![0.0; 3]);

        let out = apply_shrinkage(&frame, &[1e12; 3], ShrinkageKind::Wcosh, 1.0).unwrap();
        for (a, b) in out.coeffs.iter().zip(&frame.coeffs) {
            assert!((a - b).abs() < 1e-6);
        }

        let single = DctFrame::new(vec![3.0], 0);
        let out = apply_shrinkage(&single, &[9.0], ShrinkageKind::Mse, 1.0).unwrap();
        assert!((out.coeffs[0] - 3.0 * (1.0 - 1.0 / 9.0)).abs() < 1e-12);

        assert!(apply_shrinkage(&frame, &[1.0; 2], ShrinkageKind::Mse, 1.0).is_err());
    }

    #[test]
    fn monotonicity_scan_is_diagnostic_only() {
        // not an invariant; report where a gain decreases on ξ' ≥ 1
        for kind in ShrinkageKind::ALL {
            let mut prev = unit(kind, 1.0);
            let mut drops = 0;
            for i in 1..=4000 {
                let xi = 10f64.powf(i as f64 / 1000.0);
                let g = unit(kind, xi);
                if g < prev - 1e-15 {
                    drops += 1;
                }
                prev = g;
            }
            if drops > 0 {
                eprintln!("{kind}: {drops} non-monotone steps on ξ' ∈ [1, 1e4]");
            }
        }
    }

    proptest! {
        #[test]
        fn gain_in_unit_interval(xi in 0.0f64..1e12, alpha in 1e-3f64..100.0, k in 0usize..7) {
            let g = gain(ShrinkageKind::ALL[k], GainRequest::new(xi, alpha).unwrap());
            prop_assert!((0.0..=1.0).contains(&g));
        }

        #[test]
        fn alpha_shift_is_exact(xi in 0.0f64..1e6, alpha in 1e-2f64..20.0, k in 0usize..7) {
            let kind = ShrinkageKind::ALL[k];
            let shifted = gain(kind, GainRequest::new(xi, alpha).unwrap());
            let direct = gain(kind, GainRequest::new(xi / alpha, 1.0).unwrap());
            prop_assert_eq!(shifted.to_bits(), direct.to_bits());
        }
    }
}
