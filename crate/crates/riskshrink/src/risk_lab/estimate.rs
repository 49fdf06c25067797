use crate::error::{domain, param, Result};
use crate::shrinkage::ShrinkageKind;

/// Value of a risk estimate `R̂` for the shrinkage `Ŝ = a·X`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskEvaluation {
    pub kind: ShrinkageKind,
    pub a: f64,
    /// May be `±∞` at `a = 0` for the logarithmic and reciprocal measures.
    pub value: f64,
    /// Whether the `a`-independent signal terms (`S²`, `log S`, `−1/S`,
    /// additive constants) are included.
    pub includes_signal_constant: bool,
}

impl RiskEvaluation {
    pub fn is_infinite(&self) -> bool {
        self.value.is_infinite()
    }
}

// a-independent correction in the log-MSE estimate, powers r..r⁴ of σ²/X²
const LOG_MSE_OFFSET: [f64; 4] = [1.0, -1.5, 13.0 / 6.0, -159.5];
// coefficients multiplying log|aX| in the log-MSE estimate
const LOG_MSE_SLOPE: [f64; 4] = [0.5, -0.75, -10.0, -210.0];

/// `c₀r + c₁r² + c₂r³ + c₃r⁴`
fn quartic_in(r: f64, c: [f64; 4]) -> f64 {
    r * (c[0] + r * (c[1] + r * (c[2] + r * c[3])))
}

/// Unbiased estimate of the risk of `Ŝ = a·X` under truncated Gaussian noise
/// of scale `σ`, using only the observation `X`.
///
/// With `signal = Some(S)` the `a`-independent signal terms are added so the
/// value can be compared with the true risk; the minimiser ignores them.
pub fn risk_estimate(kind: ShrinkageKind, a: f64, x: f64, sigma: f64, signal: Option<f64>) -> Result<RiskEvaluation> {
    if !(0.0..=1.0).contains(&a) {
        return Err(param(format!("gain must lie in [0, 1], got {a}")));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(param(format!("sigma must be positive, got {sigma}")));
    }
    if !x.is_finite() {
        return Err(param(format!("observation must be finite, got {x}")));
    }
    if x == 0.0 && kind != ShrinkageKind::Mse {
        return Err(domain(format!("{kind} risk estimate is undefined at X = 0")));
    }
    if let Some(s) = signal {
        if !s.is_finite() || (s == 0.0 && kind != ShrinkageKind::Mse) {
            return Err(domain(format!("{kind} risk needs a finite non-zero signal, got {s}")));
        }
    }

    let r = sigma * sigma / (x * x);
    let value = match kind {
        ShrinkageKind::Mse => {
            let mut v = a * a * x * x - 2.0 * a * x * x + 2.0 * sigma * sigma * a;
            if let Some(s) = signal {
                v += s * s;
            }
            v
        }
        ShrinkageKind::We => {
            let bracket = 1.0 + quartic_in(r, [1.0, -1.0, 48.0, 360.0]);
            let mut v = a * a * x * bracket - 2.0 * a * x;
            if let Some(s) = signal {
                v += s;
            }
            v
        }
        ShrinkageKind::LogMse => {
            if a == 0.0 {
                f64::INFINITY
            } else {
                let log_est = (a * x).abs().ln();
                let log_x = x.abs().ln();
                let mut v = log_est * log_est - 2.0 * log_est * log_x + 2.0 * quartic_in(r, LOG_MSE_OFFSET)
                    - 2.0 * log_est * quartic_in(r, LOG_MSE_SLOPE);
                if let Some(s) = signal {
                    let ls = s.abs().ln();
                    v += ls * ls;
                }
                v
            }
        }
        ShrinkageKind::Is => {
            if a == 0.0 {
                f64::INFINITY
            } else {
                let mut v = a * (1.0 + r * r * r * (60.0 + 840.0 * r)) - (a * x).abs().ln();
                if let Some(s) = signal {
                    v += s.abs().ln() - 1.0;
                }
                v
            }
        }
        ShrinkageKind::IsII => {
            if a == 0.0 {
                f64::INFINITY
            } else {
                let bracket = 1.0 + quartic_in(r, [1.0, -3.0, 360.0, 4200.0]);
                let mut v = a * a * bracket - ((a * x) * (a * x)).ln();
                if let Some(s) = signal {
                    v += (s * s).ln() - 1.0;
                }
                v
            }
        }
        ShrinkageKind::Cosh => {
            if a == 0.0 {
                f64::INFINITY
            } else {
                let mut v = 0.5 * ((1.0 + r) / a + a * (1.0 + r * r * r * (60.0 + 840.0 * r)));
                if signal.is_some() {
                    v -= 1.0;
                }
                v
            }
        }
        ShrinkageKind::Wcosh => {
            if a == 0.0 {
                f64::INFINITY.copysign(x)
            } else {
                let bracket = 1.0 + quartic_in(r, [-1.0, 3.0, 420.0, 8400.0]);
                let mut v = a / (2.0 * x) * bracket + 1.0 / (2.0 * a * x);
                if let Some(s) = signal {
                    v -= 1.0 / s;
                }
                v
            }
        }
    };
    Ok(RiskEvaluation {
        kind,
        a,
        value,
        includes_signal_constant: signal.is_some(),
    })
}

/// Distortion `d(S, Ŝ)` between a clean coefficient and its estimate.
pub fn distortion(kind: ShrinkageKind, s: f64, s_hat: f64) -> Result<f64> {
    if kind == ShrinkageKind::Mse {
        let e = s_hat - s;
        return Ok(e * e);
    }
    if s == 0.0 || !s.is_finite() {
        return Err(domain(format!("{kind} distortion needs a finite non-zero signal")));
    }
    if kind == ShrinkageKind::We {
        let e = s_hat - s;
        return Ok(e * e / s);
    }
    let q = s_hat / s;
    if !(q > 0.0) {
        return Err(domain(format!(
            "{kind} distortion needs estimate and signal of the same sign"
        )));
    }
    let d = match kind {
        ShrinkageKind::LogMse => {
            let l = q.ln();
            l * l
        }
        ShrinkageKind::Is => q - q.ln() - 1.0,
        ShrinkageKind::IsII => q * q - (q * q).ln() - 1.0,
        ShrinkageKind::Cosh => 0.5 * (1.0 / q + q) - 1.0,
        ShrinkageKind::Wcosh => (0.5 * (1.0 / q + q) - 1.0) / s,
        ShrinkageKind::Mse | ShrinkageKind::We => unreachable!(),
    };
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ShrinkageKind::*;

    #[test]
    fn mse_substitution() {
        let (x, sigma) = (1.7, 0.9);
        let v = risk_estimate(Mse, 1.0, x, sigma, None).unwrap().value;
        assert!((v - (2.0 * sigma * sigma - x * x)).abs() < 1e-12);
        let v = risk_estimate(Mse, 0.0, x, sigma, Some(3.0)).unwrap().value;
        assert_eq!(v, 9.0);
    }

    #[test]
    fn is_near_zero_at_high_snr() {
        let sigma = 1.0;
        let x = 1000.0;
        let v = risk_estimate(Is, 1.0, x, sigma, Some(x)).unwrap().value;
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn log_singularities_are_infinite() {
        for kind in [LogMse, Is, IsII, Cosh] {
            let e = risk_estimate(kind, 0.0, 2.0, 1.0, None).unwrap();
            assert!(e.is_infinite() && e.value > 0.0, "{kind}");
        }
        let e = risk_estimate(Wcosh, 0.0, -2.0, 1.0, None).unwrap();
        assert_eq!(e.value, f64::NEG_INFINITY);
        assert!(risk_estimate(We, 0.0, 2.0, 1.0, None).unwrap().value.is_finite());
    }

    #[test]
    fn domain_and_parameter_errors() {
        assert!(matches!(
            risk_estimate(Is, 0.5, 0.0, 1.0, None),
            Err(crate::Error::Domain(_))
        ));
        assert!(risk_estimate(Mse, 0.5, 0.0, 1.0, None).is_ok());
        assert!(matches!(
            risk_estimate(Mse, 1.5, 1.0, 1.0, None),
            Err(crate::Error::Parameter(_))
        ));
        assert!(risk_estimate(Mse, 0.5, 1.0, 0.0, None).is_err());
        assert!(risk_estimate(We, 0.5, 1.0, 1.0, Some(0.0)).is_err());
    }

    #[test]
    fn estimate_matches_distortion_without_noise_terms() {
        // as σ → 0 the estimates collapse onto the distortion evaluated at S = X
        let x = 3.0;
        let sigma = 1e-6;
        for kind in ShrinkageKind::ALL {
            for a in [0.3, 0.8, 1.0] {
                let est = risk_estimate(kind, a, x, sigma, Some(x)).unwrap().value;
                let d = distortion(kind, x, a * x).unwrap();
                assert!((est - d).abs() < 1e-9, "{kind} a={a}: {est} vs {d}");
            }
        }
    }

    #[test]
    fn distortion_values() {
        assert_eq!(distortion(Mse, 2.0, 1.0).unwrap(), 1.0);
        assert_eq!(distortion(We, 2.0, 1.0).unwrap(), 0.5);
        assert_eq!(distortion(Is, 2.0, 2.0).unwrap(), 0.0);
        assert_eq!(distortion(Cosh, -2.0, -2.0).unwrap(), 0.0);
        assert!(distortion(Is, 2.0, -1.0).is_err());
        assert!(distortion(LogMse, 0.0, 1.0).is_err());
    }
}
