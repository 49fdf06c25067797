use super::estimate::{distortion, risk_estimate};
use super::stats::McStats;
use super::truncated::{lab_rng, TruncatedGaussianSpec};
use crate::error::{domain, param, Result};
use crate::shrinkage::ShrinkageKind;

/// A fixed clean coefficient observed through truncated Gaussian noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticScene {
    pub signal: f64,
    pub spec: TruncatedGaussianSpec,
    /// `|S| > 2cσ`: every draw satisfies `|W| < |S + W|`.
    pub high_snr: bool,
}

impl SyntheticScene {
    pub fn new(signal: f64, spec: TruncatedGaussianSpec) -> Result<Self> {
        if !signal.is_finite() || signal == 0.0 {
            return Err(param(format!("scene signal must be finite and non-zero, got {signal}")));
        }
        Ok(Self {
            signal,
            spec,
            high_snr: signal.abs() > 2.0 * spec.bound(),
        })
    }

    fn require_high_snr(&self, kind: ShrinkageKind) -> Result<()> {
        if kind != ShrinkageKind::Mse && !self.high_snr {
            return Err(domain(format!(
                "{kind} risk needs |S| > 2cσ; got S = {}, cσ = {}",
                self.signal,
                self.spec.bound()
            )));
        }
        Ok(())
    }
}

fn check_gain(a: f64) -> Result<()> {
    if (0.0..=1.0).contains(&a) {
        Ok(())
    } else {
        Err(param(format!("gain must lie in [0, 1], got {a}")))
    }
}

/// Monte Carlo estimate of `E{d(S, a·(S + W))}`.
pub fn true_risk_mc(
    kind: ShrinkageKind,
    a: f64,
    scene: &SyntheticScene,
    n_samples: usize,
    seed: u64,
) -> Result<McStats> {
    check_gain(a)?;
    scene.require_high_snr(kind)?;
    let mut rng = lab_rng(seed);
    let mut stats = McStats::new();
    for _ in 0..n_samples {
        let x = scene.signal + scene.spec.draw(&mut rng);
        stats.push(distortion(kind, scene.signal, a * x)?);
    }
    Ok(stats)
}

/// True risk and the mean of its estimate over the same noise draws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnbiasednessReport {
    pub mean_true: f64,
    pub mean_estimate: f64,
    /// Standard error of the paired per-draw difference.
    pub mc_stderr: f64,
}

impl UnbiasednessReport {
    pub fn gap(&self) -> f64 {
        (self.mean_true - self.mean_estimate).abs()
    }

    /// `rel_tol·|mean_true| + abs_tol + 3·stderr`.
    pub fn tolerance(&self, rel_tol: f64, abs_tol: f64) -> f64 {
        rel_tol * self.mean_true.abs() + abs_tol + 3.0 * self.mc_stderr
    }

    pub fn within(&self, rel_tol: f64, abs_tol: f64) -> bool {
        self.gap() <= self.tolerance(rel_tol, abs_tol)
    }
}

pub fn unbiasedness_report(
    kind: ShrinkageKind,
    a: f64,
    scene: &SyntheticScene,
    n_samples: usize,
    seed: u64,
) -> Result<UnbiasednessReport> {
    check_gain(a)?;
    scene.require_high_snr(kind)?;
    let sigma = scene.spec.sigma();
    let mut rng = lab_rng(seed);
    let mut truth = McStats::new();
    let mut estimate = McStats::new();
    let mut diff = McStats::new();
    for _ in 0..n_samples {
        let x = scene.signal + scene.spec.draw(&mut rng);
        let d = distortion(kind, scene.signal, a * x)?;
        let r = risk_estimate(kind, a, x, sigma, Some(scene.signal))?.value;
        truth.push(d);
        estimate.push(r);
        diff.push(d - r);
    }
    Ok(UnbiasednessReport {
        mean_true: truth.mean(),
        mean_estimate: estimate.mean(),
        mc_stderr: diff.stderr(),
    })
}

/// Fraction of draws with `|W| < |S + W|`.
pub fn high_snr_event_check(scene: &SyntheticScene, n_samples: usize, seed: u64) -> f64 {
    if n_samples == 0 {
        return 1.0;
    }
    let mut rng = lab_rng(seed);
    let hits = (0..n_samples)
        .filter(|_| {
            let w = scene.spec.draw(&mut rng);
            w.abs() < (scene.signal + w).abs()
        })
        .count();
    hits as f64 / n_samples as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scene(s: f64) -> SyntheticScene {
        SyntheticScene::new(s, TruncatedGaussianSpec::new(1.0, 5.0).unwrap()).unwrap()
    }

    #[test]
    fn mse_true_risk_matches_analytic() {
        let sc = scene(10.0);
        let var = sc.spec.variance();
        let r = true_risk_mc(ShrinkageKind::Mse, 0.5, &sc, 200_000, 1).unwrap();
        let want = 25.0 + 0.25 * var;
        assert!((r.mean() - want).abs() < 3.0 * r.stderr(), "{} vs {want}", r.mean());
        let r = true_risk_mc(ShrinkageKind::Mse, 1.0, &sc, 200_000, 2).unwrap();
        assert!((r.mean() - var).abs() < 3.0 * r.stderr());
    }

    #[test]
    fn is_true_risk_second_order() {
        let sc = scene(100.0);
        let r = true_risk_mc(ShrinkageKind::Is, 1.0, &sc, 200_000, 3).unwrap();
        let want = sc.spec.variance() / (2.0 * 100.0 * 100.0);
        assert!((r.mean() - want).abs() < 0.05 * want + 3.0 * r.stderr());
    }

    #[test]
    fn low_snr_scene_rejected_for_non_mse() {
        let sc = scene(3.0);
        assert!(!sc.high_snr);
        assert!(matches!(
            true_risk_mc(ShrinkageKind::Is, 1.0, &sc, 10, 1),
            Err(crate::Error::Domain(_))
        ));
        assert!(true_risk_mc(ShrinkageKind::Mse, 1.0, &sc, 10, 1).is_ok());
        assert!(unbiasedness_report(ShrinkageKind::Mse, 1.0, &sc, 10, 1).is_ok());
        assert!(unbiasedness_report(ShrinkageKind::Wcosh, 1.0, &sc, 10, 1).is_err());
    }

    #[test]
    fn mse_unbiased_and_deterministic_at_zero_gain() {
        let sc = scene(10.0);
        let rep = unbiasedness_report(ShrinkageKind::Mse, 0.7, &sc, 200_000, 4).unwrap();
        assert!(rep.within(0.0, sc.spec.stein_slack()), "{rep:?}");
        let rep = unbiasedness_report(ShrinkageKind::Mse, 0.0, &sc, 1000, 4).unwrap();
        assert_eq!(rep.mean_true, 100.0);
        assert_eq!(rep.mean_estimate, 100.0);
    }

    #[test]
    fn we_unbiased_at_high_snr() {
        let sc = scene(50.0);
        let rep = unbiasedness_report(ShrinkageKind::We, 0.9, &sc, 200_000, 5).unwrap();
        assert!(rep.within(0.01, 0.0), "{rep:?}");
    }

    #[test]
    fn high_snr_event() {
        assert_eq!(high_snr_event_check(&scene(11.0), 100_000, 1), 1.0);
        assert_eq!(high_snr_event_check(&scene(-11.0), 100_000, 2), 1.0);
        assert!(high_snr_event_check(&scene(0.1), 100_000, 3) < 1.0);
        assert_eq!(high_snr_event_check(&scene(10.0), 100_000, 4), 1.0);
    }

    #[test]
    fn scene_validation() {
        let spec = TruncatedGaussianSpec::new(1.0, 5.0).unwrap();
        assert!(SyntheticScene::new(0.0, spec).is_err());
        assert!(!SyntheticScene::new(10.0, spec).unwrap().high_snr);
        assert!(SyntheticScene::new(10.0 + 1e-9, spec).unwrap().high_snr);
    }
}
