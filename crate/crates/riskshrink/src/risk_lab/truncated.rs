use std::f64::consts::{PI, SQRT_2};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{param, Result};

/// Zero-mean Gaussian of scale `σ` restricted to `(−cσ, cσ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedGaussianSpec {
    sigma: f64,
    c: f64,
    normalizer: f64,
}

impl TruncatedGaussianSpec {
    pub fn new(sigma: f64, c: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(param(format!("sigma must be positive, got {sigma}")));
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(param(format!("truncation multiple must be positive, got {c}")));
        }
        Ok(Self {
            sigma,
            c,
            normalizer: libm::erf(c / SQRT_2),
        })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// `K = 2Φ(c) − 1`, the probability mass kept by the truncation.
    pub fn normalizer(&self) -> f64 {
        self.normalizer
    }

    pub fn bound(&self) -> f64 {
        self.c * self.sigma
    }

    pub fn density(&self, w: f64) -> f64 {
        if w.abs() >= self.bound() {
            return 0.0;
        }
        self.kernel(w)
    }

    // density formula without the support indicator
    fn kernel(&self, w: f64) -> f64 {
        let z = w / self.sigma;
        (-0.5 * z * z).exp() / ((2.0 * PI).sqrt() * self.sigma * self.normalizer)
    }

    /// `σ²(1 − 2cφ(c)/K)`.
    pub fn variance(&self) -> f64 {
        let phi = (-0.5 * self.c * self.c).exp() / (2.0 * PI).sqrt();
        self.sigma * self.sigma * (1.0 - 2.0 * self.c * phi / self.normalizer)
    }

    /// Upper bound on the truncation error of the Stein identities.
    pub fn stein_slack(&self) -> f64 {
        (-self.c * self.c).exp()
    }

    /// Draws one sample by rejection from the untruncated Gaussian.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let bound = self.bound();
        loop {
            let z: f64 = rng.sample(StandardNormal);
            let w = self.sigma * z;
            if w.abs() < bound {
                return w;
            }
        }
    }
}

/// Seeded RNG used throughout the lab: ChaCha8 keyed by `seed`.
pub(crate) fn lab_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn sample_truncated_gaussian(spec: &TruncatedGaussianSpec, count: usize, seed: u64) -> Vec<f64> {
    let mut rng = lab_rng(seed);
    (0..count).map(|_| spec.draw(&mut rng)).collect()
}
