//! Numerical checks of the risk-estimation machinery.
//!
//! Everything here is driven by explicit seeds. The truncated Gaussian
//! sampler feeds Stein-identity checks, Monte Carlo estimates of the true
//! risk, and comparisons between the closed-form gains and a brute-force
//! grid minimiser of each risk estimate.

mod estimate;
mod montecarlo;
mod oracle;
mod stats;
mod stein;
pub mod suite;
mod truncated;

pub use estimate::{distortion, risk_estimate, RiskEvaluation};
pub use montecarlo::{high_snr_event_check, true_risk_mc, unbiasedness_report, SyntheticScene, UnbiasednessReport};
pub use oracle::{oracle_argmin, DEFAULT_GRID_STEP, MAX_GRID_STEP};
pub use stats::McStats;
pub use stein::{
    generalized_stein_check, generalized_stein_check_on, stein_check_on, stein_identity_check, IdentityCheck,
    TestFunction,
};
pub use truncated::{sample_truncated_gaussian, TruncatedGaussianSpec};
