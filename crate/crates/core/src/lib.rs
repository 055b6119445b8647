//! Zero-mean generalized normal distribution and the Fisher information it
//! carries about its scale parameter.
//!
//! For density f(x; θ, β) ∝ exp(−|x|^β / θ^β) with even integer shape β the
//! Fisher information about θ is I(θ) = β/θ². This crate provides the
//! density, its exact moments and a sampler ([`distribution`]), the gamma
//! function machinery behind them ([`special`]), four independent routes to
//! I(θ) ([`fisher`]), maximum-likelihood estimation of θ with a Cramér–Rao
//! efficiency experiment ([`estimation`]), and batteries of numerical checks
//! tying them together ([`verify`]).

pub mod distribution;
pub mod error;
pub mod estimation;
pub mod fisher;
pub mod quadrature;
pub mod rng;
pub mod special;
pub mod stats;
pub mod verify;

pub use distribution::{exact_moment, GenNormParams, MomentSpec};
pub use error::{Error, Result};
pub use estimation::{mle_theta, run_crlb_experiment, EstimationReport, ExperimentConfig};
pub use fisher::{
    d2_log_pdf, fisher_beta_sweep, fisher_closed_form, fisher_mc_score_variance,
    fisher_quad_neg_hessian, fisher_quad_score_variance, score, FisherEstimate, FisherMethod,
};
pub use special::{gamma, gamma_rational, log_gamma, multifactorial, RationalArg};
