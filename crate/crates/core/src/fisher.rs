//! Score, second θ-derivative of the log density, and four routes to the
//! Fisher information I(θ) about the scale:
//!
//! * closed form β/θ² (even integer β only),
//! * quadrature of E[score²],
//! * quadrature of −E[∂²/∂θ² ln f],
//! * Monte Carlo mean of score².

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distribution::GenNormParams;
use crate::error::{Error, Result};
use crate::quadrature::{Integral, Tolerance};
use crate::stats::Summary;

/// Largest tolerance accepted by the quadrature estimators.
pub const MAX_QUAD_TOL: f64 = 1e-2;

/// Smallest Monte Carlo sample accepted by [`fisher_mc_score_variance`].
pub const MIN_MC_SAMPLES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FisherMethod {
    ClosedForm,
    QuadScoreVariance,
    QuadNegHessian,
    McScoreVariance,
}

impl FisherMethod {
    pub const ALL: [FisherMethod; 4] = [
        FisherMethod::ClosedForm,
        FisherMethod::QuadScoreVariance,
        FisherMethod::QuadNegHessian,
        FisherMethod::McScoreVariance,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FisherMethod::ClosedForm => "closed_form",
            FisherMethod::QuadScoreVariance => "quad_score_variance",
            FisherMethod::QuadNegHessian => "quad_neg_hessian",
            FisherMethod::McScoreVariance => "mc_score_variance",
        }
    }
}

impl fmt::Display for FisherMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FisherMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FisherMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown Fisher information method '{s}'")))
    }
}

/// One evaluation of I(θ).
///
/// `error_estimate` is the quadrature error bound, the Monte Carlo standard
/// error, or 0 for the closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FisherEstimate {
    pub value: f64,
    pub method: FisherMethod,
    pub error_estimate: f64,
}

fn score_unchecked(params: &GenNormParams, x: f64) -> f64 {
    let s = params.standardized_power(x);
    (params.beta() * s - 1.0) / params.theta()
}

fn d2_unchecked(params: &GenNormParams, x: f64) -> f64 {
    let s = params.standardized_power(x);
    let beta = params.beta();
    let theta = params.theta();
    (1.0 - beta * (beta + 1.0) * s) / (theta * theta)
}

fn check_x(x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("x must be finite, got {x}")))
    }
}

/// ∂/∂θ ln f(x; θ) = −1/θ + β|x|^β / θ^{β+1}.
pub fn score(params: &GenNormParams, x: f64) -> Result<f64> {
    check_x(x)?;
    Ok(score_unchecked(params, x))
}

/// ∂²/∂θ² ln f(x; θ) = 1/θ² − β(β+1)|x|^β / θ^{β+2}.
pub fn d2_log_pdf(params: &GenNormParams, x: f64) -> Result<f64> {
    check_x(x)?;
    Ok(d2_unchecked(params, x))
}

/// I(θ) = β/θ², proven for even integer β.
pub fn fisher_closed_form(params: &GenNormParams) -> Result<FisherEstimate> {
    if params.even_shape().is_none() {
        return Err(Error::Precondition(format!(
            "closed-form Fisher information needs an even positive integer beta, got {}",
            params.beta()
        )));
    }
    Ok(FisherEstimate {
        value: params.beta() / (params.theta() * params.theta()),
        method: FisherMethod::ClosedForm,
        error_estimate: 0.0,
    })
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol <= MAX_QUAD_TOL {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "quadrature tolerance must lie in (0, {MAX_QUAD_TOL}], got {tol}"
        )))
    }
}

fn from_integral(integral: Integral, method: FisherMethod) -> FisherEstimate {
    FisherEstimate {
        value: integral.value,
        method,
        error_estimate: integral.error,
    }
}

/// ∫ score(x)² f(x) dx with relative tolerance `tol`.
pub fn fisher_quad_score_variance(params: &GenNormParams, tol: f64) -> Result<FisherEstimate> {
    check_tol(tol)?;
    let integral = params.expectation(
        |x| {
            let s = score_unchecked(params, x);
            s * s
        },
        Tolerance::relative(tol),
    )?;
    Ok(from_integral(integral, FisherMethod::QuadScoreVariance))
}

/// −∫ ∂²/∂θ² ln f(x) · f(x) dx with relative tolerance `tol`.
pub fn fisher_quad_neg_hessian(params: &GenNormParams, tol: f64) -> Result<FisherEstimate> {
    check_tol(tol)?;
    let integral = params.expectation(|x| -d2_unchecked(params, x), Tolerance::relative(tol))?;
    Ok(from_integral(integral, FisherMethod::QuadNegHessian))
}

/// Sample mean of score² over `n` draws; the error estimate is the standard
/// error of that mean (unbiased sample variance).
pub fn fisher_mc_score_variance(params: &GenNormParams, n: usize, seed: u64) -> Result<FisherEstimate> {
    if n < MIN_MC_SAMPLES {
        return Err(Error::Precondition(format!(
            "Monte Carlo Fisher information needs n >= {MIN_MC_SAMPLES}, got {n}"
        )));
    }
    let squared: Vec<f64> = params
        .sample(n, seed)?
        .into_iter()
        .map(|x| {
            let s = score_unchecked(params, x);
            s * s
        })
        .collect();
    let summary = Summary::of(&squared).expect("n >= 2");
    Ok(FisherEstimate {
        value: summary.mean,
        method: FisherMethod::McScoreVariance,
        error_estimate: summary.std_error(),
    })
}

/// E[score] by quadrature, to absolute tolerance `abs_tol`. Zero whenever
/// differentiation under the integral sign is allowed.
pub fn expected_score(params: &GenNormParams, abs_tol: f64) -> Result<Integral> {
    params.expectation(|x| score_unchecked(params, x), Tolerance::absolute(abs_tol))
}

/// Closed form and quadrature value of I(θ) at one shape.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub beta: u64,
    pub closed_form: f64,
    pub quadrature: f64,
}

/// I(θ) along a list of even shapes, by closed form and by score-variance
/// quadrature.
pub fn fisher_beta_sweep(theta: f64, betas: &[u64], tol: f64) -> Result<Vec<SweepPoint>> {
    if betas.is_empty() {
        return Err(Error::Precondition("beta sweep needs at least one shape".into()));
    }
    betas
        .iter()
        .map(|&beta| {
            if beta == 0 || beta % 2 == 1 {
                return Err(Error::Precondition(format!(
                    "beta sweep accepts even positive shapes only, got {beta}"
                )));
            }
            let params = GenNormParams::new(theta, beta as f64)?;
            Ok(SweepPoint {
                beta,
                closed_form: fisher_closed_form(&params)?.value,
                quadrature: fisher_quad_score_variance(&params, tol)?.value,
            })
        })
        .collect()
}
