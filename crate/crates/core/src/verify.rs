//! Batteries of numerical cross-checks, each reported as a list of
//! [`Check`]s with observed value, expected value and tolerance.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::distribution::GenNormParams;
use crate::error::{Error, Result};
use crate::estimation::{run_crlb_experiment, ExperimentConfig};
use crate::fisher::{
    expected_score, fisher_closed_form, fisher_mc_score_variance, fisher_quad_neg_hessian,
    fisher_quad_score_variance,
};
use crate::quadrature::Tolerance;
use crate::special::{gamma, gamma_rational, multifactorial, RationalArg};

/// Shapes of the Fisher-information grid.
pub const GRID_BETAS: [u64; 4] = [2, 4, 6, 8];
/// Scales of the Fisher-information grid.
pub const GRID_THETAS: [f64; 3] = [0.5, 1.0, 2.0];

pub const LEMMA2_REL_TOL: f64 = 1e-12;
pub const FISHER_REL_TOL: f64 = 1e-7;
pub const EQUIVALENCE_TOL: f64 = 2e-8;
pub const ZERO_SCORE_TOL: f64 = 1e-9;
pub const ABS_MOMENT_REL_TOL: f64 = 1e-9;
pub const MC_SIGMAS: f64 = 4.0;
pub const EFFICIENCY_BAND: (f64, f64) = (0.9, 1.1);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Lemma2,
    Theorem1,
    Equivalence,
    Crlb,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Lemma2, Suite::Theorem1, Suite::Equivalence, Suite::Crlb];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Lemma2 => "lemma2",
            Suite::Theorem1 => "theorem1",
            Suite::Equivalence => "equivalence",
            Suite::Crlb => "crlb",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown verification suite '{s}'")))
    }
}

/// How `tolerance` is applied to |observed − expected|.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ToleranceKind {
    Absolute,
    Relative,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub observed: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub kind: ToleranceKind,
    pub passed: bool,
}

impl Check {
    pub fn absolute(name: impl Into<String>, observed: f64, expected: f64, tolerance: f64) -> Self {
        let passed = (observed - expected).abs() <= tolerance;
        Self {
            name: name.into(),
            observed,
            expected,
            tolerance,
            kind: ToleranceKind::Absolute,
            passed,
        }
    }

    pub fn relative(name: impl Into<String>, observed: f64, expected: f64, tolerance: f64) -> Self {
        let passed = (observed - expected).abs() <= tolerance * expected.abs();
        Self {
            name: name.into(),
            observed,
            expected,
            tolerance,
            kind: ToleranceKind::Relative,
            passed,
        }
    }

    /// A check whose computation failed outright.
    fn failed(name: impl Into<String>, expected: f64, tolerance: f64, kind: ToleranceKind) -> Self {
        Self {
            name: name.into(),
            observed: f64::NAN,
            expected,
            tolerance,
            kind,
            passed: false,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ToleranceKind::Absolute => "abs",
            ToleranceKind::Relative => "rel",
        };
        write!(
            f,
            "{} {}: observed={:?} expected={:?} tol={:e} ({kind})",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.observed,
            self.expected,
            self.tolerance
        )
    }
}

/// Knobs shared by the suites.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    /// Relative tolerance handed to the quadrature estimators.
    pub quad_tol: f64,
    pub mc_samples: usize,
    pub seed: u64,
    /// Shape and scale of the CRLB experiment.
    pub beta: u64,
    pub theta: f64,
    pub n: usize,
    pub trials: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            quad_tol: 1e-12,
            mc_samples: 1_000_000,
            seed: 2024,
            beta: 2,
            theta: 1.0,
            n: 10_000,
            trials: 1000,
        }
    }
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<Vec<Check>> {
    match suite {
        Suite::Lemma2 => lemma2(),
        Suite::Theorem1 => theorem1(opts),
        Suite::Equivalence => equivalence(opts),
        Suite::Crlb => crlb(opts),
    }
}

fn lemma2() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for p in 1..=6u64 {
        checks.push(Check::absolute(
            format!("multifactorial(1, {p}) = 1"),
            multifactorial(1, p)? as f64,
            1.0,
            0.0,
        ));
        for n in 1..=6u64 {
            let arg = RationalArg::new(n, p)?;
            checks.push(Check::relative(
                format!("gamma_rational(n={n}, p={p}) vs gamma({})", arg.value()),
                gamma_rational(arg)?,
                gamma(arg.value())?,
                LEMMA2_REL_TOL,
            ));
        }
    }
    Ok(checks)
}

fn grid() -> impl Iterator<Item = (u64, f64)> {
    GRID_BETAS
        .into_iter()
        .flat_map(|b| GRID_THETAS.into_iter().map(move |t| (b, t)))
}

fn theorem1(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (beta, theta) in grid() {
        let params = GenNormParams::new(theta, beta as f64)?;
        let tag = format!("beta={beta} theta={theta}");
        let exact = fisher_closed_form(&params)?.value;
        checks.push(Check::relative(
            format!("{tag} closed_form = beta/theta^2"),
            exact,
            beta as f64 / (theta * theta),
            0.0,
        ));
        checks.push(Check::relative(
            format!("{tag} quad_score_variance"),
            fisher_quad_score_variance(&params, opts.quad_tol)?.value,
            exact,
            FISHER_REL_TOL,
        ));
        checks.push(Check::relative(
            format!("{tag} quad_neg_hessian"),
            fisher_quad_neg_hessian(&params, opts.quad_tol)?.value,
            exact,
            FISHER_REL_TOL,
        ));
        let mc = fisher_mc_score_variance(&params, opts.mc_samples, opts.seed)?;
        checks.push(Check::absolute(
            format!("{tag} mc_score_variance (n={})", opts.mc_samples),
            mc.value,
            exact,
            MC_SIGMAS * mc.error_estimate,
        ));
        let abs_moment = params.expectation(
            |x| x.abs().powf(beta as f64),
            Tolerance::relative(opts.quad_tol),
        )?;
        checks.push(Check::relative(
            format!("{tag} E|X|^beta = theta^beta/beta"),
            abs_moment.value,
            params.expected_abs_moment()?,
            ABS_MOMENT_REL_TOL,
        ));
    }
    Ok(checks)
}

fn equivalence(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (beta, theta) in grid() {
        let params = GenNormParams::new(theta, beta as f64)?;
        let tag = format!("beta={beta} theta={theta}");
        let variance = fisher_quad_score_variance(&params, opts.quad_tol)?.value;
        let hessian = fisher_quad_neg_hessian(&params, opts.quad_tol)?.value;
        // Both absolute and value-scaled readings of the tolerance must hold.
        let tol = EQUIVALENCE_TOL * variance.min(1.0);
        checks.push(Check::absolute(
            format!("{tag} quad_neg_hessian vs quad_score_variance"),
            hessian,
            variance,
            tol,
        ));
        let zero = expected_score(&params, 1e-12)?;
        checks.push(Check::absolute(
            format!("{tag} E[score] = 0"),
            zero.value,
            0.0,
            ZERO_SCORE_TOL,
        ));
    }
    Ok(checks)
}

fn crlb(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let config = ExperimentConfig::new(opts.beta, opts.theta, opts.n, opts.trials, opts.seed)?;
    let (lo, hi) = EFFICIENCY_BAND;
    let centre = 0.5 * (lo + hi);
    let name = format!(
        "beta={} theta={} n={} trials={} efficiency in [{lo}, {hi}]",
        opts.beta, opts.theta, opts.n, opts.trials
    );
    let report = match run_crlb_experiment(&config) {
        Ok(r) => r,
        Err(Error::DegenerateData(_)) => {
            return Ok(vec![Check::failed(name, centre, hi - centre, ToleranceKind::Absolute)])
        }
        Err(e) => return Err(e),
    };
    Ok(vec![
        Check::absolute(name, report.efficiency, centre, hi - centre),
        Check::absolute("failed trials", report.failed_trials as f64, 0.0, 0.0),
    ])
}
