//! The zero-mean generalized normal family
//!
//! ```text
//! f(x; θ, β) = β / (2 θ Γ(1/β)) · exp(−|x|^β / θ^β)
//! ```
//!
//! with scale θ > 0 and shape β > 0. β = 1 is the Laplace density, β = 2 a
//! Gaussian with variance θ²/2, and the density flattens towards the uniform
//! density on (−θ, θ) as β grows.

use rand::Rng;
use rand_distr::{Open01, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_real_line, Integral, Tolerance};
use crate::rng::{chunk_rng, CHUNK_LEN};
use crate::special::{gamma, log_gamma};

/// (|x|/θ)^β at which exp(−(|x|/θ)^β) underflows to zero.
const TAIL_EXPONENT: f64 = 750.0;

/// Scale θ and shape β of the family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GenNormParams {
    theta: f64,
    beta: f64,
}

impl GenNormParams {
    pub fn new(theta: f64, beta: f64) -> Result<Self> {
        if !(theta.is_finite() && theta > 0.0) {
            return Err(Error::Domain(format!("scale theta must be > 0, got {theta}")));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::Domain(format!("shape beta must be > 0, got {beta}")));
        }
        Ok(Self { theta, beta })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// β as an integer when it is a positive even integer.
    pub fn even_shape(&self) -> Option<u64> {
        let b = self.beta;
        if b.fract() == 0.0 && b <= u64::MAX as f64 && (b as u64).is_multiple_of(2) {
            Some(b as u64)
        } else {
            None
        }
    }

    /// The same shape with a different scale.
    pub fn with_theta(&self, theta: f64) -> Result<Self> {
        Self::new(theta, self.beta)
    }

    /// ln(β/2) − ln Γ(1/β), the θ-free part of the log normalizer.
    fn log_norm_const(&self) -> f64 {
        (0.5 * self.beta).ln() - log_gamma(1.0 / self.beta).expect("1/beta is positive and finite")
    }

    /// (|x|/θ)^β; the only place x enters the density and its derivatives.
    pub(crate) fn standardized_power(&self, x: f64) -> f64 {
        (x.abs() / self.theta).powf(self.beta)
    }

    pub(crate) fn log_pdf_unchecked(&self, x: f64) -> f64 {
        self.log_norm_const() - self.theta.ln() - self.standardized_power(x)
    }

    /// ln f(x) = ln(β/2) − ln θ − ln Γ(1/β) − |x|^β/θ^β.
    pub fn log_pdf(&self, x: f64) -> Result<f64> {
        check_finite(x)?;
        Ok(self.log_pdf_unchecked(x))
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        Ok(self.log_pdf(x)?.exp())
    }

    /// E[X^k]; shorthand for [`exact_moment`].
    pub fn moment(&self, k: u32) -> Result<f64> {
        exact_moment(&MomentSpec::new(k, *self))
    }

    /// E[|X|^β] = θ^β / β, valid for even integer β.
    pub fn expected_abs_moment(&self) -> Result<f64> {
        if self.even_shape().is_none() {
            return Err(Error::Precondition(format!(
                "expected_abs_moment requires an even positive integer beta, got {}",
                self.beta
            )));
        }
        let value = self.theta.powf(self.beta) / self.beta;
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::Overflow(format!(
                "theta^beta / beta overflows for theta = {}, beta = {}",
                self.theta, self.beta
            )))
        }
    }

    /// |x|/θ beyond which the density is zero in double precision.
    pub fn tail_cutoff(&self) -> f64 {
        TAIL_EXPONENT.powf(1.0 / self.beta)
    }

    /// E[g(X)] by adaptive quadrature over the real line.
    pub fn expectation<G: Fn(f64) -> f64>(&self, g: G, tol: Tolerance) -> Result<Integral> {
        integrate_real_line(
            |x| g(x) * self.log_pdf_unchecked(x).exp(),
            self.theta,
            self.tail_cutoff(),
            tol,
        )
    }

    /// `count` independent draws, reproducible from `seed`.
    ///
    /// |X| = θ · G^{1/β} with G ~ Gamma(1/β, 1), and the sign is an
    /// independent fair coin. For 1/β < 1 the gamma variate is boosted as
    /// G = G' · U^β with G' ~ Gamma(1 + 1/β), so |X| = θ · G'^{1/β} · U is
    /// formed without ever computing U^β (which underflows for large β).
    ///
    /// Variates are produced in chunks of [`CHUNK_LEN`], chunk c from
    /// ChaCha8 stream c, so the result does not depend on the thread count.
    /// θ enters as a final multiplication: draws for scale c are exactly c
    /// times the draws for scale 1 under the same seed.
    pub fn sample(&self, count: usize, seed: u64) -> Result<Vec<f64>> {
        if count == 0 {
            return Err(Error::Domain("sample count must be >= 1".into()));
        }
        let chunks = count.div_ceil(CHUNK_LEN);
        let beta = self.beta;
        let theta = self.theta;
        let parts: Vec<Vec<f64>> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let len = CHUNK_LEN.min(count - c * CHUNK_LEN);
                let mut rng = chunk_rng(seed, c as u64);
                (0..len)
                    .map(|_| theta * standard_variate(beta, &mut rng))
                    .collect()
            })
            .collect();
        Ok(parts.concat())
    }
}

fn check_finite(x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("x must be finite, got {x}")))
    }
}

/// One draw with θ = 1.
fn standard_variate<R: Rng + ?Sized>(beta: f64, rng: &mut R) -> f64 {
    let negative: bool = rng.random();
    let shape = 1.0 / beta;
    let magnitude = if shape < 1.0 {
        let boosted = marsaglia_tsang(shape + 1.0, rng);
        let u: f64 = rng.sample(Open01);
        boosted.powf(shape) * u
    } else {
        marsaglia_tsang(shape, rng).powf(shape)
    };
    if negative {
        -magnitude
    } else {
        magnitude
    }
}

/// Gamma(shape, 1) variate for shape ≥ 1 (Marsaglia & Tsang squeeze).
fn marsaglia_tsang<R: Rng + ?Sized>(shape: f64, rng: &mut R) -> f64 {
    debug_assert!(shape >= 1.0);
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x: f64 = rng.sample(StandardNormal);
        let v = 1.0 + c * x;
        if v <= 0.0 {
            continue;
        }
        let v = v * v * v;
        let u: f64 = rng.sample(Open01);
        let x2 = x * x;
        if u < 1.0 - 0.0331 * x2 * x2 {
            return d * v;
        }
        if u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
            return d * v;
        }
    }
}

/// Order k and parameters of a moment E[X^k].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSpec {
    pub k: u32,
    pub params: GenNormParams,
}

impl MomentSpec {
    pub fn new(k: u32, params: GenNormParams) -> Self {
        Self { k, params }
    }
}

/// E[X^k] = θ^k Γ((k+1)/β) / Γ(1/β) for even k, and 0 for odd k.
///
/// The gamma ratio is taken directly while both gammas and θ^k are finite,
/// and as exp(k ln θ + ln Γ((k+1)/β) − ln Γ(1/β)) otherwise.
pub fn exact_moment(spec: &MomentSpec) -> Result<f64> {
    if spec.k % 2 == 1 {
        return Ok(0.0);
    }
    let GenNormParams { theta, beta } = spec.params;
    let k = f64::from(spec.k);
    if let (Ok(top), Ok(bottom)) = (gamma((k + 1.0) / beta), gamma(1.0 / beta)) {
        let value = theta.powi(spec.k as i32) * (top / bottom);
        if value.is_finite() && value > 0.0 {
            return Ok(value);
        }
    }
    let log_value = k * theta.ln() + log_gamma((k + 1.0) / beta)? - log_gamma(1.0 / beta)?;
    let value = log_value.exp();
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow(format!(
            "moment of order {} overflows for theta = {theta}, beta = {beta}",
            spec.k
        )))
    }
}
