//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! [`integrate`] handles finite intervals. [`integrate_real_line`] maps the
//! real line onto a finite u-interval through x = scale · sinh(u), which
//! turns algebraic or slowly decaying exponential tails into rapidly
//! decaying ones, and truncates at a caller-supplied cutoff beyond which the
//! integrand is known to vanish in double precision.
//!
//! Refinement always bisects the segment with the largest error estimate
//! and the final sum runs over segments in left-to-right order, so results
//! are deterministic.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const EVALS_PER_RULE: usize = 15;

/// Stopping criteria for adaptive quadrature.
///
/// Refinement stops once the summed error estimate is at most
/// `max(abs, rel · |value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_evaluations: usize,
}

impl Tolerance {
    pub const DEFAULT_MAX_EVALUATIONS: usize = 500_000;

    pub fn relative(rel: f64) -> Self {
        Self {
            abs: 0.0,
            rel,
            max_evaluations: Self::DEFAULT_MAX_EVALUATIONS,
        }
    }

    pub fn absolute(abs: f64) -> Self {
        Self {
            abs,
            rel: 0.0,
            max_evaluations: Self::DEFAULT_MAX_EVALUATIONS,
        }
    }

    pub fn with_max_evaluations(mut self, max_evaluations: usize) -> Self {
        self.max_evaluations = max_evaluations;
        self
    }

    fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v >= 0.0;
        if !ok(self.abs) || !ok(self.rel) || (self.abs == 0.0 && self.rel == 0.0) {
            return Err(Error::Domain(format!(
                "quadrature tolerance must be non-negative and not both zero: {self:?}"
            )));
        }
        Ok(())
    }
}

/// Value of a definite integral with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        scaled = res_asc * (200.0 * scaled / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);

    let mut res_k = WGK[7] * f_center;
    let mut res_g = WG[3] * f_center;
    let mut res_abs = res_k.abs();
    let mut fv = [(0.0, 0.0); 7];

    for (j, &x) in XGK[..7].iter().enumerate() {
        let dx = half * x;
        let (f1, f2) = (f(center - dx), f(center + dx));
        fv[j] = (f1, f2);
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for (j, &(f1, f2)) in fv.iter().enumerate() {
        res_asc += WGK[j] * ((f1 - mean).abs() + (f2 - mean).abs());
    }

    let scale = half.abs();
    Segment {
        a,
        b,
        value: res_k * half,
        error: rescale_error((res_k - res_g) * half, res_abs * scale, res_asc * scale),
    }
}

fn refine<F: Fn(f64) -> f64>(f: F, breakpoints: &[f64], tol: Tolerance) -> Result<Integral> {
    tol.validate()?;
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in breakpoints.windows(2) {
        if w[0] < w[1] {
            heap.push(kronrod15(&f, w[0], w[1]));
            evaluations += EVALS_PER_RULE;
        }
    }

    // Segments too narrow to split further are parked here.
    let mut settled: Vec<Segment> = Vec::new();
    loop {
        let (value, error) = heap
            .iter()
            .chain(settled.iter())
            .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
        if !value.is_finite() || !error.is_finite() {
            return Err(Error::Numerical(format!(
                "integrand produced a non-finite value (sum = {value})"
            )));
        }
        if error <= tol.abs.max(tol.rel * value.abs()) || heap.is_empty() {
            return Ok(Integral {
                value: ordered_sum(heap.into_iter().chain(settled)),
                error,
                evaluations,
            });
        }
        if evaluations + 2 * EVALS_PER_RULE > tol.max_evaluations {
            return Err(Error::NonConvergence {
                partial: value,
                error_estimate: error,
                evaluations,
            });
        }
        let worst = heap.pop().expect("heap checked non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            settled.push(worst);
            continue;
        }
        heap.push(kronrod15(&f, worst.a, mid));
        heap.push(kronrod15(&f, mid, worst.b));
        evaluations += 2 * EVALS_PER_RULE;
    }
}

fn ordered_sum(segments: impl Iterator<Item = Segment>) -> f64 {
    let mut all: Vec<Segment> = segments.collect();
    all.sort_by(|x, y| x.a.total_cmp(&y.a));
    all.iter().map(|s| s.value).sum()
}

/// Integrates `f` over the finite interval [a, b].
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Integral> {
    if !(a.is_finite() && b.is_finite()) || a >= b {
        return Err(Error::Domain(format!(
            "integration bounds must be finite with a < b, got [{a}, {b}]"
        )));
    }
    refine(f, &[a, b], tol)
}

/// Integrates `f` over the whole real line.
///
/// `scale` sets the length unit of the substitution x = scale · sinh(u) and
/// `cutoff` is the |x| / scale beyond which `f` is treated as zero. The
/// u-range is split at 0 so a kink of `f` at the origin falls on a segment
/// boundary.
pub fn integrate_real_line<F: Fn(f64) -> f64>(
    f: F,
    scale: f64,
    cutoff: f64,
    tol: Tolerance,
) -> Result<Integral> {
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::Domain(format!("scale must be positive, got {scale}")));
    }
    if !(cutoff.is_finite() && cutoff > 0.0) {
        return Err(Error::Domain(format!("cutoff must be positive, got {cutoff}")));
    }
    let u_max = cutoff.asinh();
    let mapped = |u: f64| {
        let x = scale * u.sinh();
        f(x) * scale * u.cosh()
    };
    refine(mapped, &[-u_max, 0.0, u_max], tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact_on_one_panel() {
        // K15 integrates degree-22 polynomials exactly.
        let got = kronrod15(&|x: f64| x.powi(22), -1.0, 1.0);
        assert!((got.value - 2.0 / 23.0).abs() < 1e-15);
    }

    #[test]
    fn gaussian_over_real_line() {
        let got = integrate_real_line(|x| (-x * x).exp(), 1.0, 30.0, Tolerance::relative(1e-13))
            .unwrap();
        let expected = std::f64::consts::PI.sqrt();
        assert!((got.value - expected).abs() < 1e-14, "{got:?}");
        assert!(got.error <= 1e-13 * expected);
    }

    #[test]
    fn endpoint_singularity() {
        // ∫_0^1 x^{-1/2} dx = 2
        let got = integrate(|x: f64| x.powf(-0.5), 0.0, 1.0, Tolerance::relative(1e-10)).unwrap();
        assert!((got.value - 2.0).abs() < 1e-9, "{got:?}");
    }

    #[test]
    fn kink_at_origin() {
        // ∫ e^{-|x|} dx = 2
        let got = integrate_real_line(|x: f64| (-x.abs()).exp(), 1.0, 800.0, Tolerance::relative(1e-13))
            .unwrap();
        assert!((got.value - 2.0).abs() < 1e-13, "{got:?}");
    }

    #[test]
    fn budget_exhaustion_reports_partial() {
        let err = integrate(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, Tolerance::relative(1e-15).with_max_evaluations(100))
            .unwrap_err();
        match err {
            Error::NonConvergence { evaluations, partial, .. } => {
                assert!(evaluations <= 100);
                assert!(partial.is_finite());
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(integrate(|x| x, 1.0, 0.0, Tolerance::relative(1e-8)).is_err());
        assert!(integrate(|x| x, 0.0, 1.0, Tolerance::relative(0.0)).is_err());
        assert!(integrate_real_line(|x| x, 0.0, 1.0, Tolerance::relative(1e-8)).is_err());
    }

    #[test]
    fn deterministic() {
        let f = |x: f64| (-x.abs().powf(3.0)).exp() * x.cos();
        let a = integrate_real_line(f, 1.0, 10.0, Tolerance::relative(1e-12)).unwrap();
        let b = integrate_real_line(f, 1.0, 10.0, Tolerance::relative(1e-12)).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }
}
