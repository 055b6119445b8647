//! Order-fixed summary statistics.

/// Neumaier-compensated sum, accumulated strictly left to right.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

/// Sample mean, unbiased sample variance and standard error of the mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
}

impl Summary {
    /// Two-pass summary; `None` for fewer than two values.
    pub fn of(values: &[f64]) -> Option<Self> {
        let count = values.len();
        if count < 2 {
            return None;
        }
        let mean = compensated_sum(values.iter().copied()) / count as f64;
        let ss = compensated_sum(values.iter().map(|v| (v - mean) * (v - mean)));
        Some(Self {
            count,
            mean,
            variance: ss / (count - 1) as f64,
        })
    }

    pub fn std_dev(&self) -> f64 {
        self.variance.sqrt()
    }

    pub fn std_error(&self) -> f64 {
        (self.variance / self.count as f64).sqrt()
    }
}

/// Jackknife standard error of the unbiased sample variance.
///
/// Uses the leave-one-out identity SS₋ᵢ = SS − dᵢ² · m/(m − 1), where dᵢ is
/// the deviation from the full-sample mean. Needs at least three values.
pub fn jackknife_variance_stderr(values: &[f64]) -> Option<f64> {
    let m = values.len();
    if m < 3 {
        return None;
    }
    let mf = m as f64;
    let mean = compensated_sum(values.iter().copied()) / mf;
    let dev2: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    let ss = compensated_sum(dev2.iter().copied());
    let loo: Vec<f64> = dev2
        .iter()
        .map(|d2| (ss - d2 * mf / (mf - 1.0)) / (mf - 2.0))
        .collect();
    let loo_mean = compensated_sum(loo.iter().copied()) / mf;
    let spread = compensated_sum(loo.iter().map(|v| (v - loo_mean) * (v - loo_mean)));
    Some(((mf - 1.0) / mf * spread).sqrt())
}
