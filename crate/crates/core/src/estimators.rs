//! Hyndman-Fan Type 7, Harrell-Davis and trimmed Harrell-Davis quantile
//! estimators.
//!
//! All three are linear in the order statistics, so each is expressed as a
//! [`QuantilePlan`] that depends only on `(n, p)` and is then applied to a
//! sorted sample. The simulation harness reuses one plan across thousands of
//! samples of the same size.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hdi::beta_hdi;
use crate::special::{regularized_incomplete_beta, BetaParams};

/// A validated sample, stored as its order statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    sorted: Vec<f64>,
}

impl Sample {
    /// Validates and sorts `values`.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        check_finite(&values)?;
        values.sort_unstable_by(f64::total_cmp);
        Ok(Self { sorted: values })
    }

    /// Fast path for callers that already hold sorted data. Order is checked
    /// in one linear pass; no sort is performed.
    pub fn from_sorted(values: Vec<f64>) -> Result<Self> {
        check_finite(&values)?;
        if let Some(i) = values.windows(2).position(|w| w[0] > w[1]) {
            return Err(Error::Domain { what: "from_sorted: value out of order", value: values[i + 1] });
        }
        Ok(Self { sorted: values })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.sorted
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.sorted
    }
}

fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Domain { what: "quantile probability", value: p })
    }
}

/// Width of the highest-density interval used for trimming.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum TrimWidth {
    /// `1 / sqrt(n)`.
    #[default]
    Auto,
    Fixed(f64),
}

impl TrimWidth {
    pub fn resolve(&self, n: usize) -> Result<f64> {
        match *self {
            TrimWidth::Auto => Ok(1.0 / libm::sqrt(n as f64)),
            TrimWidth::Fixed(w) if w.is_finite() && w > 0.0 && w <= 1.0 => Ok(w),
            TrimWidth::Fixed(w) => Err(Error::Domain { what: "trim width", value: w }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantileRequest {
    pub p: f64,
    pub trim_width: TrimWidth,
}

impl QuantileRequest {
    pub fn new(p: f64, trim_width: TrimWidth) -> Result<Self> {
        check_probability(p)?;
        if let TrimWidth::Fixed(_) = trim_width {
            trim_width.resolve(1)?;
        }
        Ok(Self { p, trim_width })
    }
}

/// Per-order-statistic weights.
///
/// Only a contiguous window is stored; weights outside it are zero. For the
/// trimmed estimator with automatic width the window holds `O(sqrt n)`
/// entries.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    n: usize,
    offset: usize,
    window: Vec<f64>,
}

impl WeightVector {
    fn point(n: usize, index: usize) -> Self {
        Self { n, offset: index, window: alloc::vec![1.0] }
    }

    fn from_cdf(n: usize, first: usize, cdf: &[f64]) -> Self {
        let window = cdf.windows(2).map(|w| w[1] - w[0]).collect();
        Self { n, offset: first, window }
    }

    /// Sample size the weights were built for.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Weight of the `i`-th order statistic, 0-based.
    pub fn get(&self, i: usize) -> f64 {
        i.checked_sub(self.offset)
            .and_then(|k| self.window.get(k))
            .copied()
            .unwrap_or(0.0)
    }

    /// 0-based index of the first stored weight.
    pub fn offset(&self) -> usize {
        self.offset
    }

    /// The stored weights, starting at [`offset`](Self::offset).
    pub fn window(&self) -> &[f64] {
        &self.window
    }

    pub fn to_dense(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i)).collect()
    }

    /// 1-based indices of the first and last strictly positive weight.
    pub fn support(&self) -> Option<(usize, usize)> {
        let first = self.window.iter().position(|&w| w > 0.0)?;
        let last = self.window.iter().rposition(|&w| w > 0.0)?;
        Some((self.offset + first + 1, self.offset + last + 1))
    }

    pub fn sum(&self) -> f64 {
        compensated_sum(self.window.iter().copied())
    }

    /// `Σ w_i x_(i)` over the stored window.
    pub fn apply(&self, sorted: &[f64]) -> f64 {
        debug_assert_eq!(sorted.len(), self.n);
        let xs = &sorted[self.offset..self.offset + self.window.len()];
        compensated_sum(xs.iter().zip(&self.window).map(|(x, w)| x * w))
    }
}

/// Neumaier's variant of Kahan summation.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if libm::fabs(sum) >= libm::fabs(v) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// A quantile estimate reduced to a fixed recipe for one `(n, p)`.
#[derive(Debug, Clone, PartialEq)]
pub enum QuantilePlan {
    /// `x_(lo) + frac (x_(hi) - x_(lo))`, 0-based indices.
    Interpolate { lo: usize, hi: usize, frac: f64 },
    Weighted(WeightVector),
}

impl QuantilePlan {
    pub fn apply(&self, sorted: &[f64]) -> f64 {
        match self {
            QuantilePlan::Interpolate { lo, hi, frac } => {
                let a = sorted[*lo];
                if *frac == 0.0 {
                    a
                } else {
                    a + frac * (sorted[*hi] - a)
                }
            }
            QuantilePlan::Weighted(w) => w.apply(sorted),
        }
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::EmptySample)
    } else {
        Ok(())
    }
}

pub fn hf7_plan(n: usize, p: f64) -> Result<QuantilePlan> {
    check_n(n)?;
    check_probability(p)?;
    let h = (n as f64 - 1.0) * p + 1.0;
    let lo = libm::floor(h);
    let hi = libm::ceil(h);
    Ok(QuantilePlan::Interpolate { lo: lo as usize - 1, hi: hi as usize - 1, frac: h - lo })
}

/// Harrell-Davis weights `I_{i/n}(α, β) - I_{(i-1)/n}(α, β)` with
/// `α = (n+1)p`, `β = (n+1)(1-p)`.
///
/// `p = 0` and `p = 1` make a shape parameter zero and are reported as
/// [`Error::BoundaryProbability`].
pub fn hd_weights(n: usize, p: f64) -> Result<WeightVector> {
    check_n(n)?;
    check_probability(p)?;
    if p == 0.0 || p == 1.0 {
        return Err(Error::BoundaryProbability { p });
    }
    let params = BetaParams::for_quantile(n, p)?;
    let nf = n as f64;
    let cdf = (0..=n)
        .map(|i| regularized_incomplete_beta(i as f64 / nf, params))
        .collect::<Result<Vec<_>>>()?;
    Ok(WeightVector::from_cdf(n, 0, &cdf))
}

/// Trimmed Harrell-Davis weights: the beta CDF truncated to its
/// highest-density interval `[L, R]` of the given width and renormalized.
///
/// Nonzero weights sit at 1-based positions `⌊L n⌋ + 1 ..= ⌈R n⌉`.
pub fn thd_weights(n: usize, p: f64, width: f64) -> Result<WeightVector> {
    check_n(n)?;
    check_probability(p)?;
    if p == 0.0 || p == 1.0 {
        return Err(Error::BoundaryProbability { p });
    }
    let params = BetaParams::for_quantile(n, p)?;
    let hdi = beta_hdi(params, width)?;
    if hdi.is_degenerate() {
        // only reachable for n = 1
        return Ok(WeightVector::point(n, 0));
    }
    let (lower, upper) = (hdi.lower, hdi.upper);
    let cdf_lower = regularized_incomplete_beta(lower, params)?;
    let cdf_upper = regularized_incomplete_beta(upper.min(1.0), params)?;
    let mass = cdf_upper - cdf_lower;
    if mass.is_nan() || mass <= 0.0 {
        return Err(Error::NoConvergence { what: "thd_weights: interval carries no mass" });
    }

    let nf = n as f64;
    let first = (libm::floor(lower * nf) as usize).min(n - 1);
    let last = (libm::ceil(upper * nf) as usize).clamp(first + 1, n);
    let cdf = (first..=last)
        .map(|i| {
            let x = i as f64 / nf;
            if x <= lower {
                Ok(0.0)
            } else if x >= upper {
                Ok(1.0)
            } else {
                Ok((regularized_incomplete_beta(x, params)? - cdf_lower) / mass)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WeightVector::from_cdf(n, first, &cdf))
}

pub fn hd_plan(n: usize, p: f64) -> Result<QuantilePlan> {
    check_n(n)?;
    check_probability(p)?;
    if p == 0.0 {
        return Ok(QuantilePlan::Weighted(WeightVector::point(n, 0)));
    }
    if p == 1.0 {
        return Ok(QuantilePlan::Weighted(WeightVector::point(n, n - 1)));
    }
    hd_weights(n, p).map(QuantilePlan::Weighted)
}

pub fn thd_plan(n: usize, p: f64, width: TrimWidth) -> Result<QuantilePlan> {
    check_n(n)?;
    check_probability(p)?;
    let width = width.resolve(n)?;
    if p == 0.0 {
        return Ok(QuantilePlan::Weighted(WeightVector::point(n, 0)));
    }
    if p == 1.0 {
        return Ok(QuantilePlan::Weighted(WeightVector::point(n, n - 1)));
    }
    thd_weights(n, p, width).map(QuantilePlan::Weighted)
}

pub fn hf7_quantile(sample: &Sample, p: f64) -> Result<f64> {
    hf7_quantile_sorted(sample.as_slice(), p)
}

pub fn hd_quantile(sample: &Sample, p: f64) -> Result<f64> {
    hd_quantile_sorted(sample.as_slice(), p)
}

pub fn thd_quantile(sample: &Sample, request: QuantileRequest) -> Result<f64> {
    thd_quantile_sorted(sample.as_slice(), request)
}

/// Pre-sorted variant of [`hf7_quantile`]. `sorted` must be ascending.
pub fn hf7_quantile_sorted(sorted: &[f64], p: f64) -> Result<f64> {
    Ok(hf7_plan(sorted.len(), p)?.apply(sorted))
}

pub fn hd_quantile_sorted(sorted: &[f64], p: f64) -> Result<f64> {
    Ok(hd_plan(sorted.len(), p)?.apply(sorted))
}

pub fn thd_quantile_sorted(sorted: &[f64], request: QuantileRequest) -> Result<f64> {
    Ok(thd_plan(sorted.len(), request.p, request.trim_width)?.apply(sorted))
}

/// A quantile estimator over sorted samples.
pub trait QuantileEstimator: Sync {
    fn estimate_sorted(&self, sorted: &[f64], p: f64) -> Result<f64>;

    /// Sample-independent recipe for `(n, p)`, when the estimator is linear
    /// in the order statistics. Applying the plan must give exactly the
    /// result of [`estimate_sorted`](Self::estimate_sorted).
    fn plan(&self, _n: usize, _p: f64) -> Option<Result<QuantilePlan>> {
        None
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Hf7;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct HarrellDavis;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TrimmedHarrellDavis {
    pub width: TrimWidth,
}

impl QuantileEstimator for Hf7 {
    fn estimate_sorted(&self, sorted: &[f64], p: f64) -> Result<f64> {
        hf7_quantile_sorted(sorted, p)
    }

    fn plan(&self, n: usize, p: f64) -> Option<Result<QuantilePlan>> {
        Some(hf7_plan(n, p))
    }
}

impl QuantileEstimator for HarrellDavis {
    fn estimate_sorted(&self, sorted: &[f64], p: f64) -> Result<f64> {
        hd_quantile_sorted(sorted, p)
    }

    fn plan(&self, n: usize, p: f64) -> Option<Result<QuantilePlan>> {
        Some(hd_plan(n, p))
    }
}

impl QuantileEstimator for TrimmedHarrellDavis {
    fn estimate_sorted(&self, sorted: &[f64], p: f64) -> Result<f64> {
        Ok(thd_plan(sorted.len(), p, self.width)?.apply(sorted))
    }

    fn plan(&self, n: usize, p: f64) -> Option<Result<QuantilePlan>> {
        Some(thd_plan(n, p, self.width))
    }
}
