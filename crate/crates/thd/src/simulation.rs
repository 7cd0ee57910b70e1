//! Deterministic Monte-Carlo harness.
//!
//! * Simulation 1 draws `replications` samples from one distribution,
//!   estimates a quantile with each estimator and summarizes the spread of
//!   the estimates at a list of report quantiles.
//! * Simulation 2 measures relative efficiency `MSE(HF7) / MSE(target)`,
//!   where each MSE is the median over `batches` of the mean squared error of
//!   `samples_per_batch` estimates.
//!
//! Every sample comes from its own [`RngStream`], addressed by a stable hash
//! of what it is used for, and results are reduced in a fixed order, so output
//! does not depend on the number of worker threads.

use rayon::prelude::*;
use serde::Deserialize;
use thd_core::estimators::hf7_quantile_sorted;
use thd_core::{DistributionSpec, QuantileEstimator, QuantilePlan, RngStream};

use crate::error::SimError;
use crate::estimator::EstimatorId;

/// Report quantiles of the robustness tables.
pub const DEFAULT_REPORT_QUANTILES: [f64; 10] =
    [0.0, 0.01, 0.02, 0.03, 0.04, 0.96, 0.97, 0.98, 0.99, 1.0];

fn default_report_quantiles() -> Vec<f64> {
    DEFAULT_REPORT_QUANTILES.to_vec()
}

fn default_estimators() -> Vec<EstimatorId> {
    EstimatorId::DEFAULT_SET.to_vec()
}

fn default_p_estimated() -> f64 {
    0.5
}

fn default_targets() -> [EstimatorId; 2] {
    [EstimatorId::DEFAULT_SET[1], EstimatorId::DEFAULT_SET[2]]
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sim1Config {
    #[serde(deserialize_with = "de_spec")]
    pub spec: DistributionSpec,
    pub sample_size: usize,
    pub replications: usize,
    #[serde(default = "default_p_estimated")]
    pub p_estimated: f64,
    #[serde(default = "default_report_quantiles")]
    pub report_quantiles: Vec<f64>,
    #[serde(default = "default_estimators")]
    pub estimators: Vec<EstimatorId>,
    pub seed: u64,
}

impl Sim1Config {
    /// Full-scale settings: 10 000 medians of samples of size 7 with HF7, HD
    /// and THD-SQRT.
    pub fn full(spec: DistributionSpec, seed: u64) -> Self {
        Self {
            spec,
            sample_size: 7,
            replications: 10_000,
            p_estimated: 0.5,
            report_quantiles: default_report_quantiles(),
            estimators: default_estimators(),
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        self.spec.validate().map_err(|e| SimError::config("spec", e))?;
        if self.sample_size == 0 {
            return Err(SimError::config("sample_size", "must be at least 1"));
        }
        if self.replications == 0 {
            return Err(SimError::config("replications", "must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.p_estimated) {
            return Err(SimError::config("p_estimated", "must lie in [0, 1]"));
        }
        if let Some(i) = self.report_quantiles.iter().position(|q| !(0.0..=1.0).contains(q)) {
            return Err(SimError::config(format!("report_quantiles[{i}]"), "must lie in [0, 1]"));
        }
        if self.estimators.is_empty() {
            return Err(SimError::config("estimators", "must not be empty"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sim2Config {
    #[serde(deserialize_with = "de_specs")]
    pub specs: Vec<DistributionSpec>,
    pub sample_sizes: Vec<usize>,
    pub p_grid: Vec<f64>,
    pub samples_per_batch: usize,
    pub batches: usize,
    pub seed: u64,
    /// Estimators reported in the `hd` and `thd` column slots; the baseline
    /// is always HF7.
    #[serde(default = "default_targets")]
    pub targets: [EstimatorId; 2],
}

impl Sim2Config {
    pub fn validate(&self) -> Result<(), SimError> {
        for (i, spec) in self.specs.iter().enumerate() {
            spec.validate().map_err(|e| SimError::config(format!("specs[{i}]"), e))?;
        }
        if self.specs.is_empty() {
            return Err(SimError::config("specs", "must not be empty"));
        }
        if self.sample_sizes.is_empty() {
            return Err(SimError::config("sample_sizes", "must not be empty"));
        }
        if let Some(i) = self.sample_sizes.iter().position(|&n| n == 0) {
            return Err(SimError::config(format!("sample_sizes[{i}]"), "must be at least 1"));
        }
        if self.p_grid.is_empty() {
            return Err(SimError::config("p_grid", "must not be empty"));
        }
        if let Some(i) = self.p_grid.iter().position(|&p| !(p > 0.0 && p < 1.0)) {
            return Err(SimError::config(format!("p_grid[{i}]"), "must lie in (0, 1)"));
        }
        if self.samples_per_batch == 0 {
            return Err(SimError::config("samples_per_batch", "must be at least 1"));
        }
        if self.batches.is_multiple_of(2) {
            return Err(SimError::config("batches", "must be odd so the median batch is unique"));
        }
        Ok(())
    }
}

fn de_spec<'de, D: serde::Deserializer<'de>>(d: D) -> Result<DistributionSpec, D::Error> {
    let s = String::deserialize(d)?;
    s.parse().map_err(serde::de::Error::custom)
}

fn de_specs<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Vec<DistributionSpec>, D::Error> {
    #[derive(Deserialize)]
    struct Wrapped(#[serde(deserialize_with = "de_spec")] DistributionSpec);
    Ok(Vec::<Wrapped>::deserialize(d)?.into_iter().map(|w| w.0).collect())
}

/// Stable 64-bit stream id for one sample of Simulation 2: FNV-1a over the
/// canonical distribution text, `n`, the bits of `p`, the batch index and the
/// sample index, followed by the SplitMix64 finalizer.
pub fn stream_id(spec: &DistributionSpec, n: usize, p: f64, batch: usize, sample: usize) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = OFFSET;
    let mut feed = |bytes: &[u8]| {
        for &b in bytes {
            h ^= u64::from(b);
            h = h.wrapping_mul(PRIME);
        }
    };
    feed(spec.to_string().as_bytes());
    feed(&[0xff]);
    feed(&(n as u64).to_le_bytes());
    feed(&p.to_bits().to_le_bytes());
    feed(&(batch as u64).to_le_bytes());
    feed(&(sample as u64).to_le_bytes());

    let mut z = h;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Runs `f` on a dedicated pool with `threads` workers.
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T, SimError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| SimError::Runtime(e.to_string()))?;
    Ok(pool.install(f))
}

enum Prepared<'a> {
    Plan(QuantilePlan),
    Direct(&'a dyn QuantileEstimator),
}

impl Prepared<'_> {
    fn new<'a>(est: &'a dyn QuantileEstimator, n: usize, p: f64) -> Result<Prepared<'a>, SimError> {
        match est.plan(n, p) {
            Some(plan) => Ok(Prepared::Plan(plan?)),
            None => Ok(Prepared::Direct(est)),
        }
    }

    fn estimate(&self, sorted: &[f64], p: f64) -> Result<f64, SimError> {
        match self {
            Prepared::Plan(plan) => Ok(plan.apply(sorted)),
            Prepared::Direct(est) => Ok(est.estimate_sorted(sorted, p)?),
        }
    }
}

fn sorted_sample(spec: &DistributionSpec, stream: RngStream, n: usize) -> Result<Vec<f64>, SimError> {
    let mut xs = spec.sample(stream, n)?;
    xs.sort_unstable_by(f64::total_cmp);
    Ok(xs)
}

/// Per-replication estimates of Simulation 1, one vector per estimator in
/// configuration order. Replication `r` uses stream `r`.
pub fn sim1_estimates(config: &Sim1Config) -> Result<Vec<Vec<f64>>, SimError> {
    config.validate()?;
    let estimators: Vec<&dyn QuantileEstimator> =
        config.estimators.iter().map(|e| e as &dyn QuantileEstimator).collect();
    sim1_estimates_with(config, &estimators)
}

fn sim1_estimates_with(
    config: &Sim1Config,
    estimators: &[&dyn QuantileEstimator],
) -> Result<Vec<Vec<f64>>, SimError> {
    let (n, p) = (config.sample_size, config.p_estimated);
    let prepared = estimators
        .iter()
        .map(|&e| Prepared::new(e, n, p))
        .collect::<Result<Vec<_>, _>>()?;

    let per_rep: Vec<Vec<f64>> = (0..config.replications)
        .into_par_iter()
        .map(|r| {
            let xs = sorted_sample(&config.spec, RngStream::new(config.seed, r as u64), n)?;
            prepared.iter().map(|est| est.estimate(&xs, p)).collect()
        })
        .collect::<Result<_, SimError>>()?;

    Ok((0..estimators.len())
        .map(|k| per_rep.iter().map(|row| row[k]).collect())
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sim1Row {
    pub report_quantile: f64,
    pub estimator: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sim1Table {
    pub rows: Vec<Sim1Row>,
}

impl Sim1Table {
    /// Value for one `(report quantile, estimator)` cell.
    pub fn get(&self, report_quantile: f64, estimator: &str) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.report_quantile == report_quantile && r.estimator == estimator)
            .map(|r| r.value)
    }
}

/// Simulation 1. The spread of each estimator's estimates is summarized with
/// HF7 at every report quantile; rows are ordered by report quantile, then
/// estimator.
pub fn run_sim1(config: &Sim1Config) -> Result<Sim1Table, SimError> {
    let estimates = sim1_estimates(config)?;
    let sorted: Vec<Vec<f64>> = estimates
        .into_iter()
        .map(|mut v| {
            v.sort_unstable_by(f64::total_cmp);
            v
        })
        .collect();
    let mut rows = Vec::with_capacity(config.report_quantiles.len() * config.estimators.len());
    for &q in &config.report_quantiles {
        for (id, values) in config.estimators.iter().zip(&sorted) {
            rows.push(Sim1Row {
                report_quantile: q,
                estimator: id.to_string(),
                value: hf7_quantile_sorted(values, q)?,
            });
        }
    }
    Ok(Sim1Table { rows })
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_unstable_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    }
}

/// Batch-median MSE of each estimator for one `(spec, n, p)` cell. All
/// estimators see the same samples.
pub fn cell_mse(
    estimators: &[&dyn QuantileEstimator],
    spec: &DistributionSpec,
    n: usize,
    p: f64,
    samples_per_batch: usize,
    batches: usize,
    seed: u64,
) -> Result<Vec<f64>, SimError> {
    if batches == 0 || samples_per_batch == 0 || n == 0 {
        return Err(SimError::config("batches", "batches, samples_per_batch and n must be positive"));
    }
    let theta = spec.quantile(p)?;
    let prepared = estimators
        .iter()
        .map(|&e| Prepared::new(e, n, p))
        .collect::<Result<Vec<_>, _>>()?;

    let batch_means: Vec<Vec<f64>> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut sums = vec![0.0; prepared.len()];
            for s in 0..samples_per_batch {
                let stream = RngStream::new(seed, stream_id(spec, n, p, b, s));
                let xs = sorted_sample(spec, stream, n)?;
                for (sum, est) in sums.iter_mut().zip(&prepared) {
                    let err = est.estimate(&xs, p)? - theta;
                    *sum += err * err;
                }
            }
            Ok(sums.into_iter().map(|s| s / samples_per_batch as f64).collect())
        })
        .collect::<Result<_, SimError>>()?;

    Ok((0..prepared.len())
        .map(|k| median(&batch_means.iter().map(|row| row[k]).collect::<Vec<_>>()))
        .collect())
}

/// Batch-median estimate of `E[(Q(p) - θ(p))²]` for one estimator.
pub fn estimate_mse(
    estimator: &dyn QuantileEstimator,
    spec: &DistributionSpec,
    n: usize,
    p: f64,
    samples_per_batch: usize,
    batches: usize,
    seed: u64,
) -> Result<f64, SimError> {
    Ok(cell_mse(&[estimator], spec, n, p, samples_per_batch, batches, seed)?[0])
}

#[derive(Debug, Clone, PartialEq)]
pub struct EfficiencyRow {
    pub distribution: String,
    pub n: usize,
    pub p: f64,
    pub mse_hf7: f64,
    pub mse_hd: f64,
    pub mse_thd: f64,
    pub eff_hd: f64,
    pub eff_thd: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EfficiencyReport {
    pub rows: Vec<EfficiencyRow>,
}

impl EfficiencyReport {
    pub fn get(&self, distribution: &str, n: usize, p: f64) -> Option<&EfficiencyRow> {
        self.rows.iter().find(|r| r.distribution == distribution && r.n == n && r.p == p)
    }
}

/// Simulation 2: relative efficiency of the two target estimators against
/// HF7 for every `(spec, n, p)` cell, in configuration order.
pub fn run_sim2(config: &Sim2Config) -> Result<EfficiencyReport, SimError> {
    config.validate()?;
    let [hd, thd] = &config.targets;
    run_sim2_with(config, &[&EstimatorId::Hf7, hd, thd])
}

/// [`run_sim2`] with arbitrary estimators in the baseline, `hd` and `thd`
/// slots.
pub fn run_sim2_with(
    config: &Sim2Config,
    estimators: &[&dyn QuantileEstimator; 3],
) -> Result<EfficiencyReport, SimError> {
    let mut rows = Vec::new();
    for spec in &config.specs {
        for &n in &config.sample_sizes {
            for &p in &config.p_grid {
                let mse = cell_mse(
                    estimators,
                    spec,
                    n,
                    p,
                    config.samples_per_batch,
                    config.batches,
                    config.seed,
                )?;
                rows.push(EfficiencyRow {
                    distribution: spec.to_string(),
                    n,
                    p,
                    mse_hf7: mse[0],
                    mse_hd: mse[1],
                    mse_thd: mse[2],
                    eff_hd: mse[0] / mse[1],
                    eff_thd: mse[0] / mse[2],
                });
            }
        }
    }
    Ok(EfficiencyReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_odd_and_even() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        assert_eq!(median(&[7.0]), 7.0);
    }

    #[test]
    fn stream_ids_differ_per_coordinate() {
        let spec = DistributionSpec::Normal { mean: 0.0, sd: 1.0 };
        let base = stream_id(&spec, 10, 0.5, 0, 0);
        assert_eq!(base, stream_id(&spec, 10, 0.5, 0, 0));
        let others = [
            stream_id(&DistributionSpec::Normal { mean: 0.0, sd: 2.0 }, 10, 0.5, 0, 0),
            stream_id(&spec, 11, 0.5, 0, 0),
            stream_id(&spec, 10, 0.25, 0, 0),
            stream_id(&spec, 10, 0.5, 1, 0),
            stream_id(&spec, 10, 0.5, 0, 1),
        ];
        assert!(others.iter().all(|&id| id != base));
    }

    #[test]
    fn sim2_validation() {
        let mut cfg = Sim2Config {
            specs: vec![DistributionSpec::Normal { mean: 0.0, sd: 1.0 }],
            sample_sizes: vec![5],
            p_grid: vec![0.5],
            samples_per_batch: 10,
            batches: 3,
            seed: 1,
            targets: default_targets(),
        };
        assert!(cfg.validate().is_ok());
        cfg.batches = 4;
        assert!(cfg.validate().is_err());
        cfg.batches = 3;
        cfg.p_grid = vec![0.0];
        assert!(cfg.validate().is_err());
    }
}
