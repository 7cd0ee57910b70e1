use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer};
use thd_core::{
    HarrellDavis, Hf7, QuantileEstimator, QuantilePlan, TrimWidth, TrimmedHarrellDavis,
};

/// Estimator selector used by configs and the CLI.
///
/// Textual forms: `hf7`, `hd`, `thd` (width `1/sqrt(n)`) and `thd:<width>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EstimatorId {
    Hf7,
    Hd,
    Thd(TrimWidth),
}

impl EstimatorId {
    /// The three estimators compared throughout: HF7, HD and THD-SQRT.
    pub const DEFAULT_SET: [EstimatorId; 3] =
        [EstimatorId::Hf7, EstimatorId::Hd, EstimatorId::Thd(TrimWidth::Auto)];
}

impl QuantileEstimator for EstimatorId {
    fn estimate_sorted(&self, sorted: &[f64], p: f64) -> thd_core::Result<f64> {
        match *self {
            EstimatorId::Hf7 => Hf7.estimate_sorted(sorted, p),
            EstimatorId::Hd => HarrellDavis.estimate_sorted(sorted, p),
            EstimatorId::Thd(width) => TrimmedHarrellDavis { width }.estimate_sorted(sorted, p),
        }
    }

    fn plan(&self, n: usize, p: f64) -> Option<thd_core::Result<QuantilePlan>> {
        match *self {
            EstimatorId::Hf7 => Hf7.plan(n, p),
            EstimatorId::Hd => HarrellDavis.plan(n, p),
            EstimatorId::Thd(width) => TrimmedHarrellDavis { width }.plan(n, p),
        }
    }
}

impl fmt::Display for EstimatorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EstimatorId::Hf7 => f.write_str("hf7"),
            EstimatorId::Hd => f.write_str("hd"),
            EstimatorId::Thd(TrimWidth::Auto) => f.write_str("thd"),
            EstimatorId::Thd(TrimWidth::Fixed(w)) => write!(f, "thd:{w}"),
        }
    }
}

impl FromStr for EstimatorId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "hf7" => Ok(EstimatorId::Hf7),
            "hd" => Ok(EstimatorId::Hd),
            "thd" | "thd-sqrt" => Ok(EstimatorId::Thd(TrimWidth::Auto)),
            other => {
                let width = other
                    .strip_prefix("thd:")
                    .ok_or_else(|| format!("unknown estimator `{s}` (expected hf7, hd, thd or thd:<width>)"))?;
                let w: f64 = width.parse().map_err(|_| format!("invalid THD width `{width}`"))?;
                TrimWidth::Fixed(w).resolve(1).map_err(|e| e.to_string())?;
                Ok(EstimatorId::Thd(TrimWidth::Fixed(w)))
            }
        }
    }
}

impl<'de> Deserialize<'de> for EstimatorId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        for s in ["hf7", "hd", "thd", "thd:0.3"] {
            assert_eq!(s.parse::<EstimatorId>().unwrap().to_string(), s);
        }
        assert_eq!("THD-SQRT".parse::<EstimatorId>().unwrap(), EstimatorId::Thd(TrimWidth::Auto));
        assert!("thd:0".parse::<EstimatorId>().is_err());
        assert!("thd:abc".parse::<EstimatorId>().is_err());
        assert!("hf8".parse::<EstimatorId>().is_err());
    }
}
