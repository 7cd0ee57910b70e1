//! JSON configuration files for the simulations.
//!
//! Field names mirror [`Sim1Config`] and [`Sim2Config`]; distributions use
//! the `Family(key=value, ...)` notation. Example Simulation 1 config:
//!
//! ```json
//! {
//!   "spec": "ContaminatedNormal(epsilon=0.01, sigma=1, c=1000000)",
//!   "sample_size": 7,
//!   "replications": 10000,
//!   "p_estimated": 0.5,
//!   "report_quantiles": [0, 0.01, 0.02, 0.03, 0.04, 0.96, 0.97, 0.98, 0.99, 1],
//!   "estimators": ["hf7", "hd", "thd"],
//!   "seed": 42
//! }
//! ```
//!
//! Example Simulation 2 config (`targets` is optional and defaults to
//! `["hd", "thd"]`):
//!
//! ```json
//! {
//!   "specs": ["Normal(m=0, sd=1)", "Cauchy(x0=0, gamma=1)"],
//!   "sample_sizes": [5, 10, 20],
//!   "p_grid": [0.05, 0.25, 0.5, 0.75, 0.95],
//!   "samples_per_batch": 200,
//!   "batches": 101,
//!   "seed": 42
//! }
//! ```

use std::path::Path;

use serde::de::DeserializeOwned;

use crate::error::SimError;
use crate::simulation::{Sim1Config, Sim2Config};

/// Parses JSON, reporting the path of the offending field on failure.
pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T, SimError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        SimError::Config { path, message: e.into_inner().to_string() }
    })
}

pub fn parse_sim1(text: &str) -> Result<Sim1Config, SimError> {
    let cfg: Sim1Config = parse_json(text)?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn parse_sim2(text: &str) -> Result<Sim2Config, SimError> {
    let cfg: Sim2Config = parse_json(text)?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn read_text(path: &Path) -> Result<String, SimError> {
    std::fs::read_to_string(path).map_err(|e| SimError::io(path.display().to_string(), e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimator::EstimatorId;

    #[test]
    fn sim1_defaults() {
        let cfg = parse_sim1(
            r#"{"spec": "Frechet(shape=1)", "sample_size": 7, "replications": 10, "seed": 3}"#,
        )
        .unwrap();
        assert_eq!(cfg.p_estimated, 0.5);
        assert_eq!(cfg.report_quantiles.len(), 10);
        assert_eq!(cfg.estimators, EstimatorId::DEFAULT_SET.to_vec());
    }

    #[test]
    fn error_names_field_path() {
        let err = parse_sim2(
            r#"{"specs": ["Normal(m=0, sd=1)", "Bogus(x=1)"], "sample_sizes": [5],
                "p_grid": [0.5], "samples_per_batch": 2, "batches": 1, "seed": 1}"#,
        )
        .unwrap_err();
        match err {
            SimError::Config { path, .. } => assert_eq!(path, "specs[1]"),
            other => panic!("{other}"),
        }
        let err = parse_sim1(
            r#"{"spec": "Exp(rate=1)", "sample_size": "seven", "replications": 1, "seed": 1}"#,
        )
        .unwrap_err();
        assert!(matches!(err, SimError::Config { ref path, .. } if path == "sample_size"), "{err}");
        let err = parse_sim1(
            r#"{"spec": "Exp(rate=1)", "sample_size": 7, "replications": 1, "seed": 1, "extra": 0}"#,
        )
        .unwrap_err();
        assert!(matches!(err, SimError::Config { .. }));
    }

    #[test]
    fn semantic_validation_names_field() {
        let err = parse_sim1(
            r#"{"spec": "Exp(rate=1)", "sample_size": 7, "replications": 1, "seed": 1,
                "report_quantiles": [0.5, 1.5]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, SimError::Config { ref path, .. } if path == "report_quantiles[1]"));
    }
}
