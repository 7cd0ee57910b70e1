//! Simulation harness, file formats and command-line front end for the
//! `thd-core` quantile estimators.

pub mod cli;
pub mod config;
mod error;
pub mod estimator;
pub mod format;
pub mod output;
pub mod simulation;

pub use error::SimError;
pub use estimator::EstimatorId;
pub use simulation::{
    estimate_mse, run_sim1, run_sim2, EfficiencyReport, EfficiencyRow, Sim1Config, Sim1Table,
    Sim2Config,
};
