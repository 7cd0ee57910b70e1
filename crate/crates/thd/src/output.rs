//! CSV writers for simulation results. Floats use 17 significant digits.

use std::io::Write;

use crate::error::SimError;
use crate::format::g17;
use crate::simulation::{EfficiencyReport, Sim1Table};

pub const SIM1_HEADER: [&str; 3] = ["report_quantile", "estimator", "value"];
pub const SIM2_HEADER: [&str; 8] =
    ["distribution", "n", "p", "mse_hf7", "mse_hd", "mse_thd", "eff_hd", "eff_thd"];

pub fn write_sim1<W: Write>(table: &Sim1Table, out: W) -> Result<usize, SimError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SIM1_HEADER)?;
    for row in &table.rows {
        w.write_record([g17(row.report_quantile), row.estimator.clone(), g17(row.value)])?;
    }
    w.flush().map_err(|e| SimError::io("csv output", e))?;
    Ok(table.rows.len())
}

pub fn write_sim2<W: Write>(report: &EfficiencyReport, out: W) -> Result<usize, SimError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SIM2_HEADER)?;
    for r in &report.rows {
        w.write_record([
            r.distribution.clone(),
            r.n.to_string(),
            g17(r.p),
            g17(r.mse_hf7),
            g17(r.mse_hd),
            g17(r.mse_thd),
            g17(r.eff_hd),
            g17(r.eff_thd),
        ])?;
    }
    w.flush().map_err(|e| SimError::io("csv output", e))?;
    Ok(report.rows.len())
}

pub fn sim1_csv(table: &Sim1Table) -> Result<Vec<u8>, SimError> {
    let mut buf = Vec::new();
    write_sim1(table, &mut buf)?;
    Ok(buf)
}

pub fn sim2_csv(report: &EfficiencyReport) -> Result<Vec<u8>, SimError> {
    let mut buf = Vec::new();
    write_sim2(report, &mut buf)?;
    Ok(buf)
}
