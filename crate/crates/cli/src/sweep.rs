//! Threshold sweeps: rerun the merge phase across a parameter range and
//! chart how the number of groups responds.

use crate::errors::{CliError, CliResult};
use rolegraph::{form_groups, merge_pass, ConnectionSnapshot, FormationConfig, MergeConfig};
use std::fmt::Write as _;

/// Which merge parameter a sweep varies; everything else stays at its
/// default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SweepParam {
    /// The similarity bar for ordinary groups.
    SLo,
    /// The cohesion value from which the stricter similarity bar applies.
    KHi,
}

impl SweepParam {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParam::SLo => "s_lo",
            SweepParam::KHi => "k_hi",
        }
    }
}

/// The sweep points for an inclusive `from..=to` range with a positive
/// `step`.
pub fn sweep_points(from: f64, to: f64, step: f64) -> CliResult<Vec<f64>> {
    if !(from.is_finite() && to.is_finite() && step.is_finite()) || step <= 0.0 {
        return Err(CliError::Validation(
            "sweep range needs finite bounds and a positive step".into(),
        ));
    }
    if to < from {
        return Err(CliError::Validation("sweep range is empty (to < from)".into()));
    }
    let mut points = Vec::new();
    let mut index = 0u32;
    loop {
        let value = from + step * f64::from(index);
        // A hair of slack so ranges like 5..=75 by 10 include the end
        // point despite accumulated rounding.
        if value > to + step * 1e-9 {
            break;
        }
        points.push(value);
        index += 1;
    }
    Ok(points)
}

/// Number of groups after forming and merging with the given merge
/// settings.
fn group_count(snapshot: &ConnectionSnapshot, merge: &MergeConfig) -> CliResult<usize> {
    let formed = form_groups(snapshot, &FormationConfig::default())?;
    let merged = merge_pass(&formed.partitioning, snapshot, merge)?;
    Ok(merged.partitioning.len())
}

/// Runs the sweep and renders the result as CSV (`param,value,groups`).
pub fn run_sweep(
    snapshot: &ConnectionSnapshot,
    param: SweepParam,
    from: f64,
    to: f64,
    step: f64,
) -> CliResult<String> {
    let points = sweep_points(from, to, step)?;
    let mut rows = Vec::new();
    for value in points {
        let mut config = MergeConfig::default();
        match param {
            SweepParam::SLo => config.s_lo = value,
            SweepParam::KHi => {
                if value.fract() != 0.0 || value < 0.0 || value > u32::MAX as f64 {
                    return Err(CliError::Validation(format!(
                        "k_hi sweep values must be non-negative integers (got {value})"
                    )));
                }
                config.k_hi = value as u32;
            }
        }
        rows.push((value, group_count(snapshot, &config)?));
    }
    let mut out = String::from("param,value,groups\n");
    for (value, groups) in rows {
        writeln!(out, "{},{},{groups}", param.name(), plain_number(value))
            .expect("string write");
    }
    Ok(out)
}

/// Formats whole numbers without a trailing ".0" so sweep CSVs stay
/// tidy for the common integer ranges.
pub fn plain_number(value: f64) -> String {
    if value.fract() == 0.0 && value.abs() < 1e15 {
        format!("{value:.0}")
    } else {
        format!("{value}")
    }
}
