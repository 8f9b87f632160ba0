use std::path::Path;

use serde::Serialize;

use super::InitialState;
use crate::channels::{ChannelReport, QubitChannel};
use crate::error::Result;
use crate::families::Params;
use crate::oracle::{optimal_moments, NumericMoments, QuadratureSpec};
use crate::states::TeleportProfile;

/// Formula and quadrature must agree to this for the oracle check to pass.
pub const ORACLE_TOL: f64 = 1e-6;

#[derive(Clone, Debug, Serialize)]
pub struct OracleCheck {
    pub quadrature: QuadratureSpec,
    pub numeric: NumericMoments,
    /// `None` when the closed form does not apply (`det T >= 0`).
    pub agrees: Option<bool>,
    pub max_gap: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub channel: String,
    pub params: Params,
    pub initial: String,
    pub report: ChannelReport,
    pub concurrence_before: f64,
    pub concurrence_after: f64,
    pub profile: TeleportProfile,
    pub oracle: OracleCheck,
}

impl AnalysisReport {
    pub fn oracle_disagrees(&self) -> bool {
        self.oracle.agrees == Some(false)
    }
}

pub fn analyze(channel: &QubitChannel, initial: &InitialState, q: &QuadratureSpec) -> Result<AnalysisReport> {
    let before = initial.resolve(channel.params())?;
    let after = channel.apply_to_bob(&before)?;
    let profile = after.profile();
    let numeric = optimal_moments(&after, q);
    let max_gap = match (profile.f_max, profile.delta) {
        (Some(f), Some(d)) => Some((numeric.mean_f - f).abs().max((numeric.delta - d).abs())),
        _ => None,
    };
    Ok(AnalysisReport {
        channel: channel.name().to_string(),
        params: channel.params().clone(),
        initial: initial.to_string(),
        report: channel.report(),
        concurrence_before: before.concurrence(),
        concurrence_after: after.concurrence(),
        profile,
        oracle: OracleCheck { quadrature: *q, numeric, agrees: max_gap.map(|g| g <= ORACLE_TOL), max_gap },
    })
}

/// Load a channel document from disk and analyze it.
pub fn analyze_file(path: &Path, initial: &InitialState, q: &QuadratureSpec) -> Result<AnalysisReport> {
    analyze(&QubitChannel::load(path)?, initial, q)
}
