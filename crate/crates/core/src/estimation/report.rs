use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Outcome of a parameter fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub parameters: BTreeMap<String, f64>,
    /// Root-mean-square residual, in the units of the fitted residuals.
    pub residual_rms: f64,
    /// Objective value at the reported parameters.
    pub sse: f64,
    pub n_obs: usize,
    pub converged: bool,
    pub iterations: usize,
    /// False when the data cannot pin down every parameter.
    pub identifiable: bool,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub diagnostics: BTreeMap<String, f64>,
}

impl FitReport {
    pub fn parameter(&self, name: &str) -> Option<f64> {
        self.parameters.get(name).copied()
    }
}
