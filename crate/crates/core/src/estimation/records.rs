use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_nonnegative, ensure_positive, Error, Result};

/// One steady-state bench measurement, normalised to a single propeller.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteadyRecord {
    pub config_id: String,
    /// Propeller radius [m].
    pub radius: f64,
    pub prop_count: u32,
    /// Propeller-to-propeller distance [m]; 0 for a single rotor.
    pub spacing: f64,
    /// Propeller-to-ceiling distance [m].
    pub distance: f64,
    /// Drive setpoint index within one distance.
    pub setpoint: u32,
    pub voltage: f64,
    pub current: f64,
    /// Thrust per propeller [N].
    pub thrust: f64,
    /// Shaft torque [N·m], absent when torques cancel (multirotor rigs).
    pub torque: Option<f64>,
    pub omega: f64,
}

impl SteadyRecord {
    /// Propeller-to-ceiling ratio `R/D`.
    pub fn delta(&self) -> f64 {
        self.radius / self.distance
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("radius", self.radius)?;
        ensure_positive("distance", self.distance)?;
        ensure_nonnegative("spacing", self.spacing)?;
        ensure_nonnegative("thrust", self.thrust)?;
        ensure_positive("omega", self.omega)?;
        if !self.voltage.is_finite() || !self.current.is_finite() {
            return Err(Error::invalid("voltage/current", "must be finite"));
        }
        if let Some(t) = self.torque {
            if !t.is_finite() {
                return Err(Error::invalid("torque", "must be finite"));
            }
        }
        Ok(())
    }
}

/// Empirical ceiling coefficient at one distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaPoint {
    pub delta: f64,
    pub gamma: f64,
    /// Standard error of `gamma`; 0 or NaN when unknown.
    pub stderr: f64,
    pub n_points: usize,
}

/// Groups records by exact ceiling distance, ordered by increasing distance.
pub fn group_by_distance(records: &[SteadyRecord]) -> Vec<(f64, Vec<&SteadyRecord>)> {
    let mut groups: BTreeMap<u64, Vec<&SteadyRecord>> = BTreeMap::new();
    for r in records {
        // Bit patterns of positive floats sort like the floats themselves.
        groups.entry(r.distance.to_bits()).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|(bits, recs)| (f64::from_bits(bits), recs))
        .collect()
}

/// Common radius of a record set; mixing propellers is an error.
pub(crate) fn common_radius(records: &[SteadyRecord]) -> Result<f64> {
    let first = records
        .first()
        .ok_or_else(|| Error::InsufficientData("no records".into()))?
        .radius;
    if records.iter().any(|r| r.radius != first) {
        return Err(Error::invalid(
            "radius",
            "records mix propellers of different radius",
        ));
    }
    ensure_positive("radius", first)
}
