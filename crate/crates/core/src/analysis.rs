//! Studies built on fitted models: power saving against ceiling distance,
//! thrust amplification, resonance scaling and anomaly flagging.

use serde::{Deserialize, Serialize};

use crate::aero::{ceiling_coefficient, CeilingParams, Environment, GapRatio};
use crate::bemt::{inflow_ratio, PropellerGeometry};
use crate::error::{ensure_positive, Error, Result};
use crate::estimation::GammaPoint;
use crate::powertrain::{MotorParams, PowerBreakdown};

/// Default relative depth below the model for [`anomaly_scan`].
pub const DEFAULT_ANOMALY_THRESHOLD: f64 = 0.10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerCurvePoint {
    pub distance: f64,
    pub delta: f64,
    pub gamma: f64,
    pub mechanical_power: f64,
    pub input_power: f64,
}

/// Mechanical and input power needed to hold `thrust` (per propeller) at
/// each ceiling distance.
pub fn power_saving_curve(
    thrust: f64,
    geom: &PropellerGeometry,
    ceiling: &CeilingParams,
    motor: &MotorParams,
    c_tau: f64,
    distances: &[f64],
    env: &Environment,
) -> Result<Vec<PowerCurvePoint>> {
    ensure_positive("thrust", thrust)?;
    distances
        .iter()
        .map(|&d| {
            let delta = GapRatio::from_distance(geom.radius(), d)?;
            let gamma = ceiling_coefficient(delta, ceiling)?;
            let p = PowerBreakdown::for_thrust(thrust, gamma, geom, motor, c_tau, env)?;
            Ok(PowerCurvePoint {
                distance: d,
                delta: delta.value(),
                gamma,
                mechanical_power: p.mechanical_power,
                input_power: p.input_power,
            })
        })
        .collect()
}

/// Thrust gained at equal aerodynamic power, `γ^{2/3}`.
pub fn thrust_amplification(gamma: f64) -> Result<f64> {
    if !(gamma.is_finite() && gamma >= 1.0) {
        return Err(Error::invalid(
            "gamma",
            format!("must be >= 1, got {gamma}"),
        ));
    }
    Ok(gamma.powf(2.0 / 3.0))
}

/// `δ·g(δ)` with `g = v_i/ΩR` the inflow ratio at a given `γ`.
pub fn resonance_metric_at(geom: &PropellerGeometry, gamma: f64, delta: GapRatio) -> Result<f64> {
    Ok(delta.value() * inflow_ratio(geom, gamma, delta)?)
}

/// `δ·g(δ)` with `γ` taken from the ceiling model.
pub fn resonance_metric(
    geom: &PropellerGeometry,
    ceiling: &CeilingParams,
    delta: GapRatio,
) -> Result<f64> {
    let gamma = ceiling_coefficient(delta, ceiling)?;
    resonance_metric_at(geom, gamma, delta)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceScan {
    pub deltas: Vec<f64>,
    pub g_values: Vec<f64>,
    pub products: Vec<f64>,
}

pub fn resonance_scan(
    geom: &PropellerGeometry,
    ceiling: &CeilingParams,
    deltas: &[f64],
) -> Result<ResonanceScan> {
    let mut scan = ResonanceScan {
        deltas: Vec::with_capacity(deltas.len()),
        g_values: Vec::with_capacity(deltas.len()),
        products: Vec::with_capacity(deltas.len()),
    };
    for &d in deltas {
        let delta = GapRatio::new(d)?;
        let gamma = ceiling_coefficient(delta, ceiling)?;
        let g = inflow_ratio(geom, gamma, delta)?;
        scan.deltas.push(d);
        scan.g_values.push(g);
        scan.products.push(d * g);
    }
    Ok(scan)
}

/// `δ` of points whose empirical `γ` falls more than `threshold` (relative)
/// below the fitted model. Points above the model are never flagged.
pub fn anomaly_scan(
    points: &[GammaPoint],
    fitted: &CeilingParams,
    threshold: f64,
) -> Result<Vec<f64>> {
    let mut flagged = Vec::new();
    for p in points {
        let model = ceiling_coefficient(GapRatio::new(p.delta)?, fitted)?;
        if (model - p.gamma) / model > threshold {
            flagged.push(p.delta);
        }
    }
    Ok(flagged)
}
