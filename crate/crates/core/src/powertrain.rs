//! First-order brushed DC motor: `V = I·R_i + k·Ω`, `P_m = I·k·Ω`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::aero::{aerodynamic_power, Environment};
use crate::bemt::PropellerGeometry;
use crate::error::{ensure_nonnegative, ensure_positive, Error, Result};
use crate::estimation::regression::fit_through_origin;
use crate::estimation::{FitReport, SteadyRecord};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMotor")]
pub struct MotorParams {
    internal_resistance: f64,
    back_emf_constant: f64,
}

#[derive(Deserialize)]
struct RawMotor {
    internal_resistance: f64,
    back_emf_constant: f64,
}

impl TryFrom<RawMotor> for MotorParams {
    type Error = Error;

    fn try_from(raw: RawMotor) -> Result<Self> {
        MotorParams::new(raw.internal_resistance, raw.back_emf_constant)
    }
}

impl MotorParams {
    pub fn new(internal_resistance: f64, back_emf_constant: f64) -> Result<Self> {
        ensure_positive("internal_resistance", internal_resistance)?;
        ensure_positive("back_emf_constant", back_emf_constant)?;
        Ok(Self {
            internal_resistance,
            back_emf_constant,
        })
    }

    /// Coreless motor driving the 23-mm propeller: 1.58 Ω, 1.1 mV·s/rad.
    pub fn coreless_7x16() -> Self {
        Self::new(1.58, 1.1e-3).expect("valid preset")
    }

    /// `R_i` [Ω].
    pub fn internal_resistance(&self) -> f64 {
        self.internal_resistance
    }

    /// `k` [V·s/rad].
    pub fn back_emf_constant(&self) -> f64 {
        self.back_emf_constant
    }

    /// Steady rotation rate reached at drive voltage `voltage` with load
    /// torque `c_tau·Ω²`: positive root of `(R_i·c_τ/k)·Ω² + k·Ω − V = 0`.
    pub fn steady_omega(&self, voltage: f64, c_tau: f64) -> Result<f64> {
        ensure_positive("voltage", voltage)?;
        ensure_nonnegative("c_tau", c_tau)?;
        let k = self.back_emf_constant;
        let a = self.internal_resistance * c_tau / k;
        if a == 0.0 {
            return Ok(voltage / k);
        }
        let disc = (k * k + 4.0 * a * voltage).sqrt();
        // 2V / (k + √(k² + 4aV)) avoids cancellation for small a.
        Ok(2.0 * voltage / (k + disc))
    }
}

/// Power flow through a motor-propeller pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerBreakdown {
    pub input_power: f64,
    pub mechanical_power: f64,
    pub aerodynamic_power: f64,
}

impl PowerBreakdown {
    /// Powers needed to hold `thrust` at ceiling coefficient `gamma`, with
    /// `P_m = P_a/η` and `P_i` from the constant-`c_τ` motor relation.
    pub fn for_thrust(
        thrust: f64,
        gamma: f64,
        geom: &PropellerGeometry,
        motor: &MotorParams,
        c_tau: f64,
        env: &Environment,
    ) -> Result<Self> {
        let aero = aerodynamic_power(thrust, gamma, env, geom.disc_area())?;
        let mech = aero / geom.figure_of_merit();
        let input = input_power_from_mechanical(mech, c_tau, motor)?;
        Ok(Self {
            input_power: input,
            mechanical_power: mech,
            aerodynamic_power: aero,
        })
    }
}

/// `P_m = τ·Ω`.
pub fn mechanical_power_from_torque(torque: f64, omega: f64) -> Result<f64> {
    ensure_nonnegative("torque", torque)?;
    ensure_nonnegative("omega", omega)?;
    Ok(torque * omega)
}

/// `P_m = I·k·Ω`.
pub fn mechanical_power_from_motor(current: f64, omega: f64, motor: &MotorParams) -> Result<f64> {
    ensure_nonnegative("current", current)?;
    ensure_nonnegative("omega", omega)?;
    Ok(current * motor.back_emf_constant * omega)
}

/// Input power under a constant torque coefficient:
/// `P_i = c_τ^{2/3}·k⁻²·R_i·P_m^{4/3} + P_m`.
pub fn input_power_from_mechanical(
    mechanical_power: f64,
    c_tau: f64,
    motor: &MotorParams,
) -> Result<f64> {
    ensure_positive("mechanical_power", mechanical_power)?;
    ensure_positive("c_tau", c_tau)?;
    let k = motor.back_emf_constant;
    let loss = c_tau.powf(2.0 / 3.0) / (k * k)
        * motor.internal_resistance
        * mechanical_power.powf(4.0 / 3.0);
    Ok(loss + mechanical_power)
}

fn all_equal(values: impl Iterator<Item = f64>) -> bool {
    let mut it = values;
    match it.next() {
        None => true,
        Some(first) => it.all(|v| v == first),
    }
}

/// Two-stage linear identification of the motor constants.
///
/// Stage 1 regresses `I·V − τΩ` on `I²` (records with torque) for `R_i`.
/// Stage 2 regresses `V − I·R_i` on `Ω` (all records) for `k`. Both
/// regressions pass through the origin.
pub fn identify_motor(records: &[SteadyRecord]) -> Result<(MotorParams, FitReport)> {
    let with_torque: Vec<&SteadyRecord> = records.iter().filter(|r| r.torque.is_some()).collect();
    if with_torque.len() < 2 {
        return Err(Error::NotIdentifiable(format!(
            "motor identification needs at least 2 records with torque, got {}",
            with_torque.len()
        )));
    }
    if all_equal(with_torque.iter().map(|r| r.current)) {
        return Err(Error::NotIdentifiable("all currents are equal".into()));
    }
    if all_equal(records.iter().map(|r| r.omega)) {
        return Err(Error::NotIdentifiable(
            "all rotation rates are equal".into(),
        ));
    }

    let (x1, y1): (Vec<f64>, Vec<f64>) = with_torque
        .iter()
        .map(|r| {
            let tau = r.torque.unwrap_or_default();
            (r.current * r.current, r.current * r.voltage - tau * r.omega)
        })
        .unzip();
    let stage1 = fit_through_origin(&x1, &y1)
        .ok_or_else(|| Error::NotIdentifiable("degenerate currents".into()))?;

    let resistance = stage1.slope;
    let (x2, y2): (Vec<f64>, Vec<f64>) = records
        .iter()
        .map(|r| (r.omega, r.voltage - r.current * resistance))
        .unzip();
    let stage2 = fit_through_origin(&x2, &y2)
        .ok_or_else(|| Error::NotIdentifiable("degenerate rotation rates".into()))?;

    let motor = MotorParams::new(resistance, stage2.slope)
        .map_err(|e| Error::NotIdentifiable(format!("nonphysical motor constants: {e}")))?;

    let mut parameters = BTreeMap::new();
    parameters.insert("internal_resistance".to_string(), motor.internal_resistance);
    parameters.insert("back_emf_constant".to_string(), motor.back_emf_constant);
    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("stage1_rms_w".to_string(), stage1.rms);
    diagnostics.insert("stage2_rms_v".to_string(), stage2.rms);
    diagnostics.insert("internal_resistance_stderr".to_string(), stage1.stderr);
    diagnostics.insert("back_emf_constant_stderr".to_string(), stage2.stderr);
    let report = FitReport {
        parameters,
        residual_rms: stage2.rms,
        sse: stage2.rms * stage2.rms * records.len() as f64,
        n_obs: records.len(),
        converged: true,
        iterations: 1,
        identifiable: true,
        diagnostics,
    };
    Ok((motor, report))
}
