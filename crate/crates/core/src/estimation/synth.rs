//! Synthetic bench data generated from known model constants.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::SteadyRecord;
use crate::aero::{CeilingParams, Environment, GapRatio};
use crate::bemt::{flight_coefficients, PropellerGeometry};
use crate::error::{ensure_nonnegative, ensure_positive, Error, Result};
use crate::powertrain::MotorParams;

/// Ground-truth constants a dataset is generated from. `η` is carried by
/// the geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Truth {
    pub geometry: PropellerGeometry,
    pub ceiling: CeilingParams,
    pub motor: MotorParams,
}

impl Truth {
    /// 23-mm propeller, `η = 0.5`, `α₀ = 1.6`, `α₁ = 0`, coreless motor.
    pub fn bench_23mm() -> Self {
        Self {
            geometry: PropellerGeometry::small_23mm(),
            ceiling: CeilingParams::reduced(1.6).expect("valid constant"),
            motor: MotorParams::coreless_7x16(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SetpointKind {
    /// Setpoints are drive voltages [V]; `Ω` follows from the motor model.
    Voltage,
    /// Setpoints are rotation rates [rad/s].
    Omega,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    /// Ceiling distances [m].
    pub distances: Vec<f64>,
    pub setpoints: Vec<f64>,
    pub kind: SetpointKind,
}

impl Schedule {
    /// 68 log-spaced distances from 1 mm to 100 mm, 16 voltages 2.5–4.0 V.
    pub fn bench_23mm() -> Self {
        Self {
            distances: log_spaced(1e-3, 0.1, 68),
            setpoints: linear_spaced(2.5, 4.0, 16),
            kind: SetpointKind::Voltage,
        }
    }
}

/// Relative standard deviation of the multiplicative noise on each channel.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ChannelNoise {
    pub voltage: f64,
    pub current: f64,
    pub thrust: f64,
    pub torque: f64,
    pub omega: f64,
}

impl ChannelNoise {
    pub fn uniform(sigma: f64) -> Self {
        Self {
            voltage: sigma,
            current: sigma,
            thrust: sigma,
            torque: sigma,
            omega: sigma,
        }
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("noise.voltage", self.voltage),
            ("noise.current", self.current),
            ("noise.thrust", self.thrust),
            ("noise.torque", self.torque),
            ("noise.omega", self.omega),
        ] {
            ensure_nonnegative(name, v)?;
        }
        Ok(())
    }
}

/// `n` evenly spaced values from `start` to `stop` inclusive.
pub fn linear_spaced(start: f64, stop: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..n)
            .map(|i| {
                if i + 1 == n {
                    stop
                } else {
                    start + (stop - start) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// `n` logarithmically spaced values from `start` to `stop` inclusive.
pub fn log_spaced(start: f64, stop: f64, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = linear_spaced(start.ln(), stop.ln(), n)
        .into_iter()
        .map(f64::exp)
        .collect();
    // Pin the endpoints exactly; exp(ln x) need not round-trip.
    if n > 0 {
        v[0] = start;
    }
    if n > 1 {
        v[0] = start;
        v[n - 1] = stop;
    }
    v
}

/// Steady records for every `(distance, setpoint)` of `schedule`.
///
/// Noise is multiplicative Gaussian, drawn in the fixed order
/// voltage, current, thrust, torque, omega for every record, so a given seed
/// always yields the same dataset.
pub fn synthesize_dataset(
    truth: &Truth,
    schedule: &Schedule,
    noise: &ChannelNoise,
    seed: u64,
    env: &Environment,
) -> Result<Vec<SteadyRecord>> {
    noise.validate()?;
    if schedule.distances.is_empty() || schedule.setpoints.is_empty() {
        return Err(Error::invalid(
            "schedule",
            "needs at least one distance and one setpoint",
        ));
    }
    let geom = &truth.geometry;
    let motor = &truth.motor;
    let k = motor.back_emf_constant();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(schedule.distances.len() * schedule.setpoints.len());
    for &distance in &schedule.distances {
        let delta = GapRatio::from_distance(geom.radius(), distance)?;
        let (_, c_t, c_tau) = flight_coefficients(geom, delta, &truth.ceiling, env)?;
        for (i, &setpoint) in schedule.setpoints.iter().enumerate() {
            ensure_positive("setpoint", setpoint)?;
            let omega = match schedule.kind {
                SetpointKind::Voltage => motor.steady_omega(setpoint, c_tau)?,
                SetpointKind::Omega => setpoint,
            };
            let thrust = c_t * omega * omega;
            let torque = c_tau * omega * omega;
            let current = torque / k;
            let voltage = current * motor.internal_resistance() + k * omega;

            let mut draw = |sigma: f64| 1.0 + sigma * rng.sample::<f64, _>(StandardNormal);
            let f_v = draw(noise.voltage);
            let f_i = draw(noise.current);
            let f_t = draw(noise.thrust);
            let f_tau = draw(noise.torque);
            let f_w = draw(noise.omega);
            out.push(SteadyRecord {
                config_id: "synthetic".to_string(),
                radius: geom.radius(),
                prop_count: 1,
                spacing: 0.0,
                distance,
                setpoint: i as u32,
                voltage: voltage * f_v,
                current: current * f_i,
                thrust: thrust * f_t,
                torque: Some(torque * f_tau),
                omega: omega * f_w,
            });
        }
    }
    Ok(out)
}
