//! Empirical ceiling coefficients from power/thrust slopes.
//!
//! At each distance the mechanical power is linear in `T·√(T/2ρA)` with
//! slope `1/(η·γ)`. The farthest distance fixes `η`; every other slope then
//! gives a `γ`.

use std::collections::BTreeMap;

use log::warn;
use serde::{Deserialize, Serialize};

use super::ceiling::{weights_from_stderr, CEILING_BOUNDS};
use super::records::{common_radius, group_by_distance};
use super::regression::fit_through_origin;
use super::solver::{minimize, SolverOptions};
use super::{FitReport, GammaPoint, SteadyRecord};
use crate::aero::{ceiling_coefficient, gamma_unchecked, CeilingParams, Environment, GapRatio};
use crate::error::{Error, Result};
use crate::powertrain::MotorParams;

/// Largest `δ` at which the farthest group may be treated as `γ = 1`.
pub const MAX_ANCHOR_DELTA: f64 = 0.5;

/// Where the mechanical power of a record comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MechanicalPowerSource {
    /// `P_m = τ·Ω`; every record needs a torque.
    Torque,
    /// `P_m = I·k·Ω` from identified motor constants.
    Motor(MotorParams),
}

/// How `η` is separated from `γ` at the farthest distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EtaAnchor {
    /// Assume `γ = 1` at the farthest distance (requires `δ < 0.5`).
    UnitGamma,
    /// Use `γ` of a known ceiling model at the farthest distance.
    Model(CeilingParams),
}

/// Slope of `P_m` against `T·√(T/2ρA)` at one distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlopePoint {
    pub distance: f64,
    pub delta: f64,
    pub slope: f64,
    pub stderr: f64,
    pub n_points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EtaGammaFit {
    pub eta: f64,
    pub points: Vec<GammaPoint>,
    pub slopes: Vec<SlopePoint>,
    pub warnings: Vec<String>,
}

fn mechanical_power(record: &SteadyRecord, source: &MechanicalPowerSource) -> Result<f64> {
    match source {
        MechanicalPowerSource::Torque => record.torque.map(|t| t * record.omega).ok_or_else(|| {
            Error::InsufficientData(format!(
                "record at distance {} setpoint {} has no torque for P_m = τΩ",
                record.distance, record.setpoint
            ))
        }),
        MechanicalPowerSource::Motor(m) => {
            Ok(record.current * m.back_emf_constant() * record.omega)
        }
    }
}

/// Per-distance slopes of mechanical power against ideal power.
pub(crate) fn power_slopes(
    records: &[SteadyRecord],
    env: &Environment,
    source: &MechanicalPowerSource,
    warnings: &mut Vec<String>,
) -> Result<Vec<SlopePoint>> {
    let radius = common_radius(records)?;
    let area = std::f64::consts::PI * radius * radius;
    let rho = env.air_density();
    let mut slopes = Vec::new();
    for (distance, group) in group_by_distance(records) {
        if group.len() < 2 {
            let msg = format!(
                "distance {distance} m has {} point(s); skipped",
                group.len()
            );
            warn!("{msg}");
            warnings.push(msg);
            continue;
        }
        let mut x = Vec::with_capacity(group.len());
        let mut y = Vec::with_capacity(group.len());
        for r in &group {
            r.validate()?;
            x.push(r.thrust * (r.thrust / (2.0 * rho * area)).sqrt());
            y.push(mechanical_power(r, source)?);
        }
        match fit_through_origin(&x, &y) {
            Some(fit) if fit.slope > 0.0 => slopes.push(SlopePoint {
                distance,
                delta: radius / distance,
                slope: fit.slope,
                stderr: fit.stderr,
                n_points: group.len(),
            }),
            _ => {
                let msg = format!("distance {distance} m gives no positive slope; skipped");
                warn!("{msg}");
                warnings.push(msg);
            }
        }
    }
    if slopes.is_empty() {
        return Err(Error::InsufficientData(
            "no distance group with at least 2 points".into(),
        ));
    }
    Ok(slopes)
}

/// `γ = 1/(η·s)` at every slope, with the slope error propagated.
pub fn gamma_points_from_slopes(slopes: &[SlopePoint], eta: f64) -> Vec<GammaPoint> {
    slopes
        .iter()
        .map(|s| {
            let gamma = 1.0 / (eta * s.slope);
            GammaPoint {
                delta: s.delta,
                gamma,
                stderr: gamma * s.stderr / s.slope,
                n_points: s.n_points,
            }
        })
        .collect()
}

/// Figure of merit and per-distance ceiling coefficients from bench records.
pub fn fit_eta_gamma(
    records: &[SteadyRecord],
    env: &Environment,
    source: &MechanicalPowerSource,
    anchor: &EtaAnchor,
) -> Result<EtaGammaFit> {
    let mut warnings = Vec::new();
    let slopes = power_slopes(records, env, source, &mut warnings)?;
    let far = slopes
        .iter()
        .max_by(|a, b| a.distance.total_cmp(&b.distance))
        .expect("non-empty slopes");
    let anchor_gamma = match anchor {
        EtaAnchor::UnitGamma => {
            if far.delta >= MAX_ANCHOR_DELTA {
                return Err(Error::invalid(
                    "records",
                    format!(
                        "farthest distance has delta = {:.4}; need delta < {MAX_ANCHOR_DELTA} to assume gamma = 1",
                        far.delta
                    ),
                ));
            }
            1.0
        }
        EtaAnchor::Model(params) => ceiling_coefficient(GapRatio::new(far.delta)?, params)?,
    };
    let eta = 1.0 / (far.slope * anchor_gamma);
    let points = gamma_points_from_slopes(&slopes, eta);
    Ok(EtaGammaFit {
        eta,
        points,
        slopes,
        warnings,
    })
}

/// Joint fit of `(η, α₀, α₁)` to all slopes, minimising
/// `Σ wᵢ·(η·γ(δᵢ)·sᵢ − 1)²`.
///
/// Uses every distance to separate `η` from `γ` instead of the farthest
/// one alone.
pub fn refine_eta_ceiling(
    slopes: &[SlopePoint],
    initial_eta: f64,
    initial: &CeilingParams,
    reduced: bool,
) -> Result<(f64, CeilingParams, FitReport)> {
    let needed = if reduced { 2 } else { 3 };
    let mut distinct: Vec<f64> = slopes.iter().map(|s| s.delta).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < needed {
        return Err(Error::InsufficientData(format!(
            "need slopes at {needed} distinct distances, got {}",
            distinct.len()
        )));
    }
    let rel_err: Vec<f64> = slopes.iter().map(|s| s.stderr / s.slope).collect();
    let weights = weights_from_stderr(&rel_err, &vec![1.0; rel_err.len()]);
    let residuals = |p: &[f64]| -> Vec<f64> {
        let (eta, a0, a1) = (p[0], p[1], if reduced { 0.0 } else { p[2] });
        slopes
            .iter()
            .zip(&weights)
            .map(|(s, w)| w * (eta * gamma_unchecked(s.delta, a0, a1) * s.slope - 1.0))
            .collect()
    };
    let mut bounds = vec![(1e-3, 1.0), CEILING_BOUNDS[0]];
    let mut x0 = vec![initial_eta.clamp(1e-3, 1.0), initial.alpha0()];
    if !reduced {
        bounds.push(CEILING_BOUNDS[1]);
        x0.push(initial.alpha1());
    }
    let sol = minimize(residuals, &x0, &bounds, &SolverOptions::default());
    let eta = sol.params[0];
    let params = CeilingParams::new(sol.params[1], if reduced { 0.0 } else { sol.params[2] })?;
    let mut parameters = BTreeMap::new();
    parameters.insert("eta".to_string(), eta);
    parameters.insert("alpha0".to_string(), params.alpha0());
    parameters.insert("alpha1".to_string(), params.alpha1());
    let n = slopes.len();
    let report = FitReport {
        parameters,
        residual_rms: (sol.sse / n as f64).sqrt(),
        sse: sol.sse,
        n_obs: n,
        converged: sol.converged,
        iterations: sol.iterations,
        identifiable: sol.identifiable,
        diagnostics: BTreeMap::new(),
    };
    Ok((eta, params, report))
}

/// Objective minimised by [`refine_eta_ceiling`], exposed for oracle checks.
pub fn eta_ceiling_objective(slopes: &[SlopePoint], eta: f64, alpha0: f64, alpha1: f64) -> f64 {
    let rel_err: Vec<f64> = slopes.iter().map(|s| s.stderr / s.slope).collect();
    let weights = weights_from_stderr(&rel_err, &vec![1.0; rel_err.len()]);
    slopes
        .iter()
        .zip(&weights)
        .map(|(s, w)| {
            (w * (eta * gamma_unchecked(s.delta, alpha0, alpha1) * s.slope - 1.0)).powi(2)
        })
        .sum()
}
