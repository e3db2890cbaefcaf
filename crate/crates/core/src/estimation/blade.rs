//! Thrust and torque coefficients per distance, and the `(c₀, c₁, c₂)` fit.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::records::{common_radius, group_by_distance};
use super::regression::fit_through_origin;
use super::solver::{minimize, SolverOptions};
use super::{FitReport, SteadyRecord};
use crate::aero::{gamma_unchecked, CeilingParams, Environment};
use crate::bemt::{thrust_coefficient_unchecked, torque_coefficient_unchecked, BladeCoefficients};
use crate::error::{ensure_positive, Error, Result};

/// Search box for `c₀`, `c₁`, `c₂`.
pub const BLADE_BOUNDS: [(f64, f64); 3] = [(1e-9, 10.0), (1e-9, 10.0), (0.0, 1.0)];

/// `c_T = T/Ω²` and `c_τ = τ/Ω²` measured at one distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlightCoefficientPoint {
    pub distance: f64,
    pub delta: f64,
    pub thrust_coefficient: f64,
    pub thrust_stderr: f64,
    pub torque_coefficient: Option<f64>,
    pub torque_stderr: Option<f64>,
    pub n_points: usize,
}

/// Slopes of thrust and torque against `Ω²`, one point per distance.
/// Distances with fewer than two records are skipped.
pub fn fit_flight_coefficients(records: &[SteadyRecord]) -> Result<Vec<FlightCoefficientPoint>> {
    let radius = common_radius(records)?;
    let mut out = Vec::new();
    for (distance, group) in group_by_distance(records) {
        if group.len() < 2 {
            log::warn!(
                "distance {distance} m has {} point(s); skipped",
                group.len()
            );
            continue;
        }
        let omega_sq: Vec<f64> = group.iter().map(|r| r.omega * r.omega).collect();
        let thrust: Vec<f64> = group.iter().map(|r| r.thrust).collect();
        let Some(ct) = fit_through_origin(&omega_sq, &thrust) else {
            continue;
        };
        let torque: Option<Vec<f64>> = group.iter().map(|r| r.torque).collect();
        let ctau = torque.and_then(|t| fit_through_origin(&omega_sq, &t));
        out.push(FlightCoefficientPoint {
            distance,
            delta: radius / distance,
            thrust_coefficient: ct.slope,
            thrust_stderr: ct.stderr,
            torque_coefficient: ctau.map(|f| f.slope),
            torque_stderr: ctau.map(|f| f.stderr),
            n_points: group.len(),
        });
    }
    if out.is_empty() {
        return Err(Error::InsufficientData(
            "no distance group with at least 2 points".into(),
        ));
    }
    Ok(out)
}

/// Value at the smallest `δ`, used to put both series on a common scale.
fn reference_value(points: &[(f64, f64)]) -> f64 {
    points
        .iter()
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .map(|p| p.1)
        .unwrap_or(1.0)
}

struct BladeModel<'a> {
    ct_points: &'a [(f64, f64)],
    ctau_points: &'a [(f64, f64)],
    ct_ref: f64,
    ctau_ref: f64,
    radius: f64,
    area: f64,
    rho: f64,
    eta: f64,
    ceiling: CeilingParams,
}

impl BladeModel<'_> {
    fn coefficients(&self, c: &BladeCoefficients, delta: f64) -> (f64, f64) {
        let gamma = gamma_unchecked(delta, self.ceiling.alpha0(), self.ceiling.alpha1());
        let ct = thrust_coefficient_unchecked(c, self.radius, self.area, self.rho, gamma, delta);
        let ctau = torque_coefficient_unchecked(ct, gamma, self.eta, self.area, self.rho);
        (ct, ctau)
    }

    fn residuals(&self, p: &[f64]) -> Vec<f64> {
        let c = BladeCoefficients {
            c0: p[0],
            c1: p[1],
            c2: p[2],
        };
        let thrust = self
            .ct_points
            .iter()
            .map(|&(d, ct)| (self.coefficients(&c, d).0 - ct) / self.ct_ref);
        let torque = self
            .ctau_points
            .iter()
            .map(|&(d, ctau)| (self.coefficients(&c, d).1 - ctau) / self.ctau_ref);
        thrust.chain(torque).collect()
    }
}

fn check_series(name: &'static str, points: &[(f64, f64)]) -> Result<()> {
    if points
        .iter()
        .any(|&(d, v)| !(d.is_finite() && d >= 0.0 && v.is_finite() && v > 0.0))
    {
        return Err(Error::invalid(
            name,
            "need finite delta >= 0 and positive coefficients",
        ));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn model<'a>(
    ct_points: &'a [(f64, f64)],
    ctau_points: &'a [(f64, f64)],
    radius: f64,
    eta: f64,
    ceiling: &CeilingParams,
    env: &Environment,
) -> BladeModel<'a> {
    BladeModel {
        ct_points,
        ctau_points,
        ct_ref: reference_value(ct_points),
        ctau_ref: reference_value(ctau_points),
        radius,
        area: PI * radius * radius,
        rho: env.air_density(),
        eta,
        ceiling: *ceiling,
    }
}

/// Objective minimised by [`fit_blade_coefficients`], exposed for oracle checks.
pub fn blade_objective(
    ct_points: &[(f64, f64)],
    ctau_points: &[(f64, f64)],
    radius: f64,
    eta: f64,
    ceiling: &CeilingParams,
    env: &Environment,
    coeffs: &BladeCoefficients,
) -> f64 {
    model(ct_points, ctau_points, radius, eta, ceiling, env)
        .residuals(&[coeffs.c0, coeffs.c1, coeffs.c2])
        .iter()
        .map(|r| r * r)
        .sum()
}

/// Fits `(c₀, c₁, c₂)` to measured thrust and torque coefficients.
///
/// Each series is divided by its value at the smallest `δ` so both carry
/// comparable weight. `ctau_points` may be empty when torque was not measured.
pub fn fit_blade_coefficients(
    ct_points: &[(f64, f64)],
    ctau_points: &[(f64, f64)],
    radius: f64,
    eta: f64,
    ceiling: &CeilingParams,
    env: &Environment,
) -> Result<(BladeCoefficients, FitReport)> {
    ensure_positive("radius", radius)?;
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::invalid(
            "eta",
            format!("must lie in (0, 1], got {eta}"),
        ));
    }
    check_series("ct_points", ct_points)?;
    check_series("ctau_points", ctau_points)?;
    let mut distinct: Vec<f64> = ct_points.iter().map(|p| p.0).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "need thrust coefficients at 3 distinct delta values, got {}",
            distinct.len()
        )));
    }

    let m = model(ct_points, ctau_points, radius, eta, ceiling, env);
    let residuals = |p: &[f64]| m.residuals(p);

    // Start from c₀ consistent with the least-disturbed thrust coefficient.
    let (d_ref, ct_ref) = ct_points
        .iter()
        .copied()
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("non-empty");
    let g_ref = gamma_unchecked(d_ref, ceiling.alpha0(), ceiling.alpha1());
    let x_ref = (ct_ref / (2.0 * m.rho * m.area)).sqrt() / (g_ref * radius);
    let options = SolverOptions::default();
    let mut best = None;
    for c1 in [0.05, 0.2, 0.5, 1.0, 2.0] {
        for c2 in [0.0, 0.02, 0.1] {
            let c0 = (4.0 * g_ref * g_ref * x_ref * x_ref + (c1 - c2 * d_ref) * x_ref)
                .clamp(BLADE_BOUNDS[0].0, BLADE_BOUNDS[0].1);
            let sol = minimize(residuals, &[c0, c1, c2], &BLADE_BOUNDS, &options);
            if best
                .as_ref()
                .is_none_or(|b: &super::solver::Solution| sol.sse < b.sse)
            {
                best = Some(sol);
            }
        }
    }
    let best = best.expect("at least one start");
    let coeffs = BladeCoefficients {
        c0: best.params[0],
        c1: best.params[1],
        c2: best.params[2],
    };
    let mut parameters = BTreeMap::new();
    parameters.insert("c0".to_string(), coeffs.c0);
    parameters.insert("c1".to_string(), coeffs.c1);
    parameters.insert("c2".to_string(), coeffs.c2);
    let n = best.residuals.len();
    let report = FitReport {
        parameters,
        residual_rms: (best.sse / n as f64).sqrt(),
        sse: best.sse,
        n_obs: n,
        converged: best.converged,
        iterations: best.iterations,
        identifiable: best.identifiable,
        diagnostics: BTreeMap::new(),
    };
    Ok((coeffs, report))
}
