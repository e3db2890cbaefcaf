//! The full bench-data analysis chain, from steady records to every model
//! constant.

use serde::Serialize;

use super::blade::{fit_blade_coefficients, fit_flight_coefficients, FlightCoefficientPoint};
use super::ceiling::fit_ceiling_params;
use super::gamma::{
    fit_eta_gamma, gamma_points_from_slopes, refine_eta_ceiling, EtaAnchor, MechanicalPowerSource,
    SlopePoint,
};
use super::records::common_radius;
use super::{FitReport, GammaPoint, SteadyRecord};
use crate::aero::{CeilingParams, Environment};
use crate::bemt::BladeCoefficients;
use crate::error::Result;
use crate::powertrain::{identify_motor, MotorParams};

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PipelineOptions {
    /// Pin `α₁ = 0`.
    pub reduced: bool,
    /// Defaults to measured torque when every record has one, otherwise to
    /// the identified motor.
    pub power_source: Option<MechanicalPowerSource>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineResult {
    pub motor: Option<MotorParams>,
    pub motor_report: Option<FitReport>,
    pub eta: f64,
    pub ceiling: CeilingParams,
    pub ceiling_report: FitReport,
    /// Joint `(η, α₀, α₁)` fit over all slopes.
    pub refine_report: FitReport,
    pub gamma_points: Vec<GammaPoint>,
    pub slopes: Vec<SlopePoint>,
    pub flight_points: Vec<FlightCoefficientPoint>,
    pub blade: BladeCoefficients,
    pub blade_report: FitReport,
    pub warnings: Vec<String>,
}

/// Runs motor identification, the `η`/`γ` slope fits, the ceiling fit and
/// the blade-coefficient fit in sequence.
///
/// `η` is first anchored at the farthest distance with `γ = 1`, then
/// refined jointly with `(α₀, α₁)` over every distance, and the empirical
/// `γ` points are recomputed with the refined `η`.
pub fn run_pipeline(
    records: &[SteadyRecord],
    env: &Environment,
    options: &PipelineOptions,
) -> Result<PipelineResult> {
    let radius = common_radius(records)?;
    let torque_count = records.iter().filter(|r| r.torque.is_some()).count();
    let motor_fit = if torque_count >= 2 {
        identify_motor(records).ok()
    } else {
        None
    };

    let source = match (options.power_source, &motor_fit) {
        (Some(s), _) => s,
        (None, _) if torque_count == records.len() => MechanicalPowerSource::Torque,
        (None, Some((m, _))) => MechanicalPowerSource::Motor(*m),
        // Let fit_eta_gamma report the missing torque.
        (None, None) => MechanicalPowerSource::Torque,
    };

    let initial = fit_eta_gamma(records, env, &source, &EtaAnchor::UnitGamma)?;
    let mut warnings = initial.warnings.clone();
    let (first_ceiling, _) = fit_ceiling_params(&initial.points, options.reduced)?;
    let (eta, _, refine_report) = refine_eta_ceiling(
        &initial.slopes,
        initial.eta,
        &first_ceiling,
        options.reduced,
    )?;
    let gamma_points = gamma_points_from_slopes(&initial.slopes, eta);
    let (ceiling, ceiling_report) = fit_ceiling_params(&gamma_points, options.reduced)?;
    for (name, report) in [
        ("ceiling", &ceiling_report),
        ("eta/ceiling refinement", &refine_report),
    ] {
        if !report.converged {
            warnings.push(format!("{name} fit did not converge"));
        }
        if !report.identifiable {
            warnings.push(format!("{name} fit is not identifiable"));
        }
    }

    let flight_points = fit_flight_coefficients(records)?;
    let ct: Vec<(f64, f64)> = flight_points
        .iter()
        .map(|p| (p.delta, p.thrust_coefficient))
        .collect();
    let ctau: Vec<(f64, f64)> = flight_points
        .iter()
        .filter_map(|p| p.torque_coefficient.map(|c| (p.delta, c)))
        .collect();
    let (blade, blade_report) = fit_blade_coefficients(&ct, &ctau, radius, eta, &ceiling, env)?;
    if !blade_report.converged {
        warnings.push("blade fit did not converge".to_string());
    }

    let (motor, motor_report) = match motor_fit {
        Some((m, r)) => (Some(m), Some(r)),
        None => (None, None),
    };
    Ok(PipelineResult {
        motor,
        motor_report,
        eta,
        ceiling,
        ceiling_report,
        refine_report,
        gamma_points,
        slopes: initial.slopes,
        flight_points,
        blade,
        blade_report,
        warnings,
    })
}
