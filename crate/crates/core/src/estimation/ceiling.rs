//! Fitting `(α₀, α₁)` of the ceiling-coefficient model to empirical points.

use std::collections::BTreeMap;

use super::solver::{minimize, Solution, SolverOptions};
use super::{FitReport, GammaPoint};
use crate::aero::{gamma_unchecked, CeilingParams};
use crate::error::{Error, Result};

/// Search box for `α₀` and `α₁`.
pub const CEILING_BOUNDS: [(f64, f64); 2] = [(1.0, 100.0), (0.0, 1.0)];

/// Relative standard errors below this are rounding noise, not measurement.
const NUMERICAL_ZERO_STDERR: f64 = 1e-9;

/// Per-residual multipliers `1/σᵢ` (so squared residuals carry `1/σᵢ²`).
/// Falls back to unit weights when any error is missing or numerically zero.
pub(crate) fn weights_from_stderr(stderr: &[f64], scale: &[f64]) -> Vec<f64> {
    let usable = stderr
        .iter()
        .zip(scale)
        .all(|(s, v)| s.is_finite() && *s > NUMERICAL_ZERO_STDERR * v.abs());
    if usable {
        stderr.iter().map(|s| 1.0 / s).collect()
    } else {
        vec![1.0; stderr.len()]
    }
}

/// Initial `α₀` from inverting the reduced model at each point.
fn alpha0_guess(points: &[GammaPoint]) -> f64 {
    let mut guesses: Vec<f64> = points
        .iter()
        .filter(|p| p.delta > 1e-3 && p.gamma > 0.5)
        .map(|p| {
            let u = 2.0 * p.gamma - 1.0;
            8.0 * (u * u - 1.0) / (p.delta * p.delta)
        })
        .filter(|g| g.is_finite())
        .collect();
    if guesses.is_empty() {
        return 1.5;
    }
    guesses.sort_by(f64::total_cmp);
    guesses[guesses.len() / 2].clamp(CEILING_BOUNDS[0].0, CEILING_BOUNDS[0].1)
}

/// Weighted least-squares fit of the ceiling coefficient model.
///
/// Minimises `Σ wᵢ·(γ(δᵢ; α₀, α₁) − γᵢ)²` with `wᵢ = 1/stderrᵢ²`. In reduced
/// mode `α₁` is pinned to zero. Non-convergence is reported through
/// [`FitReport::converged`], not as an error.
pub fn fit_ceiling_params(
    points: &[GammaPoint],
    reduced: bool,
) -> Result<(CeilingParams, FitReport)> {
    let needed = if reduced { 2 } else { 3 };
    let mut distinct: Vec<f64> = points.iter().map(|p| p.delta).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < needed {
        return Err(Error::InsufficientData(format!(
            "need points at {needed} distinct delta values, got {}",
            distinct.len()
        )));
    }
    if points
        .iter()
        .any(|p| !(p.delta.is_finite() && p.delta >= 0.0 && p.gamma.is_finite()))
    {
        return Err(Error::invalid(
            "points",
            "delta and gamma must be finite, delta >= 0",
        ));
    }

    let stderr: Vec<f64> = points.iter().map(|p| p.stderr).collect();
    let gammas: Vec<f64> = points.iter().map(|p| p.gamma).collect();
    let weights = weights_from_stderr(&stderr, &gammas);
    let residuals = |p: &[f64]| -> Vec<f64> {
        let a1 = if reduced { 0.0 } else { p[1] };
        points
            .iter()
            .zip(&weights)
            .map(|(pt, w)| w * (gamma_unchecked(pt.delta, p[0], a1) - pt.gamma))
            .collect()
    };

    let a0 = alpha0_guess(points);
    let options = SolverOptions::default();
    let best: Solution = if reduced {
        minimize(residuals, &[a0], &CEILING_BOUNDS[..1], &options)
    } else {
        [0.0, 1e-4, 1e-3, 1e-2]
            .iter()
            .map(|&a1| minimize(residuals, &[a0, a1], &CEILING_BOUNDS, &options))
            .min_by(|a, b| a.sse.total_cmp(&b.sse))
            .expect("non-empty starts")
    };

    let alpha1 = if reduced { 0.0 } else { best.params[1] };
    let params = CeilingParams::new(best.params[0], alpha1)?;
    let mut parameters = BTreeMap::new();
    parameters.insert("alpha0".to_string(), params.alpha0());
    parameters.insert("alpha1".to_string(), params.alpha1());
    let n = points.len();
    let mut diagnostics = BTreeMap::new();
    let unweighted_rms = (points
        .iter()
        .map(|pt| (gamma_unchecked(pt.delta, params.alpha0(), alpha1) - pt.gamma).powi(2))
        .sum::<f64>()
        / n as f64)
        .sqrt();
    diagnostics.insert("gamma_rms".to_string(), unweighted_rms);
    let report = FitReport {
        parameters,
        residual_rms: (best.sse / n as f64).sqrt(),
        sse: best.sse,
        n_obs: n,
        converged: best.converged,
        iterations: best.iterations,
        identifiable: best.identifiable,
        diagnostics,
    };
    Ok((params, report))
}

/// Objective minimised by [`fit_ceiling_params`], exposed for oracle checks.
pub fn ceiling_objective(points: &[GammaPoint], alpha0: f64, alpha1: f64) -> f64 {
    let stderr: Vec<f64> = points.iter().map(|p| p.stderr).collect();
    let gammas: Vec<f64> = points.iter().map(|p| p.gamma).collect();
    let weights = weights_from_stderr(&stderr, &gammas);
    points
        .iter()
        .zip(&weights)
        .map(|(pt, w)| (w * (gamma_unchecked(pt.delta, alpha0, alpha1) - pt.gamma)).powi(2))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimation::grid_oracle;
    use approx::assert_relative_eq;

    fn exact_points(a0: f64, a1: f64, deltas: impl Iterator<Item = f64>) -> Vec<GammaPoint> {
        deltas
            .map(|d| GammaPoint {
                delta: d,
                gamma: gamma_unchecked(d, a0, a1),
                stderr: 0.0,
                n_points: 16,
            })
            .collect()
    }

    #[test]
    fn full_model_round_trip() {
        let pts = exact_points(2.0, 0.002, (0..=12).map(|i| 2.0 * i as f64));
        let (p, report) = fit_ceiling_params(&pts, false).unwrap();
        assert!(report.converged && report.identifiable);
        assert!((p.alpha0() - 2.0).abs() < 1e-6);
        assert!((p.alpha1() - 0.002).abs() < 1e-6);
    }

    #[test]
    fn reduced_mode_pins_recirculation() {
        let pts = exact_points(1.6, 0.0, (0..30).map(|i| 0.8 * i as f64));
        let (p, report) = fit_ceiling_params(&pts, true).unwrap();
        assert_eq!(p.alpha1(), 0.0);
        assert_relative_eq!(p.alpha0(), 1.6, max_relative = 1e-8);
        assert_eq!(report.parameters["alpha1"], 0.0);
    }

    #[test]
    fn points_without_ceiling_are_not_identifiable() {
        let pts: Vec<GammaPoint> = [0.0, 5e-7, 1e-6]
            .iter()
            .map(|&d| GammaPoint {
                delta: d,
                gamma: 1.0,
                stderr: 0.0,
                n_points: 4,
            })
            .collect();
        let (_, report) = fit_ceiling_params(&pts, true).unwrap();
        assert!(!report.identifiable);
    }

    #[test]
    fn too_few_points() {
        let pts = exact_points(1.6, 0.0, [1.0, 2.0].into_iter());
        assert!(fit_ceiling_params(&pts, false).is_err());
        assert!(fit_ceiling_params(&pts[..1], true).is_err());
        assert!(fit_ceiling_params(&pts, true).is_ok());
    }

    #[test]
    fn weights_follow_stderr() {
        // One outlier with a huge error bar barely moves the fit.
        let mut pts = exact_points(1.6, 0.0, (1..20).map(|i| i as f64));
        for p in &mut pts {
            p.stderr = 0.01;
        }
        pts[10].gamma *= 1.3;
        pts[10].stderr = 100.0;
        let (p, _) = fit_ceiling_params(&pts, true).unwrap();
        assert!((p.alpha0() - 1.6).abs() < 1e-4);
    }

    #[test]
    fn matches_grid_oracle() {
        let pts = exact_points(2.0, 0.002, (0..=12).map(|i| 2.0 * i as f64));
        let (_, report) = fit_ceiling_params(&pts, false).unwrap();
        let oracle = grid_oracle(
            |p| ceiling_objective(&pts, p[0], p[1]),
            &CEILING_BOUNDS,
            &[100, 100],
        )
        .unwrap();
        assert!(report.sse <= oracle.sse + 1e-6);
    }
}
