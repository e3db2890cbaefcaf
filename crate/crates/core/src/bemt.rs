//! Blade-element relations with radial inflow.
//!
//! Thrust from blade elements, `T = ½ρAR²(c₀ − c₁x + c₂xδ)Ω²` with inflow
//! ratio `x = v_i/ΩR`, is matched against the momentum result
//! `T = 2ρAγ²v_i²`. Solving the pair gives `x`, and from it thrust and torque
//! coefficients that depend on the ceiling distance.
//!
//! `c_T = T/Ω²` and `c_τ = τ/Ω²` are dimensional (N·s²/rad², N·m·s²/rad²), the
//! convention used by flight controllers.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::aero::{ceiling_coefficient, CeilingParams, Environment, GapRatio};
use crate::error::{ensure_nonnegative, ensure_positive, Error, Result};

/// Number of points used to sample closed-form blade profiles.
pub const PROFILE_SAMPLES: usize = 1001;

/// Lumped blade coefficients `(c₀, c₁, c₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BladeCoefficients {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
}

impl BladeCoefficients {
    pub fn new(c0: f64, c1: f64, c2: f64) -> Result<Self> {
        ensure_positive("c0", c0)?;
        ensure_positive("c1", c1)?;
        ensure_nonnegative("c2", c2)?;
        Ok(Self { c0, c1, c2 })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGeometry", into = "RawGeometry")]
pub struct PropellerGeometry {
    radius: f64,
    disc_area: f64,
    coeffs: BladeCoefficients,
    figure_of_merit: f64,
}

#[derive(Serialize, Deserialize)]
struct RawGeometry {
    radius: f64,
    c0: f64,
    c1: f64,
    c2: f64,
    figure_of_merit: f64,
}

impl TryFrom<RawGeometry> for PropellerGeometry {
    type Error = Error;

    fn try_from(raw: RawGeometry) -> Result<Self> {
        PropellerGeometry::new(
            raw.radius,
            BladeCoefficients::new(raw.c0, raw.c1, raw.c2)?,
            raw.figure_of_merit,
        )
    }
}

impl From<PropellerGeometry> for RawGeometry {
    fn from(g: PropellerGeometry) -> Self {
        RawGeometry {
            radius: g.radius,
            c0: g.coeffs.c0,
            c1: g.coeffs.c1,
            c2: g.coeffs.c2,
            figure_of_merit: g.figure_of_merit,
        }
    }
}

impl PropellerGeometry {
    pub fn new(radius: f64, coeffs: BladeCoefficients, figure_of_merit: f64) -> Result<Self> {
        ensure_positive("radius", radius)?;
        let coeffs = BladeCoefficients::new(coeffs.c0, coeffs.c1, coeffs.c2)?;
        if !(figure_of_merit.is_finite() && figure_of_merit > 0.0 && figure_of_merit <= 1.0) {
            return Err(Error::invalid(
                "figure_of_merit",
                format!("must lie in (0, 1], got {figure_of_merit}"),
            ));
        }
        Ok(Self {
            radius,
            disc_area: PI * radius * radius,
            coeffs,
            figure_of_merit,
        })
    }

    /// 23-mm coreless-motor propeller (single rotor bench values).
    pub fn small_23mm() -> Self {
        Self::new(
            0.023,
            BladeCoefficients {
                c0: 0.154,
                c1: 0.846,
                c2: 0.022,
            },
            0.50,
        )
        .expect("valid preset")
    }

    /// 50-mm carbon-fibre propeller (single rotor bench values).
    pub fn large_50mm() -> Self {
        Self::new(
            0.050,
            BladeCoefficients {
                c0: 0.058,
                c1: 0.095,
                c2: 0.011,
            },
            0.68,
        )
        .expect("valid preset")
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn disc_area(&self) -> f64 {
        self.disc_area
    }

    pub fn coeffs(&self) -> BladeCoefficients {
        self.coeffs
    }

    pub fn figure_of_merit(&self) -> f64 {
        self.figure_of_merit
    }

    pub fn with_coeffs(&self, coeffs: BladeCoefficients) -> Result<Self> {
        Self::new(self.radius, coeffs, self.figure_of_merit)
    }

    pub fn with_figure_of_merit(&self, figure_of_merit: f64) -> Result<Self> {
        Self::new(self.radius, self.coeffs, figure_of_merit)
    }
}

/// Positive root of `4γ²x² + (c₁ − c₂δ)x − c₀ = 0`, written in the
/// cancellation-free form `2c₀ / (b + √(b² + 16γ²c₀))`.
pub(crate) fn inflow_ratio_unchecked(coeffs: &BladeCoefficients, gamma: f64, delta: f64) -> f64 {
    let b = coeffs.c1 - coeffs.c2 * delta;
    let disc = (b * b + 16.0 * gamma * gamma * coeffs.c0).sqrt();
    if b >= 0.0 {
        2.0 * coeffs.c0 / (b + disc)
    } else {
        (disc - b) / (8.0 * gamma * gamma)
    }
}

/// Inflow ratio `v_i/(ΩR)` consistent with both blade-element and momentum thrust.
pub fn inflow_ratio(geom: &PropellerGeometry, gamma: f64, delta: GapRatio) -> Result<f64> {
    ensure_positive("gamma", gamma)?;
    ensure_positive("c0", geom.coeffs.c0)?;
    Ok(inflow_ratio_unchecked(&geom.coeffs, gamma, delta.value()))
}

/// Blade-element thrust for a given induced velocity and rotation rate.
pub fn bem_thrust(
    geom: &PropellerGeometry,
    induced_velocity: f64,
    omega: f64,
    delta: GapRatio,
    env: &Environment,
) -> Result<f64> {
    ensure_positive("omega", omega)?;
    ensure_nonnegative("induced_velocity", induced_velocity)?;
    let r = geom.radius;
    let x = induced_velocity / (omega * r);
    let c = &geom.coeffs;
    Ok(0.5
        * env.air_density()
        * geom.disc_area
        * r
        * r
        * (c.c0 - c.c1 * x + c.c2 * x * delta.value())
        * omega
        * omega)
}

pub(crate) fn thrust_coefficient_unchecked(
    coeffs: &BladeCoefficients,
    radius: f64,
    disc_area: f64,
    rho: f64,
    gamma: f64,
    delta: f64,
) -> f64 {
    let x = inflow_ratio_unchecked(coeffs, gamma, delta);
    let k = gamma * x * radius;
    2.0 * rho * disc_area * k * k
}

/// Thrust coefficient at a known ceiling coefficient:
/// `c_T = 2ρA·(2c₀Rγ / [(c₁ − c₂δ) + √((c₁ − c₂δ)² + 16c₀γ²)])²`.
pub fn thrust_coefficient_at(
    geom: &PropellerGeometry,
    gamma: f64,
    delta: GapRatio,
    env: &Environment,
) -> Result<f64> {
    ensure_positive("gamma", gamma)?;
    Ok(thrust_coefficient_unchecked(
        &geom.coeffs,
        geom.radius,
        geom.disc_area,
        env.air_density(),
        gamma,
        delta.value(),
    ))
}

/// Thrust coefficient with `γ` evaluated from the ceiling model.
pub fn thrust_coefficient(
    geom: &PropellerGeometry,
    delta: GapRatio,
    params: &CeilingParams,
    env: &Environment,
) -> Result<f64> {
    let gamma = ceiling_coefficient(delta, params)?;
    thrust_coefficient_at(geom, gamma, delta, env)
}

/// Torque coefficient `c_τ = c_T^{3/2} / (η·γ·√(2ρA))`.
///
/// Follows from `P_m = c_τΩ³`, `ηP_m = T·v_i` and `T = 2ρAγ²v_i²`. At `γ = 1`
/// this is the familiar no-ceiling expression.
pub fn torque_coefficient(
    thrust_coefficient: f64,
    gamma: f64,
    geom: &PropellerGeometry,
    env: &Environment,
) -> Result<f64> {
    ensure_nonnegative("thrust_coefficient", thrust_coefficient)?;
    ensure_positive("gamma", gamma)?;
    ensure_positive("figure_of_merit", geom.figure_of_merit)?;
    Ok(torque_coefficient_unchecked(
        thrust_coefficient,
        gamma,
        geom.figure_of_merit,
        geom.disc_area,
        env.air_density(),
    ))
}

pub(crate) fn torque_coefficient_unchecked(
    c_t: f64,
    gamma: f64,
    eta: f64,
    area: f64,
    rho: f64,
) -> f64 {
    c_t * c_t.sqrt() / (eta * gamma * (2.0 * rho * area).sqrt())
}

/// `(γ, c_T, c_τ)` at one gap ratio.
pub fn flight_coefficients(
    geom: &PropellerGeometry,
    delta: GapRatio,
    params: &CeilingParams,
    env: &Environment,
) -> Result<(f64, f64, f64)> {
    let gamma = ceiling_coefficient(delta, params)?;
    let c_t = thrust_coefficient_at(geom, gamma, delta, env)?;
    let c_tau = torque_coefficient(c_t, gamma, geom, env)?;
    Ok((gamma, c_t, c_tau))
}

/// One radial station of a blade.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileSample {
    /// Radius of the station [m].
    pub r: f64,
    /// Chord [m].
    pub chord: f64,
    /// Pitch angle in the rotation direction [rad].
    pub pitch: f64,
    /// Tilt of the blade normal towards the radial direction [rad].
    pub radial_twist: f64,
}

/// Blade geometry sampled along the span, with a linear lift slope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BladeProfile {
    lift_slope: f64,
    samples: Vec<ProfileSample>,
}

/// Largest angle for which the small-angle blade model is accepted [rad].
const SMALL_ANGLE_LIMIT: f64 = 0.5;

impl BladeProfile {
    /// Samples must be sorted by strictly increasing radius.
    pub fn sampled(lift_slope: f64, samples: Vec<ProfileSample>) -> Result<Self> {
        ensure_positive("lift_slope", lift_slope)?;
        if samples.len() < 3 {
            return Err(Error::InsufficientData(format!(
                "blade profile needs at least 3 samples, got {}",
                samples.len()
            )));
        }
        for s in &samples {
            ensure_nonnegative("r", s.r)?;
            ensure_nonnegative("chord", s.chord)?;
            if !(s.pitch.abs() < SMALL_ANGLE_LIMIT && s.radial_twist.abs() < SMALL_ANGLE_LIMIT) {
                return Err(Error::invalid(
                    "blade angle",
                    format!(
                        "|angle| must stay below {SMALL_ANGLE_LIMIT} rad at r = {}",
                        s.r
                    ),
                ));
            }
        }
        if samples.windows(2).any(|w| w[1].r <= w[0].r) {
            return Err(Error::invalid(
                "r",
                "samples must have strictly increasing radius",
            ));
        }
        Ok(Self {
            lift_slope,
            samples,
        })
    }

    /// Samples a closed-form profile `r -> (chord, pitch, radial_twist)` at
    /// `n` evenly spaced stations over `[0, radius]`.
    pub fn from_fn<F>(lift_slope: f64, radius: f64, n: usize, profile: F) -> Result<Self>
    where
        F: Fn(f64) -> (f64, f64, f64),
    {
        ensure_positive("radius", radius)?;
        let samples = (0..n)
            .map(|i| {
                let r = radius * i as f64 / (n.max(2) - 1) as f64;
                let (chord, pitch, radial_twist) = profile(r);
                ProfileSample {
                    r,
                    chord,
                    pitch,
                    radial_twist,
                }
            })
            .collect();
        Self::sampled(lift_slope, samples)
    }

    pub fn lift_slope(&self) -> f64 {
        self.lift_slope
    }

    pub fn samples(&self) -> &[ProfileSample] {
        &self.samples
    }
}

fn trapezoid(samples: &[ProfileSample], f: impl Fn(&ProfileSample) -> f64) -> f64 {
    samples
        .windows(2)
        .map(|w| 0.5 * (w[1].r - w[0].r) * (f(&w[0]) + f(&w[1])))
        .sum()
}

/// Lumped coefficients from a blade profile by trapezoidal quadrature:
///
/// - `c₀ = (C_Lα/AR²)·∫ c·θ_r·r² dr`
/// - `c₁ = (C_Lα/AR²)·∫ R·c·r dr`
/// - `c₂ = (C_Lα/AR²)·∫ (c/2)·θ_φ·r² dr`
pub fn blade_integrals(profile: &BladeProfile, radius: f64) -> Result<BladeCoefficients> {
    ensure_positive("radius", radius)?;
    let s = &profile.samples;
    if s.len() < 3 {
        return Err(Error::InsufficientData(
            "blade profile needs at least 3 samples".into(),
        ));
    }
    if s.last().map(|p| p.r).unwrap_or(0.0) > radius * (1.0 + 1e-12) {
        return Err(Error::invalid(
            "r",
            "profile extends beyond the propeller radius",
        ));
    }
    let scale = profile.lift_slope / (PI * radius * radius * radius * radius);
    Ok(BladeCoefficients {
        c0: scale * trapezoid(s, |p| p.chord * p.pitch * p.r * p.r),
        c1: scale * trapezoid(s, |p| radius * p.chord * p.r),
        c2: scale * trapezoid(s, |p| 0.5 * p.chord * p.radial_twist * p.r * p.r),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn gap(d: f64) -> GapRatio {
        GapRatio::new(d).unwrap()
    }

    fn env() -> Environment {
        Environment::new(1.2).unwrap()
    }

    #[test]
    fn inflow_ratio_reference_values() {
        let g23 = PropellerGeometry::small_23mm();
        assert_relative_eq!(
            inflow_ratio(&g23, 1.0, gap(0.0)).unwrap(),
            0.11715,
            max_relative = 1e-4
        );
        let g50 = PropellerGeometry::large_50mm();
        assert_relative_eq!(
            inflow_ratio(&g50, 1.356, gap(7.2)).unwrap(),
            0.0877,
            max_relative = 1e-3
        );
    }

    #[test]
    fn inflow_ratio_is_root_of_quadratic() {
        let g = PropellerGeometry::small_23mm();
        let c = g.coeffs();
        for (gamma, d) in [(1.0, 0.0), (2.5, 10.0), (4.0, 23.0), (1.2, 60.0)] {
            let x = inflow_ratio(&g, gamma, gap(d)).unwrap();
            assert!(x > 0.0);
            let q = 4.0 * gamma * gamma * x * x + (c.c1 - c.c2 * d) * x - c.c0;
            assert!(q.abs() < 1e-14, "gamma={gamma} d={d} q={q}");
        }
    }

    #[test]
    fn inflow_ratio_ignores_delta_without_radial_term() {
        let g = PropellerGeometry::small_23mm()
            .with_coeffs(BladeCoefficients::new(0.154, 0.846, 0.0).unwrap())
            .unwrap();
        let a = inflow_ratio(&g, 1.7, gap(0.0)).unwrap();
        let b = inflow_ratio(&g, 1.7, gap(17.0)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bem_thrust_without_inflow() {
        let g = PropellerGeometry::small_23mm();
        let t = bem_thrust(&g, 0.0, 2000.0, gap(0.0), &env()).unwrap();
        assert_relative_eq!(t, 0.3249, max_relative = 1e-3);
        assert!(bem_thrust(&g, 1.0, 0.0, gap(0.0), &env()).is_err());
        assert!(bem_thrust(&g, 1.0, -5.0, gap(0.0), &env()).is_err());
    }

    #[test]
    fn bem_thrust_radial_term_vanishes_at_zero_delta() {
        let g = PropellerGeometry::small_23mm();
        let g0 = g
            .with_coeffs(BladeCoefficients::new(0.154, 0.846, 0.0).unwrap())
            .unwrap();
        let a = bem_thrust(&g, 3.0, 2000.0, gap(0.0), &env()).unwrap();
        let b = bem_thrust(&g0, 3.0, 2000.0, gap(0.0), &env()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn thrust_coefficient_table_values() {
        let e = env();
        let ct23 = thrust_coefficient(
            &PropellerGeometry::small_23mm(),
            gap(0.0),
            &CeilingParams::AXISYMMETRIC,
            &e,
        )
        .unwrap();
        assert_relative_eq!(ct23, 2.896e-8, max_relative = 1e-3);
        let ct50 = thrust_coefficient(
            &PropellerGeometry::large_50mm(),
            gap(0.0),
            &CeilingParams::AXISYMMETRIC,
            &e,
        )
        .unwrap();
        assert_relative_eq!(ct50, 5.612e-7, max_relative = 1e-3);
    }

    #[test]
    fn thrust_coefficient_no_ceiling_closed_form() {
        let e = env();
        for g in [
            PropellerGeometry::small_23mm(),
            PropellerGeometry::large_50mm(),
        ] {
            let c = g.coeffs();
            let k = c.c0 * g.radius() / (c.c1 + (c.c1 * c.c1 + 16.0 * c.c0).sqrt());
            let closed = 8.0 * 1.2 * g.disc_area() * k * k;
            let ct = thrust_coefficient(&g, gap(0.0), &CeilingParams::AXISYMMETRIC, &e).unwrap();
            assert_relative_eq!(ct, closed, max_relative = 1e-12);
        }
    }

    #[test]
    fn torque_coefficient_values() {
        let e = env();
        let g23 = PropellerGeometry::small_23mm();
        assert_relative_eq!(
            torque_coefficient(2.896e-8, 1.0, &g23, &e).unwrap(),
            1.56e-10,
            max_relative = 2e-3
        );
        let g50 = PropellerGeometry::large_50mm();
        assert_relative_eq!(
            torque_coefficient(5.612e-7, 1.0, &g50, &e).unwrap(),
            4.50e-9,
            max_relative = 2e-3
        );
        assert_eq!(torque_coefficient(0.0, 1.0, &g23, &e).unwrap(), 0.0);
        assert!(torque_coefficient(-1.0, 1.0, &g23, &e).is_err());
    }

    #[test]
    fn torque_coefficient_closes_power_balance() {
        // τΩ·η must equal T·v_i at every gap.
        let e = env();
        let g = PropellerGeometry::small_23mm();
        let p = CeilingParams::new(1.6, 1e-3).unwrap();
        let omega = 2200.0;
        for d in [0.0, 3.0, 12.0, 23.0] {
            let (gamma, ct, ctau) = flight_coefficients(&g, gap(d), &p, &e).unwrap();
            let thrust = ct * omega * omega;
            let v_i = crate::aero::induced_velocity(thrust, gamma, &e, g.disc_area()).unwrap();
            let shaft = ctau * omega * omega * omega;
            assert_relative_eq!(
                shaft * g.figure_of_merit(),
                thrust * v_i,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn invalid_geometry_rejected() {
        let c = BladeCoefficients {
            c0: 0.1,
            c1: 0.5,
            c2: 0.0,
        };
        assert!(PropellerGeometry::new(0.0, c, 0.5).is_err());
        assert!(PropellerGeometry::new(0.02, c, 0.0).is_err());
        assert!(PropellerGeometry::new(0.02, c, 1.2).is_err());
        assert!(BladeCoefficients::new(0.0, 0.5, 0.0).is_err());
        assert!(BladeCoefficients::new(0.1, 0.5, -0.1).is_err());
        let g = PropellerGeometry::small_23mm();
        assert_relative_eq!(g.disc_area(), PI * 0.023 * 0.023, max_relative = 1e-12);
    }

    #[test]
    fn geometry_serde_round_trip_recomputes_area() {
        let g = PropellerGeometry::large_50mm();
        let text = serde_json::to_string(&g).unwrap();
        assert!(!text.contains("disc_area"));
        let back: PropellerGeometry = serde_json::from_str(&text).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn constant_profile_matches_analytic_integrals() {
        let (cla, chord, pitch, radius) = (5.7, 0.008, 0.2, 0.023);
        let profile =
            BladeProfile::from_fn(cla, radius, PROFILE_SAMPLES, |_| (chord, pitch, 0.0)).unwrap();
        let c = blade_integrals(&profile, radius).unwrap();
        let area = PI * radius * radius;
        let c0 = cla * chord * pitch * radius.powi(3) / (3.0 * area * radius * radius);
        let c1 = cla * chord * radius.powi(3) / (2.0 * area * radius * radius);
        assert_relative_eq!(c.c0, c0, max_relative = 1e-6);
        assert_relative_eq!(c.c1, c1, max_relative = 1e-6);
        assert_eq!(c.c2, 0.0);
    }

    #[test]
    fn radial_twist_ratio_identity() {
        let (pitch, twist) = (0.2, 0.05);
        let profile =
            BladeProfile::from_fn(5.7, 0.023, PROFILE_SAMPLES, |_| (0.008, pitch, twist)).unwrap();
        let c = blade_integrals(&profile, 0.023).unwrap();
        assert_relative_eq!(c.c2, twist / (2.0 * pitch) * c.c0, max_relative = 1e-12);
    }

    #[test]
    fn quadrature_converges_for_smooth_profiles() {
        let radius = 0.05;
        let shape = |r: f64| {
            let s = r / radius;
            (
                0.012 * (1.0 - 0.6 * s),
                0.35 - 0.2 * s,
                0.04 * s * (1.0 - s),
            )
        };
        let a = blade_integrals(
            &BladeProfile::from_fn(5.7, radius, PROFILE_SAMPLES, shape).unwrap(),
            radius,
        )
        .unwrap();
        let b = blade_integrals(
            &BladeProfile::from_fn(5.7, radius, 2 * PROFILE_SAMPLES - 1, shape).unwrap(),
            radius,
        )
        .unwrap();
        for (x, y) in [(a.c0, b.c0), (a.c1, b.c1), (a.c2, b.c2)] {
            assert!(((x - y) / y).abs() < 1e-6);
        }
    }

    #[test]
    fn profile_validation() {
        let s = |r| ProfileSample {
            r,
            chord: 0.01,
            pitch: 0.1,
            radial_twist: 0.0,
        };
        assert!(BladeProfile::sampled(5.7, vec![s(0.0), s(0.01)]).is_err());
        assert!(BladeProfile::sampled(5.7, vec![s(0.0), s(0.02), s(0.01)]).is_err());
        let steep = ProfileSample {
            r: 0.02,
            chord: 0.01,
            pitch: 0.7,
            radial_twist: 0.0,
        };
        assert!(BladeProfile::sampled(5.7, vec![s(0.0), s(0.01), steep]).is_err());
        let p = BladeProfile::sampled(5.7, vec![s(0.0), s(0.01), s(0.03)]).unwrap();
        assert!(blade_integrals(&p, 0.02).is_err());
    }

    proptest! {
        #[test]
        fn bem_and_momentum_thrust_agree(
            gamma in 1.0f64..5.0, d in 0.0f64..25.0, omega in prop::sample::select(vec![500.0, 2000.0]),
            large in any::<bool>(),
        ) {
            let e = env();
            let g = if large { PropellerGeometry::large_50mm() } else { PropellerGeometry::small_23mm() };
            let x = inflow_ratio(&g, gamma, gap(d)).unwrap();
            let v_i = x * omega * g.radius();
            let t_bem = bem_thrust(&g, v_i, omega, gap(d), &e).unwrap();
            let t_mt = 2.0 * 1.2 * g.disc_area() * gamma * gamma * v_i * v_i;
            prop_assert!(((t_bem - t_mt) / t_mt).abs() < 1e-10);
        }

        #[test]
        fn torque_monotone_in_thrust_and_efficiency(ct in 1e-9f64..1e-6, f in 1.01f64..3.0, eta in 0.2f64..0.9) {
            let e = env();
            let g = PropellerGeometry::small_23mm().with_figure_of_merit(eta).unwrap();
            let g_better = g.with_figure_of_merit((eta * 1.1).min(1.0)).unwrap();
            let base = torque_coefficient(ct, 1.0, &g, &e).unwrap();
            prop_assert!(torque_coefficient(ct * f, 1.0, &g, &e).unwrap() > base);
            prop_assert!(torque_coefficient(ct, 1.0, &g_better, &e).unwrap() < base);
        }

        #[test]
        fn thrust_coefficient_ignores_radial_term_at_zero_gap(c2 in 0.0f64..1.0, a0 in 1.0f64..10.0) {
            let e = env();
            let g = PropellerGeometry::small_23mm();
            let g2 = g.with_coeffs(BladeCoefficients::new(0.154, 0.846, c2).unwrap()).unwrap();
            let p = CeilingParams::reduced(a0).unwrap();
            prop_assert_eq!(
                thrust_coefficient(&g, gap(0.0), &p, &e).unwrap(),
                thrust_coefficient(&g2, gap(0.0), &p, &e).unwrap()
            );
        }
    }
}
