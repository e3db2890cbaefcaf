//! Momentum theory for a propeller beneath a ceiling.
//!
//! The propeller is an actuator disc of area `A` at distance `D` below a flat
//! surface. Air enters the gap radially, so the ceiling carries a suction
//! (holding) force and the momentum balance gains a term in `δ = R/D`. The
//! result is summarised by the ceiling coefficient `γ`, the factor by which
//! aerodynamic power drops at fixed thrust.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_nonnegative, ensure_positive, Error, Result};
use crate::DEFAULT_AIR_DENSITY;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    air_density: f64,
}

impl Environment {
    pub fn new(air_density: f64) -> Result<Self> {
        ensure_positive("air_density", air_density)?;
        Ok(Self { air_density })
    }

    /// Air density [kg/m³].
    pub fn air_density(&self) -> f64 {
        self.air_density
    }
}

impl Default for Environment {
    fn default() -> Self {
        Self {
            air_density: DEFAULT_AIR_DENSITY,
        }
    }
}

/// Propeller-to-ceiling ratio `δ = R/D`. Zero means no ceiling.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct GapRatio(f64);

impl GapRatio {
    pub const NO_CEILING: GapRatio = GapRatio(0.0);

    pub fn new(delta: f64) -> Result<Self> {
        ensure_nonnegative("delta", delta)?;
        Ok(Self(delta))
    }

    /// `δ = radius / distance`; the distance must be strictly positive.
    pub fn from_distance(radius: f64, distance: f64) -> Result<Self> {
        ensure_positive("radius", radius)?;
        ensure_positive("distance", distance)?;
        Self::new(radius / distance)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for GapRatio {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        GapRatio::new(value)
    }
}

impl From<GapRatio> for f64 {
    fn from(value: GapRatio) -> f64 {
        value.0
    }
}

/// Asymmetry (`alpha0`) and recirculation (`alpha1`) factors of the ceiling
/// coefficient model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCeilingParams")]
pub struct CeilingParams {
    alpha0: f64,
    alpha1: f64,
}

#[derive(Deserialize)]
struct RawCeilingParams {
    alpha0: f64,
    alpha1: f64,
}

impl TryFrom<RawCeilingParams> for CeilingParams {
    type Error = Error;

    fn try_from(raw: RawCeilingParams) -> Result<Self> {
        CeilingParams::new(raw.alpha0, raw.alpha1)
    }
}

impl CeilingParams {
    /// Axisymmetric flow without recirculation.
    pub const AXISYMMETRIC: CeilingParams = CeilingParams {
        alpha0: 1.0,
        alpha1: 0.0,
    };

    pub fn new(alpha0: f64, alpha1: f64) -> Result<Self> {
        if !(alpha0.is_finite() && alpha0 >= 1.0) {
            return Err(Error::invalid(
                "alpha0",
                format!("must be >= 1, got {alpha0}"),
            ));
        }
        ensure_nonnegative("alpha1", alpha1)?;
        Ok(Self { alpha0, alpha1 })
    }

    /// Reduced model: recirculation neglected.
    pub fn reduced(alpha0: f64) -> Result<Self> {
        Self::new(alpha0, 0.0)
    }

    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }
}

/// Velocities and pressures around the actuator disc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowState {
    pub induced_velocity: f64,
    pub terminal_velocity: f64,
    pub upstream_pressure: f64,
    pub downstream_pressure: f64,
    pub ambient_pressure: f64,
}

impl FlowState {
    /// Solves the disc flow for a given thrust and ceiling coefficient.
    pub fn solve(
        thrust: f64,
        gamma: f64,
        env: &Environment,
        disc_area: f64,
        ambient_pressure: f64,
    ) -> Result<Self> {
        let v_i = induced_velocity(thrust, gamma, env, disc_area)?;
        let v_inf = 2.0 * gamma * v_i;
        let rho = env.air_density();
        // Bernoulli upstream and downstream of the disc.
        let upstream_pressure = ambient_pressure - 0.5 * rho * v_i * v_i;
        let downstream_pressure = ambient_pressure + 0.5 * rho * (v_inf * v_inf - v_i * v_i);
        Ok(Self {
            induced_velocity: v_i,
            terminal_velocity: v_inf,
            upstream_pressure,
            downstream_pressure,
            ambient_pressure,
        })
    }

    /// Disc thrust `(p+ − p−)·A`.
    pub fn thrust(&self, disc_area: f64) -> f64 {
        (self.downstream_pressure - self.upstream_pressure) * disc_area
    }
}

/// Closed-form ceiling coefficient without argument checks. Used inside the
/// fitters, which may probe slightly outside the admissible box.
pub(crate) fn gamma_unchecked(delta: f64, alpha0: f64, alpha1: f64) -> f64 {
    let d2 = delta * delta;
    let u = 1.0 - alpha1 * d2;
    0.5 * u + 0.5 * (u * u + alpha0 * d2 / 8.0).sqrt()
}

/// Ceiling coefficient
/// `γ = ½(1 − α₁δ²) + ½·√((1 − α₁δ²)² + α₀δ²/8)`.
///
/// Exactly 1 at `δ = 0`. Fails if the result is not a positive finite number.
pub fn ceiling_coefficient(delta: GapRatio, params: &CeilingParams) -> Result<f64> {
    let gamma = gamma_unchecked(delta.value(), params.alpha0, params.alpha1);
    if gamma.is_finite() && gamma > 0.0 {
        Ok(gamma)
    } else {
        Err(Error::Model(format!(
            "ceiling coefficient {gamma} is not positive at delta = {}",
            delta.value()
        )))
    }
}

fn check_thrust_inputs(thrust: f64, gamma: f64, disc_area: f64) -> Result<()> {
    ensure_nonnegative("thrust", thrust)?;
    ensure_positive("gamma", gamma)?;
    ensure_positive("disc_area", disc_area)?;
    Ok(())
}

/// Induced velocity `v_i = √(T / (2ρAγ²))`.
pub fn induced_velocity(thrust: f64, gamma: f64, env: &Environment, disc_area: f64) -> Result<f64> {
    check_thrust_inputs(thrust, gamma, disc_area)?;
    Ok((thrust / (2.0 * env.air_density() * disc_area)).sqrt() / gamma)
}

/// Far-wake velocity `v_∞ = √(2T/ρA)`, independent of the ceiling.
pub fn terminal_velocity(thrust: f64, env: &Environment, disc_area: f64) -> Result<f64> {
    check_thrust_inputs(thrust, 1.0, disc_area)?;
    Ok((2.0 * thrust / (env.air_density() * disc_area)).sqrt())
}

/// Ideal aerodynamic power `P_a = γ⁻¹·T·√(T/2ρA)`.
pub fn aerodynamic_power(
    thrust: f64,
    gamma: f64,
    env: &Environment,
    disc_area: f64,
) -> Result<f64> {
    check_thrust_inputs(thrust, gamma, disc_area)?;
    Ok(thrust * (thrust / (2.0 * env.air_density() * disc_area)).sqrt() / gamma)
}

/// Vertical momentum balance per unit `ρA`:
/// `½v_∞² − (1 − α₁δ²)·v_i·v_∞ − (α₀/16)·v_i²·δ²`.
///
/// Vanishes exactly when `v_∞ = 2γ·v_i`.
pub fn momentum_residual(
    induced_velocity: f64,
    terminal_velocity: f64,
    delta: GapRatio,
    params: &CeilingParams,
) -> Result<f64> {
    ensure_nonnegative("induced_velocity", induced_velocity)?;
    ensure_nonnegative("terminal_velocity", terminal_velocity)?;
    let d2 = delta.value() * delta.value();
    let (v_i, v_inf) = (induced_velocity, terminal_velocity);
    Ok(0.5 * v_inf * v_inf
        - (1.0 - params.alpha1 * d2) * v_i * v_inf
        - params.alpha0 / 16.0 * v_i * v_i * d2)
}

/// Radial inflow speed in the gap at radius `r`: `v_r = r·v_i / 2D`.
pub fn radial_velocity(r: f64, distance: f64, induced_velocity: f64) -> Result<f64> {
    ensure_nonnegative("r", r)?;
    ensure_positive("distance", distance)?;
    ensure_nonnegative("induced_velocity", induced_velocity)?;
    Ok(r / (2.0 * distance) * induced_velocity)
}

/// Net suction on the ceiling, `(α₀/16)·ρ·A·v_i²·δ²`.
pub fn holding_force(
    induced_velocity: f64,
    delta: GapRatio,
    alpha0: f64,
    env: &Environment,
    disc_area: f64,
) -> Result<f64> {
    ensure_nonnegative("induced_velocity", induced_velocity)?;
    ensure_positive("disc_area", disc_area)?;
    if !(alpha0.is_finite() && alpha0 >= 1.0) {
        return Err(Error::invalid(
            "alpha0",
            format!("must be >= 1, got {alpha0}"),
        ));
    }
    let d = delta.value();
    Ok(alpha0 / 16.0 * env.air_density() * disc_area * induced_velocity * induced_velocity * d * d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const AREA_23MM: f64 = 1.6619e-3;

    fn gap(d: f64) -> GapRatio {
        GapRatio::new(d).unwrap()
    }

    fn env() -> Environment {
        Environment::new(1.2).unwrap()
    }

    #[test]
    fn gamma_is_one_without_ceiling() {
        for (a0, a1) in [(1.0, 0.0), (1.6, 0.0), (2.0, 0.002), (50.0, 0.9)] {
            let p = CeilingParams::new(a0, a1).unwrap();
            assert_eq!(ceiling_coefficient(GapRatio::NO_CEILING, &p).unwrap(), 1.0);
        }
    }

    #[test]
    fn gamma_reference_values() {
        let p = CeilingParams::new(1.60, 0.0).unwrap();
        assert_relative_eq!(
            ceiling_coefficient(gap(8.0), &p).unwrap(),
            2.3574,
            max_relative = 1e-4
        );
        let p = CeilingParams::new(2.0, 0.002).unwrap();
        assert_relative_eq!(
            ceiling_coefficient(gap(10.0), &p).unwrap(),
            2.9318,
            max_relative = 1e-4
        );
    }

    #[test]
    fn axisymmetric_gamma_matches_single_rotor_closed_form() {
        for i in 0..=300 {
            let d = i as f64 * 0.1;
            let closed = 0.5 + 0.5 * (1.0 + d * d / 8.0).sqrt();
            let g = ceiling_coefficient(gap(d), &CeilingParams::AXISYMMETRIC).unwrap();
            assert_relative_eq!(g, closed, max_relative = 1e-12);
        }
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(GapRatio::new(-0.1).is_err());
        assert!(GapRatio::new(f64::NAN).is_err());
        assert!(GapRatio::from_distance(0.023, 0.0).is_err());
        assert!(CeilingParams::new(0.99, 0.0).is_err());
        assert!(CeilingParams::new(1.2, -1e-3).is_err());
        assert!(serde_json::from_str::<CeilingParams>(r#"{"alpha0":0.5,"alpha1":0}"#).is_err());
        assert!(serde_json::from_str::<GapRatio>("-1.0").is_err());
    }

    #[test]
    fn gap_from_distance() {
        let g = GapRatio::from_distance(0.023, 0.001).unwrap();
        assert_relative_eq!(g.value(), 23.0, max_relative = 1e-12);
    }

    #[test]
    fn induced_velocity_values() {
        let e = env();
        assert_eq!(induced_velocity(0.0, 1.0, &e, AREA_23MM).unwrap(), 0.0);
        assert_relative_eq!(
            induced_velocity(0.0785, 1.0, &e, AREA_23MM).unwrap(),
            4.436,
            max_relative = 1e-3
        );
        assert_relative_eq!(
            induced_velocity(0.0785, 2.0, &e, AREA_23MM).unwrap(),
            2.218,
            max_relative = 1e-3
        );
        assert!(induced_velocity(-1e-3, 1.0, &e, AREA_23MM).is_err());
    }

    #[test]
    fn aerodynamic_power_values() {
        let e = env();
        assert_eq!(aerodynamic_power(0.0, 1.0, &e, AREA_23MM).unwrap(), 0.0);
        let p1 = aerodynamic_power(0.0785, 1.0, &e, AREA_23MM).unwrap();
        assert_relative_eq!(p1, 0.3482, max_relative = 1e-3);
        let p2 = aerodynamic_power(0.0785, 2.0, &e, AREA_23MM).unwrap();
        assert_relative_eq!(p2, 0.5 * p1, max_relative = 1e-15);
        assert!(aerodynamic_power(-1.0, 1.0, &e, AREA_23MM).is_err());
    }

    #[test]
    fn momentum_residual_values() {
        let p = CeilingParams::AXISYMMETRIC;
        assert_eq!(momentum_residual(1.0, 2.0, gap(0.0), &p).unwrap(), 0.0);
        assert_relative_eq!(momentum_residual(1.0, 3.0, gap(0.0), &p).unwrap(), 1.5);

        let p = CeilingParams::new(2.0, 0.002).unwrap();
        let g = ceiling_coefficient(gap(10.0), &p).unwrap();
        assert_relative_eq!(2.0 * g, 5.8636, max_relative = 1e-4);
        assert!(
            momentum_residual(1.0, 2.0 * g, gap(10.0), &p)
                .unwrap()
                .abs()
                < 1e-9
        );
        assert!(momentum_residual(-1.0, 2.0, gap(0.0), &p).is_err());
    }

    #[test]
    fn momentum_root_grid() {
        let p = CeilingParams::new(1.6, 1e-4).unwrap();
        for v_i in [0.1, 1.0, 10.0] {
            for d in [0.0, 5.0, 10.0, 23.0] {
                let g = ceiling_coefficient(gap(d), &p).unwrap();
                let r = momentum_residual(v_i, 2.0 * g * v_i, gap(d), &p).unwrap();
                assert!(r.abs() < 1e-9, "v_i={v_i} d={d} r={r}");
            }
        }
    }

    #[test]
    fn radial_velocity_values() {
        assert_eq!(radial_velocity(0.0, 0.01, 3.0).unwrap(), 0.0);
        assert_relative_eq!(
            radial_velocity(0.023, 0.0115, 4.0).unwrap(),
            4.0,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            radial_velocity(0.01, 0.05, 3.0).unwrap(),
            0.3,
            max_relative = 1e-12
        );
        assert!(radial_velocity(0.01, 0.0, 3.0).is_err());
        assert!(radial_velocity(0.01, -0.1, 3.0).is_err());
    }

    #[test]
    fn holding_force_values() {
        let e = env();
        assert_eq!(
            holding_force(0.0, gap(10.0), 1.0, &e, 1.662e-3).unwrap(),
            0.0
        );
        let f1 = holding_force(4.0, gap(10.0), 1.0, &e, 1.662e-3).unwrap();
        assert_relative_eq!(f1, 0.19944, max_relative = 1e-9);
        let f2 = holding_force(4.0, gap(10.0), 2.0, &e, 1.662e-3).unwrap();
        assert_relative_eq!(f2, 0.39888, max_relative = 1e-9);
    }

    #[test]
    fn flow_state_thrust_matches_far_wake_momentum() {
        let e = env();
        let flow = FlowState::solve(0.0785, 1.7, &e, AREA_23MM, 101_325.0).unwrap();
        assert_relative_eq!(flow.thrust(AREA_23MM), 0.0785, max_relative = 1e-9);
        let v_inf = terminal_velocity(0.0785, &e, AREA_23MM).unwrap();
        assert_relative_eq!(flow.terminal_velocity, v_inf, max_relative = 1e-12);
        assert!(flow.upstream_pressure < flow.ambient_pressure);
    }

    proptest! {
        #[test]
        fn gamma_nondecreasing_without_recirculation(a0 in 1.0f64..20.0) {
            let p = CeilingParams::reduced(a0).unwrap();
            let mut prev = 1.0;
            for i in 0..=300 {
                let g = ceiling_coefficient(gap(i as f64 * 0.1), &p).unwrap();
                prop_assert!(g >= prev);
                prev = g;
            }
        }

        #[test]
        fn power_is_thrust_times_induced_velocity(
            thrust in 1e-4f64..10.0, gamma in 1.0f64..6.0, area in 1e-4f64..1e-1,
        ) {
            let e = env();
            let p = aerodynamic_power(thrust, gamma, &e, area).unwrap();
            let v = induced_velocity(thrust, gamma, &e, area).unwrap();
            prop_assert!(((p - thrust * v) / p).abs() < 1e-12);
        }

        #[test]
        fn holding_force_reduces_to_axisymmetric(v_i in 0.0f64..20.0, d in 0.0f64..30.0) {
            let e = env();
            let f = holding_force(v_i, gap(d), 1.0, &e, AREA_23MM).unwrap();
            let expected = 1.2 * AREA_23MM * v_i * v_i * d * d / 16.0;
            prop_assert!((f - expected).abs() <= 1e-12 * expected.max(1e-300));
        }
    }
}
