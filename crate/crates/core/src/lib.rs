//! Ceiling-effect models for small propellers.
//!
//! A propeller spinning just beneath a horizontal surface needs less power
//! for the same thrust. This crate implements the momentum-theory and
//! blade-element models of that effect, the bench-data fitting pipeline that
//! identifies their coefficients, and the power-saving analysis built on top.
//!
//! ## Modules
//!
//! - [`aero`]: momentum theory with a ceiling (ceiling coefficient, flow, power)
//! - [`bemt`]: blade-element relations (inflow ratio, thrust/torque coefficients)
//! - [`powertrain`]: first-order brushed-motor model and its identification
//! - [`estimation`]: slope fits, nonlinear fits, synthetic data, grid oracle
//! - [`analysis`]: power-saving curves, thrust amplification, resonance, anomalies
//! - [`io`]: CSV records, parameter files, steady-state extraction
//! - [`cli`]: the `ceiling` command-line front end
//!
//! All quantities are SI.

pub mod aero;
pub mod analysis;
pub mod bemt;
pub mod cli;
pub mod error;
pub mod estimation;
pub mod io;
pub mod powertrain;

pub use aero::{CeilingParams, Environment, FlowState, GapRatio};
pub use bemt::{BladeProfile, PropellerGeometry};
pub use error::{Error, Result};
pub use estimation::{FitReport, GammaPoint, SteadyRecord};
pub use powertrain::{MotorParams, PowerBreakdown};

/// Air density used throughout the bench analysis [kg/m³].
pub const DEFAULT_AIR_DENSITY: f64 = 1.2;
