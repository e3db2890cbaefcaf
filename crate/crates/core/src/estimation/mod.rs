//! Bench-data analysis: slope fits, nonlinear model fits, synthetic data and
//! a brute-force oracle for checking the fitters.

mod blade;
mod ceiling;
mod gamma;
mod oracle;
mod pipeline;
mod records;
pub mod regression;
mod report;
pub mod solver;
mod synth;

pub use blade::{
    blade_objective, fit_blade_coefficients, fit_flight_coefficients, FlightCoefficientPoint,
    BLADE_BOUNDS,
};
pub use ceiling::{ceiling_objective, fit_ceiling_params, CEILING_BOUNDS};
pub use gamma::{
    eta_ceiling_objective, fit_eta_gamma, gamma_points_from_slopes, refine_eta_ceiling, EtaAnchor,
    EtaGammaFit, MechanicalPowerSource, SlopePoint, MAX_ANCHOR_DELTA,
};
pub use oracle::{grid_oracle, OracleResult};
pub use pipeline::{run_pipeline, PipelineOptions, PipelineResult};
pub use records::{group_by_distance, GammaPoint, SteadyRecord};
pub use report::FitReport;
pub use synth::{
    linear_spaced, log_spaced, synthesize_dataset, ChannelNoise, Schedule, SetpointKind, Truth,
};
