//! The `ceiling` command-line tool.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 fit failure.

use std::ffi::OsString;
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::aero::{CeilingParams, Environment, GapRatio};
use crate::analysis::{
    anomaly_scan, power_saving_curve, resonance_scan, DEFAULT_ANOMALY_THRESHOLD,
};
use crate::bemt::{flight_coefficients, torque_coefficient, PropellerGeometry};
use crate::error::Error;
use crate::estimation::{
    fit_blade_coefficients, fit_ceiling_params, fit_eta_gamma, fit_flight_coefficients,
    synthesize_dataset, ChannelNoise, EtaAnchor, FitReport, MechanicalPowerSource, Schedule,
    SetpointKind, Truth,
};
use crate::io::{
    parse_range, read_gamma_csv, read_raw_csv, read_steady_csv, sha256_hex, steady_state_extract,
    write_flight_csv, write_gamma_csv, write_power_curve_csv, write_resonance_csv,
    write_steady_csv, ParamFile, DEFAULT_STABILITY_TOL, DEFAULT_WINDOW_S,
};
use crate::powertrain::{identify_motor, MotorParams};
use crate::DEFAULT_AIR_DENSITY;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_FIT: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "ceiling",
    version,
    about = "Ceiling-effect models and bench-data fitting for small propellers"
)]
#[command(arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate steady records from known constants.
    Synth(SynthArgs),
    /// Average a raw sample stream into steady records.
    Extract(ExtractArgs),
    /// Identify motor resistance and back-EMF constant.
    FitMotor(FitMotorArgs),
    /// Figure of merit and empirical ceiling coefficients.
    FitGamma(FitGammaArgs),
    /// Fit the ceiling-coefficient model to empirical points.
    FitCeiling(FitCeilingArgs),
    /// Fit the blade coefficients to measured thrust and torque coefficients.
    FitBlade(FitBladeArgs),
    /// Thrust and torque coefficients over a range of distances.
    PredictCoeffs(PredictArgs),
    /// Power needed to hold a thrust over a range of distances.
    PowerSaving(PowerSavingArgs),
    /// The resonance product over a grid of gap ratios.
    Resonance(ResonanceArgs),
    /// Empirical points falling well below the fitted model.
    Anomalies(AnomalyArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Preset {
    #[value(name = "23mm")]
    Small,
    #[value(name = "50mm")]
    Large,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PowerSourceArg {
    Torque,
    Motor,
}

#[derive(Debug, Args)]
struct DensityArg {
    /// Air density [kg/m³]; defaults to the parameter file value, else 1.2.
    #[arg(long)]
    density: Option<f64>,
}

#[derive(Debug, Args)]
struct RangeArgs {
    /// Ceiling distances [m] as start:stop:count.
    #[arg(long)]
    distances: String,
    /// Space the distances logarithmically.
    #[arg(long)]
    log: bool,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Relative Gaussian noise on every channel.
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    #[arg(long, value_enum, default_value = "23mm")]
    preset: Preset,
    #[arg(long, default_value_t = 1.6)]
    alpha0: f64,
    #[arg(long, default_value_t = 0.0)]
    alpha1: f64,
    /// Distances [m] as start:stop:count, log-spaced (default 0.001:0.1:68).
    #[arg(long)]
    distances: Option<String>,
    /// Drive voltages [V] as start:stop:count (default 2.5:4.0:16).
    #[arg(long)]
    voltages: Option<String>,
    /// Also write the generating constants here.
    #[arg(long)]
    params: Option<PathBuf>,
    #[command(flatten)]
    density: DensityArg,
}

#[derive(Debug, Args)]
struct ExtractArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Averaging window [s].
    #[arg(long, default_value_t = DEFAULT_WINDOW_S)]
    window: f64,
    /// Largest std/mean per channel for a steady window.
    #[arg(long, default_value_t = DEFAULT_STABILITY_TOL)]
    tol: f64,
}

#[derive(Debug, Args)]
struct FitMotorArgs {
    #[arg(long)]
    input: PathBuf,
    /// Parameter file to create or update.
    #[arg(long)]
    params: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FitGammaArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    params: Option<PathBuf>,
    /// Mechanical power from measured torque or from motor constants.
    #[arg(long, value_enum, default_value = "torque")]
    power_source: PowerSourceArg,
    #[command(flatten)]
    density: DensityArg,
}

#[derive(Debug, Args)]
struct FitCeilingArgs {
    /// Empirical ceiling coefficients (delta,gamma,stderr,n_points).
    #[arg(long)]
    input: PathBuf,
    /// Pin the recirculation factor to zero.
    #[arg(long)]
    reduced: bool,
    #[arg(long)]
    params: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FitBladeArgs {
    #[arg(long)]
    input: PathBuf,
    /// Must hold `eta` and `ceiling`; receives the fitted geometry.
    #[arg(long)]
    params: PathBuf,
    /// Per-distance thrust and torque coefficients.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    density: DensityArg,
}

#[derive(Debug, Args)]
struct PredictArgs {
    #[arg(long)]
    params: PathBuf,
    #[command(flatten)]
    range: RangeArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    density: DensityArg,
}

#[derive(Debug, Args)]
struct PowerSavingArgs {
    #[arg(long)]
    params: PathBuf,
    /// Thrust per propeller [N].
    #[arg(long)]
    thrust: f64,
    #[command(flatten)]
    range: RangeArgs,
    /// Constant torque coefficient for the motor losses; defaults to the
    /// no-ceiling value of the stored geometry.
    #[arg(long)]
    c_tau: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    density: DensityArg,
}

#[derive(Debug, Args)]
struct ResonanceArgs {
    #[arg(long)]
    params: PathBuf,
    /// Gap ratios as start:stop:count.
    #[arg(long, default_value = "0:25:251")]
    deltas: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AnomalyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    params: PathBuf,
    #[arg(long, default_value_t = DEFAULT_ANOMALY_THRESHOLD)]
    threshold: f64,
}

/// A failed command: message plus exit code.
struct Failure(i32, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotIdentifiable(_) => EXIT_FIT,
            _ => EXIT_DATA,
        };
        Failure(code, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure(EXIT_DATA, e.to_string())
    }
}

type CmdResult = Result<String, Failure>;

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    EXIT_OK
                }
                _ => EXIT_USAGE,
            };
        }
    };
    let result = match cli.command {
        Command::Synth(a) => synth(a),
        Command::Extract(a) => extract(a),
        Command::FitMotor(a) => fit_motor(a),
        Command::FitGamma(a) => fit_gamma(a),
        Command::FitCeiling(a) => fit_ceiling(a),
        Command::FitBlade(a) => fit_blade(a),
        Command::PredictCoeffs(a) => predict(a),
        Command::PowerSaving(a) => power_saving(a),
        Command::Resonance(a) => resonance(a),
        Command::Anomalies(a) => anomalies(a),
    };
    match result {
        Ok(summary) => {
            eprintln!("{summary}");
            EXIT_OK
        }
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            code
        }
    }
}

fn data_err(msg: impl Into<String>) -> Failure {
    Failure(EXIT_DATA, msg.into())
}

fn load_or_new(path: Option<&Path>, env: &Environment) -> Result<ParamFile, Failure> {
    match path {
        Some(p) if p.exists() => Ok(ParamFile::load(p)?),
        _ => Ok(ParamFile::new(env)),
    }
}

fn environment(flag: &DensityArg, file: Option<&ParamFile>) -> Result<Environment, Failure> {
    let rho = flag
        .density
        .or(file.map(|f| f.density))
        .unwrap_or(DEFAULT_AIR_DENSITY);
    Ok(Environment::new(rho)?)
}

fn dataset_hash(path: &Path) -> Result<String, Failure> {
    Ok(sha256_hex(&std::fs::read(path)?))
}

/// Writes `params` and fails with the fit exit code if `report` did not
/// converge.
fn finish(summary: String, report: &FitReport, what: &str) -> CmdResult {
    if report.converged {
        Ok(summary)
    } else {
        Err(Failure(
            EXIT_FIT,
            format!(
                "{what} fit did not converge after {} iterations",
                report.iterations
            ),
        ))
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn synth(a: SynthArgs) -> CmdResult {
    let env = environment(&a.density, None)?;
    let geometry = match a.preset {
        Preset::Small => PropellerGeometry::small_23mm(),
        Preset::Large => PropellerGeometry::large_50mm(),
    };
    let truth = Truth {
        geometry,
        ceiling: CeilingParams::new(a.alpha0, a.alpha1)?,
        motor: MotorParams::coreless_7x16(),
    };
    let default = Schedule::bench_23mm();
    let schedule = Schedule {
        distances: match &a.distances {
            Some(r) => parse_range(r, true)?,
            None => default.distances,
        },
        setpoints: match &a.voltages {
            Some(r) => parse_range(r, false)?,
            None => default.setpoints,
        },
        kind: SetpointKind::Voltage,
    };
    let records = synthesize_dataset(
        &truth,
        &schedule,
        &ChannelNoise::uniform(a.noise),
        a.seed,
        &env,
    )?;
    write_steady_csv(&records, &a.out)?;
    if let Some(p) = &a.params {
        let mut file = ParamFile::new(&env);
        file.geometry = Some(truth.geometry);
        file.ceiling = Some(truth.ceiling);
        file.motor = Some(truth.motor);
        file.eta = Some(truth.geometry.figure_of_merit());
        file.provenance.source = Some(format!("synthetic, seed {}, noise {}", a.seed, a.noise));
        file.provenance.dataset_sha256 = Some(dataset_hash(&a.out)?);
        file.save(p)?;
    }
    Ok(format!(
        "synth: wrote {} records to {}",
        records.len(),
        a.out.display()
    ))
}

fn extract(a: ExtractArgs) -> CmdResult {
    let stream = read_raw_csv(&a.input)?;
    let out = steady_state_extract(&stream, a.window, a.tol)?;
    write_steady_csv(&out.records, &a.out)?;
    Ok(format!(
        "extract: {} steady records from {} samples, {} warning(s)",
        out.records.len(),
        stream.samples.len(),
        out.warnings.len()
    ))
}

fn fit_motor(a: FitMotorArgs) -> CmdResult {
    let records = read_steady_csv(&a.input)?;
    let (motor, report) = identify_motor(&records)?;
    if let Some(p) = &a.params {
        let mut file = load_or_new(Some(p), &Environment::default())?;
        file.motor = Some(motor);
        file.provenance.dataset_sha256 = Some(dataset_hash(&a.input)?);
        file.provenance.reports.insert("motor".into(), report);
        file.save(p)?;
    }
    Ok(format!(
        "fit-motor: R_i = {} ohm, k = {} V*s/rad from {} records",
        motor.internal_resistance(),
        motor.back_emf_constant(),
        records.len()
    ))
}

fn fit_gamma(a: FitGammaArgs) -> CmdResult {
    let records = read_steady_csv(&a.input)?;
    let existing = match &a.params {
        Some(p) if p.exists() => Some(ParamFile::load(p)?),
        _ => None,
    };
    let env = environment(&a.density, existing.as_ref())?;
    let source = match a.power_source {
        PowerSourceArg::Torque => MechanicalPowerSource::Torque,
        PowerSourceArg::Motor => match existing.as_ref().and_then(|f| f.motor) {
            Some(m) => MechanicalPowerSource::Motor(m),
            None => MechanicalPowerSource::Motor(identify_motor(&records)?.0),
        },
    };
    let fit = fit_eta_gamma(&records, &env, &source, &EtaAnchor::UnitGamma)?;
    for w in &fit.warnings {
        eprintln!("warning: {w}");
    }
    write_gamma_csv(&fit.points, &a.out)?;
    if let Some(p) = &a.params {
        let mut file = existing.unwrap_or_else(|| ParamFile::new(&env));
        file.density = env.air_density();
        file.eta = Some(fit.eta);
        file.provenance.dataset_sha256 = Some(dataset_hash(&a.input)?);
        file.save(p)?;
    }
    Ok(format!(
        "fit-gamma: eta = {}, {} gamma points",
        fit.eta,
        fit.points.len()
    ))
}

fn fit_ceiling(a: FitCeilingArgs) -> CmdResult {
    let points = read_gamma_csv(&a.input)?;
    let (params, report) = fit_ceiling_params(&points, a.reduced)?;
    if let Some(p) = &a.params {
        let mut file = load_or_new(Some(p), &Environment::default())?;
        file.ceiling = Some(params);
        file.provenance
            .reports
            .insert("ceiling".into(), report.clone());
        file.save(p)?;
    }
    if !report.identifiable {
        eprintln!("warning: ceiling parameters are not identifiable from these points");
    }
    finish(
        format!(
            "fit-ceiling: alpha0 = {}, alpha1 = {}",
            params.alpha0(),
            params.alpha1()
        ),
        &report,
        "ceiling",
    )
}

fn fit_blade(a: FitBladeArgs) -> CmdResult {
    let records = read_steady_csv(&a.input)?;
    let mut file = ParamFile::load(&a.params)?;
    let env = environment(&a.density, Some(&file))?;
    let eta = file
        .eta
        .ok_or_else(|| data_err("parameter file has no eta; run fit-gamma first"))?;
    let ceiling = file
        .ceiling
        .ok_or_else(|| data_err("parameter file has no ceiling; run fit-ceiling first"))?;
    let radius = records
        .first()
        .ok_or_else(|| data_err("no records"))?
        .radius;
    let points = fit_flight_coefficients(&records)?;
    let ct: Vec<(f64, f64)> = points
        .iter()
        .map(|p| (p.delta, p.thrust_coefficient))
        .collect();
    let ctau: Vec<(f64, f64)> = points
        .iter()
        .filter_map(|p| p.torque_coefficient.map(|c| (p.delta, c)))
        .collect();
    let (coeffs, report) = fit_blade_coefficients(&ct, &ctau, radius, eta, &ceiling, &env)?;
    if let Some(out) = &a.out {
        write_flight_csv(&points, out)?;
    }
    file.geometry = Some(PropellerGeometry::new(radius, coeffs, eta)?);
    file.provenance
        .reports
        .insert("blade".into(), report.clone());
    file.save(&a.params)?;
    finish(
        format!(
            "fit-blade: c0 = {}, c1 = {}, c2 = {}",
            coeffs.c0, coeffs.c1, coeffs.c2
        ),
        &report,
        "blade",
    )
}

fn geometry_and_ceiling(file: &ParamFile) -> Result<(PropellerGeometry, CeilingParams), Failure> {
    let geom = file
        .geometry
        .ok_or_else(|| data_err("parameter file has no geometry"))?;
    let ceiling = file
        .ceiling
        .ok_or_else(|| data_err("parameter file has no ceiling"))?;
    Ok((geom, ceiling))
}

fn predict(a: PredictArgs) -> CmdResult {
    let file = ParamFile::load(&a.params)?;
    let env = environment(&a.density, Some(&file))?;
    let (geom, ceiling) = geometry_and_ceiling(&file)?;
    let distances = parse_range(&a.range.distances, a.range.log)?;
    let mut w = csv::Writer::from_writer(output(a.out.as_deref())?);
    let csv_err = |e: csv::Error| data_err(e.to_string());
    w.write_record([
        "distance_m",
        "delta",
        "gamma",
        "thrust_coefficient",
        "torque_coefficient",
    ])
    .map_err(csv_err)?;
    for &d in &distances {
        let delta = GapRatio::from_distance(geom.radius(), d)?;
        let (gamma, ct, ctau) = flight_coefficients(&geom, delta, &ceiling, &env)?;
        w.write_record([d, delta.value(), gamma, ct, ctau].map(|v| v.to_string()))
            .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(format!("predict-coeffs: {} distances", distances.len()))
}

fn power_saving(a: PowerSavingArgs) -> CmdResult {
    let file = ParamFile::load(&a.params)?;
    let env = environment(&a.density, Some(&file))?;
    let (geom, ceiling) = geometry_and_ceiling(&file)?;
    let motor = file
        .motor
        .ok_or_else(|| data_err("parameter file has no motor"))?;
    let c_tau = match a.c_tau {
        Some(c) => c,
        None => {
            let ct = crate::bemt::thrust_coefficient_at(&geom, 1.0, GapRatio::NO_CEILING, &env)?;
            torque_coefficient(ct, 1.0, &geom, &env)?
        }
    };
    let distances = parse_range(&a.range.distances, a.range.log)?;
    let curve = power_saving_curve(a.thrust, &geom, &ceiling, &motor, c_tau, &distances, &env)?;
    write_power_curve_csv(&curve, output(a.out.as_deref())?)?;
    let best = curve
        .iter()
        .map(|p| p.input_power)
        .fold(f64::INFINITY, f64::min);
    Ok(format!(
        "power-saving: {} points, lowest input power {} W",
        curve.len(),
        best
    ))
}

fn resonance(a: ResonanceArgs) -> CmdResult {
    let file = ParamFile::load(&a.params)?;
    let (geom, ceiling) = geometry_and_ceiling(&file)?;
    let deltas = parse_range(&a.deltas, false)?;
    let scan = resonance_scan(&geom, &ceiling, &deltas)?;
    write_resonance_csv(&scan, output(a.out.as_deref())?)?;
    Ok(format!("resonance: {} gap ratios", deltas.len()))
}

fn anomalies(a: AnomalyArgs) -> CmdResult {
    let file = ParamFile::load(&a.params)?;
    let ceiling = file
        .ceiling
        .ok_or_else(|| data_err("parameter file has no ceiling"))?;
    let points = read_gamma_csv(&a.input)?;
    let flagged = anomaly_scan(&points, &ceiling, a.threshold)?;
    let mut out = std::io::stdout().lock();
    for d in &flagged {
        writeln!(out, "{d}")?;
    }
    Ok(format!(
        "anomalies: {} of {} points flagged",
        flagged.len(),
        points.len()
    ))
}
