//! Plot-ready output tables.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use super::{fmt_f64, fmt_opt, Columns};
use crate::analysis::{PowerCurvePoint, ResonanceScan};
use crate::error::Result;
use crate::estimation::{FlightCoefficientPoint, GammaPoint};

const GAMMA_HEADER: [&str; 4] = ["delta", "gamma", "stderr", "n_points"];

fn write_rows<W: Write>(
    writer: W,
    header: &[&str],
    rows: impl Iterator<Item = Vec<String>>,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_gamma_csv(points: &[GammaPoint], path: impl AsRef<Path>) -> Result<()> {
    write_rows(
        File::create(path)?,
        &GAMMA_HEADER,
        points.iter().map(|p| {
            vec![
                fmt_f64(p.delta),
                fmt_f64(p.gamma),
                fmt_f64(p.stderr),
                p.n_points.to_string(),
            ]
        }),
    )
}

pub fn read_gamma_csv(path: impl AsRef<Path>) -> Result<Vec<GammaPoint>> {
    let mut rdr = csv::Reader::from_path(path)?;
    let cols = Columns::resolve(rdr.headers()?, &GAMMA_HEADER)?;
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let row = i + 1;
        let delta = cols.parse_f64(&rec, 0, row)?;
        if delta < 0.0 {
            return Err(cols.error(0, row, "delta must be >= 0"));
        }
        let gamma = cols.parse_f64(&rec, 1, row)?;
        if gamma <= 0.0 {
            return Err(cols.error(1, row, "gamma must be > 0"));
        }
        out.push(GammaPoint {
            delta,
            gamma,
            stderr: cols.parse_opt_f64(&rec, 2, row)?.unwrap_or(0.0),
            n_points: cols.parse(&rec, 3, row)?,
        });
    }
    Ok(out)
}

pub fn write_flight_csv(points: &[FlightCoefficientPoint], path: impl AsRef<Path>) -> Result<()> {
    write_rows(
        File::create(path)?,
        &[
            "distance_m",
            "delta",
            "thrust_coefficient",
            "thrust_stderr",
            "torque_coefficient",
            "torque_stderr",
            "n_points",
        ],
        points.iter().map(|p| {
            vec![
                fmt_f64(p.distance),
                fmt_f64(p.delta),
                fmt_f64(p.thrust_coefficient),
                fmt_f64(p.thrust_stderr),
                fmt_opt(p.torque_coefficient),
                fmt_opt(p.torque_stderr),
                p.n_points.to_string(),
            ]
        }),
    )
}

pub fn write_power_curve_csv(points: &[PowerCurvePoint], writer: impl Write) -> Result<()> {
    write_rows(
        writer,
        &[
            "distance_m",
            "delta",
            "gamma",
            "mechanical_power_w",
            "input_power_w",
        ],
        points.iter().map(|p| {
            vec![
                fmt_f64(p.distance),
                fmt_f64(p.delta),
                fmt_f64(p.gamma),
                fmt_f64(p.mechanical_power),
                fmt_f64(p.input_power),
            ]
        }),
    )
}

pub fn write_resonance_csv(scan: &ResonanceScan, writer: impl Write) -> Result<()> {
    write_rows(
        writer,
        &["delta", "g", "delta_g"],
        scan.deltas
            .iter()
            .zip(&scan.g_values)
            .zip(&scan.products)
            .map(|((d, g), p)| vec![fmt_f64(*d), fmt_f64(*g), fmt_f64(*p)]),
    )
}
