use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use super::{fmt_f64, fmt_opt, Columns};
use crate::error::Result;
use crate::estimation::SteadyRecord;

pub const STEADY_HEADER: [&str; 11] = [
    "config_id",
    "radius_m",
    "prop_count",
    "spacing_m",
    "distance_m",
    "setpoint",
    "voltage_v",
    "current_a",
    "thrust_n",
    "torque_nm",
    "omega_rad_s",
];

pub fn read_steady_csv(path: impl AsRef<Path>) -> Result<Vec<SteadyRecord>> {
    read_steady_from(File::open(path)?)
}

/// Parses steady records. Rows are counted from 1 after the header.
pub fn read_steady_from(reader: impl Read) -> Result<Vec<SteadyRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    let cols = Columns::resolve(rdr.headers()?, &STEADY_HEADER)?;
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let row = i + 1;
        let distance = cols.parse_f64(&rec, 4, row)?;
        if distance <= 0.0 {
            return Err(cols.error(4, row, "distance must be > 0"));
        }
        let radius = cols.parse_f64(&rec, 1, row)?;
        if radius <= 0.0 {
            return Err(cols.error(1, row, "radius must be > 0"));
        }
        out.push(SteadyRecord {
            config_id: cols.cell(&rec, 0).to_string(),
            radius,
            prop_count: cols.parse(&rec, 2, row)?,
            spacing: cols.parse_f64(&rec, 3, row)?,
            distance,
            setpoint: cols.parse(&rec, 5, row)?,
            voltage: cols.parse_f64(&rec, 6, row)?,
            current: cols.parse_f64(&rec, 7, row)?,
            thrust: cols.parse_f64(&rec, 8, row)?,
            torque: cols.parse_opt_f64(&rec, 9, row)?,
            omega: cols.parse_f64(&rec, 10, row)?,
        });
    }
    Ok(out)
}

pub fn write_steady_csv(records: &[SteadyRecord], path: impl AsRef<Path>) -> Result<()> {
    write_steady_to(records, File::create(path)?)
}

pub fn write_steady_to(records: &[SteadyRecord], writer: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(STEADY_HEADER)?;
    for r in records {
        w.write_record([
            r.config_id.clone(),
            fmt_f64(r.radius),
            r.prop_count.to_string(),
            fmt_f64(r.spacing),
            fmt_f64(r.distance),
            r.setpoint.to_string(),
            fmt_f64(r.voltage),
            fmt_f64(r.current),
            fmt_f64(r.thrust),
            fmt_opt(r.torque),
            fmt_f64(r.omega),
        ])?;
    }
    w.flush()?;
    Ok(())
}
