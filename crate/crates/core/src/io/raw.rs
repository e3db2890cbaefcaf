//! Raw time series and steady-state averaging.

use std::fs::File;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{fmt_f64, fmt_opt, Columns};
use crate::error::{ensure_positive, Error, Result};
use crate::estimation::SteadyRecord;

pub const DEFAULT_WINDOW_S: f64 = 2.0;
pub const DEFAULT_STABILITY_TOL: f64 = 0.05;

/// A spacing this many times the median is reported as a gap.
const GAP_FACTOR: f64 = 10.0;

const RAW_HEADER: [&str; 12] = [
    "timestamp_s",
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

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RawSample {
    pub timestamp: f64,
    pub distance: f64,
    pub setpoint: u32,
    pub voltage: f64,
    pub current: f64,
    pub thrust: f64,
    pub torque: Option<f64>,
    pub omega: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawSampleStream {
    pub config_id: String,
    pub radius: f64,
    pub prop_count: u32,
    pub spacing: f64,
    pub samples: Vec<RawSample>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Extraction {
    pub records: Vec<SteadyRecord>,
    pub warnings: Vec<String>,
}

pub fn read_raw_csv(path: impl AsRef<Path>) -> Result<RawSampleStream> {
    let mut rdr = csv::Reader::from_reader(File::open(path)?);
    let cols = Columns::resolve(rdr.headers()?, &RAW_HEADER)?;
    let mut stream: Option<RawSampleStream> = None;
    let mut samples = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let row = i + 1;
        let config_id = cols.cell(&rec, 1).to_string();
        let radius = cols.parse_f64(&rec, 2, row)?;
        let prop_count: u32 = cols.parse(&rec, 3, row)?;
        let spacing = cols.parse_f64(&rec, 4, row)?;
        match &stream {
            None => {
                stream = Some(RawSampleStream {
                    config_id,
                    radius,
                    prop_count,
                    spacing,
                    samples: Vec::new(),
                });
            }
            Some(s) => {
                if s.config_id != config_id
                    || s.radius != radius
                    || s.prop_count != prop_count
                    || s.spacing != spacing
                {
                    return Err(cols.error(1, row, "configuration changes within one stream"));
                }
            }
        }
        let distance = cols.parse_f64(&rec, 5, row)?;
        if distance <= 0.0 {
            return Err(cols.error(5, row, "distance must be > 0"));
        }
        samples.push(RawSample {
            timestamp: cols.parse_f64(&rec, 0, row)?,
            distance,
            setpoint: cols.parse(&rec, 6, row)?,
            voltage: cols.parse_f64(&rec, 7, row)?,
            current: cols.parse_f64(&rec, 8, row)?,
            thrust: cols.parse_f64(&rec, 9, row)?,
            torque: cols.parse_opt_f64(&rec, 10, row)?,
            omega: cols.parse_f64(&rec, 11, row)?,
        });
    }
    let mut stream =
        stream.ok_or_else(|| Error::InsufficientData("raw stream has no samples".into()))?;
    stream.samples = samples;
    Ok(stream)
}

pub fn write_raw_csv(stream: &RawSampleStream, path: impl AsRef<Path>) -> Result<()> {
    let mut w = csv::Writer::from_writer(File::create(path)?);
    w.write_record(RAW_HEADER)?;
    for s in &stream.samples {
        w.write_record([
            fmt_f64(s.timestamp),
            stream.config_id.clone(),
            fmt_f64(stream.radius),
            stream.prop_count.to_string(),
            fmt_f64(stream.spacing),
            fmt_f64(s.distance),
            s.setpoint.to_string(),
            fmt_f64(s.voltage),
            fmt_f64(s.current),
            fmt_f64(s.thrust),
            fmt_opt(s.torque),
            fmt_f64(s.omega),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Prefix sums of one channel, shifted by its first value to limit
/// cancellation in the variance.
struct Prefix {
    shift: f64,
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
}

impl Prefix {
    fn new(values: impl Iterator<Item = f64>) -> Self {
        let mut sum = vec![0.0];
        let mut sum_sq = vec![0.0];
        let mut shift = None;
        for v in values {
            let s = *shift.get_or_insert(v);
            let d = v - s;
            sum.push(sum.last().unwrap() + d);
            sum_sq.push(sum_sq.last().unwrap() + d * d);
        }
        Self {
            shift: shift.unwrap_or(0.0),
            sum,
            sum_sq,
        }
    }

    /// Mean and population standard deviation over `[a, b)`.
    fn stats(&self, a: usize, b: usize) -> (f64, f64) {
        let n = (b - a) as f64;
        let m = (self.sum[b] - self.sum[a]) / n;
        let var = ((self.sum_sq[b] - self.sum_sq[a]) / n - m * m).max(0.0);
        (m + self.shift, var.sqrt())
    }
}

fn steady(mean: f64, std: f64, tol: f64) -> bool {
    if mean == 0.0 {
        std == 0.0
    } else {
        std / mean.abs() < tol
    }
}

fn segment_record(
    stream: &RawSampleStream,
    seg: &[RawSample],
    window: f64,
    tol: f64,
) -> Option<SteadyRecord> {
    let channels: [Prefix; 4] = [
        Prefix::new(seg.iter().map(|s| s.voltage)),
        Prefix::new(seg.iter().map(|s| s.current)),
        Prefix::new(seg.iter().map(|s| s.thrust)),
        Prefix::new(seg.iter().map(|s| s.omega)),
    ];
    let has_torque = seg.iter().all(|s| s.torque.is_some());
    let torque = has_torque.then(|| Prefix::new(seg.iter().map(|s| s.torque.unwrap_or_default())));

    // Walk window end points from the back; the start index only moves left.
    let mut start = seg.len();
    for end in (0..seg.len()).rev() {
        let t_end = seg[end].timestamp;
        if t_end - seg[0].timestamp < window {
            break;
        }
        start = start.min(end + 1);
        while start > 0 && seg[start - 1].timestamp >= t_end - window {
            start -= 1;
        }
        let (a, b) = (start, end + 1);
        if b - a < 2 {
            continue;
        }
        let stats: Vec<(f64, f64)> = channels.iter().map(|c| c.stats(a, b)).collect();
        let tau = torque.as_ref().map(|c| c.stats(a, b));
        if stats
            .iter()
            .chain(tau.iter())
            .all(|&(m, s)| steady(m, s, tol))
        {
            // Direct means over the chosen window, not the shifted sums.
            let n = (b - a) as f64;
            let mean = |f: fn(&RawSample) -> f64| seg[a..b].iter().map(f).sum::<f64>() / n;
            return Some(SteadyRecord {
                config_id: stream.config_id.clone(),
                radius: stream.radius,
                prop_count: stream.prop_count,
                spacing: stream.spacing,
                distance: seg[0].distance,
                setpoint: seg[0].setpoint,
                voltage: mean(|s| s.voltage),
                current: mean(|s| s.current),
                thrust: mean(|s| s.thrust),
                torque: has_torque.then(|| mean(|s| s.torque.unwrap_or_default())),
                omega: mean(|s| s.omega),
            });
        }
    }
    None
}

/// Averages each `(distance, setpoint)` segment over its last window of
/// `window` seconds in which every channel has `std/|mean| < tol`.
///
/// Segments without such a window are skipped with a warning. Time gaps much
/// larger than the typical sample spacing are reported but not fatal.
pub fn steady_state_extract(stream: &RawSampleStream, window: f64, tol: f64) -> Result<Extraction> {
    ensure_positive("window", window)?;
    ensure_positive("stability_tol", tol)?;
    let s = &stream.samples;
    if s.is_empty() {
        return Err(Error::InsufficientData("raw stream has no samples".into()));
    }
    if let Some(i) = (1..s.len()).find(|&i| !(s[i].timestamp > s[i - 1].timestamp)) {
        return Err(Error::invalid(
            "timestamps",
            format!(
                "not strictly increasing at sample {i} ({} after {})",
                s[i].timestamp,
                s[i - 1].timestamp
            ),
        ));
    }
    let duration = s[s.len() - 1].timestamp - s[0].timestamp;
    if duration < window {
        return Err(Error::InsufficientData(format!(
            "stream lasts {duration} s, shorter than the {window} s window"
        )));
    }

    let mut warnings = Vec::new();
    let mut dts: Vec<f64> = s
        .windows(2)
        .map(|w| w[1].timestamp - w[0].timestamp)
        .collect();
    dts.sort_by(f64::total_cmp);
    if let Some(&median) = dts.get(dts.len() / 2) {
        let gaps = s
            .windows(2)
            .filter(|w| w[1].timestamp - w[0].timestamp > GAP_FACTOR * median)
            .count();
        if gaps > 0 {
            let msg = format!(
                "{gaps} sampling gap(s) longer than {GAP_FACTOR}x the median spacing of {median} s"
            );
            log::warn!("{msg}");
            warnings.push(msg);
        }
    }

    let mut records = Vec::new();
    for seg in s.chunk_by(|a, b| a.distance == b.distance && a.setpoint == b.setpoint) {
        match segment_record(stream, seg, window, tol) {
            Some(r) => records.push(r),
            None => {
                let msg = format!(
                    "no steady {window} s window at distance {} m, setpoint {}; skipped",
                    seg[0].distance, seg[0].setpoint
                );
                log::warn!("{msg}");
                warnings.push(msg);
            }
        }
    }
    Ok(Extraction { records, warnings })
}
