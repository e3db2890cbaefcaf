//! File formats: steady-state records, derived tables, parameter files and
//! raw sample streams.

mod params;
mod range;
mod raw;
mod steady;
mod tables;

pub use params::{sha256_hex, ParamFile, Provenance, SCHEMA_VERSION};
pub use range::parse_range;
pub use raw::{
    read_raw_csv, steady_state_extract, write_raw_csv, Extraction, RawSample, RawSampleStream,
    DEFAULT_STABILITY_TOL, DEFAULT_WINDOW_S,
};
pub use steady::{
    read_steady_csv, read_steady_from, write_steady_csv, write_steady_to, STEADY_HEADER,
};
pub use tables::{
    read_gamma_csv, write_flight_csv, write_gamma_csv, write_power_curve_csv, write_resonance_csv,
};

/// Shortest decimal text that parses back to the same `f64`.
pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

pub(crate) fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

/// Column positions resolved from a header row.
pub(crate) struct Columns {
    index: Vec<usize>,
    names: &'static [&'static str],
}

impl Columns {
    pub(crate) fn resolve(
        header: &csv::StringRecord,
        names: &'static [&'static str],
    ) -> crate::Result<Self> {
        let index = names
            .iter()
            .map(|name| {
                header
                    .iter()
                    .position(|h| h.trim() == *name)
                    .ok_or_else(|| crate::Error::MissingColumn((*name).to_string()))
            })
            .collect::<crate::Result<Vec<_>>>()?;
        Ok(Self { index, names })
    }

    pub(crate) fn cell<'r>(&self, record: &'r csv::StringRecord, col: usize) -> &'r str {
        record.get(self.index[col]).unwrap_or("").trim()
    }

    pub(crate) fn parse<T: std::str::FromStr>(
        &self,
        record: &csv::StringRecord,
        col: usize,
        row: usize,
    ) -> crate::Result<T>
    where
        T::Err: std::fmt::Display,
    {
        let text = self.cell(record, col);
        text.parse::<T>().map_err(|e| crate::Error::Parse {
            row,
            column: self.names[col].to_string(),
            reason: format!("{e} ({text:?})"),
        })
    }

    pub(crate) fn parse_f64(
        &self,
        record: &csv::StringRecord,
        col: usize,
        row: usize,
    ) -> crate::Result<f64> {
        let v: f64 = self.parse(record, col, row)?;
        if !v.is_finite() {
            return Err(self.error(col, row, "value must be finite"));
        }
        Ok(v)
    }

    pub(crate) fn parse_opt_f64(
        &self,
        record: &csv::StringRecord,
        col: usize,
        row: usize,
    ) -> crate::Result<Option<f64>> {
        if self.cell(record, col).is_empty() {
            Ok(None)
        } else {
            self.parse_f64(record, col, row).map(Some)
        }
    }

    pub(crate) fn error(&self, col: usize, row: usize, reason: &str) -> crate::Error {
        crate::Error::Parse {
            row,
            column: self.names[col].to_string(),
            reason: reason.to_string(),
        }
    }
}
