use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::aero::{CeilingParams, Environment};
use crate::bemt::PropellerGeometry;
use crate::error::{Error, Result};
use crate::estimation::FitReport;
use crate::powertrain::MotorParams;

pub const SCHEMA_VERSION: u32 = 1;

/// Where the stored constants came from. No wall-clock time is recorded so
/// that identical inputs give identical files.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dataset_sha256: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub reports: BTreeMap<String, FitReport>,
}

/// Persisted model constants, all SI. Every section is optional so the file
/// can be filled in step by step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamFile {
    pub schema_version: u32,
    /// Air density [kg/m³].
    pub density: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<PropellerGeometry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ceiling: Option<CeilingParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub motor: Option<MotorParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default)]
    pub provenance: Provenance,
}

impl ParamFile {
    pub fn new(env: &Environment) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            density: env.air_density(),
            geometry: None,
            ceiling: None,
            motor: None,
            eta: None,
            provenance: Provenance::default(),
        }
    }

    pub fn environment(&self) -> Result<Environment> {
        Environment::new(self.density)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ParamFile = serde_json::from_str(text)?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(Error::invalid(
                "schema_version",
                format!(
                    "unsupported version {} (expected {SCHEMA_VERSION})",
                    file.schema_version
                ),
            ));
        }
        Ok(file)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
