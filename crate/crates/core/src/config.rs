//! Run configuration read from a TOML file; every field has a default.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, io_error, Error, Result};
use crate::verify::VerifyConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    /// δ values at which flat bounds are tabulated.
    pub deltas: Vec<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            deltas: vec![0.0, 0.01, 0.02, 0.05, 0.1, 0.2],
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Worker threads; the rayon default when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
    pub verify: VerifyConfig,
    pub sweep: SweepConfig,
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let c: Self = toml::from_str(text).map_err(|e| Error::Serialization(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
        let c: Self = toml::from_str(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: e.span().map_or(0, |s| text[..s.start].matches('\n').count() + 1),
            message: e.message().to_string(),
        })?;
        c.validate()?;
        Ok(c)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        self.verify.validate()?;
        if self.jobs == Some(0) {
            return Err(invalid("jobs must be at least 1"));
        }
        if self.sweep.deltas.iter().any(|d| !(*d >= 0.0 && d.is_finite())) {
            return Err(invalid("sweep deltas must be finite and nonnegative"));
        }
        Ok(())
    }
}
