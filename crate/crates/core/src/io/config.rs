//! JSON run configurations and noise files.

use std::path::Path;

use crate::experiment::{NoiseModel, SweepConfig};
use crate::{Error, Result};

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

/// Parses and validates a sweep configuration.
pub fn parse_config(text: &str) -> Result<SweepConfig> {
    let config: SweepConfig = serde_json::from_str(text).map_err(parse_error)?;
    config.validate()?;
    Ok(config)
}

pub fn load_config(path: impl AsRef<Path>) -> Result<SweepConfig> {
    parse_config(&std::fs::read_to_string(path)?)
}

pub fn save_config(config: &SweepConfig, path: impl AsRef<Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(config)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

/// Reads a calibration file; validation happens during deserialization.
pub fn load_noise(path: impl AsRef<Path>) -> Result<NoiseModel> {
    serde_json::from_str(&std::fs::read_to_string(path)?).map_err(parse_error)
}
