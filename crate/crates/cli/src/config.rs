use std::path::Path;

use affine_yield::{AffineParams, NamedModel, ValidatedParams};
use serde_json::Value;

use crate::CliError;

/// A model file: either a named model or raw affine parameters.
#[derive(Debug, Clone)]
pub enum ModelConfig {
    Named(NamedModel),
    Affine(AffineParams),
}

impl ModelConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| CliError::config(format!("invalid JSON: {e}")))?;
        let obj = value.as_object().ok_or_else(|| CliError::config("config must be a JSON object"))?;
        match (obj.contains_key("model"), obj.contains_key("affine")) {
            (true, false) => serde_json::from_value(value)
                .map(ModelConfig::Named)
                .map_err(|e| CliError::config(format!("invalid named model: {e}"))),
            (false, true) => {
                if obj.len() != 1 {
                    return Err(CliError::config("unexpected keys next to \"affine\""));
                }
                serde_json::from_value(obj["affine"].clone())
                    .map(ModelConfig::Affine)
                    .map_err(|e| CliError::config(format!("invalid affine parameters: {e}")))
            }
            _ => Err(CliError::config("config needs exactly one of \"model\" or \"affine\"")),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelConfig::Named(m) => m.name(),
            ModelConfig::Affine(_) => "affine",
        }
    }

    pub fn validate(&self) -> Result<ValidatedParams, CliError> {
        Ok(match self {
            ModelConfig::Named(m) => m.to_affine()?,
            ModelConfig::Affine(p) => p.validate()?,
        })
    }
}
