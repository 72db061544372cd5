//! Resolved run configuration. Flags are collected into a `RunConfig`, a JSON
//! config file is merged over them key by key, and the command fills in its
//! defaults before running. The result is written next to the outputs.

use std::path::{Path, PathBuf};

use pdc_core::characterize::Imperfection;
use pdc_core::poling::DomainStructure;
use pdc_core::{PefShape, PmfShape};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: String,
    pub pef: Option<PefShape>,
    /// `gaussian`, `sinc` or `custom:<pattern file>`.
    pub pmf: Option<String>,
    pub xi: Option<f64>,
    pub kw2: Option<f64>,
    pub zeta: Option<f64>,
    pub bins: Option<usize>,
    pub seed: u64,
    pub threads: Option<usize>,
    pub out: PathBuf,

    /// Values of the swept axis (xi, kw2, zeta or pulse duration in fs).
    pub values: Option<Vec<f64>>,
    /// Grid sizes for range and resolution sweeps.
    pub sizes: Option<Vec<usize>>,
    pub kind: Option<String>,
    pub levels: Option<Vec<f64>>,
    pub trials: Option<usize>,
    pub max_counts: Option<Vec<f64>>,
    pub zeta_max: Option<f64>,
    pub n_max: Option<usize>,
    pub zeta_points: Option<usize>,
    pub n_points: Option<usize>,
    pub fast: bool,
    pub points: Option<usize>,
    /// Survey interval in units of `pi / l_c`.
    pub dk_min: Option<f64>,
    pub dk_max: Option<f64>,
}

/// Parsed `--pmf` value.
#[derive(Clone, Debug, PartialEq)]
pub enum PmfChoice {
    Shape(PmfShape),
    Custom(PathBuf),
}

impl RunConfig {
    /// Overlays the keys of a JSON object file onto this configuration.
    pub fn merge_file(self, path: &Path) -> Result<RunConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let overlay: Value = serde_json::from_str(&text).map_err(|e| {
            CliError::Usage(format!("config {} is not valid JSON: {e}", path.display()))
        })?;
        self.merge(overlay)
    }

    pub fn merge(self, overlay: Value) -> Result<RunConfig, CliError> {
        let Value::Object(overlay) = overlay else {
            return Err(CliError::Usage("config must be a JSON object".into()));
        };
        let command = self.command.clone();
        let mut base = serde_json::to_value(self).expect("config serializes");
        let map = base.as_object_mut().expect("config is an object");
        for (k, v) in overlay {
            map.insert(k, v);
        }
        let mut merged: RunConfig = serde_json::from_value(base)
            .map_err(|e| CliError::Usage(format!("invalid config: {e}")))?;
        merged.command = command;
        Ok(merged)
    }

    pub fn pmf_choice(&self) -> Result<Option<PmfChoice>, CliError> {
        let Some(text) = &self.pmf else {
            return Ok(None);
        };
        if let Some(path) = text.strip_prefix("custom:") {
            if path.is_empty() {
                return Err(CliError::Usage(
                    "custom PMF needs a pattern file: custom:<file>".into(),
                ));
            }
            return Ok(Some(PmfChoice::Custom(PathBuf::from(path))));
        }
        text.parse()
            .map(|s| Some(PmfChoice::Shape(s)))
            .map_err(|_| {
                CliError::Usage(format!(
                    "--pmf must be gaussian, sinc or custom:<file>, got '{text}'"
                ))
            })
    }

    /// Analytic PMF shape, rejecting custom patterns.
    pub fn pmf_shape(&self) -> Result<Option<PmfShape>, CliError> {
        match self.pmf_choice()? {
            None => Ok(None),
            Some(PmfChoice::Shape(s)) => Ok(Some(s)),
            Some(PmfChoice::Custom(_)) => Err(CliError::Usage(format!(
                "{} works with analytic PMFs only",
                self.command
            ))),
        }
    }

    pub fn custom_structure(&self) -> Result<Option<DomainStructure>, CliError> {
        match self.pmf_choice()? {
            Some(PmfChoice::Custom(path)) => {
                if !path.is_file() {
                    return Err(CliError::Usage(format!(
                        "pattern file {} not found",
                        path.display()
                    )));
                }
                Ok(Some(DomainStructure::read_pattern(&path)?))
            }
            _ => Ok(None),
        }
    }

    pub fn imperfection(&self) -> Result<Option<Imperfection>, CliError> {
        match self.kind.as_deref() {
            None | Some("all") => Ok(None),
            Some(k) => k.parse().map(Some).map_err(|_| {
                CliError::Usage(format!(
                    "--kind must be over-poling, wall-jitter, missed-domains or all, got '{k}'"
                ))
            }),
        }
    }

    pub fn write(&self) -> Result<PathBuf, CliError> {
        let path = self.out.join(format!("{}.config.json", self.command));
        let mut value = serde_json::to_value(self).expect("config serializes");
        if let Value::Object(map) = &mut value {
            map.retain(|_, v| !v.is_null());
        }
        pdc_core::characterize::write_json(&path, &value)?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn file_values_override_flags() {
        let flags = RunConfig {
            command: "xi-sweep".into(),
            zeta: Some(40.0),
            bins: Some(400),
            seed: 3,
            ..Default::default()
        };
        let merged = flags
            .merge(json!({"bins": 100, "seed": 9, "command": "hom"}))
            .unwrap();
        assert_eq!(merged.bins, Some(100));
        assert_eq!(merged.seed, 9);
        assert_eq!(merged.zeta, Some(40.0));
        assert_eq!(merged.command, "xi-sweep");
    }

    #[test]
    fn unknown_keys_and_bad_types_are_usage_errors() {
        let base = RunConfig::default();
        assert!(matches!(
            base.clone().merge(json!({"zetta": 3})),
            Err(CliError::Usage(_))
        ));
        assert!(matches!(
            base.clone().merge(json!({"bins": "many"})),
            Err(CliError::Usage(_))
        ));
        assert!(matches!(base.merge(json!([1, 2])), Err(CliError::Usage(_))));
    }

    #[test]
    fn pmf_choices() {
        let with = |s: &str| RunConfig {
            pmf: Some(s.into()),
            ..Default::default()
        };
        assert_eq!(
            with("sinc").pmf_choice().unwrap(),
            Some(PmfChoice::Shape(PmfShape::Sinc))
        );
        assert_eq!(
            with("custom:a.txt").pmf_choice().unwrap(),
            Some(PmfChoice::Custom("a.txt".into()))
        );
        assert!(with("custom:").pmf_choice().is_err());
        assert!(with("lorentzian").pmf_choice().is_err());
        assert!(with("custom:a.txt").pmf_shape().is_err());
    }
}
