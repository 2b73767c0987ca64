//! Run configuration: built-in defaults, config-file values and command-line
//! flags, merged in that order of precedence.

use crate::CliError;
use std::path::{Path, PathBuf};
use sumbounds::DependenceModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Svg,
}

impl OutputFormat {
    fn parse(s: &str) -> Result<Self, CliError> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "svg" => Ok(OutputFormat::Svg),
            other => Err(CliError::invalid(format!(
                "unknown format '{other}' (expected csv or svg)"
            ))),
        }
    }
}

/// Fully resolved configuration for one command invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub mu_x: f64,
    pub sigma_x: f64,
    pub mu_y: f64,
    pub sigma_y: f64,
    pub z_min: f64,
    pub z_max: f64,
    pub z_points: usize,
    pub models: Vec<DependenceModel>,
    pub n_samples: usize,
    pub seed: u64,
    pub out: PathBuf,
    pub format: OutputFormat,
}

/// Unresolved values from flags or a config file; `None` falls through to
/// the next precedence layer.
#[derive(Debug, Clone, Default)]
pub struct PartialConfig {
    pub mu_x: Option<f64>,
    pub sigma_x: Option<f64>,
    pub mu_y: Option<f64>,
    pub sigma_y: Option<f64>,
    pub z_min: Option<f64>,
    pub z_max: Option<f64>,
    pub z_points: Option<usize>,
    pub models: Vec<String>,
    pub n_samples: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
}

impl PartialConfig {
    /// Later layers win; models accumulate only from the highest layer that
    /// provides any.
    fn overlay(self, over: PartialConfig) -> PartialConfig {
        PartialConfig {
            mu_x: over.mu_x.or(self.mu_x),
            sigma_x: over.sigma_x.or(self.sigma_x),
            mu_y: over.mu_y.or(self.mu_y),
            sigma_y: over.sigma_y.or(self.sigma_y),
            z_min: over.z_min.or(self.z_min),
            z_max: over.z_max.or(self.z_max),
            z_points: over.z_points.or(self.z_points),
            models: if over.models.is_empty() {
                self.models
            } else {
                over.models
            },
            n_samples: over.n_samples.or(self.n_samples),
            seed: over.seed.or(self.seed),
            out: over.out.or(self.out),
            format: over.format.or(self.format),
        }
    }
}

/// Parses a `key = value` config file. Keys mirror the flag names with
/// underscores; `model` may repeat or hold a comma-separated list.
pub fn parse_config_file(path: &Path) -> Result<PartialConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::invalid(format!("cannot read config {}: {e}", path.display())))?;
    let mut cfg = PartialConfig::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::invalid(format!("config line {} is not key=value", lineno + 1))
        })?;
        let (key, value) = (key.trim(), value.trim());
        fn parsed<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError>
        where
            T::Err: std::fmt::Display,
        {
            value
                .parse()
                .map_err(|e| CliError::invalid(format!("config key {key}: {e}")))
        }
        match key {
            "mu_x" => cfg.mu_x = Some(parsed(key, value)?),
            "sigma_x" => cfg.sigma_x = Some(parsed(key, value)?),
            "mu_y" => cfg.mu_y = Some(parsed(key, value)?),
            "sigma_y" => cfg.sigma_y = Some(parsed(key, value)?),
            "z_min" => cfg.z_min = Some(parsed(key, value)?),
            "z_max" => cfg.z_max = Some(parsed(key, value)?),
            "z_points" => cfg.z_points = Some(parsed(key, value)?),
            "n" => cfg.n_samples = Some(parsed(key, value)?),
            "seed" => cfg.seed = Some(parsed(key, value)?),
            "out" => cfg.out = Some(PathBuf::from(value)),
            "format" => cfg.format = Some(value.to_string()),
            "model" => cfg
                .models
                .extend(value.split(',').map(|m| m.trim().to_string())),
            other => {
                return Err(CliError::invalid(format!("unknown config key '{other}'")));
            }
        }
    }
    Ok(cfg)
}

/// Parses `kind:param`, e.g. `gaussian:0.5`, `clayton:2.5`, `gumbel:2.5`.
pub fn parse_model(spec: &str) -> Result<DependenceModel, CliError> {
    let (kind, param) = spec
        .split_once(':')
        .ok_or_else(|| CliError::invalid(format!("model '{spec}' is not kind:param")))?;
    let value: f64 = param
        .trim()
        .parse()
        .map_err(|e| CliError::invalid(format!("model '{spec}': {e}")))?;
    let model = match kind.trim().to_ascii_lowercase().as_str() {
        "gaussian" | "normal" => DependenceModel::gaussian(value),
        "clayton" => DependenceModel::clayton(value),
        "gumbel" => DependenceModel::gumbel(value),
        other => {
            return Err(CliError::invalid(format!(
                "unknown model kind '{other}' (expected gaussian, clayton or gumbel)"
            )));
        }
    };
    model.map_err(|e| CliError::invalid(format!("model '{spec}': {e}")))
}

/// Merges flags over an optional config file over the built-in defaults and
/// validates the result.
pub fn resolve(
    flags: PartialConfig,
    config_path: Option<&Path>,
    default_out: &str,
    default_format: OutputFormat,
) -> Result<RunConfig, CliError> {
    let mut layered = PartialConfig::default();
    if let Some(path) = config_path {
        layered = layered.overlay(parse_config_file(path)?);
    }
    layered = layered.overlay(flags);

    let format = match layered.format {
        Some(ref s) => OutputFormat::parse(s)?,
        None => default_format,
    };
    let models = layered
        .models
        .iter()
        .map(|s| parse_model(s))
        .collect::<Result<Vec<_>, _>>()?;

    let cfg = RunConfig {
        mu_x: layered.mu_x.unwrap_or(1.0),
        sigma_x: layered.sigma_x.unwrap_or(0.1),
        mu_y: layered.mu_y.unwrap_or(1.5),
        sigma_y: layered.sigma_y.unwrap_or(0.15),
        z_min: layered.z_min.unwrap_or(1.8),
        z_max: layered.z_max.unwrap_or(3.2),
        z_points: layered.z_points.unwrap_or(200),
        models,
        n_samples: layered
            .n_samples
            .unwrap_or(sumbounds::montecarlo::DEFAULT_SAMPLE_COUNT),
        seed: layered.seed.unwrap_or(42),
        out: layered.out.unwrap_or_else(|| PathBuf::from(default_out)),
        format,
    };

    if !(cfg.sigma_x > 0.0 && cfg.sigma_x.is_finite()) {
        return Err(CliError::invalid(format!(
            "sigma-x must be positive and finite, got {}",
            cfg.sigma_x
        )));
    }
    if !(cfg.sigma_y > 0.0 && cfg.sigma_y.is_finite()) {
        return Err(CliError::invalid(format!(
            "sigma-y must be positive and finite, got {}",
            cfg.sigma_y
        )));
    }
    if cfg.z_min >= cfg.z_max || !cfg.z_min.is_finite() || !cfg.z_max.is_finite() {
        return Err(CliError::invalid(format!(
            "need z-min < z-max, got {} and {}",
            cfg.z_min, cfg.z_max
        )));
    }
    if cfg.z_points < 2 {
        return Err(CliError::invalid(format!(
            "z-points must be at least 2, got {}",
            cfg.z_points
        )));
    }
    if cfg.n_samples < 1000 {
        return Err(CliError::invalid(format!(
            "n must be at least 1000, got {}",
            cfg.n_samples
        )));
    }
    Ok(cfg)
}
