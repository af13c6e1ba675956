//! Experiment configuration: flat `key = value` documents plus defaults.
//!
//! Recognized keys: `theta` (single angle, radians) or
//! `theta_start`/`theta_stop`/`theta_count` (inclusive sweep); the slit
//! geometry `a`, `d`, `L`, `lambda` (SI units); the screen window `x_min`,
//! `x_max`, `n_points`; `out_dir`; and the check toggles `checks.venn`,
//! `checks.chain_rule`, `checks.patterns`, `checks.oracle`. Lines starting
//! with `#` and blank lines are ignored.

use std::path::PathBuf;

use eraser_core::interference::{ScreenGrid, SlitGeometry};
use eraser_core::pipeline::ErasureAngle;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Malformed { line: usize, text: String },

    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },

    #[error("line {line}: duplicate key `{key}`")]
    DuplicateKey { line: usize, key: String },

    #[error("line {line}: invalid value for `{key}`: {reason}")]
    InvalidValue {
        line: usize,
        key: String,
        reason: String,
    },

    #[error("key `{key}`: {reason}")]
    InvalidSetting { key: String, reason: String },

    #[error("`theta` conflicts with `theta_start`/`theta_stop`/`theta_count`")]
    ThetaConflict,
}

/// Which self-checks a sweep runs (and which artifacts it writes).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Checks {
    pub venn: bool,
    pub chain_rule: bool,
    pub patterns: bool,
    pub oracle: bool,
}

impl Default for Checks {
    fn default() -> Self {
        Self {
            venn: true,
            chain_rule: true,
            patterns: true,
            oracle: true,
        }
    }
}

/// A fully validated run configuration.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub thetas: Vec<ErasureAngle>,
    pub geometry: SlitGeometry,
    pub grid: ScreenGrid,
    pub out_dir: PathBuf,
    pub checks: Checks,
}

/// Number of sweep angles when none are configured.
pub const DEFAULT_THETA_COUNT: usize = 64;

/// Parsed-but-unresolved settings; every field remembers the line it came
/// from so validation errors can cite it.
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    theta: Option<(f64, usize)>,
    theta_start: Option<(f64, usize)>,
    theta_stop: Option<(f64, usize)>,
    theta_count: Option<(usize, usize)>,
    a: Option<(f64, usize)>,
    d: Option<(f64, usize)>,
    l: Option<(f64, usize)>,
    lambda: Option<(f64, usize)>,
    x_min: Option<(f64, usize)>,
    x_max: Option<(f64, usize)>,
    n_points: Option<(usize, usize)>,
    out_dir: Option<(String, usize)>,
    checks_venn: Option<(bool, usize)>,
    checks_chain_rule: Option<(bool, usize)>,
    checks_patterns: Option<(bool, usize)>,
    checks_oracle: Option<(bool, usize)>,
}

fn parse_typed<T: std::str::FromStr>(
    key: &str,
    value: &str,
    line: usize,
) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e| ConfigError::InvalidValue {
        line,
        key: key.to_string(),
        reason: format!("{e}"),
    })
}

fn parse_bool(key: &str, value: &str, line: usize) -> Result<bool, ConfigError> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(ConfigError::InvalidValue {
            line,
            key: key.to_string(),
            reason: format!("expected `true` or `false`, got `{other}`"),
        }),
    }
}

macro_rules! set_once {
    ($slot:expr, $key:expr, $value:expr, $line:expr) => {{
        if $slot.is_some() {
            return Err(ConfigError::DuplicateKey {
                line: $line,
                key: $key.to_string(),
            });
        }
        $slot = Some(($value, $line));
    }};
}

impl RawConfig {
    /// Parses a config document, reporting the first offending line.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = RawConfig::default();
        for (idx, raw_line) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw_line.trim();
            if content.is_empty() || content.starts_with('#') {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or(ConfigError::Malformed {
                line,
                text: content.to_string(),
            })?;
            let key = key.trim();
            let value = value.trim();
            match key {
                "theta" => set_once!(cfg.theta, key, parse_typed(key, value, line)?, line),
                "theta_start" => {
                    set_once!(cfg.theta_start, key, parse_typed(key, value, line)?, line)
                }
                "theta_stop" => {
                    set_once!(cfg.theta_stop, key, parse_typed(key, value, line)?, line)
                }
                "theta_count" => {
                    set_once!(cfg.theta_count, key, parse_typed(key, value, line)?, line)
                }
                "a" => set_once!(cfg.a, key, parse_typed(key, value, line)?, line),
                "d" => set_once!(cfg.d, key, parse_typed(key, value, line)?, line),
                "L" => set_once!(cfg.l, key, parse_typed(key, value, line)?, line),
                "lambda" => set_once!(cfg.lambda, key, parse_typed(key, value, line)?, line),
                "x_min" => set_once!(cfg.x_min, key, parse_typed(key, value, line)?, line),
                "x_max" => set_once!(cfg.x_max, key, parse_typed(key, value, line)?, line),
                "n_points" => {
                    set_once!(cfg.n_points, key, parse_typed(key, value, line)?, line)
                }
                "out_dir" => set_once!(cfg.out_dir, key, value.to_string(), line),
                "checks.venn" => {
                    set_once!(cfg.checks_venn, key, parse_bool(key, value, line)?, line)
                }
                "checks.chain_rule" => set_once!(
                    cfg.checks_chain_rule,
                    key,
                    parse_bool(key, value, line)?,
                    line
                ),
                "checks.patterns" => set_once!(
                    cfg.checks_patterns,
                    key,
                    parse_bool(key, value, line)?,
                    line
                ),
                "checks.oracle" => {
                    set_once!(cfg.checks_oracle, key, parse_bool(key, value, line)?, line)
                }
                other => {
                    return Err(ConfigError::UnknownKey {
                        line,
                        key: other.to_string(),
                    })
                }
            }
        }
        Ok(cfg)
    }

    /// Command-line overrides; flags win over file settings (line 0).
    #[allow(clippy::too_many_arguments)]
    pub fn override_with(
        &mut self,
        theta: Option<f64>,
        theta_start: Option<f64>,
        theta_stop: Option<f64>,
        theta_count: Option<usize>,
        a: Option<f64>,
        d: Option<f64>,
        l: Option<f64>,
        lambda: Option<f64>,
        x_min: Option<f64>,
        x_max: Option<f64>,
        n_points: Option<usize>,
        out_dir: Option<String>,
    ) {
        fn flag<T>(v: T) -> (T, usize) {
            (v, 0)
        }
        if let Some(v) = theta {
            self.theta = Some(flag(v));
        }
        if let Some(v) = theta_start {
            self.theta_start = Some(flag(v));
        }
        if let Some(v) = theta_stop {
            self.theta_stop = Some(flag(v));
        }
        if let Some(v) = theta_count {
            self.theta_count = Some(flag(v));
        }
        if let Some(v) = a {
            self.a = Some(flag(v));
        }
        if let Some(v) = d {
            self.d = Some(flag(v));
        }
        if let Some(v) = l {
            self.l = Some(flag(v));
        }
        if let Some(v) = lambda {
            self.lambda = Some(flag(v));
        }
        if let Some(v) = x_min {
            self.x_min = Some(flag(v));
        }
        if let Some(v) = x_max {
            self.x_max = Some(flag(v));
        }
        if let Some(v) = n_points {
            self.n_points = Some(flag(v));
        }
        if let Some(v) = out_dir {
            self.out_dir = Some(flag(v));
        }
    }

    /// Fills defaults and validates every setting.
    pub fn resolve(&self) -> Result<ExperimentConfig, ConfigError> {
        let angle = |key: &'static str, value: f64, line: usize| {
            ErasureAngle::new(value).map_err(|e| {
                if line == 0 {
                    ConfigError::InvalidSetting {
                        key: key.to_string(),
                        reason: format!("{e}"),
                    }
                } else {
                    ConfigError::InvalidValue {
                        line,
                        key: key.to_string(),
                        reason: format!("{e}"),
                    }
                }
            })
        };

        let thetas = if let Some((theta, line)) = self.theta {
            if self.theta_start.is_some() || self.theta_stop.is_some() || self.theta_count.is_some()
            {
                return Err(ConfigError::ThetaConflict);
            }
            vec![angle("theta", theta, line)?]
        } else if self.theta_start.is_some()
            || self.theta_stop.is_some()
            || self.theta_count.is_some()
        {
            let (start, start_line) = self.theta_start.unwrap_or((0.0, 0));
            let (stop, stop_line) = self.theta_stop.unwrap_or((std::f64::consts::FRAC_PI_4, 0));
            let (count, count_line) = self.theta_count.unwrap_or((DEFAULT_THETA_COUNT, 0));
            if count == 0 {
                return Err(ConfigError::InvalidValue {
                    line: count_line,
                    key: "theta_count".to_string(),
                    reason: "must be at least 1".to_string(),
                });
            }
            if stop < start {
                return Err(ConfigError::InvalidValue {
                    line: stop_line,
                    key: "theta_stop".to_string(),
                    reason: format!("sweep end {stop} is below start {start}"),
                });
            }
            let start_angle = angle("theta_start", start, start_line)?;
            let stop_angle = angle("theta_stop", stop, stop_line)?;
            linspace(start_angle.radians(), stop_angle.radians(), count)
                .into_iter()
                .map(|t| angle("theta_count", t, count_line))
                .collect::<Result<Vec<_>, _>>()?
        } else {
            ErasureAngle::grid(DEFAULT_THETA_COUNT)
        };

        let geometry = SlitGeometry::new(
            self.a.map_or(10e-6, |(v, _)| v),
            self.d.map_or(20e-6, |(v, _)| v),
            self.l.map_or(1.0, |(v, _)| v),
            self.lambda.map_or(702e-9, |(v, _)| v),
        )
        .map_err(|e| {
            let (key, line) = match &e {
                eraser_core::Error::NonPositiveGeometry { name, .. } => {
                    let line = match *name {
                        "a" => self.a.map(|(_, l)| l),
                        "d" => self.d.map(|(_, l)| l),
                        "L" => self.l.map(|(_, l)| l),
                        _ => self.lambda.map(|(_, l)| l),
                    };
                    ((*name).to_string(), line.unwrap_or(0))
                }
                _ => ("L".to_string(), self.l.map(|(_, l)| l).unwrap_or(0)),
            };
            if line == 0 {
                ConfigError::InvalidSetting {
                    key,
                    reason: format!("{e}"),
                }
            } else {
                ConfigError::InvalidValue {
                    line,
                    key,
                    reason: format!("{e}"),
                }
            }
        })?;

        let grid = ScreenGrid::new(
            self.x_min.map_or(-0.15, |(v, _)| v),
            self.x_max.map_or(0.15, |(v, _)| v),
            self.n_points.map_or(2001, |(v, _)| v),
        )
        .map_err(|e| ConfigError::InvalidSetting {
            key: "x_min/x_max/n_points".to_string(),
            reason: format!("{e}"),
        })?;

        Ok(ExperimentConfig {
            thetas,
            geometry,
            grid,
            out_dir: PathBuf::from(
                self.out_dir.clone().map_or("out".to_string(), |(v, _)| v),
            ),
            checks: Checks {
                venn: self.checks_venn.is_none_or(|(v, _)| v),
                chain_rule: self.checks_chain_rule.is_none_or(|(v, _)| v),
                patterns: self.checks_patterns.is_none_or(|(v, _)| v),
                oracle: self.checks_oracle.is_none_or(|(v, _)| v),
            },
        })
    }
}

/// Parses a config document and resolves it against the defaults.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    RawConfig::parse(text)?.resolve()
}

fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![start];
    }
    (0..count)
        .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
        .collect()
}
