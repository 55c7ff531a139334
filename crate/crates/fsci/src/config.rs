//! Run configuration: a flat `key = value` file plus programmatic overrides
//! from command-line flags. Only documented keys are accepted; anything else
//! is an error so typos cannot silently change a run.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use fsci_core::Grouping;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn key(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Indicator ids backing the five resilience fields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResilienceKeys {
    pub exposure: String,
    pub social_capital: String,
    pub diet_flexibility: String,
    pub price_volatility: String,
    pub supply_variability: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub codebook: Option<String>,
    pub countries: Option<String>,
    pub observations: Option<String>,
    pub output_dir: PathBuf,
    pub min_year: i32,
    pub coverage: (i32, i32),
    pub groupings: Vec<Grouping>,
    pub loess_span: f64,
    pub loess_degree: usize,
    pub formats: BTreeSet<Format>,
    pub resilience: Option<ResilienceKeys>,
    pub resilience_window: (i32, i32),
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            codebook: None,
            countries: None,
            observations: None,
            output_dir: PathBuf::from("reports"),
            min_year: 2000,
            coverage: (2000, 2021),
            groupings: vec![Grouping::Region, Grouping::Income],
            loess_span: 0.75,
            loess_degree: 2,
            formats: BTreeSet::from([Format::Csv]),
            resilience: None,
            resilience_window: (2012, 2021),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConfigError {
    Io(String),
    /// Line is not `key = value`.
    Malformed { line: usize, text: String },
    UnknownKey { line: usize, key: String },
    DuplicateKey { line: usize, key: String },
    BadValue { line: usize, key: String, message: String },
    /// A setting violates its documented range (checked after merging).
    Invalid(String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Io(e) => write!(f, "config: {e}"),
            ConfigError::Malformed { line, text } => {
                write!(f, "config line {line}: expected `key = value`, got `{text}`")
            }
            ConfigError::UnknownKey { line, key } => {
                write!(f, "config line {line}: unknown key `{key}`")
            }
            ConfigError::DuplicateKey { line, key } => {
                write!(f, "config line {line}: duplicate key `{key}`")
            }
            ConfigError::BadValue { line, key, message } => {
                write!(f, "config line {line}: bad value for `{key}`: {message}")
            }
            ConfigError::Invalid(message) => write!(f, "config: {message}"),
        }
    }
}

impl std::error::Error for ConfigError {}

/// Partial resilience assignment gathered key by key.
#[derive(Default)]
struct ResilienceDraft {
    exposure: Option<String>,
    social_capital: Option<String>,
    diet_flexibility: Option<String>,
    price_volatility: Option<String>,
    supply_variability: Option<String>,
}

impl ResilienceDraft {
    fn finish(self) -> Result<Option<ResilienceKeys>, ConfigError> {
        let fields = [
            ("resilience_exposure", &self.exposure),
            ("resilience_social_capital", &self.social_capital),
            ("resilience_diet_flexibility", &self.diet_flexibility),
            ("resilience_price_volatility", &self.price_volatility),
            ("resilience_supply_variability", &self.supply_variability),
        ];
        let set = fields.iter().filter(|(_, v)| v.is_some()).count();
        if set == 0 {
            return Ok(None);
        }
        if set < fields.len() {
            let missing: Vec<&str> = fields
                .iter()
                .filter(|(_, v)| v.is_none())
                .map(|(k, _)| *k)
                .collect();
            return Err(ConfigError::Invalid(format!(
                "resilience keys are all-or-nothing; missing {}",
                missing.join(", ")
            )));
        }
        Ok(Some(ResilienceKeys {
            exposure: self.exposure.unwrap(),
            social_capital: self.social_capital.unwrap(),
            diet_flexibility: self.diet_flexibility.unwrap(),
            price_volatility: self.price_volatility.unwrap(),
            supply_variability: self.supply_variability.unwrap(),
        }))
    }
}

impl RunConfig {
    /// Loads a config file over the defaults.
    pub fn from_file(path: &Path) -> Result<RunConfig, ConfigError> {
        let text = fs::read_to_string(path)
            .map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))?;
        Self::from_str(&text)
    }

    /// Parses config text: one `key = value` per line, `#` starts a
    /// full-line comment, blank lines ignored.
    #[allow(clippy::should_implement_trait)]
    pub fn from_str(text: &str) -> Result<RunConfig, ConfigError> {
        let mut config = RunConfig::default();
        let mut seen: BTreeSet<String> = BTreeSet::new();
        let mut resilience = ResilienceDraft::default();

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let Some((key, value)) = trimmed.split_once('=') else {
                return Err(ConfigError::Malformed {
                    line,
                    text: trimmed.to_string(),
                });
            };
            let key = key.trim();
            let value = value.trim();
            if !seen.insert(key.to_string()) {
                return Err(ConfigError::DuplicateKey {
                    line,
                    key: key.to_string(),
                });
            }
            let bad = |message: String| ConfigError::BadValue {
                line,
                key: key.to_string(),
                message,
            };
            match key {
                "codebook" => config.codebook = Some(value.to_string()),
                "countries" => config.countries = Some(value.to_string()),
                "observations" => config.observations = Some(value.to_string()),
                "output_dir" => config.output_dir = PathBuf::from(value),
                "min_year" => config.min_year = value.parse().map_err(|e| bad(format!("{e}")))?,
                "coverage_start" => {
                    config.coverage.0 = value.parse().map_err(|e| bad(format!("{e}")))?
                }
                "coverage_end" => {
                    config.coverage.1 = value.parse().map_err(|e| bad(format!("{e}")))?
                }
                "groupings" => config.groupings = parse_groupings(value).map_err(bad)?,
                "loess_span" => {
                    config.loess_span = value.parse().map_err(|e| bad(format!("{e}")))?
                }
                "loess_degree" => {
                    config.loess_degree = value.parse().map_err(|e| bad(format!("{e}")))?
                }
                "formats" => config.formats = parse_formats(value).map_err(bad)?,
                "resilience_window_start" => {
                    config.resilience_window.0 = value.parse().map_err(|e| bad(format!("{e}")))?
                }
                "resilience_window_end" => {
                    config.resilience_window.1 = value.parse().map_err(|e| bad(format!("{e}")))?
                }
                "resilience_exposure" => resilience.exposure = Some(value.to_string()),
                "resilience_social_capital" => {
                    resilience.social_capital = Some(value.to_string())
                }
                "resilience_diet_flexibility" => {
                    resilience.diet_flexibility = Some(value.to_string())
                }
                "resilience_price_volatility" => {
                    resilience.price_volatility = Some(value.to_string())
                }
                "resilience_supply_variability" => {
                    resilience.supply_variability = Some(value.to_string())
                }
                _ => {
                    return Err(ConfigError::UnknownKey {
                        line,
                        key: key.to_string(),
                    })
                }
            }
        }
        config.resilience = resilience.finish()?;
        Ok(config)
    }

    /// Checks documented ranges; run after CLI overrides are applied.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.coverage.0 > self.coverage.1 {
            return Err(ConfigError::Invalid(format!(
                "coverage window [{}, {}] is reversed",
                self.coverage.0, self.coverage.1
            )));
        }
        if self.resilience_window.0 > self.resilience_window.1 {
            return Err(ConfigError::Invalid(format!(
                "resilience window [{}, {}] is reversed",
                self.resilience_window.0, self.resilience_window.1
            )));
        }
        if !(self.loess_span > 0.0 && self.loess_span <= 1.0) {
            return Err(ConfigError::Invalid(format!(
                "loess_span {} outside (0, 1]",
                self.loess_span
            )));
        }
        if !(1..=2).contains(&self.loess_degree) {
            return Err(ConfigError::Invalid(format!(
                "loess_degree {} not 1 or 2",
                self.loess_degree
            )));
        }
        if self.groupings.is_empty() {
            return Err(ConfigError::Invalid("groupings is empty".to_string()));
        }
        if self.formats.is_empty() {
            return Err(ConfigError::Invalid("formats is empty".to_string()));
        }
        Ok(())
    }
}

fn parse_groupings(value: &str) -> Result<Vec<Grouping>, String> {
    let mut out = Vec::new();
    for part in value.split(',') {
        let grouping = match part.trim() {
            "region" => Grouping::Region,
            "income" => Grouping::Income,
            other => return Err(format!("unknown grouping `{other}`")),
        };
        if !out.contains(&grouping) {
            out.push(grouping);
        }
    }
    if out.is_empty() {
        return Err("empty grouping list".to_string());
    }
    Ok(out)
}

fn parse_formats(value: &str) -> Result<BTreeSet<Format>, String> {
    let mut out = BTreeSet::new();
    for part in value.split(',') {
        match part.trim() {
            "csv" => out.insert(Format::Csv),
            "json" => out.insert(Format::Json),
            other => return Err(format!("unknown format `{other}`")),
        };
    }
    if out.is_empty() {
        return Err("empty format list".to_string());
    }
    Ok(out)
}
