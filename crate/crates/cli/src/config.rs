//! Experiment configuration: a flat key-value text format with sections,
//! every key overridable from the command line. Unknown keys are rejected
//! and every run echoes its fully resolved configuration into the output
//! header.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use quasispec_core::arithmetic::{
    continued_fraction_expand, liouville_construct, ContinuedFraction, DEFAULT_MIN_REMAINDER,
};
use quasispec_core::model::{GOLDEN_ALPHA, SQRT2_ALPHA};

#[derive(Debug)]
pub enum ConfigError {
    Io(std::io::Error),
    Parse(String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Io(e) => write!(f, "config io error: {e}"),
            ConfigError::Parse(msg) => write!(f, "config error: {msg}"),
        }
    }
}

impl std::error::Error for ConfigError {}

impl From<std::io::Error> for ConfigError {
    fn from(e: std::io::Error) -> Self {
        ConfigError::Io(e)
    }
}

fn parse_err(msg: impl Into<String>) -> ConfigError {
    ConfigError::Parse(msg.into())
}

/// How the rotation frequency is specified.
#[derive(Debug, Clone, PartialEq)]
pub enum FrequencySpec {
    Golden,
    Sqrt2,
    Decimal(f64),
    Rational { p: i64, q: i64 },
    Quotients(Vec<u64>),
    Liouville(usize),
}

impl FrequencySpec {
    pub fn parse(text: &str) -> Result<FrequencySpec, ConfigError> {
        let text = text.trim();
        match text {
            "golden" => return Ok(FrequencySpec::Golden),
            "sqrt2" => return Ok(FrequencySpec::Sqrt2),
            _ => {}
        }
        if let Some(rest) = text.strip_prefix("liouville:") {
            let levels: usize = rest
                .parse()
                .map_err(|_| parse_err(format!("bad liouville level count '{rest}'")))?;
            return Ok(FrequencySpec::Liouville(levels));
        }
        if let Some(rest) = text.strip_prefix("cf:") {
            let inner = rest
                .trim()
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| parse_err(format!("cf form must be cf:[a1,a2,...], got '{text}'")))?;
            let quotients: Result<Vec<u64>, _> = inner
                .split(',')
                .map(|s| s.trim().parse::<u64>())
                .collect();
            let quotients =
                quotients.map_err(|_| parse_err(format!("bad partial quotient in '{text}'")))?;
            if quotients.is_empty() {
                return Err(parse_err("cf form needs at least one quotient"));
            }
            return Ok(FrequencySpec::Quotients(quotients));
        }
        if let Some((p, q)) = text.split_once('/') {
            let p: i64 = p
                .trim()
                .parse()
                .map_err(|_| parse_err(format!("bad numerator in '{text}'")))?;
            let q: i64 = q
                .trim()
                .parse()
                .map_err(|_| parse_err(format!("bad denominator in '{text}'")))?;
            return Ok(FrequencySpec::Rational { p, q });
        }
        let alpha: f64 = text
            .parse()
            .map_err(|_| parse_err(format!("unrecognized frequency '{text}'")))?;
        Ok(FrequencySpec::Decimal(alpha))
    }

    /// alpha = omega / 2pi in (0, 1), plus the exact rational when the
    /// form carries one and the continued fraction when one was
    /// constructed.
    pub fn resolve(&self) -> Result<ResolvedFrequency, ConfigError> {
        match self {
            FrequencySpec::Golden => Ok(ResolvedFrequency {
                alpha: GOLDEN_ALPHA,
                rational: None,
                cf: None,
            }),
            FrequencySpec::Sqrt2 => Ok(ResolvedFrequency {
                alpha: SQRT2_ALPHA,
                rational: None,
                cf: None,
            }),
            FrequencySpec::Decimal(alpha) => {
                if !(*alpha > 0.0 && *alpha < 1.0) {
                    return Err(parse_err(format!("alpha = {alpha} outside (0, 1)")));
                }
                Ok(ResolvedFrequency {
                    alpha: *alpha,
                    rational: None,
                    cf: None,
                })
            }
            FrequencySpec::Rational { p, q } => {
                if *q <= 0 || *p <= 0 || p >= q {
                    return Err(parse_err(format!("rational {p}/{q} outside (0, 1)")));
                }
                Ok(ResolvedFrequency {
                    alpha: *p as f64 / *q as f64,
                    rational: Some((*p, *q)),
                    cf: None,
                })
            }
            FrequencySpec::Quotients(qs) => {
                let mut quotients = vec![BigInt::from(0)];
                quotients.extend(qs.iter().map(|&a| BigInt::from(a)));
                let cf = ContinuedFraction::from_quotients(quotients)
                    .map_err(|e| parse_err(e.to_string()))?;
                Ok(ResolvedFrequency {
                    alpha: cf.alpha(),
                    rational: None,
                    cf: Some(cf),
                })
            }
            FrequencySpec::Liouville(levels) => {
                let built = liouville_construct(*levels).map_err(|e| parse_err(e.to_string()))?;
                Ok(ResolvedFrequency {
                    alpha: built.alpha,
                    rational: None,
                    cf: Some(built.cf),
                })
            }
        }
    }
}

impl fmt::Display for FrequencySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrequencySpec::Golden => write!(f, "golden"),
            FrequencySpec::Sqrt2 => write!(f, "sqrt2"),
            FrequencySpec::Decimal(a) => write!(f, "{a}"),
            FrequencySpec::Rational { p, q } => write!(f, "{p}/{q}"),
            FrequencySpec::Quotients(qs) => {
                let inner: Vec<String> = qs.iter().map(|a| a.to_string()).collect();
                write!(f, "cf:[{}]", inner.join(","))
            }
            FrequencySpec::Liouville(levels) => write!(f, "liouville:{levels}"),
        }
    }
}

/// A frequency after resolution.
#[derive(Debug, Clone)]
pub struct ResolvedFrequency {
    pub alpha: f64,
    pub rational: Option<(i64, i64)>,
    pub cf: Option<ContinuedFraction>,
}

impl ResolvedFrequency {
    /// The continued fraction, expanding the floating alpha when none was
    /// supplied symbolically.
    pub fn continued_fraction(&self, max_terms: usize) -> Result<ContinuedFraction, ConfigError> {
        match &self.cf {
            Some(cf) => Ok(cf.clone()),
            None => continued_fraction_expand(self.alpha, max_terms, DEFAULT_MIN_REMAINDER)
                .map_err(|e| parse_err(e.to_string())),
        }
    }
}

/// Fully resolved experiment configuration.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub lambda: f64,
    pub coupling: Vec<f64>,
    pub frequency: FrequencySpec,
    pub energy_min: Option<f64>,
    pub energy_max: Option<f64>,
    pub energy_count: usize,
    pub schedule_min_exp: u32,
    pub schedule_max_exp: u32,
    pub grid: usize,
    pub theta_grid: usize,
    pub e_resolution: f64,
    pub sites: usize,
    pub levels: usize,
    pub cf_terms: usize,
    pub energy: f64,
    pub theta: f64,
    pub steps: u64,
    pub samples: usize,
    pub seed: u64,
    pub threads: Option<usize>,
    pub json: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            lambda: 1.0,
            coupling: vec![1.0],
            frequency: FrequencySpec::Golden,
            energy_min: None,
            energy_max: None,
            energy_count: 201,
            schedule_min_exp: 6,
            schedule_max_exp: 14,
            grid: 512,
            theta_grid: 64,
            e_resolution: 1e-3,
            sites: 2000,
            levels: 2,
            cf_terms: 30,
            energy: 0.0,
            theta: 0.0,
            steps: 10_000,
            samples: 16,
            seed: 1,
            threads: None,
            json: false,
        }
    }
}

impl ExperimentConfig {
    /// Parse the flat sectioned key-value format:
    ///
    /// ```text
    /// [model]
    /// lambda = 1.5
    /// coupling = 1, -1
    /// frequency = golden
    /// ```
    pub fn from_file(path: &Path) -> Result<ExperimentConfig, ConfigError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_text(&text)
    }

    pub fn from_text(text: &str) -> Result<ExperimentConfig, ConfigError> {
        let mut config = ExperimentConfig::default();
        let mut section = String::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                section = name.trim().to_string();
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| parse_err(format!("line {}: expected key = value", lineno + 1)))?;
            let key = if section.is_empty() {
                key.trim().to_string()
            } else {
                format!("{section}.{}", key.trim())
            };
            config.set(&key, value.trim())?;
        }
        Ok(config)
    }

    /// Apply one key; keys may be bare or section-qualified.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let bare = key.rsplit('.').next().unwrap_or(key);
        let bad = |what: &str| parse_err(format!("bad value '{value}' for {what}"));
        match bare {
            "lambda" => self.lambda = value.parse().map_err(|_| bad("lambda"))?,
            "coupling" => {
                let parts: Result<Vec<f64>, _> =
                    value.split(',').map(|s| s.trim().parse::<f64>()).collect();
                self.coupling = parts.map_err(|_| bad("coupling"))?;
                if self.coupling.is_empty() {
                    return Err(parse_err("coupling list is empty"));
                }
            }
            "frequency" | "alpha" | "omega_over_2pi" => {
                self.frequency = FrequencySpec::parse(value)?
            }
            "energy_min" | "e_min" => self.energy_min = Some(value.parse().map_err(|_| bad(bare))?),
            "energy_max" | "e_max" => self.energy_max = Some(value.parse().map_err(|_| bad(bare))?),
            "energy_count" | "e_count" => {
                self.energy_count = value.parse().map_err(|_| bad(bare))?
            }
            "schedule_min_exp" => self.schedule_min_exp = value.parse().map_err(|_| bad(bare))?,
            "schedule_max_exp" => self.schedule_max_exp = value.parse().map_err(|_| bad(bare))?,
            "grid" => self.grid = value.parse().map_err(|_| bad(bare))?,
            "theta_grid" => self.theta_grid = value.parse().map_err(|_| bad(bare))?,
            "e_resolution" => self.e_resolution = value.parse().map_err(|_| bad(bare))?,
            "sites" => self.sites = value.parse().map_err(|_| bad(bare))?,
            "levels" => self.levels = value.parse().map_err(|_| bad(bare))?,
            "cf_terms" => self.cf_terms = value.parse().map_err(|_| bad(bare))?,
            "energy" => self.energy = value.parse().map_err(|_| bad(bare))?,
            "theta" => self.theta = value.parse().map_err(|_| bad(bare))?,
            "steps" => self.steps = value.parse().map_err(|_| bad(bare))?,
            "samples" => self.samples = value.parse().map_err(|_| bad(bare))?,
            "seed" => self.seed = value.parse().map_err(|_| bad(bare))?,
            "threads" => self.threads = Some(value.parse().map_err(|_| bad(bare))?),
            "json" => self.json = value.parse().map_err(|_| bad(bare))?,
            other => return Err(parse_err(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    /// The resolved configuration as ordered key-value lines, echoed into
    /// every output header and hashed for reproducibility.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let mut map = BTreeMap::new();
        let coupling: Vec<String> = self.coupling.iter().map(|t| format!("{t}")).collect();
        map.insert("lambda".into(), format!("{}", self.lambda));
        map.insert("coupling".into(), coupling.join(","));
        map.insert("frequency".into(), self.frequency.to_string());
        if let Some(lo) = self.energy_min {
            map.insert("energy_min".into(), format!("{lo}"));
        }
        if let Some(hi) = self.energy_max {
            map.insert("energy_max".into(), format!("{hi}"));
        }
        map.insert("energy_count".into(), format!("{}", self.energy_count));
        map.insert("schedule_min_exp".into(), format!("{}", self.schedule_min_exp));
        map.insert("schedule_max_exp".into(), format!("{}", self.schedule_max_exp));
        map.insert("grid".into(), format!("{}", self.grid));
        map.insert("theta_grid".into(), format!("{}", self.theta_grid));
        map.insert("e_resolution".into(), format!("{}", self.e_resolution));
        map.insert("sites".into(), format!("{}", self.sites));
        map.insert("levels".into(), format!("{}", self.levels));
        map.insert("cf_terms".into(), format!("{}", self.cf_terms));
        map.insert("energy".into(), format!("{}", self.energy));
        map.insert("theta".into(), format!("{}", self.theta));
        map.insert("steps".into(), format!("{}", self.steps));
        map.insert("samples".into(), format!("{}", self.samples));
        map.insert("seed".into(), format!("{}", self.seed));
        map
    }
}
