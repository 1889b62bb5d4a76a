//! Runtime knobs shared by the library entry points and the binary.

use std::str::FromStr;

use num_bigint::BigUint;

use crate::collatz::default_bound;

/// Environment variable that overrides [`Config::matrix_order_cap`].
pub const CAP_ENV: &str = "COLLATZ_LAB_CAP";

pub const DEFAULT_MATRIX_ORDER_CAP: usize = 20;
pub const DEFAULT_SURVEY_MAX_STEPS: usize = 10_000;
/// Largest index a sequential series may be built to.
pub const SERIES_INDEX_CAP: usize = 1024;
/// Largest order for exact binomial proportions.
pub const BINOMIAL_ORDER_CAP: usize = 4096;
/// Largest order for enumerated proportions.
pub const ENUMERATION_ORDER_CAP: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Table,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "table" => Ok(OutputFormat::Table),
            other => Err(format!("unknown format {other:?}; expected json, csv or table")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub matrix_order_cap: usize,
    pub survey_max_steps: usize,
    pub survey_bound: BigUint,
    pub output_format: OutputFormat,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            matrix_order_cap: DEFAULT_MATRIX_ORDER_CAP,
            survey_max_steps: DEFAULT_SURVEY_MAX_STEPS,
            survey_bound: default_bound(),
            output_format: OutputFormat::Json,
        }
    }
}

impl Config {
    /// Defaults with `COLLATZ_LAB_CAP` applied when it holds a positive integer.
    pub fn from_env() -> Self {
        let mut cfg = Config::default();
        if let Some(cap) = std::env::var(CAP_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&c| c > 0)
        {
            cfg.matrix_order_cap = cap;
        }
        cfg
    }

    pub fn classify_options(&self) -> ClassifyOptions {
        ClassifyOptions {
            max_steps: self.survey_max_steps,
            bound: self.survey_bound.clone(),
            s_reference: SReference::FirstImage,
        }
    }
}

/// What `T^∞` is compared against when assigning the `S` class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SReference {
    /// `T^1(P)`.
    #[default]
    FirstImage,
    /// The seed `P` itself.
    Seed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifyOptions {
    pub max_steps: usize,
    pub bound: BigUint,
    pub s_reference: SReference,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Config::default().classify_options()
    }
}
