//! Plain-text run configuration: one `key = value` per line, `#` comments.
//!
//! Unknown keys are errors rather than warnings; a typo that silently fell
//! back to a default would change results without a trace.

use std::fmt::Write as _;
use std::path::Path;

use crate::engine::SimConfig;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: expected `key = value`, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: {key} = {value:?} is not {expected}")]
    InvalidValue {
        line: usize,
        key: String,
        value: String,
        expected: &'static str,
    },
}

/// All recognized keys, in the order written out by [`render_config`].
pub const KEYS: [&str; 12] = [
    "n_major",
    "n_minor",
    "n_steps",
    "seed",
    "p_new",
    "p_cat",
    "sub_threshold",
    "j_threshold",
    "l_threshold",
    "t_limit",
    "decay_rate",
    "fitness_floor",
];

fn apply_key(
    config: &mut SimConfig,
    line: usize,
    key: &str,
    value: &str,
) -> Result<(), ConfigError> {
    let invalid = |expected: &'static str| ConfigError::InvalidValue {
        line,
        key: key.to_string(),
        value: value.to_string(),
        expected,
    };
    macro_rules! parse {
        ($ty:ty, $expected:literal) => {
            value.parse::<$ty>().map_err(|_| invalid($expected))?
        };
    }
    match key {
        "n_major" => config.n_major = parse!(u32, "a non-negative integer"),
        "n_minor" => config.n_minor = parse!(u32, "a non-negative integer"),
        "n_steps" => config.n_steps = parse!(u32, "a non-negative integer"),
        "seed" => config.seed = parse!(u64, "a non-negative integer"),
        "p_new" => config.behavior.p_new = parse!(f64, "a number"),
        "p_cat" => config.p_cat = parse!(f64, "a number"),
        "sub_threshold" => config.behavior.sub_threshold = parse!(f64, "a number"),
        "j_threshold" => config.behavior.j_threshold = parse!(f64, "a number"),
        "l_threshold" => config.behavior.l_threshold = parse!(f64, "a number"),
        "t_limit" => config.behavior.t_limit = parse!(f64, "a number"),
        "decay_rate" => config.fitness.decay_rate = parse!(f64, "a number"),
        "fitness_floor" => config.fitness.floor = parse!(f64, "a number"),
        _ => {
            return Err(ConfigError::UnknownKey {
                line,
                key: key.to_string(),
            })
        }
    }
    Ok(())
}

/// Applies a single `key = value` assignment, as used by embedders that
/// build a config programmatically. Reported line numbers are zero.
pub fn set_key(config: &mut SimConfig, key: &str, value: &str) -> Result<(), ConfigError> {
    apply_key(config, 0, key.trim(), value.trim())
}

/// Parses config text over the defaults. Range checks are left to
/// [`SimConfig::validate`], which runs when the simulation is built.
pub fn parse_config_str(text: &str) -> Result<SimConfig, ConfigError> {
    let mut config = SimConfig::default();
    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = match raw_line.split_once('#') {
            Some((before, _)) => before,
            None => raw_line,
        }
        .trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(ConfigError::Syntax {
                line,
                text: raw_line.trim().to_string(),
            });
        };
        apply_key(&mut config, line, key.trim(), value.trim())?;
    }
    Ok(config)
}

pub fn load_config(path: &Path) -> Result<SimConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_config_str(&text)
}

/// Serializes a config as parseable `key = value` lines covering every key.
pub fn render_config(config: &SimConfig) -> String {
    let mut out = String::new();
    let mut put = |key: &str, value: String| {
        writeln!(out, "{key} = {value}").expect("writing to a String cannot fail");
    };
    put("n_major", config.n_major.to_string());
    put("n_minor", config.n_minor.to_string());
    put("n_steps", config.n_steps.to_string());
    put("seed", config.seed.to_string());
    put("p_new", config.behavior.p_new.to_string());
    put("p_cat", config.p_cat.to_string());
    put("sub_threshold", config.behavior.sub_threshold.to_string());
    put("j_threshold", config.behavior.j_threshold.to_string());
    put("l_threshold", config.behavior.l_threshold.to_string());
    put("t_limit", config.behavior.t_limit.to_string());
    put("decay_rate", config.fitness.decay_rate.to_string());
    put("fitness_floor", config.fitness.floor.to_string());
    out
}
