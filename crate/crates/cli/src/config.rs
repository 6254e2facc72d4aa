//! Line-oriented `key = value` run configuration.
//!
//! Keys are strict: unknown names, duplicates, malformed values, and
//! out-of-range values are all rejected with the offending line number.
//! Cross-key rules (scheme completeness, noise exclusivity, scan range
//! ordering) are checked after every line has been read.

use std::collections::HashMap;
use std::fmt;

use qnetcost::cost::{CostParams, StepChoice, SCAN_N_MAX};
use qnetcost::purification::SchemeParams;

/// Which estimation strategies a validation run covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioChoice {
    Both,
    Disentangled,
    Entangled,
}

/// Fully validated run configuration shared by all subcommands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub costs: CostParams,
    pub scheme: Option<SchemeParams>,
    /// Step policy for the scheme; present exactly when `scheme` is.
    pub steps: Option<StepChoice>,
    /// `F`: fidelity of the prepared entangled resource.
    pub fidelity: Option<f64>,
    /// `x_n`: visibility of the distributed state after white noise.
    pub visibility: Option<f64>,
    /// `g` and `t_c` as one pair; dephasing needs both.
    pub dephasing: Option<(f64, f64)>,
    pub epsilon: f64,
    pub n_from: u64,
    pub n_to: u64,
    pub replications: u32,
    pub scenario: ScenarioChoice,
    pub seed: u64,
    pub output_path: Option<String>,
}

/// Parse or validation failure, with the source line when one line is
/// responsible.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        Self { line: Some(line), message: message.into() }
    }

    fn global(message: impl Into<String>) -> Self {
        Self { line: None, message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

const KNOWN_KEYS: &[&str] = &[
    "X", "Y", "Z", "U", "b", "scheme", "F0", "a", "s", "target_fidelity",
    "x_n", "F", "g", "t_c", "epsilon", "n_from", "n_to", "replications",
    "scenario", "seed", "out",
];

/// Raw `key = value` pairs with their line numbers.
struct RawConfig {
    entries: HashMap<&'static str, (usize, String)>,
}

impl RawConfig {
    fn read(text: &str) -> Result<Self, ConfigError> {
        let mut entries: HashMap<&'static str, (usize, String)> = HashMap::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw_line.split_once('#') {
                Some((before, _)) => before,
                None => raw_line,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                ConfigError::at(line_no, format!("expected `key = value`, got `{line}`"))
            })?;
            let key = key.trim();
            let value = value.trim();
            let known = KNOWN_KEYS
                .iter()
                .find(|k| **k == key)
                .ok_or_else(|| ConfigError::at(line_no, format!("unknown key `{key}`")))?;
            if value.is_empty() {
                return Err(ConfigError::at(line_no, format!("key `{key}` has no value")));
            }
            if let Some((first, _)) = entries.get(known) {
                return Err(ConfigError::at(
                    line_no,
                    format!("key `{key}` already set on line {first}"),
                ));
            }
            entries.insert(known, (line_no, value.to_string()));
        }
        Ok(Self { entries })
    }

    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.entries.remove(key)
    }

    fn line_of(&self, key: &str) -> Option<usize> {
        self.entries.get(key).map(|(line, _)| *line)
    }
}

fn parse_f64(key: &str, entry: (usize, String)) -> Result<(usize, f64), ConfigError> {
    let (line, text) = entry;
    let value: f64 = text
        .parse()
        .map_err(|_| ConfigError::at(line, format!("{key} must be a number, got `{text}`")))?;
    if !value.is_finite() {
        return Err(ConfigError::at(line, format!("{key} must be finite, got `{text}`")));
    }
    Ok((line, value))
}

fn parse_int<T: std::str::FromStr>(key: &str, entry: (usize, String)) -> Result<(usize, T), ConfigError> {
    let (line, text) = entry;
    let value: T = text.parse().map_err(|_| {
        ConfigError::at(line, format!("{key} must be a non-negative integer, got `{text}`"))
    })?;
    Ok((line, value))
}

fn require_range(
    key: &str,
    parsed: (usize, f64),
    min: f64,
    max: f64,
) -> Result<f64, ConfigError> {
    let (line, value) = parsed;
    if value < min || value > max {
        return Err(ConfigError::at(
            line,
            format!("{key} = {value} lies outside [{min}, {max}]"),
        ));
    }
    Ok(value)
}

/// Parses and fully validates a configuration. Defaults: `a = 0.5`,
/// `b = X`, `seed = 0`, `replications = 200`, `scenario = both`.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut raw = RawConfig::read(text)?;

    let mut require_key = |key: &str| {
        raw.take(key).ok_or_else(|| ConfigError::global(format!("missing required key `{key}`")))
    };
    let x = require_range("X", parse_f64("X", require_key("X")?)?, 0.0, f64::MAX)?;
    let y = require_range("Y", parse_f64("Y", require_key("Y")?)?, 0.0, f64::MAX)?;
    let z = require_range("Z", parse_f64("Z", require_key("Z")?)?, 0.0, f64::MAX)?;
    let costs = CostParams::new(x, y, z)
        .map_err(|e| ConfigError::global(format!("cost parameters: {e}")))?;

    let epsilon_entry = parse_f64("epsilon", require_key("epsilon")?)?;
    if epsilon_entry.1 <= 0.0 {
        return Err(ConfigError::at(
            epsilon_entry.0,
            format!("epsilon must be positive, got {}", epsilon_entry.1),
        ));
    }
    let epsilon = epsilon_entry.1;

    let (n_from_line, n_from) = parse_int::<u64>("n_from", require_key("n_from")?)?;
    let (n_to_line, n_to) = parse_int::<u64>("n_to", require_key("n_to")?)?;
    if n_from < 2 {
        return Err(ConfigError::at(n_from_line, format!("n_from must be at least 2, got {n_from}")));
    }
    if n_to < n_from {
        return Err(ConfigError::at(
            n_to_line,
            format!("n_to = {n_to} is below n_from = {n_from}"),
        ));
    }
    if n_to > SCAN_N_MAX {
        return Err(ConfigError::at(n_to_line, format!("n_to must stay at or below {SCAN_N_MAX}")));
    }

    let scheme_entry = raw.take("scheme");
    let scheme_keys = ["F0", "a", "s", "target_fidelity", "U", "b"];
    let (scheme, steps) = match scheme_entry {
        None => {
            for key in scheme_keys {
                if let Some(line) = raw.line_of(key) {
                    return Err(ConfigError::at(
                        line,
                        format!("`{key}` needs a `scheme` to apply to"),
                    ));
                }
            }
            (None, None)
        }
        Some(entry) => {
            let (scheme_line, which) = parse_int::<u8>("scheme", entry)?;
            let (f0_line, f0) = parse_f64(
                "F0",
                raw.take("F0").ok_or_else(|| {
                    ConfigError::at(scheme_line, "a scheme needs a base fidelity `F0`")
                })?,
            )?;
            if f0 <= 0.5 || f0 > 1.0 {
                return Err(ConfigError::at(
                    f0_line,
                    format!("F0 = {f0} must lie in (0.5, 1]"),
                ));
            }

            let fixed = raw.take("s").map(|e| parse_int::<u32>("s", e)).transpose()?;
            let target = raw
                .take("target_fidelity")
                .map(|e| parse_f64("target_fidelity", e))
                .transpose()?;
            let steps = match (fixed, target) {
                (Some((_, s)), None) => StepChoice::Fixed(s),
                (None, Some(t)) => StepChoice::TargetFidelity(require_range(
                    "target_fidelity",
                    t,
                    0.0,
                    1.0,
                )?),
                (Some((line, _)), Some(_)) => {
                    return Err(ConfigError::at(
                        line,
                        "give either `s` or `target_fidelity`, not both",
                    ));
                }
                (None, None) => {
                    return Err(ConfigError::at(
                        scheme_line,
                        "a scheme needs either fixed steps `s` or a `target_fidelity`",
                    ));
                }
            };

            let scheme = match which {
                1 => {
                    if let Some(line) = raw.line_of("a").or_else(|| raw.line_of("b")) {
                        return Err(ConfigError::at(line, "`a` and `b` belong to scheme 2"));
                    }
                    let unit = require_range(
                        "U",
                        parse_f64(
                            "U",
                            raw.take("U").ok_or_else(|| {
                                ConfigError::at(scheme_line, "scheme 1 needs a unit cost `U`")
                            })?,
                        )?,
                        0.0,
                        f64::MAX,
                    )?;
                    SchemeParams::scheme1(f0, unit)
                }
                2 => {
                    if let Some(line) = raw.line_of("U") {
                        return Err(ConfigError::at(line, "`U` belongs to scheme 1"));
                    }
                    let decay = match raw.take("a") {
                        Some(e) => require_range("a", parse_f64("a", e)?, f64::MIN_POSITIVE, 1.0)?,
                        None => 0.5,
                    };
                    let step_cost = match raw.take("b") {
                        Some(e) => require_range("b", parse_f64("b", e)?, 0.0, f64::MAX)?,
                        None => x,
                    };
                    SchemeParams::scheme2(f0, decay, step_cost)
                }
                other => {
                    return Err(ConfigError::at(
                        scheme_line,
                        format!("scheme must be 1 or 2, got {other}"),
                    ));
                }
            }
            .map_err(|e| ConfigError::global(format!("scheme parameters: {e}")))?;
            (Some(scheme), Some(steps))
        }
    };

    let fidelity = raw
        .take("F")
        .map(|e| require_range("F", parse_f64("F", e)?, 0.0, 1.0))
        .transpose()?;
    let visibility = raw
        .take("x_n")
        .map(|e| require_range("x_n", parse_f64("x_n", e)?, 0.0, 1.0))
        .transpose()?;
    let rate = raw
        .take("g")
        .map(|e| require_range("g", parse_f64("g", e)?, 0.0, f64::MAX))
        .transpose()?;
    let duration = raw
        .take("t_c")
        .map(|e| require_range("t_c", parse_f64("t_c", e)?, 0.0, f64::MAX))
        .transpose()?;
    let dephasing = match (rate, duration) {
        (Some(g), Some(t)) => Some((g, t)),
        (None, None) => None,
        _ => {
            return Err(ConfigError::global(
                "dephasing needs both `g` and `t_c`, only one is set",
            ));
        }
    };
    if visibility.is_some() && (fidelity.is_some() || dephasing.is_some()) {
        return Err(ConfigError::global(
            "`x_n` describes white noise and excludes `F`, `g`, and `t_c`",
        ));
    }

    let replications = match raw.take("replications") {
        Some(e) => {
            let (line, value) = parse_int::<u32>("replications", e)?;
            if value < 30 {
                return Err(ConfigError::at(
                    line,
                    format!("replications must be at least 30, got {value}"),
                ));
            }
            value
        }
        None => 200,
    };

    let scenario = match raw.take("scenario") {
        Some((line, text)) => match text.as_str() {
            "both" => ScenarioChoice::Both,
            "disentangled" => ScenarioChoice::Disentangled,
            "entangled" => ScenarioChoice::Entangled,
            other => {
                return Err(ConfigError::at(
                    line,
                    format!("scenario must be both, disentangled, or entangled, got `{other}`"),
                ));
            }
        },
        None => ScenarioChoice::Both,
    };

    let seed = match raw.take("seed") {
        Some(e) => parse_int::<u64>("seed", e)?.1,
        None => 0,
    };
    let output_path = raw.take("out").map(|(_, path)| path);

    debug_assert!(raw.entries.is_empty(), "every known key must have been consumed");

    Ok(RunConfig {
        costs,
        scheme,
        steps,
        fidelity,
        visibility,
        dephasing,
        epsilon,
        n_from,
        n_to,
        replications,
        scenario,
        seed,
        output_path,
    })
}
