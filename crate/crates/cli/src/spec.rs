//! Experiment specifications: flat `key = value` records shared by the
//! command-line flags and config files.

use std::fmt;
use std::path::PathBuf;

use crate::error::{usage, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Command {
    Analytic,
    Dispersion,
    Simulate,
    SimulateLoaded,
    Stability,
    Floquet,
    ExtremaSweep,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Analytic,
        Command::Dispersion,
        Command::Simulate,
        Command::SimulateLoaded,
        Command::Stability,
        Command::Floquet,
        Command::ExtremaSweep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Analytic => "analytic",
            Command::Dispersion => "dispersion",
            Command::Simulate => "simulate",
            Command::SimulateLoaded => "simulate-loaded",
            Command::Stability => "stability",
            Command::Floquet => "floquet",
            Command::ExtremaSweep => "extrema-sweep",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }

    pub fn required(self) -> &'static [&'static str] {
        match self {
            Command::Dispersion => &["k1", "k2", "alpha"],
            Command::SimulateLoaded => &["k1", "k2", "p", "alpha"],
            Command::ExtremaSweep => &["k1", "k2", "p"],
            _ => &["k1", "k2"],
        }
    }

    pub fn optional(self) -> &'static [&'static str] {
        const GRID: [&str; 5] = ["dx", "dt", "t-end", "probes", "snapshot-times"];
        match self {
            Command::Analytic => &["n", "L", "v", "amplitude"],
            Command::Dispersion => &["p", "branch"],
            Command::Simulate => &[
                "n",
                "L",
                "v",
                "amplitude",
                GRID[0],
                GRID[1],
                GRID[2],
                GRID[3],
                GRID[4],
            ],
            Command::SimulateLoaded => &[
                "branch", "L", "v", GRID[0], GRID[1], GRID[2], GRID[3], GRID[4],
            ],
            Command::Stability => &[
                "n",
                "L",
                "v",
                "amplitude",
                "p",
                "alpha",
                "branch",
                "epsilon",
                "omega1-ratio",
                "perturbation",
                "dx",
                "dt",
                "t-end",
                "probes",
                "skip",
            ],
            Command::Floquet => &["n"],
            Command::ExtremaSweep => &["alphas"],
        }
    }

    /// Values filled in when a key is absent.
    fn defaults(self) -> &'static [(&'static str, &'static str)] {
        const SHAPE: [(&str, &str); 3] = [("n", "1"), ("L", "1"), ("v", "1")];
        match self {
            Command::Analytic => &[SHAPE[0], SHAPE[1], SHAPE[2], ("amplitude", "1")],
            Command::Dispersion => &[],
            Command::Simulate => &[
                SHAPE[0],
                SHAPE[1],
                SHAPE[2],
                ("amplitude", "0.01"),
                ("t-end", "80"),
            ],
            Command::SimulateLoaded => &[("branch", "0"), SHAPE[1], SHAPE[2], ("t-end", "80")],
            Command::Stability => &[
                SHAPE[0],
                SHAPE[1],
                SHAPE[2],
                ("amplitude", "0.01"),
                ("epsilon", "0.003"),
                ("omega1-ratio", "1.4142135623730951"),
                ("perturbation", "boundary"),
                ("t-end", "80"),
            ],
            Command::Floquet => &[SHAPE[0]],
            Command::ExtremaSweep => &[(
                "alphas",
                "0.05,0.1,0.15,0.2,0.25,0.3,0.35,0.4,0.45,0.5,0.55,0.6,0.65,0.7,0.75,0.8,0.85,0.9,0.95",
            )],
        }
    }

    fn accepts(self, key: &str) -> bool {
        self.required().contains(&key) || self.optional().contains(&key)
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    NonNegative,
    Positive,
    Finite,
    NonZero,
    Fraction,
    Count,
    Index,
    Times,
    Fractions,
    Perturbation,
}

/// Every parameter key, in the order used when a spec is written back out.
const KEYS: [(&str, Kind); 19] = [
    ("k1", Kind::NonNegative),
    ("k2", Kind::NonNegative),
    ("p", Kind::NonZero),
    ("alpha", Kind::Fraction),
    ("branch", Kind::Index),
    ("n", Kind::Count),
    ("L", Kind::Positive),
    ("v", Kind::Positive),
    ("amplitude", Kind::Finite),
    ("epsilon", Kind::NonNegative),
    ("omega1-ratio", Kind::Positive),
    ("perturbation", Kind::Perturbation),
    ("dx", Kind::Positive),
    ("dt", Kind::Positive),
    ("t-end", Kind::Positive),
    ("skip", Kind::NonNegative),
    ("probes", Kind::Times),
    ("snapshot-times", Kind::Times),
    ("alphas", Kind::Fractions),
];

fn kind_of(key: &str) -> Option<Kind> {
    KEYS.iter().find(|(k, _)| *k == key).map(|&(_, kind)| kind)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Number(f64),
    Integer(u64),
    List(Vec<f64>),
    Word(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Number(x) => write!(f, "{x}"),
            Value::Integer(n) => write!(f, "{n}"),
            Value::List(xs) => {
                let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
                f.write_str(&parts.join(","))
            }
            Value::Word(w) => f.write_str(w),
        }
    }
}

impl Value {
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Value::Number(x) => serde_json::json!(x),
            Value::Integer(n) => serde_json::json!(n),
            Value::List(xs) => serde_json::json!(xs),
            Value::Word(w) => serde_json::json!(w),
        }
    }
}

fn number(key: &str, raw: &str) -> Result<f64> {
    let x: f64 = raw
        .trim()
        .parse()
        .map_err(|_| usage(format!("invalid value: {key} = '{raw}' is not a number")))?;
    if !x.is_finite() {
        return Err(usage(format!("invalid value: {key} must be finite")));
    }
    Ok(x)
}

fn integer(key: &str, raw: &str) -> Result<u64> {
    raw.trim().parse().map_err(|_| {
        usage(format!(
            "invalid value: {key} = '{raw}' is not a non-negative integer"
        ))
    })
}

fn parse_value(key: &str, kind: Kind, raw: &str) -> Result<Value> {
    let bad = |rule: &str| usage(format!("invalid value: {key} must be {rule}"));
    let value = match kind {
        Kind::NonNegative => {
            let x = number(key, raw)?;
            if x < 0.0 {
                return Err(bad("≥ 0"));
            }
            Value::Number(x)
        }
        Kind::Positive => {
            let x = number(key, raw)?;
            if x <= 0.0 {
                return Err(bad("> 0"));
            }
            Value::Number(x)
        }
        Kind::Finite => Value::Number(number(key, raw)?),
        Kind::NonZero => {
            let x = number(key, raw)?;
            if x == 0.0 {
                return Err(bad("nonzero"));
            }
            Value::Number(x)
        }
        Kind::Fraction => {
            let x = number(key, raw)?;
            if !(x > 0.0 && x < 1.0) {
                return Err(bad("strictly between 0 and 1"));
            }
            Value::Number(x)
        }
        Kind::Count => {
            let n = integer(key, raw)?;
            if n == 0 || n > u32::MAX as u64 {
                return Err(bad("a positive integer"));
            }
            Value::Integer(n)
        }
        Kind::Index => Value::Integer(integer(key, raw)?),
        Kind::Times | Kind::Fractions => {
            let xs = raw
                .split(',')
                .map(|s| number(key, s))
                .collect::<Result<Vec<f64>>>()?;
            if kind == Kind::Times && xs.iter().any(|&x| x < 0.0) {
                return Err(bad("a comma-separated list of values ≥ 0"));
            }
            if kind == Kind::Fractions && xs.iter().any(|&x| !(x > 0.0 && x < 1.0)) {
                return Err(bad(
                    "a comma-separated list of values strictly between 0 and 1",
                ));
            }
            Value::List(xs)
        }
        Kind::Perturbation => match raw.trim() {
            "boundary" | "initial" => Value::Word(raw.trim().to_string()),
            _ => return Err(bad("'boundary' or 'initial'")),
        },
    };
    Ok(value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Tsv,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Tsv => "tsv",
        }
    }

    pub fn delimiter(self) -> char {
        match self {
            Format::Csv => ',',
            Format::Tsv => '\t',
        }
    }

    fn parse(raw: &str) -> Result<Self> {
        match raw.trim() {
            "csv" => Ok(Format::Csv),
            "tsv" => Ok(Format::Tsv),
            other => Err(usage(format!(
                "invalid value: format must be 'csv' or 'tsv', got '{other}'"
            ))),
        }
    }
}

/// A validated experiment with defaults applied.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub command: Command,
    /// Parameters in canonical key order.
    pub values: Vec<(&'static str, Value)>,
    pub output: PathBuf,
    pub format: Format,
}

impl ExperimentSpec {
    pub fn get(&self, key: &str) -> Option<&Value> {
        self.values.iter().find(|(k, _)| *k == key).map(|(_, v)| v)
    }

    pub fn has(&self, key: &str) -> bool {
        self.get(key).is_some()
    }

    pub fn number(&self, key: &str) -> Option<f64> {
        match self.get(key)? {
            Value::Number(x) => Some(*x),
            Value::Integer(n) => Some(*n as f64),
            _ => None,
        }
    }

    pub fn integer(&self, key: &str) -> Option<u64> {
        match self.get(key)? {
            Value::Integer(n) => Some(*n),
            _ => None,
        }
    }

    pub fn list(&self, key: &str) -> Option<&[f64]> {
        match self.get(key)? {
            Value::List(xs) => Some(xs),
            _ => None,
        }
    }

    pub fn word(&self, key: &str) -> Option<&str> {
        match self.get(key)? {
            Value::Word(w) => Some(w),
            _ => None,
        }
    }

    /// Required numeric parameter; presence is checked by `parse_spec`.
    pub fn require(&self, key: &str) -> f64 {
        self.number(key)
            .unwrap_or_else(|| panic!("parameter {key} validated as present"))
    }

    /// `key = value` text that `parse_spec` turns back into this spec.
    pub fn to_config(&self) -> String {
        let mut out = String::from("# cablewave experiment\n");
        out.push_str(&format!("command = {}\n", self.command));
        for (k, v) in &self.values {
            out.push_str(&format!("{k} = {v}\n"));
        }
        out.push_str(&format!("format = {}\n", self.format.name()));
        out.push_str(&format!("out = {}\n", self.output.display()));
        out
    }

    /// Parameter echo for the metadata sidecar.
    pub fn parameters_json(&self) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .values
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_json()))
            .collect();
        serde_json::Value::Object(map)
    }
}

/// Splits a config file into `(key, value)` pairs. Blank lines and `#`
/// comments are skipped.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs: Vec<(String, String)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            usage(format!(
                "line {}: expected 'key = value', got '{line}'",
                i + 1
            ))
        })?;
        let (key, value) = (key.trim(), value.trim());
        if pairs.iter().any(|(k, _)| k == key) {
            return Err(usage(format!("line {}: duplicate key {key}", i + 1)));
        }
        pairs.push((key.to_string(), value.to_string()));
    }
    Ok(pairs)
}

/// Builds a spec from config-file pairs overridden by flag pairs.
///
/// The command comes from `command` or from a `command` key in the pairs;
/// when both are present they must agree.
pub fn parse_spec(
    command: Option<Command>,
    config: &[(String, String)],
    flags: &[(String, String)],
) -> Result<ExperimentSpec> {
    let mut merged: Vec<(String, String)> = config.to_vec();
    for (k, v) in flags {
        match merged.iter_mut().find(|(mk, _)| mk == k) {
            Some(slot) => slot.1 = v.clone(),
            None => merged.push((k.clone(), v.clone())),
        }
    }

    let named = merged
        .iter()
        .find(|(k, _)| k == "command")
        .map(|(_, v)| {
            Command::from_name(v)
                .ok_or_else(|| usage(format!("invalid value: command '{v}' is not known")))
        })
        .transpose()?;
    let command = match (command, named) {
        (Some(a), Some(b)) if a != b => {
            return Err(usage(format!(
                "invalid value: command is {b} in the config but {a} was requested"
            )))
        }
        (Some(a), _) | (None, Some(a)) => a,
        (None, None) => return Err(usage("missing required key: command")),
    };

    let mut format = Format::Csv;
    let mut output = PathBuf::from("cablewave-out").join(command.name());
    let mut given: Vec<(&'static str, Value)> = Vec::new();
    for (key, raw) in &merged {
        match key.as_str() {
            "command" => continue,
            "format" => format = Format::parse(raw)?,
            "out" => {
                if raw.trim().is_empty() {
                    return Err(usage("invalid value: out must be a path"));
                }
                output = PathBuf::from(raw.trim());
            }
            _ => {
                let &(name, kind) = KEYS
                    .iter()
                    .find(|(k, _)| k == key)
                    .ok_or_else(|| usage(format!("unknown key: {key}")))?;
                if !command.accepts(key) {
                    return Err(usage(format!(
                        "unknown key: {key} is not used by {command}"
                    )));
                }
                given.push((name, parse_value(key, kind, raw)?));
            }
        }
    }

    for key in command.required() {
        if !given.iter().any(|(k, _)| k == key) {
            return Err(usage(format!(
                "missing required key: {key} (needed by {command})"
            )));
        }
    }
    for &(key, raw) in command.defaults() {
        if !given.iter().any(|(k, _)| *k == key) {
            let kind = kind_of(key).expect("default keys are in the table");
            given.push((key, parse_value(key, kind, raw)?));
        }
    }
    if command == Command::Stability {
        let (p, alpha) = (
            given.iter().any(|(k, _)| *k == "p"),
            given.iter().any(|(k, _)| *k == "alpha"),
        );
        if p != alpha {
            let missing = if p { "alpha" } else { "p" };
            return Err(usage(format!(
                "missing required key: {missing} (a loaded base wave needs both p and alpha)"
            )));
        }
    }
    given.sort_by_key(|(k, _)| KEYS.iter().position(|(n, _)| n == k));
    Ok(ExperimentSpec {
        command,
        values: given,
        output,
        format,
    })
}
