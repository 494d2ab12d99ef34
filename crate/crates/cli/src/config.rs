//! Run configuration: `key = value` files overlaid with command-line flags.
//!
//! Every command accepts a fixed key set. Values are type-checked as they
//! are read, defaults are filled in, and the resolved config is echoed in
//! the run manifest so a run can be repeated from the manifest alone.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value as Json};

/// Commands understood by the tool.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Measure,
    ScanArea,
    ScanTransition,
    Chsh,
    Distill,
    MpsSolve,
    SwapPurity,
}

impl CommandKind {
    pub const ALL: [CommandKind; 7] = [
        Self::Measure,
        Self::ScanArea,
        Self::ScanTransition,
        Self::Chsh,
        Self::Distill,
        Self::MpsSolve,
        Self::SwapPurity,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Measure => "measure",
            Self::ScanArea => "scan-area",
            Self::ScanTransition => "scan-transition",
            Self::Chsh => "chsh",
            Self::Distill => "distill",
            Self::MpsSolve => "mps-solve",
            Self::SwapPurity => "swap-purity",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }

    pub fn about(&self) -> &'static str {
        match self {
            Self::Measure => "Entanglement measures of a prepared state across a bipartition",
            Self::ScanArea => "Block entropies of ground states, or the thermal mutual-information bound",
            Self::ScanTransition => "Ground-state overlap or pair negativity across a field grid",
            Self::Chsh => "Win probability of the CHSH game, exact or sampled",
            Self::Distill => "Local filtering of a partially entangled pair",
            Self::MpsSolve => "Variational matrix-product-state ground state",
            Self::SwapPurity => "Purity of a reduced state from the two-copy swap operator",
        }
    }

    /// Default for `spec` under this command. The MPS solver defaults to
    /// a longer open chain.
    pub fn default_for(&self, spec: &KeySpec) -> Option<&'static str> {
        match (self, spec.name) {
            (Self::MpsSolve, "boundary") => Some("open"),
            (Self::MpsSolve, "n") => Some("12"),
            (Self::Measure | Self::SwapPurity, "n") => Some("4"),
            _ => spec.default,
        }
    }

    /// Keys accepted by this command, in manifest order.
    pub fn keys(&self) -> Vec<&'static KeySpec> {
        let names: &[&str] = match self {
            Self::Measure => &["state", "model", "n", "b", "boundary", "t", "input", "region"],
            Self::ScanArea => &["model", "n", "b", "boundary", "blocks", "t", "bound-check"],
            Self::ScanTransition => &["model", "n", "boundary", "grid", "quantity", "epsilon", "pair"],
            Self::Chsh => &["strategy", "rounds"],
            Self::Distill => &["theta", "mode"],
            Self::MpsSolve => &["model", "n", "b", "boundary", "bond-dim", "sweeps", "tol", "block", "exact", "save-mps"],
            Self::SwapPurity => &["state", "model", "n", "b", "boundary", "t", "input", "region", "shots"],
        };
        names
            .iter()
            .chain(COMMON)
            .map(|n| KEYS.iter().find(|k| k.name == *n).expect("key table covers every command"))
            .collect()
    }
}

const COMMON: &[&str] = &["seed", "format", "out"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KeyType {
    /// Non-negative integer with a lower bound.
    Count(u64),
    Float,
    /// Strictly positive float.
    Positive,
    Bool,
    Choice(&'static [&'static str]),
    /// Comma-separated site indices or inclusive ranges `a..b`.
    Sites,
    /// Comma-separated values or `start..end:points`.
    Grid,
    Path,
}

#[derive(Debug)]
pub struct KeySpec {
    pub name: &'static str,
    pub ty: KeyType,
    /// `None` means the key is unset unless given.
    pub default: Option<&'static str>,
    pub help: &'static str,
}

const STATES: &[&str] = &["ghz", "w", "bell", "random", "ground", "dimer", "gibbs", "file"];

pub const KEYS: &[KeySpec] = &[
    KeySpec { name: "state", ty: KeyType::Choice(STATES), default: Some("ghz"), help: "state to prepare" },
    KeySpec { name: "model", ty: KeyType::Choice(&["ising", "mg", "heisenberg"]), default: Some("ising"), help: "spin-chain model" },
    KeySpec { name: "n", ty: KeyType::Count(2), default: Some("8"), help: "number of sites" },
    KeySpec { name: "b", ty: KeyType::Float, default: Some("1"), help: "field strength B" },
    KeySpec { name: "boundary", ty: KeyType::Choice(&["periodic", "open"]), default: Some("periodic"), help: "chain boundary" },
    KeySpec { name: "t", ty: KeyType::Positive, default: None, help: "temperature T > 0" },
    KeySpec { name: "input", ty: KeyType::Path, default: None, help: "state file for state = file" },
    KeySpec { name: "region", ty: KeyType::Sites, default: Some("0"), help: "sites of region A" },
    KeySpec { name: "blocks", ty: KeyType::Sites, default: None, help: "block lengths, default 1..n/2" },
    KeySpec { name: "bound-check", ty: KeyType::Bool, default: Some("false"), help: "check I(A:B) against the boundary bound" },
    KeySpec { name: "grid", ty: KeyType::Grid, default: Some("0..2:21"), help: "field values" },
    KeySpec { name: "quantity", ty: KeyType::Choice(&["overlap", "pair"]), default: Some("overlap"), help: "scanned quantity" },
    KeySpec { name: "epsilon", ty: KeyType::Float, default: Some("0.001"), help: "field offset for overlaps" },
    KeySpec { name: "pair", ty: KeyType::Sites, default: Some("0,1"), help: "site pair for negativity" },
    KeySpec { name: "strategy", ty: KeyType::Choice(&["quantum", "classical"]), default: Some("quantum"), help: "game strategy" },
    KeySpec { name: "rounds", ty: KeyType::Count(0), default: Some("0"), help: "sampled rounds, 0 for the exact value" },
    KeySpec { name: "theta", ty: KeyType::Positive, default: Some("0.5"), help: "input angle in (0, π/4]" },
    KeySpec { name: "mode", ty: KeyType::Choice(&["both", "sampled"]), default: Some("both"), help: "report both branches or sample one" },
    KeySpec { name: "bond-dim", ty: KeyType::Count(1), default: Some("16"), help: "maximal bond dimension" },
    KeySpec { name: "sweeps", ty: KeyType::Count(1), default: Some("30"), help: "maximal number of sweeps" },
    KeySpec { name: "tol", ty: KeyType::Positive, default: Some("1e-10"), help: "energy change that ends the sweeps" },
    KeySpec { name: "block", ty: KeyType::Count(1), default: Some("1"), help: "sites merged into one block" },
    KeySpec { name: "exact", ty: KeyType::Bool, default: Some("false"), help: "compare with exact diagonalization" },
    KeySpec { name: "save-mps", ty: KeyType::Path, default: None, help: "write the optimized tensors here" },
    KeySpec { name: "shots", ty: KeyType::Count(0), default: Some("0"), help: "sampled shots, 0 for exact only" },
    KeySpec { name: "seed", ty: KeyType::Count(0), default: Some("0"), help: "random seed" },
    KeySpec { name: "format", ty: KeyType::Choice(&["csv", "json"]), default: Some("csv"), help: "results format" },
    KeySpec { name: "out", ty: KeyType::Path, default: None, help: "results file, default <command>.<format> in the output directory" },
];

pub fn key_spec(name: &str) -> Option<&'static KeySpec> {
    KEYS.iter().find(|k| k.name == name)
}

/// Typed config value.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(u64),
    Float(f64),
    Bool(bool),
    Text(String),
    List(Vec<usize>),
    Grid(Vec<f64>),
}

impl Value {
    fn to_json(&self) -> Json {
        match self {
            Value::Int(i) => json!(i),
            Value::Float(x) => json!(x),
            Value::Bool(b) => json!(b),
            Value::Text(s) => json!(s),
            Value::List(v) => json!(v),
            Value::Grid(v) => json!(v),
        }
    }
}

/// Config failure naming the offending key.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub key: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "key `{}`: {}", self.key, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn fail<T>(key: &str, message: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError { key: key.to_owned(), message: message.into() })
}

fn parse_sites(key: &str, text: &str) -> Result<Vec<usize>, ConfigError> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim) {
        let num = |s: &str| s.trim().parse::<usize>().or_else(|_| fail(key, format!("expected a site index, got `{s}`")));
        if let Some((a, b)) = part.split_once("..") {
            let (a, b) = (num(a)?, num(b)?);
            if a > b {
                return fail(key, format!("empty range `{part}`"));
            }
            out.extend(a..=b);
        } else {
            out.push(num(part)?);
        }
    }
    Ok(out)
}

fn parse_grid(key: &str, text: &str) -> Result<Vec<f64>, ConfigError> {
    let num = |s: &str| match s.trim().parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => fail(key, format!("expected a finite number, got `{}`", s.trim())),
    };
    if let Some((range, points)) = text.split_once(':') {
        let Some((a, b)) = range.split_once("..") else {
            return fail(key, "expected `start..end:points`");
        };
        let (a, b) = (num(a)?, num(b)?);
        let k: usize = points.trim().parse().or_else(|_| fail(key, format!("expected a point count, got `{}`", points.trim())))?;
        if k < 2 || a >= b {
            return fail(key, "a grid range needs start < end and at least 2 points");
        }
        Ok((0..k).map(|i| a + (b - a) * i as f64 / (k - 1) as f64).collect())
    } else {
        text.split(',').map(num).collect()
    }
}

/// Parses one value according to its key's type.
pub fn parse_value(spec: &KeySpec, text: &str) -> Result<Value, ConfigError> {
    let key = spec.name;
    let text = text.trim();
    match spec.ty {
        KeyType::Count(min) => match text.parse::<u64>() {
            Ok(v) if v >= min => Ok(Value::Int(v)),
            Ok(v) => fail(key, format!("must be at least {min}, got {v}")),
            Err(_) => fail(key, format!("expected a non-negative integer, got `{text}`")),
        },
        KeyType::Float => match text.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(Value::Float(x)),
            _ => fail(key, format!("expected a finite number, got `{text}`")),
        },
        KeyType::Positive => match text.parse::<f64>() {
            Ok(x) if x.is_finite() && x > 0.0 => Ok(Value::Float(x)),
            Ok(x) if key == "t" => fail(key, format!("temperature must satisfy T > 0, got {x}")),
            Ok(x) => fail(key, format!("must be positive, got {x}")),
            Err(_) => fail(key, format!("expected a number, got `{text}`")),
        },
        KeyType::Bool => match text {
            "true" | "yes" | "1" => Ok(Value::Bool(true)),
            "false" | "no" | "0" => Ok(Value::Bool(false)),
            _ => fail(key, format!("expected true or false, got `{text}`")),
        },
        KeyType::Choice(options) => {
            if options.contains(&text) {
                Ok(Value::Text(text.to_owned()))
            } else {
                fail(key, format!("expected one of {}, got `{text}`", options.join(", ")))
            }
        }
        KeyType::Sites => parse_sites(key, text).map(Value::List),
        KeyType::Grid => parse_grid(key, text).map(Value::Grid),
        KeyType::Path => {
            if text.is_empty() {
                fail(key, "path is empty")
            } else {
                Ok(Value::Text(text.to_owned()))
            }
        }
    }
}

/// One `key = value` entry with its origin, for precedence and warnings.
#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

/// Splits config text into entries. Blank lines and `#` comments are skipped.
pub fn parse_entries(text: &str) -> Result<Vec<Entry>, ConfigError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return fail(line, format!("line {}: expected `key = value`", i + 1));
        };
        out.push(Entry { key: k.trim().to_owned(), value: v.trim().to_owned(), line: i + 1 });
    }
    Ok(out)
}

/// A fully resolved configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    values: BTreeMap<&'static str, Value>,
    order: Vec<&'static str>,
}

impl RunConfig {
    /// Resolves file entries and flag overrides for `command`. Returns the
    /// config and any warnings (duplicate keys).
    pub fn resolve(command: CommandKind, file: &[Entry], flags: &[(String, String)]) -> Result<(Self, Vec<String>), ConfigError> {
        let specs = command.keys();
        let mut raw: BTreeMap<&'static str, String> = BTreeMap::new();
        let mut seen: BTreeMap<&'static str, usize> = BTreeMap::new();
        let mut warnings = Vec::new();
        for e in file {
            if e.key == "command" {
                if e.value != command.name() {
                    return fail("command", format!("file is for `{}`, but `{}` was requested", e.value, command.name()));
                }
                continue;
            }
            let Some(spec) = specs.iter().find(|s| s.name == e.key) else {
                return fail(&e.key, format!("unknown key for `{}`", command.name()));
            };
            if let Some(prev) = seen.insert(spec.name, e.line) {
                warnings.push(format!("warning: key `{}` set on lines {prev} and {}; using line {}", spec.name, e.line, e.line));
            }
            raw.insert(spec.name, e.value.clone());
        }
        for (k, v) in flags {
            let Some(spec) = specs.iter().find(|s| s.name == k) else {
                return fail(k, format!("unknown key for `{}`", command.name()));
            };
            raw.insert(spec.name, v.clone());
        }
        let mut values = BTreeMap::new();
        for spec in &specs {
            let text = raw.get(spec.name).map(String::as_str).or_else(|| command.default_for(spec));
            if let Some(text) = text {
                values.insert(spec.name, parse_value(spec, text)?);
            }
        }
        let cfg = Self { command, values, order: specs.iter().map(|s| s.name).collect() };
        cfg.finish().map(|c| (c, warnings))
    }

    /// Cross-key checks and derived defaults.
    fn finish(mut self) -> Result<Self, ConfigError> {
        let n = self.values.get("n").map(|v| match v {
            Value::Int(n) => *n as usize,
            _ => unreachable!("n is an integer"),
        });
        if let Some(n) = n {
            for key in ["region", "pair"] {
                if let Some(Value::List(sites)) = self.values.get(key) {
                    if let Some(s) = sites.iter().find(|&&s| s >= n) {
                        return fail(key, format!("site {s} is outside a chain of {n} sites"));
                    }
                    let mut sorted = sites.clone();
                    sorted.sort_unstable();
                    sorted.dedup();
                    if sorted.len() != sites.len() {
                        return fail(key, "sites repeat");
                    }
                    if sorted.len() >= n {
                        return fail(key, "region must leave at least one site outside");
                    }
                }
            }
        }
        if self.command == CommandKind::ScanTransition && self.list("pair").len() != 2 {
            return fail("pair", "expected exactly two sites");
        }
        if self.command == CommandKind::ScanArea {
            let n = n.expect("scan-area has n");
            if !self.values.contains_key("blocks") {
                self.values.insert("blocks", Value::List((1..=n / 2).collect()));
            }
            if let Some(bad) = self.list("blocks").iter().find(|&&l| l == 0 || l >= n) {
                return fail("blocks", format!("block length {bad} must lie in 1..{}", n - 1));
            }
            if self.flag("bound-check") && !self.values.contains_key("t") {
                return fail("bound-check", "the bound check needs a temperature `t`");
            }
        }
        if matches!(self.command, CommandKind::Measure | CommandKind::SwapPurity) {
            match self.text("state") {
                "gibbs" if !self.values.contains_key("t") => return fail("t", "state = gibbs needs a temperature T > 0"),
                "file" if !self.values.contains_key("input") => return fail("input", "state = file needs an input path"),
                _ => {}
            }
        }
        if self.command == CommandKind::Distill && self.float("theta") > std::f64::consts::FRAC_PI_4 + 1e-15 {
            return fail("theta", format!("must lie in (0, π/4], got {}", self.float("theta")));
        }
        Ok(self)
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.values.get(key)
    }

    pub fn int(&self, key: &str) -> u64 {
        match self.values.get(key) {
            Some(Value::Int(v)) => *v,
            other => panic!("key `{key}` is not an integer: {other:?}"),
        }
    }

    pub fn usize(&self, key: &str) -> usize {
        self.int(key) as usize
    }

    pub fn float(&self, key: &str) -> f64 {
        match self.values.get(key) {
            Some(Value::Float(v)) => *v,
            other => panic!("key `{key}` is not a number: {other:?}"),
        }
    }

    pub fn opt_float(&self, key: &str) -> Option<f64> {
        self.values.get(key).map(|_| self.float(key))
    }

    pub fn flag(&self, key: &str) -> bool {
        matches!(self.values.get(key), Some(Value::Bool(true)))
    }

    pub fn text(&self, key: &str) -> &str {
        match self.values.get(key) {
            Some(Value::Text(s)) => s,
            other => panic!("key `{key}` is not text: {other:?}"),
        }
    }

    pub fn opt_text(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|_| self.text(key))
    }

    pub fn list(&self, key: &str) -> &[usize] {
        match self.values.get(key) {
            Some(Value::List(v)) => v,
            other => panic!("key `{key}` is not a site list: {other:?}"),
        }
    }

    pub fn grid(&self, key: &str) -> &[f64] {
        match self.values.get(key) {
            Some(Value::Grid(v)) => v,
            other => panic!("key `{key}` is not a grid: {other:?}"),
        }
    }

    pub fn seed(&self) -> u64 {
        self.int("seed")
    }

    /// Resolved values in key order; unset optional keys are `null`.
    pub fn to_json(&self) -> Json {
        let mut map = serde_json::Map::new();
        for key in &self.order {
            map.insert((*key).to_owned(), self.values.get(key).map_or(Json::Null, Value::to_json));
        }
        Json::Object(map)
    }
}

/// Parses config text for `command` with no flag overrides.
pub fn parse_config(command: CommandKind, text: &str) -> Result<(RunConfig, Vec<String>), ConfigError> {
    RunConfig::resolve(command, &parse_entries(text)?, &[])
}
