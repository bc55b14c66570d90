//! Experiment configuration.
//!
//! Configs are TOML documents with one table per section. Unknown keys are
//! rejected, and each experiment accepts only the sections it uses.

use crate::error::{HarnessError, Result};
use fpsearch_core::pulse::{ErrorModel, PulseStyle, SpinSystem};
use fpsearch_core::search::{all_oracles, OracleSpec, DEFAULT_MAX_ORDER, FIXED_POINT_PHASE};
use serde::Deserialize;
use sha2::{Digest, Sha256};
use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::str::FromStr;

const NUM_QUBITS: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Experiment {
    Table1,
    K1Curves,
    K2Curves,
    Robustness,
    Bb1Scaling,
    Spectra,
}

impl Experiment {
    pub const ALL: [Experiment; 6] = [
        Experiment::Table1,
        Experiment::K1Curves,
        Experiment::K2Curves,
        Experiment::Robustness,
        Experiment::Bb1Scaling,
        Experiment::Spectra,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Table1 => "table1",
            Experiment::K1Curves => "k1-curves",
            Experiment::K2Curves => "k2-curves",
            Experiment::Robustness => "robustness",
            Experiment::Bb1Scaling => "bb1-scaling",
            Experiment::Spectra => "spectra",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Experiment::Table1 => "success probabilities and query counts for r = 0..4",
            Experiment::K1Curves => "pulse-level success curves, one matching state",
            Experiment::K2Curves => "pulse-level success curves, two matching states",
            Experiment::Robustness => "cube-law residuals over an rf/coupling error grid",
            Experiment::Bb1Scaling => "naive vs BB1 pulse infidelity scaling",
            Experiment::Spectra => "simulated 1H spectra for r = 0..3 and the target state",
        }
    }

    fn allows(self, section: Section) -> bool {
        use Section::*;
        match self {
            Experiment::Table1 => matches!(section, Order | Output),
            Experiment::K1Curves | Experiment::K2Curves | Experiment::Robustness => {
                matches!(section, Oracles | Order | Pulse | Errors | System | Output)
            }
            Experiment::Bb1Scaling => matches!(section, Oracles | Bb1 | System | Output),
            Experiment::Spectra => matches!(section, Oracles | Order | System | Spectra | Output),
        }
    }

    fn default_k(self) -> usize {
        match self {
            Experiment::K2Curves => 2,
            _ => 1,
        }
    }

    fn default_orders(self) -> (u32, u32) {
        match self {
            Experiment::Table1 => (0, 4),
            _ => (0, 3),
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| HarnessError::config(format!("unknown experiment '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Section {
    Oracles,
    Order,
    Pulse,
    Errors,
    System,
    Output,
    Bb1,
    Spectra,
}

impl Section {
    fn name(self) -> &'static str {
        match self {
            Section::Oracles => "oracles",
            Section::Order => "order",
            Section::Pulse => "pulse",
            Section::Errors => "errors",
            Section::System => "system",
            Section::Output => "output",
            Section::Bb1 => "bb1",
            Section::Spectra => "spectra",
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    experiment: Option<String>,
    oracles: Option<RawOracles>,
    order: Option<RawOrder>,
    pulse: Option<RawPulse>,
    errors: Option<RawErrors>,
    system: Option<RawSystem>,
    output: Option<RawOutput>,
    bb1: Option<RawBb1>,
    spectra: Option<RawSpectra>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOracles {
    k: Option<usize>,
    matching: Option<RawMatching>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawMatching {
    Keyword(String),
    Sets(Vec<Vec<String>>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOrder {
    min: Option<u32>,
    max: Option<u32>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPulse {
    styles: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawErrors {
    eps: Option<Vec<f64>>,
    delta_j: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    j_hz: Option<f64>,
    t90: Option<f64>,
    t2_h: Option<f64>,
    t2_c: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBb1 {
    eps_min: Option<f64>,
    eps_max: Option<f64>,
    points: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpectra {
    half_width_hz: Option<f64>,
    points: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bb1Settings {
    pub eps_min: f64,
    pub eps_max: f64,
    pub points: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectraSettings {
    pub half_width_hz: f64,
    pub points: usize,
}

/// Fully resolved configuration with defaults applied.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub oracles: Vec<OracleSpec>,
    pub r_min: u32,
    pub r_max: u32,
    pub styles: Vec<PulseStyle>,
    pub eps: Vec<f64>,
    pub delta_j: Vec<f64>,
    pub system: SpinSystem,
    pub output_dir: PathBuf,
    pub bb1: Bb1Settings,
    pub spectra: SpectraSettings,
}

impl ExperimentConfig {
    /// Defaults for `experiment` with no config file.
    pub fn defaults(experiment: Experiment) -> Result<Self> {
        resolve(experiment, RawConfig::default())
    }

    /// Reads a config file and applies `key=value` overrides.
    pub fn load(experiment: Experiment, path: &Path, overrides: &[String]) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(experiment, &text, overrides)
    }

    pub fn parse(experiment: Experiment, text: &str, overrides: &[String]) -> Result<Self> {
        let mut table: toml::Table =
            text.parse().map_err(|e: toml::de::Error| HarnessError::config(e.message().to_string()))?;
        for ov in overrides {
            apply_override(&mut table, ov)?;
        }
        let raw: RawConfig = toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| HarnessError::config(e.message().to_string()))?;
        if let Some(name) = &raw.experiment {
            let named: Experiment = name.parse()?;
            if named != experiment {
                return Err(HarnessError::config(format!(
                    "config is for experiment '{named}', but '{experiment}' was requested"
                )));
            }
        }
        resolve(experiment, raw)
    }

    pub fn error_models(&self) -> Result<Vec<(f64, f64, ErrorModel)>> {
        let mut out = Vec::with_capacity(self.eps.len() * self.delta_j.len());
        for &e in &self.eps {
            for &dj in &self.delta_j {
                out.push((e, dj, ErrorModel::new(e, e, dj)?));
            }
        }
        Ok(out)
    }

    /// Canonical text of every setting that affects results. The output
    /// directory is excluded.
    pub fn canonical(&self) -> String {
        let mut s = String::new();
        let list = |xs: &[f64]| xs.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(",");
        let _ = writeln!(s, "experiment={}", self.experiment);
        let e = self.experiment;
        if e.allows(Section::Oracles) {
            let labels: Vec<_> = self.oracles.iter().map(|o| o.label()).collect();
            let _ = writeln!(s, "oracles={}", labels.join(","));
        }
        if e.allows(Section::Order) {
            let _ = writeln!(s, "order={}..{}", self.r_min, self.r_max);
        }
        if e.allows(Section::Pulse) {
            let styles: Vec<_> = self.styles.iter().map(|s| s.name()).collect();
            let _ = writeln!(s, "styles={}", styles.join(","));
        }
        if e.allows(Section::Errors) {
            let _ = writeln!(s, "eps={}", list(&self.eps));
            let _ = writeln!(s, "delta_j={}", list(&self.delta_j));
        }
        if e.allows(Section::System) {
            let sys = &self.system;
            let _ = writeln!(s, "system={:?},{:?},{:?},{:?}", sys.j_hz, sys.t90, sys.t2_h, sys.t2_c);
        }
        if e.allows(Section::Bb1) {
            let b = &self.bb1;
            let _ = writeln!(s, "bb1={:?},{:?},{}", b.eps_min, b.eps_max, b.points);
        }
        if e.allows(Section::Spectra) {
            let sp = &self.spectra;
            let _ = writeln!(s, "spectra={:?},{}", sp.half_width_hz, sp.points);
        }
        s
    }

    /// First 16 hex digits of the SHA-256 of [`canonical`](Self::canonical).
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn apply_override(table: &mut toml::Table, spec: &str) -> Result<()> {
    let (key, value) = spec
        .split_once('=')
        .ok_or_else(|| HarnessError::config(format!("override '{spec}' is not key=value")))?;
    let key = key.trim();
    let value = value.trim();
    if key.is_empty() || key.split('.').any(str::is_empty) {
        return Err(HarnessError::config(format!("override '{spec}' has an empty key")));
    }
    let parsed = match format!("v = {value}").parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").expect("parsed table has key v"),
        Err(_) => toml::Value::String(value.to_string()),
    };
    let parts: Vec<&str> = key.split('.').collect();
    let (last, path) = parts.split_last().expect("key is nonempty");
    let mut cursor = table;
    for part in path {
        let entry = cursor.entry(part.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cursor = match entry {
            toml::Value::Table(t) => t,
            _ => return Err(HarnessError::config(format!("override '{spec}': '{part}' is not a section"))),
        };
    }
    cursor.insert(last.to_string(), parsed);
    Ok(())
}

fn check_applicable(experiment: Experiment, raw: &RawConfig) -> Result<()> {
    let present = [
        (Section::Oracles, raw.oracles.is_some()),
        (Section::Order, raw.order.is_some()),
        (Section::Pulse, raw.pulse.is_some()),
        (Section::Errors, raw.errors.is_some()),
        (Section::System, raw.system.is_some()),
        (Section::Output, raw.output.is_some()),
        (Section::Bb1, raw.bb1.is_some()),
        (Section::Spectra, raw.spectra.is_some()),
    ];
    for (section, is_present) in present {
        if is_present && !experiment.allows(section) {
            return Err(HarnessError::config(format!(
                "section [{}] is not applicable to experiment {experiment}",
                section.name()
            )));
        }
    }
    Ok(())
}

fn finite(name: &str, x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(HarnessError::config(format!("{name} must be finite, got {x}")))
    }
}

fn resolve_oracles(experiment: Experiment, raw: Option<RawOracles>) -> Result<Vec<OracleSpec>> {
    let raw = raw.unwrap_or(RawOracles { k: None, matching: None });
    let oracles = match raw.matching {
        None => {
            let k = raw.k.unwrap_or_else(|| experiment.default_k());
            if k == 0 || k >= 1 << NUM_QUBITS {
                return Err(HarnessError::config(format!("oracles.k = {k} is outside 1..=3")));
            }
            all_oracles(NUM_QUBITS, k, FIXED_POINT_PHASE)?
        }
        Some(RawMatching::Keyword(word)) if word == "all" => {
            let k = raw.k.unwrap_or_else(|| experiment.default_k());
            if k == 0 || k >= 1 << NUM_QUBITS {
                return Err(HarnessError::config(format!("oracles.k = {k} is outside 1..=3")));
            }
            all_oracles(NUM_QUBITS, k, FIXED_POINT_PHASE)?
        }
        Some(RawMatching::Keyword(word)) => {
            return Err(HarnessError::config(format!(
                "oracles.matching must be \"all\" or a list of bitstring sets, got \"{word}\""
            )))
        }
        Some(RawMatching::Sets(sets)) => {
            if sets.is_empty() {
                return Err(HarnessError::config("oracles.matching is empty"));
            }
            let mut out = Vec::with_capacity(sets.len());
            for set in &sets {
                let spec = OracleSpec::from_bitstrings(set, FIXED_POINT_PHASE)?;
                if spec.num_qubits() != NUM_QUBITS {
                    return Err(HarnessError::config(format!(
                        "oracle {} must use {NUM_QUBITS}-bit strings",
                        set.join("+")
                    )));
                }
                if let Some(k) = raw.k {
                    if spec.k() != k {
                        return Err(HarnessError::config(format!(
                            "oracle {} has {} matching states, but oracles.k = {k}",
                            spec.label(),
                            spec.k()
                        )));
                    }
                }
                if out.contains(&spec) {
                    return Err(HarnessError::config(format!("oracle {} listed twice", spec.label())));
                }
                out.push(spec);
            }
            out
        }
    };
    let required_k = match experiment {
        Experiment::K1Curves => Some(1),
        Experiment::K2Curves => Some(2),
        _ => None,
    };
    for o in &oracles {
        if let Some(k) = required_k {
            if o.k() != k {
                return Err(HarnessError::config(format!(
                    "{experiment} requires k = {k}, oracle {} has k = {}",
                    o.label(),
                    o.k()
                )));
            }
        }
        if experiment == Experiment::Spectra && o.k() > 2 {
            return Err(HarnessError::config(format!(
                "spectra requires k in {{1, 2}}, oracle {} has k = {}",
                o.label(),
                o.k()
            )));
        }
    }
    Ok(oracles)
}

fn resolve(experiment: Experiment, raw: RawConfig) -> Result<ExperimentConfig> {
    check_applicable(experiment, &raw)?;

    let oracles = if experiment.allows(Section::Oracles) {
        resolve_oracles(experiment, raw.oracles)?
    } else {
        Vec::new()
    };

    let (def_min, def_max) = experiment.default_orders();
    let (r_min, r_max) = match raw.order {
        Some(o) => (o.min.unwrap_or(def_min), o.max.unwrap_or(def_max)),
        None => (def_min, def_max),
    };
    if r_min > r_max {
        return Err(HarnessError::config(format!("order.min = {r_min} exceeds order.max = {r_max}")));
    }
    if r_max > DEFAULT_MAX_ORDER {
        return Err(HarnessError::config(format!(
            "order.max = {r_max} exceeds the depth cap {DEFAULT_MAX_ORDER}"
        )));
    }

    let styles = match raw.pulse {
        Some(p) => {
            if p.styles.is_empty() {
                return Err(HarnessError::config("pulse.styles is empty"));
            }
            let mut out: Vec<PulseStyle> = Vec::new();
            for name in &p.styles {
                let style: PulseStyle = name
                    .parse()
                    .map_err(|_| HarnessError::config(format!("unknown pulse style '{name}'")))?;
                if out.contains(&style) {
                    return Err(HarnessError::config(format!("pulse style '{name}' listed twice")));
                }
                out.push(style);
            }
            out
        }
        None => vec![PulseStyle::Naive],
    };

    let (eps, delta_j) = match raw.errors {
        Some(e) => (e.eps.unwrap_or_else(|| vec![0.0]), e.delta_j.unwrap_or_else(|| vec![0.0])),
        None => (vec![0.0], vec![0.0]),
    };
    for (name, grid) in [("errors.eps", &eps), ("errors.delta_j", &delta_j)] {
        if grid.is_empty() {
            return Err(HarnessError::config(format!("{name} is empty")));
        }
        for &x in grid.iter() {
            finite(name, x)?;
            if x.abs() >= 1.0 {
                return Err(HarnessError::config(format!("{name} value {x} must satisfy |x| < 1")));
            }
        }
    }

    let base = SpinSystem::sodium_formate();
    let system = match raw.system {
        Some(s) => SpinSystem::new(
            finite("system.j_hz", s.j_hz.unwrap_or(base.j_hz))?,
            finite("system.t90", s.t90.unwrap_or(base.t90))?,
            finite("system.t2_h", s.t2_h.unwrap_or(base.t2_h))?,
            finite("system.t2_c", s.t2_c.unwrap_or(base.t2_c))?,
        )?,
        None => base,
    };

    let output_dir = raw
        .output
        .and_then(|o| o.dir)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("out").join(experiment.name()));

    let bb1 = {
        let b = raw.bb1.unwrap_or(RawBb1 { eps_min: None, eps_max: None, points: None });
        let s = Bb1Settings {
            eps_min: finite("bb1.eps_min", b.eps_min.unwrap_or(1e-3))?,
            eps_max: finite("bb1.eps_max", b.eps_max.unwrap_or(1e-2))?,
            points: b.points.unwrap_or(8),
        };
        let range = 1e-3..=1e-1;
        if !range.contains(&s.eps_min) || !range.contains(&s.eps_max) || s.eps_min >= s.eps_max {
            return Err(HarnessError::config(format!(
                "bb1 ε range [{}, {}] must be increasing and within [1e-3, 1e-1]",
                s.eps_min, s.eps_max
            )));
        }
        if !(2..=1000).contains(&s.points) {
            return Err(HarnessError::config(format!("bb1.points = {} must be in 2..=1000", s.points)));
        }
        s
    };

    let spectra = {
        let sp = raw.spectra.unwrap_or(RawSpectra { half_width_hz: None, points: None });
        let s = SpectraSettings {
            half_width_hz: finite("spectra.half_width_hz", sp.half_width_hz.unwrap_or(250.0))?,
            points: sp.points.unwrap_or(2001),
        };
        if s.half_width_hz <= 0.0 {
            return Err(HarnessError::config("spectra.half_width_hz must be positive"));
        }
        if !(2..=1_000_000).contains(&s.points) {
            return Err(HarnessError::config(format!(
                "spectra.points = {} must be in 2..=1000000",
                s.points
            )));
        }
        s
    };

    Ok(ExperimentConfig {
        experiment,
        oracles,
        r_min,
        r_max,
        styles,
        eps,
        delta_j,
        system,
        output_dir,
        bb1,
        spectra,
    })
}
