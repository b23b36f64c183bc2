//! Flat `key=value` configuration, layered preset < file < flags, and its
//! resolution into a typed [`ExperimentConfig`].

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use mimohop::ppp_sim::{HopSplit, SectorAnchor};
use mimohop::{integer_grid, AntennaConfig, InverseMode, OutageTarget, Scale};

use crate::CliError;

/// Keys accepted in presets, config files and `--set`.
pub const KEYS: &[&str] = &[
    "alpha",
    "anchor",
    "check",
    "d",
    "eps",
    "family",
    "intensity",
    "metric",
    "mode",
    "n",
    "n0",
    "nodes",
    "nr",
    "nt",
    "phi",
    "placement",
    "rate",
    "seed",
    "snr",
    "split",
    "sweep",
    "tail",
    "threshold",
    "trials",
];

/// Variables a sweep or a family may range over.
pub const SWEEP_VARS: &[&str] = &[
    "alpha",
    "d",
    "eps",
    "intensity",
    "n",
    "n0",
    "nodes",
    "nr",
    "nt",
    "p_r",
    "phi",
    "rate",
    "snr",
];

const INTEGER_VARS: &[&str] = &["n", "nodes", "nr", "nt"];

/// One layer of raw settings. `p_r` is converted to `eps` on insertion.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Layer(BTreeMap<String, String>);

impl Layer {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let key = key.trim();
        let value = value.trim();
        if key == "p_r" {
            let p = parse_real(value).map_err(|e| CliError::config(format!("p_r: {e}")))?;
            self.0.insert("eps".into(), (1.0 - p).to_string());
            return Ok(());
        }
        if !KEYS.contains(&key) {
            return Err(CliError::config(format!("unknown key '{key}'")));
        }
        self.0.insert(key.into(), value.into());
        Ok(())
    }

    pub fn pairs<'a>(
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self, CliError> {
        let mut layer = Self::default();
        for (k, v) in pairs {
            layer.set(k, v)?;
        }
        Ok(layer)
    }

    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut layer = Self::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::config(format!("line {}: expected key=value", i + 1)))?;
            layer.set(k, v)?;
        }
        Ok(layer)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    /// Later layers win.
    pub fn merge(layers: &[&Layer]) -> Layer {
        let mut out = Layer::default();
        for l in layers {
            for (k, v) in &l.0 {
                out.0.insert(k.clone(), v.clone());
            }
        }
        out
    }

    pub fn keys(&self) -> BTreeSet<&str> {
        self.0.keys().map(String::as_str).collect()
    }
}

/// Accepts plain numbers, `pi`, `pi/k` and `k*pi`.
pub fn parse_real(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let v = if let Some(rest) = s.strip_prefix("pi/") {
        PI / rest.parse::<f64>().map_err(|e| format!("'{s}': {e}"))?
    } else if s == "pi" {
        PI
    } else if let Some(head) = s.strip_suffix("*pi") {
        head.parse::<f64>().map_err(|e| format!("'{s}': {e}"))? * PI
    } else {
        s.parse::<f64>().map_err(|e| format!("'{s}': {e}"))?
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

fn parse_count(var: &str, v: f64) -> Result<u32, CliError> {
    if v >= 1.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
        Ok(v as u32)
    } else {
        Err(CliError::config(format!(
            "{var} must be a positive integer, got {v}"
        )))
    }
}

/// `VAR:MIN:MAX:POINTS:SCALE`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub var: String,
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub scale: Scale,
}

impl SweepSpec {
    pub fn is_integer(&self) -> bool {
        INTEGER_VARS.contains(&self.var.as_str())
    }

    pub fn values(&self) -> Result<Vec<f64>, CliError> {
        if self.is_integer() {
            let lo = parse_count(&self.var, self.min)?;
            let hi = parse_count(&self.var, self.max)?;
            Ok(integer_grid(lo, hi, self.points, self.scale)?
                .into_iter()
                .map(f64::from)
                .collect())
        } else {
            Ok(mimohop::grid(self.min, self.max, self.points, self.scale)?)
        }
    }
}

impl FromStr for SweepSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let [var, min, max, points, rest @ ..] = parts.as_slice() else {
            return Err(CliError::config(format!(
                "sweep '{s}': expected VAR:MIN:MAX:POINTS[:SCALE]"
            )));
        };
        if !SWEEP_VARS.contains(var) {
            return Err(CliError::config(format!("cannot sweep '{var}'")));
        }
        let scale = match rest {
            [] => Scale::Linear,
            [one] => one.parse()?,
            _ => return Err(CliError::config(format!("sweep '{s}': too many fields"))),
        };
        let bad = |e: String| CliError::config(format!("sweep '{s}': {e}"));
        Ok(Self {
            var: var.to_string(),
            min: parse_real(min).map_err(bad)?,
            max: parse_real(max).map_err(bad)?,
            points: points
                .parse()
                .map_err(|e| CliError::config(format!("sweep '{s}': points: {e}")))?,
            scale,
        })
    }
}

impl fmt::Display for SweepSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{}:{}:{}",
            self.var, self.min, self.max, self.points, self.scale
        )
    }
}

/// `VAR:v1,v2,...`: one output series per value.
#[derive(Debug, Clone, PartialEq)]
pub struct Family {
    pub var: String,
    pub values: Vec<f64>,
}

impl FromStr for Family {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let (var, list) = s
            .split_once(':')
            .ok_or_else(|| CliError::config(format!("family '{s}': expected VAR:v1,v2,...")))?;
        let var = var.trim();
        if !SWEEP_VARS.contains(&var) {
            return Err(CliError::config(format!(
                "cannot vary '{var}' across a family"
            )));
        }
        let values = list
            .split(',')
            .map(|v| parse_real(v).map_err(|e| CliError::config(format!("family '{s}': {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            var: var.into(),
            values,
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.values.iter().map(f64::to_string).collect();
        write!(f, "{}:{}", self.var, vals.join(","))
    }
}

/// Which energy ratio a compare command reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Metric {
    /// Short hops against one long hop.
    #[default]
    ShortLong,
    /// Multi-transmit long hop against short hops.
    MultShort,
}

impl FromStr for Metric {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "short-long" => Ok(Self::ShortLong),
            "mult-short" => Ok(Self::MultShort),
            _ => Err(CliError::config(format!(
                "metric '{s}' (expected short-long|mult-short)"
            ))),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::ShortLong => "short-long",
            Self::MultShort => "mult-short",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PlacementKind {
    #[default]
    Uniform,
    Poisson,
}

impl FromStr for PlacementKind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "uniform" => Ok(Self::Uniform),
            "poisson" | "ppp" => Ok(Self::Poisson),
            _ => Err(CliError::config(format!(
                "placement '{s}' (expected uniform|poisson)"
            ))),
        }
    }
}

impl fmt::Display for PlacementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Uniform => "uniform",
            Self::Poisson => "poisson",
        })
    }
}

/// Theorem-lab checks the `theorem` command can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckId {
    T1,
    T2,
    T3,
    T4,
    B,
    C,
}

impl CheckId {
    pub const ALL: [CheckId; 6] = [Self::T1, Self::T2, Self::T3, Self::T4, Self::B, Self::C];

    /// Variable the check's grid runs over.
    pub fn grid_var(self) -> &'static str {
        match self {
            Self::T1 => "n",
            Self::T2 | Self::T4 | Self::C => "eps",
            Self::T3 => "nt",
            Self::B => "p_r",
        }
    }

    /// Hop count used when `n` is not given explicitly.
    pub fn default_hops(self) -> u32 {
        match self {
            Self::T4 => 2,
            _ => 3,
        }
    }
}

fn parse_checks(s: &str) -> Result<Vec<CheckId>, CliError> {
    if s == "all" {
        return Ok(CheckId::ALL.to_vec());
    }
    s.split(',')
        .map(|c| match c.trim() {
            "1" => Ok(CheckId::T1),
            "2" => Ok(CheckId::T2),
            "3" => Ok(CheckId::T3),
            "4" => Ok(CheckId::T4),
            "b" | "B" => Ok(CheckId::B),
            "c" | "C" => Ok(CheckId::C),
            other => Err(CliError::config(format!(
                "check '{other}' (expected 1|2|3|4|b|c|all)"
            ))),
        })
        .collect()
}

fn checks_text(c: &[CheckId]) -> String {
    if c == CheckId::ALL {
        return "all".into();
    }
    c.iter()
        .map(|c| match c {
            CheckId::T1 => "1",
            CheckId::T2 => "2",
            CheckId::T3 => "3",
            CheckId::T4 => "4",
            CheckId::B => "b",
            CheckId::C => "c",
        })
        .collect::<Vec<_>>()
        .join(",")
}

/// Fully resolved run parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub alpha: f64,
    pub phi: f64,
    pub n: u32,
    /// `n` came from a preset, file or flag rather than the default.
    pub n_explicit: bool,
    pub d: f64,
    pub n0: f64,
    pub nt: u32,
    pub nr: u32,
    pub rate: f64,
    pub eps: f64,
    pub snr: Option<f64>,
    pub nodes: u32,
    pub intensity: f64,
    pub trials: usize,
    pub seed: u64,
    pub mode: InverseMode,
    pub metric: Metric,
    pub placement: PlacementKind,
    pub anchor: SectorAnchor,
    pub split: HopSplit,
    pub checks: Vec<CheckId>,
    pub threshold: Option<f64>,
    pub tail: usize,
    pub sweep: Option<SweepSpec>,
    pub family: Option<Family>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            alpha: 2.0,
            phi: PI / 2.0,
            n: 4,
            n_explicit: false,
            d: 1.0,
            n0: 1.0,
            nt: 2,
            nr: 2,
            rate: 4.0,
            eps: 0.05,
            snr: None,
            nodes: 30,
            intensity: 1.0,
            trials: 1000,
            seed: 1,
            mode: InverseMode::Exact,
            metric: Metric::ShortLong,
            placement: PlacementKind::Uniform,
            anchor: SectorAnchor::Reanchored,
            split: HopSplit::Realized,
            checks: CheckId::ALL.to_vec(),
            threshold: None,
            tail: 8,
            sweep: None,
            family: None,
        }
    }
}

fn real(layer: &Layer, key: &str, dflt: f64) -> Result<f64, CliError> {
    match layer.get(key) {
        Some(v) => parse_real(v).map_err(|e| CliError::config(format!("{key}: {e}"))),
        None => Ok(dflt),
    }
}

fn count(layer: &Layer, key: &str, dflt: u32) -> Result<u32, CliError> {
    match layer.get(key) {
        Some(v) => parse_count(
            key,
            parse_real(v).map_err(|e| CliError::config(format!("{key}: {e}")))?,
        ),
        None => Ok(dflt),
    }
}

fn parsed<T: FromStr>(layer: &Layer, key: &str, dflt: T) -> Result<T, CliError>
where
    T::Err: fmt::Display,
{
    match layer.get(key) {
        Some(v) => v
            .parse()
            .map_err(|e| CliError::config(format!("{key}: {e}"))),
        None => Ok(dflt),
    }
}

fn parse_anchor(s: &str) -> Result<SectorAnchor, CliError> {
    match s {
        "reanchored" => Ok(SectorAnchor::Reanchored),
        "source" => Ok(SectorAnchor::Source),
        _ => Err(CliError::config(format!(
            "anchor '{s}' (expected reanchored|source)"
        ))),
    }
}

fn parse_split(s: &str) -> Result<HopSplit, CliError> {
    match s {
        "realized" => Ok(HopSplit::Realized),
        "nominal" => Ok(HopSplit::Nominal),
        _ => Err(CliError::config(format!(
            "split '{s}' (expected realized|nominal)"
        ))),
    }
}

impl ExperimentConfig {
    pub fn resolve(layer: &Layer) -> Result<Self, CliError> {
        let d = Self::default();
        let cfg = Self {
            alpha: real(layer, "alpha", d.alpha)?,
            phi: real(layer, "phi", d.phi)?,
            n: count(layer, "n", d.n)?,
            n_explicit: layer.get("n").is_some(),
            d: real(layer, "d", d.d)?,
            n0: real(layer, "n0", d.n0)?,
            nt: count(layer, "nt", d.nt)?,
            nr: count(layer, "nr", d.nr)?,
            rate: real(layer, "rate", d.rate)?,
            eps: real(layer, "eps", d.eps)?,
            snr: layer
                .get("snr")
                .map(|v| parse_real(v).map_err(|e| CliError::config(format!("snr: {e}"))))
                .transpose()?,
            nodes: count(layer, "nodes", d.nodes)?,
            intensity: real(layer, "intensity", d.intensity)?,
            trials: count(layer, "trials", d.trials as u32)? as usize,
            seed: parsed(layer, "seed", d.seed)?,
            mode: parsed(layer, "mode", d.mode)?,
            metric: parsed(layer, "metric", d.metric)?,
            placement: parsed(layer, "placement", d.placement)?,
            anchor: layer
                .get("anchor")
                .map(parse_anchor)
                .transpose()?
                .unwrap_or(d.anchor),
            split: layer
                .get("split")
                .map(parse_split)
                .transpose()?
                .unwrap_or(d.split),
            checks: layer
                .get("check")
                .map(parse_checks)
                .transpose()?
                .unwrap_or(d.checks),
            threshold: layer
                .get("threshold")
                .map(|v| parse_real(v).map_err(|e| CliError::config(format!("threshold: {e}"))))
                .transpose()?,
            tail: count(layer, "tail", d.tail as u32)? as usize,
            sweep: layer.get("sweep").map(str::parse).transpose()?,
            family: layer.get("family").map(str::parse).transpose()?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks the invariants every module shares; module-specific ones are
    /// enforced again at dispatch.
    pub fn validate(&self) -> Result<(), CliError> {
        AntennaConfig::new(self.nt, self.nr)?;
        OutageTarget::new(self.rate, self.eps)?;
        if !(self.alpha > 0.0) {
            return Err(CliError::config(format!(
                "alpha = {} must be positive",
                self.alpha
            )));
        }
        if !(self.phi > 0.0 && self.phi <= PI) {
            return Err(CliError::config(format!(
                "phi = {} must lie in (0, pi]",
                self.phi
            )));
        }
        if !(self.d > 0.0 && self.n0 > 0.0 && self.intensity > 0.0) {
            return Err(CliError::config("d, n0 and intensity must be positive"));
        }
        if let Some(s) = &self.sweep {
            if self
                .family
                .as_ref()
                .is_some_and(|f| same_var(&f.var, &s.var))
            {
                return Err(CliError::config("family and sweep vary the same parameter"));
            }
            s.values()?;
        }
        Ok(())
    }

    pub fn ant(&self) -> Result<AntennaConfig, CliError> {
        Ok(AntennaConfig::new(self.nt, self.nr)?)
    }

    pub fn target(&self) -> Result<OutageTarget<f64>, CliError> {
        Ok(OutageTarget::new(self.rate, self.eps)?)
    }

    /// Copy with one sweep or family variable set.
    pub fn with(&self, var: &str, value: f64) -> Result<Self, CliError> {
        let mut c = self.clone();
        match var {
            "alpha" => c.alpha = value,
            "phi" => c.phi = value,
            "n" => {
                c.n = parse_count(var, value)?;
                c.n_explicit = true;
            }
            "d" => c.d = value,
            "n0" => c.n0 = value,
            "nt" => c.nt = parse_count(var, value)?,
            "nr" => c.nr = parse_count(var, value)?,
            "rate" => c.rate = value,
            "eps" => c.eps = value,
            "p_r" => c.eps = 1.0 - value,
            "snr" => c.snr = Some(value),
            "nodes" => c.nodes = parse_count(var, value)?,
            "intensity" => c.intensity = value,
            _ => return Err(CliError::config(format!("cannot vary '{var}'"))),
        }
        Ok(c)
    }

    /// Effective configuration as sorted `(key, value)` pairs, for the
    /// `# key=value` echo. Thread count never appears: it cannot change
    /// results.
    pub fn echo(&self) -> Vec<(&'static str, String)> {
        let f = |x: f64| format!("{x:.16e}");
        let mut out = vec![
            ("alpha", f(self.alpha)),
            (
                "anchor",
                match self.anchor {
                    SectorAnchor::Reanchored => "reanchored".into(),
                    SectorAnchor::Source => "source".into(),
                },
            ),
            ("check", checks_text(&self.checks)),
            ("d", f(self.d)),
            ("eps", f(self.eps)),
            (
                "family",
                self.family
                    .as_ref()
                    .map(ToString::to_string)
                    .unwrap_or_default(),
            ),
            ("intensity", f(self.intensity)),
            ("metric", self.metric.to_string()),
            ("mode", self.mode.to_string()),
            ("n", self.n.to_string()),
            ("n0", f(self.n0)),
            ("nodes", self.nodes.to_string()),
            ("nr", self.nr.to_string()),
            ("nt", self.nt.to_string()),
            ("phi", f(self.phi)),
            ("placement", self.placement.to_string()),
            ("rate", f(self.rate)),
            ("seed", self.seed.to_string()),
            ("snr", self.snr.map(f).unwrap_or_default()),
            (
                "split",
                match self.split {
                    HopSplit::Realized => "realized".into(),
                    HopSplit::Nominal => "nominal".into(),
                },
            ),
            (
                "sweep",
                self.sweep
                    .as_ref()
                    .map(ToString::to_string)
                    .unwrap_or_default(),
            ),
            ("tail", self.tail.to_string()),
            ("threshold", self.threshold.map(f).unwrap_or_default()),
            ("trials", self.trials.to_string()),
        ];
        out.sort_by_key(|(k, _)| *k);
        out
    }
}

/// `eps` and `p_r` describe the same parameter.
fn same_var(a: &str, b: &str) -> bool {
    fn canon(v: &str) -> &str {
        if v == "p_r" {
            "eps"
        } else {
            v
        }
    }
    canon(a) == canon(b)
}
