//! Experiment configuration: strict JSON with key-path errors.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {message} (line {line}, column {column})")]
    Parse {
        path: String,
        message: String,
        line: usize,
        column: usize,
    },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

fn invalid(path: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        path: path.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_length")]
    pub length: f64,
}

fn default_n() -> usize {
    128
}

fn default_length() -> f64 {
    2.0 * std::f64::consts::PI
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            n: default_n(),
            length: default_length(),
        }
    }
}

/// Euler step size: fixed, or `factor · ε`. Either way it is shortened so a
/// whole number of steps fits each sampling interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DtRule {
    Fixed(f64),
    ProportionalToEpsilon(f64),
}

impl Default for DtRule {
    fn default() -> Self {
        DtRule::ProportionalToEpsilon(0.05)
    }
}

impl DtRule {
    pub fn nominal(&self, epsilon: f64) -> f64 {
        match *self {
            DtRule::Fixed(dt) => dt,
            DtRule::ProportionalToEpsilon(f) => f * epsilon,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    Zero,
    Reference,
    Random,
    Explicit,
}

/// `amplitude · cos(2π/L (k₁x + k₂y) + phase)`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Mode {
    pub k: [i64; 2],
    pub amplitude: f64,
    #[serde(default)]
    pub phase: f64,
}

/// Periodised Gaussian `amplitude · exp(−|x−center|²/(2 width²))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bump {
    pub center: [f64; 2],
    pub width: f64,
    pub amplitude: f64,
}

/// Initial data `s0 = q + s_extra`, `v0 = ∇⊥q`, `Φ0` from modes and bumps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialDataConfig {
    pub preset: Preset,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub q: Vec<Mode>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub s_extra: Vec<Mode>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub phi0: Vec<Mode>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub phi0_bumps: Vec<Bump>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random_modes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random_amplitude: Option<f64>,
}

impl InitialDataConfig {
    pub fn preset(preset: Preset) -> Self {
        Self {
            preset,
            q: Vec::new(),
            s_extra: Vec::new(),
            phi0: Vec::new(),
            phi0_bumps: Vec::new(),
            random_modes: None,
            random_amplitude: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeConfig {
    /// Fast times `τ = t/ε` at which sup-norms are taken.
    #[serde(default = "default_taus")]
    pub taus: Vec<f64>,
    #[serde(default = "one")]
    pub amplitude: f64,
    #[serde(default = "one")]
    pub width: f64,
    #[serde(default = "default_points")]
    pub points: usize,
    #[serde(default = "default_tol")]
    pub tolerance: f64,
}

fn default_taus() -> Vec<f64> {
    vec![1.0, 5.0, 10.0, 20.0, 30.0, 40.0, 50.0]
}

fn one() -> f64 {
    1.0
}

fn default_points() -> usize {
    64
}

fn default_tol() -> f64 {
    1e-8
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            taus: default_taus(),
            amplitude: 1.0,
            width: 1.0,
            points: default_points(),
            tolerance: default_tol(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default)]
    pub grid: GridConfig,
    pub epsilons: Vec<f64>,
    pub horizon: f64,
    #[serde(default)]
    pub dt_rule: DtRule,
    #[serde(default = "default_qg_dt")]
    pub qg_dt: f64,
    pub initial_data: InitialDataConfig,
    #[serde(default)]
    pub hyperdiffusion: f64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_rate")]
    pub samples_per_unit_time: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshot_interval: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(default)]
    pub probe: ProbeConfig,
}

fn default_gamma() -> f64 {
    2.0
}

fn default_qg_dt() -> f64 {
    1e-3
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_rate() -> f64 {
    50.0
}

fn positive(path: &str, v: f64) -> Result<(), ConfigError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(invalid(path, format!("must be positive and finite, got {v}")))
    }
}

fn check_modes(path: &str, modes: &[Mode], cutoff: i64) -> Result<(), ConfigError> {
    for (i, m) in modes.iter().enumerate() {
        if m.k[0].abs() > cutoff || m.k[1].abs() > cutoff {
            return Err(invalid(
                format!("{path}[{i}].k"),
                format!("wavenumbers must lie within the dealiased band |k| <= {cutoff}"),
            ));
        }
        if m.k == [0, 0] {
            return Err(invalid(format!("{path}[{i}].k"), "the mean mode is not allowed"));
        }
        if !m.amplitude.is_finite() {
            return Err(invalid(format!("{path}[{i}].amplitude"), "must be finite"));
        }
        if !m.phase.is_finite() {
            return Err(invalid(format!("{path}[{i}].phase"), "must be finite"));
        }
    }
    Ok(())
}

impl ExperimentConfig {
    /// Parses and validates.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let config: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            ConfigError::Parse {
                path,
                message: inner.to_string(),
                line: inner.line(),
                column: inner.column(),
            }
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.gamma > 1.0 && self.gamma <= 3.0) {
            return Err(invalid("gamma", format!("must lie in (1, 3], got {}", self.gamma)));
        }
        if self.grid.n < 16 || !self.grid.n.is_power_of_two() {
            return Err(invalid("grid.n", format!("must be a power of two >= 16, got {}", self.grid.n)));
        }
        positive("grid.length", self.grid.length)?;
        if self.epsilons.is_empty() {
            return Err(invalid("epsilons", "at least one value is required"));
        }
        for (i, &e) in self.epsilons.iter().enumerate() {
            positive(&format!("epsilons[{i}]"), e)?;
            if i > 0 {
                let prev = self.epsilons[i - 1];
                if e == prev {
                    return Err(invalid(format!("epsilons[{i}]"), format!("duplicate value {e}")));
                }
                if e > prev {
                    return Err(invalid(
                        format!("epsilons[{i}]"),
                        format!("values must be strictly decreasing ({e} follows {prev})"),
                    ));
                }
            }
        }
        positive("horizon", self.horizon)?;
        match self.dt_rule {
            DtRule::Fixed(dt) => positive("dt_rule.fixed", dt)?,
            DtRule::ProportionalToEpsilon(f) => positive("dt_rule.proportional_to_epsilon", f)?,
        }
        positive("qg_dt", self.qg_dt)?;
        if !(self.hyperdiffusion.is_finite() && self.hyperdiffusion >= 0.0) {
            return Err(invalid("hyperdiffusion", "must be non-negative and finite"));
        }
        positive("samples_per_unit_time", self.samples_per_unit_time)?;
        if let Some(s) = self.snapshot_interval {
            positive("snapshot_interval", s)?;
        }
        if self.workers == Some(0) {
            return Err(invalid("workers", "must be at least 1"));
        }
        self.validate_data()?;
        self.validate_probe()
    }

    fn validate_data(&self) -> Result<(), ConfigError> {
        let d = &self.initial_data;
        let cutoff = self.grid.n as i64 / 3;
        let explicit = d.preset == Preset::Explicit;
        let lists: [(&str, bool); 4] = [
            ("q", !d.q.is_empty()),
            ("s_extra", !d.s_extra.is_empty()),
            ("phi0", !d.phi0.is_empty()),
            ("phi0_bumps", !d.phi0_bumps.is_empty()),
        ];
        for (name, present) in lists {
            if present && !explicit {
                return Err(invalid(
                    format!("initial_data.{name}"),
                    "mode lists require preset \"explicit\"",
                ));
            }
        }
        if d.preset != Preset::Random {
            if d.random_modes.is_some() {
                return Err(invalid("initial_data.random_modes", "requires preset \"random\""));
            }
            if d.random_amplitude.is_some() {
                return Err(invalid("initial_data.random_amplitude", "requires preset \"random\""));
            }
        }
        if let Some(0) = d.random_modes {
            return Err(invalid("initial_data.random_modes", "must be at least 1"));
        }
        if let Some(a) = d.random_amplitude {
            positive("initial_data.random_amplitude", a)?;
        }
        check_modes("initial_data.q", &d.q, cutoff)?;
        check_modes("initial_data.s_extra", &d.s_extra, cutoff)?;
        check_modes("initial_data.phi0", &d.phi0, cutoff)?;
        for (i, b) in d.phi0_bumps.iter().enumerate() {
            positive(&format!("initial_data.phi0_bumps[{i}].width"), b.width)?;
            if !(b.amplitude.is_finite() && b.center.iter().all(|c| c.is_finite())) {
                return Err(invalid(format!("initial_data.phi0_bumps[{i}]"), "must be finite"));
            }
        }
        Ok(())
    }

    fn validate_probe(&self) -> Result<(), ConfigError> {
        let p = &self.probe;
        if p.taus.is_empty() {
            return Err(invalid("probe.taus", "at least one value is required"));
        }
        for (i, &t) in p.taus.iter().enumerate() {
            if !(t.is_finite() && t >= 0.0) {
                return Err(invalid(format!("probe.taus[{i}]"), "must be non-negative and finite"));
            }
        }
        positive("probe.amplitude", p.amplitude.abs())?;
        positive("probe.width", p.width)?;
        if !(2..=64).contains(&p.points) {
            return Err(invalid("probe.points", "must lie between 2 and 64"));
        }
        positive("probe.tolerance", p.tolerance)
    }

    /// Number of records over the horizon, excluding `t = 0`.
    pub fn sample_count(&self) -> usize {
        (self.horizon * self.samples_per_unit_time).ceil().max(1.0) as usize
    }

    pub fn sample_interval(&self) -> f64 {
        self.horizon / self.sample_count() as f64
    }

    /// Everything that must agree between runs compared across ε.
    pub fn fingerprint(&self) -> String {
        let mut c = self.clone();
        c.epsilons.clear();
        c.output_dir = PathBuf::new();
        c.workers = None;
        serde_json::to_string(&c).expect("config serialises")
    }
}
