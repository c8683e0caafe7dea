//! Flat `key = value` run configuration.

use std::fmt;
use std::path::PathBuf;

use qdot_turnstile::scheme::{classify_scheme, DotParameters, HalfInt, LevelScheme, Symmetry};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: unknown key `{key}` (did you mean `{suggestion}`?)")]
    UnknownKey {
        line: usize,
        key: String,
        suggestion: &'static str,
    },
    #[error("line {line}: malformed value `{value}` for `{key}`: {expected}")]
    Malformed {
        line: usize,
        key: String,
        value: String,
        expected: &'static str,
    },
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: `{key}` is set twice")]
    Duplicate { line: usize, key: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepScale {
    Linear,
    Log,
}

/// Grid over `γ/Γ` for the cascade and entanglement tables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
    pub scale: SweepScale,
}

impl Sweep {
    pub fn points(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                let f = i as f64 / last;
                match self.scale {
                    SweepScale::Linear => self.min + (self.max - self.min) * f,
                    SweepScale::Log => {
                        let (a, b) = (self.min.log10(), self.max.log10());
                        10f64.powf(a + (b - a) * f)
                    }
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub dot: DotParameters,
    pub m_e: HalfInt,
    pub m_h: HalfInt,
    pub spin_orbit: bool,
    pub symmetry: Symmetry,
    pub sweep: Sweep,
    pub out: PathBuf,
    pub seed: u64,
    pub trajectories: usize,
    /// Exciton splittings in units of `Γ`.
    pub delta_values: Vec<f64>,
    /// Cavity azimuth.
    pub phi: f64,
    pub theta_steps: usize,
    pub spectrum_points: usize,
    /// Bias offsets in units of `k_B T`; the gate series uses the smallest one.
    pub bias_offsets: Vec<f64>,
    /// Gate offsets in units of `k_B T`.
    pub gate_offsets: Vec<f64>,
    /// Factor applied to every energy written to the spectrum tables.
    pub unit_scale: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            dot: DotParameters::default(),
            m_e: HalfInt::HALF,
            m_h: HalfInt::THREE_HALVES,
            spin_orbit: true,
            symmetry: Symmetry::Axial,
            sweep: Sweep {
                min: 1e-2,
                max: 1e2,
                steps: 41,
                scale: SweepScale::Log,
            },
            out: PathBuf::from("out"),
            seed: 1,
            trajectories: 100_000,
            delta_values: vec![0.0, 0.2, 0.4],
            phi: std::f64::consts::FRAC_PI_4,
            theta_steps: 50,
            spectrum_points: 801,
            bias_offsets: vec![6.0, 4.0, 2.0],
            gate_offsets: vec![-1.0, 0.0, 1.0],
            unit_scale: 1.0,
        }
    }
}

pub const KEYS: [&str; 32] = [
    "E_e",
    "E_h",
    "V_ee",
    "V_hh",
    "V_eh_s",
    "V_eh_a",
    "V_x1",
    "V_x2",
    "Gamma",
    "Gamma_2",
    "gamma",
    "T",
    "V_bias",
    "Phi_gate",
    "m_e",
    "m_h",
    "spin_orbit",
    "symmetry",
    "sweep_min",
    "sweep_max",
    "sweep_steps",
    "sweep_scale",
    "out",
    "seed",
    "trajectories",
    "Delta_values",
    "phi",
    "theta_steps",
    "spectrum_points",
    "bias_offsets",
    "gate_offsets",
    "unit_scale",
];

fn nearest_key(key: &str) -> &'static str {
    KEYS.iter()
        .copied()
        .min_by_key(|k| strsim::levenshtein(&k.to_lowercase(), &key.to_lowercase()))
        .unwrap_or(KEYS[0])
}

struct Entry<'a> {
    line: usize,
    key: &'a str,
    value: &'a str,
}

impl Entry<'_> {
    fn malformed(&self, expected: &'static str) -> ConfigError {
        ConfigError::Malformed {
            line: self.line,
            key: self.key.to_string(),
            value: self.value.to_string(),
            expected,
        }
    }

    fn number(&self) -> Result<f64, ConfigError> {
        match self.value.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(x),
            _ => Err(self.malformed("a finite number")),
        }
    }

    fn count(&self) -> Result<usize, ConfigError> {
        self.value.parse().map_err(|_| self.malformed("a non-negative integer"))
    }

    fn list(&self) -> Result<Vec<f64>, ConfigError> {
        self.value
            .split(',')
            .map(|s| match s.trim().parse::<f64>() {
                Ok(x) if x.is_finite() => Ok(x),
                _ => Err(self.malformed("a comma-separated list of numbers")),
            })
            .collect()
    }

    fn half_int(&self) -> Result<HalfInt, ConfigError> {
        let v = match self.value.split_once('/') {
            Some((n, d)) => match (n.trim().parse::<f64>(), d.trim().parse::<f64>()) {
                (Ok(n), Ok(d)) if d != 0.0 => Some(n / d),
                _ => None,
            },
            None => self.value.parse::<f64>().ok(),
        };
        v.and_then(HalfInt::from_f64)
            .ok_or_else(|| self.malformed("a positive half-integer such as 1/2 or 1.5"))
    }

    fn boolean(&self) -> Result<bool, ConfigError> {
        match self.value.to_ascii_lowercase().as_str() {
            "true" | "yes" | "1" => Ok(true),
            "false" | "no" | "0" => Ok(false),
            _ => Err(self.malformed("true or false")),
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::default();
        let mut seen: Vec<&str> = Vec::new();
        let mut bias_set = false;
        let mut gate_set = false;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (key, value) = body.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line,
                text: body.to_string(),
            })?;
            let e = Entry {
                line,
                key: key.trim(),
                value: value.trim(),
            };
            if !KEYS.contains(&e.key) {
                return Err(ConfigError::UnknownKey {
                    line,
                    key: e.key.to_string(),
                    suggestion: nearest_key(e.key),
                });
            }
            if seen.contains(&e.key) {
                return Err(ConfigError::Duplicate {
                    line,
                    key: e.key.to_string(),
                });
            }
            seen.push(e.key);
            let d = &mut cfg.dot;
            match e.key {
                "E_e" => d.e_e = e.number()?,
                "E_h" => d.e_h = e.number()?,
                "V_ee" => d.v_ee = e.number()?,
                "V_hh" => d.v_hh = e.number()?,
                "V_eh_s" => d.v_eh_s = e.number()?,
                "V_eh_a" => d.v_eh_a = e.number()?,
                "V_x1" => d.v_x1 = e.number()?,
                "V_x2" => d.v_x2 = e.number()?,
                "Gamma" => d.rad_rate = e.number()?,
                "Gamma_2" => d.rad_rate_2 = e.number()?,
                "gamma" => d.tunnel_rate = e.number()?,
                "T" => d.kt = e.number()?,
                "V_bias" => {
                    d.bias = e.number()?;
                    bias_set = true;
                }
                "Phi_gate" => {
                    d.gate = e.number()?;
                    gate_set = true;
                }
                "m_e" => cfg.m_e = e.half_int()?,
                "m_h" => cfg.m_h = e.half_int()?,
                "spin_orbit" => cfg.spin_orbit = e.boolean()?,
                "symmetry" => {
                    cfg.symmetry = match e.value.to_ascii_lowercase().as_str() {
                        "axial" => Symmetry::Axial,
                        "none" => Symmetry::None,
                        _ => return Err(e.malformed("axial or none")),
                    }
                }
                "sweep_min" => cfg.sweep.min = e.number()?,
                "sweep_max" => cfg.sweep.max = e.number()?,
                "sweep_steps" => cfg.sweep.steps = e.count()?,
                "sweep_scale" => {
                    cfg.sweep.scale = match e.value.to_ascii_lowercase().as_str() {
                        "log" => SweepScale::Log,
                        "linear" => SweepScale::Linear,
                        _ => return Err(e.malformed("log or linear")),
                    }
                }
                "out" => cfg.out = PathBuf::from(e.value),
                "seed" => cfg.seed = e.value.parse().map_err(|_| e.malformed("a non-negative integer"))?,
                "trajectories" => cfg.trajectories = e.count()?,
                "Delta_values" => cfg.delta_values = e.list()?,
                "phi" => cfg.phi = e.number()?,
                "theta_steps" => cfg.theta_steps = e.count()?,
                "spectrum_points" => cfg.spectrum_points = e.count()?,
                "bias_offsets" => cfg.bias_offsets = e.list()?,
                "gate_offsets" => cfg.gate_offsets = e.list()?,
                "unit_scale" => cfg.unit_scale = e.number()?,
                _ => unreachable!("key list and match arms differ"),
            }
        }
        // unset voltages default to the resonance of the configured levels
        if !bias_set {
            cfg.dot.bias = cfg.dot.e_e + cfg.dot.e_h;
        }
        if !gate_set {
            cfg.dot.gate = 0.5 * (cfg.dot.e_e - cfg.dot.e_h);
        }
        cfg.check()?;
        Ok(cfg)
    }

    pub fn check(&self) -> Result<(), ConfigError> {
        let s = &self.sweep;
        if !(s.min < s.max) {
            return Err(ConfigError::Invalid(format!("sweep_min ({}) must be below sweep_max ({})", s.min, s.max)));
        }
        if s.steps < 2 {
            return Err(ConfigError::Invalid(format!("sweep_steps must be at least 2, got {}", s.steps)));
        }
        if s.scale == SweepScale::Log && s.min <= 0.0 {
            return Err(ConfigError::Invalid("a log sweep needs sweep_min > 0".into()));
        }
        if s.min < 0.0 {
            return Err(ConfigError::Invalid("tunneling rates in the sweep must be non-negative".into()));
        }
        if self.theta_steps < 2 || self.spectrum_points < 2 {
            return Err(ConfigError::Invalid("theta_steps and spectrum_points must be at least 2".into()));
        }
        if self.trajectories == 0 {
            return Err(ConfigError::Invalid("trajectories must be positive".into()));
        }
        if !(self.unit_scale > 0.0) {
            return Err(ConfigError::Invalid("unit_scale must be positive".into()));
        }
        if self.delta_values.iter().any(|&d| d < 0.0) {
            return Err(ConfigError::Invalid("Delta_values must be non-negative".into()));
        }
        self.dot.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(())
    }

    pub fn scheme(&self) -> LevelScheme {
        classify_scheme(self.m_e, self.m_h, self.spin_orbit, self.symmetry)
    }

    pub fn with_gamma(&self, gamma_over_rad: f64) -> DotParameters {
        DotParameters {
            tunnel_rate: gamma_over_rad * self.dot.rad_rate,
            ..self.dot
        }
    }
}

impl fmt::Display for SweepScale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepScale::Linear => "linear",
            SweepScale::Log => "log",
        })
    }
}
