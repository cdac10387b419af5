//! `key = value` configuration files.
//!
//! Blank lines and everything after `#` are ignored. Lists are comma
//! separated; a schedule is a comma-separated list of `t:s_l:s_r` triples.
//! Unknown keys, malformed values and parameter violations are all reported
//! together, each with its line number.
//!
//! ```text
//! # symmetric quench
//! zeta = 0.2
//! s_left = 40
//! s_right = 40
//! t_final = 20
//! ```

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use crate::protocols::RampSchedule;
use crate::units::SimulationParams;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigIssue {
    /// 1-based line, or 0 for problems not tied to a line.
    pub line: usize,
    pub key: String,
    pub message: String,
}

impl fmt::Display for ConfigIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(f, "line {}: {}: {}", self.line, self.key, self.message)
        } else {
            write!(f, "{}: {}", self.key, self.message)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub issues: Vec<ConfigIssue>,
}

impl ConfigError {
    pub fn mentions(&self, key: &str) -> bool {
        self.issues.iter().any(|i| i.key == key)
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.issues.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("; "))
    }
}

impl std::error::Error for ConfigError {}

/// Protocol knobs that are not physical parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolSettings {
    pub t_final: f64,
    pub t_ramp: f64,
    pub hold: f64,
    pub ramp_down: bool,
    pub tail: f64,
    pub sample_stride: usize,
    /// 0 disables spectra.
    pub spectrum_stride: usize,
    /// 0 disables wavefunction frames.
    pub frame_stride: usize,
    /// 0 means all available cores.
    pub workers: usize,
    pub s_values: Vec<f64>,
    pub resolution: f64,
    pub asym_values: Vec<f64>,
    pub total_values: Vec<f64>,
    pub gamma_values: Vec<f64>,
    pub scale_factors: Vec<f64>,
    pub s_over_sc_values: Vec<f64>,
    pub reference_ratio: f64,
}

impl Default for ProtocolSettings {
    fn default() -> Self {
        let s_values: Vec<f64> = (1..=20).map(|i| 2.0 * i as f64).collect();
        Self {
            t_final: 50.0,
            t_ramp: 20.0,
            hold: 30.0,
            ramp_down: false,
            tail: 10.0,
            sample_stride: 100,
            spectrum_stride: 0,
            frame_stride: 0,
            workers: 0,
            total_values: s_values.iter().map(|s| 2.0 * s).collect(),
            s_values,
            resolution: 0.5,
            asym_values: vec![0.0, 0.25, 0.5, 0.75, 1.0],
            gamma_values: vec![0.0, 0.001, 0.01],
            scale_factors: vec![1.0, 1.25, 1.5, 1.75, 2.0],
            s_over_sc_values: vec![0.5, 1.0, 2.0, 4.0],
            reference_ratio: 2.0,
        }
    }
}

/// A parsed configuration file.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Config {
    pub params: SimulationParams,
    pub protocol: ProtocolSettings,
    /// Explicit pump schedule for ramp runs; overrides the trapezoid keys.
    pub schedule: Option<RampSchedule>,
}

fn parse_f64(v: &str) -> Result<f64, String> {
    v.parse::<f64>().map_err(|_| format!("expected a number, got `{v}`"))
}

fn parse_usize(v: &str) -> Result<usize, String> {
    v.parse::<usize>().map_err(|_| format!("expected a non-negative integer, got `{v}`"))
}

fn parse_u64(v: &str) -> Result<u64, String> {
    v.parse::<u64>().map_err(|_| format!("expected a non-negative integer, got `{v}`"))
}

fn parse_bool(v: &str) -> Result<bool, String> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("expected true or false, got `{v}`")),
    }
}

fn parse_list(v: &str) -> Result<Vec<f64>, String> {
    if v.is_empty() {
        return Ok(Vec::new());
    }
    v.split(',').map(|s| parse_f64(s.trim())).collect()
}

fn parse_schedule(v: &str) -> Result<RampSchedule, String> {
    let mut points = Vec::new();
    for item in v.split(',') {
        let fields: Vec<&str> = item.trim().split(':').collect();
        if fields.len() != 3 {
            return Err(format!("expected t:s_l:s_r, got `{}`", item.trim()));
        }
        points.push((
            parse_f64(fields[0].trim())?,
            parse_f64(fields[1].trim())?,
            parse_f64(fields[2].trim())?,
        ));
    }
    RampSchedule::new(points).map_err(|e| e.to_string())
}

fn format_list(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(", ")
}

impl Config {
    /// Parses and validates `text`.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Config::default();
        let mut issues = Vec::new();
        let mut seen: HashMap<String, usize> = HashMap::new();
        for (index, raw) in text.lines().enumerate() {
            let line = index + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let Some((key, value)) = body.split_once('=') else {
                issues.push(ConfigIssue {
                    line,
                    key: body.to_string(),
                    message: "expected `key = value`".into(),
                });
                continue;
            };
            let key = key.trim();
            let value = value.trim();
            if let Some(first) = seen.insert(key.to_string(), line) {
                issues.push(ConfigIssue {
                    line,
                    key: key.to_string(),
                    message: format!("duplicate key (first set on line {first})"),
                });
                continue;
            }
            if let Err(message) = cfg.apply(key, value) {
                issues.push(ConfigIssue {
                    line,
                    key: key.to_string(),
                    message,
                });
            }
        }
        let report = cfg.params.validate();
        for v in &report.violations {
            issues.push(ConfigIssue {
                line: seen.get(v.key).copied().unwrap_or(0),
                key: v.key.to_string(),
                message: v.message.clone(),
            });
        }
        if issues.is_empty() {
            Ok(cfg)
        } else {
            issues.sort_by_key(|i| i.line);
            Err(ConfigError { issues })
        }
    }

    pub fn from_file(path: &Path) -> crate::Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(Self::parse(&text)?)
    }

    fn apply(&mut self, key: &str, v: &str) -> Result<(), String> {
        let p = &mut self.params;
        let q = &mut self.protocol;
        match key {
            "zeta" => p.zeta = parse_f64(v)?,
            "gcn" => p.gcn = parse_f64(v)?,
            "trap_length" => p.trap_length = parse_f64(v)?,
            "box_length" => p.box_length = parse_f64(v)?,
            "n_grid" => p.n_grid = parse_usize(v)?,
            "dt" => p.dt = parse_f64(v)?,
            "dtau" => p.dtau = parse_f64(v)?,
            "s_left" => p.s_left = parse_f64(v)?,
            "s_right" => p.s_right = parse_f64(v)?,
            "gamma" => p.gamma = parse_f64(v)?,
            "v_ext_height" => p.v_ext_height = parse_f64(v)?,
            "noise_amplitude" => p.noise_amplitude = parse_f64(v)?,
            "rng_seed" => p.rng_seed = parse_u64(v)?,
            "max_iters" => p.max_iters = parse_usize(v)?,
            "t_final" => q.t_final = parse_f64(v)?,
            "t_ramp" => q.t_ramp = parse_f64(v)?,
            "hold" => q.hold = parse_f64(v)?,
            "ramp_down" => q.ramp_down = parse_bool(v)?,
            "tail" => q.tail = parse_f64(v)?,
            "sample_stride" => q.sample_stride = parse_usize(v)?,
            "spectrum_stride" => q.spectrum_stride = parse_usize(v)?,
            "frame_stride" => q.frame_stride = parse_usize(v)?,
            "workers" => q.workers = parse_usize(v)?,
            "s_values" => q.s_values = parse_list(v)?,
            "resolution" => q.resolution = parse_f64(v)?,
            "asym_values" => q.asym_values = parse_list(v)?,
            "total_values" => q.total_values = parse_list(v)?,
            "gamma_values" => q.gamma_values = parse_list(v)?,
            "scale_factors" => q.scale_factors = parse_list(v)?,
            "s_over_sc_values" => q.s_over_sc_values = parse_list(v)?,
            "reference_ratio" => q.reference_ratio = parse_f64(v)?,
            "schedule" => self.schedule = Some(parse_schedule(v)?),
            _ => return Err("unknown key".into()),
        }
        Ok(())
    }

    /// Text form that parses back to an equal configuration.
    pub fn to_text(&self) -> String {
        let p = &self.params;
        let q = &self.protocol;
        let mut lines = vec![
            format!("zeta = {:?}", p.zeta),
            format!("gcn = {:?}", p.gcn),
            format!("trap_length = {:?}", p.trap_length),
            format!("box_length = {:?}", p.box_length),
            format!("n_grid = {}", p.n_grid),
            format!("dt = {:?}", p.dt),
            format!("dtau = {:?}", p.dtau),
            format!("s_left = {:?}", p.s_left),
            format!("s_right = {:?}", p.s_right),
            format!("gamma = {:?}", p.gamma),
            format!("v_ext_height = {:?}", p.v_ext_height),
            format!("noise_amplitude = {:?}", p.noise_amplitude),
            format!("rng_seed = {}", p.rng_seed),
            format!("max_iters = {}", p.max_iters),
            format!("t_final = {:?}", q.t_final),
            format!("t_ramp = {:?}", q.t_ramp),
            format!("hold = {:?}", q.hold),
            format!("ramp_down = {}", q.ramp_down),
            format!("tail = {:?}", q.tail),
            format!("sample_stride = {}", q.sample_stride),
            format!("spectrum_stride = {}", q.spectrum_stride),
            format!("frame_stride = {}", q.frame_stride),
            format!("workers = {}", q.workers),
            format!("s_values = {}", format_list(&q.s_values)),
            format!("resolution = {:?}", q.resolution),
            format!("asym_values = {}", format_list(&q.asym_values)),
            format!("total_values = {}", format_list(&q.total_values)),
            format!("gamma_values = {}", format_list(&q.gamma_values)),
            format!("scale_factors = {}", format_list(&q.scale_factors)),
            format!("s_over_sc_values = {}", format_list(&q.s_over_sc_values)),
            format!("reference_ratio = {:?}", q.reference_ratio),
        ];
        if let Some(s) = &self.schedule {
            let items: Vec<String> = s
                .breakpoints()
                .iter()
                .map(|(t, l, r)| format!("{t:?}:{l:?}:{r:?}"))
                .collect();
            lines.push(format!("schedule = {}", items.join(", ")));
        }
        lines.join("\n") + "\n"
    }
}
