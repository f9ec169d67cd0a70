//! Flat key-value run configuration.
//!
//! The file format is one `key = value` pair per line; `#` starts a comment
//! and blank lines are ignored. Keys: `l`, `d`, `m_l`, `m_b`, `g`,
//! `criterion`, `xi_min_deg`, `xi_max_deg`, `steps`, `out`, `format`.
//! Unknown keys are rejected; a repeated key keeps its last value.
//! Command-line flags override file values. `parse(emit(config))` returns
//! `config` exactly.

use fourbar::{Criterion, ModelParams};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Svg,
    Both,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Svg => "svg",
            OutputFormat::Both => "both",
        })
    }
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "svg" => Ok(OutputFormat::Svg),
            "both" => Ok(OutputFormat::Both),
            other => Err(format!("unknown format `{other}` (expected csv, svg, or both)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub l: f64,
    pub d: f64,
    pub m_l: f64,
    pub m_b: f64,
    pub g: f64,
    pub criterion: Criterion,
    pub xi_min_deg: f64,
    pub xi_max_deg: f64,
    pub steps: usize,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            l: 1.0,
            d: 0.2,
            m_l: 1.0,
            m_b: 2.0,
            g: 9.81,
            criterion: Criterion::MinWrenchNorm,
            xi_min_deg: 70.0,
            xi_max_deg: 110.0,
            steps: 401,
            out: None,
            format: OutputFormat::Csv,
        }
    }
}

/// Unset command-line overrides; every `Some` wins over the file value.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub l: Option<f64>,
    pub d: Option<f64>,
    pub m_l: Option<f64>,
    pub m_b: Option<f64>,
    pub g: Option<f64>,
    pub criterion: Option<String>,
    pub xi_min_deg: Option<f64>,
    pub xi_max_deg: Option<f64>,
    pub steps: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
}

impl RunConfig {
    /// Parse the flat key-value text format.
    pub fn parse(text: &str) -> Result<RunConfig, String> {
        let mut cfg = RunConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected `key = value`, got `{line}`", lineno + 1))?;
            let key = key.trim();
            let value = value.trim();
            let bad = |what: &str| format!("line {}: invalid {what} `{value}`", lineno + 1);
            match key {
                "l" => cfg.l = value.parse().map_err(|_| bad("number"))?,
                "d" => cfg.d = value.parse().map_err(|_| bad("number"))?,
                "m_l" => cfg.m_l = value.parse().map_err(|_| bad("number"))?,
                "m_b" => cfg.m_b = value.parse().map_err(|_| bad("number"))?,
                "g" => cfg.g = value.parse().map_err(|_| bad("number"))?,
                "criterion" => cfg.criterion = value.parse()?,
                "xi_min_deg" => cfg.xi_min_deg = value.parse().map_err(|_| bad("number"))?,
                "xi_max_deg" => cfg.xi_max_deg = value.parse().map_err(|_| bad("number"))?,
                "steps" => cfg.steps = value.parse().map_err(|_| bad("step count"))?,
                "out" => cfg.out = Some(PathBuf::from(value)),
                "format" => cfg.format = value.parse()?,
                other => return Err(format!("line {}: unknown key `{other}`", lineno + 1)),
            }
        }
        Ok(cfg)
    }

    /// Emit the configuration in the same format `parse` reads. Floats use
    /// the shortest representation that round-trips, so
    /// `parse(emit(config)) == config` exactly.
    #[cfg(test)]
    pub fn emit(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("l = {:?}\n", self.l));
        s.push_str(&format!("d = {:?}\n", self.d));
        s.push_str(&format!("m_l = {:?}\n", self.m_l));
        s.push_str(&format!("m_b = {:?}\n", self.m_b));
        s.push_str(&format!("g = {:?}\n", self.g));
        s.push_str(&format!("criterion = {}\n", self.criterion));
        s.push_str(&format!("xi_min_deg = {:?}\n", self.xi_min_deg));
        s.push_str(&format!("xi_max_deg = {:?}\n", self.xi_max_deg));
        s.push_str(&format!("steps = {}\n", self.steps));
        if let Some(out) = &self.out {
            s.push_str(&format!("out = {}\n", out.display()));
        }
        s.push_str(&format!("format = {}\n", self.format));
        s
    }

    /// Apply command-line overrides on top of this configuration.
    pub fn apply(&mut self, ov: &Overrides) -> Result<(), String> {
        if let Some(v) = ov.l {
            self.l = v;
        }
        if let Some(v) = ov.d {
            self.d = v;
        }
        if let Some(v) = ov.m_l {
            self.m_l = v;
        }
        if let Some(v) = ov.m_b {
            self.m_b = v;
        }
        if let Some(v) = ov.g {
            self.g = v;
        }
        if let Some(v) = &ov.criterion {
            self.criterion = v.parse()?;
        }
        if let Some(v) = ov.xi_min_deg {
            self.xi_min_deg = v;
        }
        if let Some(v) = ov.xi_max_deg {
            self.xi_max_deg = v;
        }
        if let Some(v) = ov.steps {
            self.steps = v;
        }
        if let Some(v) = &ov.out {
            self.out = Some(v.clone());
        }
        if let Some(v) = &ov.format {
            self.format = v.parse()?;
        }
        Ok(())
    }

    /// Validated mechanism parameters.
    pub fn model_params(&self) -> Result<ModelParams, String> {
        ModelParams::new(self.l, self.d, self.m_l, self.m_b, self.g).map_err(|e| e.to_string())
    }

    /// The sweep grid in degrees and radians. The grid is built in degrees
    /// so the degree column of the output is exact at the end points.
    pub fn grid(&self) -> Result<(Vec<f64>, Vec<f64>), String> {
        if self.steps < 2 {
            return Err(format!("steps = {} (need at least 2)", self.steps));
        }
        if !(self.xi_min_deg > 0.0 && self.xi_min_deg < self.xi_max_deg && self.xi_max_deg < 180.0)
        {
            return Err(format!(
                "sweep range [{}, {}] deg must satisfy 0 < min < max < 180",
                self.xi_min_deg, self.xi_max_deg
            ));
        }
        let n = self.steps;
        let degs: Vec<f64> = (0..n)
            .map(|i| {
                self.xi_min_deg + (self.xi_max_deg - self.xi_min_deg) * i as f64 / (n - 1) as f64
            })
            .collect();
        let rads = degs.iter().map(|d| d.to_radians()).collect();
        Ok((degs, rads))
    }
}
