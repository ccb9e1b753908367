//! Run parameters: defaults, then an optional `key=value` file, then flags.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    Rotation,
    Constant,
}

impl FromStr for Generator {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rotation" => Ok(Generator::Rotation),
            "constant" => Ok(Generator::Constant),
            _ => bail!("unknown generator {s:?}; expected rotation or constant"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub out: PathBuf,
    pub steps: usize,
    pub dt: f64,
    pub damping: f64,
    pub decoder: String,
    pub seed: u64,
    pub window: usize,
    pub bins: usize,
    pub generator: Option<Generator>,
    pub input: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            out: PathBuf::from("."),
            steps: 1000,
            dt: 0.1,
            damping: 0.05,
            decoder: "peaked".into(),
            seed: 0,
            window: 1,
            bins: 10,
            generator: None,
            input: None,
        }
    }
}

/// Flag values; `None` leaves the file or default value in place.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub steps: Option<usize>,
    pub dt: Option<f64>,
    pub damping: Option<f64>,
    pub decoder: Option<String>,
    pub seed: Option<u64>,
    pub window: Option<usize>,
    pub bins: Option<usize>,
    pub generator: Option<Generator>,
    pub input: Option<PathBuf>,
}

fn parse_value<T: FromStr>(key: &str, value: &str, line: usize) -> Result<T> {
    value.parse().map_err(|_| anyhow!("config line {line}: bad value {value:?} for {key}"))
}

impl RunConfig {
    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_file_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("config line {line_no}: expected key=value"))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "out" => self.out = PathBuf::from(value),
                "steps" => self.steps = parse_value(key, value, line_no)?,
                "dt" => self.dt = parse_value(key, value, line_no)?,
                "damping" => self.damping = parse_value(key, value, line_no)?,
                "decoder" => self.decoder = value.to_string(),
                "seed" => self.seed = parse_value(key, value, line_no)?,
                "window" => self.window = parse_value(key, value, line_no)?,
                "bins" => self.bins = parse_value(key, value, line_no)?,
                "generator" => {
                    self.generator = Some(value.parse().with_context(|| format!("config line {line_no}"))?)
                }
                "input" => self.input = Some(PathBuf::from(value)),
                _ => bail!("config line {line_no}: unknown key {key:?}"),
            }
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        self.apply_file_text(&text).with_context(|| format!("in config {}", path.display()))
    }

    pub fn apply_overrides(&mut self, o: Overrides) {
        macro_rules! take {
            ($($field:ident),*) => { $( if let Some(v) = o.$field { self.$field = v; } )* };
        }
        take!(out, steps, dt, damping, decoder, seed, window, bins);
        if o.generator.is_some() {
            self.generator = o.generator;
        }
        if o.input.is_some() {
            self.input = o.input;
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            bail!("dt must be positive, got {}", self.dt);
        }
        if self.steps == 0 {
            bail!("steps must be at least 1");
        }
        if !(self.damping >= 0.0) || !self.damping.is_finite() {
            bail!("damping must be >= 0, got {}", self.damping);
        }
        if self.window == 0 {
            bail!("window must be at least 1");
        }
        if self.bins < 3 {
            bail!("bins must be at least 3, got {}", self.bins);
        }
        Ok(())
    }
}
