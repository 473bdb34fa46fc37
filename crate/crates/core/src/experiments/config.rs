use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::DEFAULT_MAX_REDRAWS;
use crate::par::Execution;

/// Clustering methods compared in a sweep. The derived order is the
/// alphabetical order of their names, which output rows follow.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    CpqrDet,
    CpqrRand,
    CpqrSeededKmeans,
    KmeansPp,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::CpqrDet, Method::CpqrRand, Method::CpqrSeededKmeans, Method::KmeansPp];

    pub fn name(self) -> &'static str {
        match self {
            Method::CpqrDet => "cpqr-det",
            Method::CpqrRand => "cpqr-rand",
            Method::CpqrSeededKmeans => "cpqr-seeded-kmeans",
            Method::KmeansPp => "kmeans-pp",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Method::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| Error::invalid(format!("unknown method {s:?}")))
    }
}

/// Which matrix supplies the eigenvectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MatrixKind {
    Adjacency,
    Normalized,
}

impl MatrixKind {
    pub fn name(self) -> &'static str {
        match self {
            MatrixKind::Adjacency => "adjacency",
            MatrixKind::Normalized => "normalized",
        }
    }
}

impl FromStr for MatrixKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "adjacency" => Ok(MatrixKind::Adjacency),
            "normalized" => Ok(MatrixKind::Normalized),
            _ => Err(Error::invalid(format!("unknown matrix {s:?}"))),
        }
    }
}

/// `steps` evenly spaced values from `min` to `max` inclusive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridRange {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl GridRange {
    pub fn new(min: f64, max: f64, steps: usize) -> Self {
        Self { min, max, steps }
    }

    pub fn value(&self, i: usize) -> f64 {
        if self.steps <= 1 {
            self.min
        } else {
            self.min + (self.max - self.min) * i as f64 / (self.steps - 1) as f64
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.steps).map(|i| self.value(i)).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseGridConfig {
    pub cluster_sizes: Vec<usize>,
    pub alpha_range: GridRange,
    pub beta_range: GridRange,
    pub trials_per_cell: usize,
    pub methods: Vec<Method>,
    pub matrix: MatrixKind,
    pub gamma: f64,
    pub delta: f64,
    pub master_seed: u64,
    /// The `m` in `p = α ln(m)/m`.
    pub size_scale_node: usize,
    pub max_redraws: usize,
    /// Record wall-clock time per method. Off by default so outputs are
    /// reproducible byte for byte.
    pub timing: bool,
    pub execution: Execution,
}

/// Named starting configurations. Each `α` range stops just below
/// `m / ln m`, the largest value that keeps `p <= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    /// Five clusters of 100, 20 × 20 grid, 20 trials.
    Desk,
    /// Nine clusters of 150, 80 × 40 grid, 50 trials.
    PaperEquisized,
    /// Seven clusters of 70 to 130 nodes, scaled at `m = 70`.
    Unequisized,
}

impl FromStr for Preset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "desk" => Ok(Preset::Desk),
            "paper_equisized" => Ok(Preset::PaperEquisized),
            "unequisized" => Ok(Preset::Unequisized),
            _ => Err(Error::invalid(format!("unknown preset {s:?}"))),
        }
    }
}

impl PhaseGridConfig {
    pub fn preset(preset: Preset) -> Self {
        let base = PhaseGridConfig {
            cluster_sizes: vec![100; 5],
            alpha_range: GridRange::new(0.5, 21.5, 20),
            beta_range: GridRange::new(0.25, 5.0, 20),
            trials_per_cell: 20,
            methods: Method::ALL.to_vec(),
            matrix: MatrixKind::Adjacency,
            gamma: 5.0,
            delta: 0.1,
            master_seed: 20_170_424,
            size_scale_node: 100,
            max_redraws: DEFAULT_MAX_REDRAWS,
            timing: false,
            execution: Execution::default(),
        };
        match preset {
            Preset::Desk => base,
            Preset::PaperEquisized => PhaseGridConfig {
                cluster_sizes: vec![150; 9],
                alpha_range: GridRange::new(0.5, 29.5, 80),
                beta_range: GridRange::new(0.25, 8.0, 40),
                trials_per_cell: 50,
                size_scale_node: 150,
                ..base
            },
            Preset::Unequisized => PhaseGridConfig {
                cluster_sizes: vec![70, 80, 90, 100, 110, 120, 130],
                alpha_range: GridRange::new(0.5, 16.0, 20),
                size_scale_node: 70,
                ..base
            },
        }
    }

    pub fn k(&self) -> usize {
        self.cluster_sizes.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.cluster_sizes.len() < 2 || self.cluster_sizes.contains(&0) {
            return Err(Error::invalid("need at least two non-empty clusters"));
        }
        for (name, r) in [("alpha_range", &self.alpha_range), ("beta_range", &self.beta_range)] {
            if r.steps == 0 || !r.min.is_finite() || !r.max.is_finite() || r.min > r.max || r.min < 0.0 {
                return Err(Error::invalid(format!("{name} must satisfy 0 <= min <= max and steps >= 1")));
            }
        }
        if self.trials_per_cell == 0 {
            return Err(Error::invalid("trials_per_cell must be at least 1"));
        }
        if self.methods.is_empty() {
            return Err(Error::invalid("methods must not be empty"));
        }
        let mut seen = self.methods.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.methods.len() {
            return Err(Error::invalid("methods are listed twice"));
        }
        if !(self.gamma > 0.0) || !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::invalid("need gamma > 0 and 0 < delta < 1"));
        }
        if self.size_scale_node < 2 {
            return Err(Error::invalid("size_scale_node must be at least 2"));
        }
        Ok(())
    }

    /// Reads `key = value` lines. `#` starts a comment; lists are comma
    /// separated and ranges are `min, max, steps`. Keys not given keep the
    /// value from `preset` (default `desk`), wherever that key appears.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        let mut preset = Preset::Desk;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Parse { line: lineno + 1, message: format!("expected key = value, got {line:?}") });
            };
            let (key, value) = (key.trim(), value.trim());
            if key == "preset" {
                preset = value.parse().map_err(|e: Error| at(lineno, e))?;
            } else {
                entries.push((lineno, key.to_string(), value.to_string()));
            }
        }
        let mut config = Self::preset(preset);
        for (lineno, key, value) in entries {
            config.set(&key, &value).map_err(|e| at(lineno, e))?;
        }
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "cluster_sizes" => self.cluster_sizes = list(value)?,
            "alpha_range" => self.alpha_range = range(value)?,
            "beta_range" => self.beta_range = range(value)?,
            "trials_per_cell" => self.trials_per_cell = scalar(value)?,
            "methods" => self.methods = list(value)?,
            "matrix" => self.matrix = value.parse()?,
            "gamma" => self.gamma = scalar(value)?,
            "delta" => self.delta = scalar(value)?,
            "master_seed" => self.master_seed = scalar(value)?,
            "size_scale_node" => self.size_scale_node = scalar(value)?,
            "max_redraws" => self.max_redraws = scalar(value)?,
            "timing" => self.timing = scalar(value)?,
            _ => return Err(Error::invalid(format!("unknown key {key:?}"))),
        }
        Ok(())
    }
}

fn at(lineno: usize, e: Error) -> Error {
    match e {
        Error::Parse { .. } => e,
        other => Error::Parse { line: lineno + 1, message: other.to_string() },
    }
}

fn scalar<T: FromStr>(value: &str) -> Result<T> {
    value.trim().parse().map_err(|_| Error::invalid(format!("cannot parse {value:?}")))
}

fn list<T: FromStr>(value: &str) -> Result<Vec<T>> {
    value.split(',').map(scalar).collect()
}

fn range(value: &str) -> Result<GridRange> {
    let parts: Vec<&str> = value.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::invalid(format!("range needs min, max, steps; got {value:?}")));
    }
    Ok(GridRange::new(scalar(parts[0])?, scalar(parts[1])?, scalar(parts[2])?))
}
