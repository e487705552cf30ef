//! Run configuration: flags merged over an optional `key=value` file.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::Parser;
use modal_core::{H2Mode, Integrator, QuadratureRule};

use crate::error::{read_text, HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Gamma2d,
    Gamma3d,
    Crosscheck,
    Convergence,
    Bench,
}

impl Mode {
    pub fn id(&self) -> &'static str {
        match self {
            Mode::Gamma2d => "gamma2d",
            Mode::Gamma3d => "gamma3d",
            Mode::Crosscheck => "crosscheck",
            Mode::Convergence => "convergence",
            Mode::Bench => "bench",
        }
    }
}

impl FromStr for Mode {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        [Mode::Gamma2d, Mode::Gamma3d, Mode::Crosscheck, Mode::Convergence, Mode::Bench]
            .into_iter()
            .find(|m| m.id() == s)
            .ok_or_else(|| HarnessError::Config(format!("unknown mode `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Bin,
}

impl OutputFormat {
    pub fn id(&self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Bin => "bin",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "bin" => Ok(OutputFormat::Bin),
            other => Err(HarnessError::Config(format!("unknown output format `{other}`"))),
        }
    }
}

/// Where the mode mapping comes from.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum MappingSource {
    #[default]
    Default,
    File(PathBuf),
}

impl fmt::Display for MappingSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MappingSource::Default => f.write_str("default"),
            MappingSource::File(p) => write!(f, "{}", p.display()),
        }
    }
}

/// Command-line flags. Every flag may also be given as `key=value` in the
/// file passed to `--config`, with the key spelled as the long flag name.
#[derive(Debug, Clone, Default, Parser)]
#[command(name = "modal", version, about = "Compute and compare modal Γ' matrices")]
pub struct Cli {
    /// gamma2d, gamma3d, crosscheck, convergence or bench
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long)]
    pub lmin: Option<String>,
    #[arg(long)]
    pub lmax: Option<String>,
    #[arg(long)]
    pub pmax: Option<String>,
    /// `default` or a modalmap v1 file
    #[arg(long)]
    pub mapping: Option<String>,
    /// modalbasis v1 file replacing the synthetic basis
    #[arg(long)]
    pub basis: Option<String>,
    #[arg(long = "r-samples")]
    pub r_samples: Option<String>,
    /// trap, hermite or spline
    #[arg(long)]
    pub integrator: Option<String>,
    /// gosper or exact
    #[arg(long)]
    pub h2: Option<String>,
    #[arg(long = "mu-points")]
    pub mu_points: Option<String>,
    #[arg(long)]
    pub block: Option<String>,
    #[arg(long)]
    pub workers: Option<String>,
    #[arg(long)]
    pub out: Option<String>,
    /// csv or bin
    #[arg(long)]
    pub format: Option<String>,
    /// Cells timed on the naive paths in bench mode
    #[arg(long = "naive-cells")]
    pub naive_cells: Option<String>,
    #[arg(long)]
    pub repeats: Option<String>,
    /// Shift of the synthetic radial peak across the multipole range
    #[arg(long = "peak-drift")]
    pub peak_drift: Option<String>,
    /// key=value file; flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl Cli {
    fn pairs(&self) -> Vec<(&'static str, &Option<String>)> {
        vec![
            ("mode", &self.mode),
            ("lmin", &self.lmin),
            ("lmax", &self.lmax),
            ("pmax", &self.pmax),
            ("mapping", &self.mapping),
            ("basis", &self.basis),
            ("r-samples", &self.r_samples),
            ("integrator", &self.integrator),
            ("h2", &self.h2),
            ("mu-points", &self.mu_points),
            ("block", &self.block),
            ("workers", &self.workers),
            ("out", &self.out),
            ("format", &self.format),
            ("naive-cells", &self.naive_cells),
            ("repeats", &self.repeats),
            ("peak-drift", &self.peak_drift),
        ]
    }

    /// Reads the config file, if any, and overlays the flags.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut map = match &self.config {
            Some(path) => parse_config_file(&read_text(path)?)?,
            None => BTreeMap::new(),
        };
        for (key, value) in self.pairs() {
            if let Some(v) = value {
                map.insert(key.to_string(), v.clone());
            }
        }
        RunConfig::from_map(map)
    }
}

/// `key=value` lines; blank lines and `#` comments are skipped.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            HarnessError::Config(format!("config line {}: expected key=value", k + 1))
        })?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

pub const DEFAULT_L_MIN: usize = 2;
pub const DEFAULT_L_MAX: usize = 32;
pub const DEFAULT_P_MAX: usize = 4;
pub const DEFAULT_R_SAMPLES: usize = 216;
pub const DEFAULT_REPEATS: usize = 5;
pub const DEFAULT_NAIVE_CELLS: usize = 16;
/// Peak drift of the convergence study, one peak width. With no drift every
/// radial integral is the same profile integral times a late-time factor, so
/// integration error only rescales `Γ'` and vanishes under unit
/// normalisation.
pub const CONVERGENCE_PEAK_DRIFT: f64 = 150.0;
/// Largest accepted drift; keeps every peak inside the refined grid zone.
pub const MAX_PEAK_DRIFT: f64 = 450.0;

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub l_min: usize,
    pub l_max: usize,
    pub p_max: usize,
    pub mapping: MappingSource,
    pub basis: Option<PathBuf>,
    pub r_samples: usize,
    pub integrator: Integrator,
    pub h2: H2Mode,
    pub mu_points: usize,
    pub block: usize,
    pub workers: usize,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    pub naive_cells: usize,
    pub repeats: usize,
    pub peak_drift: f64,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

impl RunConfig {
    /// Defaults for `mode`.
    pub fn new(mode: Mode) -> Self {
        Self {
            mode,
            l_min: DEFAULT_L_MIN,
            l_max: DEFAULT_L_MAX,
            p_max: DEFAULT_P_MAX,
            mapping: MappingSource::Default,
            basis: None,
            r_samples: DEFAULT_R_SAMPLES,
            integrator: Integrator::Trapezium,
            h2: H2Mode::Gosper,
            mu_points: QuadratureRule::exact_order_for(DEFAULT_L_MAX),
            block: modal_core::DEFAULT_BLOCK,
            workers: default_workers(),
            out: None,
            format: OutputFormat::Csv,
            naive_cells: DEFAULT_NAIVE_CELLS,
            repeats: DEFAULT_REPEATS,
            peak_drift: if mode == Mode::Convergence { CONVERGENCE_PEAK_DRIFT } else { 0.0 },
        }
    }

    /// Builds a config from string pairs, applying defaults and validating.
    pub fn from_map(mut map: BTreeMap<String, String>) -> Result<Self> {
        let mode: Mode = map
            .remove("mode")
            .ok_or_else(|| HarnessError::Config("missing mode".into()))?
            .parse()?;
        let mut cfg = RunConfig::new(mode);
        let mut mu_points = None;
        for (key, value) in map {
            match key.as_str() {
                "lmin" => cfg.l_min = number(&key, &value)?,
                "lmax" => cfg.l_max = number(&key, &value)?,
                "pmax" => cfg.p_max = number(&key, &value)?,
                "mapping" => {
                    cfg.mapping = if value == "default" {
                        MappingSource::Default
                    } else {
                        MappingSource::File(value.into())
                    }
                }
                "basis" => cfg.basis = Some(value.into()),
                "r-samples" => cfg.r_samples = number(&key, &value)?,
                "integrator" => {
                    cfg.integrator = value.parse().map_err(|_| {
                        HarnessError::Config(format!("unknown integrator `{value}`"))
                    })?
                }
                "h2" => {
                    cfg.h2 = value
                        .parse()
                        .map_err(|_| HarnessError::Config(format!("unknown h2 mode `{value}`")))?
                }
                "mu-points" => mu_points = Some(number(&key, &value)?),
                "block" => cfg.block = number(&key, &value)?,
                "workers" => cfg.workers = number(&key, &value)?,
                "out" => cfg.out = Some(value.into()),
                "format" => cfg.format = value.parse()?,
                "naive-cells" => cfg.naive_cells = number(&key, &value)?,
                "repeats" => cfg.repeats = number(&key, &value)?,
                "peak-drift" => {
                    cfg.peak_drift = value.parse().map_err(|_| {
                        HarnessError::Config(format!("peak-drift: `{value}` is not a number"))
                    })?
                }
                other => return Err(HarnessError::Config(format!("unknown key `{other}`"))),
            }
        }
        cfg.mu_points = mu_points.unwrap_or_else(|| QuadratureRule::exact_order_for(cfg.l_max));
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(HarnessError::Config(msg));
        if self.l_min < 2 {
            return fail(format!("lmin must be at least 2, got {}", self.l_min));
        }
        if self.l_max < self.l_min || self.l_max > 5000 {
            return fail(format!("lmax must lie in [lmin, 5000], got {}", self.l_max));
        }
        if !(1..=64).contains(&self.p_max) {
            return fail(format!("pmax must lie in [1, 64], got {}", self.p_max));
        }
        if self.r_samples < 12 {
            return fail(format!("r-samples must be at least 12, got {}", self.r_samples));
        }
        for (name, value) in [
            ("mu-points", self.mu_points),
            ("block", self.block),
            ("workers", self.workers),
            ("naive-cells", self.naive_cells),
            ("repeats", self.repeats),
        ] {
            if value == 0 {
                return fail(format!("{name} must be at least 1"));
            }
        }
        if !self.peak_drift.is_finite() || self.peak_drift.abs() > MAX_PEAK_DRIFT {
            return fail(format!("peak-drift must lie in [-{MAX_PEAK_DRIFT}, {MAX_PEAK_DRIFT}]"));
        }
        if self.format == OutputFormat::Bin
            && self.out.is_none()
            && matches!(self.mode, Mode::Gamma2d | Mode::Gamma3d)
        {
            return fail("binary output needs --out".into());
        }
        Ok(())
    }

    /// One line listing every resolved setting.
    pub fn provenance(&self) -> String {
        let out = self.out.as_ref().map_or("-".to_string(), |p| p.display().to_string());
        let basis = self.basis.as_ref().map_or("synthetic".to_string(), |p| p.display().to_string());
        format!(
            "mode={} lmin={} lmax={} pmax={} mapping={} basis={} r-samples={} integrator={} \
             h2={} mu-points={} block={} workers={} out={} format={} naive-cells={} repeats={} \
             peak-drift={}",
            self.mode.id(),
            self.l_min,
            self.l_max,
            self.p_max,
            self.mapping,
            basis,
            self.r_samples,
            self.integrator.id(),
            self.h2.id(),
            self.mu_points,
            self.block,
            self.workers,
            out,
            self.format.id(),
            self.naive_cells,
            self.repeats,
            self.peak_drift,
        )
    }
}

fn number(key: &str, value: &str) -> Result<usize> {
    value
        .parse()
        .map_err(|_| HarnessError::Config(format!("{key}: `{value}` is not a non-negative integer")))
}
