//! Basis, grid and mapping assembled from a [`RunConfig`].

use modal_core::{
    default_mode_mapping, default_radial_grid, read_basis, synthesize_basis, BasisTables,
    ModeMapping, PeakProfile, RadialGrid,
};

use crate::config::{MappingSource, RunConfig};
use crate::error::{read_text, HarnessError, Result};

#[derive(Debug, Clone)]
pub struct Inputs {
    pub grid: RadialGrid,
    pub tables: BasisTables,
    pub mapping: ModeMapping,
}

impl Inputs {
    /// Reads the basis file when one is configured, otherwise synthesises
    /// the basis on `cfg.r_samples` points.
    pub fn load(cfg: &RunConfig) -> Result<Self> {
        let mapping = load_mapping(cfg)?;
        let (tables, grid) = match &cfg.basis {
            Some(path) => {
                let (tables, grid) = read_basis(&read_text(path)?)?;
                if tables.l_min() != cfg.l_min || tables.l_max() != cfg.l_max {
                    return Err(HarnessError::Config(format!(
                        "basis file covers l = {}..{}, config asks for {}..{}",
                        tables.l_min(),
                        tables.l_max(),
                        cfg.l_min,
                        cfg.l_max
                    )));
                }
                (tables, grid)
            }
            None => synthetic_tables(cfg, cfg.r_samples)?,
        };
        Self::check(mapping, tables, grid)
    }

    /// Synthetic basis on `r_samples` points regardless of any basis file.
    pub fn synthetic(cfg: &RunConfig, r_samples: usize) -> Result<Self> {
        let mapping = load_mapping(cfg)?;
        let (tables, grid) = synthetic_tables(cfg, r_samples)?;
        Self::check(mapping, tables, grid)
    }

    fn check(mapping: ModeMapping, tables: BasisTables, grid: RadialGrid) -> Result<Self> {
        if mapping.p_max() > tables.p_max() {
            return Err(HarnessError::Config(format!(
                "mapping needs {} basis functions, basis has {}",
                mapping.p_max(),
                tables.p_max()
            )));
        }
        Ok(Self { grid, tables, mapping })
    }
}

fn load_mapping(cfg: &RunConfig) -> Result<ModeMapping> {
    let mapping = match &cfg.mapping {
        MappingSource::Default => default_mode_mapping(cfg.p_max)?,
        MappingSource::File(path) => ModeMapping::parse(&read_text(path)?)?,
    };
    if mapping.p_max() != cfg.p_max {
        return Err(HarnessError::Config(format!(
            "mapping file declares p_max {}, config has {}",
            mapping.p_max(),
            cfg.p_max
        )));
    }
    Ok(mapping)
}

fn synthetic_tables(cfg: &RunConfig, r_samples: usize) -> Result<(BasisTables, RadialGrid)> {
    let profile = PeakProfile { drift: cfg.peak_drift, ..PeakProfile::default() };
    let grid = default_radial_grid(r_samples, &profile)?;
    let tables = synthesize_basis(cfg.p_max, cfg.l_min, cfg.l_max, &grid, &profile)?;
    Ok((tables, grid))
}
