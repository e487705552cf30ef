//! Command-line driver for `modal-core`: run configuration, the five run
//! modes, `Γ'` file formats and matrix comparisons.

pub mod compare;
pub mod config;
pub mod error;
pub mod gamma_io;
pub mod inputs;
pub mod study;

use std::io::Write;

pub use compare::{max_rel_deviation, rmse_percent, ComparisonReport};
pub use config::{Cli, MappingSource, Mode, OutputFormat, RunConfig};
pub use error::{HarnessError, Result};
pub use inputs::Inputs;
pub use study::{
    run_bench, run_convergence_study, run_crosscheck, BenchRow, ConvergenceRow, CrosscheckReport,
};

fn emit(cfg: &RunConfig, bytes: &[u8]) -> Result<()> {
    match &cfg.out {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|source| HarnessError::File { path: path.clone(), source })?,
        None => std::io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}

/// Runs the configured mode and writes its output.
pub fn run(cfg: &RunConfig) -> Result<()> {
    let provenance = cfg.provenance();
    match cfg.mode {
        Mode::Gamma2d | Mode::Gamma3d => {
            let inputs = Inputs::load(cfg)?;
            let g = if cfg.mode == Mode::Gamma2d {
                study::gamma2d(&inputs, cfg, cfg.integrator)?
            } else {
                study::gamma3d(&inputs, cfg, cfg.integrator, cfg.h2)?
            };
            if !g.is_finite() {
                return Err(modal_core::ModalError::NonFinite { table: "gamma", index: 0 }.into());
            }
            let mut buf = Vec::new();
            match cfg.format {
                OutputFormat::Csv => gamma_io::write_csv(&mut buf, &g, Some(&provenance))?,
                OutputFormat::Bin => gamma_io::write_bin(&mut buf, &g)?,
            }
            emit(cfg, &buf)
        }
        Mode::Crosscheck => emit(cfg, run_crosscheck(cfg)?.to_csv(&provenance).as_bytes()),
        Mode::Convergence => {
            let rows = run_convergence_study(cfg)?;
            emit(cfg, study::convergence_csv(&rows, &provenance).as_bytes())
        }
        Mode::Bench => emit(cfg, study::bench_csv(&run_bench(cfg)?, &provenance).as_bytes()),
    }
}
