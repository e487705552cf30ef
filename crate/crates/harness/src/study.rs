//! Run modes built on the engines: single matrices, the cross-engine check,
//! the integrator convergence study and the benchmark.

use std::fmt::Write as _;
use std::time::Instant;

use modal_core::{
    gauss_legendre, h2_gosper, legendre_table, GammaMatrix, H2Mode, Integrator, Modal2d, Modal3d,
    Wigner3jTable, DEFAULT_PTABLE_BUDGET,
};

use crate::compare::{max_rel_deviation, max_rel_deviation_diagonal, rmse_percent, ComparisonReport};
use crate::config::RunConfig;
use crate::error::{HarnessError, Result};
use crate::inputs::Inputs;

/// Radial sample counts of the convergence study.
pub const CONVERGENCE_LADDER: [usize; 6] = [54, 108, 216, 432, 864, 1768];
/// The gold standard is the spline at this many samples.
pub const GOLD_SAMPLES: usize = 1768;

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, f64)> {
    let start = Instant::now();
    let out = f()?;
    Ok((out, start.elapsed().as_secs_f64()))
}

/// Separable engine through the P table.
pub fn gamma2d(inputs: &Inputs, cfg: &RunConfig, integrator: Integrator) -> Result<GammaMatrix> {
    let rule = gauss_legendre(cfg.mu_points)?;
    let legendre = legendre_table(inputs.tables.l_max(), &rule);
    let engine =
        Modal2d::new(&inputs.tables, &inputs.grid, &inputs.mapping, &rule, &legendre, integrator)?;
    let ptable = engine.build_ptable(DEFAULT_PTABLE_BUDGET, cfg.workers)?;
    Ok(engine.matrix(&ptable, cfg.workers)?)
}

/// Direct engine, blocked and chunked per `cfg`.
pub fn gamma3d(
    inputs: &Inputs,
    cfg: &RunConfig,
    integrator: Integrator,
    h2: H2Mode,
) -> Result<GammaMatrix> {
    let engine = Modal3d::new(&inputs.tables, &inputs.grid, &inputs.mapping, integrator, h2)?;
    Ok(engine.matrix(cfg.block, cfg.workers)?)
}

/// Largest `|h2_gosper / h2_exact - 1|` over the ordered domain.
pub fn gosper_envelope(l_min: usize, l_max: usize) -> Result<f64> {
    let table = Wigner3jTable::new(l_max);
    Ok(modal_core::enumerate_domain(l_min, l_max)?
        .iter()
        .map(|t| (h2_gosper(t) / table.h2(t) - 1.0).abs())
        .fold(0.0, f64::max))
}

/// Separable engine against the direct engine in exact and Gosper modes.
#[derive(Debug, Clone, PartialEq)]
pub struct CrosscheckReport {
    /// Separable (left) against direct with the exact weight (right).
    pub exact: ComparisonReport,
    /// Separable (left) against direct with the Gosper weight (right).
    pub gosper: ComparisonReport,
    /// Gosper-mode deviation over diagonal entries. Every term of a
    /// diagonal entry has the same sign when `q~` is `q` times a positive
    /// radial profile, so this is bounded by the envelope.
    pub gosper_diagonal: f64,
    /// Largest relative Gosper error over the domain.
    pub gosper_envelope: f64,
}

impl CrosscheckReport {
    pub fn to_csv(&self, config: &str) -> String {
        let mut s = format!("# config {config}\n# normalisation=frobenius\n");
        s.push_str("comparison,rmse_percent,max_rel_deviation,seconds_2d,seconds_3d\n");
        for r in [&self.exact, &self.gosper] {
            let _ = writeln!(
                s,
                "{},{:e},{:e},{:e},{:e}",
                r.label, r.rmse_percent, r.max_rel_deviation, r.left_seconds, r.right_seconds
            );
        }
        let _ = writeln!(s, "# gosper_diagonal_max_rel_deviation={:e}", self.gosper_diagonal);
        let _ = writeln!(s, "# gosper_envelope={:e}", self.gosper_envelope);
        s
    }
}

/// Smallest rule that integrates the degree `3 l_max` angular product
/// exactly.
pub fn exact_mu_threshold(l_max: usize) -> usize {
    (3 * l_max + 1).div_ceil(2)
}

pub fn run_crosscheck(cfg: &RunConfig) -> Result<CrosscheckReport> {
    if cfg.mu_points < exact_mu_threshold(cfg.l_max) {
        return Err(HarnessError::Config(format!(
            "crosscheck needs mu-points >= {} at lmax {}",
            exact_mu_threshold(cfg.l_max),
            cfg.l_max
        )));
    }
    let inputs = Inputs::load(cfg)?;
    let (sep, t2) = timed(|| gamma2d(&inputs, cfg, cfg.integrator))?;
    let (exact, t3) = timed(|| gamma3d(&inputs, cfg, cfg.integrator, H2Mode::Exact))?;
    let (gosper, tg) = timed(|| gamma3d(&inputs, cfg, cfg.integrator, H2Mode::Gosper))?;
    Ok(CrosscheckReport {
        exact: ComparisonReport::new("exact", &sep, &exact, t2, t3)?,
        gosper: ComparisonReport::new("gosper", &sep, &gosper, t2, tg)?,
        gosper_diagonal: max_rel_deviation_diagonal(&sep, &gosper)?,
        gosper_envelope: gosper_envelope(cfg.l_min, cfg.l_max)?,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub integrator: Integrator,
    pub r_samples: usize,
    pub rmse_percent: f64,
    pub max_rel_deviation: f64,
    pub seconds: f64,
}

/// Direct-engine `Γ'` for every integrator on each rung of `ladder`,
/// compared against the spline at [`GOLD_SAMPLES`].
pub fn convergence_study(cfg: &RunConfig, ladder: &[usize]) -> Result<Vec<ConvergenceRow>> {
    if cfg.basis.is_some() {
        return Err(HarnessError::Config(
            "the convergence study resamples the synthetic basis; drop --basis".into(),
        ));
    }
    let gold_inputs = Inputs::synthetic(cfg, GOLD_SAMPLES)?;
    let gold = gamma3d(&gold_inputs, cfg, Integrator::Spline, cfg.h2)?;
    let mut rows = Vec::new();
    for integrator in Integrator::ALL {
        for &r_samples in ladder {
            let inputs = Inputs::synthetic(cfg, r_samples)?;
            let (g, seconds) = timed(|| gamma3d(&inputs, cfg, integrator, cfg.h2))?;
            rows.push(ConvergenceRow {
                integrator,
                r_samples,
                rmse_percent: rmse_percent(&g, &gold)?,
                max_rel_deviation: max_rel_deviation(&g, &gold)?,
                seconds,
            });
        }
    }
    Ok(rows)
}

pub fn run_convergence_study(cfg: &RunConfig) -> Result<Vec<ConvergenceRow>> {
    convergence_study(cfg, &CONVERGENCE_LADDER)
}

pub fn convergence_csv(rows: &[ConvergenceRow], config: &str) -> String {
    let mut s = format!(
        "# config {config}\n# gold=spline r-samples={GOLD_SAMPLES} normalisation=frobenius\n"
    );
    s.push_str("integrator,r_samples,rmse_percent,max_rel_deviation,seconds\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{:e},{:e},{:e}",
            r.integrator.id(),
            r.r_samples,
            r.rmse_percent,
            r.max_rel_deviation,
            r.seconds
        );
    }
    s
}

/// Mean timing of one code path.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub path: String,
    pub workers: usize,
    pub repeats: usize,
    pub mean_seconds: f64,
    /// Work done per repeat: matrix cells for the separable paths, flattened
    /// triples (scaled by the fraction of columns) for the direct paths.
    pub iterations: f64,
    pub speedup: Option<f64>,
    pub relative_to: Option<String>,
}

impl BenchRow {
    pub fn per_second(&self) -> f64 {
        self.iterations / self.mean_seconds
    }
}

/// Mean over `repeats` timed runs after one untimed warm-up run.
fn mean_time(repeats: usize, mut f: impl FnMut() -> Result<()>) -> Result<f64> {
    f()?;
    let mut total = 0.0;
    for _ in 0..repeats {
        let start = Instant::now();
        f()?;
        total += start.elapsed().as_secs_f64();
    }
    Ok(total / repeats as f64)
}

/// Optimised separable path (P table build included) against the naive
/// per-point path on the first `cfg.naive_cells` cells.
pub fn bench_modal2d(inputs: &Inputs, cfg: &RunConfig) -> Result<Vec<BenchRow>> {
    let rule = gauss_legendre(cfg.mu_points)?;
    let legendre = legendre_table(inputs.tables.l_max(), &rule);
    let engine = Modal2d::new(
        &inputs.tables,
        &inputs.grid,
        &inputs.mapping,
        &rule,
        &legendre,
        cfg.integrator,
    )?;
    let n = engine.n_max();
    let cells = cfg.naive_cells.min(n * n);
    let naive = mean_time(cfg.repeats, || {
        for cell in 0..cells {
            std::hint::black_box(engine.entry_naive(cell / n, cell % n)?);
        }
        Ok(())
    })?;
    let fast = mean_time(cfg.repeats, || {
        let ptable = engine.build_ptable(DEFAULT_PTABLE_BUDGET, cfg.workers)?;
        std::hint::black_box(engine.matrix(&ptable, cfg.workers)?);
        Ok(())
    })?;
    let naive_row = BenchRow {
        path: "modal2d-naive".into(),
        workers: 1,
        repeats: cfg.repeats,
        mean_seconds: naive,
        iterations: cells as f64,
        speedup: None,
        relative_to: None,
    };
    let mut fast_row = BenchRow {
        path: "modal2d".into(),
        workers: cfg.workers,
        repeats: cfg.repeats,
        mean_seconds: fast,
        iterations: (n * n) as f64,
        speedup: None,
        relative_to: Some("modal2d-naive".into()),
    };
    fast_row.speedup = Some(fast_row.per_second() / naive_row.per_second());
    Ok(vec![naive_row, fast_row])
}

/// Naive direct path on the first columns, the blocked path on one worker
/// and, when `cfg.workers > 1`, on `cfg.workers`.
pub fn bench_modal3d(inputs: &Inputs, cfg: &RunConfig) -> Result<Vec<BenchRow>> {
    let engine =
        Modal3d::new(&inputs.tables, &inputs.grid, &inputs.mapping, cfg.integrator, cfg.h2)?;
    let n = engine.n_max();
    let triples = engine.domain().len() as f64;
    let columns = cfg.naive_cells.div_ceil(n).min(n);
    let naive = mean_time(cfg.repeats, || {
        std::hint::black_box(engine.columns_naive(0..columns)?);
        Ok(())
    })?;
    let naive_row = BenchRow {
        path: "modal3d-naive".into(),
        workers: 1,
        repeats: cfg.repeats,
        mean_seconds: naive,
        iterations: triples * columns as f64 / n as f64,
        speedup: None,
        relative_to: None,
    };
    let mut rows = vec![naive_row];
    let mut worker_counts = vec![1];
    if cfg.workers > 1 {
        worker_counts.push(cfg.workers);
    }
    for workers in worker_counts {
        let seconds = mean_time(cfg.repeats, || {
            std::hint::black_box(engine.matrix(cfg.block, workers)?);
            Ok(())
        })?;
        let mut row = BenchRow {
            path: "modal3d".into(),
            workers,
            repeats: cfg.repeats,
            mean_seconds: seconds,
            iterations: triples,
            speedup: None,
            relative_to: None,
        };
        let base = &rows[if workers == 1 { 0 } else { 1 }];
        row.speedup = Some(row.per_second() / base.per_second());
        row.relative_to = Some(if workers == 1 { "modal3d-naive".into() } else { "modal3d:1".into() });
        rows.push(row);
    }
    Ok(rows)
}

pub fn run_bench(cfg: &RunConfig) -> Result<Vec<BenchRow>> {
    let inputs = Inputs::load(cfg)?;
    let mut rows = bench_modal2d(&inputs, cfg)?;
    rows.extend(bench_modal3d(&inputs, cfg)?);
    Ok(rows)
}

pub fn bench_csv(rows: &[BenchRow], config: &str) -> String {
    let mut s = format!("# config {config}\n");
    s.push_str(
        "path,workers,repeats,mean_seconds,iterations,iterations_per_second,speedup,relative_to\n",
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{:e},{},{:e},{},{}",
            r.path,
            r.workers,
            r.repeats,
            r.mean_seconds,
            r.iterations,
            r.per_second(),
            r.speedup.map_or(String::new(), |x| format!("{x:e}")),
            r.relative_to.as_deref().unwrap_or(""),
        );
    }
    s
}
