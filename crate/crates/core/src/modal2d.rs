//! Separable evaluation of `Γ'`.
//!
//! Writing the 3j weight as `∫ dmu P_l1 P_l2 P_l3` turns the multipole sum
//! into products of one-dimensional resummations
//!
//! ```text
//! P_ab(r, mu) = sum_l (2l+1) / (v_l sqrt(C_l)) q~_b(r, l) q_a(l) P_l(mu)
//! Γ'[n][n'] = 1/(48 pi) ∫ r^2 dr ∫ dmu perm(P_{row, col}(r, mu))
//! ```
//!
//! with rows `(i, j, k) = mapping[n]` and columns `(i', j', k') = mapping[n']`.
//! The `mu` integral is always taken first, at every radial sample, and the
//! radial integral is applied to the result.

use std::f64::consts::PI;

use crate::basis::{BasisTables, ModeMapping, RadialGrid};
use crate::error::{ModalError, Result};
use crate::gamma::{EngineId, GammaMatrix, GammaMeta};
use crate::linalg::permanent3;
use crate::quadrature::{Integrator, LegendreTable, QuadratureRule};
use crate::scheduler::make_plan;
use crate::sum::Neumaier;

/// Default memory budget for the P table: 2 GiB.
pub const DEFAULT_PTABLE_BUDGET: u64 = 2 << 30;

/// Precomputed `P[a][b][x][m]` with the quadrature node index innermost.
#[derive(Debug, Clone, PartialEq)]
pub struct PTable {
    p_max: usize,
    radial_count: usize,
    node_count: usize,
    values: Vec<f64>,
}

impl PTable {
    pub fn p_max(&self) -> usize {
        self.p_max
    }

    pub fn radial_count(&self) -> usize {
        self.radial_count
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn bytes(&self) -> u64 {
        (self.values.len() * std::mem::size_of::<f64>()) as u64
    }

    /// The `mu` sweep for fixed `(a, b, x)`.
    #[inline]
    pub fn nodes(&self, a: usize, b: usize, x: usize) -> &[f64] {
        let start = ((a * self.p_max + b) * self.radial_count + x) * self.node_count;
        &self.values[start..start + self.node_count]
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, x: usize, m: usize) -> f64 {
        self.nodes(a, b, x)[m]
    }

    /// Bytes needed for a table of the given shape.
    pub fn required_bytes(p_max: usize, radial_count: usize, node_count: usize) -> u64 {
        (p_max as u64).pow(2) * radial_count as u64 * node_count as u64 * 8
    }
}

/// Inputs for the separable engine.
#[derive(Debug, Clone, Copy)]
pub struct Modal2d<'a> {
    tables: &'a BasisTables,
    grid: &'a RadialGrid,
    mapping: &'a ModeMapping,
    rule: &'a QuadratureRule,
    legendre: &'a LegendreTable,
    integrator: Integrator,
}

impl<'a> Modal2d<'a> {
    pub fn new(
        tables: &'a BasisTables,
        grid: &'a RadialGrid,
        mapping: &'a ModeMapping,
        rule: &'a QuadratureRule,
        legendre: &'a LegendreTable,
        integrator: Integrator,
    ) -> Result<Self> {
        if tables.radial_count() != grid.len() {
            return Err(ModalError::DimensionMismatch(format!(
                "basis sampled at {} radii, grid has {}",
                tables.radial_count(),
                grid.len()
            )));
        }
        if mapping.p_max() > tables.p_max() {
            return Err(ModalError::DimensionMismatch(format!(
                "mapping uses p_max {} but tables hold {} functions",
                mapping.p_max(),
                tables.p_max()
            )));
        }
        if legendre.node_count() != rule.len() {
            return Err(ModalError::DimensionMismatch(format!(
                "Legendre table has {} nodes, rule has {}",
                legendre.node_count(),
                rule.len()
            )));
        }
        if legendre.l_max() < tables.l_max() {
            return Err(ModalError::DimensionMismatch(format!(
                "Legendre table stops at l = {}, tables reach {}",
                legendre.l_max(),
                tables.l_max()
            )));
        }
        if grid.len() < integrator.min_points() {
            return Err(ModalError::InvalidParameter(format!(
                "{integrator} needs at least {} radial points",
                integrator.min_points()
            )));
        }
        Ok(Self { tables, grid, mapping, rule, legendre, integrator })
    }

    pub fn n_max(&self) -> usize {
        self.mapping.len()
    }

    /// `(2l + 1) / (v_l sqrt(C_l))` over the multipole range.
    fn multipole_weights(&self) -> Vec<f64> {
        let t = self.tables;
        (t.l_min()..=t.l_max())
            .map(|l| (2 * l + 1) as f64 / (t.v(l) * t.c(l).sqrt()))
            .collect()
    }

    pub fn meta(&self, engine: EngineId) -> GammaMeta {
        GammaMeta {
            engine,
            l_min: self.tables.l_min(),
            l_max: self.tables.l_max(),
            p_max: self.mapping.p_max(),
            integrator: self.integrator,
            h2: None,
            grid_fingerprint: self.grid.fingerprint(),
            mapping_fingerprint: self.mapping.fingerprint(),
            basis_fingerprint: self.tables.fingerprint(),
        }
    }

    /// Builds the P table, one `(a, b)` slab per work item.
    pub fn build_ptable(&self, budget_bytes: u64, workers: usize) -> Result<PTable> {
        let p = self.tables.p_max();
        let radial_count = self.grid.len();
        let node_count = self.rule.len();
        let required = PTable::required_bytes(p, radial_count, node_count);
        if required > budget_bytes {
            return Err(ModalError::BudgetExceeded { required, allowed: budget_bytes });
        }

        let weights = self.multipole_weights();
        let (l_min, l_max) = (self.tables.l_min(), self.tables.l_max());
        let slab_len = radial_count * node_count;
        let plan = make_plan(p * p, workers)?;
        let chunks = plan.execute(|_, slabs| {
            let mut out = Vec::with_capacity(slabs.len() * slab_len);
            let mut coef = vec![0.0; weights.len()];
            for slab in slabs {
                let (a, b) = (slab / p, slab % p);
                let q_a = self.tables.q_row(a);
                for x in 0..radial_count {
                    let qt = self.tables.q_tilde_row(b, x);
                    for (k, c) in coef.iter_mut().enumerate() {
                        *c = weights[k] * qt[k] * q_a[k];
                    }
                    for m in 0..node_count {
                        let pl = &self.legendre.row(m)[l_min..=l_max];
                        let mut acc = Neumaier::new();
                        for (c, p_l) in coef.iter().zip(pl) {
                            acc.add(c * p_l);
                        }
                        out.push(acc.total());
                    }
                }
            }
            out
        });
        Ok(PTable { p_max: p, radial_count, node_count, values: chunks.concat() })
    }

    fn check_ptable(&self, ptable: &PTable) -> Result<()> {
        if ptable.p_max != self.tables.p_max()
            || ptable.radial_count != self.grid.len()
            || ptable.node_count != self.rule.len()
        {
            return Err(ModalError::DimensionMismatch(
                "P table was built for different inputs".into(),
            ));
        }
        Ok(())
    }

    /// One entry through the precomputed table.
    pub fn entry(&self, ptable: &PTable, n: usize, n_prime: usize) -> Result<f64> {
        self.check_ptable(ptable)?;
        let rows = self.mapping.get(n)?;
        let cols = self.mapping.get(n_prime)?;
        let mut radial = vec![0.0; self.grid.len()];
        Ok(self.entry_with(ptable, rows, cols, &mut radial))
    }

    fn entry_with(
        &self,
        ptable: &PTable,
        rows: [usize; 3],
        cols: [usize; 3],
        radial: &mut [f64],
    ) -> f64 {
        let w = self.rule.weights();
        for (x, (&r, out)) in self.grid.samples().iter().zip(radial.iter_mut()).enumerate() {
            let s = |a: usize, b: usize| ptable.nodes(rows[a], cols[b], x);
            let (s00, s01, s02) = (s(0, 0), s(0, 1), s(0, 2));
            let (s10, s11, s12) = (s(1, 0), s(1, 1), s(1, 2));
            let (s20, s21, s22) = (s(2, 0), s(2, 1), s(2, 2));
            let mut acc = Neumaier::new();
            for m in 0..w.len() {
                let perm = permanent3(&[
                    [s00[m], s01[m], s02[m]],
                    [s10[m], s11[m], s12[m]],
                    [s20[m], s21[m], s22[m]],
                ]);
                acc.add(w[m] * perm);
            }
            *out = r * r * acc.total();
        }
        self.integrator.integrate_unchecked(self.grid.samples(), radial) / (48.0 * PI)
    }

    /// One entry recomputing the nine multipole sums at every `(r, mu)`
    /// sample, the way the original per-point routine did.
    pub fn entry_naive(&self, n: usize, n_prime: usize) -> Result<f64> {
        let pvec = self.mapping.get(n)?;
        let qvec = self.mapping.get(n_prime)?;
        let t = self.tables;
        let (l_min, l_max) = (t.l_min(), t.l_max());
        let lweight = self.multipole_weights();
        let lsize = lweight.len();
        let mut factor = vec![0.0; lsize];
        let mut radial = vec![0.0; self.grid.len()];

        for (x, &r) in self.grid.samples().iter().enumerate() {
            let mut result = 0.0;
            for j in 0..self.rule.len() {
                let gl_pl = &self.legendre.row(j)[l_min..=l_max];
                for l in 0..lsize {
                    factor[l] = lweight[l] * gl_pl[l];
                }
                let mut nmap = [[0.0; 3]; 3];
                for (rr, row) in nmap.iter_mut().enumerate() {
                    let basis = t.q_row(pvec[rr]);
                    for (s, cell) in row.iter_mut().enumerate() {
                        let beta = t.q_tilde_row(qvec[s], x);
                        let mut sum1 = 0.0;
                        for l in 0..lsize {
                            sum1 += factor[l] * basis[l] * beta[l];
                        }
                        *cell = sum1;
                    }
                }
                result += self.rule.weights()[j] * permanent3(&nmap);
            }
            radial[x] = r * r * result;
        }
        Ok(self.integrator.integrate(self.grid, &radial)? / (48.0 * PI))
    }

    /// Full matrix through the P table, cells split statically across
    /// `workers`. Every cell is computed the same way regardless of the split,
    /// so the output is bitwise independent of `workers`.
    pub fn matrix(&self, ptable: &PTable, workers: usize) -> Result<GammaMatrix> {
        self.check_ptable(ptable)?;
        let n = self.n_max();
        let entries = self.mapping.entries();
        let plan = make_plan(n * n, workers)?;
        let chunks = plan.execute(|_, cells| {
            let mut radial = vec![0.0; self.grid.len()];
            cells
                .map(|cell| self.entry_with(ptable, entries[cell / n], entries[cell % n], &mut radial))
                .collect::<Vec<_>>()
        });
        GammaMatrix::from_data(n, chunks.concat(), self.meta(EngineId::Modal2d))
    }

    /// Full matrix through [`entry_naive`](Self::entry_naive), single
    /// threaded.
    pub fn matrix_naive(&self) -> Result<GammaMatrix> {
        let n = self.n_max();
        let mut g = GammaMatrix::zeros(n, self.meta(EngineId::Modal2dNaive));
        for row in 0..n {
            for col in 0..n {
                g.set(row, col, self.entry_naive(row, col)?);
            }
        }
        Ok(g)
    }
}
