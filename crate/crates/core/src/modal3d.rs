//! Direct evaluation of `Γ'` over the ordered multipole domain.
//!
//! ```text
//! Γ'[n][n'] = sum_t mult(t) z(t) y(t, n) x(t, n')
//! ```
//!
//! where `t` runs over ordered triples with `theta = 1`, `z` is the geometric
//! prefactor, `y` the symmetrised late-time product and `x` the radial
//! integral of the symmetrised primordial product.
//!
//! The optimised path walks the flattened domain in blocks of `B` triples,
//! fills a late-time block `P` (`B x n_max`) and a primordial block `X`
//! (`B x n_max`, with `mult * z` folded in), and accumulates
//! `Γ' += P^T X`.

use std::ops::Range;

use crate::basis::{BasisTables, ModeMapping, RadialGrid};
use crate::error::{ModalError, Result};
use crate::gamma::{EngineId, GammaMatrix, GammaMeta};
use crate::geometry::{
    enumerate_domain, permutation_multiplicity, prefactor_unchecked, H2Mode, MultipoleTriple,
    TriangularDomain, Wigner3jTable,
};
use crate::linalg::{accumulate_at_b, permanent3};
use crate::quadrature::Integrator;
use crate::scheduler::{make_plan, merge_partials};

/// Default number of triples per block.
pub const DEFAULT_BLOCK: usize = 64;

/// One block of consecutive flattened triples.
#[derive(Debug, Clone)]
pub struct TripleBlock {
    /// Flattened index of the first triple.
    pub start: usize,
    pub len: usize,
    /// `y(t, n)`, `len x n_max`.
    pub late: Vec<f64>,
    /// `mult(t) z(t) x(t, n')`, `len x n_max`.
    pub primordial: Vec<f64>,
}

/// Inputs for the direct engine.
#[derive(Debug, Clone)]
pub struct Modal3d<'a> {
    tables: &'a BasisTables,
    grid: &'a RadialGrid,
    mapping: &'a ModeMapping,
    integrator: Integrator,
    h2: H2Mode,
    exact: Option<Wigner3jTable>,
    r_squared: Vec<f64>,
}

impl<'a> Modal3d<'a> {
    pub fn new(
        tables: &'a BasisTables,
        grid: &'a RadialGrid,
        mapping: &'a ModeMapping,
        integrator: Integrator,
        h2: H2Mode,
    ) -> Result<Self> {
        if tables.l_min() < 2 {
            return Err(ModalError::InvalidParameter(format!(
                "direct sum starts at l = 2, tables start at {}",
                tables.l_min()
            )));
        }
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
        if grid.len() < integrator.min_points() {
            return Err(ModalError::InvalidParameter(format!(
                "{integrator} needs at least {} radial points",
                integrator.min_points()
            )));
        }
        let exact = (h2 == H2Mode::Exact).then(|| Wigner3jTable::new(tables.l_max()));
        let r_squared = grid.samples().iter().map(|r| r * r).collect();
        Ok(Self { tables, grid, mapping, integrator, h2, exact, r_squared })
    }

    pub fn n_max(&self) -> usize {
        self.mapping.len()
    }

    pub fn h2_mode(&self) -> H2Mode {
        self.h2
    }

    pub fn domain(&self) -> TriangularDomain {
        enumerate_domain(self.tables.l_min(), self.tables.l_max())
            .expect("range validated in constructor")
    }

    pub fn meta(&self, engine: EngineId) -> GammaMeta {
        GammaMeta {
            engine,
            l_min: self.tables.l_min(),
            l_max: self.tables.l_max(),
            p_max: self.mapping.p_max(),
            integrator: self.integrator,
            h2: Some(self.h2),
            grid_fingerprint: self.grid.fingerprint(),
            mapping_fingerprint: self.mapping.fingerprint(),
            basis_fingerprint: self.tables.fingerprint(),
        }
    }

    fn check_triple(&self, t: MultipoleTriple) -> Result<()> {
        let (lo, hi) = (self.tables.l_min(), self.tables.l_max());
        if let Some(&l) = t.as_array().iter().find(|&&l| l < lo || l > hi) {
            return Err(ModalError::IndexOutOfRange { index: l, limit: hi + 1 });
        }
        Ok(())
    }

    /// Geometric prefactor `z(t)` without the multiplicity:
    /// `h^2 / (36 v1 v2 v3 sqrt(C1 C2 C3))` with `h^2` per the selected mode.
    pub fn prefactor(&self, t: MultipoleTriple) -> f64 {
        let tb = self.tables;
        let c = [tb.c(t.l1), tb.c(t.l2), tb.c(t.l3)];
        let v = [tb.v(t.l1), tb.v(t.l2), tb.v(t.l3)];
        let h2 = match &self.exact {
            Some(table) => table.h2(t),
            None => crate::geometry::h2_gosper(t),
        };
        prefactor_unchecked(h2, c, v) / 36.0
    }

    /// `sum over the 6 assignments of (i, j, k) to (l1, l2, l3)` of
    /// `q_i(l1) q_j(l2) q_k(l3)`.
    pub fn late_product_y(&self, t: MultipoleTriple, n: usize) -> Result<f64> {
        self.check_triple(t)?;
        let idx = self.mapping.get(n)?;
        Ok(self.late_product(t, idx))
    }

    #[inline]
    fn late_product(&self, t: MultipoleTriple, idx: [usize; 3]) -> f64 {
        let ls = t.as_array();
        let q = |a: usize, c: usize| self.tables.q(idx[a], ls[c]);
        permanent3(&[
            [q(0, 0), q(0, 1), q(0, 2)],
            [q(1, 0), q(1, 1), q(1, 2)],
            [q(2, 0), q(2, 1), q(2, 2)],
        ])
    }

    /// Radial integral of `r^2` times the symmetrised primordial product for
    /// mode `n'`.
    pub fn radial_integral_x(&self, t: MultipoleTriple, n_prime: usize) -> Result<f64> {
        self.check_triple(t)?;
        let idx = self.mapping.get(n_prime)?;
        let ls = t.as_array();
        let integrand: Vec<f64> = (0..self.grid.len())
            .map(|x| {
                let qt = |a: usize, c: usize| self.tables.q_tilde(idx[a], x, ls[c]);
                self.r_squared[x]
                    * permanent3(&[
                        [qt(0, 0), qt(0, 1), qt(0, 2)],
                        [qt(1, 0), qt(1, 1), qt(1, 2)],
                        [qt(2, 0), qt(2, 1), qt(2, 2)],
                    ])
            })
            .collect();
        self.integrator.integrate(self.grid, &integrand)
    }

    /// Blocked, chunk-parallel evaluation.
    ///
    /// Worker `w` sweeps its contiguous share of the flattened domain in
    /// blocks of `block` triples into a private matrix; the partials are then
    /// summed in worker order. Output is bitwise reproducible for a fixed
    /// worker count, and independent of `block`.
    pub fn matrix(&self, block: usize, workers: usize) -> Result<GammaMatrix> {
        if block == 0 {
            return Err(ModalError::InvalidParameter("block size must be at least 1".into()));
        }
        let domain = self.domain();
        let plan = make_plan(domain.len(), workers)?;
        let meta = self.meta(EngineId::Modal3d);
        let n = self.n_max();
        let partials = plan.execute(|_, range| {
            let mut gamma = GammaMatrix::zeros(n, meta.clone());
            let mut scratch = Scratch::new(self, block);
            let mut start = range.start;
            while start < range.end {
                let len = block.min(range.end - start);
                let tb = self.fill_block(&domain, start, len, &mut scratch);
                accumulate_at_b(
                    gamma.as_mut_slice(),
                    &tb.late[..len * n],
                    &tb.primordial[..len * n],
                    len,
                    n,
                    n,
                );
                scratch.recycle(tb);
                start += len;
            }
            gamma
        });
        merge_partials(partials)
    }

    /// Fills one [`TripleBlock`] for flattened indices `start..start + len`.
    fn fill_block(
        &self,
        domain: &TriangularDomain,
        start: usize,
        len: usize,
        scratch: &mut Scratch,
    ) -> TripleBlock {
        let n = self.n_max();
        let entries = self.mapping.entries();
        let mut tb = scratch.take_block(start, len);
        for (row, t) in domain.as_slice()[start..start + len].iter().enumerate() {
            let late = &mut tb.late[row * n..(row + 1) * n];
            for (y, &idx) in late.iter_mut().zip(entries) {
                *y = self.late_product(*t, idx);
            }
            let weight = f64::from(permutation_multiplicity(*t)) * self.prefactor(*t);
            self.primordial_row(*t, scratch);
            let prim = &mut tb.primordial[row * n..(row + 1) * n];
            for (out, integrand) in prim.iter_mut().zip(scratch.integrand.chunks_exact(self.grid.len())) {
                *out = weight * self.integrator.integrate_unchecked(self.grid.samples(), integrand);
            }
        }
        tb
    }

    /// Integrands `r^2 perm(q~)` for every primordial mode at once, stored
    /// mode-major in `scratch.integrand`.
    fn primordial_row(&self, t: MultipoleTriple, scratch: &mut Scratch) {
        let p = self.tables.p_max();
        let radial = self.grid.len();
        let ls = t.as_array();
        let entries = self.mapping.entries();
        for x in 0..radial {
            for b in 0..p {
                let row = self.tables.q_tilde_row(b, x);
                let base = self.tables.l_min();
                scratch.sampled[b] = [row[ls[0] - base], row[ls[1] - base], row[ls[2] - base]];
            }
            let g = &scratch.sampled;
            for (mode, idx) in entries.iter().enumerate() {
                let perm = permanent3(&[g[idx[0]], g[idx[1]], g[idx[2]]]);
                scratch.integrand[mode * radial + x] = self.r_squared[x] * perm;
            }
        }
    }

    /// Literal loop nest: primordial mode outermost, then `l1`, `l2`, `l3`
    /// with the parity-stepped inner bound, an `mvec` accumulator over
    /// late-time modes that is reduced into the matrix once per `l1`.
    /// Single threaded.
    pub fn matrix_naive(&self) -> Result<GammaMatrix> {
        self.columns_naive(0..self.n_max())
    }

    /// The naive loop restricted to primordial modes `columns`; every other
    /// column of the result is zero.
    pub fn columns_naive(&self, columns: Range<usize>) -> Result<GammaMatrix> {
        let terms = self.n_max();
        if columns.end > terms {
            return Err(ModalError::IndexOutOfRange { index: columns.end - 1, limit: terms });
        }
        let (lo, hi) = (self.tables.l_min(), self.tables.l_max());
        let mut gamma = GammaMatrix::zeros(terms, self.meta(EngineId::Modal3dNaive));
        let mut mvec = vec![0.0; terms];
        for n in columns {
            for l1 in lo..=hi {
                mvec.iter_mut().for_each(|m| *m = 0.0);
                for l2 in l1..=hi {
                    let mut l3 = l2 + (l1 + 2 * l2) % 2;
                    while l3 <= (l1 + l2).min(hi) {
                        let t = MultipoleTriple::new(l1, l2, l3);
                        let x = self.radial_integral_x(t, n)?;
                        let z = f64::from(permutation_multiplicity(t)) * self.prefactor(t);
                        for (m, acc) in mvec.iter_mut().enumerate() {
                            let y = self.late_product_y(t, m)?;
                            *acc += x * y * z;
                        }
                        l3 += 2;
                    }
                }
                for (m, acc) in mvec.iter().enumerate() {
                    let cell = gamma.get(m, n) + acc;
                    gamma.set(m, n, cell);
                }
            }
        }
        Ok(gamma)
    }
}

/// Per-worker buffers: two `B x n_max` blocks and the integrand rows.
struct Scratch {
    spare: Option<TripleBlock>,
    block: usize,
    n_max: usize,
    sampled: Vec<[f64; 3]>,
    integrand: Vec<f64>,
}

impl Scratch {
    fn new(engine: &Modal3d<'_>, block: usize) -> Self {
        let n_max = engine.n_max();
        Self {
            spare: None,
            block,
            n_max,
            sampled: vec![[0.0; 3]; engine.tables.p_max()],
            integrand: vec![0.0; n_max * engine.grid.len()],
        }
    }

    fn take_block(&mut self, start: usize, len: usize) -> TripleBlock {
        let mut tb = self.spare.take().unwrap_or_else(|| TripleBlock {
            start: 0,
            len: 0,
            late: vec![0.0; self.block * self.n_max],
            primordial: vec![0.0; self.block * self.n_max],
        });
        tb.start = start;
        tb.len = len;
        tb
    }

    fn recycle(&mut self, tb: TripleBlock) {
        self.spare = Some(tb);
    }
}
