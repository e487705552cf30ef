//! Projection matrices between primordial and late-time bispectrum bases.
//!
//! Two engines evaluate the same matrix `Γ'[n][n']`:
//!
//! * [`modal3d`] sums directly over the sparse set of ordered multipole
//!   triples `(l1, l2, l3)` allowed by the triangle and parity conditions,
//!   integrating the primordial factor along the radial grid for each triple.
//! * [`modal2d`] replaces the 3j weight with a Gauss-Legendre integral over
//!   three Legendre polynomials, which factorises the multipole sum into
//!   products of one-dimensional resummations on a dense `(r, mu)` grid.
//!
//! Each optimised path keeps a literal reference implementation next to it
//! (`*_naive`) so the two can be compared entry by entry.
//!
//! Parallel execution uses rayon behind the default `parallel` feature. With
//! the feature disabled every driver runs the same chunk plan sequentially and
//! produces bitwise identical output for the same worker count.

pub mod basis;
pub mod error;
pub mod gamma;
pub mod geometry;
pub mod linalg;
pub mod modal2d;
pub mod modal3d;
pub mod quadrature;
pub mod scheduler;
pub mod sum;

pub use basis::{
    default_mode_mapping, default_radial_grid, read_basis, synthesize_basis, write_basis,
    BasisParts, BasisTables, ModeMapping, PeakProfile, RadialGrid,
};
pub use error::{FormatError, ModalError, Result};
pub use gamma::{EngineId, GammaMatrix, GammaMeta};
pub use geometry::{
    enumerate_domain, geometric_prefactor, H2Mode, h2_exact, h2_gosper, permutation_multiplicity,
    theta_indicator, MultipoleTriple, TriangularDomain, Wigner3jTable,
};
pub use modal2d::{Modal2d, PTable, DEFAULT_PTABLE_BUDGET};
pub use modal3d::{Modal3d, DEFAULT_BLOCK};
pub use quadrature::{gauss_legendre, legendre_table, Integrator, LegendreTable, QuadratureRule};
pub use scheduler::{make_plan, merge_partials, ChunkPlan};
