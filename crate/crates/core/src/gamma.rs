use std::fmt;
use std::str::FromStr;

use crate::error::ModalError;
use crate::geometry::H2Mode;
use crate::quadrature::Integrator;

/// Which code path produced a matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EngineId {
    Modal2d,
    Modal2dNaive,
    Modal3d,
    Modal3dNaive,
    /// Loaded from a file that carries no provenance.
    External,
}

impl EngineId {
    pub fn id(&self) -> &'static str {
        match self {
            EngineId::Modal2d => "modal2d",
            EngineId::Modal2dNaive => "modal2d-naive",
            EngineId::Modal3d => "modal3d",
            EngineId::Modal3dNaive => "modal3d-naive",
            EngineId::External => "external",
        }
    }
}

impl fmt::Display for EngineId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for EngineId {
    type Err = ModalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            EngineId::Modal2d,
            EngineId::Modal2dNaive,
            EngineId::Modal3d,
            EngineId::Modal3dNaive,
            EngineId::External,
        ]
        .into_iter()
        .find(|e| e.id() == s)
        .ok_or_else(|| ModalError::InvalidParameter(format!("unknown engine `{s}`")))
    }
}

/// Provenance carried alongside every matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaMeta {
    pub engine: EngineId,
    pub l_min: usize,
    pub l_max: usize,
    pub p_max: usize,
    pub integrator: Integrator,
    /// Only meaningful for the direct engines.
    pub h2: Option<H2Mode>,
    pub grid_fingerprint: u64,
    pub mapping_fingerprint: u64,
    pub basis_fingerprint: u64,
}

impl GammaMeta {
    /// Fingerprints agree, i.e. the matrices were computed from the same
    /// inputs.
    pub fn same_inputs(&self, other: &GammaMeta) -> bool {
        self.grid_fingerprint == other.grid_fingerprint
            && self.mapping_fingerprint == other.mapping_fingerprint
            && self.basis_fingerprint == other.basis_fingerprint
    }
}

/// Dense square matrix `Γ'[n][n']`: rows are late-time modes, columns are
/// primordial modes. Row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaMatrix {
    n: usize,
    data: Vec<f64>,
    meta: GammaMeta,
}

impl GammaMatrix {
    pub fn zeros(n: usize, meta: GammaMeta) -> Self {
        Self { n, data: vec![0.0; n * n], meta }
    }

    pub fn from_data(n: usize, data: Vec<f64>, meta: GammaMeta) -> Result<Self, ModalError> {
        if data.len() != n * n {
            return Err(ModalError::DimensionMismatch(format!(
                "{} values for a {n}x{n} matrix",
                data.len()
            )));
        }
        Ok(Self { n, data, meta })
    }

    pub fn n_max(&self) -> usize {
        self.n
    }

    pub fn meta(&self) -> &GammaMeta {
        &self.meta
    }

    pub fn meta_mut(&mut self) -> &mut GammaMeta {
        &mut self.meta
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.n + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.data[row * self.n + col] = value;
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.n..(row + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        crate::sum::compensated_sum(self.data.iter().map(|x| x * x)).sqrt()
    }
}
