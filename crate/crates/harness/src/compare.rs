//! Matrix comparisons.

use modal_core::{GammaMatrix, ModalError};

use crate::error::Result;

fn check_shapes(a: &GammaMatrix, b: &GammaMatrix) -> Result<()> {
    if a.n_max() != b.n_max() {
        return Err(ModalError::DimensionMismatch(format!(
            "comparing {0}x{0} with {1}x{1}",
            a.n_max(),
            b.n_max()
        ))
        .into());
    }
    Ok(())
}

/// Percentage RMSE after scaling both matrices to unit Frobenius norm:
/// `100 sqrt(mean((A/|A| - B/|B|)^2))`.
pub fn rmse_percent(a: &GammaMatrix, b: &GammaMatrix) -> Result<f64> {
    check_shapes(a, b)?;
    let (na, nb) = (a.frobenius_norm(), b.frobenius_norm());
    for norm in [na, nb] {
        if norm == 0.0 || !norm.is_finite() {
            return Err(ModalError::InvalidParameter(
                "cannot unit-normalise a zero or non-finite matrix".into(),
            )
            .into());
        }
    }
    let sum: f64 = a
        .as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x / na - y / nb).powi(2))
        .sum();
    Ok(100.0 * (sum / a.as_slice().len() as f64).sqrt())
}

fn rel(x: f64, y: f64) -> f64 {
    let scale = x.abs().max(y.abs());
    if scale == 0.0 {
        0.0
    } else {
        (x - y).abs() / scale
    }
}

/// Largest entrywise `|a - b| / max(|a|, |b|)`; two exact zeros count as
/// equal.
pub fn max_rel_deviation(a: &GammaMatrix, b: &GammaMatrix) -> Result<f64> {
    check_shapes(a, b)?;
    Ok(a.as_slice().iter().zip(b.as_slice()).map(|(&x, &y)| rel(x, y)).fold(0.0, f64::max))
}

/// [`max_rel_deviation`] over the diagonal only.
pub fn max_rel_deviation_diagonal(a: &GammaMatrix, b: &GammaMatrix) -> Result<f64> {
    check_shapes(a, b)?;
    Ok((0..a.n_max()).map(|k| rel(a.get(k, k), b.get(k, k))).fold(0.0, f64::max))
}

/// Two matrices side by side.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub label: String,
    pub rmse_percent: f64,
    pub max_rel_deviation: f64,
    pub left_seconds: f64,
    pub right_seconds: f64,
}

impl ComparisonReport {
    pub fn new(
        label: impl Into<String>,
        left: &GammaMatrix,
        right: &GammaMatrix,
        left_seconds: f64,
        right_seconds: f64,
    ) -> Result<Self> {
        Ok(Self {
            label: label.into(),
            rmse_percent: rmse_percent(left, right)?,
            max_rel_deviation: max_rel_deviation(left, right)?,
            left_seconds,
            right_seconds,
        })
    }
}
