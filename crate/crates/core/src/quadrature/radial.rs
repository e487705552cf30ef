//! Integrators over a nonuniform radial grid.
//!
//! All three are linear in the samples and accumulate with compensated
//! summation.

use std::fmt;
use std::str::FromStr;

use crate::basis::RadialGrid;
use crate::error::{ModalError, Result};
use crate::sum::Neumaier;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Integrator {
    #[default]
    Trapezium,
    Hermite,
    Spline,
}

impl Integrator {
    pub const ALL: [Integrator; 3] = [Integrator::Trapezium, Integrator::Hermite, Integrator::Spline];

    pub fn id(&self) -> &'static str {
        match self {
            Integrator::Trapezium => "trap",
            Integrator::Hermite => "hermite",
            Integrator::Spline => "spline",
        }
    }

    pub fn min_points(&self) -> usize {
        match self {
            Integrator::Trapezium => 2,
            Integrator::Hermite => 3,
            Integrator::Spline => 4,
        }
    }

    pub fn integrate(&self, grid: &RadialGrid, y: &[f64]) -> Result<f64> {
        match self {
            Integrator::Trapezium => integrate_trapezium(grid, y),
            Integrator::Hermite => integrate_hermite(grid, y),
            Integrator::Spline => integrate_spline(grid, y),
        }
    }

    /// Same as [`integrate`](Self::integrate) on pre-validated input.
    pub(crate) fn integrate_unchecked(&self, r: &[f64], y: &[f64]) -> f64 {
        match self {
            Integrator::Trapezium => trapezium(r, y),
            Integrator::Hermite => hermite(r, y),
            Integrator::Spline => spline(r, y),
        }
    }
}

impl fmt::Display for Integrator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Integrator {
    type Err = ModalError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trap" | "trapezium" => Ok(Integrator::Trapezium),
            "hermite" => Ok(Integrator::Hermite),
            "spline" => Ok(Integrator::Spline),
            other => Err(ModalError::InvalidParameter(format!("unknown integrator `{other}`"))),
        }
    }
}

fn check(grid: &RadialGrid, y: &[f64], min: usize) -> Result<()> {
    if y.len() != grid.len() {
        return Err(ModalError::DimensionMismatch(format!(
            "{} samples on a {}-point grid",
            y.len(),
            grid.len()
        )));
    }
    if y.len() < min {
        return Err(ModalError::InvalidParameter(format!(
            "integrator needs at least {min} points, got {}",
            y.len()
        )));
    }
    Ok(())
}

/// `sum_k dr_k (y_k + y_{k+1}) / 2`.
pub fn integrate_trapezium(grid: &RadialGrid, y: &[f64]) -> Result<f64> {
    check(grid, y, 2)?;
    Ok(trapezium(grid.samples(), y))
}

/// Trapezium rule plus the Hermite-cubic slope correction
/// `dr_k^2 / 12 (s_k - s_{k+1})`, where `s_k` is the secant slope on interval
/// `k`. The slope past the final interval is taken equal to the last secant,
/// so the final interval gets no correction.
pub fn integrate_hermite(grid: &RadialGrid, y: &[f64]) -> Result<f64> {
    check(grid, y, 3)?;
    Ok(hermite(grid.samples(), y))
}

/// Natural cubic spline through every sample, integrated exactly.
pub fn integrate_spline(grid: &RadialGrid, y: &[f64]) -> Result<f64> {
    check(grid, y, 4)?;
    Ok(spline(grid.samples(), y))
}

fn trapezium(r: &[f64], y: &[f64]) -> f64 {
    let mut acc = Neumaier::new();
    for k in 0..r.len() - 1 {
        acc.add(0.5 * (r[k + 1] - r[k]) * (y[k] + y[k + 1]));
    }
    acc.total()
}

fn hermite(r: &[f64], y: &[f64]) -> f64 {
    let intervals = r.len() - 1;
    let mut acc = Neumaier::new();
    let mut dr = r[1] - r[0];
    let mut slope = (y[1] - y[0]) / dr;
    for k in 0..intervals {
        let (next_dr, next_slope) = if k + 1 < intervals {
            let h = r[k + 2] - r[k + 1];
            (h, (y[k + 2] - y[k + 1]) / h)
        } else {
            (dr, slope)
        };
        acc.add(0.5 * dr * (y[k] + y[k + 1] + dr / 6.0 * (slope - next_slope)));
        dr = next_dr;
        slope = next_slope;
    }
    acc.total()
}

/// Second derivatives of the natural spline, by the Thomas algorithm.
fn natural_second_derivatives(r: &[f64], y: &[f64]) -> Vec<f64> {
    let n = r.len();
    let mut m = vec![0.0; n];
    if n < 3 {
        return m;
    }
    let interior = n - 2;
    let mut diag = vec![0.0; interior];
    let mut rhs = vec![0.0; interior];
    let mut upper = vec![0.0; interior];
    for i in 0..interior {
        let k = i + 1;
        let h0 = r[k] - r[k - 1];
        let h1 = r[k + 1] - r[k];
        diag[i] = 2.0 * (h0 + h1);
        upper[i] = h1;
        rhs[i] = 6.0 * ((y[k + 1] - y[k]) / h1 - (y[k] - y[k - 1]) / h0);
    }
    for i in 1..interior {
        let lower = r[i + 1] - r[i];
        let factor = lower / diag[i - 1];
        diag[i] -= factor * upper[i - 1];
        rhs[i] -= factor * rhs[i - 1];
    }
    for i in (0..interior).rev() {
        assert!(diag[i] > 0.0, "spline system singular at row {i}");
        let carry = if i + 1 < interior { upper[i] * m[i + 2] } else { 0.0 };
        m[i + 1] = (rhs[i] - carry) / diag[i];
    }
    m
}

fn spline(r: &[f64], y: &[f64]) -> f64 {
    let m = natural_second_derivatives(r, y);
    let mut acc = Neumaier::new();
    for k in 0..r.len() - 1 {
        let h = r[k + 1] - r[k];
        acc.add(0.5 * h * (y[k] + y[k + 1]));
        acc.add(-h * h * h * (m[k] + m[k + 1]) / 24.0);
    }
    acc.total()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(r: &[f64]) -> RadialGrid {
        RadialGrid::from_samples(r.to_vec()).unwrap()
    }

    #[test]
    fn trapezium_examples() {
        let g = grid(&[0.0, 1.0, 2.0]);
        assert_eq!(integrate_trapezium(&g, &[0.0, 2.0, 4.0]).unwrap(), 4.0);
        assert_eq!(integrate_trapezium(&g, &[0.0, 1.0, 4.0]).unwrap(), 3.0);
        let g = grid(&[0.5, 0.7, 3.0, 10.0]);
        assert!((integrate_trapezium(&g, &[2.5; 4]).unwrap() - 2.5 * 9.5).abs() < 1e-14);
    }

    #[test]
    fn hermite_examples() {
        let g = grid(&[0.0, 1.0, 2.0]);
        assert_eq!(integrate_hermite(&g, &[0.0, 2.0, 4.0]).unwrap(), 4.0);

        // y = r^2 on {0,1,2,3}: the first two intervals carry a -1/6
        // correction and become exact; the last stays at its trapezium value.
        let g = grid(&[0.0, 1.0, 2.0, 3.0]);
        let y = [0.0, 1.0, 4.0, 9.0];
        let exact_first_two = 8.0 / 3.0;
        let trap_last = 0.5 * (4.0 + 9.0);
        let got = integrate_hermite(&g, &y).unwrap();
        assert!((got - (exact_first_two + trap_last)).abs() < 1e-14, "{got}");
    }

    #[test]
    fn spline_examples() {
        let g = grid(&[0.0, 1.0, 2.0, 3.0]);
        let got = integrate_spline(&g, &[0.0, 1.0, 8.0, 27.0]).unwrap();
        // Hand-solved natural spline: 4 M1 + M2 = 36, M1 + 4 M2 = 72.
        let (m1, m2) = (4.8, 16.8);
        let oracle = (0.5 * 1.0 + 0.5 * 9.0 + 0.5 * 35.0) - (m1 + (m1 + m2) + m2) / 24.0;
        assert!((got - oracle).abs() < 1e-13, "{got} vs {oracle}");
        assert!((oracle - 20.7).abs() < 1e-13);

        let g = grid(&[0.0, 0.3, 1.1, 2.0, 4.5]);
        let y: Vec<f64> = g.samples().iter().map(|r| 3.0 * r - 1.0).collect();
        let exact = 1.5 * 4.5 * 4.5 - 4.5;
        assert!((integrate_spline(&g, &y).unwrap() / exact - 1.0).abs() < 1e-14);
    }

    #[test]
    fn errors_on_bad_input() {
        let g = grid(&[0.0, 1.0, 2.0]);
        assert!(integrate_trapezium(&g, &[1.0, 2.0]).is_err());
        assert!(integrate_spline(&g, &[1.0, 2.0, 3.0]).is_err());
        let g2 = grid(&[0.0, 1.0]);
        assert!(integrate_hermite(&g2, &[1.0, 2.0]).is_err());
    }

    #[test]
    fn parses_ids() {
        for i in Integrator::ALL {
            assert_eq!(i.id().parse::<Integrator>().unwrap(), i);
        }
        assert!("simpson".parse::<Integrator>().is_err());
    }
}
