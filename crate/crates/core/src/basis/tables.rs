use crate::error::{ModalError, Result};
use crate::quadrature::legendre_values;

use super::{PeakProfile, RadialGrid};

/// Raw storage for [`BasisTables`]. Multipole-indexed arrays start at `l_min`
/// and run with `l` fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisParts {
    pub p_max: usize,
    pub l_min: usize,
    pub l_max: usize,
    pub radial_count: usize,
    /// `C_l`, length `L = l_max - l_min + 1`.
    pub c: Vec<f64>,
    /// `v_l`, length `L`.
    pub v: Vec<f64>,
    /// `q_i(l)`, shape `[p_max][L]`.
    pub q: Vec<f64>,
    /// `q~_i(r_x, l)`, shape `[p_max][R][L]`.
    pub q_tilde: Vec<f64>,
}

/// Sampled one-dimensional basis functions plus the power spectrum and
/// `v_l` weights. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisTables {
    parts: BasisParts,
}

impl BasisTables {
    /// Validates shapes, finiteness and `C_l > 0`.
    pub fn from_parts(parts: BasisParts) -> Result<Self> {
        let BasisParts { p_max, l_min, l_max, radial_count, .. } = parts;
        if p_max == 0 {
            return Err(ModalError::InvalidParameter("p_max must be at least 1".into()));
        }
        if l_min > l_max {
            return Err(ModalError::InvalidParameter(format!(
                "l_min {l_min} exceeds l_max {l_max}"
            )));
        }
        let n_l = l_max - l_min + 1;
        let expect = [
            ("C", parts.c.len(), n_l),
            ("v", parts.v.len(), n_l),
            ("q", parts.q.len(), p_max * n_l),
            ("q_tilde", parts.q_tilde.len(), p_max * radial_count * n_l),
        ];
        for (name, found, want) in expect {
            if found != want {
                return Err(ModalError::DimensionMismatch(format!(
                    "table {name} has {found} entries, expected {want}"
                )));
            }
        }
        for (table, values) in [
            ("C", &parts.c),
            ("v", &parts.v),
            ("q", &parts.q),
            ("q_tilde", &parts.q_tilde),
        ] {
            if let Some(index) = values.iter().position(|x| !x.is_finite()) {
                return Err(ModalError::NonFinite { table, index });
            }
        }
        if let Some(k) = parts.c.iter().position(|&c| c <= 0.0) {
            return Err(ModalError::NonPositiveSpectrum { l: l_min + k, value: parts.c[k] });
        }
        Ok(Self { parts })
    }

    pub fn into_parts(self) -> BasisParts {
        self.parts
    }

    pub fn parts(&self) -> &BasisParts {
        &self.parts
    }

    pub fn p_max(&self) -> usize {
        self.parts.p_max
    }

    pub fn l_min(&self) -> usize {
        self.parts.l_min
    }

    pub fn l_max(&self) -> usize {
        self.parts.l_max
    }

    /// Number of multipoles `L`.
    pub fn n_l(&self) -> usize {
        self.parts.l_max - self.parts.l_min + 1
    }

    pub fn radial_count(&self) -> usize {
        self.parts.radial_count
    }

    #[inline]
    fn offset(&self, l: usize) -> usize {
        debug_assert!(l >= self.parts.l_min && l <= self.parts.l_max, "l = {l} out of range");
        l - self.parts.l_min
    }

    #[inline]
    pub fn c(&self, l: usize) -> f64 {
        self.parts.c[self.offset(l)]
    }

    #[inline]
    pub fn v(&self, l: usize) -> f64 {
        self.parts.v[self.offset(l)]
    }

    #[inline]
    pub fn q(&self, i: usize, l: usize) -> f64 {
        self.parts.q[i * self.n_l() + self.offset(l)]
    }

    /// `q_i` over the whole multipole range.
    #[inline]
    pub fn q_row(&self, i: usize) -> &[f64] {
        let n = self.n_l();
        &self.parts.q[i * n..(i + 1) * n]
    }

    #[inline]
    pub fn q_tilde(&self, i: usize, x: usize, l: usize) -> f64 {
        self.q_tilde_row(i, x)[self.offset(l)]
    }

    /// `q~_i(r_x, .)` over the whole multipole range.
    #[inline]
    pub fn q_tilde_row(&self, i: usize, x: usize) -> &[f64] {
        let n = self.n_l();
        let start = (i * self.parts.radial_count + x) * n;
        &self.parts.q_tilde[start..start + n]
    }

    pub fn c_values(&self) -> &[f64] {
        &self.parts.c
    }

    pub fn v_values(&self) -> &[f64] {
        &self.parts.v
    }

    /// Largest relative deviation of `v_l` from `(2l+1)^(1/6)`.
    pub fn v_weight_deviation(&self) -> f64 {
        self.parts
            .v
            .iter()
            .enumerate()
            .map(|(k, &v)| {
                let l = (self.parts.l_min + k) as f64;
                (v / (2.0 * l + 1.0).powf(1.0 / 6.0) - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn fingerprint(&self) -> u64 {
        let p = &self.parts;
        super::fnv1a(
            [p.p_max, p.l_min, p.l_max, p.radial_count]
                .into_iter()
                .map(|x| x as u64)
                .chain([&p.c, &p.v, &p.q, &p.q_tilde].into_iter().flatten().map(|x| x.to_bits())),
        )
    }
}

/// Deterministic stand-in for the cosmological inputs.
///
/// * `q_i(l)` is the Legendre polynomial of degree `i` at
///   `x = 2 (l - l_min) / (l_max - l_min) - 1` (`x = -1` when the range is a
///   single multipole).
/// * `C_l = 1 / (l (l + 1))`.
/// * `v_l = (2l + 1)^(1/6)`.
/// * `q~_i(r, l) = q_i(l) * w(r)` with `w` the peaked [`PeakProfile::weight`].
///   A nonzero [`PeakProfile::drift`] moves the peak with `l`, using
///   [`PeakProfile::weight_at`] at the same `x` as `q`.
pub fn synthesize_basis(
    p_max: usize,
    l_min: usize,
    l_max: usize,
    grid: &RadialGrid,
    profile: &PeakProfile,
) -> Result<BasisTables> {
    if p_max == 0 {
        return Err(ModalError::InvalidParameter("p_max must be at least 1".into()));
    }
    if l_min < 2 || l_min > l_max {
        return Err(ModalError::InvalidParameter(format!(
            "need 2 <= l_min <= l_max, got l_min={l_min}, l_max={l_max}"
        )));
    }
    let n_l = l_max - l_min + 1;
    let radial_count = grid.len();

    let span = (l_max - l_min) as f64;
    let position = |k: usize| if span > 0.0 { 2.0 * k as f64 / span - 1.0 } else { -1.0 };
    let mut q = vec![0.0; p_max * n_l];
    for k in 0..n_l {
        let x = position(k);
        for (i, value) in legendre_values(x, p_max - 1).into_iter().enumerate() {
            q[i * n_l + k] = value;
        }
    }

    let ls = l_min..=l_max;
    let c = ls.clone().map(|l| 1.0 / (l as f64 * (l as f64 + 1.0))).collect();
    let v = ls.map(|l| (2.0 * l as f64 + 1.0).powf(1.0 / 6.0)).collect();

    let mut q_tilde = Vec::with_capacity(p_max * radial_count * n_l);
    for i in 0..p_max {
        let row = &q[i * n_l..(i + 1) * n_l];
        for &r in grid.samples() {
            q_tilde.extend(row.iter().enumerate().map(|(k, &qv)| qv * profile.weight_at(r, position(k))));
        }
    }

    BasisTables::from_parts(BasisParts { p_max, l_min, l_max, radial_count, c, v, q, q_tilde })
}
