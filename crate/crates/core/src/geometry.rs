//! Multipole-triple geometry: selection rules, 3j weights and the flattened
//! ordered domain.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{ModalError, Result};
use crate::sum::Neumaier;

/// A triple of multipoles `(l1, l2, l3)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultipoleTriple {
    pub l1: usize,
    pub l2: usize,
    pub l3: usize,
}

impl MultipoleTriple {
    pub const fn new(l1: usize, l2: usize, l3: usize) -> Self {
        Self { l1, l2, l3 }
    }

    #[inline]
    pub fn as_array(&self) -> [usize; 3] {
        [self.l1, self.l2, self.l3]
    }

    #[inline]
    pub fn sum(&self) -> usize {
        self.l1 + self.l2 + self.l3
    }

    pub fn is_ordered(&self) -> bool {
        self.l1 <= self.l2 && self.l2 <= self.l3
    }

    /// The same multipoles in non-decreasing order.
    pub fn sorted(&self) -> Self {
        let mut a = self.as_array();
        a.sort_unstable();
        Self::new(a[0], a[1], a[2])
    }
}

impl fmt::Display for MultipoleTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.l1, self.l2, self.l3)
    }
}

impl From<(usize, usize, usize)> for MultipoleTriple {
    fn from((l1, l2, l3): (usize, usize, usize)) -> Self {
        Self::new(l1, l2, l3)
    }
}

/// Which form of the geometric weight the direct engine uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum H2Mode {
    /// Factorial-free Gosper approximation.
    #[default]
    Gosper,
    /// Closed-form 3j symbol from log-factorials.
    Exact,
}

impl H2Mode {
    pub fn id(&self) -> &'static str {
        match self {
            H2Mode::Gosper => "gosper",
            H2Mode::Exact => "exact",
        }
    }
}

impl fmt::Display for H2Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl std::str::FromStr for H2Mode {
    type Err = ModalError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gosper" => Ok(H2Mode::Gosper),
            "exact" => Ok(H2Mode::Exact),
            other => Err(ModalError::InvalidParameter(format!("unknown h2 mode `{other}`"))),
        }
    }
}

/// 1 when the triple closes a triangle and has an even sum, 0 otherwise.
pub fn theta_indicator(t: MultipoleTriple) -> u8 {
    let s = t.sorted();
    let triangle = s.l3 <= s.l1 + s.l2;
    let even = t.sum().is_multiple_of(2);
    u8::from(triangle && even)
}

/// Natural-log factorials `ln k!` for `k` up to a fixed bound.
///
/// Entries are accumulated with compensated summation so that the large
/// differences formed for `l` in the thousands stay accurate.
#[derive(Debug, Clone)]
pub struct Wigner3jTable {
    ln_factorial: Vec<f64>,
}

impl Wigner3jTable {
    /// Table sufficient for every triple with components up to `l_max`.
    pub fn new(l_max: usize) -> Self {
        let len = 3 * l_max + 2;
        let mut ln_factorial = Vec::with_capacity(len + 1);
        let mut acc = Neumaier::new();
        ln_factorial.push(0.0);
        for k in 1..=len {
            acc.add((k as f64).ln());
            ln_factorial.push(acc.total());
        }
        Self { ln_factorial }
    }

    pub fn max_l(&self) -> usize {
        (self.ln_factorial.len() - 3) / 3
    }

    #[inline]
    fn ln_fact(&self, k: usize) -> f64 {
        self.ln_factorial[k]
    }

    /// Squared 3j symbol `(l1 l2 l3; 0 0 0)^2`.
    ///
    /// With `L = 2g` even the closed form is
    /// `(L-2l1)!(L-2l2)!(L-2l3)!/(L+1)! * [g!/((g-l1)!(g-l2)!(g-l3)!)]^2`.
    pub fn three_j_squared(&self, t: MultipoleTriple) -> f64 {
        if theta_indicator(t) == 0 {
            return 0.0;
        }
        let t = t.sorted();
        let big_l = t.sum();
        assert!(
            big_l + 1 < self.ln_factorial.len(),
            "triple {t} exceeds log-factorial table (l_max {})",
            self.max_l()
        );
        let g = big_l / 2;
        let ln = self.ln_fact(big_l - 2 * t.l1)
            + self.ln_fact(big_l - 2 * t.l2)
            + self.ln_fact(big_l - 2 * t.l3)
            - self.ln_fact(big_l + 1)
            + 2.0
                * (self.ln_fact(g)
                    - self.ln_fact(g - t.l1)
                    - self.ln_fact(g - t.l2)
                    - self.ln_fact(g - t.l3));
        ln.exp()
    }

    /// Exact geometric weight `h^2`; zero whenever `theta_indicator` is zero.
    pub fn h2(&self, t: MultipoleTriple) -> f64 {
        let w = self.three_j_squared(t);
        if w == 0.0 {
            return 0.0;
        }
        odd_product(t.sorted()) / (4.0 * PI) * w
    }
}

#[inline]
fn odd_product(t: MultipoleTriple) -> f64 {
    ((2 * t.l1 + 1) * (2 * t.l2 + 1) * (2 * t.l3 + 1)) as f64
}

/// Exact `h^2` for a single triple. Builds a log-factorial table sized to the
/// triple; use [`Wigner3jTable`] when evaluating many triples.
pub fn h2_exact(t: MultipoleTriple) -> f64 {
    if theta_indicator(t) == 0 {
        return 0.0;
    }
    let s = t.sorted();
    Wigner3jTable::new(s.l3).h2(t)
}

/// The factorial-free Gosper form of `h^2` without the `1/(2 pi^2)` factor.
#[inline]
fn gosper_kernel(t: MultipoleTriple) -> f64 {
    let big_l = t.sum() as f64;
    let l1 = big_l - 2.0 * t.l1 as f64;
    let l2 = big_l - 2.0 * t.l2 as f64;
    let l3 = big_l - 2.0 * t.l3 as f64;
    let third = 1.0 / 3.0;
    let sixth = 1.0 / 6.0;
    let ratio = odd_product(t) * (big_l + third)
        / ((big_l + 1.0) * (l1 + third) * (l2 + third) * (l3 + third));
    ratio * ((l1 + sixth) * (l2 + sixth) * (l3 + sixth) / (big_l + sixth)).sqrt()
}

/// Gosper approximation to `h^2`. The caller is responsible for the
/// selection rules; the formula is evaluated unconditionally.
pub fn h2_gosper(t: MultipoleTriple) -> f64 {
    gosper_kernel(t) / (2.0 * PI * PI)
}

/// Number of distinct orderings of the triple: 1, 3 or 6.
pub fn permutation_multiplicity(t: MultipoleTriple) -> u32 {
    let [a, b, c] = t.as_array();
    match (a == b, b == c, a == c) {
        (true, true, _) => 1,
        (false, false, false) => 6,
        _ => 3,
    }
}

/// The full Gosper prefactor of the direct sum,
/// `h2_gosper / (36 v1 v2 v3 sqrt(C1 C2 C3))`.
///
/// `c` and `v` hold the power spectrum and weight at `l1, l2, l3`.
pub fn geometric_prefactor(t: MultipoleTriple, c: [f64; 3], v: [f64; 3]) -> Result<f64> {
    for (l, value) in t.as_array().into_iter().zip(c) {
        if value.is_nan() || value <= 0.0 {
            return Err(ModalError::NonPositiveSpectrum { l, value });
        }
    }
    Ok(prefactor_unchecked(gosper_kernel(t), c, v) / (72.0 * PI * PI))
}

#[inline]
pub(crate) fn prefactor_unchecked(weight: f64, c: [f64; 3], v: [f64; 3]) -> f64 {
    weight / (v[0] * v[1] * v[2] * (c[0] * c[1] * c[2]).sqrt())
}

/// The ordered triples with `theta = 1` and every component in
/// `[l_min, l_max]`, enumerated lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangularDomain {
    l_min: usize,
    l_max: usize,
    triples: Vec<MultipoleTriple>,
}

impl TriangularDomain {
    pub fn l_min(&self) -> usize {
        self.l_min
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<MultipoleTriple> {
        self.triples.get(index).copied()
    }

    /// Flattened index of an ordered valid triple.
    pub fn index_of(&self, t: MultipoleTriple) -> Option<usize> {
        self.triples.binary_search(&t).ok()
    }

    pub fn as_slice(&self) -> &[MultipoleTriple] {
        &self.triples
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = MultipoleTriple> + '_ {
        self.triples.iter().copied()
    }
}

/// Flattens the triangular `(l1, l2, l3)` loop nest into one index range.
///
/// `l3` starts at `l2` when `l1` is even and at `l2 + 1` otherwise, stepping
/// by two, so every visited triple already has an even sum.
pub fn enumerate_domain(l_min: usize, l_max: usize) -> Result<TriangularDomain> {
    if l_min < 2 {
        return Err(ModalError::InvalidParameter(format!(
            "l_min must be at least 2, got {l_min}"
        )));
    }
    if l_min > l_max {
        return Err(ModalError::InvalidParameter(format!(
            "l_min {l_min} exceeds l_max {l_max}"
        )));
    }
    let mut triples = Vec::new();
    for l1 in l_min..=l_max {
        for l2 in l1..=l_max {
            let start = if (l1 + 2 * l2) % 2 == 0 { l2 } else { l2 + 1 };
            let stop = (l1 + l2).min(l_max);
            triples.extend(
                (start..=stop)
                    .step_by(2)
                    .map(|l3| MultipoleTriple::new(l1, l2, l3)),
            );
        }
    }
    Ok(TriangularDomain {
        l_min,
        l_max,
        triples,
    })
}
