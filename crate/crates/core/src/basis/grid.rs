use crate::error::{ModalError, Result};

/// Shape of the synthetic radial profile and the grid built around it.
///
/// The projected basis is sharply peaked at `center` (the last-scattering
/// distance) and nearly flat elsewhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakProfile {
    pub center: f64,
    pub width: f64,
    /// Constant tail added to the Gaussian.
    pub floor: f64,
    pub r_max: f64,
    /// How far the peak moves across the multipole range. Zero gives the
    /// same profile at every `l`.
    pub drift: f64,
}

impl Default for PeakProfile {
    fn default() -> Self {
        Self { center: 14_000.0, width: 150.0, floor: 0.05, r_max: 16_000.0, drift: 0.0 }
    }
}

impl PeakProfile {
    /// `exp(-(r - center)^2 / (2 width^2)) + floor`.
    #[inline]
    pub fn weight(&self, r: f64) -> f64 {
        let d = (r - self.center) / self.width;
        (-0.5 * d * d).exp() + self.floor
    }

    /// The profile for a multipole at position `x` in `[-1, 1]` across the
    /// range: the peak sits at `center + drift * x`. Equal to
    /// [`weight`](Self::weight) when `drift` is zero.
    #[inline]
    pub fn weight_at(&self, r: f64, x: f64) -> f64 {
        let d = (r - self.center - self.drift * x) / self.width;
        (-0.5 * d * d).exp() + self.floor
    }

    /// Boundaries of the refined middle zone, `center -/+ 5 width`.
    pub fn peak_zone(&self) -> (f64, f64) {
        (self.center - 5.0 * self.width, self.center + 5.0 * self.width)
    }
}

/// Strictly increasing radial sample points.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    r: Vec<f64>,
    zone_counts: Vec<usize>,
}

impl RadialGrid {
    /// A single-zone grid from arbitrary samples.
    pub fn from_samples(r: Vec<f64>) -> Result<Self> {
        let n = r.len();
        Self::with_zones(r, vec![n])
    }

    fn with_zones(r: Vec<f64>, zone_counts: Vec<usize>) -> Result<Self> {
        if r.len() < 2 {
            return Err(ModalError::InvalidParameter(format!(
                "radial grid needs at least 2 samples, got {}",
                r.len()
            )));
        }
        if let Some(k) = r.iter().position(|x| !x.is_finite() || *x < 0.0) {
            return Err(ModalError::InvalidParameter(format!(
                "radial sample {k} is negative or non-finite: {}",
                r[k]
            )));
        }
        if let Some(k) = r.windows(2).position(|w| w[1] <= w[0]) {
            return Err(ModalError::InvalidParameter(format!(
                "radial samples not strictly increasing at index {}",
                k + 1
            )));
        }
        debug_assert_eq!(zone_counts.iter().sum::<usize>(), r.len());
        Ok(Self { r, zone_counts })
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.r
    }

    /// Number of points in each resolution zone.
    pub fn zone_counts(&self) -> &[usize] {
        &self.zone_counts
    }

    /// Interval widths `r[k+1] - r[k]`.
    pub fn spacings(&self) -> impl Iterator<Item = f64> + '_ {
        self.r.windows(2).map(|w| w[1] - w[0])
    }

    pub fn first(&self) -> f64 {
        self.r[0]
    }

    pub fn last(&self) -> f64 {
        self.r[self.r.len() - 1]
    }

    pub fn fingerprint(&self) -> u64 {
        super::fnv1a(self.r.iter().map(|x| x.to_bits()))
    }
}

/// Three uniformly spaced zones `[0, a)`, `[a, b]`, `(b, r_max]` around the
/// peak, with `a, b = center -/+ 5 width`, holding 25%, 50% and 25% of the
/// points.
pub fn default_radial_grid(total: usize, profile: &PeakProfile) -> Result<RadialGrid> {
    if total < 12 {
        return Err(ModalError::InvalidParameter(format!(
            "radial grid needs at least 12 points, got {total}"
        )));
    }
    let (a, b) = profile.peak_zone();
    if !(a > 0.0 && b < profile.r_max) {
        return Err(ModalError::InvalidParameter(format!(
            "peak zone [{a}, {b}] must lie strictly inside (0, {})",
            profile.r_max
        )));
    }
    let outer = (total as f64 / 4.0).round() as usize;
    let middle = total - 2 * outer;

    let mut r = Vec::with_capacity(total);
    r.extend((0..outer).map(|k| k as f64 * a / outer as f64));
    r.extend((0..middle).map(|k| a + k as f64 * (b - a) / (middle - 1) as f64));
    // Pin the zone boundary exactly; `a + (m-1) * (b-a)/(m-1)` can round.
    *r.last_mut().expect("middle zone is non-empty") = b;
    r.extend((1..=outer).map(|k| b + k as f64 * (profile.r_max - b) / outer as f64));
    *r.last_mut().expect("outer zone is non-empty") = profile.r_max;

    RadialGrid::with_zones(r, vec![outer, middle, outer])
}
