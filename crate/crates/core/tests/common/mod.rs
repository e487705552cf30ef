#![allow(dead_code)]

use modal_core::{
    default_mode_mapping, default_radial_grid, gauss_legendre, legendre_table, synthesize_basis,
    BasisTables, GammaMatrix, LegendreTable, ModeMapping, PeakProfile, QuadratureRule, RadialGrid,
};

pub struct Fixture {
    pub grid: RadialGrid,
    pub tables: BasisTables,
    pub mapping: ModeMapping,
    pub rule: QuadratureRule,
    pub legendre: LegendreTable,
}

impl Fixture {
    pub fn new(p_max: usize, l_max: usize, radial: usize, nodes: usize) -> Self {
        let profile = PeakProfile::default();
        let grid = default_radial_grid(radial, &profile).unwrap();
        let tables = synthesize_basis(p_max, 2, l_max, &grid, &profile).unwrap();
        let mapping = default_mode_mapping(p_max).unwrap();
        let rule = gauss_legendre(nodes).unwrap();
        let legendre = legendre_table(l_max, &rule);
        Self { grid, tables, mapping, rule, legendre }
    }
}

/// `max |a - b| / max(|a|, |b|)` over entries, treating two exact zeros as
/// equal.
pub fn max_rel_dev(a: &GammaMatrix, b: &GammaMatrix) -> f64 {
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| {
            let scale = x.abs().max(y.abs());
            if scale == 0.0 {
                0.0
            } else {
                (x - y).abs() / scale
            }
        })
        .fold(0.0, f64::max)
}
