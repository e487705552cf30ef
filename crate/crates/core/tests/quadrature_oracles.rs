//! Quadrature rules against closed-form integrals.

use modal_core::quadrature::legendre_values;
use modal_core::{
    default_radial_grid, gauss_legendre, legendre_table, Integrator, PeakProfile, RadialGrid,
};
use proptest::prelude::*;

fn monomial_integral(k: u32) -> f64 {
    if k % 2 == 1 {
        0.0
    } else {
        2.0 / (k as f64 + 1.0)
    }
}

#[test]
fn gauss_legendre_is_exact_to_degree_2n_minus_1() {
    for n in 1..=64usize {
        let rule = gauss_legendre(n).unwrap();
        assert!((rule.weights().iter().sum::<f64>() - 2.0).abs() < 1e-13);
        for k in 0..(2 * n as u32) {
            let got = rule.integrate(|x| x.powi(k as i32));
            assert!((got - monomial_integral(k)).abs() < 1e-13, "n={n} k={k}: {got}");
        }
    }
}

#[test]
fn gauss_legendre_nodes_are_sorted_and_symmetric() {
    for n in [2, 3, 10, 51, 200, 1001] {
        let rule = gauss_legendre(n).unwrap();
        let nodes = rule.nodes();
        assert!(nodes.windows(2).all(|w| w[0] < w[1]));
        for i in 0..n {
            assert_eq!(nodes[i], -nodes[n - 1 - i]);
            assert_eq!(rule.weights()[i], rule.weights()[n - 1 - i]);
        }
    }
}

#[test]
fn legendre_polynomials_are_orthogonal() {
    let l_max = 40;
    let rule = gauss_legendre(QuadratureRule::exact_order_for(l_max)).unwrap();
    let table = legendre_table(l_max, &rule);
    for l in 0..=l_max {
        for lp in 0..=l_max {
            let got: f64 = (0..rule.len())
                .map(|m| rule.weights()[m] * table.value(l, m) * table.value(lp, m))
                .sum();
            let want = if l == lp { 2.0 / (2 * l + 1) as f64 } else { 0.0 };
            assert!((got - want).abs() < 1e-12, "({l},{lp}): {got}");
        }
    }
}

#[test]
fn triple_legendre_integral_matches_3j_weight() {
    // ∫ P_a P_b P_c dmu = 2 (a b c; 0 0 0)^2.
    let l_max = 30;
    let rule = gauss_legendre(QuadratureRule::exact_order_for(l_max)).unwrap();
    let table = legendre_table(l_max, &rule);
    let w3j = modal_core::Wigner3jTable::new(l_max);
    for (a, b, c) in [(2, 2, 2), (2, 3, 5), (10, 12, 20), (30, 30, 30), (3, 4, 5)] {
        let got: f64 = (0..rule.len())
            .map(|m| rule.weights()[m] * table.value(a, m) * table.value(b, m) * table.value(c, m))
            .sum();
        let want = 2.0 * w3j.three_j_squared(modal_core::MultipoleTriple::new(a, b, c));
        assert!((got - want).abs() < 1e-14, "({a},{b},{c}): {got} vs {want}");
    }
}

#[test]
fn legendre_values_match_closed_forms() {
    for x in [-1.0, -0.3, 0.0, 0.7, 1.0] {
        let p = legendre_values(x, 4);
        assert_eq!(p[0], 1.0);
        assert_eq!(p[1], x);
        assert!((p[2] - 0.5 * (3.0 * x * x - 1.0)).abs() < 1e-15);
        assert!((p[3] - 0.5 * (5.0 * x * x * x - 3.0 * x)).abs() < 1e-15);
        assert!((p[4] - (35.0 * x.powi(4) - 30.0 * x * x + 3.0) / 8.0).abs() < 1e-15);
    }
}

use modal_core::QuadratureRule;

fn peaked(profile: &PeakProfile, r: f64) -> f64 {
    r * r * profile.weight(r).powi(3)
}

/// Closed form of `∫ r^2 (g + f)^3 dr` with `g` the Gaussian part and `f` the
/// floor, via a dense composite Simpson rule on each zone.
fn peaked_reference(profile: &PeakProfile) -> f64 {
    let simpson = |a: f64, b: f64, n: usize| {
        let h = (b - a) / n as f64;
        let mut acc = peaked(profile, a) + peaked(profile, b);
        for k in 1..n {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * peaked(profile, a + k as f64 * h);
        }
        acc * h / 3.0
    };
    let (a, b) = profile.peak_zone();
    simpson(0.0, a, 20_000) + simpson(a, b, 200_000) + simpson(b, profile.r_max, 20_000)
}

#[test]
fn integrators_order_and_converge_on_peaked_function() {
    let profile = PeakProfile::default();
    let reference = peaked_reference(&profile);
    let mut previous = [f64::INFINITY; 3];
    for total in [54, 108, 216, 432, 864, 1768] {
        let grid = default_radial_grid(total, &profile).unwrap();
        let y: Vec<f64> = grid.samples().iter().map(|&r| peaked(&profile, r)).collect();
        let errs: Vec<f64> = Integrator::ALL
            .iter()
            .map(|i| (i.integrate(&grid, &y).unwrap() / reference - 1.0).abs())
            .collect();
        for k in 0..3 {
            assert!(errs[k] < previous[k], "R={total} {:?}", Integrator::ALL[k]);
            previous[k] = errs[k];
        }
        if total >= 216 {
            assert!(errs[2] <= errs[1] && errs[1] <= errs[0], "R={total}: {errs:?}");
        }
    }
    assert!(previous[2] < 1e-11);
}

#[test]
fn integrators_are_exact_on_linear_data() {
    let grid = RadialGrid::from_samples(vec![0.0, 0.4, 1.5, 2.0, 3.7, 5.0]).unwrap();
    let y: Vec<f64> = grid.samples().iter().map(|r| 3.0 - 2.0 * r).collect();
    let want = 3.0 * 5.0 - 25.0;
    for i in Integrator::ALL {
        assert!((i.integrate(&grid, &y).unwrap() - want).abs() < 1e-13, "{i}");
    }
}

#[test]
fn hermite_is_exact_on_quadratics_before_last_interval() {
    // The last interval has no forward slope and keeps its trapezium value.
    let grid = RadialGrid::from_samples((0..11).map(|k| k as f64 * 0.3).collect()).unwrap();
    let y: Vec<f64> = grid.samples().iter().map(|r| r * r).collect();
    let want = 2.7f64.powi(3) / 3.0 + 0.15 * (2.7 * 2.7 + 3.0 * 3.0);
    assert!((Integrator::Hermite.integrate(&grid, &y).unwrap() - want).abs() < 1e-13);
}

#[test]
fn spline_small_example() {
    // y = r^3 on 0, 1, 2, 3: natural spline moments 4.8 and 16.8, integral 20.7.
    let grid = RadialGrid::from_samples(vec![0.0, 1.0, 2.0, 3.0]).unwrap();
    let y = [0.0, 1.0, 8.0, 27.0];
    assert!((Integrator::Spline.integrate(&grid, &y).unwrap() - 20.7).abs() < 1e-12);
    assert!((Integrator::Trapezium.integrate(&grid, &y).unwrap() - 22.5).abs() < 1e-12);
}

#[test]
fn integrators_reject_short_or_mismatched_input() {
    let grid = RadialGrid::from_samples(vec![0.0, 1.0, 2.0]).unwrap();
    assert!(Integrator::Spline.integrate(&grid, &[1.0, 2.0, 3.0]).is_err());
    assert!(Integrator::Trapezium.integrate(&grid, &[1.0, 2.0]).is_err());
    assert!(Integrator::Hermite.integrate(&grid, &[1.0, 2.0, 3.0]).is_ok());
}

proptest! {
    #[test]
    fn integrators_are_linear(
        ys in prop::collection::vec(-10.0f64..10.0, 12),
        zs in prop::collection::vec(-10.0f64..10.0, 12),
        a in -3.0f64..3.0,
        b in -3.0f64..3.0,
    ) {
        let grid = RadialGrid::from_samples((0..12).map(|k| (k as f64).powf(1.3)).collect()).unwrap();
        let mix: Vec<f64> = ys.iter().zip(&zs).map(|(y, z)| a * y + b * z).collect();
        for i in Integrator::ALL {
            let lhs = i.integrate(&grid, &mix).unwrap();
            let rhs = a * i.integrate(&grid, &ys).unwrap() + b * i.integrate(&grid, &zs).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-10 * (1.0 + lhs.abs()));
        }
    }
}
