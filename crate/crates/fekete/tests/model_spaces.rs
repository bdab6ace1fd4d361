//! Model-space plumbing: grids, quadrature, bases, and change-of-basis data.

use fekete::model::{circle_points, default_grid, gauss_legendre, working_basis};
use fekete::search::log_abs_det;
use fekete::{Basis, Point, SpaceKind, Support, Weight, WeightedSet};
use num_complex::Complex64;
use proptest::prelude::*;

#[test]
fn interval_grid_is_open_sorted_and_sized() {
    let grid = default_grid(&Support::Interval, 7, 8).unwrap();
    assert_eq!(grid.len(), 64);
    let xs: Vec<f64> = grid.iter().map(|p| p.as_complex().unwrap().re).collect();
    for w in xs.windows(2) {
        assert!(w[0] < w[1]);
    }
    assert!(xs[0] > -1.0 && *xs.last().unwrap() < 1.0);
}

#[test]
fn circle_grid_starts_at_angle_zero() {
    let grid = default_grid(&Support::Circle(2.0), 3, 4).unwrap();
    assert_eq!(grid.len(), 28);
    let z0 = grid[0].as_complex().unwrap();
    assert!((z0.re - 2.0).abs() < 1e-15 && z0.im.abs() < 1e-15);
    for p in &grid {
        assert!((p.as_complex().unwrap().norm() - 2.0).abs() < 1e-12);
    }
}

#[test]
fn sphere_grid_points_are_unit() {
    let grid = default_grid(&Support::Sphere, 3, 2).unwrap();
    assert_eq!(grid.len(), 8 * 14);
    for p in &grid {
        let v = p.as_unit3().unwrap();
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        assert!((n - 1.0).abs() < 1e-12);
    }
}

#[test]
fn undersized_oversample_is_rejected() {
    assert!(default_grid(&Support::Interval, 5, 1).is_err());
    assert!(WeightedSet::with_default_grid(Support::Interval, Weight::Zero, 5, 0).is_err());
}

#[test]
fn gauss_legendre_is_exact_to_degree_2n_minus_1() {
    let n = 6;
    let (xs, ws) = gauss_legendre(n);
    for deg in 0..(2 * n) {
        let quad: f64 = xs
            .iter()
            .zip(&ws)
            .map(|(x, w)| w * x.powi(deg as i32))
            .sum();
        let exact = if deg % 2 == 0 {
            2.0 / (deg as f64 + 1.0)
        } else {
            0.0
        };
        assert!((quad - exact).abs() < 1e-13, "degree {deg}: {quad} vs {exact}");
    }
}

#[test]
fn chebyshev_coefficients_reproduce_evaluations() {
    let k = 9;
    let c = Basis::Chebyshev.coeff_matrix(k);
    for &x in &[-0.93, -0.2, 0.41, 0.988] {
        let direct = Basis::Chebyshev.eval(k, &Point::real(x)).unwrap();
        let mono = Basis::Monomial.eval(k, &Point::real(x)).unwrap();
        for j in 0..=k {
            let via_coeffs: Complex64 = (0..=k).map(|i| mono[i] * c[(i, j)]).sum();
            assert!((via_coeffs - direct[j]).norm() < 1e-12);
        }
    }
}

#[test]
fn scaled_monomial_matches_radius_normalization() {
    let k = 5;
    let r = 2.5;
    let basis = Basis::ScaledMonomial(r);
    let z = Complex64::new(1.1, -2.0);
    let vals = basis.eval(k, &Point::complex(z.re, z.im)).unwrap();
    for j in 0..=k {
        let want = (z / r).powu(j as u32);
        assert!((vals[j] - want).norm() < 1e-13);
    }
}

#[test]
fn basis_change_logdet_matches_numeric_determinant() {
    for (basis, k) in [
        (Basis::Chebyshev, 6),
        (Basis::ScaledMonomial(2.0), 6),
        (Basis::ScaledMonomial(0.5), 4),
        (Basis::Monomial, 7),
    ] {
        let c = basis.coeff_matrix(k).map(|v| Complex64::new(v, 0.0));
        let numeric = log_abs_det(&c);
        let formula = basis.logdet_change(k);
        assert!(
            (numeric - formula).abs() < 1e-10,
            "{basis:?} at degree {k}: {numeric} vs {formula}"
        );
    }
}

#[test]
fn harmonic_basis_dimension_and_addition_theorem() {
    let k = 4;
    let basis = Basis::canonical(SpaceKind::Sphere2);
    for p in [
        Point::sphere_angles(0.3, 1.2),
        Point::sphere_angles(2.0, 4.9),
        Point::sphere_angles(1.5707, 0.0),
    ] {
        let vals = basis.eval(k, &p).unwrap();
        assert_eq!(vals.len(), (k + 1) * (k + 1));
        for l in 0..=k {
            let band: f64 = (0..(2 * l + 1))
                .map(|i| vals[l * l + i].norm_sqr())
                .sum();
            assert!(
                (band - (2 * l + 1) as f64).abs() < 1e-10,
                "band {l}: {band}"
            );
        }
    }
}

#[test]
fn working_basis_choices() {
    assert_eq!(working_basis(&Support::Interval), Basis::Chebyshev);
    assert_eq!(working_basis(&Support::Circle(1.0)), Basis::Monomial);
    assert_eq!(
        working_basis(&Support::Circle(3.0)),
        Basis::ScaledMonomial(3.0)
    );
    assert_eq!(working_basis(&Support::Sphere), Basis::Harmonic);
}

#[test]
fn custom_grid_validation() {
    // off-support point rejected
    let bad = WeightedSet::new(
        Support::Interval,
        Weight::Zero,
        vec![Point::real(0.0), Point::complex(0.0, 0.4)],
    );
    assert!(bad.is_err());
    // sphere accepts only the zero weight
    let bad = WeightedSet::new(
        Support::Sphere,
        Weight::Quadratic(1.0),
        vec![Point::sphere_angles(0.3, 0.3)],
    );
    assert!(bad.is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn circle_points_lie_on_their_circle(r in 0.1_f64..5.0, n in 1_usize..40) {
        for p in circle_points(r, n) {
            let z = p.as_complex().unwrap();
            prop_assert!((z.norm() - r).abs() < 1e-12);
        }
    }

    #[test]
    fn quadratic_weight_is_finite_on_interval_grids(c in -3.0_f64..3.0, k in 1_usize..12) {
        let set = WeightedSet::with_default_grid(Support::Interval, Weight::Quadratic(c), k, 4).unwrap();
        for p in &set.grid {
            prop_assert!(set.phi(p).is_finite());
        }
    }
}
