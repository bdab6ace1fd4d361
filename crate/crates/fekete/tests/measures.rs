//! Discrete measures, reference laws, discrepancy metrics, and the
//! independent equilibrium-energy oracle.

use fekete::measure::{
    equilibrium_oracle, harmonic_discrepancy, integrate, ks_between, ks_distance,
    reference_equilibrium, reference_pair, uniform_interval_measure,
};
use fekete::model::circle_points;
use fekete::{
    DiscreteMeasure, Point, ReferenceLaw, SpaceKind, Support, Weight, WeightedSet,
};
use proptest::prelude::*;

#[test]
fn equispaced_circle_ks_is_half_spacing() {
    for n in [3usize, 8, 17] {
        let mu = DiscreteMeasure::uniform(circle_points(1.0, n)).unwrap();
        let ks = ks_distance(&mu, &ReferenceLaw::UniformCircle(1.0)).unwrap();
        assert!(
            (ks - 1.0 / (2.0 * n as f64)).abs() < 1e-12,
            "n={n}: ks={ks}"
        );
    }
}

#[test]
fn circle_ks_is_rotation_invariant() {
    let base = circle_points(1.0, 9);
    let mu = DiscreteMeasure::uniform(base.clone()).unwrap();
    let ks0 = ks_distance(&mu, &ReferenceLaw::UniformCircle(1.0)).unwrap();
    let th = 0.8137;
    let rotated: Vec<Point> = base
        .iter()
        .map(|p| {
            let z = p.as_complex().unwrap() * num_complex::Complex64::from_polar(1.0, th);
            Point::complex(z.re, z.im)
        })
        .collect();
    let mu_r = DiscreteMeasure::uniform(rotated).unwrap();
    let ks1 = ks_distance(&mu_r, &ReferenceLaw::UniformCircle(1.0)).unwrap();
    assert!((ks0 - ks1).abs() < 1e-12, "{ks0} vs {ks1}");
}

#[test]
fn three_point_set_against_arcsine() {
    let mu =
        DiscreteMeasure::uniform(vec![Point::real(-1.0), Point::real(0.0), Point::real(1.0)])
            .unwrap();
    let ks = ks_distance(&mu, &ReferenceLaw::ArcsineInterval).unwrap();
    assert!((ks - 1.0 / 3.0).abs() < 1e-12, "ks={ks}");
}

#[test]
fn chebyshev_atoms_match_arcsine_closely() {
    // first-kind Chebyshev points are the exact quantile midpoints
    let mu = ReferenceLaw::ArcsineInterval.discretize(64).unwrap();
    let ks = ks_distance(&mu, &ReferenceLaw::ArcsineInterval).unwrap();
    assert!((ks - 1.0 / 128.0).abs() < 1e-12, "ks={ks}");
}

#[test]
fn single_point_sphere_discrepancy() {
    let mu = DiscreteMeasure::uniform(vec![Point::sphere_angles(0.0, 0.0)]).unwrap();
    let d = harmonic_discrepancy(&mu, 1).unwrap();
    assert!((d - 3.0_f64.sqrt()).abs() < 1e-12, "d={d}");
}

#[test]
fn quadrature_reference_measure_has_exact_moments() {
    // Gauss-Legendre polar masses times equispaced azimuths kill every
    // harmonic moment up to the exactness degree; equal masses would not
    // (the polar average of P_2 over GL nodes is 0.2, not 0).
    let (_, mu) = reference_pair(SpaceKind::Sphere2, 4).unwrap();
    let d = harmonic_discrepancy(&mu, 4).unwrap();
    assert!(d < 1e-12, "d={d}");
}

#[test]
fn ks_between_is_symmetric_and_zero_on_self() {
    let a = DiscreteMeasure::uniform(vec![
        Point::real(-0.7),
        Point::real(0.1),
        Point::real(0.6),
    ])
    .unwrap();
    let b = uniform_interval_measure(5).unwrap();
    assert!(ks_between(&a, &a).unwrap() < 1e-15);
    let d1 = ks_between(&a, &b).unwrap();
    let d2 = ks_between(&b, &a).unwrap();
    assert!((d1 - d2).abs() < 1e-15);
    assert!(d1 > 0.0);
}

#[test]
fn reference_equilibrium_dispatch() {
    let interval = WeightedSet::with_default_grid(Support::Interval, Weight::Zero, 3, 4).unwrap();
    assert!(matches!(
        reference_equilibrium(&interval).unwrap(),
        ReferenceLaw::ArcsineInterval
    ));
    let circle = WeightedSet::with_default_grid(Support::Circle(2.0), Weight::Zero, 3, 4).unwrap();
    match reference_equilibrium(&circle).unwrap() {
        ReferenceLaw::UniformCircle(r) => assert!((r - 2.0).abs() < 1e-15),
        other => panic!("unexpected law {other:?}"),
    }
    let sphere = WeightedSet::with_default_grid(Support::Sphere, Weight::Zero, 3, 4).unwrap();
    assert!(matches!(
        reference_equilibrium(&sphere).unwrap(),
        ReferenceLaw::UniformSphere
    ));
}

#[test]
fn weighted_interval_equilibrium_comes_from_the_oracle() {
    let set =
        WeightedSet::with_default_grid(Support::Interval, Weight::Quadratic(0.3), 6, 4).unwrap();
    match reference_equilibrium(&set).unwrap() {
        ReferenceLaw::OracleTable(mu) => {
            assert!(mu.len() > 100);
            let total: f64 = mu.masses.iter().sum();
            assert!((total - 1.0).abs() < 1e-10);
        }
        other => panic!("unexpected law {other:?}"),
    }
}

#[test]
fn oracle_recovers_the_interval_equilibrium() {
    // independent of every Gram/determinant code path: direct discrete
    // minimization of the logarithmic energy
    let set = WeightedSet::with_default_grid(Support::Interval, Weight::Zero, 10, 4).unwrap();
    let res = equilibrium_oracle(&set, 400).unwrap();
    // energy of the arcsine law is log 2
    assert!(
        (res.energy - 2.0_f64.ln()).abs() < 1e-2,
        "energy {} vs {}",
        res.energy,
        2.0_f64.ln()
    );
    let ks = ks_distance(&res.measure, &ReferenceLaw::ArcsineInterval).unwrap();
    assert!(ks < 1e-2, "ks={ks}");
    // optimality gap certificate from the projected gradient
    assert!(res.gap < 1e-4, "gap={}", res.gap);
}

#[test]
fn oracle_energy_trace_is_monotone_after_projection_settles() {
    let set = WeightedSet::with_default_grid(Support::Interval, Weight::Zero, 5, 4).unwrap();
    let res = equilibrium_oracle(&set, 200).unwrap();
    let tr = &res.energy_trace;
    assert!(tr.len() >= 2);
    assert!(tr.last().unwrap() <= &(tr[0] + 1e-12));
}

#[test]
fn integrate_weights_by_masses() {
    let mu = DiscreteMeasure::new(
        vec![Point::real(-1.0), Point::real(1.0)],
        vec![0.25, 0.75],
    )
    .unwrap();
    let v = integrate(&mu, |p| p.as_complex().unwrap().re).unwrap();
    assert!((v - 0.5).abs() < 1e-15);
}

#[test]
fn measure_validation_rejects_bad_masses() {
    let atoms = vec![Point::real(0.0), Point::real(0.5)];
    assert!(DiscreteMeasure::new(atoms.clone(), vec![0.5, 0.4]).is_err()); // sum != 1
    assert!(DiscreteMeasure::new(atoms.clone(), vec![-0.1, 1.1]).is_err()); // negative
    assert!(DiscreteMeasure::new(atoms.clone(), vec![0.5]).is_err()); // length
    assert!(DiscreteMeasure::new(vec![], vec![]).is_err()); // empty
}

#[test]
fn sphere_ks_is_rejected() {
    let mu = DiscreteMeasure::uniform(vec![Point::sphere_angles(0.4, 0.4)]).unwrap();
    assert!(ks_distance(&mu, &ReferenceLaw::UniformSphere).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ks_is_within_unit_bounds(xs in proptest::collection::vec(-1.0_f64..1.0, 1..12)) {
        let atoms: Vec<Point> = xs.iter().map(|x| Point::real(*x)).collect();
        let mu = DiscreteMeasure::uniform(atoms).unwrap();
        let ks = ks_distance(&mu, &ReferenceLaw::ArcsineInterval).unwrap();
        prop_assert!((0.0..=1.0).contains(&ks));
    }

    #[test]
    fn circle_ks_bounded_by_worst_case(n in 1_usize..24) {
        let mu = DiscreteMeasure::uniform(circle_points(1.0, n)).unwrap();
        let ks = ks_distance(&mu, &ReferenceLaw::UniformCircle(1.0)).unwrap();
        prop_assert!(ks <= 0.5 + 1e-12);
    }
}
