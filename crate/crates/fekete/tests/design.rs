//! Optimal design measures, Lagrange interpolation, and the distortion
//! pairings with their growth reports.

use fekete::bergman::{bergman_measure, rho_at};
use fekete::design::{
    default_reference_measure, distortion, distortion_growth_report, lagrange_system,
    lebesgue_constant, node_average, optimal_measure_fixed_point, DistortionPair, OptimalOpts,
};
use fekete::gram::GramSystem;
use fekete::search::{fekete_search, FeketeOpts};
use fekete::{
    Configuration, DiscreteMeasure, Point, Support, Weight, WeightedSet,
};

fn closed_interval_grid(half: usize) -> Vec<Point> {
    (0..=2 * half)
        .map(|j| Point::real((j as f64 - half as f64) / half as f64))
        .collect()
}

fn interval_set_closed(half: usize) -> WeightedSet {
    WeightedSet::new(Support::Interval, Weight::Zero, closed_interval_grid(half)).unwrap()
}

#[test]
fn degree_one_optimal_measure_splits_mass_at_the_endpoints() {
    let set = interval_set_closed(20);
    let init = DiscreteMeasure::uniform(set.grid.clone()).unwrap();
    let opts = OptimalOpts {
        tol: 1e-5,
        max_iter: 200_000,
    };
    let res = optimal_measure_fixed_point(&set, &init, 1, &opts).unwrap();
    assert!(res.converged, "sup rho {} after {}", res.sup_rho, res.iterations);
    let mu = &res.measure;
    let mass_at = |x: f64| -> f64 {
        mu.atoms
            .iter()
            .zip(&mu.masses)
            .filter(|(p, _)| (p.as_complex().unwrap().re - x).abs() < 1e-14)
            .map(|(_, m)| *m)
            .sum()
    };
    assert!((mass_at(1.0) - 0.5).abs() < 1e-3, "m(+1) = {}", mass_at(1.0));
    assert!((mass_at(-1.0) - 0.5).abs() < 1e-3, "m(-1) = {}", mass_at(-1.0));
}

#[test]
fn fixed_point_iteration_is_monotone_and_meets_the_bound() {
    let set = WeightedSet::with_default_grid(Support::Interval, Weight::Zero, 5, 8).unwrap();
    let init = DiscreteMeasure::uniform(set.grid.clone()).unwrap();
    let res = optimal_measure_fixed_point(&set, &init, 5, &OptimalOpts::default()).unwrap();
    assert!(res.converged);
    assert!(res.sup_rho <= 6.0 * (1.0 + 1e-3));
    for w in res.logdet_trace.windows(2) {
        assert!(w[1] >= w[0] - 1e-12, "trace decreased: {} -> {}", w[0], w[1]);
    }
}

#[test]
fn optimal_measure_is_nearly_a_bergman_fixed_point() {
    let set = WeightedSet::with_default_grid(Support::Interval, Weight::Zero, 3, 8).unwrap();
    let init = DiscreteMeasure::uniform(set.grid.clone()).unwrap();
    let opts = OptimalOpts {
        tol: 1e-5,
        max_iter: 200_000,
    };
    let res = optimal_measure_fixed_point(&set, &init, 3, &opts).unwrap();
    assert!(res.converged);
    let beta = bergman_measure(&GramSystem::new(&set, &res.measure, 3).unwrap()).unwrap();
    let mut max_diff = 0.0_f64;
    for (a, b) in beta.masses.iter().zip(&res.measure.masses) {
        max_diff = max_diff.max((a - b).abs());
    }
    assert!(max_diff < 1e-5, "max mass drift {max_diff}");
}

#[test]
fn circle_lagrange_functions_have_closed_forms() {
    let set = WeightedSet::with_default_grid(Support::Circle(1.0), Weight::Zero, 1, 8).unwrap();
    let p = Configuration::new(vec![Point::real(1.0), Point::real(-1.0)]);
    let ls = lagrange_system(&set, 1, &p).unwrap();
    // e_1 = (1+z)/2 and e_2 = (1-z)/2
    for th in [0.3_f64, 1.9, 4.4] {
        let z = num_complex::Complex64::from_polar(1.0, th);
        let v = ls.eval(&Point::complex(z.re, z.im)).unwrap();
        let want1 = (1.0 + z) / 2.0;
        let want2 = (1.0 - z) / 2.0;
        assert!((v[0] - want1).norm() < 1e-12);
        assert!((v[1] - want2).norm() < 1e-12);
    }
    // Kronecker property at the nodes
    for (j, x) in p.points.iter().enumerate() {
        let v = ls.eval(x).unwrap();
        for i in 0..2 {
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((v[i].norm() - want).abs() < 1e-8);
        }
    }
}

#[test]
fn lebesgue_constants_bound_fekete_but_not_equispaced_nodes() {
    let set = interval_set_closed(400);
    let k = 8;
    let fek = fekete_search(&set, k, &FeketeOpts::default()).unwrap();
    let leb = lebesgue_constant(&set, k, &fek.config).unwrap();
    assert!(leb >= 1.0 - 1e-12);
    assert!(leb <= (k + 1) as f64 + 1e-6, "fekete lebesgue {leb}");

    let eq: Vec<Point> = (0..=k)
        .map(|j| Point::real(-1.0 + 2.0 * j as f64 / k as f64))
        .collect();
    let leb_eq = lebesgue_constant(&set, k, &Configuration::new(eq)).unwrap();
    assert!(leb_eq > 10.0, "equispaced lebesgue {leb_eq}");
}

#[test]
fn node_average_distortion_never_undershoots_the_dimension() {
    // the trace identity forces sup rho(delta_P) >= N at the nodes
    let set = WeightedSet::with_default_grid(Support::Interval, Weight::Quadratic(0.3), 4, 8)
        .unwrap();
    let fek = fekete_search(&set, 4, &FeketeOpts::default()).unwrap();
    let delta = node_average(&fek.config).unwrap();
    let gs = GramSystem::new(&set, &delta, 4).unwrap();
    let sup_at_nodes = fek
        .config
        .points
        .iter()
        .map(|x| rho_at(&gs, x).unwrap())
        .fold(f64::NEG_INFINITY, f64::max);
    assert!(sup_at_nodes >= 5.0 - 1e-9);
    // and each node of a unisolvent set carries rho exactly N
    for x in &fek.config.points {
        let r = rho_at(&gs, x).unwrap();
        assert!((r - 5.0).abs() < 1e-8, "rho at node {r}");
    }
}

#[test]
fn inf2_distortion_of_grid_fekete_meets_the_dimension_bound() {
    let set = interval_set_closed(300);
    let k = 8;
    let n = (k + 1) as f64;
    let fek = fekete_search(&set, k, &FeketeOpts::default()).unwrap();
    let inf2 = distortion(&set, k, None, &fek.config, DistortionPair::Inf2, false).unwrap();
    assert!(inf2 >= n.sqrt() - 1e-9, "inf2 {inf2}");
    assert!(inf2 <= n + 1e-6, "inf2 {inf2}");
}

#[test]
fn two_two_distortion_ignores_constant_weight_shifts() {
    let k = 3;
    let base = WeightedSet::with_default_grid(Support::Interval, Weight::Zero, k, 8).unwrap();
    let shifted = WeightedSet::new(
        Support::Interval,
        Weight::Tabulated {
            points: base.grid.clone(),
            values: vec![0.45; base.grid.len()],
        },
        base.grid.clone(),
    )
    .unwrap();
    let fek = fekete_search(&base, k, &FeketeOpts::default()).unwrap();
    let mu = default_reference_measure(&base, k).unwrap();
    let a = distortion(&base, k, Some(&mu), &fek.config, DistortionPair::TwoTwo, false).unwrap();
    let b =
        distortion(&shifted, k, Some(&mu), &fek.config, DistortionPair::TwoTwo, false).unwrap();
    assert!((a - b).abs() < 1e-10 * a.max(1.0), "{a} vs {b}");
}

#[test]
fn inf1_bound_distinguishes_certified_configurations() {
    let set = interval_set_closed(200);
    let k = 5;
    let n = (k + 1) as f64;
    let fek = fekete_search(&set, k, &FeketeOpts::default()).unwrap();
    let certified =
        distortion(&set, k, None, &fek.config, DistortionPair::Inf1Bound, true).unwrap();
    assert_eq!(certified, n);
    // uncertified maximizers still meet the bound: every weighted Lagrange
    // function peaks at 1 on the grid
    let raw = distortion(&set, k, None, &fek.config, DistortionPair::Inf1Bound, false).unwrap();
    assert!((raw - n).abs() < 1e-6, "raw bound {raw}");

    let clustered = Configuration::new(
        (0..=k).map(|j| Point::real(0.1 * j as f64)).collect(),
    );
    let bad =
        distortion(&set, k, None, &clustered, DistortionPair::Inf1Bound, false).unwrap();
    assert!(bad > 10.0 * n, "clustered bound {bad}");
}

#[test]
fn fekete_growth_is_tame_and_equispaced_growth_is_not() {
    let eval_set = interval_set_closed(300);
    let degrees = [6usize, 10, 14];
    let mut configs = Vec::new();
    for &k in &degrees {
        configs.push(fekete_search(&eval_set, k, &FeketeOpts::default()).unwrap().config);
    }
    let report = distortion_growth_report(
        &eval_set,
        &degrees,
        &configs,
        DistortionPair::InfInf,
        true,
    )
    .unwrap();
    assert!(report.tame, "rate {}", report.exp_rate);

    let eq_degrees = [10usize, 20, 30];
    let eq_configs: Vec<Configuration> = eq_degrees
        .iter()
        .map(|&k| {
            Configuration::new(
                (0..=k)
                    .map(|j| Point::real(-1.0 + 2.0 * j as f64 / k as f64))
                    .collect(),
            )
        })
        .collect();
    let eq_report = distortion_growth_report(
        &eval_set,
        &eq_degrees,
        &eq_configs,
        DistortionPair::InfInf,
        false,
    )
    .unwrap();
    assert!(!eq_report.tame);
    assert!(eq_report.exp_rate > 0.1, "rate {}", eq_report.exp_rate);
}

#[test]
fn default_reference_measures_match_their_supports() {
    let interval = WeightedSet::with_default_grid(Support::Interval, Weight::Zero, 4, 8).unwrap();
    let mu = default_reference_measure(&interval, 4).unwrap();
    assert_eq!(mu.len(), 10);
    assert!((mu.masses.iter().sum::<f64>() - 1.0).abs() < 1e-12);

    let circle = WeightedSet::with_default_grid(Support::Circle(2.0), Weight::Zero, 4, 8).unwrap();
    let mu = default_reference_measure(&circle, 4).unwrap();
    assert_eq!(mu.len(), 18);
    for p in &mu.atoms {
        assert!((p.as_complex().unwrap().norm() - 2.0).abs() < 1e-12);
    }

    let custom_pts = vec![Point::real(-0.5), Point::real(0.0), Point::real(0.5)];
    let custom = WeightedSet::new(
        Support::Custom(custom_pts.clone()),
        Weight::Zero,
        custom_pts,
    )
    .unwrap();
    let mu = default_reference_measure(&custom, 1).unwrap();
    assert_eq!(mu.len(), 3);
}

#[test]
fn distortion_validates_its_inputs() {
    let set = WeightedSet::with_default_grid(Support::Interval, Weight::Zero, 3, 8).unwrap();
    let short = Configuration::new(vec![Point::real(0.0), Point::real(0.5)]);
    assert!(distortion(&set, 3, None, &short, DistortionPair::InfInf, false).is_err());
    assert!(lagrange_system(&set, 3, &short).is_err());

    let p = Configuration::new(vec![
        Point::real(-0.9),
        Point::real(-0.3),
        Point::real(0.3),
        Point::real(0.9),
    ]);
    assert!(distortion_growth_report(
        &set,
        &[3, 4],
        &[p.clone(), p.clone()],
        DistortionPair::InfInf,
        false
    )
    .is_err());
    assert!(distortion_growth_report(
        &set,
        &[3, 4, 5],
        &[p.clone(), p.clone()],
        DistortionPair::InfInf,
        false
    )
    .is_err());

    // degenerate nodes: duplicated point
    let degenerate = Configuration::new(vec![
        Point::real(0.1),
        Point::real(0.1),
        Point::real(0.5),
        Point::real(0.9),
    ]);
    assert!(lagrange_system(&set, 3, &degenerate).is_err());
}
