//! Fast internal consistency suites behind `fekete selftest`: exact
//! identities the rest of the crate relies on, each run in well under a
//! second. The fault-injection switch perturbs one comparison on purpose so
//! the harness itself can be seen to fail.

use crate::bergman::{bergman_measure, rho_at};
use crate::gram::{
    det_section_l2_identity_check, gram_logdet_perturbed, l_functional, standard_reference,
    GramSystem,
};
use crate::measure::{integrate, uniform_interval_measure, DiscreteMeasure};
use crate::model::{circle_points, Support, Weight, WeightedSet};
use crate::search::recursively_extremal;
use crate::{Point, Result};

/// Result of one named check.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check<F>(name: &str, f: F) -> CheckOutcome
where
    F: FnOnce() -> Result<(bool, String)>,
{
    match f() {
        Ok((pass, detail)) => CheckOutcome {
            name: name.into(),
            pass,
            detail,
        },
        Err(e) => CheckOutcome {
            name: name.into(),
            pass: false,
            detail: format!("error: {e}"),
        },
    }
}

fn interval_set(k: usize) -> Result<WeightedSet> {
    WeightedSet::with_default_grid(Support::Interval, Weight::Zero, k, 8)
}

/// Determinant-vs-Gram identity on a small atom set; `fault` scales the
/// Gram side by 1.001 to prove the comparison has teeth.
fn det_identity_case(
    set: &WeightedSet,
    mu: &DiscreteMeasure,
    k: usize,
    fault: bool,
) -> Result<(bool, String)> {
    let (lhs, mut rhs) = det_section_l2_identity_check(set, mu, k)?;
    if fault {
        rhs *= 1.001;
    }
    let ratio = lhs / rhs;
    Ok((
        (ratio - 1.0).abs() <= 1e-12,
        format!("lhs={lhs:.6e} rhs={rhs:.6e} ratio-1={:.2e}", ratio - 1.0),
    ))
}

/// All suites; set `inject_fault` to force one deliberate failure.
pub fn run_selftest(inject_fault: bool) -> Vec<CheckOutcome> {
    let mut out = Vec::new();

    out.push(check("det-identity-circle", || {
        let set = WeightedSet::with_default_grid(Support::Circle(1.0), Weight::Zero, 1, 8)?;
        let mu = DiscreteMeasure::uniform(circle_points(1.0, 5))?;
        det_identity_case(&set, &mu, 1, inject_fault)
    }));
    out.push(check("det-identity-interval", || {
        let set = interval_set(1)?;
        let mu = uniform_interval_measure(4)?;
        det_identity_case(&set, &mu, 1, inject_fault)
    }));
    out.push(check("det-identity-weighted", || {
        let set = WeightedSet::with_default_grid(Support::Interval, Weight::Quadratic(0.4), 1, 8)?;
        let mu = uniform_interval_measure(5)?;
        det_identity_case(&set, &mu, 1, inject_fault)
    }));

    out.push(check("balanced-configurations", || {
        let s5: f64 = 1.0 / 5.0_f64.sqrt();
        let cases: Vec<(WeightedSet, usize, Vec<Point>)> = vec![
            (interval_set(1)?, 1, vec![Point::real(-1.0), Point::real(1.0)]),
            (
                interval_set(2)?,
                2,
                vec![Point::real(-1.0), Point::real(0.0), Point::real(1.0)],
            ),
            (
                interval_set(3)?,
                3,
                vec![
                    Point::real(-1.0),
                    Point::real(-s5),
                    Point::real(s5),
                    Point::real(1.0),
                ],
            ),
            (
                WeightedSet::with_default_grid(Support::Circle(1.0), Weight::Zero, 1, 8)?,
                1,
                vec![Point::real(1.0), Point::real(-1.0)],
            ),
            (
                WeightedSet::with_default_grid(Support::Circle(1.0), Weight::Zero, 2, 8)?,
                2,
                circle_points(1.0, 3),
            ),
            (
                WeightedSet::with_default_grid(Support::Interval, Weight::Quadratic(0.4), 1, 8)?,
                1,
                vec![Point::real(-1.0), Point::real(1.0)],
            ),
        ];
        let mut worst = 0.0_f64;
        for (set, k, pts) in &cases {
            let delta = DiscreteMeasure::uniform(pts.clone())?;
            let gs = GramSystem::new(set, &delta, *k)?;
            let beta = bergman_measure(&gs)?;
            for (a, b) in beta.masses.iter().zip(delta.masses.iter()) {
                worst = worst.max((a - b).abs());
            }
        }
        Ok((
            worst <= 1e-8,
            format!("{} configurations, max mass error {worst:.2e}", cases.len()),
        ))
    }));

    out.push(check("trace-identity", || {
        let set = WeightedSet::with_default_grid(Support::Interval, Weight::Quadratic(0.3), 4, 8)?;
        let mu = uniform_interval_measure(60)?;
        let gs = GramSystem::new(&set, &mu, 4)?;
        let mut trace = 0.0;
        for (p, m) in mu.atoms.iter().zip(&mu.masses) {
            trace += m * rho_at(&gs, p)?;
        }
        let err = (trace - gs.n as f64).abs();
        Ok((err <= 1e-8, format!("trace={trace:.12} err={err:.2e}")))
    }));

    out.push(check("weight-shift-covariance", || {
        let k = 3usize;
        let set = WeightedSet::with_default_grid(Support::Interval, Weight::Quadratic(0.2), k, 8)?;
        let mu = uniform_interval_measure(40)?;
        let base = GramSystem::new(&set, &mu, k)?;
        let c = 0.37;
        let shifted = gram_logdet_perturbed(&set, &mu, k, |_| 1.0, c)?;
        let want = -2.0 * k as f64 * base.n as f64 * c;
        let err = (shifted - base.logdet - want).abs();
        Ok((err <= 1e-10, format!("logdet shift err {err:.2e}")))
    }));

    out.push(check("weight-derivative", || {
        let k = 2usize;
        let set = interval_set(k)?;
        let mu = uniform_interval_measure(50)?;
        let gs = GramSystem::new(&set, &mu, k)?;
        let beta = bergman_measure(&gs)?;
        let v = |p: &Point| {
            let x = p.as_complex().unwrap().re;
            x * x
        };
        let analytic = -2.0 * k as f64 * gs.n as f64 * integrate(&beta, v)?;
        let h = 1e-5;
        let fd = (gram_logdet_perturbed(&set, &mu, k, v, h)?
            - gram_logdet_perturbed(&set, &mu, k, v, -h)?)
            / (2.0 * h);
        let err = (fd - analytic).abs();
        let tol = 1e-6_f64.max(1e-4 * analytic.abs());
        Ok((err <= tol, format!("fd={fd:.8} analytic={analytic:.8}")))
    }));

    out.push(check("recursive-construction", || {
        let k = 2usize;
        let set = interval_set(k)?;
        let mu = uniform_interval_measure(100)?;
        let trace = recursively_extremal(&set, &mu, k)?;
        let n = trace.n;
        let mut ok = true;
        let mut detail = String::new();
        for (i, r) in trace.rho_values.iter().enumerate() {
            let floor = (n - i) as f64;
            if *r < floor - 1e-9 {
                ok = false;
                detail = format!("step value {r:.6} below floor {floor}");
            }
        }
        let scale = trace
            .eval_at_points
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        for i in 0..n {
            for j in 0..i {
                if trace.eval_at_points[(i, j)].norm() > 1e-10 * scale.max(1.0) {
                    ok = false;
                    detail = format!(
                        "triangularity violated at ({i},{j}): {:.2e}",
                        trace.eval_at_points[(i, j)].norm()
                    );
                }
            }
        }
        let log_fact: f64 = (1..=n).map(|i| (i as f64).ln()).sum();
        if 2.0 * trace.log_abs_det_weighted < log_fact - 1e-9 {
            ok = false;
            detail = format!(
                "squared determinant below factorial floor: {:.6} < {log_fact:.6}",
                2.0 * trace.log_abs_det_weighted
            );
        }
        if ok {
            detail = format!(
                "step values {:?}",
                trace
                    .rho_values
                    .iter()
                    .map(|r| (r * 1e4).round() / 1e4)
                    .collect::<Vec<_>>()
            );
        }
        Ok((ok, detail))
    }));

    out.push(check("volume-functional-reference", || {
        let reference = standard_reference(crate::model::SpaceKind::ComplexLine, 4)?;
        let v = l_functional(&reference, &reference)?;
        Ok((v == 0.0, format!("reference value {v:.3e}")))
    }));

    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_run_passes_everything() {
        let outcomes = run_selftest(false);
        for o in &outcomes {
            assert!(o.pass, "{}: {}", o.name, o.detail);
        }
        assert!(outcomes.len() >= 6);
    }

    #[test]
    fn injected_fault_is_caught() {
        let outcomes = run_selftest(true);
        assert!(outcomes.iter().any(|o| !o.pass));
    }
}
