//! The distortion (Christoffel-Darboux) function rho, Bergman measures,
//! growth diagnostics for the measure's norm-comparison quality, and the
//! extremal-weight estimator built from rho.

use crate::gram::GramSystem;
use crate::measure::DiscreteMeasure;
use crate::model::WeightedSet;
use crate::{Error, Point, Result};
use serde::Serialize;

/// The distortion function sampled over an evaluation grid.
#[derive(Debug, Clone)]
pub struct BergmanField {
    pub k: usize,
    pub grid: Vec<Point>,
    pub rho_values: Vec<f64>,
    pub sup_rho: f64,
}

/// rho(mu, k phi)(x): the squared norm of point evaluation at x on the
/// L^2(mu, k phi) section space,
///
/// ```text
/// rho(x) = sum_i |t_i(x)|^2 e^{-2k phi(x)}
/// ```
///
/// over any (mu, k phi)-orthonormal sections t_i. Nonnegative; integrates
/// to N_k against mu (trace identity); independent of the assembly basis.
/// x may lie off the support (sections extend as polynomials).
pub fn rho_at(gs: &GramSystem, x: &Point) -> Result<f64> {
    let y = gs.section_values(x)?;
    let phi = gs.set.phi(x);
    if !phi.is_finite() {
        return Err(Error::Domain("weight is not finite at the evaluation point".into()));
    }
    Ok(y.norm_squared() * (-2.0 * gs.k as f64 * phi).exp())
}

/// rho sampled on an explicit grid.
pub fn rho_field(gs: &GramSystem, grid: &[Point]) -> Result<BergmanField> {
    let mut rho_values = Vec::with_capacity(grid.len());
    let mut sup_rho = f64::NEG_INFINITY;
    for p in grid {
        let r = rho_at(gs, p)?;
        sup_rho = sup_rho.max(r);
        rho_values.push(r);
    }
    Ok(BergmanField {
        k: gs.k,
        grid: grid.to_vec(),
        rho_values,
        sup_rho,
    })
}

/// The Bergman measure beta(mu, k phi): mu reweighted by rho/N_k, so mass
/// `m_i * rho(x_i) / N_k` sits at atom x_i. The trace identity makes the
/// masses sum to 1; the sum is checked to 1e-8 and then renormalized so the
/// result satisfies the measure invariant exactly.
pub fn bergman_measure(gs: &GramSystem) -> Result<DiscreteMeasure> {
    let n = gs.n as f64;
    let mut masses = Vec::with_capacity(gs.measure.len());
    for (p, m) in gs.measure.atoms.iter().zip(&gs.measure.masses) {
        masses.push(m * rho_at(gs, p)? / n);
    }
    let total: f64 = masses.iter().sum();
    if (total - 1.0).abs() > 1e-8 {
        return Err(Error::Convergence {
            what: "Bergman measure trace identity".into(),
            residual: (total - 1.0).abs(),
        });
    }
    for m in &mut masses {
        *m /= total;
    }
    DiscreteMeasure::new(gs.measure.atoms.clone(), masses)
}

/// Growth table of sup rho across degrees with fitted exponents.
///
/// `poly_exponent` is the least-squares slope of log sup rho against
/// log(k+1); `exp_rate` is the slope of log(sup rho / N_k) against k, i.e.
/// the exponential growth rate beyond the dimension factor. The measure is
/// flagged as having subexponentially distorted sup norms iff
/// `exp_rate <= 0.01` (a pragmatic cutoff).
#[derive(Debug, Clone, Serialize)]
pub struct GrowthDiagnostic {
    pub degrees: Vec<usize>,
    pub sup_rho: Vec<f64>,
    pub poly_exponent: f64,
    pub exp_rate: f64,
    pub bm_flag: bool,
}

/// Least-squares slope of ys against xs.
pub(crate) fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    num / den
}

/// Tabulate sup over the set's candidate grid of rho(mu, k phi) for each
/// listed degree and fit the growth exponents. Needs >= 3 degrees and a
/// nonsingular system at each.
pub fn bm_growth_diagnostic(
    set: &WeightedSet,
    mu: &DiscreteMeasure,
    degrees: &[usize],
) -> Result<GrowthDiagnostic> {
    if degrees.len() < 3 {
        return Err(Error::Domain(format!(
            "growth fit needs >= 3 degrees, got {}",
            degrees.len()
        )));
    }
    let mut sups = Vec::with_capacity(degrees.len());
    for &k in degrees {
        let gs = GramSystem::new(set, mu, k)?;
        if gs.is_singular() {
            return Err(Error::Singular(format!("measure is degenerate at degree {k}")));
        }
        sups.push(rho_field(&gs, &set.grid)?.sup_rho);
    }
    let log_sup: Vec<f64> = sups.iter().map(|s| s.ln()).collect();
    let log_deg: Vec<f64> = degrees.iter().map(|&k| ((k + 1) as f64).ln()).collect();
    let deg: Vec<f64> = degrees.iter().map(|&k| k as f64).collect();
    let model = set.model();
    let log_ratio: Vec<f64> = degrees
        .iter()
        .zip(&sups)
        .map(|(&k, s)| (s / model.dimension(k) as f64).ln())
        .collect();
    let poly_exponent = ls_slope(&log_deg, &log_sup);
    let exp_rate = ls_slope(&deg, &log_ratio);
    Ok(GrowthDiagnostic {
        degrees: degrees.to_vec(),
        sup_rho: sups,
        poly_exponent,
        exp_rate,
        bm_flag: exp_rate <= 0.01,
    })
}

/// The computable envelope proxy `psi_k(x) = phi(x) + log(rho(x)) / (2k)`.
/// For measures with well-behaved norm comparison this converges to the
/// equilibrium weight of the support: log^+|x| on the disk/circle models,
/// 0 on the unweighted interval.
pub fn extremal_weight_estimate(gs: &GramSystem, x: &Point) -> Result<f64> {
    if gs.k == 0 {
        return Err(Error::Domain("envelope estimate needs degree >= 1".into()));
    }
    let rho = rho_at(gs, x)?;
    if rho <= 0.0 {
        return Err(Error::Domain("nonpositive distortion value".into()));
    }
    Ok(gs.set.phi(x) + rho.ln() / (2.0 * gs.k as f64))
}
