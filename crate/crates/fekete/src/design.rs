//! Optimal design measures and interpolation distortion.
//!
//! The fixed-point iteration rescales atom masses by the distortion function
//! until the sup of the distortion meets the dimension bound, producing a
//! D-optimal discrete measure. The distortion functionals quantify how far a
//! node set is from an ideal interpolation family in four norm pairings.

use crate::bergman::{ls_slope, rho_at};
use crate::gram::GramSystem;
use crate::measure::{reference_pair, uniform_interval_measure, DiscreteMeasure, ReferenceLaw};
use crate::model::{working_basis, Basis, SpaceKind, Support, WeightedSet};
use crate::{Configuration, Error, Point, Result};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

/// Options for [`optimal_measure_fixed_point`].
#[derive(Debug, Clone, Copy)]
pub struct OptimalOpts {
    /// Relative slack in the stopping rule `sup rho <= N (1 + tol)`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for OptimalOpts {
    fn default() -> OptimalOpts {
        OptimalOpts {
            tol: 1e-3,
            max_iter: 10_000,
        }
    }
}

/// Outcome of the multiplicative fixed-point iteration.
#[derive(Debug, Clone)]
pub struct OptimalMeasureResult {
    pub measure: DiscreteMeasure,
    pub k: usize,
    pub n: usize,
    pub iterations: usize,
    pub converged: bool,
    /// Sup of the distortion over the atoms at the final measure.
    pub sup_rho: f64,
    /// log det of the Gram matrix before each mass update; nondecreasing.
    pub logdet_trace: Vec<f64>,
}

/// Multiplicative fixed-point iteration for a D-optimal measure supported on
/// the atoms of `init`: masses update by `m <- m * rho / N`, which preserves
/// total mass by the trace identity and increases the Gram log-determinant.
pub fn optimal_measure_fixed_point(
    set: &WeightedSet,
    init: &DiscreteMeasure,
    k: usize,
    opts: &OptimalOpts,
) -> Result<OptimalMeasureResult> {
    let n = set.model().dimension(k);
    if init.len() < n {
        return Err(Error::Domain(format!(
            "initial measure has {} atoms, degree {k} needs at least {n}",
            init.len()
        )));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::Domain("stopping tolerance must be positive".into()));
    }
    let mut mu = init.clone();
    let mut trace = Vec::new();
    let mut iterations = 0usize;
    let (converged, sup_rho) = loop {
        let gs = GramSystem::new(set, &mu, k)?;
        if gs.is_singular() {
            return Err(Error::Singular(format!(
                "measure degenerated at iteration {iterations}"
            )));
        }
        trace.push(gs.logdet);
        let rho: Vec<f64> = mu
            .atoms
            .iter()
            .map(|x| rho_at(&gs, x))
            .collect::<Result<_>>()?;
        let sup = rho.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if sup <= n as f64 * (1.0 + opts.tol) {
            break (true, sup);
        }
        if iterations >= opts.max_iter {
            break (false, sup);
        }
        iterations += 1;
        let mut masses: Vec<f64> = mu
            .masses
            .iter()
            .zip(rho.iter())
            .map(|(m, r)| m * r / n as f64)
            .collect();
        // trace identity keeps the total at 1; renormalize the rounding away
        let total: f64 = masses.iter().sum();
        for m in &mut masses {
            *m /= total;
        }
        mu = DiscreteMeasure::new(mu.atoms.clone(), masses)?;
    };
    Ok(OptimalMeasureResult {
        measure: mu,
        k,
        n,
        iterations,
        converged,
        sup_rho,
        logdet_trace: trace,
    })
}

/// Lagrange interpolation basis for a unisolvent node set: `n` functions in
/// the degree-`k` space with `e_i(x_j) = delta_ij`.
#[derive(Debug, Clone)]
pub struct LagrangeSystem {
    pub config: Configuration,
    pub k: usize,
    pub n: usize,
    basis: Basis,
    /// Row i holds the working-basis coefficients of e_i.
    coeffs: DMatrix<Complex64>,
    /// k * phi at each node, for weighted norms.
    pub node_kphi: Vec<f64>,
}

/// Build the Lagrange system by inverting the working-basis evaluation
/// matrix at the nodes.
pub fn lagrange_system(set: &WeightedSet, k: usize, p: &Configuration) -> Result<LagrangeSystem> {
    let n = set.model().dimension(k);
    if p.len() != n {
        return Err(Error::Mismatch(format!(
            "configuration has {} points, degree {k} needs {n}",
            p.len()
        )));
    }
    let basis = working_basis(&set.support);
    // bt[(l, j)] = b_l(x_j); Lagrange coefficients solve A bt = I
    let mut bt = DMatrix::<Complex64>::zeros(n, n);
    for (j, x) in p.points.iter().enumerate() {
        bt.set_column(j, &basis.eval(k, x)?);
    }
    let coeffs = bt
        .lu()
        .try_inverse()
        .ok_or_else(|| Error::Singular("nodes are degenerate for this degree".into()))?;
    let node_kphi = p.points.iter().map(|x| k as f64 * set.phi(x)).collect();
    Ok(LagrangeSystem {
        config: p.clone(),
        k,
        n,
        basis,
        coeffs,
        node_kphi,
    })
}

impl LagrangeSystem {
    /// Values of all Lagrange functions at `x`.
    pub fn eval(&self, x: &Point) -> Result<DVector<Complex64>> {
        let b = self.basis.eval(self.k, x)?;
        Ok(&self.coeffs * b)
    }
}

/// Weighted Lebesgue constant: sup over the grid and the nodes of
/// `sum_i |e_i(x)| e^{-k phi(x) + k phi(x_i)}`. Always >= 1, and bounded by
/// the number of nodes when the nodes maximize the weighted determinant over
/// the grid.
pub fn lebesgue_constant(set: &WeightedSet, k: usize, p: &Configuration) -> Result<f64> {
    let ls = lagrange_system(set, k, p)?;
    let mut sup = f64::NEG_INFINITY;
    for x in set.grid.iter().chain(p.points.iter()) {
        let vals = ls.eval(x)?;
        let wx = -(k as f64) * set.phi(x);
        let mut s = 0.0;
        for i in 0..ls.n {
            s += vals[i].norm() * (wx + ls.node_kphi[i]).exp();
        }
        sup = sup.max(s);
    }
    Ok(sup)
}

/// Norm pairings for interpolation distortion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DistortionPair {
    /// sup-to-sup operator norm of interpolation: the Lebesgue constant.
    InfInf,
    /// sup norm against the L2 norm of the node-averaging measure.
    Inf2,
    /// L2(mu) against L2 of the node-averaging measure.
    TwoTwo,
    /// Upper estimate for the sup-to-L1 pairing; equals N for certified
    /// determinant maximizers.
    Inf1Bound,
}

/// Uniform averaging measure on the nodes of a configuration.
pub fn node_average(p: &Configuration) -> Result<DiscreteMeasure> {
    DiscreteMeasure::uniform(p.points.clone())
}

/// Reference measure used when the caller does not pin one down: uniform on
/// the support (equilibrium-type for the unweighted model domains), with
/// enough atoms to integrate degree-2k products exactly.
pub fn default_reference_measure(set: &WeightedSet, k: usize) -> Result<DiscreteMeasure> {
    match set.support {
        Support::Interval => uniform_interval_measure(2 * (k + 1)),
        Support::Circle(r) | Support::Disk(r) => {
            ReferenceLaw::UniformCircle(r).discretize(2 * (2 * k + 1))
        }
        Support::Sphere => Ok(reference_pair(SpaceKind::Sphere2, k)?.1),
        Support::Custom(_) => DiscreteMeasure::uniform(set.grid.clone()),
    }
}

/// Interpolation distortion of the node set `p` in the requested pairing.
///
/// `mu` only enters the `TwoTwo` pairing (defaulting to the uniform measure
/// of the support); `fekete_certified` only enters `Inf1Bound`, where a
/// certified determinant maximizer admits the exact dimension bound.
pub fn distortion(
    set: &WeightedSet,
    k: usize,
    mu: Option<&DiscreteMeasure>,
    p: &Configuration,
    pair: DistortionPair,
    fekete_certified: bool,
) -> Result<f64> {
    let n = set.model().dimension(k);
    if p.len() != n {
        return Err(Error::Mismatch(format!(
            "configuration has {} points, degree {k} needs {n}",
            p.len()
        )));
    }
    match pair {
        DistortionPair::InfInf => lebesgue_constant(set, k, p),
        DistortionPair::Inf2 => {
            let delta = node_average(p)?;
            let gs = GramSystem::new(set, &delta, k)?;
            if gs.is_singular() {
                return Err(Error::Singular("node set is degenerate".into()));
            }
            let mut sup = f64::NEG_INFINITY;
            for x in set.grid.iter().chain(p.points.iter()) {
                sup = sup.max(rho_at(&gs, x)?);
            }
            Ok(sup.sqrt())
        }
        DistortionPair::TwoTwo => {
            let delta = node_average(p)?;
            let gs_nodes = GramSystem::new(set, &delta, k)?;
            let owned;
            let mu = match mu {
                Some(m) => m,
                None => {
                    owned = default_reference_measure(set, k)?;
                    &owned
                }
            };
            let gs_mu = GramSystem::new(set, mu, k)?;
            if gs_nodes.is_singular() || gs_mu.is_singular() {
                return Err(Error::Singular("degenerate Gram matrix".into()));
            }
            // largest eigenvalue of L^-1 G_mu L^-H with L the node Cholesky
            let a = gs_nodes.whiten(&gs_mu.gram)?;
            Ok(hermitian_max_eigenvalue(&a).sqrt())
        }
        DistortionPair::Inf1Bound => {
            if fekete_certified {
                return Ok(n as f64);
            }
            let ls = lagrange_system(set, k, p)?;
            let mut sup = f64::NEG_INFINITY;
            for x in set.grid.iter().chain(p.points.iter()) {
                let vals = ls.eval(x)?;
                let wx = -(k as f64) * set.phi(x);
                for i in 0..ls.n {
                    sup = sup.max(vals[i].norm() * (wx + ls.node_kphi[i]).exp());
                }
            }
            Ok(n as f64 * sup)
        }
    }
}

/// Largest eigenvalue of a Hermitian matrix via its real symmetric embedding
/// [[re, -im], [im, re]] (eigenvalues appear twice; the max is unchanged).
fn hermitian_max_eigenvalue(a: &DMatrix<Complex64>) -> f64 {
    let n = a.nrows();
    let mut s = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = 0.5 * (a[(i, j)] + a[(j, i)].conj());
            s[(i, j)] = z.re;
            s[(i + n, j + n)] = z.re;
            s[(i + n, j)] = z.im;
            s[(i, j + n)] = -z.im;
        }
    }
    let eig = SymmetricEigen::new(s);
    eig.eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
}

/// Distortion values across degrees with a dimension-compensated growth rate.
#[derive(Debug, Clone, Serialize)]
pub struct DistortionReport {
    pub pair: DistortionPair,
    pub degrees: Vec<usize>,
    pub values: Vec<f64>,
    /// Least-squares slope of log(value / N_k) against k.
    pub exp_rate: f64,
    /// Set when the values grow no faster than the dimension (rate <= 0.01).
    pub tame: bool,
}

/// Evaluate one distortion pairing for a per-degree family of node sets and
/// fit its exponential rate relative to the space dimension.
pub fn distortion_growth_report(
    set: &WeightedSet,
    degrees: &[usize],
    configs: &[Configuration],
    pair: DistortionPair,
    fekete_certified: bool,
) -> Result<DistortionReport> {
    if degrees.len() < 3 {
        return Err(Error::Domain(format!(
            "growth report needs >= 3 degrees, got {}",
            degrees.len()
        )));
    }
    if degrees.len() != configs.len() {
        return Err(Error::Mismatch(format!(
            "{} degrees but {} configurations",
            degrees.len(),
            configs.len()
        )));
    }
    let model = set.model();
    let mut values = Vec::with_capacity(degrees.len());
    for (kk, config) in degrees.iter().zip(configs.iter()) {
        values.push(distortion(set, *kk, None, config, pair, fekete_certified)?);
    }
    let xs: Vec<f64> = degrees.iter().map(|kk| *kk as f64).collect();
    let ys: Vec<f64> = degrees
        .iter()
        .zip(values.iter())
        .map(|(kk, v)| (v / model.dimension(*kk) as f64).ln())
        .collect();
    let exp_rate = ls_slope(&xs, &ys);
    Ok(DistortionReport {
        pair,
        degrees: degrees.to_vec(),
        values,
        exp_rate,
        tame: exp_rate <= 0.01,
    })
}
