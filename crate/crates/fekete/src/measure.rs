//! Discrete probability measures, configurations, reference equilibrium
//! laws, discrepancy metrics, and an independent energy-minimization oracle.

use crate::harmonics::real_harmonics;
use crate::model::{
    circle_points, default_grid, gauss_legendre, SpaceKind, Support, Weight, WeightedSet,
};
use crate::{Error, Point, Result};

/// A finitely supported probability measure: atoms with nonnegative masses
/// summing to 1 (validated to 1e-12).
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    pub atoms: Vec<Point>,
    pub masses: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(atoms: Vec<Point>, masses: Vec<f64>) -> Result<DiscreteMeasure> {
        if atoms.len() != masses.len() {
            return Err(Error::Mismatch(format!(
                "{} atoms vs {} masses",
                atoms.len(),
                masses.len()
            )));
        }
        if atoms.is_empty() {
            return Err(Error::Domain("a measure needs at least one atom".into()));
        }
        if let Some(m) = masses.iter().find(|m| **m < 0.0 || !m.is_finite()) {
            return Err(Error::Domain(format!("invalid mass {m}")));
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("masses sum to {total}, not 1")));
        }
        Ok(DiscreteMeasure { atoms, masses })
    }

    /// Equal masses 1/N on the given points.
    pub fn uniform(atoms: Vec<Point>) -> Result<DiscreteMeasure> {
        let n = atoms.len();
        let mass = 1.0 / n as f64;
        DiscreteMeasure::new(atoms, vec![mass; n])
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn model(&self) -> SpaceKind {
        self.atoms[0].kind()
    }
}

/// An ordered configuration of N points; its averaging measure delta_P puts
/// mass 1/N on each point.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    pub points: Vec<Point>,
}

impl Configuration {
    pub fn new(points: Vec<Point>) -> Configuration {
        Configuration { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The averaging measure delta_P (masses exactly 1/N).
    pub fn as_measure(&self) -> Result<DiscreteMeasure> {
        DiscreteMeasure::uniform(self.points.clone())
    }
}

/// Closed-form (or oracle-tabulated) equilibrium laws for the test domains.
#[derive(Debug, Clone)]
pub enum ReferenceLaw {
    /// dmu = dx / (pi sqrt(1 - x^2)) on [-1, 1]; CDF 1/2 + asin(x)/pi.
    ArcsineInterval,
    /// Normalized arclength on the circle of radius r.
    UniformCircle(f64),
    /// Uniform probability measure on S^2.
    UniformSphere,
    /// A discrete minimizer produced by the energy oracle.
    OracleTable(DiscreteMeasure),
}

impl ReferenceLaw {
    /// CDF of a 1-D law in its natural parameterization (x for the interval,
    /// angle fraction for the circle). OracleTable uses its step CDF.
    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            ReferenceLaw::ArcsineInterval => {
                let t = x.clamp(-1.0, 1.0);
                0.5 + t.asin() / std::f64::consts::PI
            }
            ReferenceLaw::UniformCircle(_) => x.clamp(0.0, 1.0),
            ReferenceLaw::UniformSphere => f64::NAN,
            ReferenceLaw::OracleTable(m) => {
                let mut pairs: Vec<(f64, f64)> = m
                    .atoms
                    .iter()
                    .zip(&m.masses)
                    .map(|(p, w)| (p.as_complex().map(|z| z.re).unwrap_or(f64::NAN), *w))
                    .collect();
                pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
                let mut c = 0.0;
                for (xi, w) in pairs {
                    if xi > x {
                        break;
                    }
                    c += w;
                }
                c
            }
        }
    }

    /// A discretization suitable for plotting or for measure-vs-measure
    /// comparisons: n equal masses at law quantiles.
    pub fn discretize(&self, n: usize) -> Result<DiscreteMeasure> {
        match self {
            ReferenceLaw::ArcsineInterval => {
                // Chebyshev points of the first kind are exactly
                // arcsine-equidistributed.
                let pts: Vec<Point> = (0..n)
                    .map(|j| {
                        Point::real(
                            ((2 * j + 1) as f64 * std::f64::consts::PI / (2 * n) as f64).cos(),
                        )
                    })
                    .collect();
                DiscreteMeasure::uniform(pts)
            }
            ReferenceLaw::UniformCircle(r) => DiscreteMeasure::uniform(circle_points(*r, n)),
            ReferenceLaw::UniformSphere => {
                Err(Error::Domain("no 1-D discretization of the sphere law".into()))
            }
            ReferenceLaw::OracleTable(m) => Ok(m.clone()),
        }
    }
}

/// Integrate a scalar field against a measure: sum of m_i f(x_i).
pub fn integrate<F: Fn(&Point) -> f64>(mu: &DiscreteMeasure, f: F) -> Result<f64> {
    let mut acc = 0.0;
    for (p, m) in mu.atoms.iter().zip(&mu.masses) {
        let v = f(p);
        if !v.is_finite() {
            return Err(Error::Domain("integrand not finite at an atom".into()));
        }
        acc += m * v;
    }
    Ok(acc)
}

/// Kolmogorov-Smirnov sup-distance between a discrete measure and a 1-D law.
///
/// Interval laws compare step CDF against the law CDF at every atom (from
/// both sides of the jump). The circle law is rotation-minimized: the point
/// set carries an arbitrary phase while the uniform law is rotation
/// invariant, so the reported value is min over rotations of the sup
/// distance. Sphere laws are not supported here; use
/// [`harmonic_discrepancy`].
pub fn ks_distance(mu: &DiscreteMeasure, law: &ReferenceLaw) -> Result<f64> {
    match law {
        ReferenceLaw::UniformSphere => Err(Error::Domain(
            "KS distance is 1-D; use harmonic_discrepancy on the sphere".into(),
        )),
        ReferenceLaw::UniformCircle(_) => {
            let mut ang: Vec<(f64, f64)> = mu
                .atoms
                .iter()
                .zip(&mu.masses)
                .map(|(p, m)| {
                    let z = p
                        .as_complex()
                        .ok_or_else(|| Error::Domain("circle law needs plane atoms".into()))?;
                    let mut th = z.im.atan2(z.re);
                    if th < 0.0 {
                        th += 2.0 * std::f64::consts::PI;
                    }
                    Ok((th / (2.0 * std::f64::consts::PI), *m))
                })
                .collect::<Result<_>>()?;
            ang.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            // G(theta) = F_emp(theta) - theta; the rotation-minimized KS is
            // (sup G - inf G)/2, attained midway between the extremes.
            let mut cum = 0.0;
            let mut hi = f64::NEG_INFINITY;
            let mut lo = f64::INFINITY;
            for (frac, m) in &ang {
                lo = lo.min(cum - frac);
                cum += m;
                hi = hi.max(cum - frac);
            }
            // Account for the wrap at angle 1 (cum = 1, frac = 1): same as at 0.
            lo = lo.min(cum - 1.0);
            hi = hi.max(0.0);
            Ok((hi - lo) / 2.0)
        }
        ReferenceLaw::ArcsineInterval | ReferenceLaw::OracleTable(_) => {
            let mut pts: Vec<(f64, f64)> = mu
                .atoms
                .iter()
                .zip(&mu.masses)
                .map(|(p, m)| {
                    let z = p
                        .as_complex()
                        .ok_or_else(|| Error::Domain("interval law needs plane atoms".into()))?;
                    Ok((z.re, *m))
                })
                .collect::<Result<_>>()?;
            pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            let mut cum = 0.0;
            let mut d = 0.0_f64;
            for (x, m) in &pts {
                let f = law.cdf(*x);
                d = d.max((f - cum).abs());
                cum += m;
                d = d.max((f - cum).abs());
            }
            Ok(d)
        }
    }
}

/// KS distance between two discrete measures on the line: sup of the
/// right-continuous CDF difference over the union of atoms. Symmetric and
/// zero on identical measures (unlike measure-vs-law comparison, which also
/// probes the left side of each jump and so sees the atom masses themselves).
pub fn ks_between(a: &DiscreteMeasure, b: &DiscreteMeasure) -> Result<f64> {
    let sorted = |m: &DiscreteMeasure| -> Result<Vec<(f64, f64)>> {
        let mut v: Vec<(f64, f64)> = m
            .atoms
            .iter()
            .zip(&m.masses)
            .map(|(p, w)| {
                let z = p
                    .as_complex()
                    .ok_or_else(|| Error::Domain("ks_between needs plane atoms".into()))?;
                Ok((z.re, *w))
            })
            .collect::<Result<_>>()?;
        v.sort_by(|l, r| l.0.partial_cmp(&r.0).unwrap());
        Ok(v)
    };
    let pa = sorted(a)?;
    let pb = sorted(b)?;
    let mut union: Vec<f64> = pa.iter().chain(&pb).map(|(x, _)| *x).collect();
    union.sort_by(|l, r| l.partial_cmp(r).unwrap());
    let cdf = |pts: &[(f64, f64)], x: f64| -> f64 {
        let mut c = 0.0;
        for (xi, w) in pts {
            if *xi > x {
                break;
            }
            c += w;
        }
        c
    };
    let mut d = 0.0_f64;
    for x in union {
        d = d.max((cdf(&pa, x) - cdf(&pb, x)).abs());
    }
    Ok(d)
}

/// sqrt( sum_{1 <= l <= L, m} (int Y_lm dmu)^2 ): zero iff mu matches the
/// uniform moments up to degree L. Atoms must lie on S^2.
pub fn harmonic_discrepancy(mu: &DiscreteMeasure, l_max: usize) -> Result<f64> {
    let mut moments = vec![0.0_f64; (l_max + 1) * (l_max + 1)];
    for (p, m) in mu.atoms.iter().zip(&mu.masses) {
        let v = p
            .as_unit3()
            .ok_or_else(|| Error::Domain("harmonic discrepancy needs sphere atoms".into()))?;
        let ys = real_harmonics(l_max, &v);
        for (acc, y) in moments.iter_mut().zip(&ys) {
            *acc += m * y;
        }
    }
    // skip l = 0 (the constant always integrates to 1)
    Ok(moments[1..].iter().map(|s| s * s).sum::<f64>().sqrt())
}

/// The equilibrium law of a weighted set: closed forms for the unweighted
/// interval/circle/disk/sphere, the energy oracle otherwise (1-D supports
/// only; the weighted sphere is out of scope).
pub fn reference_equilibrium(set: &WeightedSet) -> Result<ReferenceLaw> {
    match (&set.support, &set.weight) {
        (Support::Interval, Weight::Zero) => Ok(ReferenceLaw::ArcsineInterval),
        (Support::Circle(r), Weight::Zero) | (Support::Disk(r), Weight::Zero) => {
            Ok(ReferenceLaw::UniformCircle(*r))
        }
        (Support::Sphere, Weight::Zero) => Ok(ReferenceLaw::UniformSphere),
        (Support::Sphere, _) => Err(Error::Domain(
            "weighted sphere equilibrium is unsupported".into(),
        )),
        (Support::Custom(_), _) => Err(Error::Domain(
            "no equilibrium law for custom point clouds".into(),
        )),
        _ => Ok(ReferenceLaw::OracleTable(
            equilibrium_oracle(set, 1000)?.measure,
        )),
    }
}

/// Result of the discrete energy minimization.
#[derive(Debug, Clone)]
pub struct OracleResult {
    pub measure: DiscreteMeasure,
    /// Minimized discrete weighted energy; approximates the Robin constant
    /// plus twice the weight integral.
    pub energy: f64,
    pub iterations: usize,
    /// First-order stationarity gap m.g - min g at the returned point.
    pub gap: f64,
    /// Per-iteration energies (monotone nonincreasing).
    pub energy_trace: Vec<f64>,
}

/// Independent oracle for 1-D equilibrium measures: minimize the discretized
/// weighted logarithmic energy
///
/// ```text
/// E(m) = sum_{i != j} m_i m_j log 1/|x_i - x_j| + sum_i m_i^2 log 1/delta_i
///        + 2 sum_i m_i Q(x_i)
/// ```
///
/// over the probability simplex on an m-point grid (Chebyshev on the
/// interval, equispaced on the circle), where Q is the weight restricted to
/// the support. The diagonal uses the local cell scale delta_i = half the
/// distance to the nearest grid neighbor: it is the discrete stand-in for the
/// atom self-energy and keeps the objective convex on the simplex, so the
/// minimizer tracks the equilibrium measure instead of collapsing onto a few
/// far-apart atoms (with a bare zero diagonal the global minimum is two
/// endpoint atoms, which no longer sees the continuous energy at all). The
/// bias of the discretization is O(log m / m).
///
/// Solved by projected gradient with Barzilai-Borwein steps and a monotone
/// backtracking safeguard, to first-order stationarity gap <= 1e-5 (far
/// below the discretization bias at any usable m).
pub fn equilibrium_oracle(set: &WeightedSet, m: usize) -> Result<OracleResult> {
    let pts: Vec<Point> = match &set.support {
        Support::Interval => {
            ReferenceLaw::ArcsineInterval.discretize(m)?.atoms
        }
        Support::Circle(r) | Support::Disk(r) => circle_points(*r, m),
        _ => {
            return Err(Error::Domain(
                "energy oracle supports interval and circle only".into(),
            ))
        }
    };
    let q: Vec<f64> = pts.iter().map(|p| set.phi(p)).collect();

    // Kernel with spacing-regularized diagonal.
    let mm = pts.len();
    let mut a = vec![0.0_f64; mm * mm];
    for i in 0..mm {
        let mut nearest = f64::INFINITY;
        for j in 0..mm {
            if i == j {
                continue;
            }
            let d = pts[i].dist(&pts[j]);
            nearest = nearest.min(d);
            a[i * mm + j] = -d.ln();
        }
        a[i * mm + i] = -(0.5 * nearest).ln();
    }
    let av = |x: &[f64], out: &mut [f64]| {
        for i in 0..mm {
            let row = &a[i * mm..(i + 1) * mm];
            out[i] = row.iter().zip(x).map(|(a, x)| a * x).sum();
        }
    };
    let energy = |x: &[f64], ax: &[f64]| -> f64 {
        x.iter().zip(ax).map(|(x, ax)| x * ax).sum::<f64>()
            + 2.0 * x.iter().zip(&q).map(|(x, q)| x * q).sum::<f64>()
    };

    let gap_tol = 1e-5;
    let max_iter = 50_000;
    let mut mvec = vec![1.0 / mm as f64; mm];
    let mut ax = vec![0.0; mm];
    av(&mvec, &mut ax);
    let mut e = energy(&mvec, &ax);
    let mut g: Vec<f64> = ax.iter().zip(&q).map(|(ax, q)| 2.0 * (ax + q)).collect();
    let mut trace = vec![e];
    let mut step = 1e-3;
    let mut prev: Option<(Vec<f64>, Vec<f64>)> = None;
    let mut gap = f64::INFINITY;

    for it in 0..max_iter {
        let mdotg: f64 = mvec.iter().zip(&g).map(|(m, g)| m * g).sum();
        let gmin = g.iter().cloned().fold(f64::INFINITY, f64::min);
        gap = mdotg - gmin;
        if gap <= gap_tol {
            return Ok(OracleResult {
                measure: finish_oracle_measure(pts, mvec)?,
                energy: e,
                iterations: it,
                gap,
                energy_trace: trace,
            });
        }
        if let Some((pm, pg)) = &prev {
            let mut num = 0.0;
            let mut den = 0.0;
            for i in 0..mm {
                let dm = mvec[i] - pm[i];
                let dg = g[i] - pg[i];
                num += dm * dm;
                den += dm * dg;
            }
            if den > 1e-300 {
                step = (num / den).clamp(1e-12, 1e3);
            }
        }
        prev = Some((mvec.clone(), g.clone()));
        // Backtrack until the energy does not increase.
        let mut cand = vec![0.0; mm];
        let mut cax = vec![0.0; mm];
        loop {
            for i in 0..mm {
                cand[i] = mvec[i] - step * g[i];
            }
            project_simplex(&mut cand);
            av(&cand, &mut cax);
            let ce = energy(&cand, &cax);
            if ce <= e + 1e-15 || step < 1e-14 {
                if ce <= e + 1e-15 {
                    mvec = cand.clone();
                    ax.copy_from_slice(&cax);
                    e = ce;
                }
                break;
            }
            step *= 0.5;
        }
        g = ax.iter().zip(&q).map(|(ax, q)| 2.0 * (ax + q)).collect();
        trace.push(e);
    }
    Err(Error::Convergence {
        what: "equilibrium oracle".into(),
        residual: gap,
    })
}

fn finish_oracle_measure(pts: Vec<Point>, mut masses: Vec<f64>) -> Result<DiscreteMeasure> {
    // The projection returns exact zeros; renormalize away rounding drift.
    let total: f64 = masses.iter().sum();
    for m in &mut masses {
        *m /= total;
    }
    DiscreteMeasure::new(pts, masses)
}

/// Euclidean projection onto the probability simplex (sort-based).
fn project_simplex(v: &mut [f64]) {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut css = 0.0;
    let mut tau = 0.0;
    for (i, ui) in u.iter().enumerate() {
        css += ui;
        let t = (css - 1.0) / (i + 1) as f64;
        if ui - t > 0.0 {
            tau = t;
        }
    }
    for x in v.iter_mut() {
        *x = (*x - tau).max(0.0);
    }
}

/// The reference pair of a model at degree k: (K_0, phi_0 = 0) with the
/// reference measure discretized on a quadrature-exact degree-adapted grid.
///
/// ComplexLine: unit circle with normalized arclength on 2(2k+1) equispaced
/// points (exact for the degree-k monomial Gram). Sphere2: uniform measure on
/// the Gauss-Legendre x azimuth product grid (exact for products of degree-k
/// harmonics).
pub fn reference_pair(model: SpaceKind, k: usize) -> Result<(WeightedSet, DiscreteMeasure)> {
    match model {
        SpaceKind::ComplexLine => {
            let support = Support::Circle(1.0);
            let grid = default_grid(&support, k, 2)?;
            let mu = DiscreteMeasure::uniform(grid.clone())?;
            Ok((WeightedSet::new(support, Weight::Zero, grid)?, mu))
        }
        SpaceKind::Sphere2 => {
            let support = Support::Sphere;
            let nt = 2 * (k + 1);
            let np = 2 * (2 * k + 1);
            let (nodes, ws) = gauss_legendre(nt);
            let mut atoms = Vec::with_capacity(nt * np);
            let mut masses = Vec::with_capacity(nt * np);
            let wsum: f64 = ws.iter().sum();
            for (ct, w) in nodes.iter().zip(&ws) {
                let theta = ct.acos();
                for j in 0..np {
                    let phi = 2.0 * std::f64::consts::PI * j as f64 / np as f64;
                    atoms.push(Point::sphere_angles(theta, phi));
                    masses.push(w / wsum / np as f64);
                }
            }
            let set = WeightedSet::new(support, Weight::Zero, atoms.clone())?;
            Ok((set, DiscreteMeasure::new(atoms, masses)?))
        }
    }
}

/// The uniform (normalized Lebesgue) measure on [-1, 1], discretized on an
/// n-point Gauss-Legendre rule. Integrates degree <= 2n-1 polynomials
/// exactly.
pub fn uniform_interval_measure(n: usize) -> Result<DiscreteMeasure> {
    let (nodes, ws) = gauss_legendre(n);
    let atoms = nodes.into_iter().map(Point::real).collect();
    let masses = ws.into_iter().map(|w| w / 2.0).collect();
    DiscreteMeasure::new(atoms, masses)
}
