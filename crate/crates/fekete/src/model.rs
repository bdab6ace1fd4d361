//! Model spaces, points, weights, and candidate grids.
//!
//! `ComplexLine` is the space of polynomials of degree at most k in one
//! complex variable; its canonical basis is the monomials z^j, which are
//! orthonormal on the unit circle with respect to normalized arclength.
//! `Sphere2` is the space of real spherical polynomials of total degree at
//! most k on S^2; its canonical basis is the real spherical harmonics,
//! normalized so they are orthonormal with respect to the uniform
//! *probability* measure on the sphere (so Y_00 = 1 identically and the
//! reference Gram matrix is the identity).

use crate::harmonics::real_harmonics;
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Which model space a value lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceKind {
    /// Polynomials on subsets of the complex plane; dimension(k) = k + 1.
    ComplexLine,
    /// Spherical polynomials on S^2; dimension(k) = (k + 1)^2.
    Sphere2,
}

impl SpaceKind {
    /// Dimension N_k of the degree-k section space (exact, no asymptotics).
    pub fn dimension(self, k: usize) -> usize {
        match self {
            SpaceKind::ComplexLine => k + 1,
            SpaceKind::Sphere2 => (k + 1) * (k + 1),
        }
    }
}

/// A point of one of the model spaces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point {
    /// A point of the complex plane.
    Plane(Complex64),
    /// A unit vector in R^3.
    Sphere([f64; 3]),
}

impl Point {
    /// A real point on the line.
    pub fn real(x: f64) -> Point {
        Point::Plane(Complex64::new(x, 0.0))
    }

    /// A point of the complex plane.
    pub fn complex(re: f64, im: f64) -> Point {
        Point::Plane(Complex64::new(re, im))
    }

    /// A sphere point from Cartesian coordinates; the norm must be 1 within
    /// 1e-12.
    pub fn sphere(x: f64, y: f64, z: f64) -> Result<Point> {
        let n = (x * x + y * y + z * z).sqrt();
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!(
                "sphere point must be a unit vector, got norm {n}"
            )));
        }
        Ok(Point::Sphere([x, y, z]))
    }

    /// A sphere point from polar angle theta in [0, pi] and azimuth phi.
    pub fn sphere_angles(theta: f64, phi: f64) -> Point {
        let (st, ct) = (theta.sin(), theta.cos());
        Point::Sphere([st * phi.cos(), st * phi.sin(), ct])
    }

    pub fn as_complex(&self) -> Option<Complex64> {
        match self {
            Point::Plane(z) => Some(*z),
            Point::Sphere(_) => None,
        }
    }

    pub fn as_unit3(&self) -> Option<[f64; 3]> {
        match self {
            Point::Plane(_) => None,
            Point::Sphere(v) => Some(*v),
        }
    }

    pub fn kind(&self) -> SpaceKind {
        match self {
            Point::Plane(_) => SpaceKind::ComplexLine,
            Point::Sphere(_) => SpaceKind::Sphere2,
        }
    }

    /// Euclidean distance between two points of the same kind (chordal on the
    /// sphere).
    pub fn dist(&self, other: &Point) -> f64 {
        match (self, other) {
            (Point::Plane(a), Point::Plane(b)) => (a - b).norm(),
            (Point::Sphere(a), Point::Sphere(b)) => {
                let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
                (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
            }
            _ => f64::NAN,
        }
    }
}

/// A continuous weight phi, evaluable at any point of its model.
#[derive(Debug, Clone, PartialEq)]
pub enum Weight {
    /// phi = 0.
    Zero,
    /// phi(z) = c * |z|^2.
    Quadratic(f64),
    /// phi(z) = log |z - a|; the shift a must lie off the support.
    LogAbsShift(Complex64),
    /// Nearest-atom lookup in a tabulated field; ties break by lowest index.
    Tabulated { points: Vec<Point>, values: Vec<f64> },
}

impl Weight {
    pub fn eval(&self, p: &Point) -> f64 {
        match self {
            Weight::Zero => 0.0,
            Weight::Quadratic(c) => match p {
                Point::Plane(z) => c * z.norm_sqr(),
                Point::Sphere(_) => *c, // |x| = 1 on the sphere
            },
            Weight::LogAbsShift(a) => match p {
                Point::Plane(z) => (z - a).norm().ln(),
                Point::Sphere(_) => f64::NAN,
            },
            Weight::Tabulated { points, values } => {
                let mut best = (f64::INFINITY, 0usize);
                for (i, q) in points.iter().enumerate() {
                    let d = p.dist(q);
                    if d < best.0 {
                        best = (d, i);
                    }
                }
                values[best.1]
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Weight::Zero)
    }
}

/// The compact support K of a weighted set.
#[derive(Debug, Clone, PartialEq)]
pub enum Support {
    /// The real interval [-1, 1] inside the complex line.
    Interval,
    /// The circle |z| = r.
    Circle(f64),
    /// The closed disk |z| <= r. Extremal configurations sit on the boundary
    /// circle (maximum principle), so the candidate grid is the boundary grid
    /// and the equilibrium reference is the uniform boundary measure.
    Disk(f64),
    /// The full sphere S^2.
    Sphere,
    /// An explicit finite point cloud.
    Custom(Vec<Point>),
}

impl Support {
    pub fn model(&self) -> SpaceKind {
        match self {
            Support::Sphere => SpaceKind::Sphere2,
            Support::Custom(pts) => pts
                .first()
                .map(|p| p.kind())
                .unwrap_or(SpaceKind::ComplexLine),
            _ => SpaceKind::ComplexLine,
        }
    }

    /// Membership test at tolerance 1e-12 (radially for circle/disk).
    pub fn contains(&self, p: &Point) -> bool {
        match (self, p) {
            (Support::Interval, Point::Plane(z)) => {
                z.im.abs() <= 1e-12 && z.re >= -1.0 - 1e-12 && z.re <= 1.0 + 1e-12
            }
            (Support::Circle(r), Point::Plane(z)) => (z.norm() - r).abs() <= 1e-12 * r.max(1.0),
            (Support::Disk(r), Point::Plane(z)) => z.norm() <= r + 1e-12 * r.max(1.0),
            (Support::Sphere, Point::Sphere(v)) => {
                ((v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt() - 1.0).abs() <= 1e-12
            }
            (Support::Custom(pts), q) => pts.iter().any(|p| p.dist(q) <= 1e-12),
            _ => false,
        }
    }
}

/// A weighted compact set (K, phi) together with its candidate grid.
///
/// The grid is the finite stand-in for K in every search and every sup: Fekete
/// exchange, Leja increments, sup rho, Lebesgue functions all range over it.
#[derive(Debug, Clone)]
pub struct WeightedSet {
    pub support: Support,
    pub weight: Weight,
    pub grid: Vec<Point>,
}

impl WeightedSet {
    /// Build a weighted set with an explicit candidate grid. Validates that
    /// the grid is nonempty, lies in the support, and that the weight is
    /// finite on it; the sphere admits only phi = 0.
    pub fn new(support: Support, weight: Weight, grid: Vec<Point>) -> Result<WeightedSet> {
        if grid.is_empty() {
            return Err(Error::Domain("candidate grid is empty".into()));
        }
        if matches!(support, Support::Sphere) && !weight.is_zero() {
            return Err(Error::Domain(
                "only the zero weight is supported on the sphere".into(),
            ));
        }
        for (i, p) in grid.iter().enumerate() {
            if !support.contains(p) {
                return Err(Error::Domain(format!(
                    "grid point {i} lies outside the support"
                )));
            }
            if !weight.eval(p).is_finite() {
                return Err(Error::Domain(format!(
                    "weight is not finite at grid point {i}"
                )));
            }
        }
        Ok(WeightedSet {
            support,
            weight,
            grid,
        })
    }

    /// Build a weighted set carrying the deterministic degree-adapted default
    /// grid for degree k.
    pub fn with_default_grid(
        support: Support,
        weight: Weight,
        k: usize,
        oversample: usize,
    ) -> Result<WeightedSet> {
        let grid = default_grid(&support, k, oversample)?;
        WeightedSet::new(support, weight, grid)
    }

    pub fn model(&self) -> SpaceKind {
        self.support.model()
    }

    pub fn phi(&self, p: &Point) -> f64 {
        self.weight.eval(p)
    }
}

/// Default grid oversampling factor: 8 for k <= 20, 4 above.
pub fn default_oversample(k: usize) -> usize {
    if k <= 20 {
        8
    } else {
        4
    }
}

/// Deterministic candidate grid for a support at degree k.
///
/// * interval: oversample*(k+1) Chebyshev points of the first kind, listed in
///   ascending order (the open-interval nodes cos((2j+1)pi/2M); the endpoints
///   are not grid members);
/// * circle/disk of radius r: oversample*(2k+1) equispaced points starting at
///   angle 0;
/// * sphere: Gauss-Legendre polar nodes (oversample*(k+1)) times equispaced
///   azimuths (oversample*(2k+1));
/// * custom cloud: the cloud itself.
pub fn default_grid(support: &Support, k: usize, oversample: usize) -> Result<Vec<Point>> {
    if oversample < 2 {
        return Err(Error::Domain("oversample must be >= 2".into()));
    }
    Ok(match support {
        Support::Interval => {
            let m = oversample * (k + 1);
            let mut xs: Vec<f64> = (0..m)
                .map(|j| ((2 * j + 1) as f64 * std::f64::consts::PI / (2 * m) as f64).cos())
                .collect();
            xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
            xs.into_iter().map(Point::real).collect()
        }
        Support::Circle(r) | Support::Disk(r) => circle_points(*r, oversample * (2 * k + 1)),
        Support::Sphere => {
            let nt = oversample * (k + 1);
            let np = oversample * (2 * k + 1);
            let (nodes, _) = gauss_legendre(nt);
            let mut pts = Vec::with_capacity(nt * np);
            for ct in &nodes {
                let theta = ct.acos();
                for j in 0..np {
                    let phi = 2.0 * std::f64::consts::PI * j as f64 / np as f64;
                    pts.push(Point::sphere_angles(theta, phi));
                }
            }
            pts
        }
        Support::Custom(pts) => pts.clone(),
    })
}

/// Equispaced points on the circle of radius r, starting at angle 0.
pub fn circle_points(r: f64, n: usize) -> Vec<Point> {
    (0..n)
        .map(|i| {
            let th = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            Point::complex(r * th.cos(), r * th.sin())
        })
        .collect()
}

/// Gauss-Legendre nodes (ascending) and weights on [-1, 1].
///
/// Newton iteration on the three-term recurrence; the weights sum to 2
/// exactly up to rounding. Accurate to machine precision for the desk-scale
/// sizes used here (n <= a few thousand).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi-style initial guess, then Newton on P_n.
        let mut x =
            (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_pair(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // Nodes come out descending in i; store ascending.
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = w;
        nodes[i] = -x;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
        let (_, d) = legendre_pair(n, 0.0);
        weights[n / 2] = 2.0 / (d * d);
    }
    (nodes, weights)
}

/// (P_n(x), P_n'(x)) by the standard recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Evaluation basis used when assembling matrices.
///
/// `Monomial` and `Harmonic` are the canonical (reference-orthonormal) bases
/// of the two models. `Chebyshev` and `ScaledMonomial` are well-conditioned
/// working bases related to the monomials by a known triangular change of
/// basis, used internally so that interval and large-radius systems stay
/// numerically sane; log-determinants are always reported in the canonical
/// basis via the exact correction below.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Basis {
    Monomial,
    Chebyshev,
    ScaledMonomial(f64),
    Harmonic,
}

impl Basis {
    /// Evaluate the degree-k basis at a point; length is dimension(k) of the
    /// owning model.
    pub fn eval(&self, k: usize, p: &Point) -> Result<DVector<Complex64>> {
        match self {
            Basis::Monomial => {
                let z = plane(p)?;
                let mut v = DVector::zeros(k + 1);
                let mut pw = Complex64::new(1.0, 0.0);
                for j in 0..=k {
                    v[j] = pw;
                    pw *= z;
                }
                Ok(v)
            }
            Basis::ScaledMonomial(r) => {
                let z = plane(p)? / Complex64::new(*r, 0.0);
                let mut v = DVector::zeros(k + 1);
                let mut pw = Complex64::new(1.0, 0.0);
                for j in 0..=k {
                    v[j] = pw;
                    pw *= z;
                }
                Ok(v)
            }
            Basis::Chebyshev => {
                let z = plane(p)?;
                let mut v = DVector::zeros(k + 1);
                let mut t0 = Complex64::new(1.0, 0.0);
                let mut t1 = z;
                for j in 0..=k {
                    v[j] = match j {
                        0 => t0,
                        1 => t1,
                        _ => {
                            let t2 = 2.0 * z * t1 - t0;
                            t0 = t1;
                            t1 = t2;
                            t1
                        }
                    };
                }
                Ok(v)
            }
            Basis::Harmonic => {
                let v3 = p.as_unit3().ok_or_else(|| {
                    Error::Domain("harmonic basis expects a sphere point".into())
                })?;
                let n = (v3[0] * v3[0] + v3[1] * v3[1] + v3[2] * v3[2]).sqrt();
                if (n - 1.0).abs() > 1e-12 {
                    return Err(Error::Domain(format!(
                        "sphere point must be a unit vector, got norm {n}"
                    )));
                }
                let ys = real_harmonics(k, &v3);
                Ok(DVector::from_iterator(
                    ys.len(),
                    ys.into_iter().map(|y| Complex64::new(y, 0.0)),
                ))
            }
        }
    }

    /// log|det C| of the change-of-basis matrix C with (this basis) = C^T *
    /// (canonical monomials) on the complex line, for an (k+1)-dimensional
    /// space. Chebyshev leading coefficients are 2^(j-1); a radius-r scaling
    /// contributes r^(-j) per column. Zero for the canonical bases.
    pub fn logdet_change(&self, k: usize) -> f64 {
        match self {
            Basis::Monomial | Basis::Harmonic => 0.0,
            Basis::Chebyshev => {
                // sum_{j=1..k} (j-1) * ln 2
                (k * (k.saturating_sub(1))) as f64 / 2.0 * std::f64::consts::LN_2
            }
            Basis::ScaledMonomial(r) => -((k * (k + 1)) as f64 / 2.0) * r.ln(),
        }
    }

    /// Change-of-basis matrix C with (this basis) = C^T * (canonical basis):
    /// column j holds the canonical coefficients of the j-th working
    /// function. Identity for the canonical bases; upper triangular with
    /// the leading coefficients on the diagonal otherwise.
    pub fn coeff_matrix(&self, k: usize) -> DMatrix<f64> {
        match self {
            Basis::Monomial | Basis::Harmonic => {
                let n = match self {
                    Basis::Harmonic => (k + 1) * (k + 1),
                    _ => k + 1,
                };
                DMatrix::identity(n, n)
            }
            Basis::ScaledMonomial(r) => {
                DMatrix::from_fn(k + 1, k + 1, |i, j| {
                    if i == j {
                        r.powi(-(j as i32))
                    } else {
                        0.0
                    }
                })
            }
            Basis::Chebyshev => {
                let mut c = DMatrix::zeros(k + 1, k + 1);
                c[(0, 0)] = 1.0;
                if k >= 1 {
                    c[(1, 1)] = 1.0;
                }
                for j in 2..=k {
                    // T_j = 2x T_{j-1} - T_{j-2}, acting on coefficient columns
                    for i in 0..j {
                        c[(i + 1, j)] += 2.0 * c[(i, j - 1)];
                    }
                    for i in 0..=(j - 2) {
                        c[(i, j)] -= c[(i, j - 2)];
                    }
                }
                c
            }
        }
    }

    /// The canonical basis of a model.
    pub fn canonical(model: SpaceKind) -> Basis {
        match model {
            SpaceKind::ComplexLine => Basis::Monomial,
            SpaceKind::Sphere2 => Basis::Harmonic,
        }
    }
}

fn plane(p: &Point) -> Result<Complex64> {
    p.as_complex()
        .ok_or_else(|| Error::Domain("expected a complex-line point".into()))
}

/// Canonical basis evaluation for a model space.
pub fn basis_eval(model: SpaceKind, k: usize, p: &Point) -> Result<DVector<Complex64>> {
    if p.kind() != model {
        return Err(Error::Domain("point does not belong to the model".into()));
    }
    Basis::canonical(model).eval(k, p)
}

/// Well-conditioned working basis for scoring and assembly over a support.
pub fn working_basis(support: &Support) -> Basis {
    match support {
        Support::Interval => Basis::Chebyshev,
        Support::Circle(r) | Support::Disk(r) => {
            if (*r - 1.0).abs() < 1e-15 {
                Basis::Monomial
            } else {
                Basis::ScaledMonomial(*r)
            }
        }
        Support::Sphere => Basis::Harmonic,
        Support::Custom(_) => Basis::Monomial,
    }
}
