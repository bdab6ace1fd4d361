//! Gram matrices of the degree-k section basis under a weighted measure,
//! Cholesky factorization, canonical log-determinants, orthonormal sections,
//! and the normalized volume functional built from them.

use crate::measure::{reference_pair, DiscreteMeasure};
use crate::model::{working_basis, Basis, SpaceKind, Support, WeightedSet};
use crate::{Error, Point, Result};
use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use num_complex::Complex64;

/// The Gram system of the degree-k basis under the inner product
/// `<s, t> = integral of s conj(t) e^{-2k phi} d mu`.
///
/// Assembly runs in a well-conditioned working basis (canonical monomials
/// or harmonics where those are fine, Chebyshev on the interval at large
/// degree, radius-scaled monomials off the unit circle); `logdet` is always
/// reported in the canonical basis via the exact triangular change-of-basis
/// correction, so values are comparable across assembly routes.
///
/// A rank-deficient system is represented, not rejected: `logdet` is `-inf`
/// and the factor-dependent operations return [`Error::Singular`]. Degenerate
/// configurations are legitimate inputs during point searches.
#[derive(Debug, Clone)]
pub struct GramSystem {
    pub model: SpaceKind,
    pub k: usize,
    /// Dimension of the degree-k section space.
    pub n: usize,
    pub set: WeightedSet,
    pub measure: DiscreteMeasure,
    /// Working basis the matrix is expressed in.
    pub basis: Basis,
    /// Gram matrix in the working basis (Hermitian).
    pub gram: DMatrix<Complex64>,
    /// Canonical-basis log-determinant; `-inf` when rank deficient.
    pub logdet: f64,
    chol: Option<Cholesky<Complex64, Dyn>>,
}

/// Basis used to assemble Gram matrices over a support at degree k:
/// canonical except where conditioning forces a working basis. Interval
/// monomial Grams lose a factor ~4 of relative pivot size per degree (the
/// smallest pivot is the squared norm of the monic orthogonal polynomial),
/// so they are unusable past k ~ 20; the switch at 12 leaves seven orders
/// of headroom. Off-unit radii scale as r^(2j) and need the radius folded
/// into the basis.
pub fn assembly_basis(support: &Support, k: usize) -> Basis {
    match support {
        Support::Interval => {
            if k > 12 {
                Basis::Chebyshev
            } else {
                Basis::Monomial
            }
        }
        _ => working_basis(support),
    }
}

impl GramSystem {
    /// Assemble the Gram system of (mu, k*phi) over the set's support.
    ///
    /// Every atom must lie in the support; integrals are exact finite sums
    /// over the atoms (quadrature choices live in the measure construction).
    pub fn new(set: &WeightedSet, mu: &DiscreteMeasure, k: usize) -> Result<GramSystem> {
        for (i, p) in mu.atoms.iter().enumerate() {
            if !set.support.contains(p) {
                return Err(Error::Domain(format!(
                    "measure atom {i} lies outside the support"
                )));
            }
        }
        let weights: Vec<f64> = mu
            .atoms
            .iter()
            .zip(&mu.masses)
            .map(|(p, m)| m * (-2.0 * k as f64 * set.phi(p)).exp())
            .collect();
        Self::from_atom_weights(set, mu.clone(), k, &weights)
    }

    /// Assemble from fully formed atom weights `w_t = m_t e^{-2k phi(x_t)}`.
    /// Shared by [`GramSystem::new`] and the weight-perturbation probes.
    fn from_atom_weights(
        set: &WeightedSet,
        mu: DiscreteMeasure,
        k: usize,
        weights: &[f64],
    ) -> Result<GramSystem> {
        let model = set.model();
        let n = model.dimension(k);
        let basis = assembly_basis(&set.support, k);
        let m = mu.atoms.len();

        // G = B^H B with B[t, j] = sqrt(w_t) * conj(e_j(x_t)).
        let mut b = DMatrix::<Complex64>::zeros(m, n);
        for (t, p) in mu.atoms.iter().enumerate() {
            let e = basis.eval(k, p)?;
            let s = weights[t].sqrt();
            for j in 0..n {
                b[(t, j)] = s * e[j].conj();
            }
        }
        let mut gram = b.adjoint() * &b;
        // symmetrize away gemm rounding so the Hermitian invariant is exact
        let adj = gram.adjoint();
        gram = (gram + adj) * Complex64::new(0.5, 0.0);

        let mut chol = Cholesky::new(gram.clone());
        // Exact rank deficiency often survives floating-point Cholesky as a
        // noise-sized positive pivot; apply a relative pivot floor so such
        // systems are flagged singular rather than factored into garbage.
        if let Some(c) = &chol {
            let mut min_piv2 = f64::INFINITY;
            let mut max_piv2 = 0.0_f64;
            for d in c.l_dirty().diagonal().iter() {
                let p2 = d.re * d.re;
                min_piv2 = min_piv2.min(p2);
                max_piv2 = max_piv2.max(p2);
            }
            if min_piv2 <= 4.0 * n as f64 * f64::EPSILON * max_piv2 {
                chol = None;
            }
        }
        let logdet = match &chol {
            Some(c) => {
                let ld: f64 = c.l_dirty().diagonal().iter().map(|d| d.re.ln()).sum();
                2.0 * ld - 2.0 * basis.logdet_change(k)
            }
            None => f64::NEG_INFINITY,
        };
        Ok(GramSystem {
            model,
            k,
            n,
            set: set.clone(),
            measure: mu,
            basis,
            gram,
            logdet,
            chol,
        })
    }

    pub fn is_singular(&self) -> bool {
        self.chol.is_none()
    }

    fn chol(&self) -> Result<&Cholesky<Complex64, Dyn>> {
        self.chol.as_ref().ok_or_else(|| {
            Error::Singular(format!(
                "rank-deficient degree-{} system on {} atoms",
                self.k,
                self.measure.len()
            ))
        })
    }

    /// Values of the (mu, k*phi)-orthonormal sections at x, without the
    /// metric factor e^{-k phi(x)}: the solve `L y = e(x)` against the
    /// working-basis evaluation. `sum |y_i|^2 * e^{-2k phi(x)}` is the
    /// distortion function at x.
    pub fn section_values(&self, x: &Point) -> Result<DVector<Complex64>> {
        let e = self.basis.eval(self.k, x)?;
        self.chol()?
            .l_dirty()
            .solve_lower_triangular(&e)
            .ok_or_else(|| Error::Singular("zero pivot in triangular solve".into()))
    }

    /// Congruence by the inverse Cholesky factor: `L^-1 b L^-H` with L the
    /// lower factor of this Gram matrix. `b` must be given in the same
    /// working basis; the result is Hermitian whenever `b` is. Its spectrum
    /// compares the quadratic form of `b` against this system's form.
    pub fn whiten(&self, b: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
        if b.nrows() != self.n || b.ncols() != self.n {
            return Err(Error::Mismatch(format!(
                "matrix is {}x{}, system dimension is {}",
                b.nrows(),
                b.ncols(),
                self.n
            )));
        }
        let chol = self.chol()?;
        let l = chol.l_dirty();
        let x = l
            .solve_lower_triangular(b)
            .ok_or_else(|| Error::Singular("zero pivot in triangular solve".into()))?;
        let y = l
            .solve_lower_triangular(&x.adjoint())
            .ok_or_else(|| Error::Singular("zero pivot in triangular solve".into()))?;
        Ok(y.adjoint())
    }

    /// Coefficients of the orthonormal sections in the canonical basis: row i
    /// holds the canonical coefficients of section t_i, and the Gram of these
    /// sections under the same (mu, k*phi) is the identity.
    pub fn orthonormal_sections(&self) -> Result<DMatrix<Complex64>> {
        let inv_l = self
            .chol()?
            .l_dirty()
            .solve_lower_triangular(&DMatrix::<Complex64>::identity(self.n, self.n))
            .ok_or_else(|| Error::Singular("zero pivot in triangular solve".into()))?;
        let c = self.basis.coeff_matrix(self.k).map(|v| Complex64::new(v, 0.0));
        Ok(inv_l * c.transpose())
    }
}

/// Assemble a Gram system (alias for [`GramSystem::new`], matching the
/// free-function style of the rest of the crate).
pub fn gram_system(set: &WeightedSet, mu: &DiscreteMeasure, k: usize) -> Result<GramSystem> {
    GramSystem::new(set, mu, k)
}

/// The fixed reference system of a model at degree k: zero weight with the
/// reference measure (normalized arclength on the unit circle, uniform
/// measure on the sphere) discretized exactly. Its Gram is the identity, so
/// its canonical logdet vanishes up to rounding.
pub fn standard_reference(model: SpaceKind, k: usize) -> Result<GramSystem> {
    let (set, mu) = reference_pair(model, k)?;
    GramSystem::new(&set, &mu, k)
}

/// The normalized volume functional of (mu, k*phi) against a reference
/// system at the same degree:
///
/// ```text
/// L~_k = -(1/(2 k N_k)) * (logdet G(mu, k phi) - logdet G(mu_0, k phi_0))
/// ```
///
/// Shift covariance: replacing phi by phi + c adds exactly c. The reference
/// normalization makes `l_functional(reference, reference) = 0` exactly.
pub fn l_functional(gs: &GramSystem, reference: &GramSystem) -> Result<f64> {
    if gs.k != reference.k || gs.model != reference.model {
        return Err(Error::Mismatch(format!(
            "degree/model mismatch: ({}, {:?}) vs ({}, {:?})",
            gs.k, gs.model, reference.k, reference.model
        )));
    }
    if gs.k == 0 {
        return Err(Error::Domain("the volume functional needs degree >= 1".into()));
    }
    if gs.is_singular() || reference.is_singular() {
        return Err(Error::Singular("volume functional of a singular system".into()));
    }
    Ok(-(gs.logdet - reference.logdet) / (2.0 * gs.k as f64 * gs.n as f64))
}

/// Log of the ratio of L^2-ball volumes of two systems at the same degree:
/// `log(vol B(A) / vol B(B)) = logdet G_B - logdet G_A`. Telescopes exactly
/// and isolates the weight dependence (phi -> phi + c changes it by
/// 2 k N_k c).
pub fn volume_ratio_log(a: &GramSystem, b: &GramSystem) -> Result<f64> {
    if a.k != b.k || a.model != b.model {
        return Err(Error::Mismatch(format!(
            "degree/model mismatch: ({}, {:?}) vs ({}, {:?})",
            a.k, a.model, b.k, b.model
        )));
    }
    if a.is_singular() || b.is_singular() {
        return Err(Error::Singular("volume ratio of a singular system".into()));
    }
    Ok(b.logdet - a.logdet)
}

/// Brute-force check of the determinant identity
///
/// ```text
/// sum over all N-tuples of atoms of |det(s_i(x_j))|^2 e^{-2k sum phi} prod m
///   = N! * det G(mu, k phi)
/// ```
///
/// in the canonical basis. Returns (lhs, rhs). Enumeration is atoms^N, so
/// inputs are capped at 8 atoms and N <= 4.
pub fn det_section_l2_identity_check(
    set: &WeightedSet,
    mu: &DiscreteMeasure,
    k: usize,
) -> Result<(f64, f64)> {
    let model = set.model();
    let n = model.dimension(k);
    let m = mu.atoms.len();
    if m > 8 || n > 4 {
        return Err(Error::Domain(format!(
            "enumeration too large: {m} atoms at dimension {n} (caps: 8 and 4)"
        )));
    }
    let canonical = Basis::canonical(model);
    let evals: Vec<DVector<Complex64>> = mu
        .atoms
        .iter()
        .map(|p| canonical.eval(k, p))
        .collect::<Result<_>>()?;
    let atom_factor: Vec<f64> = mu
        .atoms
        .iter()
        .zip(&mu.masses)
        .map(|(p, mass)| mass * (-2.0 * k as f64 * set.phi(p)).exp())
        .collect();

    let mut lhs = 0.0;
    let mut tuple = vec![0usize; n];
    loop {
        let mat = DMatrix::<Complex64>::from_fn(n, n, |i, j| evals[tuple[j]][i]);
        let det = mat.determinant();
        let weight: f64 = tuple.iter().map(|&t| atom_factor[t]).product();
        lhs += det.norm_sqr() * weight;
        // advance the mixed-radix counter
        let mut pos = 0;
        loop {
            tuple[pos] += 1;
            if tuple[pos] < m {
                break;
            }
            tuple[pos] = 0;
            pos += 1;
            if pos == n {
                break;
            }
        }
        if pos == n {
            break;
        }
    }

    let gs = GramSystem::new(set, mu, k)?;
    let factorial: f64 = (1..=n).map(|i| i as f64).product();
    let rhs = if gs.is_singular() {
        0.0
    } else {
        factorial * gs.logdet.exp()
    };
    Ok((lhs, rhs))
}

/// Canonical-basis log-determinant of G(mu, k(phi + t v)) for a scalar
/// direction field v: the probe behind the weight-derivative and concavity
/// checks. Errors if the perturbed system is singular.
pub fn gram_logdet_perturbed<V>(
    set: &WeightedSet,
    mu: &DiscreteMeasure,
    k: usize,
    v: V,
    t: f64,
) -> Result<f64>
where
    V: Fn(&Point) -> f64,
{
    let weights: Vec<f64> = mu
        .atoms
        .iter()
        .zip(&mu.masses)
        .map(|(p, m)| m * (-2.0 * k as f64 * (set.phi(p) + t * v(p))).exp())
        .collect();
    let gs = GramSystem::from_atom_weights(set, mu.clone(), k, &weights)?;
    if gs.is_singular() {
        return Err(Error::Singular("perturbed system is singular".into()));
    }
    Ok(gs.logdet)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::uniform_interval_measure;
    use crate::model::Weight;

    #[test]
    fn reference_gram_is_identity() {
        let gs = standard_reference(SpaceKind::ComplexLine, 5).unwrap();
        for i in 0..gs.n {
            for j in 0..gs.n {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((gs.gram[(i, j)].re - want).abs() < 1e-12);
                assert!(gs.gram[(i, j)].im.abs() < 1e-12);
            }
        }
        assert!(gs.logdet.abs() < 1e-10);
    }

    #[test]
    fn interval_degree_one_gram_and_sections() {
        let set = WeightedSet::with_default_grid(Support::Interval, Weight::Zero, 1, 8).unwrap();
        let mu = uniform_interval_measure(2000).unwrap();
        let gs = GramSystem::new(&set, &mu, 1).unwrap();
        assert!((gs.gram[(0, 0)].re - 1.0).abs() < 2e-4);
        assert!((gs.gram[(1, 1)].re - 1.0 / 3.0).abs() < 2e-4);
        assert!(gs.gram[(0, 1)].norm() < 2e-4);
        let coeffs = gs.orthonormal_sections().unwrap();
        // sections {1, sqrt(3) x}
        assert!((coeffs[(0, 0)].re - 1.0).abs() < 1e-3);
        assert!(coeffs[(0, 1)].norm() < 1e-3);
        assert!(coeffs[(1, 0)].norm() < 1e-3);
        assert!((coeffs[(1, 1)].re - 3.0_f64.sqrt()).abs() < 1e-3);
    }

    #[test]
    fn two_stage_logdet_matches_direct_assembly() {
        // Chebyshev working basis and direct monomial assembly must report
        // the same canonical logdet at a degree where both are stable.
        let k = 8;
        let set = WeightedSet::with_default_grid(Support::Interval, Weight::Zero, k, 8).unwrap();
        let mu = uniform_interval_measure(400).unwrap();
        let direct = GramSystem::new(&set, &mu, k).unwrap();
        assert_eq!(direct.basis, Basis::Monomial);

        let weights: Vec<f64> = mu.masses.clone();
        let mut b = DMatrix::<Complex64>::zeros(mu.len(), k + 1);
        for (t, p) in mu.atoms.iter().enumerate() {
            let e = Basis::Chebyshev.eval(k, p).unwrap();
            for j in 0..=k {
                b[(t, j)] = weights[t].sqrt() * e[j].conj();
            }
        }
        let g = b.adjoint() * &b;
        let chol = Cholesky::new(g).unwrap();
        let ld_w: f64 = chol.l_dirty().diagonal().iter().map(|d| 2.0 * d.re.ln()).sum();
        let ld_canonical = ld_w - 2.0 * Basis::Chebyshev.logdet_change(k);
        assert!(
            (ld_canonical - direct.logdet).abs() < 1e-9,
            "{ld_canonical} vs {}",
            direct.logdet
        );
    }

    #[test]
    fn singular_configuration_is_flagged_not_rejected() {
        let set = WeightedSet::with_default_grid(Support::Interval, Weight::Zero, 2, 8).unwrap();
        let p = Point::real(0.25);
        let mu = DiscreteMeasure::uniform(vec![p, p, Point::real(-0.5)]).unwrap();
        let gs = GramSystem::new(&set, &mu, 2).unwrap();
        assert!(gs.is_singular());
        assert_eq!(gs.logdet, f64::NEG_INFINITY);
        assert!(gs.section_values(&Point::real(0.0)).is_err());
    }
}
