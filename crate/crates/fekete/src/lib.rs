//! Weighted Fekete points, Christoffel-Darboux distortion functions, Bergman
//! measures, L-functionals, and D-optimal designs on concrete model spaces.
//!
//! Two model spaces are supported: univariate polynomials of degree at most k
//! on subsets of the complex plane (dimension k+1), and real spherical
//! polynomials of total degree at most k on S^2 (dimension (k+1)^2). Both come
//! with a reference pair (a compact set, a weight, and a probability measure)
//! against which all bases are orthonormal: monomials z^j for the unit circle
//! with normalized arclength, probability-normalized real spherical harmonics
//! for the uniform sphere.
//!
//! The main objects:
//!
//! * [`gram::GramSystem`]: the Gram matrix of the degree-k basis in
//!   L^2(mu, k*phi), with Cholesky factor, log-determinant, and induced
//!   orthonormal sections.
//! * [`bergman`]: the distortion function rho(mu, k*phi) (the squared norm of
//!   point evaluation; the reciprocal Christoffel function), the Bergman
//!   measure beta = rho/N * mu, and growth diagnostics that test whether a
//!   measure behaves like a Bernstein-Markov measure.
//! * [`search`]: weighted Vandermonde determinants, greedy + exchange Fekete
//!   search, Leja sequences, the recursively extremal construction, and the
//!   k-diameter.
//! * [`design`]: optimal (D-optimal) measures by multiplicative fixed point,
//!   Lagrange sections, Lebesgue constants, and interpolation distortions.
//! * [`measure`]: discrete probability measures, closed-form equilibrium laws,
//!   an independent energy-minimization oracle, and discrepancy metrics.
//!
//! Everything is deterministic: grids are closed-form, ties break by lowest
//! grid index, and no operation consumes randomness.

pub mod bergman;
pub mod design;
pub mod gram;
pub mod harmonics;
pub mod io;
pub mod measure;
pub mod model;
pub mod search;
pub mod selfcheck;

use thiserror::Error;

/// Library error type. Numerical failures are separated from domain errors so
/// callers (in particular the CLI) can map them to distinct exit codes.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid input: point outside the support, wrong configuration size,
    /// grid too small for the requested degree, and similar.
    #[error("domain error: {0}")]
    Domain(String),

    /// A Gram system was singular where a nonsingular one is required.
    #[error("singular gram system: {0}")]
    Singular(String),

    /// An iteration failed to reach its stopping criterion.
    #[error("no convergence in {what}: residual {residual:e}")]
    Convergence { what: String, residual: f64 },

    /// Mismatched degrees, models, or dimensions between arguments.
    #[error("mismatch: {0}")]
    Mismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("serialization: {0}")]
    Serde(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub use measure::{Configuration, DiscreteMeasure, ReferenceLaw};
pub use model::{Basis, Point, SpaceKind, Support, Weight, WeightedSet};
