//! Gauss-Hermite and Gauss-Laguerre quadrature rules by a globally
//! convergent fourth-order fixed-point iteration, generic over the working
//! precision.
//!
//! Nodes are computed without initial estimates, in decreasing order of
//! weight significance, with local Taylor series (plus a continued fraction
//! near the Laguerre endpoint) supplying the function values. The same code
//! runs on `f64` and on the arbitrary-precision backend in [`mp`].
//!
//! ```
//! use gaussquad::{hermite_rule, laguerre_rule};
//!
//! let h = hermite_rule::<f64>(20).unwrap();
//! let q = h.integrate(|x| x.cos());
//! let exact = std::f64::consts::PI.sqrt() * (-0.25f64).exp();
//! assert!((q - exact).abs() < 1e-14);
//!
//! let l = laguerre_rule::<f64>(10, 0.5).unwrap();
//! assert!((l.weights.iter().sum::<f64>() - 1.0).abs() < 1e-13);
//! ```

pub mod barycentric;
pub mod error;
pub mod hermite;
pub mod laguerre;
pub mod mp;
pub mod oracle;
pub mod rule;
pub mod scalar;
pub mod solver;
pub mod special;

pub use error::{Error, Result};
pub use mp::{with_digits, MpFloat};
pub use rule::{IterationStats, QuadratureKind, QuadratureRule};
pub use scalar::RealScalar;

/// The n-point Gauss-Hermite rule (weight `e^{-x^2}` on the real line);
/// weights sum to `sqrt(pi)`.
pub fn hermite_rule<S: RealScalar>(n: usize) -> Result<QuadratureRule<S>> {
    hermite::rule(n)
}

/// The n-point Gauss-Laguerre rule (weight `x^alpha e^{-x}` on `x > 0`);
/// weights normalized to sum to one.
pub fn laguerre_rule<S: RealScalar>(n: usize, alpha: S) -> Result<QuadratureRule<S>> {
    laguerre::rule(n, alpha)
}

/// Gauss-Radau-Laguerre rule with a fixed node at `x = 0`; normalized by
/// `Gamma(alpha+1)`.
pub fn radau_laguerre_rule<S: RealScalar>(n: usize, alpha: S) -> Result<QuadratureRule<S>> {
    laguerre::radau_rule(n, alpha)
}
