//! Barycentric interpolation weights at the quadrature nodes.
//!
//! For a polynomial `q` with simple zeros `x_i`, the Lagrange interpolant is
//! `P(x) = sum v_i f_i/(x - x_i) / sum v_i/(x - x_i)` with `v_i = 1/q'(x_i)`
//! up to one common factor. The rules store the derivative of the scaled
//! solution `y = s(x) q(x)`, so `q'(x_i) = y'(x_i)/s(x_i)` with the
//! elementary factor `s` folded back in; weights are emitted relative to the
//! largest-weight node to avoid under/overflow.

use crate::error::{Error, Result};
use crate::rule::{QuadratureKind, QuadratureRule};
use crate::scalar::RealScalar;

/// Barycentric weights `v_i ∝ 1/q'(x_i)`, scaled by one common factor.
pub fn weights<S: RealScalar>(rule: &QuadratureRule<S>) -> Result<Vec<S>> {
    let n = rule.nodes.len();
    if rule.derivatives.len() != n {
        return Err(Error::CountMismatch {
            expected: n,
            got: rule.derivatives.len(),
        });
    }
    // Reference: the largest-weight node (weights decay away from it).
    let mut j = 0;
    for (i, w) in rule.weights.iter().enumerate() {
        if *w > rule.weights[j] {
            j = i;
        }
    }
    let x_ref = rule.nodes[j].clone();

    let mut out = Vec::with_capacity(n);
    match &rule.kind {
        QuadratureKind::Hermite => {
            // s(x) = e^{-x^2/2}: v_i = e^{(x_j^2 - x_i^2)/2} / y'(x_i)
            for (x, yp) in rule.nodes.iter().zip(rule.derivatives.iter()) {
                if yp.is_zero() {
                    return Err(Error::ZeroDerivative(x.to_f64()));
                }
                let g = (x_ref.clone() * x_ref.clone() - x.clone() * x.clone()).half();
                out.push(g.exp() / yp.clone());
            }
        }
        QuadratureKind::Laguerre { alpha } | QuadratureKind::RadauLaguerre { alpha } => {
            // Radau internal nodes are the zeros of the (alpha+1) polynomial
            // and the stored derivatives belong to it.
            let eff_alpha = match &rule.kind {
                QuadratureKind::RadauLaguerre { .. } => alpha.clone() + S::one(),
                _ => alpha.clone(),
            };
            // s(x) = x^{alpha/2 + 1/4} e^{-x/2} and d/dx = (1/(2 sqrt(x))) d/dz:
            // v_i = 2 z_i s(x_i)/ydot(z_i), relative to the reference node.
            let exp_pow = eff_alpha.half() + S::one() / S::from_i64(4);
            for (x, yd) in rule.nodes.iter().zip(rule.derivatives.iter()) {
                if yd.is_zero() {
                    return Err(Error::ZeroDerivative(x.to_f64()));
                }
                let g = (x_ref.clone() - x.clone()).half()
                    + exp_pow.clone() * (x.clone() / x_ref.clone()).ln();
                let two_z = S::from_i64(2) * x.sqrt();
                out.push(two_z * g.exp() / yd.clone());
            }
        }
    }
    Ok(out)
}

/// Barycentric interpolation of `(x_i, f_i)` at `x` (second form).
pub fn interpolate<S: RealScalar>(nodes: &[S], values: &[S], v: &[S], x: &S) -> S {
    let mut num = S::zero();
    let mut den = S::zero();
    for ((xi, fi), vi) in nodes.iter().zip(values.iter()).zip(v.iter()) {
        let d = x.clone() - xi.clone();
        if d.is_zero() {
            return fi.clone();
        }
        let t = vi.clone() / d;
        num = num + t.clone() * fi.clone();
        den = den + t;
    }
    num / den
}
