//! Independent brute-force validators: Golub-Welsch rule construction from
//! the Jacobi matrix, and closed-form monomial moments.
//!
//! These are test oracles. The eigenvalue route costs O(n^2) and is kept to
//! small degrees; the production path never touches it.

use crate::error::{Error, Result};
use crate::rule::QuadratureKind;
use crate::scalar::RealScalar;
use crate::special::{gamma, ln_gamma, rising_factorial};

/// Symmetric tridiagonal Jacobi matrix of the three-term recurrence, plus the
/// zeroth moment of the weight function.
#[derive(Clone, Debug)]
pub struct JacobiMatrix<S> {
    pub diagonal: Vec<S>,
    pub off_diagonal: Vec<S>,
    pub mu0: S,
}

/// Recurrence coefficients for the classical weights.
///
/// Hermite: a_k = 0, b_k = sqrt(k/2), mu0 = sqrt(pi).
/// Laguerre: a_k = 2k + alpha + 1, b_k = sqrt(k (k + alpha)), mu0 = Gamma(alpha+1).
pub fn jacobi_matrix<S: RealScalar>(kind: &QuadratureKind<S>, n: usize) -> Result<JacobiMatrix<S>> {
    if n == 0 {
        return Err(Error::DegreeZero);
    }
    kind.validate()?;
    match kind {
        QuadratureKind::Hermite => {
            let diagonal = vec![S::zero(); n];
            let off_diagonal = (1..n)
                .map(|k| (S::from_i64(k as i64) / S::from_i64(2)).sqrt())
                .collect();
            Ok(JacobiMatrix {
                diagonal,
                off_diagonal,
                mu0: S::pi().sqrt(),
            })
        }
        QuadratureKind::Laguerre { alpha } => {
            let diagonal = (0..n)
                .map(|k| S::from_i64(2 * k as i64) + alpha.clone() + S::one())
                .collect();
            let off_diagonal = (1..n)
                .map(|k| {
                    let kk = S::from_i64(k as i64);
                    (kk.clone() * (kk + alpha.clone())).sqrt()
                })
                .collect();
            Ok(JacobiMatrix {
                diagonal,
                off_diagonal,
                mu0: gamma(&(alpha.clone() + S::one())),
            })
        }
        QuadratureKind::RadauLaguerre { .. } => Err(Error::UnsupportedKind),
    }
}

fn hypot<S: RealScalar>(a: &S, b: &S) -> S {
    let aa = a.abs();
    let bb = b.abs();
    let m = aa.clone().max_val(bb.clone());
    if m.is_zero() {
        return S::zero();
    }
    let p = aa / m.clone();
    let q = bb / m.clone();
    m * (p.clone() * p + q.clone() * q).sqrt()
}

/// Implicit-shift QL on the symmetric tridiagonal matrix, tracking the first
/// row of the accumulated rotations; nodes are the (sorted) eigenvalues and
/// weight_i = mu0 * (first eigenvector component)^2.
pub fn golub_welsch<S: RealScalar>(m: &JacobiMatrix<S>) -> Result<(Vec<S>, Vec<S>)> {
    let (nodes, sq) = eigen_first_components(m)?;
    let weights = sq.into_iter().map(|z2| m.mu0.clone() * z2).collect();
    Ok((nodes, weights))
}

/// As [`golub_welsch`] but with weights normalized to sum to one; avoids mu0
/// entirely (hence representable for any alpha).
pub fn golub_welsch_normalized<S: RealScalar>(m: &JacobiMatrix<S>) -> Result<(Vec<S>, Vec<S>)> {
    eigen_first_components(m)
}

fn eigen_first_components<S: RealScalar>(m: &JacobiMatrix<S>) -> Result<(Vec<S>, Vec<S>)> {
    let n = m.diagonal.len();
    if m.off_diagonal.len() + 1 != n {
        return Err(Error::Serialization("bad Jacobi matrix shape".into()));
    }
    let mut d = m.diagonal.clone();
    let mut e = m.off_diagonal.clone();
    e.push(S::zero());
    let mut z = vec![S::zero(); n];
    z[0] = S::one();

    let u = S::unit_roundoff();
    let max_sweeps = 60;

    for l in 0..n {
        let mut iter = 0;
        loop {
            // Find the first negligible off-diagonal at or after l.
            let mut mm = l;
            while mm + 1 < n {
                let dd = d[mm].abs() + d[mm + 1].abs();
                if e[mm].abs() <= u.clone() * dd {
                    break;
                }
                mm += 1;
            }
            if mm == l {
                break;
            }
            iter += 1;
            if iter > max_sweeps {
                return Err(Error::NoConvergence);
            }

            // Wilkinson-style shift from the leading 2x2.
            let two = S::from_i64(2);
            let mut g = (d[l + 1].clone() - d[l].clone()) / (two.clone() * e[l].clone());
            let r = hypot(&g, &S::one());
            let sign_r = if g >= S::zero() { r.clone() } else { -r.clone() };
            g = d[mm].clone() - d[l].clone() + e[l].clone() / (g + sign_r);

            let mut s = S::one();
            let mut c = S::one();
            let mut p = S::zero();
            let mut underflowed = false;
            for i in (l..mm).rev() {
                let mut f = s.clone() * e[i].clone();
                let b = c.clone() * e[i].clone();
                let r = hypot(&f, &g);
                e[i + 1] = r.clone();
                if r.is_zero() {
                    d[i + 1] = d[i + 1].clone() - p.clone();
                    e[mm] = S::zero();
                    underflowed = true;
                    break;
                }
                s = f.clone() / r.clone();
                c = g.clone() / r.clone();
                g = d[i + 1].clone() - p.clone();
                let t = (d[i].clone() - g.clone()) * s.clone() + two.clone() * c.clone() * b.clone();
                p = s.clone() * t.clone();
                d[i + 1] = g.clone() + p.clone();
                g = c.clone() * t - b;

                f = z[i + 1].clone();
                z[i + 1] = s.clone() * z[i].clone() + c.clone() * f.clone();
                z[i] = c.clone() * z[i].clone() - s.clone() * f;
            }
            if !underflowed {
                d[l] = d[l].clone() - p;
                e[l] = g;
                e[mm] = S::zero();
            }
        }
    }

    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).expect("finite eigenvalues"));
    let nodes = idx.iter().map(|&i| d[i].clone()).collect();
    let first_sq = idx.iter().map(|&i| z[i].clone() * z[i].clone()).collect();
    Ok((nodes, first_sq))
}

/// A moment value, or its logarithm when the value itself overflows.
#[derive(Clone, Debug)]
pub enum Moment<S> {
    Value(S),
    Log(S),
}

impl<S: RealScalar> Moment<S> {
    pub fn value(&self) -> Option<&S> {
        match self {
            Moment::Value(v) => Some(v),
            Moment::Log(_) => None,
        }
    }
}

/// k-th monomial moment of the weight function.
///
/// Hermite: 0 for odd k, Gamma((k+1)/2) for even k.
/// Laguerre: Gamma(alpha + k + 1).
pub fn monomial_moment<S: RealScalar>(kind: &QuadratureKind<S>, k: usize) -> Moment<S> {
    match kind {
        QuadratureKind::Hermite => {
            if k % 2 == 1 {
                return Moment::Value(S::zero());
            }
            // Gamma(m + 1/2) = sqrt(pi) (2m-1)!! / 2^m
            let m = k / 2;
            let mut acc = S::pi().sqrt();
            for i in 1..=m {
                acc = acc * S::from_i64(2 * i as i64 - 1) / S::from_i64(2);
            }
            Moment::Value(acc)
        }
        QuadratureKind::Laguerre { alpha } | QuadratureKind::RadauLaguerre { alpha } => {
            let arg = alpha.clone() + S::from_i64(k as i64) + S::one();
            let ln_m = ln_gamma(&arg);
            let v = ln_m.exp();
            if v.is_finite() {
                Moment::Value(v)
            } else {
                Moment::Log(ln_m)
            }
        }
    }
}

/// Moment divided by mu0: Hermite moments over sqrt(pi), Laguerre moments as
/// the rising factorial (alpha+1)_k. Always representable.
pub fn monomial_moment_normalized<S: RealScalar>(kind: &QuadratureKind<S>, k: usize) -> S {
    match kind {
        QuadratureKind::Hermite => {
            if k % 2 == 1 {
                return S::zero();
            }
            let m = k / 2;
            let mut acc = S::one();
            for i in 1..=m {
                acc = acc * S::from_i64(2 * i as i64 - 1) / S::from_i64(2);
            }
            acc
        }
        QuadratureKind::Laguerre { alpha } | QuadratureKind::RadauLaguerre { alpha } => {
            rising_factorial(&(alpha.clone() + S::one()), k)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn jacobi_entries_match_recurrences() {
        let m = jacobi_matrix(&QuadratureKind::Laguerre { alpha: 1.0 }, 2).unwrap();
        assert_eq!(m.diagonal, vec![2.0, 4.0]);
        assert!((m.off_diagonal[0] - 2f64.sqrt()).abs() < 1e-15);

        let h = jacobi_matrix::<f64>(&QuadratureKind::Hermite, 2).unwrap();
        assert_eq!(h.diagonal, vec![0.0, 0.0]);
        assert!((h.off_diagonal[0] - 0.5f64.sqrt()).abs() < 1e-16);
        assert!((h.mu0 - std::f64::consts::PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn laguerre_2x2_eigenvalues() {
        // alpha = 1: x^2 - 6x + 6 -> 3 +/- sqrt(3)
        let m = jacobi_matrix(&QuadratureKind::Laguerre { alpha: 1.0 }, 2).unwrap();
        let (nodes, _) = golub_welsch(&m).unwrap();
        assert!(close(nodes[0], 3.0 - 3f64.sqrt(), 1e-14));
        assert!(close(nodes[1], 3.0 + 3f64.sqrt(), 1e-14));
    }

    #[test]
    fn hermite_3_point_rule() {
        let m = jacobi_matrix::<f64>(&QuadratureKind::Hermite, 3).unwrap();
        let (nodes, weights) = golub_welsch(&m).unwrap();
        let sp = std::f64::consts::PI.sqrt();
        let r = 1.5f64.sqrt();
        assert!(close(nodes[0], -r, 1e-14));
        assert!(nodes[1].abs() < 1e-14);
        assert!(close(nodes[2], r, 1e-14));
        assert!(close(weights[0], sp / 6.0, 1e-13));
        assert!(close(weights[1], 2.0 * sp / 3.0, 1e-13));
        assert!(close(weights[2], sp / 6.0, 1e-13));
    }

    #[test]
    fn laguerre_2_point_rule_alpha_zero() {
        let m = jacobi_matrix(&QuadratureKind::Laguerre { alpha: 0.0 }, 2).unwrap();
        let (nodes, weights) = golub_welsch(&m).unwrap();
        assert!(close(nodes[0], 2.0 - 2f64.sqrt(), 1e-14));
        assert!(close(nodes[1], 2.0 + 2f64.sqrt(), 1e-14));
        assert!(close(weights[0], (2.0 + 2f64.sqrt()) / 4.0, 1e-13));
        assert!(close(weights[1], (2.0 - 2f64.sqrt()) / 4.0, 1e-13));
    }

    #[test]
    fn one_point_rule_is_trivial() {
        let m = jacobi_matrix(&QuadratureKind::Laguerre { alpha: 0.0 }, 1).unwrap();
        let (nodes, weights) = golub_welsch(&m).unwrap();
        assert!(close(nodes[0], 1.0, 1e-15));
        assert!(close(weights[0], 1.0, 1e-14));
    }

    #[test]
    fn eigenvalues_are_strictly_separated() {
        for n in [2usize, 5, 12, 25] {
            let m = jacobi_matrix::<f64>(&QuadratureKind::Hermite, n).unwrap();
            let (nodes, _) = golub_welsch(&m).unwrap();
            assert_eq!(nodes.len(), n);
            for w in nodes.windows(2) {
                assert!(w[0] < w[1]);
            }
        }
    }

    #[test]
    fn moments_match_closed_forms() {
        let sp = std::f64::consts::PI.sqrt();
        let h = QuadratureKind::Hermite;
        assert!(close(*monomial_moment(&h, 0).value().unwrap(), sp, 1e-15));
        assert!(close(
            *monomial_moment::<f64>(&h, 2).value().unwrap(),
            sp / 2.0,
            1e-15
        ));
        assert_eq!(*monomial_moment::<f64>(&h, 5).value().unwrap(), 0.0);

        let l = QuadratureKind::Laguerre { alpha: 0.0 };
        assert!(close(*monomial_moment(&l, 3).value().unwrap(), 6.0, 1e-13));
        // normalized: (alpha+1)_k at alpha = 2.5, k = 2: 3.5 * 4.5
        let ln = monomial_moment_normalized(&QuadratureKind::Laguerre { alpha: 2.5 }, 2);
        assert!(close(ln, 3.5 * 4.5, 1e-14));
    }

    #[test]
    fn huge_alpha_moment_falls_back_to_log() {
        let l = QuadratureKind::Laguerre { alpha: 1.0e4 };
        match monomial_moment(&l, 0) {
            Moment::Log(lg) => assert!(lg > 700.0),
            Moment::Value(v) => panic!("expected log fallback, got {v}"),
        }
    }

    #[test]
    fn gw_exactness_small_degrees() {
        // The oracle itself satisfies the exactness property it will be used
        // to check: n-point rule integrates x^k exactly for k <= 2n-1.
        for n in [1usize, 2, 4, 7] {
            let m = jacobi_matrix(&QuadratureKind::Laguerre { alpha: 0.5 }, n).unwrap();
            let (nodes, weights) = golub_welsch_normalized(&m).unwrap();
            for k in 0..(2 * n) {
                let q: f64 = nodes
                    .iter()
                    .zip(weights.iter())
                    .map(|(x, w)| w * x.powi(k as i32))
                    .sum();
                let exact =
                    monomial_moment_normalized(&QuadratureKind::Laguerre { alpha: 0.5 }, k);
                assert!(
                    close(q, exact, 5e-13),
                    "n={n} k={k}: {q} vs {exact}"
                );
            }
        }
    }
}
