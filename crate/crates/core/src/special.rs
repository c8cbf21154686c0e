//! Log-gamma at arbitrary working precision.
//!
//! Stirling's series with exact-rational Bernoulli coefficients plus argument
//! promotion. Only the optional Gamma(alpha+1)-scaled outputs, the absolute
//! Radau boundary weight, and the oracle's unnormalized moments need this;
//! the quadrature algorithms themselves never call it.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalar::RealScalar;

static BERNOULLI: Mutex<Vec<BigRational>> = Mutex::new(Vec::new());

/// Bernoulli number B_m (B_1 = -1/2 convention), cached.
fn bernoulli(m: usize) -> BigRational {
    let mut cache = BERNOULLI.lock().unwrap();
    if cache.is_empty() {
        cache.push(BigRational::one()); // B_0
    }
    while cache.len() <= m {
        let k = cache.len();
        // sum_{j=0}^{k} C(k+1, j) B_j = 0  =>  B_k = -sum_{j<k} C(k+1,j) B_j / C(k+1,k)
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one(); // C(k+1, 0)
        for (j, b) in cache.iter().enumerate().take(k) {
            acc += BigRational::from_integer(binom.clone()) * b;
            // C(k+1, j+1) = C(k+1, j) * (k+1-j) / (j+1)
            binom = binom * BigInt::from(k + 1 - j) / BigInt::from(j + 1);
        }
        let c = BigRational::from_integer(BigInt::from(k + 1));
        cache.push(-acc / c);
    }
    cache[m].clone()
}

fn rational_to_scalar<S: RealScalar>(r: &BigRational) -> S {
    let num = S::parse_decimal(&r.numer().to_string()).expect("integer parses");
    let den = S::parse_decimal(&r.denom().to_string()).expect("integer parses");
    num / den
}

/// ln Gamma(x) for x > 0 at the working precision of `x`'s type.
pub fn ln_gamma<S: RealScalar>(x: &S) -> S {
    assert!(*x > S::zero(), "ln_gamma requires a positive argument");
    let digits = S::digits();
    // Threshold where the Stirling tail reaches 10^-D within ~D/2 terms.
    let threshold = S::from_i64((digits as i64).max(20));
    // Promote: ln G(x) = ln G(x + m) - ln prod_{k=0}^{m-1} (x + k).
    let mut shifted = x.clone();
    let mut product = S::one();
    let mut promoted = false;
    while shifted < threshold {
        product = product * shifted.clone();
        shifted = shifted + S::one();
        promoted = true;
    }
    let correction = if promoted { product.ln() } else { S::zero() };

    // ln G(z) ~ (z - 1/2) ln z - z + ln(2 pi)/2 + sum B_2k / (2k (2k-1) z^(2k-1))
    let z = shifted;
    let ln_z = z.ln();
    let two = S::from_i64(2);
    let mut result = (z.clone() - S::one().half()) * ln_z - z.clone()
        + (two.clone() * S::pi()).ln().half();

    let tol = {
        let d = S::from_i64(digits as i64 + 2);
        (-(d * S::from_i64(10).ln())).exp()
    };
    let z2 = z.clone() * z.clone();
    let mut zpow = z.clone(); // z^(2k-1)
    for k in 1..=(2 * digits as usize + 10) {
        let b = bernoulli(2 * k);
        let denom = BigRational::from_integer(BigInt::from(2 * k * (2 * k - 1)));
        let coeff: S = rational_to_scalar(&(b / denom));
        let term = coeff / zpow.clone();
        result = result.clone() + term.clone();
        if term.abs() < tol.clone() * result.abs() {
            break;
        }
        zpow = zpow * z2.clone();
    }
    result - correction
}

/// Gamma(x) for x > 0; may overflow the representable range of `S`.
pub fn gamma<S: RealScalar>(x: &S) -> S {
    ln_gamma(x).exp()
}

/// ln of the binomial coefficient C(n + a + 1, n) = G(n+a+2) / (G(n+1) G(a+2));
/// evaluated directly as a finite product, no gamma needed.
pub fn ln_binomial_shifted<S: RealScalar>(n: usize, alpha: &S) -> S {
    // C(n+a+1, n) = prod_{k=1..n} (a + 1 + k) / k
    let mut acc = S::zero();
    for k in 1..=n {
        let kk = S::from_i64(k as i64);
        acc = acc + ((alpha.clone() + S::one() + kk.clone()) / kk).ln();
    }
    acc
}

/// Rising factorial (x)_k = x (x+1) ... (x+k-1); equals G(x+k)/G(x).
pub fn rising_factorial<S: RealScalar>(x: &S, k: usize) -> S {
    let mut acc = S::one();
    for i in 0..k {
        acc = acc * (x.clone() + S::from_i64(i as i64));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mp::{with_digits, MpFloat};

    #[test]
    fn bernoulli_values_match_known_rationals() {
        let cases: [(usize, i64, i64); 6] = [
            (2, 1, 6),
            (4, -1, 30),
            (6, 1, 42),
            (8, -1, 30),
            (10, 5, 66),
            (12, -691, 2730),
        ];
        for (m, num, den) in cases {
            let b = bernoulli(m);
            let expect = BigRational::new(BigInt::from(num), BigInt::from(den));
            assert_eq!(b, expect, "B_{m}");
        }
        assert!(bernoulli(3).is_zero());
        assert!(bernoulli(7).is_zero());
    }

    #[test]
    fn ln_gamma_matches_closed_forms_f64() {
        // G(1) = 1, G(2) = 1, G(5) = 24, G(1/2) = sqrt(pi)
        assert!(ln_gamma(&1.0f64).abs() < 1e-14);
        assert!(ln_gamma(&2.0f64).abs() < 1e-14);
        assert!((ln_gamma(&5.0f64) - 24f64.ln()).abs() < 1e-13);
        let half = ln_gamma(&0.5f64);
        assert!((half - std::f64::consts::PI.sqrt().ln()).abs() < 1e-14);
        // Recurrence G(x+1) = x G(x) across a non-trivial argument.
        let x = 3.7f64;
        assert!((ln_gamma(&(x + 1.0)) - (ln_gamma(&x) + x.ln())).abs() < 1e-13);
    }

    #[test]
    fn ln_gamma_large_argument() {
        // ln G(1001) = sum ln k for k = 1..1000
        let direct: f64 = (1..=1000u32).map(|k| (k as f64).ln()).sum();
        let lg = ln_gamma(&1001.0f64);
        assert!((lg - direct).abs() / direct < 1e-14, "{lg} vs {direct}");
    }

    #[test]
    fn ln_gamma_high_precision_consistency() {
        with_digits(64, || {
            // duplication: G(2z) = 2^(2z-1)/sqrt(pi) G(z) G(z+1/2) at z = 1.25
            let z = MpFloat::parse_decimal("1.25").unwrap();
            let two_z = MpFloat::parse_decimal("2.5").unwrap();
            let lhs = ln_gamma(&two_z);
            let ln2 = MpFloat::from_i64(2).ln();
            let rhs = (two_z - MpFloat::one()) * ln2 - MpFloat::pi().sqrt().ln()
                + ln_gamma(&z)
                + ln_gamma(&(z.clone() + MpFloat::one().half()));
            let err = (lhs - rhs).abs().to_f64();
            assert!(err < 1e-60, "duplication residual {err}");
        });
    }

    #[test]
    fn shifted_binomial_and_rising_factorial() {
        // C(n+a+1, n) at a = 0: C(n+1, n) = n+1
        let v = ln_binomial_shifted(4, &0.0f64).exp();
        assert!((v - 5.0).abs() < 1e-13);
        // (alpha+1)_k ratio moments: a = 2, k = 3: 3*4*5 = 60
        let r = rising_factorial(&3.0f64, 3);
        assert!((r - 60.0).abs() < 1e-12);
    }
}
