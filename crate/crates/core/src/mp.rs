//! Arbitrary-precision scalar backed by `astro-float`.
//!
//! The working precision is configured per thread in decimal digits; see
//! [`with_digits`]. Constructors (`pi`, `one`, `from_i64`, `parse_decimal`,
//! ...) read the thread-local digit count, while arithmetic uses the
//! precision already carried by the operands, so values stay deterministic
//! when moved across threads.

use std::cell::{Cell, RefCell};
use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};

use crate::scalar::RealScalar;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static DIGITS: Cell<u32> = const { Cell::new(34) };
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

/// Runs `f` with the thread's working precision set to `digits` decimal
/// digits, restoring the previous setting afterwards.
pub fn with_digits<R>(digits: u32, f: impl FnOnce() -> R) -> R {
    assert!(digits >= 2, "working precision must be at least 2 digits");
    let prev = DIGITS.with(|d| d.replace(digits));
    let out = f();
    DIGITS.with(|d| d.set(prev));
    out
}

/// Current thread-local working precision in decimal digits.
pub fn current_digits() -> u32 {
    DIGITS.with(|d| d.get())
}

fn prec_bits() -> usize {
    bits_for_digits(current_digits())
}

fn bits_for_digits(digits: u32) -> usize {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Arbitrary-precision real number. Precision travels with the value.
#[derive(Clone, Debug)]
pub struct MpFloat(BigFloat);

impl MpFloat {
    fn new(x: BigFloat) -> Self {
        debug_assert!(!x.is_nan(), "NaN produced in MpFloat arithmetic");
        MpFloat(x)
    }

    fn prec(&self) -> usize {
        // Zero values may carry an empty mantissa (precision 0), which the
        // astro-float functions reject; use the working precision instead.
        match self.0.precision() {
            Some(p) if p > 0 => p,
            _ => prec_bits(),
        }
    }

    fn join_prec(&self, other: &Self) -> usize {
        self.prec().max(other.prec())
    }

    pub fn inner(&self) -> &BigFloat {
        &self.0
    }
}

impl fmt::Display for MpFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl PartialEq for MpFloat {
    fn eq(&self, other: &Self) -> bool {
        self.0.cmp(&other.0) == Some(0)
    }
}

impl PartialOrd for MpFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.cmp(&other.0).map(|s| s.cmp(&0))
    }
}

impl std::ops::Add for MpFloat {
    type Output = MpFloat;
    fn add(self, rhs: Self) -> Self {
        let p = self.join_prec(&rhs);
        MpFloat::new(self.0.add(&rhs.0, p, RM))
    }
}

impl std::ops::Sub for MpFloat {
    type Output = MpFloat;
    fn sub(self, rhs: Self) -> Self {
        let p = self.join_prec(&rhs);
        MpFloat::new(self.0.sub(&rhs.0, p, RM))
    }
}

impl std::ops::Mul for MpFloat {
    type Output = MpFloat;
    fn mul(self, rhs: Self) -> Self {
        let p = self.join_prec(&rhs);
        MpFloat::new(self.0.mul(&rhs.0, p, RM))
    }
}

impl std::ops::Div for MpFloat {
    type Output = MpFloat;
    fn div(self, rhs: Self) -> Self {
        let p = self.join_prec(&rhs);
        MpFloat::new(self.0.div(&rhs.0, p, RM))
    }
}

impl std::ops::Neg for MpFloat {
    type Output = MpFloat;
    fn neg(self) -> Self {
        MpFloat::new(self.0.neg())
    }
}

impl RealScalar for MpFloat {
    fn zero() -> Self {
        MpFloat::new(BigFloat::from_i64(0, prec_bits()))
    }
    fn one() -> Self {
        MpFloat::new(BigFloat::from_i64(1, prec_bits()))
    }
    fn pi() -> Self {
        MpFloat::new(with_consts(|cc| cc.pi(prec_bits(), RM)))
    }
    fn from_i64(v: i64) -> Self {
        MpFloat::new(BigFloat::from_i64(v, prec_bits()))
    }
    fn from_f64(v: f64) -> Self {
        // 53 mantissa bits embed exactly into any working precision >= 53.
        MpFloat::new(BigFloat::from_f64(v, prec_bits().max(64)))
    }
    fn to_f64(&self) -> f64 {
        if self.0.is_zero() {
            return 0.0;
        }
        if self.0.is_inf_pos() {
            return f64::INFINITY;
        }
        if self.0.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        // value = 0.m * 2^e with the mantissa MSB set; round the top 128
        // mantissa bits to 53 in one step.
        let (words, _, sign, e, _) = self.0.as_raw_parts().expect("finite value");
        let top = *words.last().unwrap_or(&0);
        let next = if words.len() >= 2 {
            words[words.len() - 2]
        } else {
            0
        };
        let m128 = ((top as u128) << 64) | (next as u128);
        let shifted = (m128 >> 75) as u64; // 53 bits
        let rem = m128 & ((1u128 << 75) - 1);
        let half = 1u128 << 74;
        let mut m53 = shifted;
        let mut exp = e as i64 - 53;
        if rem > half || (rem == half && (m53 & 1) == 1) {
            m53 += 1;
            if m53 == (1u64 << 53) {
                m53 >>= 1;
                exp += 1;
            }
        }
        let mag = if exp > 1024 {
            f64::INFINITY
        } else if exp < -1200 {
            0.0
        } else {
            // split the scale to stay inside powi's exponent range
            let h = (exp / 2) as i32;
            (m53 as f64) * 2f64.powi(h) * 2f64.powi(exp as i32 - h)
        };
        if sign == Sign::Neg {
            -mag
        } else {
            mag
        }
    }

    fn abs(&self) -> Self {
        let mut v = self.0.clone();
        v.set_sign(Sign::Pos);
        MpFloat::new(v)
    }
    fn sqrt(&self) -> Self {
        MpFloat::new(self.0.sqrt(self.prec(), RM))
    }
    fn exp(&self) -> Self {
        MpFloat::new(with_consts(|cc| self.0.exp(self.prec(), RM, cc)))
    }
    fn ln(&self) -> Self {
        MpFloat::new(with_consts(|cc| self.0.ln(self.prec(), RM, cc)))
    }
    fn atan(&self) -> Self {
        MpFloat::new(with_consts(|cc| self.0.atan(self.prec(), RM, cc)))
    }
    fn atanh(&self) -> Self {
        MpFloat::new(with_consts(|cc| self.0.atanh(self.prec(), RM, cc)))
    }
    fn floor(&self) -> Self {
        MpFloat::new(self.0.floor())
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn is_finite(&self) -> bool {
        !self.0.is_inf() && !self.0.is_nan()
    }
    fn is_negative(&self) -> bool {
        self.0.is_negative() && !self.0.is_zero()
    }

    fn unit_roundoff() -> Self {
        // 2^(1 - nominal bits)
        let bits = bits_for_digits(current_digits());
        let one = BigFloat::from_i64(1, 64);
        let mut u = one;
        u.set_exponent(1 - (bits as i32 - 1));
        MpFloat::new(u)
    }
    fn digits() -> u32 {
        current_digits()
    }

    fn to_decimal_string(&self, sig: usize) -> String {
        decimal_string(&self.0, sig)
    }
    fn to_decimal_string_full(&self) -> String {
        // Zero-extend the mantissa first: the emitted decimal then carries
        // guard digits beyond ceil(bits log10 2) + 1, which guarantees the
        // re-parse rounds back to the original bits.
        let p = self.prec();
        let digits = (p as f64 * std::f64::consts::LOG10_2).ceil() as usize + 4;
        let mut padded = self.0.clone();
        let _ = padded.set_precision(p + 128, RM);
        decimal_string(&padded, digits)
    }
    fn parse_decimal(s: &str) -> Option<Self> {
        let v = with_consts(|cc| BigFloat::parse(s, Radix::Dec, prec_bits(), RM, cc));
        if v.is_nan() {
            None
        } else {
            Some(MpFloat::new(v))
        }
    }
}

/// Round-to-nearest decimal string with `sig` significant digits, in
/// scientific notation `d.ddd...e±x`.
fn decimal_string(v: &BigFloat, sig: usize) -> String {
    let sig = sig.max(1);
    if v.is_zero() {
        return format!("{:.*e}", sig - 1, 0.0);
    }
    let (sign, digits, exp) =
        with_consts(|cc| v.convert_to_radix(Radix::Dec, RM, cc)).expect("finite value");
    // Value is 0.d1 d2 ... * 10^exp.
    let mut ds: Vec<u8> = digits;
    // Strip leading zeros (the first significant digit defines the exponent).
    let first_nonzero = ds.iter().position(|&d| d != 0).unwrap_or(0);
    let exp = exp - first_nonzero as i32;
    ds.drain(..first_nonzero);
    // Round to `sig` digits, half away from zero on the digit stream.
    if ds.len() > sig {
        let round_up = ds[sig] >= 5;
        ds.truncate(sig);
        if round_up {
            let mut i = sig;
            loop {
                if i == 0 {
                    ds.insert(0, 1);
                    return assemble(sign, &ds[..sig.min(ds.len())], exp + 1);
                }
                i -= 1;
                if ds[i] == 9 {
                    ds[i] = 0;
                } else {
                    ds[i] += 1;
                    break;
                }
            }
        }
    }
    while ds.len() < sig {
        ds.push(0);
    }
    assemble(sign, &ds, exp)
}

fn assemble(sign: Sign, ds: &[u8], exp: i32) -> String {
    let mut s = String::new();
    if sign == Sign::Neg {
        s.push('-');
    }
    s.push((b'0' + ds[0]) as char);
    if ds.len() > 1 {
        s.push('.');
        for &d in &ds[1..] {
            s.push((b'0' + d) as char);
        }
    }
    // convert_to_radix exponent counts the leading digit as fractional.
    s.push_str(&format!("e{}", exp - 1));
    s
}
