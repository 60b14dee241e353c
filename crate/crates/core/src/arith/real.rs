//! Binary floating point of arbitrary, explicitly carried precision.
//!
//! A [`Real`] is `mantissa * 2^exponent` where the mantissa never has more
//! than `precision` significant bits. Every arithmetic result is rounded to
//! nearest (ties to even), so each operation has relative error at most
//! `2^-precision`. Transcendental functions are evaluated with 64 guard bits
//! and rounded once at the end, which keeps them below `2^(1-precision)`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::Sign;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::{ArithError, Int, Rat};

/// Default precision in bits.
pub const DEFAULT_PRECISION: u32 = 128;

const GUARD_BITS: u32 = 64;

#[derive(Clone, Debug)]
pub struct Real {
    mantissa: Int,
    exponent: i64,
    precision: u32,
}

fn bits(x: &Int) -> u64 {
    x.magnitude().bits()
}

/// Rounds `sign * mag * 2^exp` to `prec` bits. `sticky` is set when the true
/// value is strictly larger in magnitude than `mag * 2^exp`.
fn round_to(sign: Sign, mag: Int, exp: i64, sticky: bool, prec: u32) -> (Int, i64) {
    if mag.is_zero() {
        return (Int::zero(), 0);
    }
    let nbits = bits(&mag);
    if nbits <= u64::from(prec) {
        debug_assert!(!sticky, "inexact value with too few bits to round");
        let m = if sign == Sign::Minus { -mag } else { mag };
        return (m, exp);
    }
    let shift = nbits - u64::from(prec);
    let mut q: Int = &mag >> shift;
    let rem = &mag - (&q << shift);
    let half = Int::one() << (shift - 1);
    let round_up = match rem.cmp(&half) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => sticky || q.is_odd(),
    };
    let mut exp = exp + shift as i64;
    if round_up {
        q += 1;
        if bits(&q) > u64::from(prec) {
            q >>= 1;
            exp += 1;
        }
    }
    let m = if sign == Sign::Minus { -q } else { q };
    (m, exp)
}

impl Real {
    fn from_parts(sign: Sign, mag: Int, exp: i64, sticky: bool, precision: u32) -> Real {
        let (mantissa, exponent) = round_to(sign, mag, exp, sticky, precision);
        Real { mantissa, exponent, precision }
    }

    pub fn zero(precision: u32) -> Real {
        Real { mantissa: Int::zero(), exponent: 0, precision }
    }

    pub fn from_int(x: &Int, precision: u32) -> Real {
        Real::from_parts(x.sign(), x.abs(), 0, false, precision)
    }

    pub fn from_i64(x: i64, precision: u32) -> Real {
        Real::from_int(&Int::from(x), precision)
    }

    /// Correctly rounded conversion of an exact rational.
    pub fn from_rat(x: &Rat, precision: u32) -> Real {
        if x.is_zero() {
            return Real::zero(precision);
        }
        let num = x.numer().abs();
        let den = x.denom().abs();
        let sign = if x.is_negative() { Sign::Minus } else { Sign::Plus };
        let k = i64::from(precision) + 2 + bits(&den) as i64 - bits(&num) as i64;
        let (n, d) = if k >= 0 { (num << k as u64, den) } else { (num, den << (-k) as u64) };
        let (q, r) = n.div_rem(&d);
        Real::from_parts(sign, q, -k, !r.is_zero(), precision)
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Same value rounded to a different precision.
    pub fn with_precision(&self, precision: u32) -> Real {
        Real::from_parts(self.mantissa.sign(), self.mantissa.abs(), self.exponent, false, precision)
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn signum(&self) -> i32 {
        match self.mantissa.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Exact rational value of this binary float.
    pub fn to_rat(&self) -> Rat {
        if self.exponent >= 0 {
            Rat::from_integer(&self.mantissa << self.exponent as u64)
        } else {
            Rat::new(self.mantissa.clone(), Int::one() << (-self.exponent) as u64)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let nb = bits(&self.mantissa) as i64;
        let drop = (nb - 60).max(0);
        let top = (&self.mantissa >> drop as u64).to_f64().unwrap_or(f64::NAN);
        let e = self.exponent + drop;
        top * 2f64.powi(e.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
    }

    pub fn ceil(&self) -> Int {
        self.to_rat().ceil().to_integer()
    }

    pub fn floor(&self) -> Int {
        self.to_rat().floor().to_integer()
    }

    /// `floor(log2 |x|)`, the binary order of magnitude. Zero maps to `i64::MIN`.
    fn magnitude_exp(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.exponent + bits(&self.mantissa) as i64 - 1
        }
    }

    pub fn neg(&self) -> Real {
        Real { mantissa: -&self.mantissa, exponent: self.exponent, precision: self.precision }
    }

    pub fn abs(&self) -> Real {
        Real { mantissa: self.mantissa.abs(), exponent: self.exponent, precision: self.precision }
    }

    pub fn add(&self, other: &Real) -> Real {
        let prec = self.precision.max(other.precision);
        if self.is_zero() {
            return other.with_precision(prec);
        }
        if other.is_zero() {
            return self.with_precision(prec);
        }
        // An addend far below half an ulp of the other cannot change the rounding.
        let gap = self.magnitude_exp() - other.magnitude_exp();
        let limit = i64::from(prec) + 4;
        if gap > limit {
            return self.with_precision(prec);
        }
        if -gap > limit {
            return other.with_precision(prec);
        }
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - e) as u64;
        let b = &other.mantissa << (other.exponent - e) as u64;
        let s = a + b;
        Real::from_parts(s.sign(), s.abs(), e, false, prec)
    }

    pub fn sub(&self, other: &Real) -> Real {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Real) -> Real {
        let prec = self.precision.max(other.precision);
        let m = &self.mantissa * &other.mantissa;
        Real::from_parts(m.sign(), m.abs(), self.exponent + other.exponent, false, prec)
    }

    pub fn div(&self, other: &Real) -> Result<Real, ArithError> {
        if other.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        let prec = self.precision.max(other.precision);
        if self.is_zero() {
            return Ok(Real::zero(prec));
        }
        let num = self.mantissa.abs();
        let den = other.mantissa.abs();
        let k = i64::from(prec) + 2 + bits(&den) as i64 - bits(&num) as i64;
        let k = k.max(0);
        let (q, r) = (num << k as u64).div_rem(&den);
        let sign = if self.mantissa.sign() == other.mantissa.sign() { Sign::Plus } else { Sign::Minus };
        Ok(Real::from_parts(sign, q, self.exponent - other.exponent - k, !r.is_zero(), prec))
    }

    pub fn mul_int(&self, k: &Int) -> Real {
        self.mul(&Real::from_int(k, self.precision))
    }

    pub fn div_int(&self, k: &Int) -> Result<Real, ArithError> {
        self.div(&Real::from_int(k, self.precision))
    }

    /// Integer power, evaluated with guard bits and rounded once.
    pub fn powi(&self, k: u32) -> Real {
        let prec = self.precision;
        let w = prec + GUARD_BITS;
        let mut base = self.with_precision(w);
        let mut acc = Real::from_i64(1, w);
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc.with_precision(prec)
    }

    pub fn sqrt(&self) -> Result<Real, ArithError> {
        if self.is_negative() {
            return Err(ArithError::NegativeSqrt);
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let prec = self.precision;
        let nb = bits(&self.mantissa) as i64;
        let mut shift = (2 * i64::from(prec) + 4 - nb).max(0);
        if (self.exponent - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let m = &self.mantissa << shift as u64;
        let r = m.sqrt();
        let sticky = &r * &r != m;
        Ok(Real::from_parts(Sign::Plus, r, (self.exponent - shift) / 2, sticky, prec))
    }

    /// Natural logarithm of a positive rational.
    pub fn ln_rat(x: &Rat, precision: u32) -> Result<Real, ArithError> {
        let (k, lny) = ln_split(x, precision + GUARD_BITS)?;
        let w = precision + GUARD_BITS;
        let total = ln2(w).mul(&Real::from_i64(k, w)).add(&lny);
        Ok(total.with_precision(precision))
    }

    /// Base-2 logarithm of a positive rational.
    pub fn log2_rat(x: &Rat, precision: u32) -> Result<Real, ArithError> {
        let w = precision + GUARD_BITS;
        let (k, lny) = ln_split(x, w)?;
        let frac = lny.div(&ln2(w))?;
        Ok(Real::from_i64(k, w).add(&frac).with_precision(precision))
    }

    pub fn ln(&self) -> Result<Real, ArithError> {
        Real::ln_rat(&self.to_rat(), self.precision)
    }

    pub fn log2(&self) -> Result<Real, ArithError> {
        Real::log2_rat(&self.to_rat(), self.precision)
    }

    /// Logarithm of `self` in base `base`.
    pub fn log_base(&self, base: &Real) -> Result<Real, ArithError> {
        let w = self.precision.max(base.precision) + GUARD_BITS;
        let num = Real::ln_rat(&self.to_rat(), w)?;
        let den = Real::ln_rat(&base.to_rat(), w)?;
        Ok(num.div(&den)?.with_precision(w - GUARD_BITS))
    }

    /// pi to the given precision (Machin's formula).
    pub fn pi(precision: u32) -> Real {
        let w = precision + GUARD_BITS;
        let a = atan_inv(5, w).mul(&Real::from_i64(16, w));
        let b = atan_inv(239, w).mul(&Real::from_i64(4, w));
        a.sub(&b).with_precision(precision)
    }

    /// Cosine via Taylor series after reduction to `[-pi, pi]`.
    pub fn cos(&self) -> Real {
        let prec = self.precision;
        let reduce_bits = self.magnitude_exp().max(0) as u32;
        let w = prec + GUARD_BITS + reduce_bits;
        let mut x = self.with_precision(w);
        let two_pi = Real::pi(w).mul(&Real::from_i64(2, w));
        let turns = x.div(&two_pi).expect("2pi is nonzero").to_rat().round().to_integer();
        if !turns.is_zero() {
            x = x.sub(&two_pi.mul_int(&turns));
        }
        let x2 = x.mul(&x);
        let mut term = Real::from_i64(1, w);
        let mut sum = term.clone();
        let mut k: i64 = 0;
        loop {
            term = term.mul(&x2).neg().div_int(&Int::from((2 * k + 1) * (2 * k + 2))).expect("nonzero");
            k += 1;
            if term.is_zero() || term.magnitude_exp() < sum.magnitude_exp().max(0) - i64::from(w) - 8 {
                break;
            }
            sum = sum.add(&term);
        }
        sum.with_precision(prec)
    }
}

/// Writes `x = 2^k * y` with `y` in `[2/3, 4/3]` and returns `(k, ln y)` at precision `w`.
fn ln_split(x: &Rat, w: u32) -> Result<(i64, Real), ArithError> {
    if !x.is_positive() {
        return Err(ArithError::NonPositiveLog(x.clone()));
    }
    let mut k = bits(x.numer()) as i64 - bits(x.denom()) as i64;
    let pow = |k: i64| -> Rat {
        if k >= 0 {
            Rat::from_integer(Int::one() << k as u64)
        } else {
            Rat::new(Int::one(), Int::one() << (-k) as u64)
        }
    };
    let mut y = x / pow(k);
    let upper = Rat::new(Int::from(4), Int::from(3));
    let lower = Rat::new(Int::from(2), Int::from(3));
    while y > upper {
        y /= Int::from(2);
        k += 1;
    }
    while y < lower {
        y *= Int::from(2);
        k -= 1;
    }
    let one = Rat::one();
    let z = (&y - &one) / (&y + &one);
    let lny = atanh(&Real::from_rat(&z, w)).mul(&Real::from_i64(2, w));
    Ok((k, lny))
}

/// `atanh(z)` for `|z| <= 1/3`.
fn atanh(z: &Real) -> Real {
    let w = z.precision;
    if z.is_zero() {
        return z.clone();
    }
    let z2 = z.mul(z);
    let mut power = z.clone();
    let mut sum = z.clone();
    let mut k: i64 = 1;
    loop {
        power = power.mul(&z2);
        let term = power.div_int(&Int::from(2 * k + 1)).expect("nonzero");
        k += 1;
        if term.is_zero() || term.magnitude_exp() < sum.magnitude_exp() - i64::from(w) - 4 {
            break;
        }
        sum = sum.add(&term);
    }
    sum
}

fn ln2(w: u32) -> Real {
    atanh(&Real::from_rat(&Rat::new(Int::one(), Int::from(3)), w)).mul(&Real::from_i64(2, w))
}

/// `atan(1/q)` for integer `q >= 2`.
fn atan_inv(q: i64, w: u32) -> Real {
    let z = Real::from_rat(&Rat::new(Int::one(), Int::from(q)), w);
    let z2 = z.mul(&z);
    let mut power = z.clone();
    let mut sum = z;
    let mut k: i64 = 1;
    loop {
        power = power.mul(&z2).neg();
        let term = power.div_int(&Int::from(2 * k + 1)).expect("nonzero");
        k += 1;
        if term.is_zero() || term.magnitude_exp() < sum.magnitude_exp() - i64::from(w) - 4 {
            break;
        }
        sum = sum.add(&term);
    }
    sum
}

impl PartialEq for Real {
    fn eq(&self, other: &Real) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Real {}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Real) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Real {
    fn cmp(&self, other: &Real) -> Ordering {
        self.to_rat().cmp(&other.to_rat())
    }
}

impl Real {
    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let digits = digits.max(1);
        let r = self.to_rat();
        let neg = r.is_negative();
        let r = r.abs();
        // Decimal exponent estimate from the binary one, then corrected.
        let mut e10 = ((self.magnitude_exp() as f64) * std::f64::consts::LOG10_2).floor() as i64;
        let ten = Int::from(10);
        let pow10 = |e: i64| -> Rat {
            if e >= 0 {
                Rat::from_integer(num_traits::pow(ten.clone(), e as usize))
            } else {
                Rat::new(Int::one(), num_traits::pow(ten.clone(), (-e) as usize))
            }
        };
        while r >= pow10(e10 + 1) {
            e10 += 1;
        }
        while r < pow10(e10) {
            e10 -= 1;
        }
        let scaled = (&r * pow10(digits as i64 - 1 - e10)).round().to_integer();
        let mut s = scaled.to_string();
        if s.len() > digits {
            // Rounding carried into a new digit.
            s.truncate(digits);
            e10 += 1;
        }
        let body = if (-6..21).contains(&e10) {
            if e10 >= 0 {
                let int_len = (e10 + 1) as usize;
                if s.len() <= int_len {
                    format!("{}{}", s, "0".repeat(int_len - s.len()))
                } else {
                    let (a, b) = s.split_at(int_len);
                    let b = b.trim_end_matches('0');
                    if b.is_empty() { a.to_string() } else { format!("{a}.{b}") }
                }
            } else {
                let zeros = "0".repeat((-e10 - 1) as usize);
                format!("0.{}{}", zeros, s.trim_end_matches('0'))
            }
        } else {
            let (a, b) = s.split_at(1);
            let b = b.trim_end_matches('0');
            if b.is_empty() { format!("{a}e{e10}") } else { format!("{a}.{b}e{e10}") }
        };
        if neg { format!("-{body}") } else { body }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(((self.precision as f64) * std::f64::consts::LOG10_2) as usize);
        f.write_str(&self.to_decimal(digits))
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Real", 2)?;
        st.serialize_field("value", &self.to_string())?;
        st.serialize_field("precision", &self.precision)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(Int::from(n), Int::from(d))
    }

    fn close(x: &Real, expect: &str, rel_bits: u32) -> bool {
        let e: f64 = expect.parse().unwrap();
        let diff = (x.to_f64() - e).abs();
        diff <= e.abs() * 2f64.powi(-(rel_bits as i32)) + f64::MIN_POSITIVE
    }

    #[test]
    fn log2_of_exact_powers() {
        assert_eq!(Real::log2_rat(&rat(4, 1), 128).unwrap().to_rat(), rat(2, 1));
        assert!(Real::log2_rat(&rat(1, 1), 128).unwrap().is_zero());
        assert_eq!(Real::log2_rat(&rat(1, 8), 128).unwrap().to_rat(), rat(-3, 1));
    }

    #[test]
    fn log2_matches_reference_digits() {
        // Reference values from an independent 300-bit evaluator.
        let x = Real::log2_rat(&rat(5, 2), 128).unwrap();
        assert!(x.to_decimal(36).starts_with("1.32192809488736234787031942948"));
        let x = Real::log2_rat(&rat(7, 3), 128).unwrap();
        assert!(x.to_decimal(36).starts_with("1.22239242133644792598823037328"));
        let x = Real::log2_rat(&rat(3, 1), 200).unwrap();
        assert!(x.to_decimal(45).starts_with("1.584962500721156181453738943947816508"));
    }

    #[test]
    fn log2_near_one_keeps_relative_precision() {
        let tiny = Rat::new(Int::one(), Int::one() << 100u32);
        let x = Real::log2_rat(&(Rat::one() + tiny), 128).unwrap();
        assert!(x.to_decimal(30).starts_with("1.13808571591353231368725121115"), "{}", x.to_decimal(30));
    }

    #[test]
    fn log_rejects_nonpositive() {
        assert!(matches!(Real::log2_rat(&rat(0, 1), 64), Err(ArithError::NonPositiveLog(_))));
        assert!(Real::ln_rat(&rat(-3, 2), 64).is_err());
    }

    #[test]
    fn ln2_and_pi_digits() {
        let l = Real::ln_rat(&rat(2, 1), 160).unwrap();
        assert!(l.to_decimal(40).starts_with("0.693147180559945309417232121458176568075"));
        let p = Real::pi(160);
        assert!(p.to_decimal(40).starts_with("3.14159265358979323846264338327950288419"));
    }

    #[test]
    fn cosines_of_heptagon_angles() {
        let w = 160;
        let pi = Real::pi(w);
        let seventh = pi.mul(&Real::from_i64(2, w)).div_int(&Int::from(7)).unwrap();
        let theta = seventh.cos().mul(&Real::from_i64(2, w));
        assert!(theta.to_decimal(35).starts_with("1.24697960371746706105000976800847"));
        let psi = seventh.mul(&Real::from_i64(3, w)).cos().mul(&Real::from_i64(2, w));
        assert!(psi.to_decimal(35).starts_with("-1.80193773580483825247220463901489"));
    }

    #[test]
    fn arithmetic_rounds_to_nearest() {
        let third = Real::from_rat(&rat(1, 3), 64);
        let back = third.mul(&Real::from_i64(3, 64));
        let err = (back.to_rat() - Rat::one()).abs();
        assert!(err <= Rat::new(Int::one(), Int::one() << 63u32));
        assert!(close(&Real::from_i64(2, 128).sqrt().unwrap(), "1.4142135623730951", 50));
        assert_eq!(Real::from_i64(3, 64).powi(4).to_rat(), rat(81, 1));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(Real::from_i64(12, 128).to_string(), "12");
        assert_eq!(Real::from_rat(&rat(1, 4), 128).to_decimal(10), "0.25");
        assert_eq!(Real::from_i64(-983040, 128).to_decimal(12), "-983040");
        assert_eq!(Real::from_rat(&rat(1, 1 << 30), 64).to_decimal(3), "9.31e-10");
    }

    proptest! {
        #[test]
        fn log2_of_product_is_sum(
            (xn, xd, yn, yd) in (1i64..1_000_000, 1i64..1_000_000, 1i64..1_000_000, 1i64..1_000_000),
            p in 64u32..200,
        ) {
            let x = rat(xn, xd);
            let y = rat(yn, yd);
            let lhs = Real::log2_rat(&(&x * &y), p).unwrap();
            let rhs = Real::log2_rat(&x, p).unwrap().add(&Real::log2_rat(&y, p).unwrap());
            let diff = (lhs.to_rat() - rhs.to_rat()).abs();
            // relative to the larger of the summands, which bounds the rounding
            let scale = Real::log2_rat(&x, p).unwrap().to_rat().abs()
                .max(Real::log2_rat(&y, p).unwrap().to_rat().abs())
                .max(lhs.to_rat().abs());
            let tol = scale * Rat::new(Int::from(8), Int::one() << p);
            prop_assert!(diff <= tol, "diff {} tol {}", diff, tol);
        }
    }
}
