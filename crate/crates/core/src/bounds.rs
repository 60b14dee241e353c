//! Closed-form upper and lower bounds on vertex counts of integer hulls.
//!
//! Logarithms are base 2 except in [`chirkov_lower_bound`], which uses the
//! natural logarithm. Values are [`Real`]s at [`DEFAULT_PRECISION`] bits.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{binomial, ArithError, Int, Rat, Real, DEFAULT_PRECISION};
use crate::json::DecRat;
use crate::model::KnapsackInstance;

const P: u32 = DEFAULT_PRECISION;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BoundError {
    #[error("{bound}: {reason}")]
    Domain { bound: &'static str, reason: String },
    #[error(transparent)]
    Arith(#[from] ArithError),
}

fn domain(bound: &'static str, reason: impl Into<String>) -> BoundError {
    BoundError::Domain { bound, reason: reason.into() }
}

/// A bound evaluated at concrete parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundValue {
    pub name: String,
    pub value: Real,
    pub params: BTreeMap<String, String>,
    /// Whether the side conditions of the bound are met.
    pub applicable: bool,
    /// Multiplier supplied by the caller for bounds with an unspecified constant.
    pub caller_constant: Option<DecRat>,
    /// Excluded from soundness verdicts.
    pub informational: bool,
    /// A lower bound whose base was nonpositive and was clamped to zero.
    pub vacuous: bool,
}

impl BoundValue {
    fn new(name: &str, value: Real) -> Self {
        BoundValue {
            name: name.to_string(),
            value,
            params: BTreeMap::new(),
            applicable: true,
            caller_constant: None,
            informational: false,
            vacuous: false,
        }
    }

    fn param(mut self, key: &str, v: impl ToString) -> Self {
        self.params.insert(key.to_string(), v.to_string());
        self
    }

    /// `count <= ceil(value + 2^-64)`.
    pub fn admits(&self, count: &Int) -> bool {
        let slack = Rat::new(Int::one(), Int::one() << 64u32);
        *count <= (self.value.to_rat() + slack).ceil().to_integer()
    }

    /// `count >= value`, for lower bounds.
    pub fn is_below(&self, count: &Int) -> bool {
        Rat::from_integer(count.clone()) >= self.value.to_rat()
    }

    /// Marks the bound as excluded from soundness verdicts.
    pub fn with_informational(mut self) -> Self {
        self.informational = true;
        self
    }

    /// Whether this bound's verdict counts towards soundness.
    pub fn is_checked(&self) -> bool {
        self.applicable && !self.informational
    }
}

fn int(x: impl Into<Int>) -> Real {
    Real::from_int(&x.into(), P)
}

/// Exact when `x` is a power of two.
fn lg(x: &Rat) -> Result<Real, BoundError> {
    let is_pow2 = |v: &Int| v.is_positive() && v.trailing_zeros().is_some_and(|t| v.bits() == t + 1);
    if is_pow2(x.numer()) && is_pow2(x.denom()) {
        let e = x.numer().bits() as i64 - x.denom().bits() as i64;
        return Ok(Real::from_i64(e, P));
    }
    Ok(Real::log2_rat(x, P)?)
}

fn lg_int(x: &Int) -> Result<Real, BoundError> {
    lg(&Rat::from_integer(x.clone()))
}

fn pow(base: &Real, e: usize) -> Real {
    base.powi(u32::try_from(e).expect("small exponent"))
}

fn require(bound: &'static str, ok: bool, reason: &str) -> Result<(), BoundError> {
    if ok { Ok(()) } else { Err(domain(bound, reason)) }
}

/// `prod_j (1 + log(k_j - 1))`.
pub fn razd_bound(ks: &[Int]) -> Result<BoundValue, BoundError> {
    let two = Int::from(2);
    require("razd", ks.iter().all(|k| *k >= two), "every k_j must be at least 2")?;
    let mut v = int(1);
    for k in ks {
        v = v.mul(&int(1).add(&lg_int(&(k - 1))?));
    }
    let list = ks.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
    Ok(BoundValue::new("razd", v).param("k", list))
}

/// `(1 + log n + r log(α √r))^(r-1)`.
pub fn nprime_bound(n: usize, r: usize, alpha: &Int) -> Result<BoundValue, BoundError> {
    require("nprime", n >= 1 && r >= 1, "n and r must be positive")?;
    require("nprime", alpha >= &Int::one(), "alpha must be at least 1")?;
    let r_int = Int::from(r);
    // log(α √r) = log α + log(r) / 2
    let inner = lg_int(alpha)?.add(&lg_int(&r_int)?.div_int(&Int::from(2))?);
    let base = int(1).add(&lg_int(&Int::from(n))?).add(&inner.mul_int(&r_int));
    Ok(BoundValue::new("nprime", pow(&base, r - 1)).param("n", n).param("r", r).param("alpha", alpha))
}

/// `(1 + log(n+1) + n log(α √n))^(2n+m-1)`.
pub fn shevchenko1981_bound(n: usize, m: usize, alpha: &Int) -> Result<BoundValue, BoundError> {
    require("shevchenko1981", n >= 1 && m >= 1, "n and m must be positive")?;
    require("shevchenko1981", alpha >= &Int::one(), "alpha must be at least 1")?;
    let n_int = Int::from(n);
    let inner = lg_int(alpha)?.add(&lg_int(&n_int)?.div_int(&Int::from(2))?);
    let base = int(1).add(&lg_int(&(&n_int + 1))?).add(&inner.mul_int(&n_int));
    Ok(BoundValue::new("shevchenko1981", pow(&base, 2 * n + m - 1))
        .param("n", n)
        .param("m", m)
        .param("alpha", alpha))
}

/// `prod_j (1 + log(1 + a0/a_j))`.
pub fn knapsack1_bound(k: &KnapsackInstance) -> Result<BoundValue, BoundError> {
    require("knapsack1", k.a().iter().all(Int::is_positive), "weights must be positive")?;
    let mut v = int(1);
    for aj in k.a() {
        let ratio = Rat::one() + Rat::new(k.a0().clone(), aj.clone());
        v = v.mul(&int(1).add(&lg(&ratio)?));
    }
    Ok(BoundValue::new("knapsack1", v).param("n", k.n()).param("a0", k.a0()))
}

/// `n log(2n) (1 + log(1 + a0/γ))^(n-1)`; inapplicable for `n < 2`.
pub fn morgan_bound(n: usize, a0: &Int, gamma: &Int) -> Result<BoundValue, BoundError> {
    require("morgan", gamma >= &Int::one(), "gamma must be at least 1")?;
    require("morgan", !a0.is_negative(), "a0 must be nonnegative")?;
    let mut bv = if n < 2 {
        let mut b = BoundValue::new("morgan", Real::zero(P));
        b.applicable = false;
        b
    } else {
        let n_int = Int::from(n);
        let lead = lg_int(&(&n_int * 2))?.mul_int(&n_int);
        let base = int(1).add(&lg(&(Rat::one() + Rat::new(a0.clone(), gamma.clone())))?);
        BoundValue::new("morgan", lead.mul(&pow(&base, n - 1)))
    };
    bv = bv.param("n", n).param("a0", a0).param("gamma", gamma);
    Ok(bv)
}

/// `2 m^n (6 n^2 φ)^(n-1)` for an encoding length `φ` per inequality.
pub fn cook_bound_phi(n: usize, m: usize, phi: &Real) -> Result<BoundValue, BoundError> {
    require("cook_phi", n >= 1 && m >= 1, "n and m must be positive")?;
    require("cook_phi", phi.signum() > 0, "phi must be positive")?;
    let mn = num_traits::pow(Int::from(m), n);
    let base = phi.mul_int(&Int::from(6 * n * n));
    Ok(BoundValue::new("cook_phi", pow(&base, n - 1).mul_int(&(mn * 2)))
        .param("n", n)
        .param("m", m)
        .param("phi", phi.to_decimal(20)))
}

/// `m^n (6 n^4 log(1 + α))^(n-1)`.
pub fn cook_bound_alpha(n: usize, m: usize, alpha: &Int) -> Result<BoundValue, BoundError> {
    require("cook", n >= 1 && m >= 1, "n and m must be positive")?;
    require("cook", alpha >= &Int::one(), "alpha must be at least 1")?;
    let mn = num_traits::pow(Int::from(m), n);
    let base = lg_int(&(alpha + 1))?.mul_int(&(Int::from(6) * num_traits::pow(Int::from(n), 4)));
    Ok(BoundValue::new("cook", pow(&base, n - 1).mul_int(&mn)).param("n", n).param("m", m).param("alpha", alpha))
}

/// Binomial coefficient that vanishes when the top is negative.
fn binom_signed(top: i64, k: u64) -> Int {
    if top < 0 { Int::zero() } else { binomial(top as u64, k) }
}

/// `C(m - ⌊(n-1)/2⌋ - 1, ⌊n/2⌋) + C(m - ⌊n/2⌋ - 1, ⌊(n-1)/2⌋)`, the maximal
/// facet count of an `n`-polytope with `m` vertices.
pub fn xi(n: usize, m: usize) -> Int {
    let (n, m) = (n as i64, m as i64);
    let (h, l) = (n / 2, (n - 1) / 2);
    binom_signed(m - l - 1, h as u64) + binom_signed(m - h - 1, l as u64)
}

/// `n^(7n) ξ_n(m) (6 log(1 + α) + 3 log n)^(n-1)`.
pub fn chirkov_upper_bound(n: usize, m: usize, alpha: &Int) -> Result<BoundValue, BoundError> {
    require("chirkov", n >= 1, "n must be positive")?;
    require("chirkov", alpha >= &Int::one(), "alpha must be at least 1")?;
    let n_int = Int::from(n);
    let lead = num_traits::pow(n_int.clone(), 7 * n) * xi(n, m);
    let base = lg_int(&(alpha + 1))?.mul_int(&Int::from(6)).add(&lg_int(&n_int)?.mul_int(&Int::from(3)));
    let mut bv = BoundValue::new("chirkov", pow(&base, n - 1).mul_int(&lead))
        .param("n", n)
        .param("m", m)
        .param("alpha", alpha);
    bv.applicable = m > n;
    Ok(bv)
}

fn positive_constant(bound: &'static str, c: &Rat) -> Result<(), BoundError> {
    require(bound, c.is_positive(), "the constant must be positive")
}

/// `c m^⌊n/2⌋ log^(n-1)(1 + α1)` with a caller-supplied `c`.
pub fn theorem3_bound(n: usize, m: usize, alpha1: &Int, c: &Rat) -> Result<BoundValue, BoundError> {
    positive_constant("theorem3", c)?;
    require("theorem3", n >= 1 && m >= 1, "n and m must be positive")?;
    let l = lg_int(&(alpha1 + 1))?;
    let v = pow(&l, n - 1).mul_int(&num_traits::pow(Int::from(m), n / 2)).mul(&Real::from_rat(c, P));
    let mut bv = BoundValue::new("theorem3", v).param("n", n).param("m", m).param("alpha1", alpha1).with_informational();
    bv.caller_constant = Some(DecRat(c.clone()));
    Ok(bv)
}

/// `C(⌊log a_i⌋ + n - 1, n - 1)`.
pub fn knap_ni_bound(n: usize, ai: &Int) -> Result<Int, BoundError> {
    require("knap_ni", ai >= &Int::one(), "a_i must be at least 1")?;
    require("knap_ni", n >= 1, "n must be positive")?;
    let fl = ai.bits() - 1;
    Ok(binomial(fl + n as u64 - 1, n as u64 - 1))
}

/// `1 + n (⌊log α1⌋ + 1)^(n-1)`.
pub fn knap_union_bound(n: usize, alpha1: &Int) -> Result<BoundValue, BoundError> {
    require("knap_union", alpha1 >= &Int::one(), "alpha1 must be at least 1")?;
    require("knap_union", n >= 1, "n must be positive")?;
    let v = num_traits::pow(Int::from(alpha1.bits()), n - 1) * Int::from(n) + 1;
    Ok(BoundValue::new("knap_union", int(v)).param("n", n).param("alpha1", alpha1))
}

/// `2 log_{1+√2}(1 + 2√2 a)`.
pub fn vs_upper_bound(a: &Int) -> Result<BoundValue, BoundError> {
    require("vs_upper", a >= &Int::one(), "a must be at least 1")?;
    let w = P + 32;
    let s2 = Real::from_i64(2, w).sqrt()?;
    let arg = Real::from_i64(1, w).add(&s2.mul_int(&(a * 2)));
    let base = Real::from_i64(1, w).add(&s2);
    let v = arg.log_base(&base)?.mul_int(&Int::from(2)).with_precision(P);
    Ok(BoundValue::new("vs_upper", v).param("a", a).with_informational())
}

/// Largest facet count of an `n`-polytope with `v` vertices.
pub fn mcmullen_facet_bound(n: usize, v: usize) -> Int {
    xi(n, v)
}

/// `c_n / (n-1)^(n-1) (log Δ - n - 2 - n log(n-1))^(n-1)` with
/// `c_n = 1 / (4 n 3^n ((n-1)!)^2)`, clamped at zero when the base is negative.
pub fn phi_delta_lower_bound(n: usize, delta: &Int) -> Result<BoundValue, BoundError> {
    require("phi_delta", n >= 2, "n must be at least 2")?;
    require("phi_delta", delta >= &Int::from(2), "delta must be at least 2")?;
    let n_int = Int::from(n);
    let fact: Int = (1..n).map(Int::from).product();
    let cn = Rat::new(Int::one(), Int::from(4) * &n_int * num_traits::pow(Int::from(3), n) * &fact * &fact);
    let scale = cn / Rat::from_integer(num_traits::pow(&n_int - 1, n - 1));
    let mut base = lg_int(delta)?.sub(&int(n as i64 + 2));
    if n > 2 {
        base = base.sub(&lg_int(&(&n_int - 1))?.mul_int(&n_int));
    }
    let mut bv = if base.is_negative() {
        let mut b = BoundValue::new("phi_delta", Real::zero(P));
        b.vacuous = true;
        b
    } else {
        BoundValue::new("phi_delta", pow(&base, n - 1).mul(&Real::from_rat(&scale, P)))
    };
    bv = bv.param("n", n).param("delta", delta).with_informational();
    Ok(bv)
}

/// `ξ_n(m) / (4^(n+2) n^n (n-1)!) ln^(n-1) α`.
pub fn chirkov_lower_bound(n: usize, m: usize, alpha: &Int) -> Result<BoundValue, BoundError> {
    require("chirkov_lower", n >= 1, "n must be positive")?;
    require("chirkov_lower", alpha >= &Int::from(2), "alpha must be at least 2")?;
    let fact: Int = (1..n).map(Int::from).product();
    let den = num_traits::pow(Int::from(4), n + 2) * num_traits::pow(Int::from(n), n) * fact;
    let scale = Rat::new(xi(n, m), den);
    let l = Real::ln_rat(&Rat::from_integer(alpha.clone()), P)?;
    let mut bv = BoundValue::new("chirkov_lower", pow(&l, n - 1).mul(&Real::from_rat(&scale, P)))
        .param("n", n)
        .param("m", m)
        .param("alpha", alpha)
        .with_informational();
    bv.applicable = m > n;
    Ok(bv)
}

/// `c m^(⌊n/2⌋²) log^((n-1)⌊n/2⌋)(1 + α)` with a caller-supplied `c`.
pub fn facet_count_upper(n: usize, m: usize, alpha: &Int, c: &Rat) -> Result<BoundValue, BoundError> {
    positive_constant("facet_upper", c)?;
    require("facet_upper", n >= 1 && m >= 1, "n and m must be positive")?;
    let h = n / 2;
    let l = lg_int(&(alpha + 1))?;
    let v = pow(&l, (n - 1) * h).mul_int(&num_traits::pow(Int::from(m), h * h)).mul(&Real::from_rat(c, P));
    let mut bv = BoundValue::new("facet_upper", v).param("n", n).param("m", m).param("alpha", alpha).with_informational();
    bv.caller_constant = Some(DecRat(c.clone()));
    Ok(bv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn i(x: i64) -> Int {
        Int::from(x)
    }

    fn exact(b: &BoundValue, expected: Rat) {
        assert_eq!(b.value.to_rat(), expected, "{}", b.name);
    }

    fn close(b: &BoundValue, expected: Rat) {
        let err = (b.value.to_rat() - &expected).abs();
        assert!(err < Rat::new(Int::one(), Int::one() << 100u32), "{}", b.name);
    }

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(i(n), i(d))
    }

    #[test]
    fn razd_examples() {
        exact(&razd_bound(&[i(2)]).unwrap(), r(1, 1));
        exact(&razd_bound(&[i(5), i(9)]).unwrap(), r(12, 1));
        exact(&razd_bound(&[i(3), i(3)]).unwrap(), r(4, 1));
        assert!(razd_bound(&[i(1)]).is_err());
    }

    #[test]
    fn nprime_and_general() {
        exact(&nprime_bound(7, 1, &i(9)).unwrap(), r(1, 1));
        exact(&nprime_bound(2, 2, &i(2)).unwrap(), r(5, 1));
        exact(&shevchenko1981_bound(1, 1, &i(1)).unwrap(), r(4, 1));
        exact(&shevchenko1981_bound(1, 2, &i(1)).unwrap(), r(8, 1));
        assert!(shevchenko1981_bound(2, 3, &i(4)).unwrap().value >= shevchenko1981_bound(2, 3, &i(2)).unwrap().value);
    }

    #[test]
    fn knapsack_bounds() {
        let b = knapsack1_bound(&KnapsackInstance::from_i64(&[2, 1], 3).unwrap()).unwrap();
        assert!(b.value.to_decimal(30).starts_with("6.9657842846620870436109582884"));
        exact(&knapsack1_bound(&KnapsackInstance::from_i64(&[1], 0).unwrap()).unwrap(), r(1, 1));
        exact(&morgan_bound(2, &i(3), &i(1)).unwrap(), r(12, 1));
        exact(&morgan_bound(2, &i(1), &i(1)).unwrap(), r(8, 1));
        assert!(!morgan_bound(1, &i(5), &i(1)).unwrap().applicable);
    }

    #[test]
    fn power_of_two_knapsack1_exceeds_factorial() {
        // the product is close to (n+1)!, so it is sound for 2^n vertices
        // but does not stay below n!
        for n in 2..=5u32 {
            let a: Vec<i64> = (0..n).rev().map(|k| 1i64 << k).collect();
            let k = KnapsackInstance::from_i64(&a, (1 << n) - 1).unwrap();
            let b = knapsack1_bound(&k).unwrap();
            let fact: i64 = (1..=i64::from(n)).product();
            assert!(b.admits(&Int::from(1u32 << n)));
            assert!(b.value.to_rat() > r(fact, 1), "n={n}");
            assert!(b.value.to_rat() > r(fact * (i64::from(n) + 1), 1), "n={n}");
        }
    }

    #[test]
    fn cook_examples() {
        exact(&cook_bound_phi(1, 1, &Real::from_i64(7, P)).unwrap(), r(2, 1));
        exact(&cook_bound_phi(2, 1, &Real::from_i64(1, P)).unwrap(), r(48, 1));
        exact(&cook_bound_alpha(2, 3, &i(1)).unwrap(), r(864, 1));
        exact(&cook_bound_alpha(1, 5, &i(100)).unwrap(), r(5, 1));
    }

    #[test]
    fn xi_examples() {
        assert_eq!(xi(2, 4), i(4));
        assert_eq!(xi(3, 5), i(6));
        assert_eq!(xi(1, 3), i(2));
        for m in 3..40 {
            assert_eq!(xi(2, m), i(m as i64));
            assert_eq!(xi(1, m), i(2));
        }
        assert_eq!(mcmullen_facet_bound(2, 3), i(3));
    }

    #[test]
    fn chirkov_examples() {
        exact(&chirkov_upper_bound(2, 4, &i(3)).unwrap(), r(983_040, 1));
        exact(&chirkov_upper_bound(1, 3, &i(9)).unwrap(), r(2, 1));
        let lo = chirkov_lower_bound(2, 4, &i(3)).unwrap();
        assert!(lo.value.to_decimal(20).starts_with("0.0042914542526098"));
        exact(&chirkov_lower_bound(1, 3, &i(10)).unwrap(), r(1, 32));
    }

    #[test]
    fn constant_bounds() {
        exact(&theorem3_bound(2, 4, &i(3), &r(1, 1)).unwrap(), r(8, 1));
        exact(&theorem3_bound(1, 9, &i(5), &r(1, 1)).unwrap(), r(1, 1));
        exact(&theorem3_bound(2, 4, &i(3), &r(2, 1)).unwrap(), r(16, 1));
        assert!(theorem3_bound(2, 4, &i(3), &r(0, 1)).is_err());
        exact(&facet_count_upper(2, 4, &i(3), &r(1, 1)).unwrap(), r(8, 1));
        exact(&facet_count_upper(1, 7, &i(5), &r(1, 1)).unwrap(), r(1, 1));
        exact(&facet_count_upper(3, 5, &i(1), &r(1, 1)).unwrap(), r(5, 1));
        assert!(facet_count_upper(3, 5, &i(1), &r(-1, 1)).is_err());
    }

    #[test]
    fn theorem4_examples() {
        assert_eq!(knap_ni_bound(2, &i(2)).unwrap(), i(2));
        assert_eq!(knap_ni_bound(2, &i(1)).unwrap(), i(1));
        assert_eq!(knap_ni_bound(3, &i(4)).unwrap(), i(6));
        exact(&knap_union_bound(2, &i(2)).unwrap(), r(5, 1));
        exact(&knap_union_bound(1, &i(77)).unwrap(), r(2, 1));
        exact(&knap_union_bound(2, &i(1)).unwrap(), r(3, 1));
    }

    #[test]
    fn vs_upper_values() {
        let one = vs_upper_bound(&i(1)).unwrap();
        assert!(one.value.to_decimal(16).starts_with("3.04627700721818"));
        assert!(one.informational);
        let two = vs_upper_bound(&i(2)).unwrap();
        assert!(two.value.to_decimal(16).starts_with("4.30157441968802"));
        assert!(vs_upper_bound(&i(3)).unwrap().value > two.value);
    }

    #[test]
    fn phi_delta_examples() {
        close(&phi_delta_lower_bound(2, &i(32)).unwrap(), r(1, 72));
        let v = phi_delta_lower_bound(2, &i(8)).unwrap();
        assert!(v.vacuous);
        assert!(v.value.is_zero());
        close(&phi_delta_lower_bound(2, &i(64)).unwrap(), r(2, 72));
    }

    #[test]
    fn admits_uses_ceiling() {
        let b = BoundValue::new("t", Real::from_rat(&r(5, 2), P));
        assert!(b.admits(&i(3)));
        assert!(!b.admits(&i(4)));
        // the slack pushes an integral value to the next integer
        let b = BoundValue::new("t", Real::from_i64(4, P));
        assert!(b.admits(&i(5)));
        assert!(!b.admits(&i(6)));
    }

    proptest! {
        #[test]
        fn monotone_in_alpha(n in 1usize..4, m in 1usize..7, a in 1i64..200) {
            let (lo, hi) = (i(a), i(a + 1));
            prop_assert!(cook_bound_alpha(n, m, &lo).unwrap().value <= cook_bound_alpha(n, m, &hi).unwrap().value);
            prop_assert!(chirkov_upper_bound(n, m + n, &lo).unwrap().value <= chirkov_upper_bound(n, m + n, &hi).unwrap().value);
            prop_assert!(shevchenko1981_bound(n, m, &lo).unwrap().value <= shevchenko1981_bound(n, m, &hi).unwrap().value);
            prop_assert!(nprime_bound(n + 1, m, &lo).unwrap().value <= nprime_bound(n + 1, m, &hi).unwrap().value);
            prop_assert!(knap_union_bound(n, &lo).unwrap().value <= knap_union_bound(n, &hi).unwrap().value);
            prop_assert!(vs_upper_bound(&lo).unwrap().value <= vs_upper_bound(&hi).unwrap().value);
        }

        #[test]
        fn monotone_in_a0(a0 in 0i64..500, w in 1i64..20) {
            let k0 = KnapsackInstance::from_i64(&[w, w + 1], a0).unwrap();
            let k1 = KnapsackInstance::from_i64(&[w, w + 1], a0 + 1).unwrap();
            prop_assert!(knapsack1_bound(&k0).unwrap().value <= knapsack1_bound(&k1).unwrap().value);
            prop_assert!(morgan_bound(3, &i(a0), &i(w)).unwrap().value <= morgan_bound(3, &i(a0 + 1), &i(w)).unwrap().value);
        }

        #[test]
        fn powers_of_two_are_exact(e1 in 0u32..20, e2 in 0u32..20) {
            let ks = [Int::from((1u64 << e1) + 1), Int::from((1u64 << e2) + 1)];
            let expected = Rat::from_integer(Int::from((1 + e1) * (1 + e2)));
            prop_assert_eq!(razd_bound(&ks).unwrap().value.to_rat(), expected);
        }
    }
}
