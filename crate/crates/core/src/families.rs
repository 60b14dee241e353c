//! Explicit instance families with known or claimed vertex counts, and the
//! congruence and knapsack ensembles behind the mean vertex counts.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{Int, Rat, Real};
use crate::hull::{knapsack_hull_vertices, HullError};
use crate::model::{CongruenceInstance, KnapsackInstance, LinearSystem, ModelError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FamilyError {
    #[error("parameter {name} = {value} is out of range (needs {need})")]
    Parameter { name: &'static str, value: String, need: &'static str },
    #[error("exhaustive ensemble has {size} instances, above the limit {limit}; use sampling")]
    EnsembleTooLarge { size: u128, limit: u64 },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Hull(#[from] HullError),
}

fn bad(name: &'static str, value: impl ToString, need: &'static str) -> FamilyError {
    FamilyError::Parameter { name, value: value.to_string(), need }
}

/// `F_s` with `F_1 = F_2 = 1`.
pub fn fibonacci(s: u32) -> Result<Int, FamilyError> {
    if s < 1 {
        return Err(bad("s", s, "s >= 1"));
    }
    let (mut a, mut b) = (Int::zero(), Int::one());
    for _ in 1..s {
        let c = &a + &b;
        a = b;
        b = c;
    }
    Ok(b)
}

/// Which reading of the Fibonacci family to generate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RubinVariant {
    /// `F_{2k} x + F_{2k-1} y <= F_{2k+1}^2 - 1`.
    AsPrinted,
    /// `F_{2k} x + F_{2k+1} y <= F_{2k+1}^2 - 1`.
    IndexSwapped,
}

impl std::str::FromStr for RubinVariant {
    type Err = FamilyError;
    fn from_str(s: &str) -> Result<Self, FamilyError> {
        match s {
            "as-printed" => Ok(RubinVariant::AsPrinted),
            "index-swapped" => Ok(RubinVariant::IndexSwapped),
            other => Err(bad("variant", other, "as-printed or index-swapped")),
        }
    }
}

pub fn rubin_instance(k: u32, variant: RubinVariant) -> Result<KnapsackInstance, FamilyError> {
    if k < 1 {
        return Err(bad("k", k, "k >= 1"));
    }
    let f2k = fibonacci(2 * k)?;
    let f2k1 = fibonacci(2 * k + 1)?;
    let second = match variant {
        RubinVariant::AsPrinted => fibonacci(2 * k - 1)?,
        RubinVariant::IndexSwapped => f2k1.clone(),
    };
    let a0 = &f2k1 * &f2k1 - 1;
    Ok(KnapsackInstance::new(vec![f2k, second], a0)?)
}

/// One row of the two-dimensional knapsack sequences.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VsSequences {
    pub s: u32,
    pub beta: Int,
    pub gamma: Int,
    pub gamma_prime: Int,
}

/// `β_s, γ_s, γ'_s` for `s = 2..=s_max`.
pub fn vs_sequences(s_max: u32) -> Result<Vec<VsSequences>, FamilyError> {
    if s_max < 2 {
        return Err(bad("s_max", s_max, "s_max >= 2"));
    }
    let mut out = vec![VsSequences { s: 2, beta: Int::from(2), gamma: Int::one(), gamma_prime: Int::one() }];
    let mut beta_prev = Int::one();
    for s in 2..s_max {
        let cur = out.last().expect("nonempty");
        let beta = &cur.beta * 2 + &beta_prev;
        let gamma = &cur.beta + &cur.gamma_prime;
        let gamma_prime = &beta - &cur.beta + &cur.gamma;
        beta_prev = cur.beta.clone();
        out.push(VsSequences { s: s + 1, beta, gamma, gamma_prime });
    }
    Ok(out)
}

/// `β_s` for `s >= 1`.
pub fn beta(s: u32) -> Result<Int, FamilyError> {
    match s {
        0 => Err(bad("s", s, "s >= 1")),
        1 => Ok(Int::one()),
        _ => Ok(vs_sequences(s)?.pop().expect("nonempty").beta),
    }
}

/// `((1+√2)^s - (1-√2)^s) / (2√2)` evaluated at the given precision.
pub fn beta_closed_form(s: u32, precision: u32) -> Real {
    let w = precision + 32;
    let r2 = Real::from_i64(2, w).sqrt().expect("positive");
    let one = Real::from_i64(1, w);
    let num = one.add(&r2).powi(s).sub(&one.sub(&r2).powi(s));
    num.div(&r2.mul_int(&Int::from(2))).expect("nonzero").with_precision(precision)
}

/// The instance `β_{s-1} x + β_s y <= c` with `2s` hull vertices.
///
/// `c = γ_s (β_{s-1} + β_s)` for even `s` and `γ_{s+1} β_{s-1} + γ_{s-1} β_s`
/// for odd `s`.
pub fn vs_extremal_instance(s: u32) -> Result<KnapsackInstance, FamilyError> {
    if s < 2 {
        return Err(bad("s", s, "s >= 2"));
    }
    let seq = vs_sequences(s + 1)?;
    let at = |t: u32| &seq[(t - 2) as usize];
    let b_prev = if s == 2 { Int::one() } else { at(s - 1).beta.clone() };
    let b = at(s).beta.clone();
    let c = if s % 2 == 0 {
        &at(s).gamma * (&b_prev + &b)
    } else {
        &at(s + 1).gamma * &b_prev + &at(s - 1).gamma * &b
    };
    Ok(KnapsackInstance::new(vec![b_prev, b], c)?)
}

/// `2^(n-1) x_1 + ... + 2 x_{n-1} + x_n <= 2^n - 1`.
pub fn power_of_two_knapsack(n: u32) -> Result<KnapsackInstance, FamilyError> {
    if n < 1 {
        return Err(bad("n", n, "n >= 1"));
    }
    let a = (0..n).rev().map(|k| Int::one() << k).collect();
    Ok(KnapsackInstance::new(a, (Int::one() << n) - 1)?)
}

/// `t^3 + t^2 - 2t - 1`, whose roots are `2 cos(2πk/7)` for `k = 1, 2, 3`.
fn cubic(t: &Rat) -> Rat {
    let two = Rat::from_integer(Int::from(2));
    ((t + Rat::one()) * t - two) * t - Rat::one()
}

/// Integer `k` with a root of the cubic in `[k/D, (k+1)/D]`, starting near `guess`.
fn bracket_root(guess: &Rat, d: &Int) -> Int {
    let at = |k: &Int| cubic(&Rat::new(k.clone(), d.clone())).signum();
    let k0 = (guess * Rat::from_integer(d.clone())).floor().to_integer();
    for off in 0..64i64 {
        for k in [&k0 + off, &k0 - off] {
            let (lo, hi) = (at(&k), at(&(&k + 1)));
            if lo.is_zero() || lo != hi {
                return k;
            }
        }
    }
    unreachable!("cosine estimate is far more accurate than the search window")
}

/// Rational approximations of `θ = 2cos(2π/7)`, `φ = 2cos(4π/7)`,
/// `ψ = 2cos(6π/7)`, each of the form `k / 2^(p+1)` and within `2^-p`.
pub fn morgan_coefficients(p: u32) -> [Rat; 3] {
    let w = p + 64;
    let d = Int::one() << (p + 1);
    let two_pi_7 = Real::pi(w).mul_int(&Int::from(2)).div_int(&Int::from(7)).expect("nonzero");
    [1i64, 2, 3].map(|k| {
        let est = two_pi_7.mul_int(&Int::from(k)).cos().mul_int(&Int::from(2)).to_rat();
        Rat::new(bracket_root(&est, &d), d.clone())
    })
}

/// `x, y, z >= 0`, `x + ψy + θz <= ν`, `x + θy + φz <= ν` with the irrational
/// coefficients replaced by `2^-p`-accurate rationals and the rows scaled to
/// integers.
pub fn morgan_family(nu: &Int, p: u32) -> Result<LinearSystem, FamilyError> {
    if !nu.is_positive() {
        return Err(bad("nu", nu, "nu >= 1"));
    }
    if p < 32 {
        return Err(bad("p", p, "p >= 32"));
    }
    let [theta, phi, psi] = morgan_coefficients(p);
    let d = Int::one() << (p + 1);
    let scaled = |q: &Rat| (q * Rat::from_integer(d.clone())).to_integer();
    let z = Int::zero;
    let rows = vec![
        vec![-Int::one(), z(), z()],
        vec![z(), -Int::one(), z()],
        vec![z(), z(), -Int::one()],
        vec![d.clone(), scaled(&psi), scaled(&theta)],
        vec![d.clone(), scaled(&theta), scaled(&phi)],
    ];
    let b = vec![z(), z(), z(), nu * &d, nu * &d];
    Ok(LinearSystem::from_rows(rows, b)?)
}

/// Which ensemble to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnsembleKind {
    /// `a_n = 1`, `0 <= a_i, a0 <= Δ - 1`.
    Congruence,
    /// `a_n = γ`, `0 <= a_i <= γ - 1`, `γ(γ-1) <= a0 <= γ² - 1`.
    Knapsack,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnsembleMode {
    Exhaustive,
    Sampled { size: u64, seed: u64 },
}

/// Largest exhaustive ensemble.
pub const ENSEMBLE_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub n: usize,
    /// `Δ` or `γ`.
    pub parameter: u64,
    pub mode: EnsembleMode,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EnsembleInstance {
    Congruence(CongruenceInstance),
    Knapsack(KnapsackInstance),
}

impl EnsembleInstance {
    /// Coefficient vector and right-hand side.
    pub fn parts(&self) -> (&[Int], &Int) {
        match self {
            EnsembleInstance::Congruence(c) => (c.a(), c.a0()),
            EnsembleInstance::Knapsack(k) => (k.a(), k.a0()),
        }
    }
}

impl EnsembleSpec {
    pub fn exhaustive(kind: EnsembleKind, n: usize, parameter: u64) -> Self {
        EnsembleSpec { kind, n, parameter, mode: EnsembleMode::Exhaustive }
    }

    /// Number of instances in the full ensemble, `parameter^n`.
    pub fn population(&self) -> u128 {
        u128::from(self.parameter).saturating_pow(self.n as u32)
    }

    fn validate(&self) -> Result<(), FamilyError> {
        if self.n < 1 {
            return Err(bad("n", self.n, "n >= 1"));
        }
        if self.parameter < 2 {
            return Err(bad("parameter", self.parameter, "at least 2"));
        }
        if self.mode == EnsembleMode::Exhaustive && self.population() > u128::from(ENSEMBLE_LIMIT) {
            return Err(FamilyError::EnsembleTooLarge { size: self.population(), limit: ENSEMBLE_LIMIT });
        }
        Ok(())
    }

    /// The instance with free digits `digits` (the `n - 1` leading
    /// coefficients, then the right-hand-side offset), each below `parameter`.
    fn build(&self, digits: &[u64]) -> EnsembleInstance {
        let p = Int::from(self.parameter);
        let (coeffs, last) = digits.split_at(self.n - 1);
        let mut a: Vec<Int> = coeffs.iter().map(|&x| Int::from(x)).collect();
        match self.kind {
            EnsembleKind::Congruence => {
                a.push(Int::one());
                let c = CongruenceInstance::new(a, Int::from(last[0]), p).expect("digits in range");
                EnsembleInstance::Congruence(c)
            }
            EnsembleKind::Knapsack => {
                a.push(p.clone());
                let a0 = &p * (&p - 1) + last[0];
                EnsembleInstance::Knapsack(KnapsackInstance::relaxed(a, a0).expect("nonnegative weights"))
            }
        }
    }

    fn digits(&self, mut index: u128) -> Vec<u64> {
        let p = u128::from(self.parameter);
        let mut d = vec![0u64; self.n];
        for slot in d.iter_mut().rev() {
            *slot = (index % p) as u64;
            index /= p;
        }
        d
    }

    /// Instance number `index` in lexicographic order of
    /// `(a_1, ..., a_{n-1}, a0)`.
    pub fn instance(&self, index: u128) -> EnsembleInstance {
        self.build(&self.digits(index))
    }

    /// Indices visited by this spec: all of them in order, or a seeded
    /// uniform sample drawn with replacement.
    pub fn indices(&self) -> Result<Vec<u128>, FamilyError> {
        self.validate()?;
        Ok(match self.mode {
            EnsembleMode::Exhaustive => (0..self.population()).collect(),
            EnsembleMode::Sampled { size, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let pop = self.population();
                (0..size).map(|_| rng.gen_range(0..pop)).collect()
            }
        })
    }
}

/// Instances of an ensemble in visiting order.
pub fn ensemble_instances(spec: &EnsembleSpec) -> Result<impl Iterator<Item = EnsembleInstance> + '_, FamilyError> {
    Ok(spec.indices()?.into_iter().map(move |i| spec.instance(i)))
}

/// Vertex count of `a x + b y <= c`, `x, y >= 0`.
pub fn knapsack2_count(a: u64, b: u64, c: u64) -> Result<usize, HullError> {
    let k = KnapsackInstance::new(vec![Int::from(a), Int::from(b)], Int::from(c))?;
    Ok(knapsack_hull_vertices(&k, usize::MAX)?.len())
}

/// Least `b` admitting `a <= b` and `c` with at least `s` hull vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinB {
    pub s: usize,
    /// `(b, a, c)` of the first witness in `(b, a, c)` order.
    pub witness: Option<(u64, u64, u64)>,
    /// Set when the witness sits at the `c` cap or no witness was found, so a
    /// larger cap could change the answer.
    pub cap_limited: bool,
}

/// Searches `b = 1..=b_cap`, `a = 1..=min(b, a_cap)`, `c = 0..=c_cap` for the
/// least `b` whose knapsack `a x + b y <= c` has at least `s_target` vertices.
pub fn min_b_search(s_target: usize, a_cap: u64, b_cap: u64, c_cap: u64) -> Result<MinB, HullError> {
    for b in 1..=b_cap {
        let pairs: Vec<(u64, u64)> = (1..=a_cap.min(b)).flat_map(|a| (0..=c_cap).map(move |c| (a, c))).collect();
        let hits: Vec<bool> = pairs
            .par_iter()
            .map(|&(a, c)| knapsack2_count(a, b, c).map(|k| k >= s_target))
            .collect::<Result<_, _>>()?;
        if let Some(i) = hits.iter().position(|&h| h) {
            let (a, c) = pairs[i];
            return Ok(MinB { s: s_target, witness: Some((b, a, c)), cap_limited: c == c_cap });
        }
    }
    Ok(MinB { s: s_target, witness: None, cap_limited: true })
}
