//! Linear systems, knapsack and congruence instances, and the system-level
//! transformations used by the hull engine.

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{det, lp_solve_int, max_abs_minor, rank, ArithError, Int, IntMatrix, LpOutcome, Rat, Real, Relation};
use crate::json::{dec_vec, int_vec, DecInt};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("right-hand side has length {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("rank(A) < n (rank {rank}, n = {n})")]
    RankDeficient { rank: usize, n: usize },
    #[error("the polyhedron is empty")]
    Empty,
    #[error("the polyhedron is unbounded along axis {axis} ({direction})")]
    Unbounded { axis: usize, direction: Direction },
    #[error("weight a[{index}] = {value} is not allowed (must be {min} or more)")]
    InvalidWeight { index: usize, value: Int, min: i64 },
    #[error("capacity must be nonnegative, got {0}")]
    NegativeCapacity(Int),
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(Int),
    #[error("{what} = {value} is outside [0, {modulus})")]
    ResidueOutOfRange { what: String, value: Int, modulus: Int },
    #[error("no row is active at the given point")]
    NoActiveRows,
    #[error("point has {got} coordinates, expected {expected}")]
    PointDimension { expected: usize, got: usize },
    #[error("invalid instance: {0}")]
    Json(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Lower,
    Upper,
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Direction::Lower => "below",
            Direction::Upper => "above",
        })
    }
}

/// The polyhedron `{x : Ax <= b}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearSystem {
    a: IntMatrix,
    b: Vec<Int>,
}

/// Exact rational vertices of a polyhedron, sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalVertexSet(pub Vec<Vec<Rat>>);

impl LinearSystem {
    pub fn new(a: IntMatrix, b: Vec<Int>) -> Result<Self, ModelError> {
        if b.len() != a.rows() {
            return Err(ModelError::DimensionMismatch { expected: a.rows(), got: b.len() });
        }
        Ok(LinearSystem { a, b })
    }

    pub fn from_rows(rows: Vec<Vec<Int>>, b: Vec<Int>) -> Result<Self, ModelError> {
        LinearSystem::new(IntMatrix::from_rows(rows)?, b)
    }

    pub fn from_i64(rows: &[&[i64]], b: &[i64]) -> Result<Self, ModelError> {
        LinearSystem::new(IntMatrix::from_i64_rows(rows)?, b.iter().map(|&x| Int::from(x)).collect())
    }

    pub fn a(&self) -> &IntMatrix {
        &self.a
    }

    pub fn b(&self) -> &[Int] {
        &self.b
    }

    /// Number of constraints.
    pub fn m(&self) -> usize {
        self.a.rows()
    }

    /// Number of variables.
    pub fn n(&self) -> usize {
        self.a.cols()
    }

    pub fn row(&self, i: usize) -> &[Int] {
        self.a.row(i)
    }

    /// Rank of `A`.
    pub fn rank(&self) -> usize {
        rank(&self.a)
    }

    /// Maximum absolute coefficient of `A`; `b` is not included.
    pub fn alpha(&self) -> Int {
        self.a.max_abs()
    }

    /// `b_i - a_i x` for an integer point.
    pub fn slack(&self, i: usize, x: &[Int]) -> Int {
        &self.b[i] - dot(self.row(i), x)
    }

    pub fn contains(&self, x: &[Int]) -> bool {
        (0..self.m()).all(|i| !self.slack(i, x).is_negative())
    }

    fn rat_slack(&self, i: usize, v: &[Rat]) -> Rat {
        let ax: Rat = self.row(i).iter().zip(v).map(|(a, x)| Rat::from_integer(a.clone()) * x).sum();
        Rat::from_integer(self.b[i].clone()) - ax
    }

    pub fn contains_rat(&self, v: &[Rat]) -> bool {
        (0..self.m()).all(|i| !self.rat_slack(i, v).is_negative())
    }

    /// Row-wise encoding length `max_i 1 + sum_j (1 + log2(1 + |a_ij|)) + log2(1 + |b_i|)`.
    pub fn encoding_length(&self, precision: u32) -> Result<Real, ModelError> {
        let log1p = |x: &Int| Real::log2_rat(&Rat::from_integer(x.abs() + 1), precision);
        let mut best: Option<Real> = None;
        for i in 0..self.m() {
            let mut acc = Real::from_i64(1, precision);
            for a in self.row(i) {
                acc = acc.add(&Real::from_i64(1, precision)).add(&log1p(a)?);
            }
            acc = acc.add(&log1p(&self.b[i])?);
            if best.as_ref().map_or(true, |b| acc > *b) {
                best = Some(acc);
            }
        }
        Ok(best.expect("at least one row"))
    }

    /// The equality system `A x' - A x'' + y = b` in nonnegative variables.
    pub fn to_standard_form(&self) -> StandardFormSystem {
        let (m, n) = (self.m(), self.n());
        let rows = (0..m)
            .map(|i| {
                let r = self.row(i);
                r.iter()
                    .cloned()
                    .chain(r.iter().map(|x| -x))
                    .chain((0..m).map(|k| if k == i { Int::one() } else { Int::zero() }))
                    .collect()
            })
            .collect();
        StandardFormSystem {
            matrix: IntMatrix::from_rows(rows).expect("nonempty"),
            rhs: self.b.clone(),
            n_original: n,
        }
    }

    /// Largest absolute `n x n` minor of `A`.
    pub fn delta_a(&self) -> Result<Int, ModelError> {
        let r = rank(&self.a);
        if r < self.n() {
            return Err(ModelError::RankDeficient { rank: r, n: self.n() });
        }
        Ok(max_abs_minor(&self.a, self.n())?)
    }

    /// All vertices, by solving every nonsingular `n`-row subsystem.
    pub fn rational_vertices(&self) -> Result<RationalVertexSet, ModelError> {
        let n = self.n();
        let r = rank(&self.a);
        if r < n {
            return Err(ModelError::RankDeficient { rank: r, n });
        }
        let mut out: Vec<Vec<Rat>> = (0..self.m())
            .combinations(n)
            .filter_map(|rows| self.solve_rows(&rows))
            .filter(|v| self.contains_rat(v))
            .collect();
        out.sort();
        out.dedup();
        if out.is_empty() {
            return Err(ModelError::Empty);
        }
        Ok(RationalVertexSet(out))
    }

    /// Unique solution of the given rows taken with equality, by Cramer's rule.
    pub fn solve_rows(&self, rows: &[usize]) -> Option<Vec<Rat>> {
        let n = self.n();
        let cols: Vec<usize> = (0..n).collect();
        let m = self.a.select(rows, &cols);
        let d = det(&m);
        if d.is_zero() {
            return None;
        }
        Some(
            (0..n)
                .map(|j| {
                    let mut mj = m.clone();
                    for (k, &i) in rows.iter().enumerate() {
                        mj[k][j] = self.b[i].clone();
                    }
                    Rat::new(det(&mj), d.clone())
                })
                .collect(),
        )
    }

    fn check_point(&self, v: &[Rat]) -> Result<(), ModelError> {
        if v.len() != self.n() {
            return Err(ModelError::PointDimension { expected: self.n(), got: v.len() });
        }
        Ok(())
    }

    /// Rows `i` with `b_i - a_i v < n Δ(A)`, as 0-based indices.
    pub fn active_index_set(&self, v: &[Rat]) -> Result<Vec<usize>, ModelError> {
        self.check_point(v)?;
        let threshold = Rat::from_integer(self.delta_a()? * Int::from(self.n()));
        Ok((0..self.m()).filter(|&i| self.rat_slack(i, v) < threshold).collect())
    }

    /// The rows of `J(v)` rewritten for `x = x' + round(v)`.
    pub fn shift_by_rounded_vertex(&self, v: &[Rat]) -> Result<LinearSystem, ModelError> {
        let rows = self.active_index_set(v)?;
        if rows.is_empty() {
            return Err(ModelError::NoActiveRows);
        }
        let shift = round_half_away(v);
        Ok(self.subsystem(&rows).translate(&shift))
    }

    /// The system restricted to the given rows.
    pub fn subsystem(&self, rows: &[usize]) -> LinearSystem {
        let cols: Vec<usize> = (0..self.n()).collect();
        LinearSystem {
            a: IntMatrix::from_rows(self.a.select(rows, &cols)).expect("nonempty row selection"),
            b: rows.iter().map(|&i| self.b[i].clone()).collect(),
        }
    }

    /// The system in coordinates `x' = x - t`.
    pub fn translate(&self, t: &[Int]) -> LinearSystem {
        LinearSystem {
            a: self.a.clone(),
            b: (0..self.m()).map(|i| self.slack(i, t)).collect(),
        }
    }

    /// Appends rows.
    pub fn with_rows(&self, extra: &[(Vec<Int>, Int)]) -> LinearSystem {
        let mut rows = self.a.to_rows();
        let mut b = self.b.clone();
        for (r, c) in extra {
            rows.push(r.clone());
            b.push(c.clone());
        }
        LinearSystem::from_rows(rows, b).expect("consistent widths")
    }

    /// Exact optimum of `c · x`, or the LP status.
    pub fn maximize(&self, c: &[Int]) -> LpOutcome {
        let rows = self.a.to_rows();
        lp_solve_int(c, &rows, &vec![Relation::Le; self.m()], &self.b)
    }

    /// Per-axis `(min, max)` of the polyhedron.
    pub fn axis_ranges(&self) -> Result<Vec<(Rat, Rat)>, ModelError> {
        let n = self.n();
        let mut out = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![Int::zero(); n];
            e[j] = Int::one();
            let hi = match self.maximize(&e) {
                LpOutcome::Optimal { value, .. } => value,
                LpOutcome::Infeasible => return Err(ModelError::Empty),
                LpOutcome::Unbounded => return Err(ModelError::Unbounded { axis: j, direction: Direction::Upper }),
            };
            e[j] = -Int::one();
            let lo = match self.maximize(&e) {
                LpOutcome::Optimal { value, .. } => -value,
                LpOutcome::Infeasible => return Err(ModelError::Empty),
                LpOutcome::Unbounded => return Err(ModelError::Unbounded { axis: j, direction: Direction::Lower }),
            };
            out.push((lo, hi));
        }
        Ok(out)
    }

    /// `max_j (max_P x_j - min_P x_j)`.
    pub fn diameter(&self) -> Result<Rat, ModelError> {
        Ok(self.axis_ranges()?.into_iter().map(|(lo, hi)| hi - lo).max().expect("n >= 1"))
    }
}

pub(crate) fn dot(a: &[Int], x: &[Int]) -> Int {
    a.iter().zip(x).map(|(p, q)| p * q).sum()
}

/// Nearest integer per coordinate, halves rounded away from zero.
pub fn round_half_away(v: &[Rat]) -> Vec<Int> {
    v.iter().map(|x| x.round().to_integer()).collect()
}

/// Nonnegative weights and capacity of `a · x <= a0, x >= 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KnapsackInstance {
    a: Vec<Int>,
    a0: Int,
    relaxed: bool,
}

impl KnapsackInstance {
    /// Weights must all be at least 1.
    pub fn new(a: Vec<Int>, a0: Int) -> Result<Self, ModelError> {
        Self::build(a, a0, 1)
    }

    /// Zero weights allowed; the solution set is then unbounded.
    pub fn relaxed(a: Vec<Int>, a0: Int) -> Result<Self, ModelError> {
        Self::build(a, a0, 0)
    }

    pub fn from_i64(a: &[i64], a0: i64) -> Result<Self, ModelError> {
        Self::new(a.iter().map(|&x| Int::from(x)).collect(), Int::from(a0))
    }

    fn build(a: Vec<Int>, a0: Int, min: i64) -> Result<Self, ModelError> {
        if a.is_empty() {
            return Err(ModelError::Arith(ArithError::EmptyMatrix { rows: 1, cols: 0 }));
        }
        if let Some((index, value)) = a.iter().enumerate().find(|(_, x)| **x < Int::from(min)) {
            return Err(ModelError::InvalidWeight { index, value: value.clone(), min });
        }
        if a0.is_negative() {
            return Err(ModelError::NegativeCapacity(a0));
        }
        Ok(KnapsackInstance { relaxed: a.iter().any(Zero::is_zero), a, a0 })
    }

    pub fn a(&self) -> &[Int] {
        &self.a
    }

    pub fn a0(&self) -> &Int {
        &self.a0
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    /// Whether some weight is zero.
    pub fn is_relaxed(&self) -> bool {
        self.relaxed
    }

    /// Smallest weight.
    pub fn gamma(&self) -> Int {
        self.a.iter().min().cloned().expect("n >= 1")
    }

    /// Largest weight.
    pub fn alpha1(&self) -> Int {
        self.a.iter().max().cloned().expect("n >= 1")
    }

    /// The rows `-x_j <= 0` followed by `a · x <= a0`.
    pub fn to_system(&self) -> LinearSystem {
        let n = self.n();
        let mut rows: Vec<Vec<Int>> = (0..n)
            .map(|j| (0..n).map(|k| if k == j { -Int::one() } else { Int::zero() }).collect())
            .collect();
        rows.push(self.a.clone());
        let mut b = vec![Int::zero(); n];
        b.push(self.a0.clone());
        LinearSystem::from_rows(rows, b).expect("consistent shape")
    }
}

/// Nonnegative solutions of `a · x ≡ a0 (mod Δ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CongruenceInstance {
    a: Vec<Int>,
    a0: Int,
    delta: Int,
}

impl CongruenceInstance {
    pub fn new(a: Vec<Int>, a0: Int, delta: Int) -> Result<Self, ModelError> {
        if delta < Int::from(2) {
            return Err(ModelError::InvalidModulus(delta));
        }
        if a.is_empty() {
            return Err(ModelError::Arith(ArithError::EmptyMatrix { rows: 1, cols: 0 }));
        }
        let in_range = |x: &Int| !x.is_negative() && *x < delta;
        for (j, x) in a.iter().enumerate() {
            if !in_range(x) {
                return Err(ModelError::ResidueOutOfRange { what: format!("a[{j}]"), value: x.clone(), modulus: delta });
            }
        }
        if !in_range(&a0) {
            return Err(ModelError::ResidueOutOfRange { what: "a0".into(), value: a0, modulus: delta });
        }
        Ok(CongruenceInstance { a, a0, delta })
    }

    pub fn from_i64(a: &[i64], a0: i64, delta: i64) -> Result<Self, ModelError> {
        Self::new(a.iter().map(|&x| Int::from(x)).collect(), Int::from(a0), Int::from(delta))
    }

    pub fn a(&self) -> &[Int] {
        &self.a
    }

    pub fn a0(&self) -> &Int {
        &self.a0
    }

    pub fn delta(&self) -> &Int {
        &self.delta
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn is_solution(&self, x: &[Int]) -> bool {
        x.iter().all(|v| !v.is_negative()) && num_integer::Integer::mod_floor(&(dot(&self.a, x) - &self.a0), &self.delta).is_zero()
    }
}

/// `[A | -A | I] (x', x'', y) = b` with all variables nonnegative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardFormSystem {
    pub matrix: IntMatrix,
    pub rhs: Vec<Int>,
    pub n_original: usize,
}

impl StandardFormSystem {
    /// Number of variables, `2n + m`.
    pub fn variables(&self) -> usize {
        self.matrix.cols()
    }

    /// `(x⁺, x⁻, b - Ax)` for a point of the source system.
    pub fn map_point(&self, x: &[Int]) -> Vec<Int> {
        let pos = x.iter().map(|v| if v.is_positive() { v.clone() } else { Int::zero() });
        let neg = x.iter().map(|v| if v.is_negative() { -v } else { Int::zero() });
        let slack = (0..self.matrix.rows()).map(|i| &self.rhs[i] - dot(&self.matrix.row(i)[..self.n_original], x));
        pos.chain(neg).chain(slack).collect()
    }

    pub fn is_feasible(&self, z: &[Int]) -> bool {
        z.len() == self.variables()
            && z.iter().all(|v| !v.is_negative())
            && (0..self.matrix.rows()).all(|i| dot(self.matrix.row(i), z) == self.rhs[i])
    }
}

/// Any instance accepted on input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    System(LinearSystem),
    Knapsack(KnapsackInstance),
    Congruence(CongruenceInstance),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum RawInstance {
    System {
        #[serde(rename = "A")]
        a: Vec<Vec<DecInt>>,
        b: Vec<DecInt>,
    },
    Knapsack {
        a: Vec<DecInt>,
        a0: DecInt,
    },
    Congruence {
        a: Vec<DecInt>,
        a0: DecInt,
        delta: DecInt,
    },
}

impl Instance {
    pub fn from_json(s: &str) -> Result<Instance, ModelError> {
        let raw: RawInstance = serde_json::from_str(s).map_err(|e| ModelError::Json(e.to_string()))?;
        Instance::from_raw(raw)
    }

    pub fn from_value(v: serde_json::Value) -> Result<Instance, ModelError> {
        let raw: RawInstance = serde_json::from_value(v).map_err(|e| ModelError::Json(e.to_string()))?;
        Instance::from_raw(raw)
    }

    fn from_raw(raw: RawInstance) -> Result<Instance, ModelError> {
        Ok(match raw {
            RawInstance::System { a, b } => {
                let rows: Vec<Vec<Int>> = a.into_iter().map(int_vec).collect();
                Instance::System(LinearSystem::from_rows(rows, int_vec(b))?)
            }
            RawInstance::Knapsack { a, a0 } => Instance::Knapsack(KnapsackInstance::relaxed(int_vec(a), a0.0)?),
            RawInstance::Congruence { a, a0, delta } => {
                Instance::Congruence(CongruenceInstance::new(int_vec(a), a0.0, delta.0)?)
            }
        })
    }

    fn to_raw(&self) -> RawInstance {
        match self {
            Instance::System(s) => RawInstance::System {
                a: s.a.row_iter().map(dec_vec).collect(),
                b: dec_vec(&s.b),
            },
            Instance::Knapsack(k) => RawInstance::Knapsack { a: dec_vec(&k.a), a0: DecInt(k.a0.clone()) },
            Instance::Congruence(c) => RawInstance::Congruence {
                a: dec_vec(&c.a),
                a0: DecInt(c.a0.clone()),
                delta: DecInt(c.delta.clone()),
            },
        }
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self.to_raw()).expect("instance serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_raw()).expect("instance serializes")
    }

    pub fn n(&self) -> usize {
        match self {
            Instance::System(s) => s.n(),
            Instance::Knapsack(k) => k.n(),
            Instance::Congruence(c) => c.n(),
        }
    }
}

impl Serialize for Instance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_raw().serialize(s)
    }
}
