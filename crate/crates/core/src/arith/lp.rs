//! Exact linear programming by an integer-preserving simplex method.
//!
//! The tableau is kept integral with a common denominator equal to the
//! current basis determinant, so every division in a pivot is exact.
//! Bland's rule guarantees termination.

use num_integer::Integer;
use num_traits::Zero;

use super::{Coef, Int, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

/// A single linear constraint `coeffs · x (<=|>=|=) rhs` over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub relation: Relation,
    pub rhs: Rat,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rat>, relation: Relation, rhs: Rat) -> Self {
        Constraint { coeffs, relation, rhs }
    }

    pub fn from_ints(coeffs: &[Int], relation: Relation, rhs: &Int) -> Self {
        Constraint::new(
            coeffs.iter().map(|c| Rat::from_integer(c.clone())).collect(),
            relation,
            Rat::from_integer(rhs.clone()),
        )
    }

    pub fn from_i64(coeffs: &[i64], relation: Relation, rhs: i64) -> Self {
        Constraint::new(
            coeffs.iter().map(|&c| Rat::from_integer(Int::from(c))).collect(),
            relation,
            Rat::from_integer(Int::from(rhs)),
        )
    }

    /// The same constraint scaled to integer data.
    fn integral(&self) -> (Vec<Int>, Int) {
        let l = common_denominator(self.coeffs.iter().chain(std::iter::once(&self.rhs)));
        let scale = |r: &Rat| (r * Rat::from_integer(l.clone())).to_integer();
        (self.coeffs.iter().map(scale).collect(), scale(&self.rhs))
    }
}

fn common_denominator<'a>(it: impl Iterator<Item = &'a Rat>) -> Int {
    it.fold(Int::from(1), |l, r| l.lcm(r.denom()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rat, point: Vec<Rat> },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn value(&self) -> Option<&Rat> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

/// Maximize `objective · x` over free variables `x` subject to `constraints`.
///
/// When the optimum is finite and the constraint matrix has full column rank
/// the returned point is basic: it makes `n` linearly independent constraints
/// tight.
pub fn lp_solve(objective: &[Rat], constraints: &[Constraint]) -> LpOutcome {
    let n = objective.len();
    assert!(constraints.iter().all(|c| c.coeffs.len() == n), "constraint width mismatch");
    let (rows, rhs): (Vec<Vec<Int>>, Vec<Int>) = constraints.iter().map(Constraint::integral).unzip();
    let rel: Vec<Relation> = constraints.iter().map(|c| c.relation).collect();
    let l = common_denominator(objective.iter());
    let obj: Vec<Int> =
        objective.iter().map(|c| (c * Rat::from_integer(l.clone())).to_integer()).collect();
    let problem = Problem { rows: &rows, rel: &rel, rhs: &rhs, obj: &obj, n_free: n };
    match problem.solve(false) {
        Outcome::Optimal { value, x } => LpOutcome::Optimal { value: value / Rat::from_integer(l), point: x },
        Outcome::Infeasible | Outcome::Separated(_) => LpOutcome::Infeasible,
        Outcome::Unbounded => LpOutcome::Unbounded,
    }
}

/// Integer-data convenience form of [`lp_solve`].
pub fn lp_solve_int(objective: &[Int], rows: &[Vec<Int>], relations: &[Relation], rhs: &[Int]) -> LpOutcome {
    let n = objective.len();
    assert!(rows.iter().all(|r| r.len() == n), "constraint width mismatch");
    let problem = Problem { rows, rel: relations, rhs, obj: objective, n_free: n };
    match problem.solve(false) {
        Outcome::Optimal { value, x } => LpOutcome::Optimal { value, point: x },
        Outcome::Infeasible | Outcome::Separated(_) => LpOutcome::Infeasible,
        Outcome::Unbounded => LpOutcome::Unbounded,
    }
}

/// Whether `rhs` is a nonnegative combination of `columns`.
pub fn nonneg_combination_exists(columns: &[Vec<Int>], rhs: &[Int]) -> bool {
    let k = rhs.len();
    assert!(columns.iter().all(|c| c.len() == k), "column height mismatch");
    if columns.is_empty() {
        return rhs.iter().all(Zero::is_zero);
    }
    let rows: Vec<Vec<Int>> = (0..k).map(|i| columns.iter().map(|c| c[i].clone()).collect()).collect();
    let rel = vec![Relation::Eq; k];
    let obj = vec![Int::zero(); columns.len()];
    let problem = Problem { rows: &rows, rel: &rel, rhs, obj: &obj, n_free: 0 };
    !matches!(problem.solve(true), Outcome::Separated(_))
}

/// A vector `y` with `y · c <= 0` for every column and `y · rhs > 0`, or
/// `None` when `rhs` is a nonnegative combination of the columns.
pub fn separating_certificate(columns: &[Vec<Int>], rhs: &[Int]) -> Option<Vec<Rat>> {
    let k = rhs.len();
    assert!(columns.iter().all(|c| c.len() == k), "column height mismatch");
    if columns.is_empty() {
        return rhs.iter().any(|x| !x.is_zero()).then(|| rhs.iter().map(|x| Rat::from_integer(x.clone())).collect());
    }
    let rows: Vec<Vec<Int>> = (0..k).map(|i| columns.iter().map(|c| c[i].clone()).collect()).collect();
    let rel = vec![Relation::Eq; k];
    let obj = vec![Int::zero(); columns.len()];
    let problem = Problem { rows: &rows, rel: &rel, rhs, obj: &obj, n_free: 0 };
    match problem.solve(true) {
        Outcome::Separated(y) => Some(y),
        _ => None,
    }
}

enum Outcome {
    Optimal { value: Rat, x: Vec<Rat> },
    Infeasible,
    Unbounded,
    /// Phase one failed; carries the dual of the phase-one problem.
    Separated(Vec<Rat>),
}

/// `max obj·x` subject to the rows, where the first `n_free` variables are
/// free and the rest nonnegative.
struct Problem<'a> {
    rows: &'a [Vec<Int>],
    rel: &'a [Relation],
    rhs: &'a [Int],
    obj: &'a [Int],
    n_free: usize,
}

impl Problem<'_> {
    /// Upper bound on the bit length of any minor of the initial tableau.
    fn hadamard_bits(&self) -> u64 {
        let norm_bits = |row: &[Int], extra: &Int| -> u64 {
            let sq: Int = row.iter().chain(std::iter::once(extra)).map(|x| x * x).sum::<Int>() + 2;
            sq.bits() / 2 + 1
        };
        let m = self.rows.len() as u64;
        let body: u64 = self.rows.iter().zip(self.rhs).map(|(r, b)| norm_bits(r, b)).sum();
        body + norm_bits(self.obj, &Int::zero()) + 64 - m.leading_zeros() as u64
    }

    fn solve(&self, feasibility_only: bool) -> Outcome {
        if 2 * self.hadamard_bits() + 2 < 126 {
            self.run::<i128>(feasibility_only)
        } else {
            self.run::<Int>(feasibility_only)
        }
    }

    fn run<T: Coef>(&self, feasibility_only: bool) -> Outcome {
        let conv = |x: &Int| T::from_int(x).expect("coefficient fits the kernel type");
        let m = self.rows.len();
        let n = self.obj.len();
        let slack_count = self.rel.iter().filter(|r| **r != Relation::Eq).count();
        let art_start = n + slack_count;
        let width = art_start + m;
        let zero = || T::from(0);

        let mut rows = Vec::with_capacity(m);
        let mut s = n;
        for i in 0..m {
            let mut row = vec![zero(); width + 1];
            for (dst, x) in row.iter_mut().zip(&self.rows[i]) {
                *dst = conv(x);
            }
            row[width] = conv(&self.rhs[i]);
            match self.rel[i] {
                Relation::Le => {
                    row[s] = T::from(1);
                    s += 1;
                }
                Relation::Ge => {
                    row[s] = T::from(-1);
                    s += 1;
                }
                Relation::Eq => {}
            }
            rows.push(row);
        }
        let mut tab = Tableau {
            rows,
            obj: vec![zero(); width + 1],
            basis: vec![NONE; m],
            d: T::from(1),
            n_free: self.n_free,
        };

        // Gauss-Jordan elimination of the free variables
        for c in 0..self.n_free {
            if let Some(r) = (0..m).find(|&i| tab.basis[i] == NONE && !tab.rows[i][c].is_zero()) {
                tab.pivot(r, c);
            }
        }

        // artificial basis for the remaining rows
        let mut flipped = vec![false; m];
        for i in 0..m {
            if tab.basis[i] != NONE {
                continue;
            }
            if tab.rows[i][width].is_negative() {
                flipped[i] = true;
                for x in tab.rows[i].iter_mut() {
                    *x = -x.clone();
                }
            }
            let a = art_start + i;
            tab.rows[i][a] = tab.d.clone();
            tab.basis[i] = a;
            let row = tab.rows[i].clone();
            for j in (0..art_start).chain(std::iter::once(width)) {
                tab.obj[j] = tab.obj[j].clone() - row[j].clone();
            }
        }

        tab.optimize(self.n_free, art_start + m);
        if tab.obj[width].is_negative() {
            if feasibility_only && self.n_free == 0 {
                // reduced cost of artificial i is 1 - y_i in the sign-adjusted rows
                let y = (0..m)
                    .map(|i| {
                        let yi = Rat::from_integer(Int::from(1)) - tab.to_rat(&tab.obj[art_start + i]);
                        if flipped[i] { -yi } else { yi }
                    })
                    .collect();
                return Outcome::Separated(y);
            }
            return Outcome::Infeasible;
        }
        if feasibility_only {
            return Outcome::Optimal { value: Rat::zero(), x: Vec::new() };
        }

        // drive artificials out of the basis; rows where that fails are redundant
        let mut redundant = Vec::new();
        for r in 0..m {
            if tab.basis[r] < art_start {
                continue;
            }
            match (self.n_free..art_start).find(|&j| !tab.rows[r][j].is_zero()) {
                Some(j) => tab.pivot(r, j),
                None => redundant.push(r),
            }
        }
        for &r in redundant.iter().rev() {
            tab.rows.remove(r);
            tab.basis.remove(r);
        }
        for row in tab.rows.iter_mut() {
            let rhs = row[width].clone();
            row.truncate(art_start);
            row.push(rhs);
        }

        let w = art_start;
        let cost = |j: usize| if j < n { conv(&self.obj[j]) } else { zero() };
        let mut obj: Vec<T> = (0..w).map(|j| -(cost(j) * tab.d.clone())).collect();
        obj.push(zero());
        for (row, &bi) in tab.rows.iter().zip(&tab.basis) {
            let cb = cost(bi);
            if cb.is_zero() {
                continue;
            }
            for (o, x) in obj.iter_mut().zip(row) {
                *o = o.clone() + cb.clone() * x.clone();
            }
        }
        tab.obj = obj;
        // a free direction the constraints do not pin down
        if (0..self.n_free).any(|j| !tab.basis.contains(&j) && !tab.obj[j].is_zero()) {
            return Outcome::Unbounded;
        }
        if !tab.optimize(self.n_free, w) {
            return Outcome::Unbounded;
        }
        let mut x = vec![Rat::zero(); n];
        for (row, &bi) in tab.rows.iter().zip(&tab.basis) {
            if bi < n {
                x[bi] = tab.to_rat(&row[w]);
            }
        }
        Outcome::Optimal { value: tab.to_rat(&tab.obj[w]), x }
    }
}

const NONE: usize = usize::MAX;

struct Tableau<T> {
    /// Constraint rows; the last entry of each is the right-hand side.
    rows: Vec<Vec<T>>,
    /// Reduced-cost row scaled by `d`; last entry is `d` times the objective value.
    obj: Vec<T>,
    basis: Vec<usize>,
    d: T,
    /// Rows whose basic variable is `< n_free` never leave the basis.
    n_free: usize,
}

impl<T: Coef> Tableau<T> {
    fn width(&self) -> usize {
        self.obj.len() - 1
    }

    fn update(row: &mut [T], pivot_row: &[T], c: usize, p: &T, d: &T) {
        let f = row[c].clone();
        for (x, y) in row.iter_mut().zip(pivot_row) {
            let v = p.clone() * x.clone() - f.clone() * y.clone();
            debug_assert!(v.is_multiple_of(d), "inexact pivot division");
            *x = v / d.clone();
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let pivot_row = self.rows[r].clone();
        let p = pivot_row[c].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                Self::update(row, &pivot_row, c, &p, &self.d);
            }
        }
        Self::update(&mut self.obj, &pivot_row, c, &p, &self.d);
        self.basis[r] = c;
        self.d = p;
        if self.d.is_negative() {
            for x in self.rows.iter_mut().flatten().chain(self.obj.iter_mut()) {
                *x = -x.clone();
            }
            self.d = -self.d.clone();
        }
    }

    /// Bland's rule over the nonnegative columns in `from..to`. Returns false
    /// when the objective is unbounded.
    fn optimize(&mut self, from: usize, to: usize) -> bool {
        let rhs = self.width();
        loop {
            let Some(c) = (from..to).find(|&j| self.obj[j].is_negative()) else {
                return true;
            };
            let mut best: Option<usize> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if self.basis[i] < self.n_free || !a.is_positive() {
                    continue;
                }
                best = match best {
                    None => Some(i),
                    Some(k) => {
                        let lhs = self.rows[i][rhs].clone() * self.rows[k][c].clone();
                        let rhs_k = self.rows[k][rhs].clone() * a.clone();
                        if lhs < rhs_k || (lhs == rhs_k && self.basis[i] < self.basis[k]) {
                            Some(i)
                        } else {
                            Some(k)
                        }
                    }
                };
            }
            match best {
                Some(r) => self.pivot(r, c),
                None => return false,
            }
        }
    }

    fn to_rat(&self, x: &T) -> Rat {
        Rat::new(x.clone().into(), self.d.clone().into())
    }
}
