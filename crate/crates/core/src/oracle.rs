//! Brute-force reference for integer hull vertices.
//!
//! Shares nothing with the hull engine or the crate's LP solver: it carries
//! its own dense rational simplex, enumerates the bounding box point by point
//! and tests every candidate with one LP.

use std::collections::HashSet;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::arith::{Int, Rat};
use crate::model::LinearSystem;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("more than {0} integer points")]
    TooManyPoints(usize),
}

enum Lp {
    Infeasible,
    Unbounded,
    Optimal(Rat),
}

/// `max c·y` over `M y = h`, `y >= 0`, by the two-phase tableau method with
/// Bland's rule.
fn simplex(m: &[Vec<Rat>], h: &[Rat], c: &[Rat]) -> Lp {
    let rows = m.len();
    let cols = c.len();
    // columns: originals, then one artificial per row, then the rhs
    let width = cols + rows + 1;
    let mut t: Vec<Vec<Rat>> = (0..rows)
        .map(|i| {
            let flip = h[i].is_negative();
            let sign = |x: &Rat| if flip { -x.clone() } else { x.clone() };
            let mut r: Vec<Rat> = m[i].iter().map(sign).collect();
            r.extend((0..rows).map(|k| if k == i { Rat::one() } else { Rat::zero() }));
            r.push(sign(&h[i]));
            r
        })
        .collect();
    let mut basis: Vec<usize> = (cols..cols + rows).collect();

    // phase one: maximize minus the sum of artificials
    let mut obj = vec![Rat::zero(); width];
    for r in &t {
        for (o, x) in obj.iter_mut().zip(r).take(cols) {
            *o += x;
        }
        obj[width - 1] += &r[width - 1];
    }
    let allowed = |j: usize, phase_two: bool| j < cols || !phase_two;
    run(&mut t, &mut basis, &mut obj, |j| allowed(j, false));
    if obj[width - 1].is_positive() {
        return Lp::Infeasible;
    }
    // drive remaining artificials out of the basis where possible
    for i in 0..rows {
        if basis[i] >= cols {
            if let Some(j) = (0..cols).find(|&j| !t[i][j].is_zero()) {
                pivot(&mut t, &mut basis, &mut obj, i, j);
            }
        }
    }

    // phase two: reduced costs of c relative to the current basis
    let mut obj = vec![Rat::zero(); width];
    obj[..cols].clone_from_slice(c);
    for i in 0..rows {
        let b = basis[i];
        if b < cols && !c[b].is_zero() {
            let f = c[b].clone();
            for j in 0..width {
                let d = &f * &t[i][j];
                obj[j] -= d;
            }
        }
    }
    if !run(&mut t, &mut basis, &mut obj, |j| allowed(j, true)) {
        return Lp::Unbounded;
    }
    Lp::Optimal(-obj[width - 1].clone())
}

fn pivot(t: &mut [Vec<Rat>], basis: &mut [usize], obj: &mut [Rat], r: usize, j: usize) {
    let p = t[r][j].clone();
    for x in t[r].iter_mut() {
        *x /= &p;
    }
    let row = t[r].clone();
    for (i, other) in t.iter_mut().enumerate() {
        if i != r && !other[j].is_zero() {
            let f = other[j].clone();
            for (x, y) in other.iter_mut().zip(&row) {
                *x -= &f * y;
            }
        }
    }
    if !obj[j].is_zero() {
        let f = obj[j].clone();
        for (x, y) in obj.iter_mut().zip(&row) {
            *x -= &f * y;
        }
    }
    basis[r] = j;
}

/// Iterates to optimality; false when the objective is unbounded.
fn run(t: &mut [Vec<Rat>], basis: &mut [usize], obj: &mut [Rat], allowed: impl Fn(usize) -> bool) -> bool {
    let last = obj.len() - 1;
    loop {
        let Some(j) = (0..last).find(|&j| allowed(j) && obj[j].is_positive()) else {
            return true;
        };
        let mut best: Option<(usize, Rat)> = None;
        for (i, r) in t.iter().enumerate() {
            if r[j].is_positive() {
                let ratio = &r[last] / &r[j];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && basis[i] < basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = best else {
            return false;
        };
        pivot(t, basis, obj, r, j);
    }
}

fn rat(x: &Int) -> Rat {
    Rat::from_integer(x.clone())
}

/// `max c·x` over `A x <= b` with `x` free, via `x = u - v` and slacks.
fn maximize(sys: &LinearSystem, c: &[Rat]) -> Lp {
    let (m, n) = (sys.m(), sys.n());
    let rows: Vec<Vec<Rat>> = (0..m)
        .map(|i| {
            let a = sys.row(i);
            a.iter()
                .map(rat)
                .chain(a.iter().map(|x| -rat(x)))
                .chain((0..m).map(|k| if k == i { Rat::one() } else { Rat::zero() }))
                .collect()
        })
        .collect();
    let h: Vec<Rat> = sys.b().iter().map(rat).collect();
    let obj: Vec<Rat> = c.iter().cloned().chain(c.iter().map(|x| -x)).chain((0..m).map(|_| Rat::zero())).collect();
    debug_assert_eq!(obj.len(), 2 * n + m);
    simplex(&rows, &h, &obj)
}

/// Integer points of a bounded system, scanned box by box.
pub fn oracle_points(sys: &LinearSystem, limit: usize) -> Result<Vec<Vec<Int>>, OracleError> {
    let n = sys.n();
    let mut ranges = Vec::with_capacity(n);
    for j in 0..n {
        let e = |s: i64| (0..n).map(|k| if k == j { Rat::from_integer(Int::from(s)) } else { Rat::zero() }).collect::<Vec<_>>();
        let hi = match maximize(sys, &e(1)) {
            Lp::Infeasible => return Ok(vec![]),
            Lp::Unbounded => return Err(OracleError::Unbounded),
            Lp::Optimal(v) => v.floor().to_integer(),
        };
        let lo = match maximize(sys, &e(-1)) {
            Lp::Infeasible => return Ok(vec![]),
            Lp::Unbounded => return Err(OracleError::Unbounded),
            Lp::Optimal(v) => (-v).ceil().to_integer(),
        };
        if lo > hi {
            return Ok(vec![]);
        }
        ranges.push(std::iter::successors(Some(lo), move |x| (*x < hi).then(|| x + 1)));
    }
    let mut pts = Vec::new();
    for x in ranges.into_iter().multi_cartesian_product() {
        if sys.contains(&x) {
            pts.push(x);
            if pts.len() > limit {
                return Err(OracleError::TooManyPoints(limit));
            }
        }
    }
    Ok(pts)
}

/// Whether `p` is a convex combination of `others`.
fn in_hull(p: &[Int], others: &[&Vec<Int>]) -> bool {
    if others.is_empty() {
        return false;
    }
    let n = p.len();
    let mut m: Vec<Vec<Rat>> = (0..n).map(|j| others.iter().map(|q| rat(&q[j])).collect()).collect();
    m.push(vec![Rat::one(); others.len()]);
    let h: Vec<Rat> = p.iter().map(rat).chain(std::iter::once(Rat::one())).collect();
    !matches!(simplex(&m, &h, &vec![Rat::zero(); others.len()]), Lp::Infeasible)
}

/// Vertices of the integer hull of a bounded system, sorted.
///
/// A point that is the midpoint of two other integer points is never a
/// vertex; every remaining point is tested against the hull of the others
/// that remain, which has the same vertices as the full point set.
pub fn oracle_vertices(sys: &LinearSystem, limit: usize) -> Result<Vec<Vec<Int>>, OracleError> {
    let pts = oracle_points(sys, limit)?;
    let set: HashSet<&Vec<Int>> = pts.iter().collect();
    let n = sys.n();
    let steps: Vec<Vec<i64>> = (0..n).map(|_| [-1i64, 0, 1]).multi_cartesian_product().filter(|d| d.iter().any(|&s| s != 0)).collect();
    let survivors: Vec<&Vec<Int>> = pts
        .iter()
        .filter(|x| {
            !steps.iter().any(|d| {
                let plus: Vec<Int> = x.iter().zip(d).map(|(a, &s)| a + s).collect();
                let minus: Vec<Int> = x.iter().zip(d).map(|(a, &s)| a - s).collect();
                set.contains(&plus) && set.contains(&minus)
            })
        })
        .collect();
    let mut verts: Vec<Vec<Int>> = survivors
        .par_iter()
        .filter(|p| {
            let others: Vec<&Vec<Int>> = survivors.iter().copied().filter(|q| q != *p).collect();
            !in_hull(p, &others)
        })
        .map(|p| (*p).clone())
        .collect();
    verts.sort();
    Ok(verts)
}
