use std::collections::{BTreeMap, HashSet};
use std::sync::atomic::{AtomicUsize, Ordering};

use itertools::Itertools;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use super::{HullError, IntegerHull};
use crate::arith::{separating_certificate, Coef, Int, Rat};
use crate::model::{LinearSystem, ModelError};

/// Coordinates are kept as `i64` below this magnitude so that 2-D cross
/// products fit in `i128`.
const COORD_LIMIT: i64 = 1 << 60;

pub(crate) type Point = Vec<i64>;

/// Work counters of one engine run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EngineStats {
    /// Lattice columns scanned by the planar sweeps.
    pub columns_scanned: usize,
}

#[derive(Clone, Debug)]
struct Sys<T> {
    n: usize,
    rows: Vec<Vec<T>>,
    b: Vec<T>,
}

struct Ctx {
    cap: usize,
    scanned: AtomicUsize,
}

impl Ctx {
    fn charge(&self, k: usize) -> Result<(), HullError> {
        let before = self.scanned.fetch_add(k, Ordering::Relaxed);
        if before + k > self.cap {
            return Err(HullError::CapExceeded { cap: self.cap });
        }
        Ok(())
    }
}

/// Vertices of the integer hull of a bounded polyhedron. An empty polyhedron
/// gives an empty hull.
pub fn integer_hull_vertices(sys: &LinearSystem, cap: usize) -> Result<IntegerHull, HullError> {
    integer_hull_vertices_with(sys, cap).map(|(h, _)| h)
}

/// As [`integer_hull_vertices`], also reporting work counters.
pub fn integer_hull_vertices_with(sys: &LinearSystem, cap: usize) -> Result<(IntegerHull, EngineStats), HullError> {
    let n = sys.n();
    let ranges = match sys.axis_ranges() {
        Ok(r) => r,
        Err(ModelError::Empty) => return Ok((IntegerHull::new(n, vec![], vec![], "system"), EngineStats::default())),
        Err(ModelError::Unbounded { axis, direction }) => return Err(HullError::Unbounded { axis, direction }),
        Err(e) => return Err(e.into()),
    };
    let ranges = integer_ranges(&ranges)?;
    let ctx = Ctx { cap, scanned: AtomicUsize::new(0) };
    let points = match ranges {
        None => vec![],
        Some(r) => {
            let coord_bits = r.iter().map(|&(lo, hi)| bits_i64(lo).max(bits_i64(hi))).max().unwrap_or(0);
            let entry_bits = (0..sys.m())
                .flat_map(|i| sys.row(i).iter().chain(std::iter::once(&sys.b()[i])))
                .map(|x| x.bits())
                .max()
                .unwrap_or(0);
            let n_bits = 64 - (n as u64).leading_zeros() as u64;
            if 3 * entry_bits + coord_bits + n_bits + 8 < 120 {
                hull(&to_sys::<i128>(sys), &ctx, Some(r))?
            } else {
                hull(&to_sys::<Int>(sys), &ctx, Some(r))?
            }
        }
    };
    let vertices = points.into_iter().map(|p| p.into_iter().map(Int::from).collect()).collect();
    let stats = EngineStats { columns_scanned: ctx.scanned.load(Ordering::Relaxed) };
    Ok((IntegerHull::new(n, vertices, vec![], "system"), stats))
}

fn bits_i64(x: i64) -> u64 {
    64 - x.unsigned_abs().leading_zeros() as u64
}

fn to_sys<T: Coef>(sys: &LinearSystem) -> Sys<T> {
    let conv = |x: &Int| T::from_int(x).expect("magnitude checked");
    Sys {
        n: sys.n(),
        rows: (0..sys.m()).map(|i| sys.row(i).iter().map(conv).collect()).collect(),
        b: sys.b().iter().map(conv).collect(),
    }
}

fn to_linear_system<T: Coef>(sys: &Sys<T>) -> Option<LinearSystem> {
    if sys.rows.is_empty() {
        return None;
    }
    let rows = sys.rows.iter().map(|r| r.iter().map(|x| x.clone().into()).collect()).collect();
    LinearSystem::from_rows(rows, sys.b.iter().map(|x| x.clone().into()).collect()).ok()
}

fn checked_i64(x: Int) -> Result<i64, HullError> {
    match x.to_i64() {
        Some(v) if v.abs() < COORD_LIMIT => Ok(v),
        _ => Err(HullError::CoordinateOverflow),
    }
}

/// Integer ranges from rational ones; `None` when some axis has no integer.
fn integer_ranges(r: &[(Rat, Rat)]) -> Result<Option<Vec<(i64, i64)>>, HullError> {
    let mut out = Vec::with_capacity(r.len());
    for (lo, hi) in r {
        let lo = checked_i64(lo.ceil().to_integer())?;
        let hi = checked_i64(hi.floor().to_integer())?;
        if lo > hi {
            return Ok(None);
        }
        out.push((lo, hi));
    }
    Ok(Some(out))
}

fn hull<T: Coef>(sys: &Sys<T>, ctx: &Ctx, ranges: Option<Vec<(i64, i64)>>) -> Result<Vec<Point>, HullError> {
    match sys.n {
        1 => hull1(sys),
        2 => hull2(sys, ctx, ranges),
        _ => hulln(sys, ctx, ranges),
    }
}

/// Substitutes `x_axis = t`, dropping rows that become constant. `None` when
/// such a row is violated.
fn slice<T: Coef>(sys: &Sys<T>, axis: usize, t: i64) -> Option<Sys<T>> {
    let t = T::from(t);
    let mut rows = Vec::with_capacity(sys.rows.len());
    let mut b = Vec::with_capacity(sys.rows.len());
    for (row, bi) in sys.rows.iter().zip(&sys.b) {
        let rest = bi.clone() - row[axis].clone() * t.clone();
        let r: Vec<T> = row.iter().enumerate().filter(|(j, _)| *j != axis).map(|(_, x)| x.clone()).collect();
        if r.iter().all(Zero::is_zero) {
            if rest.is_negative() {
                return None;
            }
            continue;
        }
        rows.push(r);
        b.push(rest);
    }
    Some(Sys { n: sys.n - 1, rows, b })
}

fn lift(points: Vec<Point>, axis: usize, t: i64) -> impl Iterator<Item = Point> {
    points.into_iter().map(move |mut p| {
        p.insert(axis, t);
        p
    })
}

fn unbounded(axis: usize, upper: bool) -> HullError {
    let direction = if upper { crate::model::Direction::Upper } else { crate::model::Direction::Lower };
    HullError::Unbounded { axis, direction }
}

/// Integer interval `{x : c x <= r}` for one variable given by `(c, r)` pairs.
fn interval<'a, T: Coef + 'a>(pairs: impl Iterator<Item = (&'a T, T)>) -> Option<(Option<T>, Option<T>)> {
    let mut lo: Option<T> = None;
    let mut hi: Option<T> = None;
    for (c, r) in pairs {
        if c.is_zero() {
            if r.is_negative() {
                return None;
            }
        } else if c.is_positive() {
            let v = r.div_floor(c);
            hi = Some(match hi {
                Some(h) if h < v => h,
                _ => v,
            });
        } else {
            let v = r.div_ceil(c);
            lo = Some(match lo {
                Some(l) if l > v => l,
                _ => v,
            });
        }
    }
    if let (Some(l), Some(h)) = (&lo, &hi) {
        if l > h {
            return None;
        }
    }
    Some((lo, hi))
}

fn hull1<T: Coef>(sys: &Sys<T>) -> Result<Vec<Point>, HullError> {
    let Some((lo, hi)) = interval(sys.rows.iter().map(|r| &r[0]).zip(sys.b.iter().cloned())) else {
        return Ok(vec![]);
    };
    let lo = checked_i64(lo.ok_or_else(|| unbounded(0, false))?.into())?;
    let hi = checked_i64(hi.ok_or_else(|| unbounded(0, true))?.into())?;
    Ok(if lo == hi { vec![vec![lo]] } else { vec![vec![lo], vec![hi]] })
}

/// Axis ranges of a planar system from its vertices.
fn ranges2<T: Coef>(sys: &Sys<T>) -> Result<Option<Vec<(i64, i64)>>, HullError> {
    let m = sys.rows.len();
    let mut lo: [Option<T>; 2] = [None, None];
    let mut hi: [Option<T>; 2] = [None, None];
    for i in 0..m {
        for k in i + 1..m {
            let (r, s) = (&sys.rows[i], &sys.rows[k]);
            let mut d = r[0].clone() * s[1].clone() - r[1].clone() * s[0].clone();
            if d.is_zero() {
                continue;
            }
            let mut x = sys.b[i].clone() * s[1].clone() - r[1].clone() * sys.b[k].clone();
            let mut y = r[0].clone() * sys.b[k].clone() - sys.b[i].clone() * s[0].clone();
            if d.is_negative() {
                d = -d;
                x = -x;
                y = -y;
            }
            let feasible = sys
                .rows
                .iter()
                .zip(&sys.b)
                .all(|(row, bj)| row[0].clone() * x.clone() + row[1].clone() * y.clone() <= bj.clone() * d.clone());
            if !feasible {
                continue;
            }
            for (axis, v) in [x, y].into_iter().enumerate() {
                let f = v.div_floor(&d);
                let c = v.div_ceil(&d);
                if lo[axis].as_ref().map_or(true, |l| c < *l) {
                    lo[axis] = Some(c);
                }
                if hi[axis].as_ref().map_or(true, |h| f > *h) {
                    hi[axis] = Some(f);
                }
            }
        }
    }
    let mut out = Vec::with_capacity(2);
    for axis in 0..2 {
        match (lo[axis].take(), hi[axis].take()) {
            (Some(l), Some(h)) => {
                let (l, h) = (checked_i64(l.into())?, checked_i64(h.into())?);
                if l > h {
                    return Ok(None);
                }
                out.push((l, h));
            }
            _ => return Ok(None),
        }
    }
    Ok(Some(out))
}

/// Planar hull: sweep the shorter axis, keep each column's extreme points,
/// then take the convex hull of those.
fn hull2<T: Coef>(sys: &Sys<T>, ctx: &Ctx, ranges: Option<Vec<(i64, i64)>>) -> Result<Vec<Point>, HullError> {
    if sys.rows.len() < 3 {
        // a slice of a bounded set with fewer than three rows can only be empty
        return Ok(vec![]);
    }
    let ranges = match ranges {
        Some(r) => r,
        None => match ranges2(sys)? {
            Some(r) => r,
            None => return Ok(vec![]),
        },
    };
    let (u, w) = if ranges[0].1 - ranges[0].0 <= ranges[1].1 - ranges[1].0 { (0, 1) } else { (1, 0) };
    let (ulo, uhi) = ranges[u];
    ctx.charge((uhi - ulo + 1) as usize)?;
    let mut pts: Vec<[i64; 2]> = Vec::new();
    for t in ulo..=uhi {
        let tt = T::from(t);
        let pairs = sys.rows.iter().zip(&sys.b).map(|(row, bi)| (&row[w], bi.clone() - row[u].clone() * tt.clone()));
        let Some((lo, hi)) = interval(pairs) else { continue };
        let lo = checked_i64(lo.ok_or_else(|| unbounded(w, false))?.into())?;
        let hi = checked_i64(hi.ok_or_else(|| unbounded(w, true))?.into())?;
        pts.push([t, lo]);
        if hi != lo {
            pts.push([t, hi]);
        }
    }
    let hull = monotone_chain(&pts);
    Ok(hull
        .into_iter()
        .map(|p| {
            let mut q = vec![0; 2];
            q[u] = p[0];
            q[w] = p[1];
            q
        })
        .collect())
}

fn cross(o: &[i64; 2], a: &[i64; 2], b: &[i64; 2]) -> i128 {
    let (ax, ay) = ((a[0] - o[0]) as i128, (a[1] - o[1]) as i128);
    let (bx, by) = ((b[0] - o[0]) as i128, (b[1] - o[1]) as i128);
    ax * by - ay * bx
}

/// Strict convex hull of lexicographically sorted points; collinear points
/// are dropped.
pub(crate) fn monotone_chain(pts: &[[i64; 2]]) -> Vec<[i64; 2]> {
    if pts.len() <= 1 {
        return pts.to_vec();
    }
    let mut lower: Vec<[i64; 2]> = Vec::new();
    for p in pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<[i64; 2]> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() == 2 && lower[0] == lower[1] {
        lower.pop();
    }
    lower
}

fn lp_ranges<T: Coef>(sys: &Sys<T>) -> Result<Option<Vec<(i64, i64)>>, HullError> {
    let Some(ls) = to_linear_system(sys) else {
        return Err(unbounded(0, true));
    };
    match ls.axis_ranges() {
        Ok(r) => integer_ranges(&r),
        Err(ModelError::Empty) => Ok(None),
        Err(ModelError::Unbounded { axis, direction }) => Err(HullError::Unbounded { axis, direction }),
        Err(e) => Err(e.into()),
    }
}

fn hull_of_slice<T: Coef>(sys: &Sys<T>, axis: usize, t: i64, ctx: &Ctx) -> Result<Vec<Point>, HullError> {
    match slice(sys, axis, t) {
        None => Ok(vec![]),
        Some(s) => hull(&s, ctx, None),
    }
}

/// Hull in three or more dimensions: union of slice hulls along the shortest
/// axis, pruned by slices along the other axes, then confirmed by LP.
fn hulln<T: Coef>(sys: &Sys<T>, ctx: &Ctx, ranges: Option<Vec<(i64, i64)>>) -> Result<Vec<Point>, HullError> {
    let ranges = match ranges {
        Some(r) => r,
        None => match lp_ranges(sys)? {
            Some(r) => r,
            None => return Ok(vec![]),
        },
    };
    let k = (0..sys.n).min_by_key(|&j| ranges[j].1 - ranges[j].0).expect("n >= 3");
    let (lo, hi) = ranges[k];
    let parts: Vec<Vec<Point>> = (lo..=hi)
        .into_par_iter()
        .map(|t| hull_of_slice(sys, k, t, ctx).map(|vs| lift(vs, k, t).collect()))
        .collect::<Result<_, _>>()?;
    let mut candidates: Vec<Point> = parts.into_iter().flatten().collect();

    for j in (0..sys.n).filter(|&j| j != k) {
        if candidates.len() <= sys.n + 1 {
            break;
        }
        let mut groups: BTreeMap<i64, Vec<Point>> = BTreeMap::new();
        for p in candidates {
            groups.entry(p[j]).or_default().push(p);
        }
        let kept: Vec<Vec<Point>> = groups
            .into_par_iter()
            .map(|(v, group)| {
                if group.len() == 1 {
                    // a lone candidate on this slice is its own hull vertex
                    return Ok(group);
                }
                let verts: HashSet<Point> = hull_of_slice(sys, j, v, ctx)?.into_iter().collect();
                Ok(group
                    .into_iter()
                    .filter(|p| {
                        let mut q = p.clone();
                        q.remove(j);
                        verts.contains(&q)
                    })
                    .collect())
            })
            .collect::<Result<_, HullError>>()?;
        candidates = kept.into_iter().flatten().collect();
    }

    candidates.sort();
    Ok(extreme_points(candidates))
}

/// Extreme points of a sorted, deduplicated point set.
///
/// The lexicographically largest maximizer of a linear functional is always
/// a vertex. Small integer directions seed a set of known vertices; then each
/// candidate outside their hull yields a direction separating it from them,
/// whose maximizer over all candidates is a new vertex. A candidate is
/// settled once it lies in the hull of known vertices or is that maximizer,
/// so the expensive full scans number about as many as the vertices.
fn extreme_points(candidates: Vec<Point>) -> Vec<Point> {
    if candidates.len() <= 2 {
        return candidates;
    }
    let n = candidates[0].len();
    let directions: Vec<Vec<Int>> = (0..n)
        .map(|_| -3i64..=3)
        .multi_cartesian_product()
        .filter(|d| d.iter().any(|&x| x != 0))
        .map(|d| d.into_iter().map(Int::from).collect())
        .collect();
    let mut known: Vec<Point> = directions.par_iter().map(|d| argmax(d, &candidates).clone()).collect();
    known.sort();
    known.dedup();

    let count = candidates.len() as i128;
    let sum: Vec<i128> = (0..n).map(|j| candidates.iter().map(|p| i128::from(p[j])).sum()).collect();
    // squared distance from the centroid, scaled by count²
    let spread = |p: &Point| -> i128 { p.iter().zip(&sum).map(|(&x, s)| (i128::from(x) * count - s).pow(2)).sum() };
    let mut rest: Vec<&Point> = candidates.iter().filter(|p| known.binary_search(p).is_err()).collect();
    rest.sort_by_key(|p| std::cmp::Reverse(spread(p)));

    let batch = 4 * rayon::current_num_threads().max(1);
    for chunk in rest.chunks(batch) {
        let found: Vec<Vec<Point>> = chunk
            .par_iter()
            .map(|p| {
                let mut local = known.clone();
                let mut new = Vec::new();
                while let Some(c) = separating_direction(p, &local) {
                    let v = argmax(&c, &candidates).clone();
                    let done = v == **p;
                    local.push(v.clone());
                    new.push(v);
                    if done {
                        break;
                    }
                }
                new
            })
            .collect();
        known.extend(found.into_iter().flatten());
        known.sort();
        known.dedup();
    }
    known
}

/// Lexicographically largest maximizer of `c · p`.
fn argmax<'a>(c: &[Int], pts: &'a [Point]) -> &'a Point {
    let value = |p: &Point| -> Int { c.iter().zip(p).map(|(a, &b)| a * b).sum() };
    let mut best = &pts[0];
    let mut best_v = value(best);
    for p in &pts[1..] {
        let v = value(p);
        if v > best_v || (v == best_v && p > best) {
            best = p;
            best_v = v;
        }
    }
    best
}

/// An integer `c` with `c · p > c · q` for every `q` in `set`, or `None` when
/// `p` is in the hull of `set`.
fn separating_direction(p: &Point, set: &[Point]) -> Option<Vec<Int>> {
    let lift = |q: &Point| q.iter().map(|&x| Int::from(x)).chain(std::iter::once(Int::one())).collect::<Vec<_>>();
    let cols: Vec<Vec<Int>> = set.iter().map(lift).collect();
    let y = separating_certificate(&cols, &lift(p))?;
    let y = &y[..p.len()];
    let l = y.iter().fold(Int::one(), |l, r| l.lcm(r.denom()));
    Some(y.iter().map(|r| (r * Rat::from_integer(l.clone())).to_integer()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::KnapsackInstance;

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    fn verts(h: &IntegerHull) -> Vec<Vec<i64>> {
        h.vertices.iter().map(|v| v.iter().map(|x| x.to_i64().unwrap()).collect()).collect()
    }

    #[test]
    fn planar_examples() {
        let s = LinearSystem::from_i64(&[&[-1, 0], &[0, -1], &[1, 1]], &[0, 0, 2]).unwrap();
        assert_eq!(verts(&integer_hull_vertices(&s, 1000).unwrap()), vec![vec![0, 0], vec![0, 2], vec![2, 0]]);
        let s = LinearSystem::from_i64(&[&[-1, 0], &[0, -1], &[2, 1]], &[0, 0, 3]).unwrap();
        assert_eq!(verts(&integer_hull_vertices(&s, 1000).unwrap()), vec![vec![0, 0], vec![0, 3], vec![1, 0], vec![1, 1]]);
        let s = LinearSystem::from_i64(&[&[-1, 0], &[0, -1], &[2, 5]], &[0, 0, 23]).unwrap();
        assert_eq!(
            verts(&integer_hull_vertices(&s, 1000).unwrap()),
            vec![vec![0, 0], vec![0, 4], vec![1, 4], vec![4, 3], vec![9, 1], vec![11, 0]]
        );
    }

    #[test]
    fn knapsack_examples() {
        let h = super::super::knapsack_hull_vertices(&KnapsackInstance::from_i64(&[1, 1], 2).unwrap(), 1000).unwrap();
        assert_eq!(h.len(), 3);
        let h = super::super::knapsack_hull_vertices(&KnapsackInstance::from_i64(&[2, 1], 3).unwrap(), 1000).unwrap();
        assert_eq!(h.len(), 4);
        let h = super::super::knapsack_hull_vertices(&KnapsackInstance::from_i64(&[1, 2], 3).unwrap(), 1000).unwrap();
        assert_eq!(verts(&h), vec![vec![0, 0], vec![0, 1], vec![1, 1], vec![3, 0]]);
        let h = super::super::knapsack_hull_vertices(&KnapsackInstance::from_i64(&[4, 2, 1], 7).unwrap(), 1000).unwrap();
        assert_eq!(h.len(), 8);
    }

    #[test]
    fn degenerate_and_empty() {
        let e = LinearSystem::from_i64(&[&[1], &[-1]], &[-1, 0]).unwrap();
        assert!(integer_hull_vertices(&e, 10).unwrap().is_empty());
        // nonempty polygon without integer points
        let s = LinearSystem::from_i64(&[&[2, 0], &[-2, 0], &[0, 1], &[0, -1]], &[1, 0, 1, 0]).unwrap();
        let s = s.with_rows(&[(ints(&[-4, 0]), Int::from(-1))]);
        assert!(integer_hull_vertices(&s, 10).unwrap().is_empty());
        // a segment
        let s = LinearSystem::from_i64(&[&[1, -1], &[-1, 1], &[1, 0], &[-1, 0]], &[0, 0, 3, 0]).unwrap();
        assert_eq!(verts(&integer_hull_vertices(&s, 10).unwrap()), vec![vec![0, 0], vec![3, 3]]);
        // a single point in 3-D
        let s = LinearSystem::from_i64(
            &[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0], &[0, -1, 0], &[0, 0, 1], &[0, 0, -1]],
            &[1, -1, 2, -2, 0, 0],
        )
        .unwrap();
        assert_eq!(verts(&integer_hull_vertices(&s, 10).unwrap()), vec![vec![1, 2, 0]]);
    }

    #[test]
    fn unbounded_is_reported() {
        let s = LinearSystem::from_i64(&[&[-1, 0], &[0, -1]], &[0, 0]).unwrap();
        assert!(matches!(integer_hull_vertices(&s, 10), Err(HullError::Unbounded { .. })));
    }

    #[test]
    fn cap_limits_columns() {
        let s = LinearSystem::from_i64(&[&[-1, 0], &[0, -1], &[1, 1]], &[0, 0, 50]).unwrap();
        assert_eq!(integer_hull_vertices(&s, 10), Err(HullError::CapExceeded { cap: 10 }));
        let (_, stats) = integer_hull_vertices_with(&s, 100).unwrap();
        assert_eq!(stats.columns_scanned, 51);
    }

    #[test]
    fn large_coefficients_take_exact_path() {
        let big = Int::from(1u64 << 62) * Int::from(1u64 << 40);
        let s = LinearSystem::from_rows(
            vec![ints(&[-1, 0]), ints(&[0, -1]), vec![big.clone(), big.clone() * 2]],
            vec![Int::zero(), Int::zero(), big * 3],
        )
        .unwrap();
        // same hull as x + 2y <= 3
        assert_eq!(verts(&integer_hull_vertices(&s, 100).unwrap()), vec![vec![0, 0], vec![0, 1], vec![1, 1], vec![3, 0]]);
    }

    #[test]
    fn chain_handles_collinear_input() {
        assert_eq!(monotone_chain(&[[0, 0], [1, 1], [2, 2]]), vec![[0, 0], [2, 2]]);
        assert_eq!(monotone_chain(&[[0, 0], [0, 0]]), vec![[0, 0]]);
        assert_eq!(monotone_chain(&[[0, 0], [0, 1], [1, 0], [1, 1]]).len(), 4);
    }
}
