//! Integer points of bounded polyhedra and dyadic cell counting.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{Int, Rat};
use crate::model::{KnapsackInstance, LinearSystem, ModelError};

/// Default limit on the number of enumerated points.
pub const DEFAULT_POINT_CAP: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("more than {cap} integer points")]
    CapExceeded { cap: usize },
    #[error("c[{index}] = floor(a0 / a[{index}]) is zero")]
    ZeroIntercept { index: usize },
}

/// Integer points of a polyhedron in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LatticePointSet(pub Vec<Vec<Int>>);

impl LatticePointSet {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `[ceil(min x_j), floor(max x_j)]` for every axis.
pub fn bounding_box(sys: &LinearSystem) -> Result<Vec<(Int, Int)>, LatticeError> {
    Ok(sys.axis_ranges()?.into_iter().map(|(lo, hi)| (lo.ceil().to_integer(), hi.floor().to_integer())).collect())
}

/// Every integer point of a bounded polyhedron.
///
/// Coordinates are fixed one at a time; the range of the next coordinate is
/// recomputed by LP on the reduced system, and the last one directly from the
/// rows.
pub fn enumerate_integer_points(sys: &LinearSystem, cap: usize) -> Result<LatticePointSet, LatticeError> {
    let bbox = match bounding_box(sys) {
        Ok(b) => b,
        Err(LatticeError::Model(ModelError::Empty)) => return Ok(LatticePointSet::default()),
        Err(e) => return Err(e),
    };
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(sys.n());
    let (lo, hi) = bbox[0].clone();
    descend(sys, &mut prefix, lo, hi, cap, &mut out)?;
    Ok(LatticePointSet(out))
}

fn descend(
    sys: &LinearSystem,
    prefix: &mut Vec<Int>,
    lo: Int,
    hi: Int,
    cap: usize,
    out: &mut Vec<Vec<Int>>,
) -> Result<(), LatticeError> {
    let n = sys.n();
    let k = prefix.len();
    let mut x = lo;
    while x <= hi {
        prefix.push(x.clone());
        if k + 1 == n {
            if sys.contains(prefix) {
                if out.len() == cap {
                    return Err(LatticeError::CapExceeded { cap });
                }
                out.push(prefix.clone());
            }
        } else if let Some((l, h)) = next_range(sys, prefix) {
            descend(sys, prefix, l, h, cap, out)?;
        }
        prefix.pop();
        x += 1;
    }
    Ok(())
}

/// Integer range of the coordinate after `prefix`, or `None` when empty.
fn next_range(sys: &LinearSystem, prefix: &[Int]) -> Option<(Int, Int)> {
    let n = sys.n();
    let k = prefix.len();
    if k + 1 == n {
        return last_axis_range(sys, prefix);
    }
    let rows: Vec<Vec<Int>> = (0..sys.m()).map(|i| sys.row(i)[k..].to_vec()).collect();
    let b: Vec<Int> = (0..sys.m())
        .map(|i| &sys.b()[i] - sys.row(i)[..k].iter().zip(prefix).map(|(a, x)| a * x).sum::<Int>())
        .collect();
    let reduced = LinearSystem::from_rows(rows, b).expect("consistent shape");
    let mut e = vec![Int::zero(); n - k];
    e[0] = Int::one();
    let hi = reduced.maximize(&e).value()?.floor().to_integer();
    e[0] = -Int::one();
    let lo = -reduced.maximize(&e).value()?.clone();
    let lo = lo.ceil().to_integer();
    (lo <= hi).then_some((lo, hi))
}

/// Range of the last coordinate when all others are fixed.
fn last_axis_range(sys: &LinearSystem, prefix: &[Int]) -> Option<(Int, Int)> {
    let k = prefix.len();
    let mut lo: Option<Int> = None;
    let mut hi: Option<Int> = None;
    for i in 0..sys.m() {
        let row = sys.row(i);
        let rest = &sys.b()[i] - row[..k].iter().zip(prefix).map(|(a, x)| a * x).sum::<Int>();
        let c = &row[k];
        if c.is_zero() {
            if rest.is_negative() {
                return None;
            }
        } else if c.is_positive() {
            let v = rest.div_floor(c);
            hi = Some(hi.map_or(v.clone(), |h| h.min(v)));
        } else {
            let v = rest.div_ceil(c);
            lo = Some(lo.map_or(v.clone(), |l| l.max(v)));
        }
    }
    let (lo, hi) = (lo?, hi?);
    (lo <= hi).then_some((lo, hi))
}

/// A half-open box; axis `j` spans `[0, 1)` for index 0 and
/// `[2^(i-1), 2^i)` for index `i >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyadicCell(pub Vec<u32>);

impl DyadicCell {
    /// Half-open extent `[lo, hi)` of axis `j`.
    pub fn interval(&self, j: usize) -> (Int, Int) {
        match self.0[j] {
            0 => (Int::zero(), Int::one()),
            i => (Int::one() << (i - 1), Int::one() << i),
        }
    }

    /// The cell containing a nonnegative integer point.
    pub fn containing(x: &[Int]) -> DyadicCell {
        DyadicCell(x.iter().map(|v| if v.is_zero() { 0 } else { v.bits() as u32 }).collect())
    }

    pub fn contains(&self, x: &[Int]) -> bool {
        x.iter().enumerate().all(|(j, v)| {
            let (lo, hi) = self.interval(j);
            lo <= *v && *v < hi
        })
    }

    /// Whether the cell meets `{x >= 0 : sum x_j / c_j = 1}`.
    ///
    /// The linear form is increasing in every coordinate, so on the half-open
    /// box it takes exactly the values in `[sum lo_j / c_j, sum hi_j / c_j)`.
    pub fn meets_hyperplane(&self, c: &[Int]) -> bool {
        let mut low = Rat::zero();
        let mut high = Rat::zero();
        for (j, cj) in c.iter().enumerate() {
            let (lo, hi) = self.interval(j);
            low += Rat::new(lo, cj.clone());
            high += Rat::new(hi, cj.clone());
        }
        low <= Rat::one() && Rat::one() < high
    }
}

/// Largest cell index on axis `j`: the least integer `t >= 1 + log2(a0/a_j + 1)`.
pub fn max_cell_index(a0: &Int, aj: &Int) -> u32 {
    let target = a0 + aj;
    let mut t = 1u32;
    while aj * (Int::one() << (t - 1)) < target {
        t += 1;
    }
    t
}

/// Intercepts `c_j = floor(a0 / a_j)` of a knapsack.
pub fn intercepts(k: &KnapsackInstance) -> Result<Vec<Int>, LatticeError> {
    k.a()
        .iter()
        .enumerate()
        .map(|(index, aj)| {
            if aj.is_zero() {
                return Err(LatticeError::ZeroIntercept { index });
            }
            let c = k.a0() / aj;
            if c.is_zero() { Err(LatticeError::ZeroIntercept { index }) } else { Ok(c) }
        })
        .collect()
}

/// Cells, including the `[0, 1)` cells, meeting the hyperplane through the
/// axis intercepts.
pub fn cells_meeting_hyperplane(k: &KnapsackInstance) -> Result<Vec<DyadicCell>, LatticeError> {
    let c = intercepts(k)?;
    let maxes: Vec<u32> = k.a().iter().map(|aj| max_cell_index(k.a0(), aj)).collect();
    let mut out = Vec::new();
    let mut idx = vec![0u32; c.len()];
    loop {
        let cell = DyadicCell(idx.clone());
        if cell.meets_hyperplane(&c) {
            out.push(cell);
        }
        // odometer increment
        let mut j = 0;
        loop {
            if j == idx.len() {
                return Ok(out);
            }
            if idx[j] < maxes[j] {
                idx[j] += 1;
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

pub fn count_boxes_meeting_hyperplane(k: &KnapsackInstance) -> Result<usize, LatticeError> {
    Ok(cells_meeting_hyperplane(k)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    fn sys(rows: &[&[i64]], b: &[i64]) -> LinearSystem {
        LinearSystem::from_i64(rows, b).unwrap()
    }

    #[test]
    fn bounding_box_examples() {
        let t = sys(&[&[-1, 0], &[0, -1], &[1, 1]], &[0, 0, 2]);
        assert_eq!(bounding_box(&t).unwrap(), vec![(Int::from(0), Int::from(2)), (Int::from(0), Int::from(2))]);
        let t = sys(&[&[-1, 0], &[0, -1], &[2, 5]], &[0, 0, 23]);
        assert_eq!(bounding_box(&t).unwrap(), vec![(Int::from(0), Int::from(11)), (Int::from(0), Int::from(4))]);
        let e = sys(&[&[1], &[-1]], &[-1, 0]);
        assert_eq!(bounding_box(&e), Err(LatticeError::Model(ModelError::Empty)));
        let u = sys(&[&[-1, 0]], &[0]);
        assert!(matches!(bounding_box(&u), Err(LatticeError::Model(ModelError::Unbounded { .. }))));
    }

    #[test]
    fn enumeration_examples() {
        let t = sys(&[&[-1, 0], &[0, -1], &[1, 1]], &[0, 0, 1]);
        assert_eq!(enumerate_integer_points(&t, 100).unwrap().0, vec![ints(&[0, 0]), ints(&[0, 1]), ints(&[1, 0])]);
        let t = sys(&[&[-1, 0], &[0, -1], &[2, 1]], &[0, 0, 3]);
        assert_eq!(enumerate_integer_points(&t, 100).unwrap().len(), 6);
        let e = sys(&[&[1], &[-1]], &[-1, 0]);
        assert!(enumerate_integer_points(&e, 100).unwrap().is_empty());
        assert_eq!(enumerate_integer_points(&t, 5), Err(LatticeError::CapExceeded { cap: 5 }));
    }

    #[test]
    fn fractional_slices_skip_empty_columns() {
        // thin sliver with no integer point in the middle column
        let s = sys(&[&[5, -3], &[-5, 3]], &[1, 0]);
        let s = s.with_rows(&[(ints(&[1, 0]), Int::from(4)), (ints(&[-1, 0]), Int::from(0))]);
        let pts = enumerate_integer_points(&s, 100).unwrap();
        assert_eq!(pts.0, vec![ints(&[0, 0]), ints(&[2, 3]), ints(&[3, 5])]);
    }

    #[test]
    fn cell_count_examples() {
        let k = KnapsackInstance::from_i64(&[1, 1], 2).unwrap();
        assert_eq!(count_boxes_meeting_hyperplane(&k).unwrap(), 5);
        let k = KnapsackInstance::from_i64(&[1], 1).unwrap();
        assert_eq!(count_boxes_meeting_hyperplane(&k).unwrap(), 1);
        let k = KnapsackInstance::from_i64(&[3, 1], 2).unwrap();
        assert_eq!(count_boxes_meeting_hyperplane(&k), Err(LatticeError::ZeroIntercept { index: 0 }));
    }

    #[test]
    fn cells_partition_axes() {
        for v in 0..200i64 {
            let x = ints(&[v]);
            let c = DyadicCell::containing(&x);
            assert!(c.contains(&x));
            if c.0[0] > 0 {
                assert!(!DyadicCell(vec![c.0[0] - 1]).contains(&x));
            }
            assert!(!DyadicCell(vec![c.0[0] + 1]).contains(&x));
        }
        assert_eq!(max_cell_index(&Int::from(2), &Int::from(1)), 3);
        assert_eq!(max_cell_index(&Int::from(1), &Int::from(1)), 2);
    }

    /// Nested loops over `a · x <= a0, x >= 0` for n <= 3.
    fn knapsack_count(a: &[i64], a0: i64) -> usize {
        let mut count = 0;
        let r = |j: usize| 0..=(if j < a.len() { a0 / a[j] } else { 0 });
        for x in r(0) {
            for y in r(1) {
                for z in r(2) {
                    let xs = [x, y, z];
                    if a.iter().zip(xs).map(|(p, q)| p * q).sum::<i64>() <= a0 {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    proptest! {
        #[test]
        fn knapsack_point_count_matches_loops(a in prop::collection::vec(1i64..=6, 1..=3), a0 in 0i64..=30) {
            let k = KnapsackInstance::from_i64(&a, a0).unwrap();
            let pts = enumerate_integer_points(&k.to_system(), DEFAULT_POINT_CAP).unwrap();
            prop_assert_eq!(pts.len(), knapsack_count(&a, a0));
            for w in pts.0.windows(2) {
                prop_assert!(w[0] < w[1]);
            }
        }

        #[test]
        fn enumeration_ignores_axis_order(
            rows in prop::collection::vec((-4i64..=4, -4i64..=4, -4i64..=4), 1..=4),
            rhs in prop::collection::vec(-6i64..=6, 4),
        ) {
            let mut all: Vec<(Vec<Int>, Int)> = rows.iter().zip(&rhs).map(|(&(p, q, r), &c)| (ints(&[p, q, r]), Int::from(c))).collect();
            for j in 0..3 {
                let mut e = vec![0i64; 3];
                e[j] = 1;
                all.push((ints(&e), Int::from(4)));
                e[j] = -1;
                all.push((ints(&e), Int::from(4)));
            }
            let s = LinearSystem::from_rows(all.iter().map(|r| r.0.clone()).collect(), all.iter().map(|r| r.1.clone()).collect()).unwrap();
            let perm = [2usize, 0, 1];
            let t = LinearSystem::from_rows(
                all.iter().map(|r| perm.iter().map(|&j| r.0[j].clone()).collect()).collect(),
                all.iter().map(|r| r.1.clone()).collect(),
            ).unwrap();
            let mut a = enumerate_integer_points(&s, DEFAULT_POINT_CAP).unwrap().0;
            let mut b: Vec<Vec<Int>> = enumerate_integer_points(&t, DEFAULT_POINT_CAP).unwrap().0
                .into_iter()
                .map(|p| { let mut q = vec![Int::zero(); 3]; for (k, &j) in perm.iter().enumerate() { q[j] = p[k].clone(); } q })
                .collect();
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
        }
    }
}
