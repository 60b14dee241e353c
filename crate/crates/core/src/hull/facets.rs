use itertools::Itertools;
use num_integer::Integer;
use num_traits::Zero;

use super::{HullError, IntegerHull};
use crate::arith::{rank, Int, IntMatrix};

fn sub(a: &[Int], b: &[Int]) -> Vec<Int> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn affine_rank(pts: &[Vec<Int>]) -> usize {
    if pts.len() < 2 {
        return 0;
    }
    let diffs: Vec<Vec<Int>> = pts[1..].iter().map(|p| sub(p, &pts[0])).collect();
    rank(&IntMatrix::from_rows(diffs).expect("uniform width"))
}

fn cross3(u: &[Int], v: &[Int]) -> [Int; 3] {
    [
        &u[1] * &v[2] - &u[2] * &v[1],
        &u[2] * &v[0] - &u[0] * &v[2],
        &u[0] * &v[1] - &u[1] * &v[0],
    ]
}

/// Number of facets of a bounded, full-dimensional hull in dimension at most 3.
pub fn facet_count(h: &IntegerHull) -> Result<usize, HullError> {
    if !h.recession_generators.is_empty() {
        return Err(HullError::HasRecession);
    }
    let n = h.dimension;
    if n > 3 {
        return Err(HullError::DimensionTooLarge(n));
    }
    let v = &h.vertices;
    if v.len() <= n || affine_rank(v) < n {
        return Err(HullError::NotFullDimensional);
    }
    Ok(match n {
        1 => 2,
        2 => v.len(),
        _ => {
            let mut planes: Vec<([Int; 3], Int)> = Vec::new();
            for (p, q, r) in v.iter().tuple_combinations() {
                let c = cross3(&sub(q, p), &sub(r, p));
                if c.iter().all(Zero::is_zero) {
                    continue;
                }
                let g = c.iter().fold(Int::zero(), |g, x| g.gcd(x));
                let mut c = c.map(|x| x / &g);
                let level = |x: &[Int]| -> Int { c.iter().zip(x).map(|(a, b)| a * b).sum() };
                let mut d = level(p);
                let above = v.iter().any(|x| level(x) > d);
                let below = v.iter().any(|x| level(x) < d);
                if above && below {
                    continue;
                }
                if above {
                    c = c.map(|x| -x);
                    d = -d;
                }
                if !planes.iter().any(|(pc, pd)| *pc == c && *pd == d) {
                    planes.push((c, d));
                }
            }
            planes.len()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hull(dim: usize, pts: &[&[i64]]) -> IntegerHull {
        let v = pts.iter().map(|p| p.iter().map(|&x| Int::from(x)).collect()).collect();
        IntegerHull::new(dim, v, vec![], "test")
    }

    #[test]
    fn planar_counts() {
        assert_eq!(facet_count(&hull(2, &[&[0, 0], &[2, 0], &[0, 2]])).unwrap(), 3);
        assert_eq!(facet_count(&hull(2, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])).unwrap(), 4);
    }

    #[test]
    fn solid_counts() {
        let cube: Vec<Vec<i64>> = (0..8).map(|m| vec![m & 1, (m >> 1) & 1, (m >> 2) & 1]).collect();
        let refs: Vec<&[i64]> = cube.iter().map(Vec::as_slice).collect();
        assert_eq!(facet_count(&hull(3, &refs)).unwrap(), 6);
        assert_eq!(facet_count(&hull(3, &[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap(), 4);
    }

    #[test]
    fn degenerate_inputs_error() {
        assert_eq!(facet_count(&hull(2, &[&[0, 0], &[1, 1], &[2, 2]])), Err(HullError::NotFullDimensional));
        assert_eq!(facet_count(&hull(1, &[&[3]])), Err(HullError::NotFullDimensional));
        assert_eq!(facet_count(&hull(4, &[&[0, 0, 0, 0]])), Err(HullError::DimensionTooLarge(4)));
        let mut h = hull(2, &[&[0, 0], &[1, 0], &[0, 1]]);
        h.recession_generators.push(vec![Int::from(1), Int::from(0)]);
        assert_eq!(facet_count(&h), Err(HullError::HasRecession));
    }
}
