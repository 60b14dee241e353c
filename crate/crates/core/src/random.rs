//! Seeded generators for random test instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::Int;
use crate::lattice::enumerate_integer_points;
use crate::model::{KnapsackInstance, LinearSystem};

/// Shape of random systems `A x <= b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SystemShape {
    pub n_min: usize,
    pub n_max: usize,
    /// Rows per system, drawn from `[n + 1, m_max]`.
    pub m_max: usize,
    /// Entries of `A` lie in `[-alpha, alpha]`.
    pub alpha: i64,
    /// Row slack over a random anchor point lies in `[0, slack]`.
    pub slack: i64,
    /// Reject systems with more integer points than this.
    pub point_limit: usize,
}

impl Default for SystemShape {
    fn default() -> Self {
        SystemShape { n_min: 1, n_max: 3, m_max: 6, alpha: 8, slack: 12, point_limit: 1000 }
    }
}

/// One candidate system; the anchor point keeps it nonempty.
fn candidate(rng: &mut ChaCha8Rng, shape: &SystemShape) -> LinearSystem {
    let n = rng.gen_range(shape.n_min..=shape.n_max);
    let m = rng.gen_range(n + 1..=shape.m_max.max(n + 1));
    let anchor: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
    let mut rows = Vec::with_capacity(m);
    let mut b = Vec::with_capacity(m);
    for _ in 0..m {
        let row: Vec<i64> = loop {
            let r: Vec<i64> = (0..n).map(|_| rng.gen_range(-shape.alpha..=shape.alpha)).collect();
            if r.iter().any(|&x| x != 0) {
                break r;
            }
        };
        let at: i64 = row.iter().zip(&anchor).map(|(a, x)| a * x).sum();
        b.push(Int::from(at + rng.gen_range(0..=shape.slack)));
        rows.push(row.into_iter().map(Int::from).collect());
    }
    LinearSystem::from_rows(rows, b).expect("consistent shape")
}

/// `count` bounded, full-rank random systems with at most
/// `shape.point_limit` integer points each, reproducible from `seed`.
pub fn random_bounded_systems(shape: &SystemShape, count: usize, seed: u64) -> Vec<LinearSystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let s = candidate(&mut rng, shape);
        if s.rank() < s.n() || s.axis_ranges().is_err() {
            continue;
        }
        if enumerate_integer_points(&s, shape.point_limit).is_ok() {
            out.push(s);
        }
    }
    out
}

/// Knapsacks with `n` drawn from `dims`, weights in `[1, a_max]` and
/// `a0 = α1 (α1 - 1) + r` for `r` in `[0, r_max]`.
pub fn random_threshold_knapsacks(dims: &[usize], a_max: i64, r_max: i64, count: usize, seed: u64) -> Vec<KnapsackInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = dims[rng.gen_range(0..dims.len())];
            let a: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=a_max)).collect();
            let alpha1 = *a.iter().max().expect("n >= 1");
            let a0 = alpha1 * (alpha1 - 1) + rng.gen_range(0..=r_max);
            KnapsackInstance::from_i64(&a, a0).expect("positive weights")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn systems_are_reproducible_and_valid() {
        let shape = SystemShape::default();
        let a = random_bounded_systems(&shape, 10, 3);
        assert_eq!(a, random_bounded_systems(&shape, 10, 3));
        for s in &a {
            assert!(s.n() <= 3 && s.m() <= 6 && s.m() > s.n());
            assert!(s.alpha() <= Int::from(8));
            assert_eq!(s.rank(), s.n());
            let pts = enumerate_integer_points(s, 1000).unwrap();
            assert!(!pts.is_empty());
        }
    }

    #[test]
    fn knapsacks_meet_threshold() {
        for k in random_threshold_knapsacks(&[2, 3], 6, 10, 30, 1) {
            let alpha1 = k.alpha1();
            assert!(*k.a0() >= &alpha1 * (&alpha1 - 1));
            assert!(k.a().iter().all(|x| *x >= Int::from(1) && *x <= Int::from(6)));
        }
    }
}
