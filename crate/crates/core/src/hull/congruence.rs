use itertools::Itertools;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::recession::select_vertices;
use super::{HullError, IntegerHull};
use crate::arith::Int;
use crate::model::CongruenceInstance;

/// Vertices of the convex hull of the nonnegative solutions of
/// `a · x ≡ a0 (mod Δ)`.
///
/// Subtracting `Δ e_j` from a solution with `x_j >= Δ` gives another
/// solution, so every minimal solution lies in `[0, Δ-1]^n` and the hull is
/// the hull of those minimal points plus the nonnegative orthant.
pub fn congruence_hull_vertices(c: &CongruenceInstance, cap: usize) -> Result<IntegerHull, HullError> {
    let n = c.n();
    let top = c.delta() - Int::one();
    let minimal = pareto_minimal_solutions(c, &vec![top; n], cap)?;
    let orthant = unit_vectors(n);
    let vertices = select_vertices(&minimal, &orthant, |_| false);
    Ok(IntegerHull::new(n, vertices, orthant, "congruence"))
}

pub(crate) fn unit_vectors(n: usize) -> Vec<Vec<Int>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
        .collect()
}

/// Componentwise-minimal solutions inside the box `[0, hi]`.
pub(crate) fn pareto_minimal_solutions(c: &CongruenceInstance, hi: &[Int], cap: usize) -> Result<Vec<Vec<Int>>, HullError> {
    let n = c.n();
    let delta = c.delta();
    let reduce = |x: &Int| x.mod_floor(delta);
    // a coefficient invertible mod Δ fixes its variable from the others
    let unit = (0..n).find(|&j| c.a()[j].gcd(delta).is_one());
    let free: Vec<usize> = (0..n).filter(|&j| Some(j) != unit).collect();

    let mut size = 1usize;
    for &j in &free {
        let len = (&hi[j] + 1u32).to_usize().filter(|&l| l > 0).ok_or(HullError::CapExceeded { cap })?;
        size = size.checked_mul(len).filter(|&s| s <= cap).ok_or(HullError::CapExceeded { cap })?;
    }

    let inverse = unit.map(|u| {
        let g = reduce(&c.a()[u]).extended_gcd(delta);
        (u, reduce(&g.x))
    });
    let axes = free.iter().map(|&j| {
        let top = hi[j].to_u64().unwrap_or(0);
        (0..=top).map(Int::from)
    });
    let mut found: Vec<Vec<Int>> = Vec::new();
    for values in axes.multi_cartesian_product().chain(free.is_empty().then(Vec::new)) {
        let mut x = vec![Int::zero(); n];
        for (&j, v) in free.iter().zip(values) {
            x[j] = v;
        }
        match &inverse {
            Some((u, inv)) => {
                let rest: Int = free.iter().map(|&j| &c.a()[j] * &x[j]).sum();
                let xu = reduce(&((c.a0() - rest) * inv));
                if xu > hi[*u] {
                    continue;
                }
                x[*u] = xu;
            }
            None if !c.is_solution(&x) => continue,
            None => {}
        }
        found.push(x);
    }
    Ok(pareto_filter(found))
}

fn dominates(q: &[Int], p: &[Int]) -> bool {
    q != p && q.iter().zip(p).all(|(a, b)| a <= b)
}

/// Points not dominated componentwise by another point of the set.
pub(crate) fn pareto_filter(mut pts: Vec<Vec<Int>>) -> Vec<Vec<Int>> {
    pts.sort();
    pts.dedup();
    // a dominating point sorts lexicographically before the point it dominates
    let mut kept: Vec<Vec<Int>> = Vec::new();
    for p in pts {
        if !kept.iter().any(|q| dominates(q, &p)) {
            kept.push(p);
        }
    }
    kept
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn small_example() {
        let c = CongruenceInstance::from_i64(&[2, 1], 1, 3).unwrap();
        let h = congruence_hull_vertices(&c, 1000).unwrap();
        assert_eq!(h.vertices, vec![ints(&[0, 1]), ints(&[2, 0])]);
        assert_eq!(h.recession_generators.len(), 2);
    }

    #[test]
    fn exhaustive_delta_two() {
        let counts: Vec<usize> = [(0, 0), (0, 1), (1, 0), (1, 1)]
            .iter()
            .map(|&(a1, a0)| {
                let c = CongruenceInstance::from_i64(&[a1, 1], a0, 2).unwrap();
                congruence_hull_vertices(&c, 1000).unwrap().len()
            })
            .collect();
        assert_eq!(counts, vec![1, 1, 1, 2]);
    }

    #[test]
    fn no_unit_coefficient() {
        // 2x + 4y ≡ 2 (mod 6): x + 2y ≡ 1 (mod 3)
        let c = CongruenceInstance::from_i64(&[2, 4], 2, 6).unwrap();
        let h = congruence_hull_vertices(&c, 1000).unwrap();
        assert_eq!(h.vertices, vec![ints(&[0, 2]), ints(&[1, 0])]);
    }

    #[test]
    fn cap_is_enforced() {
        let c = CongruenceInstance::from_i64(&[1, 1, 1], 0, 100).unwrap();
        assert_eq!(congruence_hull_vertices(&c, 50), Err(HullError::CapExceeded { cap: 50 }));
    }

    proptest! {
        #[test]
        fn unit_solver_matches_brute_force(a1 in 0i64..7, a2 in 0i64..7, a0 in 0i64..7) {
            let c = CongruenceInstance::from_i64(&[a1, a2], a0, 7).unwrap();
            let brute: Vec<Vec<Int>> = (0..7)
                .flat_map(|x| (0..7).map(move |y| ints(&[x, y])))
                .filter(|x| c.is_solution(x))
                .collect();
            let top = ints(&[6, 6]);
            prop_assert_eq!(pareto_minimal_solutions(&c, &top, 1000).unwrap(), pareto_filter(brute));
        }
    }
}
