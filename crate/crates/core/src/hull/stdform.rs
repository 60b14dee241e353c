use itertools::Itertools;
use num_traits::{One, Zero};

use super::engine::integer_hull_vertices;
use super::recession::select_vertices;
use super::{HullError, IntegerHull};
use crate::arith::Int;
use crate::model::LinearSystem;

/// Vertices of the integer hull of the standard-form system
/// `A x' - A x'' + y = b`, `(x', x'', y) >= 0`, for a bounded source system.
///
/// Every integer solution is `(x⁺, x⁻, b - Ax) + Σ t_j (e_j, e_j, 0)` for an
/// integer point `x` of the source, so the hull has recession cone generated
/// by `(e_j, e_j, 0)` and its vertices are images of source points. The
/// image map is linear on each closed orthant, so only vertices of the
/// integer hull of the source cut to an orthant can map to vertices.
pub fn standard_form_vertices(sys: &LinearSystem, cap: usize) -> Result<IntegerHull, HullError> {
    let sf = sys.to_standard_form();
    let (n, m) = (sys.n(), sys.m());
    let mut candidates: Vec<Vec<Int>> = Vec::new();
    for signs in (0..n).map(|_| [Int::one(), -Int::one()]).multi_cartesian_product() {
        // sign_j * x_j >= 0
        let extra: Vec<(Vec<Int>, Int)> = (0..n)
            .map(|j| ((0..n).map(|c| if c == j { -signs[j].clone() } else { Int::zero() }).collect(), Int::zero()))
            .collect();
        candidates.extend(integer_hull_vertices(&sys.with_rows(&extra), cap)?.vertices);
    }
    let images: Vec<Vec<Int>> = candidates.iter().unique().map(|x| sf.map_point(x)).collect();
    let gens: Vec<Vec<Int>> = (0..n)
        .map(|j| (0..2 * n + m).map(|c| if c == j || c == n + j { Int::one() } else { Int::zero() }).collect())
        .collect();
    let vertices = select_vertices(&images, &gens, |_| false);
    Ok(IntegerHull::new(2 * n + m, vertices, gens, "standard form"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hull::has_separation_property;

    #[test]
    fn interval_system() {
        // -2 <= x <= 3: images (x⁺, x⁻, 3 - x, x + 2)
        let s = LinearSystem::from_i64(&[&[1], &[-1]], &[3, 2]).unwrap();
        let h = standard_form_vertices(&s, 1000).unwrap();
        let v: Vec<Vec<i64>> = h.vertices.iter().map(|p| p.iter().map(|x| i64::try_from(x).unwrap()).collect()).collect();
        assert_eq!(v, vec![vec![0, 0, 3, 2], vec![0, 2, 5, 0], vec![3, 0, 0, 5]]);
        assert!(has_separation_property(&h.vertices).unwrap().holds);
    }

    #[test]
    fn matches_selection_over_all_images() {
        let shape = crate::random::SystemShape { point_limit: 300, ..Default::default() };
        for s in crate::random::random_bounded_systems(&shape, 25, 11) {
            let sf = s.to_standard_form();
            let pts = crate::lattice::enumerate_integer_points(&s, 300).unwrap();
            let images: Vec<Vec<Int>> = pts.0.iter().map(|x| sf.map_point(x)).collect();
            let h = standard_form_vertices(&s, 100_000).unwrap();
            let mut all = select_vertices(&images, &h.recession_generators, |_| false);
            all.sort();
            assert_eq!(h.vertices, all, "{s:?}");
        }
    }

    #[test]
    fn images_are_feasible() {
        let s = LinearSystem::from_i64(&[&[2, 1], &[-1, 3], &[-1, -1]], &[7, 6, 4]).unwrap();
        let h = standard_form_vertices(&s, 10_000).unwrap();
        let sf = s.to_standard_form();
        assert!(!h.is_empty());
        assert!(h.vertices.iter().all(|z| sf.is_feasible(z)));
        assert!(has_separation_property(&h.vertices).unwrap().holds);
    }
}
