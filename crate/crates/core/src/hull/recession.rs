use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::congruence::pareto_minimal_solutions;
use super::engine::integer_hull_vertices;
use super::{HullError, IntegerHull};
use crate::arith::{nonneg_combination_exists, Int};
use crate::model::{CongruenceInstance, LinearSystem};

/// Extra doublings of the truncation bound allowed before giving up.
pub const MAX_DOUBLINGS: u32 = 4;

/// The set whose integer hull is wanted.
#[derive(Debug, Clone, Copy)]
pub enum RecessionSource<'a> {
    /// Integer points of `{x : Ax <= b}`.
    System(&'a LinearSystem),
    /// Nonnegative solutions of a congruence.
    Congruence(&'a CongruenceInstance),
}

/// Parameters of the truncation protocol.
#[derive(Debug, Clone)]
pub struct Truncation {
    /// Starting bound; a default is derived from the data when absent.
    pub initial: Option<Int>,
    /// Clip planes are placed at `center ± T`; the origin by default.
    pub center: Option<Vec<Int>>,
    pub max_doublings: u32,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation { initial: None, center: None, max_doublings: MAX_DOUBLINGS }
    }
}

impl Truncation {
    pub fn with_initial(t: Int) -> Self {
        Truncation { initial: Some(t), ..Truncation::default() }
    }
}

/// Vertices of `conv(S)` for an unbounded set `S` whose hull has recession
/// cone `cone(generators)`.
///
/// Coordinates that some generator increases (decreases) are clipped from
/// above (below) at distance `T` from the center. Points of the clipped hull
/// lying on a clip plane are discarded, and each remaining point `p` is kept
/// when `p` is not in `conv(W \ p) + cone(generators)`. The result is
/// accepted once doubling `T` no longer changes it.
pub fn hull_with_recession(
    source: RecessionSource<'_>,
    generators: &[Vec<Int>],
    cap: usize,
    opts: &Truncation,
) -> Result<IntegerHull, HullError> {
    let n = match source {
        RecessionSource::System(s) => s.n(),
        RecessionSource::Congruence(c) => c.n(),
    };
    if let Some(g) = generators.iter().find(|g| g.len() != n) {
        return Err(HullError::GeneratorDimension(g.clone(), n));
    }
    let center = opts.center.clone().unwrap_or_else(|| vec![Int::zero(); n]);
    let upper: Vec<bool> = (0..n).map(|j| generators.iter().any(|g| g[j].is_positive())).collect();
    let lower: Vec<bool> = (0..n).map(|j| generators.iter().any(|g| g[j].is_negative())).collect();
    let mut t = match &opts.initial {
        Some(t) => t.clone(),
        None => default_bound(source)?,
    };
    let label = match source {
        RecessionSource::System(_) => "system+cone",
        RecessionSource::Congruence(_) => "congruence",
    };

    let clip = Clip { center: &center, upper: &upper, lower: &lower };
    let (mut prev, _) = truncated_vertices(source, generators, cap, &clip, &t)?;
    for _ in 0..=opts.max_doublings {
        t *= 2;
        let (next, clipped_empty) = truncated_vertices(source, generators, cap, &clip, &t)?;
        // an empty answer only counts when the clipped set itself is empty
        if next == prev && (!next.is_empty() || clipped_empty) {
            return Ok(IntegerHull::new(n, next, generators.to_vec(), label));
        }
        prev = next;
    }
    Err(HullError::Unstable { doublings: opts.max_doublings + 1 })
}

/// `2 (n Δ(A) + max |b_i| + 1)` for systems; the modulus for congruences,
/// whose minimal solutions lie in `[0, Δ - 1]^n`.
fn default_bound(source: RecessionSource<'_>) -> Result<Int, HullError> {
    Ok(match source {
        RecessionSource::System(s) => {
            let bmax = s.b().iter().map(Signed::abs).max().unwrap_or_default();
            (s.delta_a()? * Int::from(s.n()) + bmax + 1) * 2
        }
        RecessionSource::Congruence(c) => c.delta().clone(),
    })
}

struct Clip<'a> {
    center: &'a [Int],
    upper: &'a [bool],
    lower: &'a [bool],
}

impl Clip<'_> {
    fn on_boundary(&self, p: &[Int], t: &Int) -> bool {
        (0..p.len()).any(|j| {
            (self.upper[j] && p[j] == &self.center[j] + t) || (self.lower[j] && p[j] == &self.center[j] - t)
        })
    }
}

fn truncated_vertices(
    source: RecessionSource<'_>,
    generators: &[Vec<Int>],
    cap: usize,
    clip: &Clip<'_>,
    t: &Int,
) -> Result<(Vec<Vec<Int>>, bool), HullError> {
    let n = clip.center.len();
    let w: Vec<Vec<Int>> = match source {
        RecessionSource::System(s) => {
            let mut extra = Vec::new();
            for j in 0..n {
                let mut e = vec![Int::zero(); n];
                if clip.upper[j] {
                    e[j] = Int::one();
                    extra.push((e.clone(), &clip.center[j] + t));
                }
                if clip.lower[j] {
                    e[j] = -Int::one();
                    extra.push((e, t - &clip.center[j]));
                }
            }
            integer_hull_vertices(&s.with_rows(&extra), cap)?.vertices
        }
        RecessionSource::Congruence(c) => {
            let hi: Vec<Int> = (0..n).map(|j| if clip.upper[j] { &clip.center[j] + t } else { Int::zero() }).collect();
            pareto_minimal_solutions(c, &hi, cap)?
        }
    };
    Ok((select_vertices(&w, generators, |p| clip.on_boundary(p, t)), w.is_empty()))
}

/// Points of `w`, other than those flagged by `skip`, that are not in
/// `conv(w \ p) + cone(generators)`.
pub(crate) fn select_vertices(w: &[Vec<Int>], generators: &[Vec<Int>], skip: impl Fn(&[Int]) -> bool + Sync) -> Vec<Vec<Int>> {
    let keep: Vec<bool> = w
        .par_iter()
        .map(|p| !skip(p) && !in_conv_plus_cone(p, w, generators))
        .collect();
    w.iter().zip(keep).filter(|(_, k)| *k).map(|(p, _)| p.clone()).collect()
}

/// Whether `p` lies in `conv(points \ p) + cone(generators)`.
pub(crate) fn in_conv_plus_cone(p: &[Int], points: &[Vec<Int>], generators: &[Vec<Int>]) -> bool {
    let mut cols: Vec<Vec<Int>> = points
        .iter()
        .filter(|q| q.as_slice() != p)
        .map(|q| q.iter().cloned().chain(std::iter::once(Int::one())).collect())
        .collect();
    cols.extend(generators.iter().map(|g| g.iter().cloned().chain(std::iter::once(Int::zero())).collect()));
    let rhs: Vec<Int> = p.iter().cloned().chain(std::iter::once(Int::one())).collect();
    nonneg_combination_exists(&cols, &rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::KnapsackInstance;

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn quadrant_with_cut() {
        // x, y >= 0, x + y >= 3 has vertices (3,0), (0,3) and cone e1, e2
        let s = LinearSystem::from_i64(&[&[-1, 0], &[0, -1], &[-1, -1]], &[0, 0, -3]).unwrap();
        let g = vec![ints(&[1, 0]), ints(&[0, 1])];
        let h = hull_with_recession(RecessionSource::System(&s), &g, 100_000, &Truncation::default()).unwrap();
        assert_eq!(h.vertices, vec![ints(&[0, 3]), ints(&[3, 0])]);
    }

    #[test]
    fn relaxed_knapsack_zero_weight() {
        // a = (2, 0), a0 = 3: x1 in {0, 1}, x2 free upward
        let k = KnapsackInstance::relaxed(ints(&[2, 0]), Int::from(3)).unwrap();
        let g = vec![ints(&[0, 1])];
        let h = hull_with_recession(RecessionSource::System(&k.to_system()), &g, 100_000, &Truncation::default()).unwrap();
        assert_eq!(h.vertices, vec![ints(&[0, 0]), ints(&[1, 0])]);
    }

    #[test]
    fn congruence_source() {
        let c = CongruenceInstance::from_i64(&[2, 1], 1, 3).unwrap();
        let g = vec![ints(&[1, 0]), ints(&[0, 1])];
        let h = hull_with_recession(RecessionSource::Congruence(&c), &g, 100_000, &Truncation::default()).unwrap();
        assert_eq!(h.vertices, vec![ints(&[0, 1]), ints(&[2, 0])]);
    }

    #[test]
    fn too_small_start_still_stabilizes() {
        let s = LinearSystem::from_i64(&[&[-1, 0], &[0, -1], &[-1, -1]], &[0, 0, -3]).unwrap();
        let g = vec![ints(&[1, 0]), ints(&[0, 1])];
        let h = hull_with_recession(RecessionSource::System(&s), &g, 100_000, &Truncation::with_initial(Int::from(1))).unwrap();
        assert_eq!(h.len(), 2);
    }

    #[test]
    fn empty_set_is_accepted() {
        let s = LinearSystem::from_i64(&[&[2, 0], &[-2, 0], &[0, -1]], &[1, -1, 0]).unwrap();
        let g = vec![ints(&[0, 1])];
        let h = hull_with_recession(RecessionSource::System(&s), &g, 100_000, &Truncation::with_initial(Int::from(1))).unwrap();
        assert!(h.is_empty());
    }

    #[test]
    fn missing_generator_is_an_error() {
        let s = LinearSystem::from_i64(&[&[-1, 0], &[0, -1], &[-1, -1]], &[0, 0, -3]).unwrap();
        let g = vec![ints(&[1, 0])];
        assert!(matches!(
            hull_with_recession(RecessionSource::System(&s), &g, 100_000, &Truncation::default()),
            Err(HullError::Unbounded { .. })
        ));
        assert!(hull_with_recession(RecessionSource::System(&s), &[ints(&[1])], 10, &Truncation::default()).is_err());
    }
}
