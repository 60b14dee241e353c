use itertools::Itertools;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::engine::integer_hull_vertices;
use super::recession::{hull_with_recession, RecessionSource, Truncation};
use super::{HullError, IntegerHull};
use crate::arith::{binomial, det, Int, Rat};
use crate::model::{KnapsackInstance, LinearSystem, ModelError};

/// The sets `N_0, ..., N_n` covering the knapsack vertex set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    /// `parts[0] = {0}`; `parts[i]` leaves `x_i` unrestricted in sign.
    pub parts: Vec<IntegerHull>,
    /// Whether `a0 >= α1 (α1 - 1)`, under which the union covers the hull.
    pub threshold_met: bool,
}

impl Decomposition {
    /// Sorted union of all parts.
    pub fn union(&self) -> Vec<Vec<Int>> {
        self.parts.iter().flat_map(|h| h.vertices.iter().cloned()).sorted().dedup().collect()
    }

    /// `binomial(floor(log2 a_i) + n - 1, n - 1)` for each `i >= 1`.
    pub fn part_bounds(k: &KnapsackInstance) -> Vec<Int> {
        let n = k.n() as u64;
        k.a().iter().map(|ai| binomial(ai.bits().saturating_sub(1) + n - 1, n - 1)).collect()
    }

    /// Indices `i` whose part exceeds its binomial bound.
    pub fn oversized_parts(&self, k: &KnapsackInstance) -> Vec<usize> {
        Self::part_bounds(k)
            .iter()
            .enumerate()
            .filter(|(i, b)| Int::from(self.parts[i + 1].len()) > **b)
            .map(|(i, _)| i + 1)
            .collect()
    }
}

fn primitive(v: Vec<Int>) -> Vec<Int> {
    let g = v.iter().fold(Int::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        return v;
    }
    v.into_iter().map(|x| x / &g).collect()
}

/// Extreme rays of the recession cone of `{x : x_j >= 0 (j != i), a · x <= a0}`
/// (0-based `i`): `-e_i` and the primitive part of `a_i e_j - a_j e_i`.
pub fn relaxed_recession_generators(a: &[Int], i: usize) -> Vec<Vec<Int>> {
    let n = a.len();
    let mut gens = Vec::with_capacity(n);
    let mut down = vec![Int::zero(); n];
    down[i] = -Int::one();
    gens.push(down);
    for j in (0..n).filter(|&j| j != i) {
        let mut g = vec![Int::zero(); n];
        g[j] = a[i].clone();
        g[i] = -a[j].clone();
        gens.push(primitive(g));
    }
    gens
}

/// The system `{x_j >= 0 (j != i), a · x <= a0}`.
pub(crate) fn relaxed_system(k: &KnapsackInstance, i: usize) -> LinearSystem {
    let n = k.n();
    let rows: Vec<(Vec<Int>, Int)> = (0..n)
        .filter(|&j| j != i)
        .map(|j| ((0..n).map(|c| if c == j { -Int::one() } else { Int::zero() }).collect(), Int::zero()))
        .chain(std::iter::once((k.a().to_vec(), k.a0().clone())))
        .collect();
    let (a, b): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
    LinearSystem::from_rows(a, b).expect("consistent shape")
}

/// Computes `N_0 = {0}` and, for each `i`, the vertex set of the hull of
/// `{x in Z^n : x_j >= 0 (j != i), a · x <= a0}`.
pub fn theorem4_decomposition(k: &KnapsackInstance, cap: usize) -> Result<Decomposition, HullError> {
    if let Some(j) = k.a().iter().position(Zero::is_zero) {
        return Err(HullError::ZeroWeight(j));
    }
    let n = k.n();
    let alpha1 = k.alpha1();
    let threshold_met = *k.a0() >= &alpha1 * (&alpha1 - 1);
    let mut parts = vec![IntegerHull::new(n, vec![vec![Int::zero(); n]], vec![], "N_0")];
    for i in 0..n {
        let sys = relaxed_system(k, i);
        let gens = relaxed_recession_generators(k.a(), i);
        let mut h = hull_with_recession(RecessionSource::System(&sys), &gens, cap, &Truncation::default())?;
        h.source = format!("N_{}", i + 1);
        parts.push(h);
    }
    Ok(Decomposition { parts, threshold_met })
}

/// Hull of `{x in Z^n : x >= 0, a · x <= a0}` when weights may be zero; each
/// zero-weight coordinate contributes the ray `e_j`.
pub fn relaxed_knapsack_hull(k: &KnapsackInstance, cap: usize) -> Result<IntegerHull, HullError> {
    let n = k.n();
    let gens: Vec<Vec<Int>> = (0..n)
        .filter(|&j| k.a()[j].is_zero())
        .map(|j| (0..n).map(|c| if c == j { Int::one() } else { Int::zero() }).collect())
        .collect();
    let sys = k.to_system();
    let mut h = if gens.is_empty() {
        integer_hull_vertices(&sys, cap)?
    } else {
        hull_with_recession(RecessionSource::System(&sys), &gens, cap, &Truncation::default())?
    };
    h.source = "knapsack".into();
    Ok(h)
}

/// Vertices of `N(A, b)` matched to the rational vertex `v` whose shifted
/// subsystem `M(v)` produced them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InclusionReport {
    pub vertices: Vec<Vec<Int>>,
    pub rational_vertices: Vec<Vec<Rat>>,
    /// For each vertex, the index of a rational vertex covering it.
    pub witness: Vec<Option<usize>>,
}

impl InclusionReport {
    pub fn holds(&self) -> bool {
        self.witness.iter().all(Option::is_some)
    }
}

/// Extreme rays of the pointed cone `{r : A r <= 0}` from null vectors of
/// rank-`(n-1)` row subsets.
pub(crate) fn cone_rays(sys: &LinearSystem) -> Vec<Vec<Int>> {
    let n = sys.n();
    if n == 1 {
        return [Int::one(), -Int::one()]
            .into_iter()
            .map(|s| vec![s])
            .filter(|r| (0..sys.m()).all(|i| !(&sys.row(i)[0] * &r[0]).is_positive()))
            .collect();
    }
    let mut rays: Vec<Vec<Int>> = Vec::new();
    for rows in (0..sys.m()).combinations(n - 1) {
        let sub: Vec<Vec<Int>> = rows.iter().map(|&i| sys.row(i).to_vec()).collect();
        // cofactor expansion along a phantom first row gives a null vector
        let r: Vec<Int> = (0..n)
            .map(|j| {
                let minor: Vec<Vec<Int>> =
                    sub.iter().map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect()).collect();
                let d = det(&minor);
                if j % 2 == 0 { d } else { -d }
            })
            .collect();
        if r.iter().all(Zero::is_zero) {
            continue;
        }
        let r = primitive(r);
        for cand in [r.clone(), r.iter().map(|x| -x).collect::<Vec<_>>()] {
            let inside = (0..sys.m()).all(|i| !crate::model::dot(sys.row(i), &cand).is_positive());
            if inside && !rays.contains(&cand) {
                rays.push(cand);
            }
        }
    }
    rays
}

/// Checks that every vertex of `N(A, b)` is a vertex of the integer hull of
/// some `M(v)`, shifted back by `round(v)`.
pub fn inclusion_witnesses(sys: &LinearSystem, cap: usize) -> Result<InclusionReport, HullError> {
    let vertices = integer_hull_vertices(sys, cap)?.vertices;
    let rational = match sys.rational_vertices() {
        Ok(v) => v.0,
        Err(ModelError::Empty) => vec![],
        Err(e) => return Err(e.into()),
    };
    let mut witness = vec![None; vertices.len()];
    for (idx, v) in rational.iter().enumerate() {
        if witness.iter().all(Option::is_some) {
            break;
        }
        let shifted = sys.shift_by_rounded_vertex(v)?;
        let shift = crate::model::round_half_away(v);
        let local = match integer_hull_vertices(&shifted, cap) {
            Ok(h) => h.vertices,
            Err(HullError::Unbounded { .. }) => {
                let rays = cone_rays(&shifted);
                let reach: Int = rays
                    .iter()
                    .flat_map(|r| r.iter().map(Signed::abs))
                    .sum::<Int>();
                let vmax = v.iter().map(|x| x.abs().ceil().to_integer()).max().unwrap_or_default();
                let t = vmax + reach + 1;
                hull_with_recession(RecessionSource::System(&shifted), &rays, cap, &Truncation::with_initial(t))?.vertices
            }
            Err(e) => return Err(e),
        };
        for p in local {
            let q: Vec<Int> = p.iter().zip(&shift).map(|(x, s)| x + s).collect();
            if let Ok(k) = vertices.binary_search(&q) {
                witness[k].get_or_insert(idx);
            }
        }
    }
    Ok(InclusionReport { vertices, rational_vertices: rational, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hull::knapsack_hull_vertices;

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn generators_include_exchange_directions() {
        assert_eq!(relaxed_recession_generators(&ints(&[2, 1]), 0), vec![ints(&[-1, 0]), ints(&[-1, 2])]);
        assert_eq!(relaxed_recession_generators(&ints(&[4, 6]), 1), vec![ints(&[0, -1]), ints(&[3, -2])]);
    }

    #[test]
    fn decomposition_of_small_knapsack() {
        let k = KnapsackInstance::from_i64(&[2, 1], 3).unwrap();
        let d = theorem4_decomposition(&k, 100_000).unwrap();
        assert!(d.threshold_met);
        assert_eq!(d.parts[0].vertices, vec![ints(&[0, 0])]);
        assert_eq!(d.parts[1].vertices, vec![ints(&[1, 0]), ints(&[1, 1])]);
        assert_eq!(d.parts[2].vertices, vec![ints(&[0, 3])]);
        assert_eq!(d.union(), knapsack_hull_vertices(&k, 1000).unwrap().vertices);
        assert!(d.oversized_parts(&k).is_empty());

        let k = KnapsackInstance::from_i64(&[1, 1], 2).unwrap();
        let d = theorem4_decomposition(&k, 100_000).unwrap();
        assert_eq!(d.union(), vec![ints(&[0, 0]), ints(&[0, 2]), ints(&[2, 0])]);
    }

    #[test]
    fn relaxed_hull_with_zero_weight() {
        let k = KnapsackInstance::relaxed(ints(&[0, 3]), Int::from(7)).unwrap();
        let h = relaxed_knapsack_hull(&k, 100_000).unwrap();
        assert_eq!(h.vertices, vec![ints(&[0, 0]), ints(&[0, 2])]);
        assert_eq!(h.recession_generators, vec![ints(&[1, 0])]);
    }

    #[test]
    fn inclusion_on_small_systems() {
        let k = KnapsackInstance::from_i64(&[2, 5], 23).unwrap();
        let r = inclusion_witnesses(&k.to_system(), 100_000).unwrap();
        assert_eq!(r.vertices.len(), 6);
        assert!(r.holds());
        let s = LinearSystem::from_i64(&[&[3, 7], &[-5, 2], &[1, -4]], &[40, 9, 6]).unwrap();
        assert!(inclusion_witnesses(&s, 100_000).unwrap().holds());
    }

    #[test]
    fn rays_of_a_quadrant() {
        let s = LinearSystem::from_i64(&[&[-1, 0], &[0, -1]], &[0, 0]).unwrap();
        let mut r = cone_rays(&s);
        r.sort();
        assert_eq!(r, vec![ints(&[0, 1]), ints(&[1, 0])]);
    }
}
