use itertools::Itertools;
use num_traits::Signed;

use super::HullError;
use crate::arith::Int;

/// Outcome of the separation test on one unordered pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationWitness {
    pub x: Vec<Int>,
    pub y: Vec<Int>,
    /// A coordinate `j` with `2 min(x_j, y_j) < max(x_j, y_j)`, if any.
    pub coordinate: Option<usize>,
    /// `true` when `y` is the smaller point at `coordinate`.
    pub y_dominated: bool,
}

impl SeparationWitness {
    fn of(x: &[Int], y: &[Int]) -> Self {
        let found = x.iter().zip(y).position(|(a, b)| {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            lo * 2 < *hi
        });
        SeparationWitness {
            x: x.to_vec(),
            y: y.to_vec(),
            coordinate: found,
            y_dominated: found.is_some_and(|j| y[j] < x[j]),
        }
    }

    pub fn fails(&self) -> bool {
        self.coordinate.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationReport {
    pub holds: bool,
    pub first_failure: Option<SeparationWitness>,
    pub pairs_checked: usize,
}

/// Whether every unordered pair of distinct points has a coordinate where
/// one value is more than twice the other.
pub fn has_separation_property(points: &[Vec<Int>]) -> Result<SeparationReport, HullError> {
    if let Some(p) = points.iter().find(|p| p.iter().any(Signed::is_negative)) {
        return Err(HullError::NegativeCoordinate(p.clone()));
    }
    let distinct: Vec<&Vec<Int>> = points.iter().sorted().dedup().collect();
    let mut pairs_checked = 0;
    for (x, y) in distinct.iter().tuple_combinations() {
        pairs_checked += 1;
        let w = SeparationWitness::of(x, y);
        if w.fails() {
            return Ok(SeparationReport { holds: false, first_failure: Some(w), pairs_checked });
        }
    }
    Ok(SeparationReport { holds: true, first_failure: None, pairs_checked })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[&[i64]]) -> Vec<Vec<Int>> {
        v.iter().map(|p| p.iter().map(|&x| Int::from(x)).collect()).collect()
    }

    #[test]
    fn examples() {
        assert!(has_separation_property(&pts(&[&[1, 0], &[0, 1]])).unwrap().holds);
        let r = has_separation_property(&pts(&[&[1, 1], &[1, 2]])).unwrap();
        assert!(!r.holds);
        assert_eq!(r.first_failure.unwrap().x, pts(&[&[1, 1]])[0]);
        assert!(has_separation_property(&pts(&[&[4, 4]])).unwrap().holds);
        assert!(has_separation_property(&pts(&[&[0, 0], &[3, 5]])).unwrap().holds);
    }

    #[test]
    fn witness_direction() {
        let w = SeparationWitness::of(&pts(&[&[5, 1]])[0], &pts(&[&[2, 1]])[0]);
        assert_eq!(w.coordinate, Some(0));
        assert!(w.y_dominated);
    }

    #[test]
    fn negative_points_rejected() {
        assert!(matches!(has_separation_property(&pts(&[&[-1, 0]])), Err(HullError::NegativeCoordinate(_))));
    }
}
