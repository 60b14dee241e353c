//! Vertex sets of integer hulls.
//!
//! Bounded polyhedra go through a slicing engine: the hull of a polytope's
//! integer points is computed from the hulls of its axis-parallel slices, and
//! each surviving candidate is confirmed by an exact LP. Unbounded sets use a
//! truncation protocol with explicit recession generators.

mod congruence;
mod decomposition;
mod engine;
mod facets;
mod recession;
mod separation;
mod stdform;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::arith::{ArithError, Int};
use crate::json::dec_vec;
use crate::model::{Direction, Instance, KnapsackInstance, LinearSystem, ModelError};

pub use congruence::congruence_hull_vertices;
pub use decomposition::{
    inclusion_witnesses, relaxed_knapsack_hull, relaxed_recession_generators, theorem4_decomposition, Decomposition, InclusionReport,
};
pub use engine::{integer_hull_vertices, integer_hull_vertices_with, EngineStats};
pub use facets::facet_count;
pub use recession::{hull_with_recession, RecessionSource, Truncation, MAX_DOUBLINGS};
pub use separation::{has_separation_property, SeparationReport, SeparationWitness};
pub use stdform::standard_form_vertices;

/// Default limit on lattice columns scanned by the bounded engine.
pub const DEFAULT_CAP: usize = crate::lattice::DEFAULT_POINT_CAP;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HullError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("scan limit of {cap} lattice columns exceeded")]
    CapExceeded { cap: usize },
    #[error("the polyhedron is unbounded along axis {axis} ({direction}); use hull_with_recession")]
    Unbounded { axis: usize, direction: Direction },
    #[error("coordinates exceed the supported range")]
    CoordinateOverflow,
    #[error("vertex set did not stabilize after {doublings} doublings of the truncation bound")]
    Unstable { doublings: u32 },
    #[error("zero weight a[{0}] makes the knapsack unbounded; use hull_with_recession")]
    ZeroWeight(usize),
    #[error("facet counting needs a bounded hull")]
    HasRecession,
    #[error("facet counting supports dimension at most 3, got {0}")]
    DimensionTooLarge(usize),
    #[error("hull is not full-dimensional")]
    NotFullDimensional,
    #[error("point {0:?} has a negative coordinate")]
    NegativeCoordinate(Vec<Int>),
    #[error("generator {0:?} does not match the dimension {1}")]
    GeneratorDimension(Vec<Int>, usize),
}

/// Vertex set of an integer hull, with the generators of its recession cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerHull {
    pub dimension: usize,
    /// Lexicographically sorted.
    pub vertices: Vec<Vec<Int>>,
    pub recession_generators: Vec<Vec<Int>>,
    pub source: String,
}

impl IntegerHull {
    pub fn new(dimension: usize, mut vertices: Vec<Vec<Int>>, recession_generators: Vec<Vec<Int>>, source: impl Into<String>) -> Self {
        vertices.sort();
        vertices.dedup();
        IntegerHull { dimension, vertices, recession_generators, source: source.into() }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains_vertex(&self, p: &[Int]) -> bool {
        self.vertices.binary_search_by(|v| v.as_slice().cmp(p)).is_ok()
    }
}

impl Serialize for IntegerHull {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("IntegerHull", 5)?;
        st.serialize_field("source", &self.source)?;
        st.serialize_field("dimension", &self.dimension)?;
        st.serialize_field("vertex_count", &self.vertices.len())?;
        st.serialize_field("vertices", &self.vertices.iter().map(|v| dec_vec(v)).collect::<Vec<_>>())?;
        st.serialize_field(
            "recession_generators",
            &self.recession_generators.iter().map(|v| dec_vec(v)).collect::<Vec<_>>(),
        )?;
        st.end()
    }
}

/// Vertices of the knapsack polytope `conv{x in Z^n : x >= 0, a · x <= a0}`.
pub fn knapsack_hull_vertices(k: &KnapsackInstance, cap: usize) -> Result<IntegerHull, HullError> {
    if let Some(j) = k.a().iter().position(num_traits::Zero::is_zero) {
        return Err(HullError::ZeroWeight(j));
    }
    let mut h = integer_hull_vertices(&k.to_system(), cap)?;
    h.source = "knapsack".into();
    Ok(h)
}

/// Convenience wrapper returning the vertex count of a bounded system.
pub fn vertex_count(sys: &LinearSystem, cap: usize) -> Result<usize, HullError> {
    Ok(integer_hull_vertices(sys, cap)?.len())
}

/// Hull of a system that may be unbounded. Recession rays are taken from the
/// cone `{r : A r <= 0}`; a system of rank below `n` has no vertices at all.
pub fn system_hull(sys: &LinearSystem, cap: usize) -> Result<IntegerHull, HullError> {
    match integer_hull_vertices(sys, cap) {
        Err(HullError::Unbounded { .. }) if sys.rank() < sys.n() => Ok(IntegerHull::new(sys.n(), vec![], vec![], "system (lineality)")),
        Err(HullError::Unbounded { .. }) => {
            let rays = decomposition::cone_rays(sys);
            hull_with_recession(RecessionSource::System(sys), &rays, cap, &Truncation::default())
        }
        other => other,
    }
}

/// Hull of any supported instance.
pub fn instance_hull(inst: &Instance, cap: usize) -> Result<IntegerHull, HullError> {
    match inst {
        Instance::System(s) => system_hull(s, cap),
        Instance::Knapsack(k) => relaxed_knapsack_hull(k, cap),
        Instance::Congruence(c) => congruence_hull_vertices(c, cap),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unbounded_and_degenerate_systems() {
        let s = LinearSystem::from_i64(&[&[-1, 0], &[0, -1], &[-1, -1]], &[0, 0, -3]).unwrap();
        let h = system_hull(&s, 100_000).unwrap();
        assert_eq!(h.len(), 2);
        assert_eq!(h.recession_generators.len(), 2);
        let strip = LinearSystem::from_i64(&[&[1, 0], &[-1, 0]], &[2, 0]).unwrap();
        assert!(system_hull(&strip, 1000).unwrap().is_empty());
    }
}
