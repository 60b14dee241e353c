//! Ensemble means of vertex counts, per-instance bound reports and sweeps,
//! and CSV/JSON persistence of census records.

use std::path::Path;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{Int, Rat, Real, DEFAULT_PRECISION};
use crate::bounds::{self, BoundError, BoundValue};
use crate::families::{EnsembleInstance, EnsembleKind, EnsembleMode, EnsembleSpec, FamilyError};
use crate::hull::{
    congruence_hull_vertices, facet_count, instance_hull, relaxed_knapsack_hull, standard_form_vertices, HullError, IntegerHull,
};
use crate::json::{DecInt, DecRat};
use crate::model::{Instance, KnapsackInstance, LinearSystem};

#[derive(Debug, thiserror::Error)]
pub enum CensusError {
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Hull(#[from] HullError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
    #[error("malformed record: {0}")]
    Format(String),
}

/// One instance of an ensemble with its vertex count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusRecord {
    pub ensemble: EnsembleKind,
    pub n: usize,
    pub parameter: Int,
    pub instance_id: u128,
    pub a: Vec<Int>,
    pub a0: Int,
    pub vertex_count: usize,
    /// Share of this instance in the mean.
    pub weight: Rat,
}

/// Flat form used for both CSV rows and JSON objects.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct RawRecord {
    ensemble: String,
    n: String,
    parameter: String,
    instance_id: String,
    a_vector: String,
    a0: String,
    vertex_count: String,
    weight: String,
}

fn kind_name(k: EnsembleKind) -> &'static str {
    match k {
        EnsembleKind::Congruence => "congruence",
        EnsembleKind::Knapsack => "knapsack",
    }
}

impl From<&CensusRecord> for RawRecord {
    fn from(r: &CensusRecord) -> Self {
        RawRecord {
            ensemble: kind_name(r.ensemble).into(),
            n: r.n.to_string(),
            parameter: r.parameter.to_string(),
            instance_id: r.instance_id.to_string(),
            a_vector: r.a.iter().map(ToString::to_string).collect::<Vec<_>>().join(";"),
            a0: r.a0.to_string(),
            vertex_count: r.vertex_count.to_string(),
            weight: r.weight.to_string(),
        }
    }
}

impl TryFrom<RawRecord> for CensusRecord {
    type Error = CensusError;
    fn try_from(r: RawRecord) -> Result<Self, CensusError> {
        fn num<T: std::str::FromStr>(field: &str, s: &str) -> Result<T, CensusError> {
            s.trim().parse().map_err(|_| CensusError::Format(format!("{field} = {s:?}")))
        }
        let ensemble = match r.ensemble.as_str() {
            "congruence" => EnsembleKind::Congruence,
            "knapsack" => EnsembleKind::Knapsack,
            other => return Err(CensusError::Format(format!("ensemble = {other:?}"))),
        };
        let a = if r.a_vector.is_empty() {
            vec![]
        } else {
            r.a_vector.split(';').map(|x| num("a_vector", x)).collect::<Result<_, _>>()?
        };
        Ok(CensusRecord {
            ensemble,
            n: num("n", &r.n)?,
            parameter: num("parameter", &r.parameter)?,
            instance_id: num("instance_id", &r.instance_id)?,
            a,
            a0: num("a0", &r.a0)?,
            vertex_count: num("vertex_count", &r.vertex_count)?,
            weight: num::<DecRat>("weight", &r.weight)?.0,
        })
    }
}

impl Serialize for CensusRecord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RawRecord::from(self).serialize(s)
    }
}

/// Mean vertex count of an ensemble, with the per-instance records.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Census {
    pub spec: EnsembleSpec,
    pub mean: DecRat,
    pub mean_real: Real,
    pub records: Vec<CensusRecord>,
}

impl Census {
    fn from_records(spec: EnsembleSpec, records: Vec<CensusRecord>) -> Census {
        let mean: Rat = records.iter().map(|r| Rat::from_integer(Int::from(r.vertex_count)) * &r.weight).sum();
        let mean_real = Real::from_rat(&mean, DEFAULT_PRECISION);
        Census { spec, mean: DecRat(mean), mean_real, records }
    }
}

fn run_census(spec: EnsembleSpec, cap: usize) -> Result<Census, CensusError> {
    let indices = spec.indices()?;
    let weight = Rat::new(Int::from(1), Int::from(indices.len().max(1)));
    let records = indices
        .par_iter()
        .map(|&id| {
            let inst = spec.instance(id);
            let count = match &inst {
                EnsembleInstance::Congruence(c) => congruence_hull_vertices(c, cap)?.len(),
                EnsembleInstance::Knapsack(k) => relaxed_knapsack_hull(k, cap)?.len(),
            };
            let (a, a0) = inst.parts();
            Ok(CensusRecord {
                ensemble: spec.kind,
                n: spec.n,
                parameter: Int::from(spec.parameter),
                instance_id: id,
                a: a.to_vec(),
                a0: a0.clone(),
                vertex_count: count,
                weight: weight.clone(),
            })
        })
        .collect::<Result<Vec<_>, HullError>>()?;
    Ok(Census::from_records(spec, records))
}

/// `φ(Δ)`: mean congruence-hull vertex count over `a = (a_1..a_{n-1}, 1)` and
/// `a0` in `[0, Δ-1]`.
pub fn mean_congruence_vertex_count(n: usize, delta: u64, mode: EnsembleMode, cap: usize) -> Result<Census, CensusError> {
    run_census(EnsembleSpec { kind: EnsembleKind::Congruence, n, parameter: delta, mode }, cap)
}

/// `ψ(γ)`: mean knapsack vertex count over `a = (a_1..a_{n-1}, γ)` and
/// `a0` in `[γ(γ-1), γ²-1]`.
pub fn mean_knapsack_vertex_count(n: usize, gamma: u64, mode: EnsembleMode, cap: usize) -> Result<Census, CensusError> {
    run_census(EnsembleSpec { kind: EnsembleKind::Knapsack, n, parameter: gamma, mode }, cap)
}

/// Knapsack and congruence means at the same parameter.
///
/// Instance `i` of the knapsack ensemble, `a' x' + γ x_n <= a0`, corresponds
/// to instance `i` of the congruence ensemble, `a' x' + x_0 ≡ a0 (mod γ)`:
/// the slack `a0 - a' x' - γ x_n` maps the hull with `x_n` free onto the
/// congruence hull. Each knapsack count must be at least its congruence count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PsiPhiComparison {
    pub n: usize,
    pub gamma: u64,
    pub psi: DecRat,
    pub phi: DecRat,
    /// `ψ - φ`.
    pub difference: DecRat,
    pub instances: usize,
    /// Instance ids where the knapsack count falls below the congruence count.
    pub failures: Vec<u128>,
}

pub fn psi_phi_comparison(n: usize, gamma: u64, cap: usize) -> Result<PsiPhiComparison, CensusError> {
    let psi = mean_knapsack_vertex_count(n, gamma, EnsembleMode::Exhaustive, cap)?;
    let phi = mean_congruence_vertex_count(n, gamma, EnsembleMode::Exhaustive, cap)?;
    let failures = psi
        .records
        .iter()
        .zip(&phi.records)
        .filter(|(k, c)| k.vertex_count < c.vertex_count)
        .map(|(k, _)| k.instance_id)
        .collect();
    Ok(PsiPhiComparison {
        n,
        gamma,
        difference: DecRat(&psi.mean.0 - &phi.mean.0),
        psi: psi.mean,
        phi: phi.mean,
        instances: psi.records.len(),
        failures,
    })
}

/// A bound together with the count it was compared against.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheck {
    #[serde(flatten)]
    pub bound: BoundValue,
    /// The count the bound constrains; the standard-form count for bounds on
    /// the standard-form hull.
    pub compared_count: usize,
    /// `None` when the bound is not applicable.
    pub holds: Option<bool>,
}

impl BoundCheck {
    fn new(bound: BoundValue, count: usize) -> Self {
        let holds = bound.applicable.then(|| bound.admits(&Int::from(count)));
        BoundCheck { bound, compared_count: count, holds }
    }

    /// A failed check on a bound that counts towards soundness.
    pub fn is_violation(&self) -> bool {
        self.bound.is_checked() && self.holds == Some(false)
    }
}

/// True vertex count of an instance with every applicable bound evaluated.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub instance: Instance,
    pub vertex_count: usize,
    pub bounded: bool,
    pub standard_form_count: Option<usize>,
    pub bounds: Vec<BoundCheck>,
    pub facet_count: Option<usize>,
    pub mcmullen_bound: Option<DecInt>,
    pub mcmullen_holds: Option<bool>,
}

impl BoundReport {
    pub fn violations(&self) -> impl Iterator<Item = &BoundCheck> {
        self.bounds.iter().filter(|c| c.is_violation())
    }

    pub fn is_sound(&self) -> bool {
        self.violations().next().is_none() && self.mcmullen_holds != Some(false)
    }
}

/// Options for [`bound_report`].
#[derive(Debug, Clone, Copy)]
pub struct ReportOptions {
    /// Limit handed to the hull engine.
    pub cap: usize,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions { cap: crate::hull::DEFAULT_CAP }
    }
}

/// `max(|A|, |b|, 1)`.
fn alpha_with_rhs(sys: &LinearSystem) -> Int {
    let b = sys.b().iter().map(Signed::abs).max().unwrap_or_default();
    sys.alpha().max(b).max(Int::from(1))
}

fn system_bounds(sys: &LinearSystem, count: usize, out: &mut Vec<BoundCheck>) -> Result<(), CensusError> {
    let (n, m) = (sys.n(), sys.m());
    let alpha = alpha_with_rhs(sys);
    out.push(BoundCheck::new(bounds::shevchenko1981_bound(n, m, &alpha)?, count));
    out.push(BoundCheck::new(bounds::cook_bound_alpha(n, m, &alpha)?, count));
    let phi = sys.encoding_length(DEFAULT_PRECISION).map_err(HullError::from)?;
    out.push(BoundCheck::new(bounds::cook_bound_phi(n, m, &phi)?, count));
    let mut chirkov = bounds::chirkov_upper_bound(n, m.max(n + 1), &alpha)?;
    chirkov.applicable = m > n;
    out.push(BoundCheck::new(chirkov, count));
    let one = Rat::from_integer(Int::from(1));
    out.push(BoundCheck::new(bounds::theorem3_bound(n, m, &sys.alpha().max(Int::from(1)), &one)?.with_informational(), count));
    out.push(BoundCheck::new(bounds::facet_count_upper(n, m, &alpha, &one)?.with_informational(), count));
    Ok(())
}

fn knapsack_bounds(k: &KnapsackInstance, count: usize, out: &mut Vec<BoundCheck>) -> Result<(), CensusError> {
    if k.a().iter().any(Zero::is_zero) {
        return Ok(());
    }
    let n = k.n();
    out.push(BoundCheck::new(bounds::knapsack1_bound(k)?, count));
    out.push(BoundCheck::new(bounds::morgan_bound(n, k.a0(), &k.gamma())?, count));
    let alpha1 = k.alpha1();
    let mut union = bounds::knap_union_bound(n, &alpha1)?;
    union.applicable = *k.a0() >= &alpha1 * (&alpha1 - 1);
    out.push(BoundCheck::new(union, count));
    if n == 2 {
        out.push(BoundCheck::new(bounds::vs_upper_bound(&k.gamma())?, count));
    }
    Ok(())
}

/// Evaluates every applicable bound against the true vertex count.
pub fn bound_report(inst: &Instance, opts: &ReportOptions) -> Result<BoundReport, CensusError> {
    let hull: IntegerHull = instance_hull(inst, opts.cap)?;
    let count = hull.len();
    let bounded = hull.recession_generators.is_empty();
    let mut checks = Vec::new();
    let mut standard_form_count = None;

    let system = match inst {
        Instance::System(s) => Some(s.clone()),
        Instance::Knapsack(k) => Some(k.to_system()),
        Instance::Congruence(_) => None,
    };
    if let Some(sys) = &system {
        system_bounds(sys, count, &mut checks)?;
        if bounded {
            let sf = standard_form_vertices(sys, opts.cap)?;
            let nprime = bounds::nprime_bound(sf.dimension, sys.m(), &alpha_with_rhs(sys))?;
            checks.push(BoundCheck::new(nprime, sf.len()));
            if let Some(ks) = razd_ranges(&sf.vertices) {
                checks.push(BoundCheck::new(bounds::razd_bound(&ks)?.with_informational(), sf.len()));
            }
            standard_form_count = Some(sf.len());
        }
    }
    if let Instance::Knapsack(k) = inst {
        knapsack_bounds(k, count, &mut checks)?;
    }

    let (mut facets, mut mcmullen_bound, mut mcmullen_holds) = (None, None, None);
    if (2..=3).contains(&hull.dimension) && bounded {
        match facet_count(&hull) {
            Ok(f) => {
                let xi = bounds::mcmullen_facet_bound(hull.dimension, count);
                mcmullen_holds = Some(Int::from(f) <= xi);
                facets = Some(f);
                mcmullen_bound = Some(DecInt(xi));
            }
            Err(HullError::NotFullDimensional) => {}
            Err(e) => return Err(e.into()),
        }
    }

    Ok(BoundReport {
        instance: inst.clone(),
        vertex_count: count,
        bounded,
        standard_form_count,
        bounds: checks,
        facet_count: facets,
        mcmullen_bound,
        mcmullen_holds,
    })
}

/// `k_j = max_j + 2` over a point set, so every coordinate lies in `[0, k_j - 2]`.
fn razd_ranges(points: &[Vec<Int>]) -> Option<Vec<Int>> {
    let first = points.first()?;
    Some((0..first.len()).map(|j| points.iter().map(|p| p[j].clone()).max().expect("nonempty") + 2).collect())
}

/// A sound bound that failed on some instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub instance_index: usize,
    pub instance: Instance,
    pub bound: String,
    pub count: usize,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub instances: usize,
    pub checks: usize,
    /// Instances whose reports carry a facet count.
    pub facet_checks: usize,
    pub violations: Vec<Violation>,
    pub mcmullen_failures: Vec<usize>,
}

impl SweepSummary {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && self.mcmullen_failures.is_empty()
    }
}

/// Runs [`bound_report`] over every instance.
pub fn soundness_sweep(instances: &[Instance], opts: &ReportOptions) -> Result<SweepSummary, CensusError> {
    let reports = instances.par_iter().map(|i| bound_report(i, opts)).collect::<Result<Vec<_>, _>>()?;
    let mut summary =
        SweepSummary { instances: instances.len(), checks: 0, facet_checks: 0, violations: vec![], mcmullen_failures: vec![] };
    for (idx, r) in reports.iter().enumerate() {
        summary.checks += r.bounds.iter().filter(|c| c.bound.is_checked()).count();
        summary.facet_checks += usize::from(r.facet_count.is_some());
        for v in r.violations() {
            summary.violations.push(Violation {
                instance_index: idx,
                instance: r.instance.clone(),
                bound: v.bound.name.clone(),
                count: v.compared_count,
                value: v.bound.value.to_decimal(20),
            });
        }
        if r.mcmullen_holds == Some(false) {
            summary.mcmullen_failures.push(idx);
        }
    }
    Ok(summary)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = CensusError;
    fn from_str(s: &str) -> Result<Self, CensusError> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(CensusError::Format(format!("unknown format {other:?}"))),
        }
    }
}

/// Records in the given format.
pub fn render_records(records: &[CensusRecord], format: Format) -> Result<String, CensusError> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(records).map_err(|e| CensusError::Format(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            if records.is_empty() {
                w.write_record(["ensemble", "n", "parameter", "instance_id", "a_vector", "a0", "vertex_count", "weight"])
                    .map_err(|e| CensusError::Format(e.to_string()))?;
            }
            for r in records {
                w.serialize(RawRecord::from(r)).map_err(|e| CensusError::Format(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| CensusError::Format(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
    }
}

/// Parses records written by [`render_records`].
pub fn parse_records(text: &str, format: Format) -> Result<Vec<CensusRecord>, CensusError> {
    let raw: Vec<RawRecord> = match format {
        Format::Json => serde_json::from_str(text).map_err(|e| CensusError::Format(e.to_string()))?,
        Format::Csv => csv::Reader::from_reader(text.as_bytes())
            .deserialize()
            .collect::<Result<_, _>>()
            .map_err(|e| CensusError::Format(e.to_string()))?,
    };
    raw.into_iter().map(CensusRecord::try_from).collect()
}

fn io_err(path: &Path, e: std::io::Error) -> CensusError {
    CensusError::Io { path: path.display().to_string(), message: e.to_string() }
}

pub fn export(records: &[CensusRecord], format: Format, path: &Path) -> Result<(), CensusError> {
    std::fs::write(path, render_records(records, format)?).map_err(|e| io_err(path, e))
}

pub fn import(format: Format, path: &Path) -> Result<Vec<CensusRecord>, CensusError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    parse_records(&text, format)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{power_of_two_knapsack, vs_extremal_instance};
    use crate::hull::{theorem4_decomposition, DEFAULT_CAP};

    fn rat(p: i64, q: i64) -> Rat {
        Rat::new(Int::from(p), Int::from(q))
    }

    #[test]
    fn congruence_means() {
        let c = mean_congruence_vertex_count(2, 2, EnsembleMode::Exhaustive, DEFAULT_CAP).unwrap();
        assert_eq!(c.mean.0, rat(5, 4));
        assert_eq!(c.records.iter().map(|r| r.vertex_count).collect::<Vec<_>>(), vec![1, 1, 1, 2]);
        assert!(c.records.iter().all(|r| r.weight == rat(1, 4)));
        let c = mean_congruence_vertex_count(1, 2, EnsembleMode::Exhaustive, DEFAULT_CAP).unwrap();
        assert_eq!(c.mean.0, rat(1, 1));
        assert_eq!(c.mean_real.to_rat(), rat(1, 1));
    }

    #[test]
    fn knapsack_mean_small() {
        // a = (a1, 2), a0 in {2, 3}
        let k = mean_knapsack_vertex_count(2, 2, EnsembleMode::Exhaustive, DEFAULT_CAP).unwrap();
        let counts: Vec<usize> = k.records.iter().map(|r| r.vertex_count).collect();
        assert_eq!(counts, vec![2, 2, 3, 4]);
        let k = mean_knapsack_vertex_count(1, 2, EnsembleMode::Exhaustive, DEFAULT_CAP).unwrap();
        assert_eq!(k.mean.0, rat(2, 1));
    }

    #[test]
    fn congruence_count_matches_free_last_coordinate_part() {
        for gamma in 2..=4u64 {
            let spec = EnsembleSpec::exhaustive(EnsembleKind::Knapsack, 2, gamma);
            let cong = EnsembleSpec::exhaustive(EnsembleKind::Congruence, 2, gamma);
            for id in spec.indices().unwrap() {
                let (EnsembleInstance::Knapsack(k), EnsembleInstance::Congruence(c)) = (spec.instance(id), cong.instance(id)) else {
                    unreachable!()
                };
                if k.a().iter().any(Zero::is_zero) {
                    continue;
                }
                let part = theorem4_decomposition(&k, DEFAULT_CAP).unwrap().parts[2].len();
                assert_eq!(part, congruence_hull_vertices(&c, DEFAULT_CAP).unwrap().len(), "gamma={gamma} id={id}");
            }
        }
    }

    #[test]
    fn psi_phi_small() {
        let r = psi_phi_comparison(2, 3, DEFAULT_CAP).unwrap();
        assert!(r.failures.is_empty());
        assert_eq!(r.instances, 9);
        assert_eq!(r.difference.0, &r.psi.0 - &r.phi.0);
    }

    #[test]
    fn reports() {
        let k = power_of_two_knapsack(2).unwrap();
        let r = bound_report(&Instance::Knapsack(k), &ReportOptions::default()).unwrap();
        assert_eq!(r.vertex_count, 4);
        let get = |name: &str| r.bounds.iter().find(|c| c.bound.name == name).unwrap().clone();
        assert!(get("knapsack1").bound.value.to_decimal(10).starts_with("6.9657"));
        assert_eq!(get("knapsack1").holds, Some(true));
        assert_eq!(get("morgan").bound.value.to_rat(), rat(12, 1));
        assert!(r.is_sound());
        assert_eq!(r.facet_count, Some(4));

        let tri = LinearSystem::from_i64(&[&[-1, 0], &[0, -1], &[1, 1]], &[0, 0, 2]).unwrap();
        let r = bound_report(&Instance::System(tri), &ReportOptions::default()).unwrap();
        assert_eq!(r.vertex_count, 3);
        assert!(r.is_sound());
        assert!(r.standard_form_count.is_some());

        let r = bound_report(&Instance::Knapsack(vs_extremal_instance(3).unwrap()), &ReportOptions::default()).unwrap();
        assert_eq!(r.vertex_count, 6);
        let vs = r.bounds.iter().find(|c| c.bound.name == "vs_upper").unwrap();
        assert!(vs.bound.informational);
    }

    #[test]
    fn sweep_of_nothing() {
        let s = soundness_sweep(&[], &ReportOptions::default()).unwrap();
        assert_eq!(s.instances, 0);
        assert!(s.is_clean());
    }

    #[test]
    fn csv_and_json_round_trip() {
        let c = mean_congruence_vertex_count(2, 2, EnsembleMode::Exhaustive, DEFAULT_CAP).unwrap();
        let text = render_records(&c.records, Format::Csv).unwrap();
        assert_eq!(text.lines().count(), 5);
        assert_eq!(text.lines().next().unwrap(), "ensemble,n,parameter,instance_id,a_vector,a0,vertex_count,weight");
        assert_eq!(parse_records(&text, Format::Csv).unwrap(), c.records);
        let one = render_records(&c.records[..1], Format::Csv).unwrap();
        assert_eq!(one.lines().count(), 2);

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("census.json");
        export(&c.records, Format::Json, &path).unwrap();
        assert_eq!(import(Format::Json, &path).unwrap(), c.records);
        assert!(import(Format::Json, &dir.path().join("missing.json")).is_err());
    }
}
