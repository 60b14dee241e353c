//! The acceptance criteria as runnable checks.
//!
//! Each check prints nothing; it returns a pass/fail verdict with a one-line
//! detail. Instance sets shared between checks are built once per [`Suite`].

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::arith::{Int, Rat, Real};
use crate::bounds::phi_delta_lower_bound;
use crate::census::{
    mean_congruence_vertex_count, psi_phi_comparison, soundness_sweep, ReportOptions, SweepSummary,
};
use crate::families::{
    beta, knapsack2_count, min_b_search, morgan_family, power_of_two_knapsack, rubin_instance, vs_extremal_instance,
    EnsembleMode, RubinVariant,
};
use crate::hull::{
    facet_count, has_separation_property, inclusion_witnesses, integer_hull_vertices, knapsack_hull_vertices,
    standard_form_vertices, theorem4_decomposition, HullError, IntegerHull, DEFAULT_CAP,
};
use crate::model::{Instance, KnapsackInstance, LinearSystem};
use crate::oracle::oracle_vertices;
use crate::random::{random_bounded_systems, random_threshold_knapsacks, SystemShape};

/// Verdict of one check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl std::fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} {:>2} {:<22} {:>8.1}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

type CheckResult = Result<(bool, String), String>;

struct Check {
    id: u8,
    name: &'static str,
    run: fn(&Suite) -> CheckResult,
}

const CHECKS: [Check; 13] = [
    Check { id: 1, name: "pow2", run: check_pow2 },
    Check { id: 2, name: "theorem5-extremal", run: check_theorem5_extremal },
    Check { id: 3, name: "theorem5-minimality", run: check_theorem5_minimality },
    Check { id: 4, name: "min-b", run: check_min_b },
    Check { id: 5, name: "rubin", run: check_rubin },
    Check { id: 6, name: "theorem4", run: check_theorem4 },
    Check { id: 7, name: "soundness", run: check_soundness },
    Check { id: 8, name: "inclusion-separation", run: check_inclusion_separation },
    Check { id: 9, name: "census", run: check_census },
    Check { id: 10, name: "psi-phi", run: check_psi_phi },
    Check { id: 11, name: "mcmullen", run: check_mcmullen },
    Check { id: 12, name: "morgan", run: check_morgan },
    Check { id: 13, name: "oracle", run: check_oracle },
];

/// Names of all checks in order.
pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.name).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("no check matches {0:?}; known checks: {1}")]
pub struct UnknownCheck(pub String, pub String);

/// Seeds and sizes of the random instance sets.
const SWEEP_SEED: u64 = 7;
const INCLUSION_SEED: u64 = 8;
const ORACLE_SEED: u64 = 13;
const THEOREM4_SEED: u64 = 6;
const MORGAN_CAP: usize = 50_000_000;
const MINIMALITY_CAPS: (u64, u64, u64) = (4, 12, 200);
const MIN_B_CAPS: (u64, u64, u64) = (12, 12, 400);

/// `(exponent, precision, hull)` for the Morgan system at `ν = 2^exponent`.
type MorganHull = (u32, u32, IntegerHull);

/// Lazily built data shared between checks.
#[derive(Default)]
pub struct Suite {
    sweep_instances: OnceLock<Vec<Instance>>,
    sweep: OnceLock<Result<SweepSummary, String>>,
    morgan: OnceLock<Result<Vec<MorganHull>, String>>,
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

impl Suite {
    pub fn new() -> Self {
        Suite::default()
    }

    /// Every instance used by checks 1 to 6, plus random systems.
    fn sweep_instances(&self) -> &[Instance] {
        self.sweep_instances.get_or_init(|| {
            let mut out: Vec<Instance> = Vec::new();
            out.extend((1..=5).map(|n| Instance::Knapsack(power_of_two_knapsack(n).expect("n >= 1"))));
            out.extend((2..=5).map(|s| Instance::Knapsack(vs_extremal_instance(s).expect("s >= 2"))));
            let mut planar: BTreeSet<(u64, u64, u64)> = BTreeSet::new();
            let (a_cap, b_cap, c_cap) = MINIMALITY_CAPS;
            for a in 1..=a_cap {
                for b in 1..=b_cap {
                    planar.extend((0..=c_cap).map(|c| (a, b, c)));
                }
            }
            // the searches for s = 4..7 visit b <= 7 before stopping
            let (_, _, c_cap) = MIN_B_CAPS;
            for b in 1..=7 {
                for a in 1..=b {
                    planar.extend((0..=c_cap).map(|c| (a, b, c)));
                }
            }
            out.extend(planar.into_iter().map(|(a, b, c)| {
                Instance::Knapsack(KnapsackInstance::from_i64(&[a as i64, b as i64], c as i64).expect("positive weights"))
            }));
            for k in 1..=5 {
                for v in [RubinVariant::AsPrinted, RubinVariant::IndexSwapped] {
                    out.push(Instance::Knapsack(rubin_instance(k, v).expect("k >= 1")));
                }
            }
            out.extend(theorem4_knapsacks().into_iter().map(Instance::Knapsack));
            let shape = SystemShape { alpha: 8, point_limit: 5000, ..SystemShape::default() };
            out.extend(random_bounded_systems(&shape, 200, SWEEP_SEED).into_iter().map(Instance::System));
            out
        })
    }

    fn sweep(&self) -> Result<&SweepSummary, String> {
        self.sweep
            .get_or_init(|| soundness_sweep(self.sweep_instances(), &ReportOptions::default()).map_err(err))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Morgan hulls at `(exponent, precision)` for `ν = 2^exponent`.
    fn morgan(&self) -> Result<&[MorganHull], String> {
        self.morgan
            .get_or_init(|| {
                let mut out = Vec::new();
                for e in [4u32, 6, 8, 10] {
                    for p in [64u32, 128] {
                        let sys = morgan_family(&(Int::from(1) << e), p).map_err(err)?;
                        out.push((e, p, integer_hull_vertices(&sys, MORGAN_CAP).map_err(err)?));
                    }
                }
                Ok(out)
            })
            .as_ref()
            .map(Vec::as_slice)
            .map_err(Clone::clone)
    }

    /// Runs the checks whose name starts with `filter` (or whose number equals
    /// it), or all of them.
    pub fn run(&self, filter: Option<&str>, mut on_done: impl FnMut(&CheckOutcome)) -> Result<Vec<CheckOutcome>, UnknownCheck> {
        let selected: Vec<&Check> = CHECKS
            .iter()
            .filter(|c| filter.map_or(true, |f| c.name.starts_with(f) || c.id.to_string() == f))
            .collect();
        if selected.is_empty() {
            return Err(UnknownCheck(filter.unwrap_or_default().to_string(), check_names().join(", ")));
        }
        let mut out = Vec::new();
        for c in selected {
            let start = Instant::now();
            let (passed, detail) = match (c.run)(self) {
                Ok(v) => v,
                Err(e) => (false, format!("error: {e}")),
            };
            let outcome = CheckOutcome { id: c.id, name: c.name, passed, detail, elapsed: start.elapsed() };
            on_done(&outcome);
            out.push(outcome);
        }
        Ok(out)
    }
}

/// Runs checks with a fresh [`Suite`].
pub fn run_checks(filter: Option<&str>) -> Result<Vec<CheckOutcome>, UnknownCheck> {
    Suite::new().run(filter, |_| {})
}

fn theorem4_knapsacks() -> Vec<KnapsackInstance> {
    random_threshold_knapsacks(&[2, 3], 6, 10, 50, THEOREM4_SEED)
}

fn check_pow2(_: &Suite) -> CheckResult {
    let mut counts = Vec::new();
    for n in 1..=5u32 {
        counts.push(knapsack_hull_vertices(&power_of_two_knapsack(n).map_err(err)?, DEFAULT_CAP).map_err(err)?.len());
    }
    let ok = counts.iter().enumerate().all(|(i, &c)| c == 1 << (i + 1));
    Ok((ok, format!("counts for n=1..5: {counts:?} (want 2^n)")))
}

fn points(v: &[(i64, i64)]) -> Vec<Vec<Int>> {
    let mut p: Vec<Vec<Int>> = v.iter().map(|&(x, y)| vec![Int::from(x), Int::from(y)]).collect();
    p.sort();
    p
}

fn check_theorem5_extremal(_: &Suite) -> CheckResult {
    let mut counts = Vec::new();
    let mut hulls = Vec::new();
    for s in 2..=5u32 {
        let h = knapsack_hull_vertices(&vs_extremal_instance(s).map_err(err)?, DEFAULT_CAP).map_err(err)?;
        counts.push(h.len());
        hulls.push(h);
    }
    let counts_ok = counts.iter().zip(2..).all(|(&c, s)| c == 2 * s);
    let s2 = hulls[0].vertices == points(&[(0, 0), (3, 0), (1, 1), (0, 1)]);
    let s3 = hulls[1].vertices == points(&[(0, 0), (11, 0), (9, 1), (4, 3), (1, 4), (0, 4)]);
    Ok((counts_ok && s2 && s3, format!("counts for s=2..5: {counts:?} (want 2s); s=2 list {s2}, s=3 list {s3}")))
}

fn check_theorem5_minimality(_: &Suite) -> CheckResult {
    let (a_cap, b_cap, c_cap) = MINIMALITY_CAPS;
    let mut detail = String::new();
    let mut ok = true;
    for s in [3u32, 4] {
        let bound = u64::try_from(beta(s - 1).map_err(err)?).expect("small");
        let cases: Vec<(u64, u64, u64)> = (1..bound.min(a_cap + 1))
            .flat_map(|a| (1..=b_cap).flat_map(move |b| (0..=c_cap).map(move |c| (a, b, c))))
            .collect();
        let counts: Vec<usize> =
            cases.par_iter().map(|&(a, b, c)| knapsack2_count(a, b, c)).collect::<Result<_, HullError>>().map_err(err)?;
        let bad: Vec<&(u64, u64, u64)> = cases.iter().zip(&counts).filter(|(_, &k)| k >= 2 * s as usize).map(|(c, _)| c).collect();
        let max = counts.iter().max().copied().unwrap_or(0);
        ok &= bad.is_empty();
        let _ = write!(
            detail,
            "s={s}: {} instances with a<{bound}, max count {max}, {} reach {}; ",
            cases.len(),
            bad.len(),
            2 * s
        );
    }
    Ok((ok, format!("{detail}caps a<={a_cap} b<={b_cap} c<={c_cap}")))
}

fn check_min_b(_: &Suite) -> CheckResult {
    let (a_cap, b_cap, c_cap) = MIN_B_CAPS;
    let want = [(4usize, 2u64), (5, 3), (6, 5), (7, 7)];
    let mut ok = true;
    let mut parts = Vec::new();
    for (s, b) in want {
        let r = min_b_search(s, a_cap, b_cap, c_cap).map_err(err)?;
        let got = r.witness.map(|w| w.0);
        ok &= got == Some(b);
        let note = if r.cap_limited { " (witness c at cap)" } else { "" };
        parts.push(match r.witness {
            Some((b, a, c)) => format!("b{s}={b} via a={a} c={c}{note}"),
            None => format!("b{s} not found within caps"),
        });
    }
    Ok((ok, format!("{} (want 2, 3, 5, 7)", parts.join(", "))))
}

fn check_rubin(_: &Suite) -> CheckResult {
    let mut printed = Vec::new();
    let mut swapped = Vec::new();
    for k in 1..=5u32 {
        let count = |v| -> Result<usize, String> {
            Ok(knapsack_hull_vertices(&rubin_instance(k, v).map_err(err)?, DEFAULT_CAP).map_err(err)?.len())
        };
        printed.push(count(RubinVariant::AsPrinted)?);
        swapped.push(count(RubinVariant::IndexSwapped)?);
    }
    let want = |k: usize| k + 4;
    let per_k_ok = (0..5).all(|i| printed[i] == want(i) || swapped[i] == want(i));
    let which = |v: &[usize]| (0..5).all(|i| v[i] == want(i));
    let matching = match (which(&printed), which(&swapped)) {
        (true, true) => "both variants",
        (true, false) => "as-printed variant",
        (false, true) => "index-swapped variant",
        (false, false) => "neither variant for all k",
    };
    Ok((per_k_ok, format!("k=1..5 as-printed {printed:?}, index-swapped {swapped:?}, want k+3; matched by {matching}")))
}

fn check_theorem4(_: &Suite) -> CheckResult {
    let ks = theorem4_knapsacks();
    let results: Vec<(bool, bool)> = ks
        .par_iter()
        .map(|k| {
            let d = theorem4_decomposition(k, DEFAULT_CAP)?;
            let direct = knapsack_hull_vertices(k, DEFAULT_CAP)?;
            Ok((d.union() == direct.vertices, d.oversized_parts(k).is_empty()))
        })
        .collect::<Result<_, HullError>>()
        .map_err(err)?;
    let union_fail = results.iter().filter(|r| !r.0).count();
    let size_fail = results.iter().filter(|r| !r.1).count();
    Ok((
        union_fail == 0 && size_fail == 0,
        format!("{} knapsacks: {union_fail} union mismatches, {size_fail} parts above the binomial bound", ks.len()),
    ))
}

fn check_soundness(suite: &Suite) -> CheckResult {
    let s = suite.sweep()?;
    let mut detail = format!("{} instances, {} bound checks, {} violations", s.instances, s.checks, s.violations.len());
    if let Some(v) = s.violations.first() {
        let _ = write!(detail, "; first: {} with count {} > {}", v.bound, v.count, v.value);
    }
    Ok((s.violations.is_empty(), detail))
}

fn check_inclusion_separation(_: &Suite) -> CheckResult {
    let shape = SystemShape { alpha: 5, point_limit: 5000, ..SystemShape::default() };
    let systems = random_bounded_systems(&shape, 100, INCLUSION_SEED);
    let results: Vec<(bool, bool)> = systems
        .par_iter()
        .map(|s| {
            let inclusion = inclusion_witnesses(s, DEFAULT_CAP)?.holds();
            let sf = standard_form_vertices(s, DEFAULT_CAP)?;
            let separation = has_separation_property(&sf.vertices)?.holds;
            Ok((inclusion, separation))
        })
        .collect::<Result<_, HullError>>()
        .map_err(err)?;
    let inc = results.iter().filter(|r| !r.0).count();
    let sep = results.iter().filter(|r| !r.1).count();
    Ok((inc == 0 && sep == 0, format!("{} systems: {inc} inclusion failures, {sep} separation failures", systems.len())))
}

fn check_census(_: &Suite) -> CheckResult {
    let base = mean_congruence_vertex_count(2, 2, EnsembleMode::Exhaustive, DEFAULT_CAP).map_err(err)?;
    let exact = base.mean.0 == Rat::new(Int::from(5), Int::from(4));
    let mut ok = exact;
    let mut parts = vec![format!("phi(2)={} (want 5/4)", base.mean.0)];
    for delta in [2u64, 4, 8, 16, 32] {
        let c = mean_congruence_vertex_count(2, delta, EnsembleMode::Exhaustive, DEFAULT_CAP).map_err(err)?;
        let lb = phi_delta_lower_bound(2, &Int::from(delta)).map_err(err)?;
        if lb.vacuous {
            parts.push(format!("phi({delta})={} vs vacuous bound", c.mean_real.to_decimal(4)));
        } else {
            let holds = c.mean.0 >= lb.value.to_rat();
            ok &= holds;
            parts.push(format!("phi({delta})={} >= {} {}", c.mean_real.to_decimal(4), lb.value.to_decimal(5), holds));
        }
    }
    Ok((ok, parts.join(", ")))
}

fn check_psi_phi(_: &Suite) -> CheckResult {
    let mut ok = true;
    let mut parts = Vec::new();
    for gamma in [2u64, 3, 4] {
        let r = psi_phi_comparison(2, gamma, DEFAULT_CAP).map_err(err)?;
        ok &= r.failures.is_empty();
        let real = |q: &Rat| Real::from_rat(q, 64).to_decimal(4);
        parts.push(format!(
            "gamma={gamma}: psi={} phi={} psi-phi={} ({} per-instance failures)",
            real(&r.psi.0),
            real(&r.phi.0),
            r.difference.0,
            r.failures.len()
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn mcmullen_holds(h: &IntegerHull) -> Result<Option<bool>, String> {
    match facet_count(h) {
        Ok(f) => Ok(Some(Int::from(f) <= crate::bounds::mcmullen_facet_bound(h.dimension, h.len()))),
        Err(HullError::NotFullDimensional) => Ok(None),
        Err(e) => Err(err(e)),
    }
}

fn check_mcmullen(suite: &Suite) -> CheckResult {
    let sweep = suite.sweep()?;
    let (mut checked, mut failed) = (sweep.facet_checks, sweep.mcmullen_failures.len());
    let mut hulls: Vec<IntegerHull> = suite.morgan()?.iter().map(|(_, _, h)| h.clone()).collect();
    let shape5 = SystemShape { alpha: 5, point_limit: 5000, ..SystemShape::default() };
    let extra: Vec<LinearSystem> = random_bounded_systems(&shape5, 100, INCLUSION_SEED)
        .into_iter()
        .chain(random_bounded_systems(&SystemShape::default(), 100, ORACLE_SEED))
        .collect();
    let more: Vec<IntegerHull> =
        extra.par_iter().map(|s| integer_hull_vertices(s, DEFAULT_CAP)).collect::<Result<_, HullError>>().map_err(err)?;
    hulls.extend(more);
    for h in hulls.iter().filter(|h| (2..=3).contains(&h.dimension)) {
        if let Some(ok) = mcmullen_holds(h)? {
            checked += 1;
            failed += usize::from(!ok);
        }
    }
    Ok((failed == 0, format!("{checked} full-dimensional 2-D/3-D hulls, {failed} with more facets than xi_n(v)")))
}

fn check_morgan(suite: &Suite) -> CheckResult {
    let hulls = suite.morgan()?;
    let at = |e: u32, p: u32| hulls.iter().find(|(x, q, _)| *x == e && *q == p).map(|(_, _, h)| h).expect("computed");
    let mut ok = true;
    let mut parts = Vec::new();
    let mut prev = 0usize;
    for e in [4u32, 6, 8, 10] {
        let (h64, h128) = (at(e, 64), at(e, 128));
        let floor = Rat::new(Int::from(e * e), Int::from(32));
        let enough = Rat::from_integer(Int::from(h64.len())) >= floor;
        let stable = h64.vertices == h128.vertices;
        let monotone = h64.len() >= prev;
        ok &= enough && stable && monotone;
        prev = h64.len();
        parts.push(format!("nu=2^{e}: {} vertices (floor {floor}), stable {stable}", h64.len()));
    }
    Ok((ok, parts.join("; ")))
}

fn check_oracle(_: &Suite) -> CheckResult {
    let systems = random_bounded_systems(&SystemShape::default(), 100, ORACLE_SEED);
    let results: Vec<bool> = systems
        .par_iter()
        .map(|s| {
            let engine = integer_hull_vertices(s, DEFAULT_CAP).map_err(err)?.vertices;
            let oracle = oracle_vertices(s, 1000).map_err(err)?;
            Ok(engine == oracle)
        })
        .collect::<Result<_, String>>()?;
    let bad = results.iter().filter(|&&r| !r).count();
    let points: usize = systems.iter().map(|s| crate::lattice::enumerate_integer_points(s, 1000).map(|p| p.len()).unwrap_or(0)).sum();
    Ok((bad == 0, format!("{} systems ({points} integer points in total): {bad} discrepancies", systems.len())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filters() {
        assert!(matches!(run_checks(Some("no-such-check")), Err(UnknownCheck(..))));
        let names = check_names();
        assert_eq!(names.len(), 13);
        let out = run_checks(Some("pow2")).unwrap();
        assert_eq!(out.len(), 1);
        assert!(out[0].passed, "{}", out[0]);
    }
}
