//! Expected dimension, non-speciality certificates, exact regularity for
//! the certified families, and the staged-specialization upper bound
//! `beta(m)` of the regularity.

use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ams::{build_graph, enumerate_representatives, count_representatives, Decoration, GraphRecipe};
use crate::arith::{self, Int};
use crate::error::{Error, Result};
use crate::proximity::{
    epsilon, excesses, is_almost_consistent, unload, MultiplicitySystem, ProximityGraph, Tracker,
    UnloadStep,
};
use crate::surface::{DivisorClass, SurfaceModel};

/// Default ceiling on the number of recipes `best_beta` will evaluate.
pub const DEFAULT_ENUMERATION_LIMIT: u128 = 20_000;

/// `max(d(d+3)/2 - sum m_i(m_i+1)/2, -1)`.
pub fn expected_dimension(d: Int, m: &MultiplicitySystem) -> Result<Int> {
    if d < 1 {
        return Err(Error::Precondition(format!("expected dimension needs d >= 1, got {d}")));
    }
    Ok(virtual_dimension(d, m)?.max(-1))
}

/// `d(d+3)/2 - sum m_i(m_i+1)/2`, without the clamp.
pub fn virtual_dimension(d: Int, m: &MultiplicitySystem) -> Result<Int> {
    arith::sub(arith::plane_curves_dim(d)?, arith::conditions(m.as_slice())?, "virtual dimension")
}

/// Smallest `d >= 1` whose virtual dimension is at least `-1`. Below it the
/// conditions cannot be independent.
pub fn independence_lower_bound(m: &MultiplicitySystem) -> Result<Int> {
    let target = arith::sub(arith::conditions(m.as_slice())?, 1, "lower bound")?;
    // d(d+3)/2 >= target  <=>  (2d+3)^2 >= 8 target + 9
    let rhs = arith::add(arith::mul(8, target.max(0), "lower bound")?, 9, "lower bound")?;
    let mut d = ((isqrt(rhs) - 3) / 2).max(1);
    while d > 1 && arith::plane_curves_dim(d - 1)? >= target {
        d -= 1;
    }
    while arith::plane_curves_dim(d)? < target {
        d += 1;
    }
    Ok(d)
}

fn isqrt(x: Int) -> Int {
    if x <= 0 {
        return 0;
    }
    let mut r = (x as f64).sqrt() as Int;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

fn plus_graph(recipe: &GraphRecipe) -> Result<ProximityGraph> {
    if recipe.decoration() != Decoration::Plus {
        return Err(Error::InvalidInput(format!("a plus-decorated recipe is required, got {recipe}")));
    }
    build_graph(recipe)
}

fn pad_to(m: &MultiplicitySystem, g: &ProximityGraph, recipe: &GraphRecipe) -> Result<MultiplicitySystem> {
    if m.support_len() > g.n_points() {
        return Err(Error::InvalidInput(format!(
            "{} non-zero multiplicities do not fit the {} vertices of {recipe}",
            m.support_len(),
            g.n_points()
        )));
    }
    m.padded(g.n_points())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NonspecialityVerdict {
    /// Non-special for every degree at least `threshold`, and `d` is one.
    NonspecialCertified { threshold: Int },
    /// Consistent with `rho_1 >= 1` and non-empty: non-special exactly
    /// when `d >= threshold = m_0 + m_1 - 1`.
    Equivalence { threshold: Int, nonspecial: bool },
    Inapplicable { reason: String },
}

/// Non-speciality of `L_d(m)` certified through the recipe surface.
pub fn nonspeciality_check(d: Int, m: &MultiplicitySystem, recipe: &GraphRecipe) -> Result<NonspecialityVerdict> {
    let g = plus_graph(recipe)?;
    let m = pad_to(m, &g, recipe)?;
    if m.len() < 2 {
        return Ok(NonspecialityVerdict::Inapplicable { reason: "needs at least two points".into() });
    }
    let ac = is_almost_consistent(&g, &m)?;
    match ac.holds() {
        Some(true) => {}
        Some(false) => {
            return Ok(NonspecialityVerdict::Inapplicable {
                reason: format!("multiplicities are not almost consistent on {recipe}"),
            })
        }
        None => {
            return Ok(NonspecialityVerdict::Inapplicable {
                reason: "almost-consistency search ran out of budget".into(),
            })
        }
    }
    let rho = excesses(&g, &m)?;
    if rho.is_non_negative() && rho.0[1] >= 1 && d >= 1 && virtual_dimension(d, &m)? >= 0 {
        let threshold = m[0] + m[1] - 1;
        return Ok(NonspecialityVerdict::Equivalence { threshold, nonspecial: d >= threshold });
    }
    let threshold = nonspecial_threshold(&g, &m)?;
    if d >= threshold {
        Ok(NonspecialityVerdict::NonspecialCertified { threshold })
    } else {
        Ok(NonspecialityVerdict::Inapplicable { reason: format!("degree {d} is below the certified threshold {threshold}") })
    }
}

/// `m_0^G + m_1^G - eps(G, m^G)`.
fn nonspecial_threshold(g: &ProximityGraph, m: &MultiplicitySystem) -> Result<Int> {
    let (mg, _) = unload(g, m)?;
    Ok(mg[0] + mg[1] - epsilon(g, &mg)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictKind {
    Exact,
    Bracket,
    BoundOnly,
    Inapplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityVerdict {
    pub kind: VerdictKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<Int>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower: Option<Int>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper: Option<Int>,
    pub justification: String,
}

impl RegularityVerdict {
    fn inapplicable(reason: impl Into<String>) -> Self {
        RegularityVerdict { kind: VerdictKind::Inapplicable, tau: None, lower: None, upper: None, justification: reason.into() }
    }

    fn exact(tau: Int, justification: impl Into<String>) -> Self {
        RegularityVerdict {
            kind: VerdictKind::Exact,
            tau: Some(tau),
            lower: Some(tau),
            upper: Some(tau),
            justification: justification.into(),
        }
    }
}

/// `tau(m)` for multiplicities consistent on the recipe graph with
/// `rho_1 >= 1`: `m_0 + m_1 - 1` when
/// `(m_0+m_1-1)(m_0+m_1+2) - sum m_i(m_i+1) >= -2`, else `m_0 + m_1`.
pub fn exact_regularity(m: &MultiplicitySystem, recipe: &GraphRecipe) -> Result<RegularityVerdict> {
    const CTX: &str = "exact regularity";
    let g = plus_graph(recipe)?;
    let m = pad_to(m, &g, recipe)?;
    let rho = excesses(&g, &m)?;
    if !rho.is_non_negative() {
        return Ok(RegularityVerdict::inapplicable(format!("multiplicities are not consistent on {recipe}")));
    }
    if rho.0[1] < 1 {
        return Ok(RegularityVerdict::inapplicable(format!("excess at the second point is {} < 1", rho.0[1])));
    }
    let s = arith::add(m[0], m[1], CTX)?;
    let lhs = arith::sub(
        arith::mul(s - 1, arith::add(s, 2, CTX)?, CTX)?,
        arith::mul(2, arith::conditions(m.as_slice())?, CTX)?,
        CTX,
    )?;
    let tau = if lhs >= -2 { s - 1 } else { s };
    Ok(RegularityVerdict::exact(tau, format!("consistent on {recipe} with positive excess at the second point")))
}

/// Lower bound from the virtual dimension, upper bound from the certified
/// non-speciality threshold.
pub fn regularity_bracket(m: &MultiplicitySystem, recipe: &GraphRecipe) -> Result<RegularityVerdict> {
    let g = plus_graph(recipe)?;
    let m = pad_to(m, &g, recipe)?;
    match is_almost_consistent(&g, &m)?.holds() {
        Some(true) => {}
        Some(false) => return Ok(RegularityVerdict::inapplicable(format!("not almost consistent on {recipe}"))),
        None => return Ok(RegularityVerdict::inapplicable("almost-consistency search ran out of budget")),
    }
    let lower = independence_lower_bound(&m)?;
    let upper = nonspecial_threshold(&g, &m)?.max(1);
    if lower >= upper {
        // Non-special from `upper` on, and the virtual dimension is at
        // least -1 from `lower` on: independence starts exactly at `lower`.
        return Ok(RegularityVerdict::exact(
            lower,
            format!("virtual-dimension bound {lower} meets the non-speciality threshold {upper} on {recipe}"),
        ));
    }
    Ok(RegularityVerdict {
        kind: VerdictKind::Bracket,
        tau: None,
        lower: Some(lower),
        upper: Some(upper),
        justification: format!("virtual-dimension bound and non-speciality threshold on {recipe}"),
    })
}

/// Best available statement about `tau(m)` from one recipe: the exact
/// formula, then the bracket, and the `beta` bound to tighten the upper end.
pub fn regularity(m: &MultiplicitySystem, recipe: &GraphRecipe) -> Result<RegularityVerdict> {
    let exact = exact_regularity(m, recipe)?;
    if exact.kind == VerdictKind::Exact {
        return Ok(exact);
    }
    let bracket = regularity_bracket(m, recipe)?;
    if bracket.kind == VerdictKind::Exact {
        return Ok(bracket);
    }
    let beta = beta_bound(m, recipe)?.beta;
    let lower = independence_lower_bound(m)?;
    match bracket.upper {
        Some(upper) => {
            let upper = upper.min(beta);
            if lower >= upper {
                return Ok(RegularityVerdict::exact(lower, format!("virtual-dimension bound meets min(threshold, beta) on {recipe}")));
            }
            Ok(RegularityVerdict {
                kind: VerdictKind::Bracket,
                tau: None,
                lower: Some(lower),
                upper: Some(upper),
                justification: format!("{}; beta = {beta}", bracket.justification),
            })
        }
        None => Ok(RegularityVerdict {
            kind: VerdictKind::BoundOnly,
            tau: None,
            lower: Some(lower),
            upper: Some(beta),
            justification: format!("virtual-dimension bound and beta on {recipe} ({})", bracket.justification),
        }),
    }
}

/// An unloading step of a stage, tagged by the step of the staged algorithm
/// that performed it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageEvent {
    pub step: StageStep,
    pub vertex: usize,
    pub excess: Int,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StageStep {
    /// The single unloading at the vertex with negative excess on the next graph.
    Single,
    /// Full unloading on the current graph.
    Unload,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageReport {
    /// `i_k`.
    pub from: usize,
    /// `i_{k+1}`.
    pub to: usize,
    pub single_steps: u64,
    pub unloading_steps: u64,
    pub all_tame: bool,
    /// Stopped because the only negative excess was `-1` at vertex `a`.
    pub accepted_at_a: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<StageEvent>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeCheck {
    pub degree: Int,
    pub h1: Int,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinalUnloading {
    pub steps: u64,
    pub all_tame: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<UnloadStep>>,
}

/// Result of the staged bound on one recipe. Fields are in a fixed order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub input: MultiplicitySystem,
    pub recipe: GraphRecipe,
    /// `sorted[k] = input[permutation[k]]`, before padding.
    pub permutation: Vec<usize>,
    pub a: usize,
    /// `i_1 < ... < i_w`.
    pub stage_indices: Vec<usize>,
    pub w: usize,
    pub stages: Vec<StageReport>,
    pub final_unloading: FinalUnloading,
    pub m_prime: MultiplicitySystem,
    pub j_found: Int,
    pub beta: Int,
    pub degree_checks: Vec<DegreeCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u128>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BetaOptions {
    /// Record every unloading step.
    pub trace: bool,
    /// Record the wall time (makes reports non-reproducible).
    pub timing: bool,
}

pub fn beta_bound(m: &MultiplicitySystem, recipe: &GraphRecipe) -> Result<BoundReport> {
    beta_bound_with(m, recipe, BetaOptions::default())
}

pub fn beta_bound_with(m: &MultiplicitySystem, recipe: &GraphRecipe, opts: BetaOptions) -> Result<BoundReport> {
    let start = Instant::now();
    let g = plus_graph(recipe)?;
    let (sorted, permutation) = m.sorted_desc();
    let v0 = pad_to(&sorted, &g, recipe)?;
    let n = g.n_points() - 1;

    // i_1 = 1, then every label below n at which a curved-dotted edge starts.
    let mut stage_indices = vec![1usize];
    for (i, _) in g.curved_dotted() {
        if i > 1 && i < n && stage_indices.last() != Some(&i) {
            stage_indices.push(i);
        }
    }
    let w = stage_indices.len();

    let a = (0..n)
        .rev()
        .find(|&a| g.proximate_to(a).iter().filter(|&&j| j >= a && v0[j] > 0).count() > 1)
        .unwrap_or(0);

    let mut v = v0.into_vec();
    let mut stages = Vec::with_capacity(w.saturating_sub(1));
    let mut current = g.drop_curved_dotted_above(stage_indices[0]);
    for k in 0..w - 1 {
        let next = g.drop_curved_dotted_above(stage_indices[k + 1]);
        let extra = extra_sources(&current, &next)?;
        let mut trace = opts.trace.then(Vec::new);
        let mut t = Tracker::new(&current, v)?;
        let mut single_steps = 0u64;
        let mut unloading_steps = 0u64;
        let mut all_tame = true;
        let mut accepted_at_a = false;
        let mut unload_buf = Vec::new();
        loop {
            // Step 1: excesses on `next` differ from those on `current` only
            // at the targets of the extra edges.
            let mut negative: Vec<(usize, Int)> = t
                .negatives()
                .filter(|x| extra.binary_search_by_key(x, |e| e.0).is_err())
                .map(|x| (x, t.excess(x)))
                .collect();
            for (x, srcs) in &extra {
                let r = srcs.iter().fold(t.excess(*x), |r, &s| r - t.multiplicity(s));
                if r < 0 {
                    negative.push((*x, r));
                }
            }
            negative.sort_unstable();
            let (j, rho_j) = match negative.as_slice() {
                [] => break,
                [one] => *one,
                many => {
                    return Err(Error::AssumptionViolation(format!(
                        "stage {} -> {} of {recipe}: {} vertices {:?} have negative excess on the next graph \
                         (multiplicities {:?})",
                        stage_indices[k],
                        stage_indices[k + 1],
                        many.len(),
                        many.iter().map(|e| e.0).collect::<Vec<_>>(),
                        t.multiplicities()
                    )))
                }
            };
            if j == a && rho_j == -1 {
                accepted_at_a = true;
                break;
            }
            let e = t.excess(j);
            if let Some(tr) = trace.as_mut() {
                tr.push(StageEvent { step: StageStep::Single, vertex: j, excess: e });
            }
            t.unload_at(j)?;
            single_steps += 1;
            // Step 2
            unload_buf.clear();
            let (count, tame) = t.unload_all(trace.as_ref().map(|_| &mut unload_buf))?;
            if let Some(tr) = trace.as_mut() {
                tr.extend(unload_buf.iter().map(|s| StageEvent { step: StageStep::Unload, vertex: s.vertex, excess: s.excess }));
            }
            unloading_steps += count;
            all_tame &= tame;
        }
        v = t.into_multiplicities();
        stages.push(StageReport {
            from: stage_indices[k],
            to: stage_indices[k + 1],
            single_steps,
            unloading_steps,
            all_tame,
            accepted_at_a,
            trace,
        });
        current = next;
    }

    let mut final_trace = opts.trace.then(Vec::new);
    let mut t = Tracker::new(&g, v)?;
    let (steps, all_tame) = t.unload_all(final_trace.as_mut())?;
    let m_prime = t.into_multiplicities();

    let surface = SurfaceModel::from_recipe(recipe)?;
    let top = arith::add(m_prime[0], m_prime[1], "beta")?;
    let mut degree_checks = Vec::new();
    let mut j: Int = 1;
    let beta = loop {
        let d = top - j;
        let h1 = surface.h1(&DivisorClass::from_system(d, &m_prime))?;
        degree_checks.push(DegreeCheck { degree: d, h1 });
        if h1 > 0 {
            break d + 1;
        }
        if d <= 0 {
            // Independent in every degree; regularity is at least 1 by convention.
            break 1;
        }
        j += 1;
    };

    Ok(BoundReport {
        input: m.clone(),
        recipe: recipe.clone(),
        permutation,
        a,
        stage_indices,
        w,
        stages,
        final_unloading: FinalUnloading { steps, all_tame, trace: final_trace },
        m_prime: MultiplicitySystem::new(m_prime)?,
        j_found: j,
        beta,
        degree_checks,
        wall_time_ms: opts.timing.then(|| start.elapsed().as_millis()),
    })
}

/// Edges of `next` missing from `current`, grouped by target (sorted).
/// `next` must contain every edge of `current`.
fn extra_sources(current: &ProximityGraph, next: &ProximityGraph) -> Result<Vec<(usize, Vec<usize>)>> {
    let mut extra: Vec<(usize, Vec<usize>)> = Vec::new();
    for x in 0..next.n_points() {
        let old = current.proximate_to(x);
        if old.iter().any(|s| !next.is_proximate(*s, x)) {
            return Err(Error::AssumptionViolation(format!("stage graphs are not nested at vertex {x}")));
        }
        let srcs: Vec<usize> = next.proximate_to(x).iter().copied().filter(|s| !old.contains(s)).collect();
        if !srcs.is_empty() {
            extra.push((x, srcs));
        }
    }
    Ok(extra)
}

/// Bound from every representative recipe, with the best one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BestBeta {
    pub beta: Int,
    pub recipe: GraphRecipe,
    pub report: BoundReport,
    pub candidates: Vec<Candidate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub recipe: GraphRecipe,
    pub beta: Int,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BestBetaOptions {
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    pub limit: u128,
    pub beta: BetaOptions,
}

impl Default for BestBetaOptions {
    fn default() -> Self {
        BestBetaOptions { jobs: None, limit: DEFAULT_ENUMERATION_LIMIT, beta: BetaOptions::default() }
    }
}

/// `n` for the representative enumeration: number of points minus one,
/// ignoring trailing zeros, and at least 1.
pub fn representative_order(m: &MultiplicitySystem) -> usize {
    m.support_len().max(2) - 1
}

pub fn best_beta(m: &MultiplicitySystem) -> Result<BestBeta> {
    best_beta_with(m, BestBetaOptions::default())
}

pub fn best_beta_with(m: &MultiplicitySystem, opts: BestBetaOptions) -> Result<BestBeta> {
    let n = representative_order(m);
    let count = count_representatives(n);
    if count > opts.limit {
        return Err(Error::EnumerationTooLarge { count, limit: opts.limit });
    }
    best_beta_among(m, &enumerate_representatives(n)?, opts)
}

/// Minimum over the given recipes; ties go to the earliest recipe.
pub fn best_beta_among(m: &MultiplicitySystem, recipes: &[GraphRecipe], opts: BestBetaOptions) -> Result<BestBeta> {
    if recipes.is_empty() {
        return Err(Error::InvalidInput("no recipes to evaluate".into()));
    }
    let run = || -> Result<Vec<BoundReport>> {
        recipes.par_iter().map(|r| beta_bound_with(m, r, opts.beta)).collect()
    };
    let reports = match opts.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| Error::InvalidInput(format!("cannot start worker pool: {e}")))?
            .install(run)?,
        None => run()?,
    };
    let candidates: Vec<Candidate> =
        reports.iter().map(|r| Candidate { recipe: r.recipe.clone(), beta: r.beta }).collect();
    let best = reports
        .into_iter()
        .enumerate()
        .min_by_key(|(i, r)| (r.beta, *i))
        .map(|(_, r)| r)
        .expect("non-empty");
    Ok(BestBeta { beta: best.beta, recipe: best.recipe.clone(), report: best, candidates })
}

/// `m_index - sum_{j in minus} m_j >= rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearInequality {
    pub index: usize,
    pub minus: Vec<usize>,
    pub rhs: Int,
}

impl fmt::Display for LinearInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{}", self.index)?;
        for j in &self.minus {
            write!(f, " - m{j}")?;
        }
        write!(f, " >= {}", self.rhs)
    }
}

/// The inequalities cutting out the multiplicities on the first `n + 1`
/// points that are consistent on the recipe graph with `rho_1 >= 1`.
pub fn conjecture_family(recipe: &GraphRecipe, n: usize) -> Result<Vec<LinearInequality>> {
    let g = plus_graph(recipe)?;
    if g.n_points() < n + 1 {
        return Err(Error::InvalidInput(format!("{recipe} has fewer than {} vertices", n + 1)));
    }
    Ok((0..=n)
        .map(|i| LinearInequality {
            index: i,
            minus: g.proximate_to(i).iter().copied().filter(|&j| j <= n).collect(),
            rhs: Int::from(i == 1),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ms(s: &str) -> MultiplicitySystem {
        s.parse().unwrap()
    }

    fn recipe(s: &str) -> GraphRecipe {
        s.parse().unwrap()
    }

    #[test]
    fn expected_dimension_examples() {
        assert_eq!(expected_dimension(4, &ms("2x5")).unwrap(), -1);
        assert_eq!(expected_dimension(5, &ms("2x5")).unwrap(), 5);
        assert_eq!(expected_dimension(3, &MultiplicitySystem::zeros(0)).unwrap(), 9);
        assert!(expected_dimension(0, &ms("1")).is_err());
    }

    #[test]
    fn lower_bound_matches_a_linear_scan() {
        for s in ["1", "1,1", "2x5", "3,2,1", "9000,1000x19", "1000,1000", "7,7,7,7,7,7,7"] {
            let m = ms(s);
            let want = (1..).find(|&d| virtual_dimension(d, &m).unwrap() >= -1).unwrap();
            assert_eq!(independence_lower_bound(&m).unwrap(), want, "{s}");
        }
    }

    #[test]
    fn nonspeciality_examples() {
        assert_eq!(
            nonspeciality_check(4, &ms("3,2,1,0"), &recipe("(2)+")).unwrap(),
            NonspecialityVerdict::Equivalence { threshold: 4, nonspecial: true }
        );
        assert!(matches!(
            nonspeciality_check(6, &ms("1,5"), &recipe("(2)+")).unwrap(),
            NonspecialityVerdict::Inapplicable { .. }
        ));
        // m_0 >= m_1 + m_2 on G(3)+, m_1 = m_2 so eps = 0.
        assert_eq!(
            nonspeciality_check(13, &ms("9,4,4,1"), &recipe("(3)+")).unwrap(),
            NonspecialityVerdict::NonspecialCertified { threshold: 13 }
        );
        assert!(matches!(
            nonspeciality_check(12, &ms("9,4,4,1"), &recipe("(3)+")).unwrap(),
            NonspecialityVerdict::Inapplicable { .. }
        ));
    }

    #[test]
    fn exact_regularity_examples() {
        let v = exact_regularity(&ms("3,2,1"), &recipe("(2)+")).unwrap();
        assert_eq!((v.kind, v.tau), (VerdictKind::Exact, Some(4)));
        let v = exact_regularity(&ms("5,2,1,1,1"), &recipe("(3)+")).unwrap();
        assert_eq!((v.kind, v.tau), (VerdictKind::Exact, Some(6)));
        let v = exact_regularity(&ms("9000,1000x19"), &recipe("(10)+")).unwrap();
        assert_eq!(v.kind, VerdictKind::Inapplicable);
    }

    #[test]
    fn bracket_examples() {
        let v = regularity_bracket(&ms("9000,1000x19"), &recipe("(10)+")).unwrap();
        assert_eq!((v.kind, v.tau), (VerdictKind::Exact, Some(10000)));
        // Past m = 9009 the virtual dimension at m + 999 is at least -1 and
        // the threshold m + 1000 is no longer met from below.
        let v = regularity_bracket(&ms("12000,1000x19"), &recipe("(10)+")).unwrap();
        assert_eq!((v.kind, v.upper), (VerdictKind::Bracket, Some(13000)));
        assert!(v.lower.unwrap() < 12999);
        let v = regularity_bracket(&ms("1000,1000"), &recipe("(2)+")).unwrap();
        assert_eq!(v.kind, VerdictKind::Bracket);
        assert!(v.lower.unwrap() < v.upper.unwrap());
    }

    #[test]
    fn beta_on_two_simple_points() {
        let r = beta_bound(&ms("1,1"), &recipe("(2)+")).unwrap();
        assert_eq!(r.beta, 1);
        assert_eq!(r.w, 1);
        let b = best_beta(&ms("1,1")).unwrap();
        assert_eq!(b.beta, 1);
    }

    #[test]
    fn beta_report_is_internally_consistent() {
        let r = beta_bound(&ms("5,4,3,3,2,1"), &recipe("(3)+")).unwrap();
        assert_eq!(r.beta, r.m_prime[0] + r.m_prime[1] - r.j_found + 1);
        let last = r.degree_checks.last().unwrap();
        assert!(last.h1 > 0);
        assert_eq!(last.degree, r.beta - 1);
        assert!(r.degree_checks[..r.degree_checks.len() - 1].iter().all(|c| c.h1 == 0));
    }

    #[test]
    fn beta_sorts_its_input() {
        let a = beta_bound(&ms("1,3,2"), &recipe("(3)+")).unwrap();
        let b = beta_bound(&ms("3,2,1"), &recipe("(3)+")).unwrap();
        assert_eq!(a.beta, b.beta);
        assert_eq!(a.permutation, vec![1, 2, 0]);
    }

    #[test]
    fn stage_indices_for_single_factor() {
        let r = beta_bound(&ms("3,3,3,3,3,3,3,3,3,3"), &recipe("(6)+")).unwrap();
        assert_eq!(r.stage_indices, vec![1, 2, 3, 4, 5]);
        assert_eq!(r.a, 0);
    }

    #[test]
    fn family_examples() {
        let f: Vec<String> = conjecture_family(&recipe("(2)+"), 3).unwrap().iter().map(|x| x.to_string()).collect();
        assert_eq!(f, vec!["m0 - m1 >= 0", "m1 - m2 >= 1", "m2 - m3 >= 0", "m3 >= 0"]);
        let f = conjecture_family(&recipe("(2,2)+"), 6).unwrap();
        assert_eq!(f[2].minus, vec![3, 4]);
        let f = conjecture_family(&recipe("(3)+"), 4).unwrap();
        assert_eq!(f[0].minus, vec![1, 2]);
        assert!(conjecture_family(&recipe("(2)+"), 4).is_err());
    }
}
