//! Proximity graphs of chain configurations of infinitely near points,
//! their proximity matrices, excesses and the unloading procedure.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{self, Int};
use crate::error::{Error, Result};

/// Upper bound on the number of unloading steps of a single run. It is far
/// above anything a terminating run needs and only guards against bugs.
pub(crate) const UNLOAD_STEP_CAP: u64 = 1 << 40;

/// Default number of states visited by the exhaustive tame-sequence search.
pub const TAME_SEARCH_BUDGET: usize = 200_000;

/// Kind of an edge in a chain proximity graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    /// `(i, i-1)`: consecutive points.
    Continuous,
    /// `(i, j)` with `j < i - 1`.
    CurvedDotted,
}

/// Proximity relation among the points `p_0, ..., p_{n}` of a configuration.
///
/// A pair `(i, j)` means `p_i` is proximate to `p_j`; always `j < i`, and a
/// point is proximate to at most two others.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct ProximityGraph {
    n_points: usize,
    prox: Vec<(usize, usize)>,
    targets: Vec<Vec<usize>>,
    sources: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    prox: Vec<[usize; 2]>,
}

impl TryFrom<GraphRepr> for ProximityGraph {
    type Error = Error;

    fn try_from(r: GraphRepr) -> Result<Self> {
        ProximityGraph::new(r.n, r.prox.into_iter().map(|[i, j]| (i, j)))
    }
}

impl From<ProximityGraph> for GraphRepr {
    fn from(g: ProximityGraph) -> Self {
        GraphRepr {
            n: g.n_points,
            prox: g.prox.iter().map(|&(i, j)| [i, j]).collect(),
        }
    }
}

impl ProximityGraph {
    /// Builds a graph on `n_points` vertices from proximity pairs `(i, j)`.
    /// Duplicate pairs are merged.
    pub fn new(n_points: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n_points == 0 {
            return Err(Error::InvalidInput("a proximity graph needs at least one vertex".into()));
        }
        let set: BTreeSet<(usize, usize)> = pairs.into_iter().collect();
        let mut targets = vec![Vec::new(); n_points];
        let mut sources = vec![Vec::new(); n_points];
        for &(i, j) in &set {
            if i >= n_points {
                return Err(Error::InvalidInput(format!(
                    "pair ({i},{j}) refers to a vertex outside 0..{n_points}"
                )));
            }
            if j >= i {
                return Err(Error::InvalidInput(format!(
                    "pair ({i},{j}): a point can only be proximate to an earlier point"
                )));
            }
            targets[i].push(j);
            sources[j].push(i);
        }
        if let Some(i) = targets.iter().position(|t| t.len() > 2) {
            return Err(Error::InvalidInput(format!(
                "vertex {i} is proximate to {} points (at most 2 allowed)",
                targets[i].len()
            )));
        }
        Ok(ProximityGraph {
            n_points,
            prox: set.into_iter().collect(),
            targets,
            sources,
        })
    }

    /// A chain of `n_points` free points.
    pub fn free_chain(n_points: usize) -> Result<Self> {
        Self::new(n_points, (1..n_points).map(|i| (i, i - 1)))
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    /// Sorted proximity pairs.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.prox
    }

    pub fn is_proximate(&self, i: usize, j: usize) -> bool {
        self.prox.binary_search(&(i, j)).is_ok()
    }

    /// Points `k` with `k -> j`, increasing.
    pub fn proximate_to(&self, j: usize) -> &[usize] {
        &self.sources[j]
    }

    /// Points `j` with `i -> j`, increasing.
    pub fn targets_of(&self, i: usize) -> &[usize] {
        &self.targets[i]
    }

    pub fn is_satellite(&self, i: usize) -> bool {
        self.targets[i].len() == 2
    }

    /// True when `(i, i-1)` is a proximity for every `i >= 1`.
    pub fn is_chain(&self) -> bool {
        (1..self.n_points).all(|i| self.targets[i].contains(&(i - 1)))
    }

    pub fn edge_kind(&self, i: usize, j: usize) -> Option<EdgeKind> {
        if !self.is_proximate(i, j) {
            None
        } else if j + 1 == i {
            Some(EdgeKind::Continuous)
        } else {
            Some(EdgeKind::CurvedDotted)
        }
    }

    /// Curved-dotted pairs, sorted.
    pub fn curved_dotted(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.prox.iter().copied().filter(|&(i, j)| j + 1 < i)
    }

    /// The subgraph on the first `len` vertices.
    pub fn restrict(&self, len: usize) -> Result<Self> {
        if len == 0 || len > self.n_points {
            return Err(Error::InvalidInput(format!(
                "cannot restrict a graph of {} vertices to {len}",
                self.n_points
            )));
        }
        Self::new(len, self.prox.iter().copied().filter(|&(i, _)| i < len))
    }

    /// Removes every curved-dotted edge involving a vertex with label
    /// greater than `i`.
    pub fn drop_curved_dotted_above(&self, i: usize) -> Self {
        Self::new(
            self.n_points,
            self.prox.iter().copied().filter(|&(a, b)| b + 1 == a || a <= i),
        )
        .expect("subgraph of a valid graph is valid")
    }

    /// Appends `count` free points at the end of the chain.
    pub fn extend_free(&self, count: usize) -> Self {
        let n = self.n_points + count;
        let extra = (self.n_points..n).map(|i| (i, i - 1));
        Self::new(n, self.prox.iter().copied().chain(extra)).expect("extension of a valid graph is valid")
    }
}

impl fmt::Debug for ProximityGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ProximityGraph{self}")
    }
}

/// Canonical text form, e.g. `{"n":3,"prox":[[1,0],[2,0],[2,1]]}`.
impl fmt::Display for ProximityGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{\"n\":{},\"prox\":[", self.n_points)?;
        for (k, (i, j)) in self.prox.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "[{i},{j}]")?;
        }
        f.write_str("]}")
    }
}

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    n_rows: usize,
    n_cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        IntMatrix { n_rows, n_cols, data: vec![0; n_rows * n_cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Int>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::InvalidInput("ragged matrix".into()));
        }
        Ok(IntMatrix { n_rows, n_cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn get(&self, i: usize, j: usize) -> Int {
        self.data[i * self.n_cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Int) {
        self.data[i * self.n_cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn rows(&self) -> Vec<Vec<Int>> {
        self.data.chunks(self.n_cols.max(1)).map(<[Int]>::to_vec).collect()
    }

    pub fn checked_mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.n_cols != other.n_rows {
            return Err(Error::InvalidInput("matrix dimensions do not match".into()));
        }
        let mut out = IntMatrix::zeros(self.n_rows, other.n_cols);
        for i in 0..self.n_rows {
            for k in 0..self.n_cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.n_cols {
                    let t = arith::mul(a, other.get(k, j), "matrix product")?;
                    let v = arith::add(out.get(i, j), t, "matrix product")?;
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<Int>>::deserialize(d)?;
        IntMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// The proximity matrix: 1 on the diagonal, -1 at `(i, j)` when `i -> j`.
pub fn proximity_matrix(g: &ProximityGraph) -> IntMatrix {
    let mut p = IntMatrix::identity(g.n_points());
    for &(i, j) in g.pairs() {
        p.set(i, j, -1);
    }
    p
}

/// Exact inverse of the proximity matrix. Entries are non-negative.
pub fn inverse_proximity_matrix(g: &ProximityGraph) -> Result<IntMatrix> {
    let n = g.n_points();
    let mut b = IntMatrix::zeros(n, n);
    // Column j of B solves P x = e_j by forward substitution:
    // x_i = [i == j] + sum_{i -> t} x_t.
    for i in 0..n {
        for j in 0..=i {
            let mut v: Int = Int::from(i == j);
            for &t in g.targets_of(i) {
                v = arith::add(v, b.get(t, j), "inverse proximity matrix")?;
            }
            b.set(i, j, v);
        }
    }
    Ok(b)
}

/// Last row of the inverse proximity matrix: the multiplicities `u_j` of a
/// branch going through every point, `u_n = 1`, `u_j = sum_{k -> j} u_k`.
pub fn last_row_of_inverse(g: &ProximityGraph) -> Result<Vec<Int>> {
    let n = g.n_points();
    let mut u = vec![0 as Int; n];
    for j in (0..n).rev() {
        let mut v = Int::from(j + 1 == n);
        for &k in g.proximate_to(j) {
            v = arith::add(v, u[k], "inverse proximity matrix")?;
        }
        u[j] = v;
    }
    Ok(u)
}

/// A system of multiplicities `(m_0, ..., m_n)`, all non-negative. Trailing
/// zeros are semantically neutral.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Int>", into = "Vec<Int>")]
pub struct MultiplicitySystem(Vec<Int>);

impl TryFrom<Vec<Int>> for MultiplicitySystem {
    type Error = Error;

    fn try_from(v: Vec<Int>) -> Result<Self> {
        MultiplicitySystem::new(v)
    }
}

impl From<MultiplicitySystem> for Vec<Int> {
    fn from(m: MultiplicitySystem) -> Self {
        m.0
    }
}

impl MultiplicitySystem {
    pub fn new(v: Vec<Int>) -> Result<Self> {
        if let Some(x) = v.iter().find(|&&x| x < 0) {
            return Err(Error::InvalidInput(format!("negative multiplicity {x}")));
        }
        Ok(MultiplicitySystem(v))
    }

    pub fn zeros(len: usize) -> Self {
        MultiplicitySystem(vec![0; len])
    }

    pub fn as_slice(&self) -> &[Int] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Int> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Length once trailing zeros are dropped.
    pub fn support_len(&self) -> usize {
        self.0.iter().rposition(|&x| x != 0).map_or(0, |p| p + 1)
    }

    /// Pads with zeros (or drops trailing zeros) to exactly `len` entries.
    pub fn padded(&self, len: usize) -> Result<Self> {
        if self.support_len() > len {
            return Err(Error::InvalidInput(format!(
                "multiplicity system has {} non-trivial entries, more than {len} points",
                self.support_len()
            )));
        }
        let mut v = self.0.clone();
        v.resize(len, 0);
        Ok(MultiplicitySystem(v))
    }

    /// Sorted non-increasing, together with the permutation used:
    /// entry `k` of the result is entry `perm[k]` of the input.
    pub fn sorted_desc(&self) -> (Self, Vec<usize>) {
        let mut perm: Vec<usize> = (0..self.0.len()).collect();
        perm.sort_by(|&a, &b| self.0[b].cmp(&self.0[a]).then(a.cmp(&b)));
        let v = perm.iter().map(|&k| self.0[k]).collect();
        (MultiplicitySystem(v), perm)
    }

    pub fn is_non_increasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1])
    }

    pub fn get(&self, i: usize) -> Int {
        self.0.get(i).copied().unwrap_or(0)
    }
}

impl std::ops::Index<usize> for MultiplicitySystem {
    type Output = Int;

    fn index(&self, i: usize) -> &Int {
        &self.0[i]
    }
}

/// Parses comma separated multiplicities with an optional repetition
/// suffix: `"4000,1000x19"` is 4000 followed by nineteen 1000s.
impl FromStr for MultiplicitySystem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut v = Vec::new();
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (val, rep) = match tok.split_once(['x', 'X', '_']) {
                Some((a, b)) => (a.trim(), b.trim()),
                None => (tok, "1"),
            };
            let val: Int = val
                .parse()
                .map_err(|_| Error::Parse(format!("bad multiplicity '{tok}'")))?;
            let rep: usize = rep
                .parse()
                .map_err(|_| Error::Parse(format!("bad repetition count in '{tok}'")))?;
            v.extend(std::iter::repeat_n(val, rep));
        }
        MultiplicitySystem::new(v)
    }
}

impl fmt::Display for MultiplicitySystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut k = 0;
        while k < self.0.len() {
            let x = self.0[k];
            let run = self.0[k..].iter().take_while(|&&y| y == x).count();
            if !first {
                f.write_str(",")?;
            }
            first = false;
            if run > 1 {
                write!(f, "{x}x{run}")?;
            } else {
                write!(f, "{x}")?;
            }
            k += run;
        }
        Ok(())
    }
}

/// Excesses `rho_j = m_j - sum_{k -> j} m_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExcessVector(pub Vec<Int>);

impl ExcessVector {
    pub fn is_non_negative(&self) -> bool {
        self.0.iter().all(|&r| r >= 0)
    }
}

/// One recorded unloading step: the vertex and its excess just before.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnloadStep {
    pub vertex: usize,
    pub excess: Int,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct UnloadingTrace {
    pub steps: Vec<UnloadStep>,
    /// Every recorded excess equals -1 (vacuously true for no steps).
    pub all_tame: bool,
}

impl UnloadingTrace {
    fn from_steps(steps: Vec<UnloadStep>) -> Self {
        let all_tame = steps.iter().all(|s| s.excess == -1);
        UnloadingTrace { steps, all_tame }
    }

    /// Re-executes the trace from `m`, checking every recorded excess
    /// against the actual one, and returns the final system.
    pub fn replay(&self, g: &ProximityGraph, m: &MultiplicitySystem) -> Result<MultiplicitySystem> {
        let mut t = Tracker::new(g, aligned(g, m)?)?;
        for (k, s) in self.steps.iter().enumerate() {
            if s.vertex >= g.n_points() || t.excess(s.vertex) != s.excess || s.excess >= 0 {
                return Err(Error::AssumptionViolation(format!(
                    "trace step {k} at vertex {} records excess {}, actual {}",
                    s.vertex,
                    s.excess,
                    if s.vertex < g.n_points() { t.excess(s.vertex).to_string() } else { "-".into() }
                )));
            }
            t.unload_at(s.vertex)?;
        }
        MultiplicitySystem::new(t.into_multiplicities())
    }
}

/// `m` padded (or trimmed of trailing zeros) to the size of `g`.
pub(crate) fn aligned(g: &ProximityGraph, m: &MultiplicitySystem) -> Result<Vec<Int>> {
    Ok(m.padded(g.n_points())?.into_vec())
}

pub fn excesses(g: &ProximityGraph, m: &MultiplicitySystem) -> Result<ExcessVector> {
    let m = aligned(g, m)?;
    Ok(ExcessVector(excess_vec(g, &m)?))
}

pub(crate) fn excess_vec(g: &ProximityGraph, m: &[Int]) -> Result<Vec<Int>> {
    (0..g.n_points())
        .map(|j| {
            g.proximate_to(j)
                .iter()
                .try_fold(m[j], |acc, &k| arith::sub(acc, m[k], "excess"))
        })
        .collect()
}

pub fn is_consistent(g: &ProximityGraph, m: &MultiplicitySystem) -> Result<bool> {
    Ok(excesses(g, m)?.is_non_negative())
}

/// 1 if the excess at `p_1` is positive, 0 if it is zero. Requires a
/// consistent system on at least two points.
pub fn epsilon(g: &ProximityGraph, m: &MultiplicitySystem) -> Result<Int> {
    if g.n_points() < 2 {
        return Err(Error::Precondition("epsilon needs at least two points".into()));
    }
    let rho = excesses(g, m)?;
    if !rho.is_non_negative() {
        return Err(Error::Precondition("epsilon is only defined for consistent systems".into()));
    }
    Ok(Int::from(rho.0[1] >= 1))
}

/// One unloading step at `j`, which must have negative excess.
pub fn unload_step(g: &ProximityGraph, m: &MultiplicitySystem, j: usize) -> Result<MultiplicitySystem> {
    if j >= g.n_points() {
        return Err(Error::InvalidInput(format!("vertex {j} out of range")));
    }
    let mut t = Tracker::new(g, aligned(g, m)?)?;
    if t.excess(j) >= 0 {
        return Err(Error::Precondition(format!(
            "unloading at vertex {j} requires a negative excess (found {})",
            t.excess(j)
        )));
    }
    t.unload_at(j)?;
    let out = t.into_multiplicities();
    if let Some(k) = out.iter().position(|&x| x < 0) {
        return Err(Error::Precondition(format!(
            "unloading at vertex {j} leaves multiplicity {} at vertex {k}; use the full unloading",
            out[k]
        )));
    }
    Ok(MultiplicitySystem(out))
}

/// Unloads until consistent, always at the smallest vertex with negative
/// excess. Returns the consistent system and the trace.
pub fn unload(g: &ProximityGraph, m: &MultiplicitySystem) -> Result<(MultiplicitySystem, UnloadingTrace)> {
    unload_by(g, m, |_| 0)
}

/// Unloads with a caller-chosen order: `choose` receives the negative
/// vertices in increasing order and returns the position to unload.
pub fn unload_by<F>(g: &ProximityGraph, m: &MultiplicitySystem, mut choose: F) -> Result<(MultiplicitySystem, UnloadingTrace)>
where
    F: FnMut(&[usize]) -> usize,
{
    let mut t = Tracker::new(g, aligned(g, m)?)?;
    let mut steps = Vec::new();
    let mut candidates = Vec::new();
    loop {
        candidates.clear();
        candidates.extend(t.negatives());
        if candidates.is_empty() {
            break;
        }
        if steps.len() as u64 >= UNLOAD_STEP_CAP {
            return Err(Error::IterationCap("unload"));
        }
        let pick = choose(&candidates);
        let j = *candidates
            .get(pick)
            .ok_or_else(|| Error::InvalidInput(format!("unloading order picked position {pick}")))?;
        steps.push(UnloadStep { vertex: j, excess: t.excess(j) });
        t.unload_at(j)?;
    }
    Ok((MultiplicitySystem(t.into_multiplicities()), UnloadingTrace::from_steps(steps)))
}

/// Outcome of the almost-consistency test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlmostConsistency {
    Consistent,
    /// A certificate: tame steps leading to the unloaded system.
    Tame { trace: UnloadingTrace },
    NotAlmostConsistent,
    /// The exhaustive search ran out of budget.
    Undecided { explored: usize },
}

impl AlmostConsistency {
    /// `None` when undecided.
    pub fn holds(&self) -> Option<bool> {
        match self {
            AlmostConsistency::Consistent | AlmostConsistency::Tame { .. } => Some(true),
            AlmostConsistency::NotAlmostConsistent => Some(false),
            AlmostConsistency::Undecided { .. } => None,
        }
    }
}

pub fn is_almost_consistent(g: &ProximityGraph, m: &MultiplicitySystem) -> Result<AlmostConsistency> {
    is_almost_consistent_with_budget(g, m, TAME_SEARCH_BUDGET)
}

/// Greedy lowest-index tame unloading first; if that meets an excess of -2
/// or less, a memoized exhaustive search over orderings of the vertices
/// with excess exactly -1.
pub fn is_almost_consistent_with_budget(
    g: &ProximityGraph,
    m: &MultiplicitySystem,
    budget: usize,
) -> Result<AlmostConsistency> {
    let start = aligned(g, m)?;
    let mut t = Tracker::new(g, start.clone())?;
    if t.first_negative().is_none() {
        return Ok(AlmostConsistency::Consistent);
    }
    let mut steps = Vec::new();
    while let Some(j) = t.first_negative() {
        let e = t.excess(j);
        if e != -1 {
            break;
        }
        if steps.len() as u64 >= UNLOAD_STEP_CAP {
            return Err(Error::IterationCap("tame unloading"));
        }
        steps.push(UnloadStep { vertex: j, excess: e });
        t.unload_at(j)?;
    }
    if t.first_negative().is_none() {
        return Ok(AlmostConsistency::Tame { trace: UnloadingTrace::from_steps(steps) });
    }

    let (target, _) = unload(g, m)?;
    let target = target.into_vec();
    let mut visited: HashSet<Vec<Int>> = HashSet::new();
    let mut path = Vec::new();
    match tame_search(g, start, &target, &mut visited, &mut path, budget)? {
        Search::Found => Ok(AlmostConsistency::Tame { trace: UnloadingTrace::from_steps(path) }),
        Search::Exhausted => Ok(AlmostConsistency::NotAlmostConsistent),
        Search::OutOfBudget => Ok(AlmostConsistency::Undecided { explored: visited.len() }),
    }
}

enum Search {
    Found,
    Exhausted,
    OutOfBudget,
}

fn tame_search(
    g: &ProximityGraph,
    m: Vec<Int>,
    target: &[Int],
    visited: &mut HashSet<Vec<Int>>,
    path: &mut Vec<UnloadStep>,
    budget: usize,
) -> Result<Search> {
    let rho = excess_vec(g, &m)?;
    if rho.iter().all(|&r| r >= 0) {
        return Ok(if m == target { Search::Found } else { Search::Exhausted });
    }
    if visited.len() >= budget {
        return Ok(Search::OutOfBudget);
    }
    if !visited.insert(m.clone()) {
        return Ok(Search::Exhausted);
    }
    let mut out_of_budget = false;
    for j in (0..rho.len()).filter(|&j| rho[j] == -1) {
        let mut t = Tracker::new(g, m.clone())?;
        t.unload_at(j)?;
        path.push(UnloadStep { vertex: j, excess: -1 });
        match tame_search(g, t.into_multiplicities(), target, visited, path, budget)? {
            Search::Found => return Ok(Search::Found),
            Search::OutOfBudget => out_of_budget = true,
            Search::Exhausted => {}
        }
        path.pop();
    }
    Ok(if out_of_budget { Search::OutOfBudget } else { Search::Exhausted })
}

/// Multiplicities with incrementally maintained excesses and the set of
/// vertices whose excess is negative.
///
/// The same machinery serves unloading and the subtraction of exceptional
/// curves from divisor classes. Entries are kept in `i64` with checked
/// updates.
pub(crate) struct Tracker {
    m: Vec<i64>,
    rho: Vec<i64>,
    negative: BitSet,
    targets: Adjacency,
    sources: Adjacency,
}

/// Flat adjacency lists.
struct Adjacency {
    offsets: Vec<u32>,
    items: Vec<u32>,
}

impl Adjacency {
    fn from_lists<'a>(lists: impl Iterator<Item = &'a [usize]>) -> Self {
        let mut offsets = vec![0u32];
        let mut items = Vec::new();
        for l in lists {
            items.extend(l.iter().map(|&x| x as u32));
            offsets.push(items.len() as u32);
        }
        Adjacency { offsets, items }
    }

    #[inline]
    fn range(&self, x: usize) -> std::ops::Range<usize> {
        self.offsets[x] as usize..self.offsets[x + 1] as usize
    }
}

/// Fixed-size set of vertex labels with a fast minimum.
struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    fn new(len: usize) -> Self {
        BitSet { words: vec![0; len.div_ceil(64)] }
    }

    #[inline]
    fn insert(&mut self, x: usize) {
        self.words[x / 64] |= 1 << (x % 64);
    }

    #[inline]
    fn remove(&mut self, x: usize) {
        self.words[x / 64] &= !(1 << (x % 64));
    }

    fn first(&self) -> Option<usize> {
        self.words.iter().position(|&w| w != 0).map(|i| i * 64 + self.words[i].trailing_zeros() as usize)
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }
}

const TRACKER_CTX: &str = "unloading";

impl Tracker {
    pub(crate) fn new(graph: &ProximityGraph, m: Vec<Int>) -> Result<Self> {
        debug_assert_eq!(m.len(), graph.n_points());
        let narrow = |v: &[Int]| -> Result<Vec<i64>> {
            v.iter().map(|&x| i64::try_from(x).map_err(|_| Error::Overflow(TRACKER_CTX))).collect()
        };
        let rho = narrow(&excess_vec(graph, &m)?)?;
        let m = narrow(&m)?;
        let mut negative = BitSet::new(rho.len());
        for j in (0..rho.len()).filter(|&j| rho[j] < 0) {
            negative.insert(j);
        }
        let n = graph.n_points();
        let targets = Adjacency::from_lists((0..n).map(|i| graph.targets_of(i)));
        let sources = Adjacency::from_lists((0..n).map(|i| graph.proximate_to(i)));
        Ok(Tracker { m, rho, negative, targets, sources })
    }

    pub(crate) fn excess(&self, j: usize) -> Int {
        Int::from(self.rho[j])
    }

    pub(crate) fn multiplicity(&self, j: usize) -> Int {
        Int::from(self.m[j])
    }

    pub(crate) fn multiplicities(&self) -> Vec<Int> {
        self.m.iter().map(|&x| Int::from(x)).collect()
    }

    pub(crate) fn into_multiplicities(self) -> Vec<Int> {
        self.multiplicities()
    }

    pub(crate) fn first_negative(&self) -> Option<usize> {
        self.negative.first()
    }

    pub(crate) fn negatives(&self) -> impl Iterator<Item = usize> + '_ {
        self.negative.iter()
    }

    #[inline]
    fn touch(&mut self, x: usize) {
        if self.rho[x] < 0 {
            self.negative.insert(x);
        } else {
            self.negative.remove(x);
        }
    }

    /// `m_x += delta`, keeping the excesses in sync.
    #[inline]
    pub(crate) fn shift(&mut self, x: usize, delta: i64) -> Result<()> {
        let overflow = || Error::Overflow(TRACKER_CTX);
        self.m[x] = self.m[x].checked_add(delta).ok_or_else(overflow)?;
        self.rho[x] = self.rho[x].checked_add(delta).ok_or_else(overflow)?;
        self.touch(x);
        for i in self.targets.range(x) {
            let y = self.targets.items[i] as usize;
            self.rho[y] = self.rho[y].checked_sub(delta).ok_or_else(overflow)?;
            self.touch(y);
        }
        Ok(())
    }

    /// Unloading step at `j`: `m_j + 1` and `m_k - 1` for every `k -> j`.
    /// In divisor terms this subtracts the strict transform of the `j`-th
    /// exceptional divisor. Entries may go negative in between; they are
    /// non-negative again once the system is consistent.
    pub(crate) fn unload_at(&mut self, j: usize) -> Result<()> {
        self.shift(j, 1)?;
        for i in self.sources.range(j) {
            let k = self.sources.items[i] as usize;
            self.shift(k, -1)?;
        }
        Ok(())
    }

    /// Unloads at the smallest negative vertex until consistent. Returns
    /// the number of steps and whether all were tame; steps are appended to
    /// `record` when given.
    pub(crate) fn unload_all(&mut self, mut record: Option<&mut Vec<UnloadStep>>) -> Result<(u64, bool)> {
        let mut count = 0u64;
        let mut tame = true;
        while let Some(j) = self.first_negative() {
            if count >= UNLOAD_STEP_CAP {
                return Err(Error::IterationCap("unload"));
            }
            let e = self.excess(j);
            tame &= e == -1;
            if let Some(r) = record.as_deref_mut() {
                r.push(UnloadStep { vertex: j, excess: e });
            }
            self.unload_at(j)?;
            count += 1;
        }
        Ok((count, tame))
    }
}
