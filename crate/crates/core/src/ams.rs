//! Arithmetic data of curves with one place at infinity that are rational
//! and smooth in the affine part: delta-sequences, Newton polygons, the
//! continued fractions giving the proximity relations, and the recipe
//! graphs `G(n_1, ..., n_r)` with their minus/plus decorations.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{self, Int};
use crate::error::{Error, Result};
use crate::proximity::{last_row_of_inverse, ProximityGraph};
use crate::surface::{intersect, DivisorClass};

/// Largest value for which semigroup membership is decided by the table.
const SEMIGROUP_TABLE_LIMIT: Int = 50_000_000;

/// A violated condition of a candidate delta-sequence. Indices follow the
/// usual 1-based numbering of `d_i`, `n_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaViolation {
    /// Fewer than two generators, or a non-positive entry.
    Shape { reason: String },
    /// `d_{s+1} != 1`.
    GcdNotOne { last_gcd: Int },
    /// `n_i == 1`.
    TrivialQuotient { i: usize },
    /// `n_i * delta_i` is not in the semigroup generated by `delta_0..delta_{i-1}`.
    NotInSemigroup { i: usize, value: Int },
    /// `delta_0 <= delta_1`.
    NotDecreasingStart,
    /// `delta_i >= delta_{i-1} * n_{i-1}` for some `i >= 2`.
    TooLarge { i: usize },
}

impl fmt::Display for DeltaViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeltaViolation::Shape { reason } => write!(f, "(I) {reason}"),
            DeltaViolation::GcdNotOne { last_gcd } => write!(f, "(I) last gcd is {last_gcd}, not 1"),
            DeltaViolation::TrivialQuotient { i } => write!(f, "(I) n_{i} = 1"),
            DeltaViolation::NotInSemigroup { i, value } => {
                write!(f, "(II) n_{i}*delta_{i} = {value} is not generated by earlier terms")
            }
            DeltaViolation::NotDecreasingStart => write!(f, "(III) delta_0 > delta_1 fails"),
            DeltaViolation::TooLarge { i } => write!(f, "(III) delta_{i} < delta_{}*n_{} fails", i - 1, i - 1),
        }
    }
}

/// A validated delta-sequence `(delta_0, ..., delta_s)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaSequence {
    pub delta: Vec<Int>,
    /// `d_1, ..., d_{s+1}` with `d_i = gcd(delta_0, ..., delta_{i-1})`.
    pub d: Vec<Int>,
    /// `n_1, ..., n_s` with `n_i = d_i / d_{i+1}`.
    pub nq: Vec<Int>,
}

impl DeltaSequence {
    pub fn s(&self) -> usize {
        self.delta.len() - 1
    }

    /// `d_i`, 1-based.
    pub fn d(&self, i: usize) -> Int {
        self.d[i - 1]
    }

    /// `n_i`, 1-based.
    pub fn n(&self, i: usize) -> Int {
        self.nq[i - 1]
    }
}

pub fn validate_delta_sequence(delta: &[Int]) -> Result<DeltaSequence> {
    let mut violations = Vec::new();
    if delta.len() < 2 {
        violations.push(DeltaViolation::Shape { reason: "at least two generators are needed".into() });
        return Err(Error::InvalidDelta(violations));
    }
    if delta.iter().any(|&x| x <= 0) {
        violations.push(DeltaViolation::Shape { reason: "entries must be positive".into() });
        return Err(Error::InvalidDelta(violations));
    }
    let s = delta.len() - 1;
    let mut d = Vec::with_capacity(s + 1);
    let mut g = 0;
    for &x in delta {
        g = g.gcd(&x);
        d.push(g);
    }
    let nq: Vec<Int> = (0..s).map(|i| d[i] / d[i + 1]).collect();

    // (I)
    if d[s] != 1 {
        violations.push(DeltaViolation::GcdNotOne { last_gcd: d[s] });
    }
    for (i, &q) in nq.iter().enumerate() {
        if q <= 1 {
            violations.push(DeltaViolation::TrivialQuotient { i: i + 1 });
        }
    }
    // (II)
    for i in 1..=s {
        let value = arith::mul(nq[i - 1], delta[i], "delta-sequence")?;
        if !in_semigroup(value, &delta[..i])? {
            violations.push(DeltaViolation::NotInSemigroup { i, value });
        }
    }
    // (III)
    if delta[0] <= delta[1] {
        violations.push(DeltaViolation::NotDecreasingStart);
    }
    for i in 2..=s {
        if delta[i] >= arith::mul(delta[i - 1], nq[i - 2], "delta-sequence")? {
            violations.push(DeltaViolation::TooLarge { i });
        }
    }

    if violations.is_empty() {
        Ok(DeltaSequence { delta: delta.to_vec(), d, nq })
    } else {
        Err(Error::InvalidDelta(violations))
    }
}

/// Membership of `value` in the numerical semigroup generated by `gens`,
/// by a reachability table after dividing out the common gcd.
pub fn in_semigroup(value: Int, gens: &[Int]) -> Result<bool> {
    if value == 0 {
        return Ok(true);
    }
    let g = gens.iter().fold(0, |acc: Int, &x| acc.gcd(&x));
    if value < 0 || g == 0 || value % g != 0 {
        return Ok(false);
    }
    let target = value / g;
    if target > SEMIGROUP_TABLE_LIMIT {
        return Err(Error::InvalidInput(format!(
            "semigroup membership for {value} exceeds the table limit"
        )));
    }
    let gens: Vec<usize> = gens.iter().map(|&x| (x / g) as usize).collect();
    let target = target as usize;
    let mut reach = vec![false; target + 1];
    reach[0] = true;
    for v in 1..=target {
        reach[v] = gens.iter().any(|&x| x <= v && reach[v - x]);
    }
    Ok(reach[target])
}

/// Newton polygon data `(m_i, e_i)`, `i = 0..g-1`, of the branch at infinity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonData {
    pub pairs: Vec<NewtonPair>,
    pub g: usize,
    /// Whether `delta_0 - delta_1` divides `delta_0`.
    pub divides: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonPair {
    pub m: Int,
    pub e: Int,
}

pub fn newton_polygons(ds: &DeltaSequence) -> Result<NewtonData> {
    const CTX: &str = "newton polygons";
    let delta = &ds.delta;
    let s = ds.s();
    let diff = delta[0] - delta[1];
    let divides = delta[0] % diff == 0;
    let mut pairs = Vec::new();
    if !divides {
        pairs.push(NewtonPair { m: delta[0], e: diff });
        for i in 1..s {
            let m = arith::sub(arith::mul(ds.n(i), delta[i], CTX)?, delta[i + 1], CTX)?;
            pairs.push(NewtonPair { m, e: ds.d(i + 1) });
        }
    } else if s >= 2 {
        let m0 = arith::sub(arith::add(delta[0], arith::mul(ds.n(1), delta[1], CTX)?, CTX)?, delta[2], CTX)?;
        pairs.push(NewtonPair { m: m0, e: ds.d(2) });
        for i in 1..s - 1 {
            let m = arith::sub(arith::mul(ds.n(i + 1), delta[i + 1], CTX)?, delta[i + 2], CTX)?;
            pairs.push(NewtonPair { m, e: ds.d(i + 2) });
        }
    }
    let g = pairs.len();
    Ok(NewtonData { pairs, g, divides })
}

/// Partial quotients of `p / q` (`p, q > 0`) by the Euclidean algorithm.
/// All quotients after the first are positive and the last is at least 2
/// whenever there are two or more.
pub fn continued_fraction(p: Int, q: Int) -> Vec<Int> {
    let (mut p, mut q) = (p, q);
    let mut out = Vec::new();
    while q != 0 {
        out.push(p.div_euclid(q));
        let r = p.rem_euclid(q);
        p = q;
        q = r;
    }
    out
}

/// Evaluates `[a_0; a_1, ..., a_k]` as a reduced fraction.
pub fn evaluate_continued_fraction(quotients: &[Int]) -> Result<(Int, Int)> {
    const CTX: &str = "continued fraction";
    let (mut num, mut den): (Int, Int) = (1, 0);
    for &a in quotients.iter().rev() {
        let next = arith::add(arith::mul(a, num, CTX)?, den, CTX)?;
        den = num;
        num = next;
    }
    let g = num.gcd(&den);
    Ok((num / g, den / g))
}

/// The integers `h_i`, `k_t`, `s_t` read off the continued fractions, from
/// which the proximity relations follow.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionCombinatorics {
    /// `h_0, ..., h_{s_g - 1}`.
    pub h: Vec<Int>,
    /// `k_1, ..., k_g`.
    pub k: Vec<Int>,
    /// `s_1, ..., s_g`.
    pub s: Vec<usize>,
}

impl ResolutionCombinatorics {
    pub fn g(&self) -> usize {
        self.k.len()
    }

    pub fn s_g(&self) -> usize {
        self.s.last().copied().unwrap_or(0)
    }

    /// `f(n) = k_t - 1` when `n = s_t`, else `h_n`; `1 <= n <= s_g`.
    pub fn f(&self, n: usize) -> Int {
        match self.s.iter().position(|&st| st == n) {
            Some(t) => self.k[t] - 1,
            None => self.h[n],
        }
    }

    /// Satellite proximities `(l, sum_{i<n} h_i - 1)` for every
    /// `sum_{i<n} h_i < l <= sum_{i<n} h_i + f(n)`.
    pub fn satellite_pairs(&self) -> Result<Vec<(usize, usize)>> {
        let mut out = Vec::new();
        let mut base: Int = 0;
        for n in 1..=self.s_g() {
            base = arith::add(base, self.h[n - 1], "proximity relations")?;
            let f = self.f(n);
            if base < 1 || f < 0 {
                return Err(Error::AssumptionViolation(format!(
                    "continued fraction data give base {base} and f({n}) = {f}"
                )));
            }
            let target = to_index(base - 1)?;
            for l in base + 1..=base + f {
                out.push((to_index(l)?, target));
            }
        }
        Ok(out)
    }
}

fn to_index(x: Int) -> Result<usize> {
    usize::try_from(x).map_err(|_| Error::Overflow("vertex label"))
}

pub fn resolution_combinatorics(ds: &DeltaSequence) -> Result<ResolutionCombinatorics> {
    const CTX: &str = "continued fractions";
    let newton = newton_polygons(ds)?;
    let mut h = Vec::new();
    let mut k = Vec::new();
    let mut s = Vec::new();
    let mut prev_k: Int = 0;
    for (j, pair) in newton.pairs.iter().enumerate() {
        // m/e + k_{j-1} = (m + k e) / e
        let num = arith::add(pair.m, arith::mul(prev_k, pair.e, CTX)?, CTX)?;
        let den = pair.e;
        let cf = continued_fraction(num, den);
        if cf.len() < 2 {
            return Err(Error::AssumptionViolation(format!(
                "continued fraction of {num}/{den} (j = {}) has no terminal quotient distinct from the integer part; \
                 inconsistent with g = {}",
                j + 1,
                newton.g
            )));
        }
        let (last, head) = cf.split_last().expect("non-empty");
        // The expansion must reproduce the rational exactly.
        let (p, q) = evaluate_continued_fraction(&cf)?;
        let gg = num.gcd(&den);
        if (p, q) != (num / gg, den / gg) {
            return Err(Error::AssumptionViolation(format!("continued fraction of {num}/{den} does not evaluate back")));
        }
        h.extend_from_slice(head);
        k.push(*last);
        s.push(h.len());
        prev_k = *last;
    }
    Ok(ResolutionCombinatorics { h, k, s })
}

/// Number of points of the minimal resolution encoded by `ds`: one past
/// the last satellite point, and at least two.
pub fn minimal_resolution_points(ds: &DeltaSequence) -> Result<usize> {
    let rc = resolution_combinatorics(ds)?;
    let last = rc.satellite_pairs()?.iter().map(|&(l, _)| l + 1).max().unwrap_or(0);
    Ok(last.max(2))
}

/// Proximity graph on `n_points` points of the branch at infinity encoded by
/// `ds`. Points beyond the satellite relations are free.
pub fn delta_to_proximity(ds: &DeltaSequence, n_points: usize) -> Result<ProximityGraph> {
    let sats = resolution_combinatorics(ds)?.satellite_pairs()?;
    if let Some(&(l, _)) = sats.iter().find(|&&(l, _)| l >= n_points) {
        return Err(Error::Precondition(format!(
            "{n_points} points requested but the resolution has a satellite point with label {l}"
        )));
    }
    ProximityGraph::new(n_points, (1..n_points).map(|i| (i, i - 1)).chain(sats))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decoration {
    Plain,
    Minus,
    Plus,
}

/// `(n_1, ..., n_r)` with every `n_i >= 2`, plus a decoration.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct GraphRecipe {
    factors: Vec<u64>,
    decoration: Decoration,
}

impl GraphRecipe {
    pub fn new(factors: Vec<u64>, decoration: Decoration) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidInput("a recipe needs at least one factor".into()));
        }
        if let Some(&f) = factors.iter().find(|&&f| f < 2) {
            return Err(Error::InvalidInput(format!("recipe factor {f} is smaller than 2")));
        }
        Ok(GraphRecipe { factors, decoration })
    }

    pub fn plus(factors: Vec<u64>) -> Result<Self> {
        Self::new(factors, Decoration::Plus)
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn decoration(&self) -> Decoration {
        self.decoration
    }

    pub fn with_decoration(&self, decoration: Decoration) -> Self {
        GraphRecipe { factors: self.factors.clone(), decoration }
    }

    /// `2 sum n_i - r`, adjusted by the decoration.
    pub fn vertex_count(&self) -> usize {
        let plain: usize = self.factors.iter().map(|&f| 2 * f as usize - 1).sum();
        match self.decoration {
            Decoration::Plain => plain,
            Decoration::Minus => plain - (*self.factors.last().expect("non-empty") as usize - 1),
            Decoration::Plus => plain + 1,
        }
    }

    /// `delta_k = n_{k+1} ... n_r` for `k = 0..r-1`, and `delta_r = 1`.
    pub fn delta_sequence(&self) -> Result<Vec<Int>> {
        let r = self.factors.len();
        let mut out = vec![1 as Int; r + 1];
        for k in (0..r).rev() {
            out[k] = arith::mul(out[k + 1], Int::from(self.factors[k]), "delta-sequence of recipe")?;
        }
        Ok(out)
    }
}

impl fmt::Display for GraphRecipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, x) in self.factors.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")?;
        match self.decoration {
            Decoration::Plain => Ok(()),
            Decoration::Minus => f.write_str("-"),
            Decoration::Plus => f.write_str("+"),
        }
    }
}

/// Parses `"(10)+"`, `"(2,2)-"`, `"(3,4,2)"`.
impl FromStr for GraphRecipe {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (body, decoration) = if let Some(b) = s.strip_suffix('+') {
            (b, Decoration::Plus)
        } else if let Some(b) = s.strip_suffix('-') {
            (b, Decoration::Minus)
        } else {
            (s, Decoration::Plain)
        };
        let inner = body
            .trim()
            .strip_prefix('(')
            .and_then(|b| b.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("recipe '{s}' must look like (n1,...,nr) with optional +/-")))?;
        let factors = inner
            .split(',')
            .map(|t| t.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad factor '{t}' in recipe '{s}'"))))
            .collect::<Result<Vec<_>>>()?;
        GraphRecipe::new(factors, decoration)
    }
}

impl TryFrom<String> for GraphRecipe {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<GraphRecipe> for String {
    fn from(r: GraphRecipe) -> String {
        r.to_string()
    }
}

/// The graph `G(n_1) ^ G(n_2) ^ ... ^ G(n_r)` with the recipe's decoration.
pub fn build_graph(recipe: &GraphRecipe) -> Result<ProximityGraph> {
    let plain_len: usize = recipe.factors.iter().map(|&f| 2 * f as usize - 1).sum();
    let mut pairs: Vec<(usize, usize)> = (1..plain_len).map(|i| (i, i - 1)).collect();
    let mut offset = 0usize;
    for (k, &f) in recipe.factors.iter().enumerate() {
        let f = f as usize;
        // G(f): p_i -> p_0 for 2 <= i <= f - 1.
        pairs.extend((2..f).map(|i| (offset + i, offset)));
        if k > 0 {
            // second vertex of the right block -> last vertex of the left one
            pairs.push((offset + 1, offset - 1));
        }
        offset += 2 * f - 1;
    }
    let plain = ProximityGraph::new(plain_len, pairs)?;
    match recipe.decoration {
        Decoration::Plain => Ok(plain),
        Decoration::Minus => plain.restrict(recipe.vertex_count()),
        Decoration::Plus => Ok(plain.extend_free(1)),
    }
}

/// Result of the chain P-sufficiency test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PSufficiency {
    pub p_sufficient: bool,
    /// `-9 D_n^2 - (K . D_n)^2`.
    pub witness: Int,
    /// Last row of the inverse proximity matrix.
    pub last_row: Vec<Int>,
}

/// For a chain configuration, P-sufficiency reduces to the sign of
/// `-9 D_n^2 - (K . D_n)^2` where `D_n = sum_j b_{nj} E_j`.
pub fn is_p_sufficient_chain(g: &ProximityGraph) -> Result<PSufficiency> {
    if !g.is_chain() {
        return Err(Error::InvalidInput("P-sufficiency test needs a chain graph".into()));
    }
    const CTX: &str = "P-sufficiency";
    let u = last_row_of_inverse(g)?;
    let dn = DivisorClass::new(0, u.clone());
    let k = DivisorClass::canonical(g.n_points());
    let self_int = intersect(&dn, &dn)?;
    let kd = intersect(&k, &dn)?;
    let witness = arith::sub(arith::mul(-9, self_int, CTX)?, arith::mul(kd, kd, CTX)?, CTX)?;
    Ok(PSufficiency { p_sufficient: witness > 0, witness, last_row: u })
}

/// Degree `n_1 n_2 ... n_r` of the corresponding curve.
pub fn ams_degree(recipe: &GraphRecipe) -> Result<Int> {
    recipe
        .factors
        .iter()
        .try_fold(1 as Int, |acc, &f| arith::mul(acc, Int::from(f), "degree"))
}

/// Representatives of the graphs with at least `n + 1` vertices, up to
/// agreement on the first `n + 1` vertices: `r = 1` with
/// `(n+1)/2 <= n_1 <= n+1`, or `r > 1` with `t = n - 2 sum_{i<r} n_i + r > 0`
/// and `t/2 <= n_r <= t`. Sorted lexicographically by factors.
pub fn enumerate_representatives(n: usize) -> Result<Vec<GraphRecipe>> {
    if n < 1 {
        return Err(Error::Precondition("representatives need n >= 1".into()));
    }
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    collect_representatives(n, &mut prefix, 0, &mut out);
    out.sort();
    Ok(out)
}

/// `weight` is `sum_{i<r} (2 n_i - 1)`, so that `t = n + 1 - weight`.
fn collect_representatives(n: usize, prefix: &mut Vec<u64>, weight: usize, out: &mut Vec<GraphRecipe>) {
    let t = n + 1 - weight;
    // last factor
    let (lo, hi) = if prefix.is_empty() { ((n + 2) / 2, n + 1) } else { (t.div_ceil(2), t) };
    for last in lo.max(2)..=hi {
        let mut f = prefix.clone();
        f.push(last as u64);
        out.push(GraphRecipe { factors: f, decoration: Decoration::Plus });
    }
    // longer prefixes, keeping t > 0
    let mut x = 2usize;
    while weight + 2 * x - 1 <= n {
        prefix.push(x as u64);
        collect_representatives(n, prefix, weight + 2 * x - 1, out);
        prefix.pop();
        x += 1;
    }
}

/// Number of representatives, without listing them (saturating).
pub fn count_representatives(n: usize) -> u128 {
    if n < 1 {
        return 0;
    }
    let last_choices = |lo: usize, hi: usize| -> u128 { (hi + 1).saturating_sub(lo.max(2)) as u128 };
    // ways[w]: ordered non-empty prefixes with weight w
    let mut ways = vec![0u128; n + 1];
    let mut total = last_choices((n + 2) / 2, n + 1);
    let mut base = vec![0u128; n + 1];
    base[0] = 1;
    for w in 0..=n {
        let from = base[w].saturating_add(ways[w]);
        if from == 0 {
            continue;
        }
        let mut x = 2usize;
        while w + 2 * x - 1 <= n {
            let nw = w + 2 * x - 1;
            ways[nw] = ways[nw].saturating_add(from);
            x += 1;
        }
    }
    for (w, &count) in ways.iter().enumerate().skip(1).filter(|(_, &c)| c > 0) {
        let t = n + 1 - w;
        total = total.saturating_add(count.saturating_mul(last_choices(t.div_ceil(2), t)));
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proximity::ProximityGraph;

    fn recipe(s: &str) -> GraphRecipe {
        s.parse().unwrap()
    }

    #[test]
    fn delta_validation_examples() {
        let ds = validate_delta_sequence(&[4, 2, 1]).unwrap();
        assert_eq!(ds.d, vec![4, 2, 1]);
        assert_eq!(ds.nq, vec![2, 2]);
        let ds = validate_delta_sequence(&[3, 1]).unwrap();
        assert_eq!(ds.d, vec![3, 1]);
        assert_eq!(ds.nq, vec![3]);
        match validate_delta_sequence(&[2, 3]) {
            Err(Error::InvalidDelta(v)) => assert!(v.contains(&DeltaViolation::NotDecreasingStart)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn delta_violations_are_reported_independently() {
        // gcd 2 at the end, and 4 <= 4 breaks (III).
        match validate_delta_sequence(&[4, 4, 2]) {
            Err(Error::InvalidDelta(v)) => {
                assert!(v.iter().any(|x| matches!(x, DeltaViolation::GcdNotOne { last_gcd: 2 })));
                assert!(v.contains(&DeltaViolation::NotDecreasingStart));
                assert!(v.iter().any(|x| matches!(x, DeltaViolation::TrivialQuotient { i: 1 })));
            }
            other => panic!("unexpected {other:?}"),
        }
        // (II) alone: n_2 delta_2 = 2*3 = 6 is not in <10, 4>.
        match validate_delta_sequence(&[10, 4, 3]) {
            Err(Error::InvalidDelta(v)) => {
                assert_eq!(v, vec![DeltaViolation::NotInSemigroup { i: 2, value: 6 }])
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(validate_delta_sequence(&[5]).is_err());
        assert!(validate_delta_sequence(&[3, 0]).is_err());
    }

    #[test]
    fn semigroup_membership() {
        assert!(in_semigroup(7, &[3, 4]).unwrap());
        assert!(!in_semigroup(5, &[3, 4]).unwrap());
        assert!(in_semigroup(0, &[3]).unwrap());
        assert!(!in_semigroup(7, &[2, 4]).unwrap());
        assert!(in_semigroup(10, &[4, 6]).unwrap());
    }

    #[test]
    fn newton_examples() {
        let n = newton_polygons(&validate_delta_sequence(&[3, 1]).unwrap()).unwrap();
        assert_eq!((n.g, n.divides), (1, false));
        assert_eq!(n.pairs, vec![NewtonPair { m: 3, e: 2 }]);
        let n = newton_polygons(&validate_delta_sequence(&[4, 2, 1]).unwrap()).unwrap();
        assert_eq!((n.g, n.divides), (1, true));
        assert_eq!(n.pairs, vec![NewtonPair { m: 7, e: 2 }]);
        let n = newton_polygons(&validate_delta_sequence(&[2, 1]).unwrap()).unwrap();
        assert_eq!(n.g, 0);
        assert!(n.pairs.is_empty());
    }

    #[test]
    fn continued_fractions() {
        assert_eq!(continued_fraction(7, 2), vec![3, 2]);
        assert_eq!(continued_fraction(11, 3), vec![3, 1, 2]);
        assert_eq!(continued_fraction(3, 2), vec![1, 2]);
        assert_eq!(evaluate_continued_fraction(&[3, 1, 2]).unwrap(), (11, 3));
    }

    #[test]
    fn resolution_data_for_small_sequences() {
        let rc = resolution_combinatorics(&validate_delta_sequence(&[4, 2, 1]).unwrap()).unwrap();
        assert_eq!(rc.h, vec![3]);
        assert_eq!(rc.k, vec![2]);
        assert_eq!(rc.s, vec![1]);
        assert_eq!(rc.satellite_pairs().unwrap(), vec![(4, 2)]);

        // (6,2,1): first case, two Newton pairs (6,4), (5,2).
        let rc = resolution_combinatorics(&validate_delta_sequence(&[6, 2, 1]).unwrap()).unwrap();
        assert_eq!(rc.h, vec![1, 4]);
        assert_eq!(rc.k, vec![2, 2]);
        assert_eq!(rc.satellite_pairs().unwrap(), vec![(2, 0), (6, 4)]);
    }

    #[test]
    fn delta_to_graph_examples() {
        let ds = validate_delta_sequence(&[3, 1]).unwrap();
        assert_eq!(minimal_resolution_points(&ds).unwrap(), 3);
        assert_eq!(delta_to_proximity(&ds, 3).unwrap(), build_graph(&recipe("(3)-")).unwrap());

        let ds = validate_delta_sequence(&[4, 2, 1]).unwrap();
        assert_eq!(minimal_resolution_points(&ds).unwrap(), 5);
        assert_eq!(delta_to_proximity(&ds, 5).unwrap(), build_graph(&recipe("(2,2)-")).unwrap());

        let ds = validate_delta_sequence(&[2, 1]).unwrap();
        let g = delta_to_proximity(&ds, 4).unwrap();
        assert_eq!(g, ProximityGraph::free_chain(4).unwrap());
        assert!(delta_to_proximity(&validate_delta_sequence(&[4, 2, 1]).unwrap(), 4).is_err());
    }

    #[test]
    fn build_graph_examples() {
        let g = build_graph(&recipe("(2,2)-")).unwrap();
        assert_eq!(g.n_points(), 5);
        assert_eq!(g.pairs(), &[(1, 0), (2, 1), (3, 2), (4, 2), (4, 3)]);

        let g = build_graph(&recipe("(2)+")).unwrap();
        assert_eq!(g, ProximityGraph::free_chain(4).unwrap());

        for k in 2..6u64 {
            let r = GraphRecipe::plus(vec![2; k as usize]).unwrap();
            let g = build_graph(&r).unwrap();
            assert_eq!(g.n_points(), 3 * k as usize + 1);
            let sats: Vec<_> = g.curved_dotted().collect();
            let expected: Vec<_> = (1..k as usize).map(|j| (3 * j + 1, 3 * j - 1)).collect();
            assert_eq!(sats, expected);
        }

        let g = build_graph(&recipe("(3)-")).unwrap();
        assert_eq!(g.pairs(), &[(1, 0), (2, 0), (2, 1)]);
        let g = build_graph(&recipe("(5)")).unwrap();
        assert_eq!(g.n_points(), 9);
        assert_eq!(g.curved_dotted().collect::<Vec<_>>(), vec![(2, 0), (3, 0), (4, 0)]);
        assert!("(1,2)".parse::<GraphRecipe>().is_err());
    }

    #[test]
    fn arrow_operation_matches_the_drawn_example() {
        // F1 = G(3) with two free points removed from G(4)-like shape is not a
        // recipe; use G(3) ^ G(3) and read the glued edges directly.
        let g = build_graph(&recipe("(3,3)")).unwrap();
        assert_eq!(g.n_points(), 10);
        assert!(g.is_proximate(5, 4));
        assert!(g.is_proximate(6, 4));
        assert!(g.is_proximate(7, 5));
        assert!(!g.is_proximate(7, 4));
    }

    #[test]
    fn recipe_parsing_and_counts() {
        for s in ["(10)+", "(2,2)-", "(3,4,2)"] {
            assert_eq!(recipe(s).to_string(), s);
        }
        assert_eq!(recipe("(10)+").vertex_count(), 20);
        assert_eq!(recipe("(2,2)-").vertex_count(), 5);
        assert_eq!(recipe("(3,4,2)").vertex_count(), 15);
        assert!("10+".parse::<GraphRecipe>().is_err());
        assert!("(a)".parse::<GraphRecipe>().is_err());
        assert_eq!(recipe("(3,4,2)").delta_sequence().unwrap(), vec![24, 8, 2, 1]);
    }

    #[test]
    fn degree_examples() {
        assert_eq!(ams_degree(&recipe("(10)")).unwrap(), 10);
        assert_eq!(ams_degree(&recipe("(2,2)")).unwrap(), 4);
        assert_eq!(ams_degree(&recipe("(3,5,7)")).unwrap(), 105);
        let huge = GraphRecipe::plus(vec![u64::MAX; 3]).unwrap();
        assert!(matches!(ams_degree(&huge), Err(Error::Overflow(_))));
    }

    #[test]
    fn p_sufficiency_examples() {
        let ps = is_p_sufficient_chain(&build_graph(&recipe("(2)+")).unwrap()).unwrap();
        assert_eq!(ps.witness, 20);
        assert!(ps.p_sufficient);
        let ps = is_p_sufficient_chain(&ProximityGraph::free_chain(10).unwrap()).unwrap();
        assert_eq!(ps.witness, -10);
        assert!(!ps.p_sufficient);
        let not_chain = ProximityGraph::new(3, [(2, 0)]).unwrap();
        assert!(is_p_sufficient_chain(&not_chain).is_err());
    }

    #[test]
    fn representative_examples() {
        let names = |n| enumerate_representatives(n).unwrap().iter().map(|r| r.to_string()).collect::<Vec<_>>();
        assert_eq!(names(3), vec!["(2)+", "(3)+", "(4)+"]);
        assert_eq!(names(1), vec!["(2)+"]);
        assert_eq!(names(5), vec!["(2,2)+", "(2,3)+", "(3)+", "(4)+", "(5)+", "(6)+"]);
        assert!(enumerate_representatives(0).is_err());
    }

    #[test]
    fn representatives_are_distinct_on_first_points_and_counted() {
        for n in 1..=14 {
            let reps = enumerate_representatives(n).unwrap();
            assert_eq!(reps.len() as u128, count_representatives(n), "n = {n}");
            let mut seen = std::collections::HashSet::new();
            for r in &reps {
                let g = build_graph(r).unwrap();
                assert!(g.n_points() > n);
                assert!(seen.insert(g.restrict(n + 1).unwrap()), "duplicate class for {r} at n = {n}");
            }
        }
    }
}
