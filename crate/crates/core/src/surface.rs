//! The Picard lattice of the blown-up plane: intersection form, canonical
//! class, the cone generated by `H~` and the strict transforms `E~_i`, and
//! the computation of `h^0`, `h^1`, `h^2` of classes on surfaces attached
//! to recipe graphs.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ams::{build_graph, Decoration, GraphRecipe};
use crate::arith::{self, Int};
use crate::error::{Error, Result};
use crate::proximity::{ProximityGraph, Tracker};

/// Guard against runaway reductions; never reached for sane input.
pub const NEF_REDUCE_STEP_CAP: u64 = 1 << 40;

/// `a L + sum_i c_i E_i`. The system of curves of degree `d` through
/// multiplicities `m` is `a = d`, `c_i = -m_i`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "ClassRepr", from = "ClassRepr")]
pub struct DivisorClass {
    a: Int,
    c: Vec<Int>,
}

#[derive(Serialize, Deserialize)]
struct ClassRepr {
    d: Int,
    m: Vec<Int>,
}

impl From<ClassRepr> for DivisorClass {
    fn from(r: ClassRepr) -> Self {
        DivisorClass::from_system(r.d, &r.m)
    }
}

impl From<DivisorClass> for ClassRepr {
    fn from(c: DivisorClass) -> Self {
        ClassRepr { d: c.a, m: c.multiplicities() }
    }
}

impl DivisorClass {
    pub fn new(a: Int, c: Vec<Int>) -> Self {
        DivisorClass { a, c }
    }

    /// `d L - sum m_i E_i`.
    pub fn from_system(d: Int, m: &[Int]) -> Self {
        DivisorClass { a: d, c: m.iter().map(|&x| -x).collect() }
    }

    pub fn zero(rank: usize) -> Self {
        DivisorClass { a: 0, c: vec![0; rank] }
    }

    pub fn line(rank: usize) -> Self {
        DivisorClass { a: 1, c: vec![0; rank] }
    }

    pub fn exceptional(i: usize, rank: usize) -> Self {
        let mut c = vec![0; rank];
        c[i] = 1;
        DivisorClass { a: 0, c }
    }

    /// `K = -3 L + sum E_i`.
    pub fn canonical(rank: usize) -> Self {
        DivisorClass { a: -3, c: vec![1; rank] }
    }

    /// Coefficient of `L`, the degree.
    pub fn degree(&self) -> Int {
        self.a
    }

    pub fn coefficients(&self) -> &[Int] {
        &self.c
    }

    /// `-c`, the multiplicities of the system.
    pub fn multiplicities(&self) -> Vec<Int> {
        self.c.iter().map(|&x| -x).collect()
    }

    /// Number of exceptional classes.
    pub fn rank(&self) -> usize {
        self.c.len()
    }

    pub fn checked_add(&self, other: &DivisorClass) -> Result<DivisorClass> {
        self.combine(other, 1)
    }

    pub fn checked_sub(&self, other: &DivisorClass) -> Result<DivisorClass> {
        self.combine(other, -1)
    }

    pub fn scaled(&self, k: Int) -> Result<DivisorClass> {
        const CTX: &str = "divisor scaling";
        Ok(DivisorClass {
            a: arith::mul(self.a, k, CTX)?,
            c: self.c.iter().map(|&x| arith::mul(x, k, CTX)).collect::<Result<_>>()?,
        })
    }

    fn combine(&self, other: &DivisorClass, sign: Int) -> Result<DivisorClass> {
        const CTX: &str = "divisor arithmetic";
        same_rank(self, other)?;
        Ok(DivisorClass {
            a: arith::add(self.a, sign * other.a, CTX)?,
            c: self
                .c
                .iter()
                .zip(&other.c)
                .map(|(&x, &y)| arith::add(x, sign * y, CTX))
                .collect::<Result<_>>()?,
        })
    }
}

impl fmt::Debug for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}L", self.a)?;
        for (i, &x) in self.c.iter().enumerate() {
            if x != 0 {
                write!(f, " {} {}E{i}", if x < 0 { '-' } else { '+' }, x.abs())?;
            }
        }
        Ok(())
    }
}

fn same_rank(a: &DivisorClass, b: &DivisorClass) -> Result<()> {
    if a.c.len() != b.c.len() {
        return Err(Error::InvalidInput(format!(
            "classes live in lattices of different rank ({} vs {})",
            a.c.len(),
            b.c.len()
        )));
    }
    Ok(())
}

/// `D . D' = a a' - sum c_i c'_i`.
pub fn intersect(d1: &DivisorClass, d2: &DivisorClass) -> Result<Int> {
    const CTX: &str = "intersection";
    same_rank(d1, d2)?;
    d1.c.iter().zip(&d2.c).try_fold(arith::mul(d1.a, d2.a, CTX)?, |acc, (&x, &y)| {
        arith::sub(acc, arith::mul(x, y, CTX)?, CTX)
    })
}

/// `chi(D) = 1 + (D^2 - K.D) / 2`.
pub fn euler_characteristic(d: &DivisorClass) -> Result<Int> {
    const CTX: &str = "Euler characteristic";
    // D^2 - K.D = a^2 + 3a - sum (c^2 - c)
    let mut twice = arith::add(arith::mul(d.a, d.a, CTX)?, arith::mul(3, d.a, CTX)?, CTX)?;
    for &x in &d.c {
        twice = arith::sub(twice, arith::mul(x, arith::sub(x, 1, CTX)?, CTX)?, CTX)?;
    }
    Ok(1 + twice / 2)
}

/// Which linear pencil is used to declare a class empty during the nef
/// reduction, besides `D . L < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmptinessTest {
    /// `D . (L - E_0) < 0`. `L - E_0` is nef on these surfaces, so the test
    /// is sound.
    #[default]
    PencilThroughFirst,
    /// `D . (L - E_1) < 0`. Reports some effective classes as empty, for
    /// instance `3 H~ + E~_0`; every such case is caught by the
    /// cone-coordinate check and raised as an error.
    PencilThroughSecond,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionStatus {
    Nef,
    Empty,
}

/// Outcome of repeatedly removing fixed components `H~`, `E~_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NefReduction {
    pub terminal: DivisorClass,
    pub status: ReductionStatus,
    /// How many times `H~` was subtracted.
    pub h_tilde_removed: Int,
    /// How many times each `E~_i` was subtracted.
    pub e_tilde_removed: Vec<Int>,
    pub steps: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cohomology {
    pub h0: Int,
    pub h1: Int,
    pub h2: Int,
    pub chi: Int,
}

/// The lattice of a blow-up along a proximity graph. When built from a
/// plus-decorated recipe it is the surface `X_C` and the cohomology engine
/// is available.
#[derive(Debug, Clone)]
pub struct SurfaceModel {
    graph: ProximityGraph,
    recipe: Option<GraphRecipe>,
    emptiness: EmptinessTest,
}

impl SurfaceModel {
    pub fn from_recipe(recipe: &GraphRecipe) -> Result<Self> {
        if recipe.decoration() != Decoration::Plus {
            return Err(Error::InvalidInput(format!(
                "surface needs a plus-decorated recipe, got {recipe}"
            )));
        }
        Ok(SurfaceModel { graph: build_graph(recipe)?, recipe: Some(recipe.clone()), emptiness: EmptinessTest::default() })
    }

    /// Lattice arithmetic only; `h0`/`h1` are refused.
    pub fn lattice_only(graph: ProximityGraph) -> Self {
        SurfaceModel { graph, recipe: None, emptiness: EmptinessTest::default() }
    }

    pub fn with_emptiness_test(mut self, t: EmptinessTest) -> Self {
        self.emptiness = t;
        self
    }

    pub fn graph(&self) -> &ProximityGraph {
        &self.graph
    }

    pub fn recipe(&self) -> Option<&GraphRecipe> {
        self.recipe.as_ref()
    }

    /// Number of exceptional classes `E_0..E_n`.
    pub fn rank(&self) -> usize {
        self.graph.n_points()
    }

    pub fn canonical(&self) -> DivisorClass {
        DivisorClass::canonical(self.rank())
    }

    /// `H~ = L - E_0 - E_1`.
    pub fn h_tilde(&self) -> DivisorClass {
        let mut c = vec![0; self.rank()];
        c[0] = -1;
        if self.rank() > 1 {
            c[1] = -1;
        }
        DivisorClass::new(1, c)
    }

    /// `E~_i = E_i - sum_{k -> i} E_k`.
    pub fn e_tilde(&self, i: usize) -> DivisorClass {
        let mut c = vec![0; self.rank()];
        c[i] = 1;
        for &k in self.graph.proximate_to(i) {
            c[k] = -1;
        }
        DivisorClass::new(0, c)
    }

    fn check(&self, d: &DivisorClass) -> Result<()> {
        if d.rank() != self.rank() {
            return Err(Error::InvalidInput(format!(
                "class has {} exceptional coefficients, surface has {}",
                d.rank(),
                self.rank()
            )));
        }
        Ok(())
    }

    /// `D . H~ = a + c_0 + c_1`.
    pub fn dot_h_tilde(&self, d: &DivisorClass) -> Result<Int> {
        self.check(d)?;
        let c1 = if self.rank() > 1 { d.c[1] } else { 0 };
        arith::add(arith::add(d.a, d.c[0], "intersection")?, c1, "intersection")
    }

    /// `D . E~_i`, the excess at `i` of the multiplicities `-c`.
    pub fn dot_e_tilde(&self, d: &DivisorClass, i: usize) -> Result<Int> {
        self.check(d)?;
        self.graph
            .proximate_to(i)
            .iter()
            .try_fold(-d.c[i], |acc, &k| arith::add(acc, d.c[k], "intersection"))
    }

    /// `(alpha; beta_0..beta_n)` with `D = alpha H~ + sum beta_i E~_i`.
    pub fn cone_coordinates(&self, d: &DivisorClass) -> Result<Vec<Int>> {
        const CTX: &str = "cone coordinates";
        self.check(d)?;
        let alpha = d.a;
        let mut beta = vec![0 as Int; self.rank()];
        for k in 0..self.rank() {
            let mut b = d.c[k];
            if k <= 1 {
                b = arith::add(b, alpha, CTX)?;
            }
            for &i in self.graph.targets_of(k) {
                b = arith::add(b, beta[i], CTX)?;
            }
            beta[k] = b;
        }
        let mut out = Vec::with_capacity(self.rank() + 1);
        out.push(alpha);
        out.extend(beta);
        Ok(out)
    }

    /// Inverse of [`cone_coordinates`](Self::cone_coordinates).
    pub fn from_cone_coordinates(&self, coords: &[Int]) -> Result<DivisorClass> {
        if coords.len() != self.rank() + 1 {
            return Err(Error::InvalidInput("wrong number of cone coordinates".into()));
        }
        let mut d = self.h_tilde().scaled(coords[0])?;
        for (i, &b) in coords[1..].iter().enumerate() {
            if b != 0 {
                d = d.checked_add(&self.e_tilde(i).scaled(b)?)?;
            }
        }
        Ok(d)
    }

    /// Effective iff every cone coordinate is non-negative.
    pub fn is_effective(&self, d: &DivisorClass) -> Result<bool> {
        Ok(self.cone_coordinates(d)?.iter().all(|&x| x >= 0))
    }

    pub fn is_nef(&self, d: &DivisorClass) -> Result<bool> {
        if self.dot_h_tilde(d)? < 0 {
            return Ok(false);
        }
        for i in 0..self.rank() {
            if self.dot_e_tilde(d, i)? < 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Subtracts `H~` or the first `E~_i` meeting the class negatively
    /// until the class is nef or recognisably empty. `h^0` is unchanged
    /// along the way. The verdict is checked against the cone coordinates.
    pub fn nef_reduce(&self, d: &DivisorClass) -> Result<NefReduction> {
        self.check(d)?;
        if self.rank() < 2 {
            return Err(Error::Precondition("nef reduction needs at least two points".into()));
        }
        let cone_empty = self.cone_coordinates(d)?.iter().any(|&x| x < 0);

        let mut a = d.a;
        let mut t = Tracker::new(&self.graph, d.multiplicities())?;
        let mut h_removed: Int = 0;
        let mut e_removed = vec![0 as Int; self.rank()];
        let mut steps = 0u64;
        let status = loop {
            let (m0, m1) = (t.multiplicity(0), t.multiplicity(1));
            let pencil = match self.emptiness {
                EmptinessTest::PencilThroughFirst => a - m0,
                EmptinessTest::PencilThroughSecond => a - m1,
            };
            if a < 0 || pencil < 0 {
                break ReductionStatus::Empty;
            }
            if steps >= NEF_REDUCE_STEP_CAP {
                return Err(Error::IterationCap("nef reduction"));
            }
            if a - m0 - m1 < 0 {
                a -= 1;
                t.shift(0, -1)?;
                t.shift(1, -1)?;
                h_removed += 1;
            } else if let Some(j) = t.first_negative() {
                t.unload_at(j)?;
                e_removed[j] += 1;
            } else {
                break ReductionStatus::Nef;
            }
            steps += 1;
        };
        let reduction_empty = status == ReductionStatus::Empty;
        if reduction_empty != cone_empty {
            return Err(Error::EmptinessDisagreement { reduction_empty, cone_empty, class: d.to_string() });
        }
        Ok(NefReduction {
            terminal: DivisorClass::from_system(a, &t.multiplicities()),
            status,
            h_tilde_removed: h_removed,
            e_tilde_removed: e_removed,
            steps,
        })
    }

    fn require_recipe(&self) -> Result<()> {
        if self.recipe.is_none() {
            return Err(Error::Precondition(
                "cohomology is only available on surfaces built from plus-decorated recipes".into(),
            ));
        }
        Ok(())
    }

    pub fn h0(&self, d: &DivisorClass) -> Result<Int> {
        self.require_recipe()?;
        let r = self.nef_reduce(d)?;
        match r.status {
            ReductionStatus::Empty => Ok(0),
            ReductionStatus::Nef => euler_characteristic(&r.terminal),
        }
    }

    pub fn h1(&self, d: &DivisorClass) -> Result<Int> {
        Ok(self.cohomology(d)?.h1)
    }

    pub fn cohomology(&self, d: &DivisorClass) -> Result<Cohomology> {
        self.require_recipe()?;
        let chi = euler_characteristic(d)?;
        let h0 = self.h0(d)?;
        // (K - D) . L = -3 - a < 0 for a >= -2.
        let h2 = if d.a >= -2 {
            0
        } else {
            let dual = self.canonical().checked_sub(d)?;
            if self.is_effective(&dual)? {
                self.h0(&dual)?
            } else {
                0
            }
        };
        let h1 = h0 - chi + h2;
        if h1 < 0 {
            return Err(Error::AssumptionViolation(format!(
                "negative h1 = {h1} for {d} (h0 = {h0}, chi = {chi}, h2 = {h2})"
            )));
        }
        Ok(Cohomology { h0, h1, h2, chi })
    }
}
