//! Ground truth for small cases: the dimension of `L_d(m)` at random
//! integer points, from the rank of the matrix of interpolation
//! conditions.
//!
//! Full rank at a random sample certifies that the conditions are
//! independent for generic points (rank can only drop under
//! specialization). A rank deficiency is evidence only, and `tau_oracle`
//! re-checks it at further seeds.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{self, Int};
use crate::error::{Error, Result};
use crate::proximity::MultiplicitySystem;

/// Environment variable holding the default seed.
pub const SEED_ENV: &str = "AMSREG_SEED";
pub const DEFAULT_SEED: u64 = 1;

/// Coordinates are drawn from `1..=COORD_MAX`.
const COORD_MAX: i64 = 1 << 30;
const RESAMPLE_ATTEMPTS: u64 = 16;

/// The primes used for modular ranks: `2^61 - 1` and `2^64 - 59`.
pub const PRIMES: [u64; 2] = [(1 << 61) - 1, u64::MAX - 58];

/// Number of seeds a rank deficiency is checked at before being believed.
pub const CONFIRMATION_SEEDS: u64 = 3;

/// Seed from `AMSREG_SEED`, else [`DEFAULT_SEED`].
pub fn seed_from_env() -> Result<u64> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s.trim().parse().map_err(|_| Error::Parse(format!("{SEED_ENV}='{s}' is not a decimal integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

/// Distinct integer points of the plane, no three collinear.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSample {
    pub seed: u64,
    pub points: Vec<(i64, i64)>,
}

impl PointSample {
    pub fn new(count: usize, seed: u64) -> Result<Self> {
        for attempt in 0..RESAMPLE_ATTEMPTS {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(attempt);
            let points: Vec<(i64, i64)> =
                (0..count).map(|_| (rng.gen_range(1..=COORD_MAX), rng.gen_range(1..=COORD_MAX))).collect();
            if general_position(&points) {
                return Ok(PointSample { seed, points });
            }
        }
        Err(Error::DegenerateSample {
            seed,
            reason: format!("no sample of {count} points in general position after {RESAMPLE_ATTEMPTS} attempts"),
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn general_position(points: &[(i64, i64)]) -> bool {
    let distinct: HashSet<_> = points.iter().collect();
    if distinct.len() != points.len() {
        return false;
    }
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            for k in j + 1..points.len() {
                let (a, b, c) = (points[i], points[j], points[k]);
                let cross = (b.0 - a.0) as i128 * (c.1 - a.1) as i128 - (b.1 - a.1) as i128 * (c.0 - a.0) as i128;
                if cross == 0 {
                    return false;
                }
            }
        }
    }
    true
}

/// `dim L_d(m)` (projective, `-1` when empty) and `h^1`, with the data of
/// the rank computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearSystemDim {
    pub d: Int,
    pub dimension: Int,
    pub h1: Int,
    pub rank: usize,
    pub conditions: usize,
    pub monomials: usize,
    /// The modular ranks disagreed and the rank was recomputed exactly.
    pub exact_fallback: bool,
    pub seed: u64,
}

/// Rows: for each point `i` and each `alpha + beta < m_i`, the coefficient
/// of `x^alpha y^beta` in the Taylor expansion at the point. Columns:
/// monomials `x^a y^b` with `a + b <= d`.
#[allow(clippy::too_many_arguments)]
fn condition_rows<T>(
    d: usize,
    m: &[Int],
    points: &[(i64, i64)],
    zero: T,
    one: T,
    from_i64: impl Fn(i64) -> T,
    add: impl Fn(&T, &T) -> T,
    mul: impl Fn(&T, &T) -> T,
) -> Vec<Vec<T>>
where
    T: Clone,
{
    let monomials: Vec<(usize, usize)> = (0..=d).flat_map(|s| (0..=s).map(move |b| (s - b, b))).collect();
    // binomials C(n, k), n <= d
    let mut binom = vec![vec![zero.clone(); d + 1]; d + 1];
    for n in 0..=d {
        binom[n][0] = one.clone();
        for k in 1..=n {
            binom[n][k] = if k == n { one.clone() } else { add(&binom[n - 1][k - 1], &binom[n - 1][k]) };
        }
    }
    let mut rows = Vec::new();
    for (&mi, &(px, py)) in m.iter().zip(points) {
        let mi = mi as usize;
        if mi == 0 {
            continue;
        }
        let (x, y) = (from_i64(px), from_i64(py));
        let mut xp = vec![one.clone(); d + 1];
        let mut yp = vec![one.clone(); d + 1];
        for e in 1..=d {
            xp[e] = mul(&xp[e - 1], &x);
            yp[e] = mul(&yp[e - 1], &y);
        }
        for s in 0..mi {
            for beta in 0..=s {
                let alpha = s - beta;
                let row = monomials
                    .iter()
                    .map(|&(a, b)| {
                        if a < alpha || b < beta {
                            zero.clone()
                        } else {
                            let c = mul(&binom[a][alpha], &binom[b][beta]);
                            mul(&c, &mul(&xp[a - alpha], &yp[b - beta]))
                        }
                    })
                    .collect();
                rows.push(row);
            }
        }
    }
    rows
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn rank_mod(d: usize, m: &[Int], points: &[(i64, i64)], p: u64) -> usize {
    let add = |a: &u64, b: &u64| ((*a as u128 + *b as u128) % p as u128) as u64;
    let mul = |a: &u64, b: &u64| mul_mod(*a, *b, p);
    let mut rows = condition_rows(d, m, points, 0u64, 1u64, |v| (v as u64) % p, add, mul);
    let n_cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..n_cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else { continue };
        rows.swap(rank, pivot);
        let inv = pow_mod(rows[rank][col], p - 2, p);
        for v in rows[rank][col..].iter_mut() {
            *v = mul_mod(*v, inv, p);
        }
        let (top, rest) = rows.split_at_mut(rank + 1);
        let prow = &top[rank];
        for row in rest.iter_mut() {
            let f = row[col];
            if f == 0 {
                continue;
            }
            for c in col..n_cols {
                // row[c] -= f * prow[c]
                let t = mul_mod(f, prow[c], p);
                row[c] = if row[c] >= t { row[c] - t } else { row[c] + (p - t) };
            }
        }
        rank += 1;
    }
    rank
}

/// Fraction-free Gaussian elimination over the integers.
fn rank_exact(d: usize, m: &[Int], points: &[(i64, i64)]) -> usize {
    let mut rows = condition_rows(
        d,
        m,
        points,
        BigInt::zero(),
        BigInt::one(),
        BigInt::from,
        |a, b| a + b,
        |a, b| a * b,
    );
    let n_cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..n_cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(rank, pivot);
        let (top, rest) = rows.split_at_mut(rank + 1);
        let prow = &top[rank];
        for row in rest.iter_mut() {
            for c in col + 1..n_cols {
                row[c] = (&prow[col] * &row[c] - &row[col] * &prow[c]) / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = prow[col].clone();
        rank += 1;
    }
    rank
}

pub fn dim_linear_system(d: Int, m: &MultiplicitySystem, sample: &PointSample) -> Result<LinearSystemDim> {
    if d < 0 {
        return Err(Error::Precondition(format!("degree {d} is negative")));
    }
    if m.support_len() > sample.len() {
        return Err(Error::Precondition(format!(
            "{} multiplicities but only {} sample points",
            m.support_len(),
            sample.len()
        )));
    }
    let du = usize::try_from(d).map_err(|_| Error::Overflow("degree"))?;
    let mv = &m.as_slice()[..m.support_len()];
    let conditions = usize::try_from(arith::conditions(mv)?).map_err(|_| Error::Overflow("conditions"))?;
    let monomials = (du + 1) * (du + 2) / 2;

    let ranks: Vec<usize> = PRIMES.iter().map(|&p| rank_mod(du, mv, &sample.points, p)).collect();
    let (rank, exact_fallback) = if ranks.iter().all(|&r| r == ranks[0]) {
        (ranks[0], false)
    } else {
        (rank_exact(du, mv, &sample.points), true)
    };
    Ok(LinearSystemDim {
        d,
        dimension: monomials as Int - 1 - rank as Int,
        h1: conditions as Int - rank as Int,
        rank,
        conditions,
        monomials,
        exact_fallback,
        seed: sample.seed,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauOracle {
    pub tau: Int,
    pub seed: u64,
    /// Degrees below `tau` with `h1 > 0` at every checked seed, and the
    /// seeds used for that check.
    pub deficient_degrees: Vec<Int>,
    pub confirmation_seeds: Vec<u64>,
}

/// Seeds used to confirm a rank deficiency observed at `seed`.
pub fn confirmation_seeds(seed: u64) -> Vec<u64> {
    (0..CONFIRMATION_SEEDS).map(|k| seed.wrapping_add(k.wrapping_mul(0x9E37_79B9_7F4A_7C15))).collect()
}

/// Least `d >= 1` with `h1(L_d(m)) = 0`.
pub fn tau_oracle(m: &MultiplicitySystem, seed: u64) -> Result<TauOracle> {
    let count = m.support_len();
    let seeds = confirmation_seeds(seed);
    let samples = seeds.iter().map(|&s| PointSample::new(count, s)).collect::<Result<Vec<_>>>()?;
    let conditions = arith::conditions(m.as_slice())?;
    // Below this degree there are fewer monomials than conditions.
    let mut d: Int = 1;
    while (d + 1) * (d + 2) / 2 < conditions {
        d += 1;
    }
    let mut deficient = Vec::new();
    let mut below: Int = 1;
    while below < d {
        deficient.push(below);
        below += 1;
    }
    loop {
        let mut independent = false;
        for s in &samples {
            if dim_linear_system(d, m, s)?.h1 == 0 {
                independent = true;
                break;
            }
        }
        if independent {
            return Ok(TauOracle { tau: d, seed, deficient_degrees: deficient, confirmation_seeds: seeds });
        }
        deficient.push(d);
        d += 1;
    }
}
