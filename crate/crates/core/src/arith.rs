//! Checked wide-integer helpers. Everything in the crate computes in `i128`
//! and reports overflow instead of wrapping.

use crate::error::{Error, Result};

pub type Int = i128;

#[inline]
pub(crate) fn add(a: Int, b: Int, ctx: &'static str) -> Result<Int> {
    a.checked_add(b).ok_or(Error::Overflow(ctx))
}

#[inline]
pub(crate) fn sub(a: Int, b: Int, ctx: &'static str) -> Result<Int> {
    a.checked_sub(b).ok_or(Error::Overflow(ctx))
}

#[inline]
pub(crate) fn mul(a: Int, b: Int, ctx: &'static str) -> Result<Int> {
    a.checked_mul(b).ok_or(Error::Overflow(ctx))
}

/// `sum_i m_i (m_i + 1) / 2`, the number of conditions imposed by fat points.
pub fn conditions(m: &[Int]) -> Result<Int> {
    m.iter().try_fold(0, |acc, &x| {
        let t = mul(x, add(x, 1, "conditions")?, "conditions")? / 2;
        add(acc, t, "conditions")
    })
}

/// `d (d + 3) / 2`, the projective dimension of plane curves of degree `d`.
pub fn plane_curves_dim(d: Int) -> Result<Int> {
    Ok(mul(d, add(d, 3, "plane_curves_dim")?, "plane_curves_dim")? / 2)
}
