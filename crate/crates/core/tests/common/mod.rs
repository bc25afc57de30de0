#![allow(dead_code)]

use amsreg::ams::{Decoration, GraphRecipe};

/// Every factor list `(n_1, ..., n_r)` with `n_i >= 2` and product at most
/// `limit`, in lexicographic order.
pub fn factor_lists(limit: u64) -> Vec<Vec<u64>> {
    fn rec(limit: u64, product: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        for k in 2..=limit / product {
            cur.push(k);
            rec(limit, product * k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(limit, 1, &mut Vec::new(), &mut out);
    out.sort();
    out
}

pub fn recipes(limit: u64, decoration: Decoration) -> Vec<GraphRecipe> {
    factor_lists(limit).into_iter().map(|f| GraphRecipe::new(f, decoration).unwrap()).collect()
}

/// Non-increasing systems of length `1..=max_len` with entries in `1..=max_entry`.
pub fn sorted_systems(max_len: usize, max_entry: i128) -> Vec<Vec<i128>> {
    fn rec(max_len: usize, top: i128, cur: &mut Vec<i128>, out: &mut Vec<Vec<i128>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == max_len {
            return;
        }
        for x in 1..=top {
            cur.push(x);
            rec(max_len, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(max_len, max_entry, &mut Vec::new(), &mut out);
    out
}
