//! Sums over index subsets of products over their complements,
//!
//! ```text
//! S_k(f) = Σ_{|I| = k} Π_{i ∉ I} f_i ,
//! ```
//!
//! the quantity every drift-aware certificate is built from. Two routes are
//! provided: explicit enumeration of the `C(N, k)` subsets (used for the
//! convex certificate, small `k`) and the elementary-symmetric-polynomial
//! recursion `S_k(f) = e_{N−k}(f)` (used for the non-convex schedule, any
//! `k`). Each checks the other in the tests.

use rayon::prelude::*;

use super::numeric::{ln_choose, CompensatedSum};
use crate::error::{Error, Result};

/// Largest subset count [`enumerate_complement_sum`] will walk.
pub const ENUMERATION_LIMIT: f64 = 1e8;

/// `S_k(f)` by enumerating every `k`-subset.
///
/// The product over all factors is formed once in log space, tracking zero
/// factors by count; each subset then divides out its own members. A subset
/// whose complement holds a zero factor contributes nothing. Work is split by
/// the smallest member across threads; partial sums are combined in index
/// order with compensated summation, so the result does not depend on the
/// thread count.
pub fn enumerate_complement_sum(factors: &[f64], k: usize) -> Result<f64> {
    let n = factors.len();
    if k > n {
        return Ok(0.0);
    }
    let count = ln_choose(n, k).exp();
    if count > ENUMERATION_LIMIT {
        return Err(Error::Capacity {
            what: "subset enumeration",
            required: count,
            limit: ENUMERATION_LIMIT,
            hint: "use the Model A bound or the elementary-symmetric route instead",
        });
    }

    let zeros = factors.iter().filter(|&&f| f == 0.0).count();
    if zeros > k {
        return Ok(0.0);
    }
    let ln_f: Vec<f64> = factors.iter().map(|&f| if f == 0.0 { 0.0 } else { f.ln() }).collect();
    let ln_total = ln_f.iter().copied().collect::<CompensatedSum>().value();
    let is_zero: Vec<bool> = factors.iter().map(|&f| f == 0.0).collect();

    if k == 0 {
        return Ok(if zeros == 0 { ln_total.exp() } else { 0.0 });
    }

    let ctx = Walk { ln_f: &ln_f, is_zero: &is_zero, ln_total, zeros };
    let partials: Vec<CompensatedSum> = (0..=n - k)
        .into_par_iter()
        .map(|first| {
            let mut acc = CompensatedSum::new();
            ctx.descend(first + 1, k - 1, ln_f[first], usize::from(is_zero[first]), &mut acc);
            acc
        })
        .collect();
    Ok(partials.iter().map(CompensatedSum::value).collect::<CompensatedSum>().value())
}

struct Walk<'a> {
    ln_f: &'a [f64],
    is_zero: &'a [bool],
    ln_total: f64,
    zeros: usize,
}

impl Walk<'_> {
    fn descend(&self, start: usize, remaining: usize, ln_members: f64, zeros_in: usize, acc: &mut CompensatedSum) {
        if remaining == 0 {
            if zeros_in == self.zeros {
                acc.add((self.ln_total - ln_members).exp());
            }
            return;
        }
        let n = self.ln_f.len();
        for i in start..=n - remaining {
            self.descend(
                i + 1,
                remaining - 1,
                ln_members + self.ln_f[i],
                zeros_in + usize::from(self.is_zero[i]),
                acc,
            );
        }
    }
}

/// `ln S_k(f)` through the recursion for `e_{N−k}(f)`, in `O(N·(N−k))`.
///
/// Rows are rescaled when they grow large so `N` in the thousands does not
/// overflow; `-inf` means the sum is exactly zero.
pub fn ln_complement_sum(factors: &[f64], k: usize) -> f64 {
    let n = factors.len();
    if k > n {
        return f64::NEG_INFINITY;
    }
    let m = n - k;
    let mut e = vec![0.0f64; m + 1];
    e[0] = 1.0;
    let mut ln_scale = 0.0;
    for (seen, &f) in factors.iter().enumerate() {
        let top = m.min(seen + 1);
        for j in (1..=top).rev() {
            e[j] += e[j - 1] * f;
        }
        let peak = e.iter().fold(0.0f64, |a, &b| a.max(b));
        if peak > 1e250 {
            for v in e.iter_mut() {
                *v /= peak;
            }
            ln_scale += peak.ln();
        }
    }
    if e[m] == 0.0 {
        f64::NEG_INFINITY
    } else {
        e[m].ln() + ln_scale
    }
}
