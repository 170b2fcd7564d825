//! Tunnell's criterion. For squarefree `n`, a failing count equality proves
//! `n` is not congruent; a passing one makes `n` congruent if the
//! Birch–Swinnerton-Dyer conjecture holds.

use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numth::{is_squarefree, isqrt_u128, Integer};

/// Signed lattice-point counts of the four ternary forms.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TunnellCounts {
    /// `n = 2x^2 + y^2 + 32z^2`
    pub a_n: u64,
    /// `n = 2x^2 + y^2 + 8z^2`
    pub b_n: u64,
    /// `n/2 = 4x^2 + y^2 + 32z^2`
    pub c_n: u64,
    /// `n/2 = 4x^2 + y^2 + 8z^2`
    pub d_n: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TunnellVerdict {
    /// Counts balance; congruent assuming BSD.
    CongruentCandidateBsd,
    /// Counts do not balance; unconditionally not congruent.
    NotCongruent,
}

/// Triples `(x, y, z)` in Z^3 with `target = ax^2 + y^2 + cz^2`.
fn count_form(target: u64, a: u64, c: u64) -> u64 {
    let mult = |v: u64| if v == 0 { 1 } else { 2 };
    let mut total = 0;
    let xmax = isqrt_u128((target / a) as u128) as u64;
    for x in 0..=xmax {
        let rx = target - a * x * x;
        let zmax = isqrt_u128((rx / c) as u128) as u64;
        for z in 0..=zmax {
            let rest = rx - c * z * z;
            let y = isqrt_u128(rest as u128) as u64;
            if y * y == rest {
                total += mult(x) * mult(y) * mult(z);
            }
        }
    }
    total
}

fn checked_n(n: &Integer) -> Result<u64> {
    if !n.is_positive() {
        return Err(Error::Domain(format!("{n} must be positive")));
    }
    if !is_squarefree(n) {
        return Err(Error::NotSquarefree(n.clone()));
    }
    n.to_u64().ok_or_else(|| Error::Domain(format!("{n} is too large to count")))
}

pub fn tunnell_counts(n: &Integer) -> Result<TunnellCounts> {
    let v = checked_n(n)?;
    Ok(counts_u64(v))
}

fn counts_u64(v: u64) -> TunnellCounts {
    let (c_n, d_n) = if v.is_multiple_of(2) { (count_form(v / 2, 4, 32), count_form(v / 2, 4, 8)) } else { (0, 0) };
    TunnellCounts { a_n: count_form(v, 2, 32), b_n: count_form(v, 2, 8), c_n, d_n }
}

fn verdict(v: u64, c: &TunnellCounts) -> TunnellVerdict {
    let balanced = if v % 2 == 1 { 2 * c.a_n == c.b_n } else { 2 * c.c_n == c.d_n };
    if balanced {
        TunnellVerdict::CongruentCandidateBsd
    } else {
        TunnellVerdict::NotCongruent
    }
}

/// Rejects non-squarefree input rather than reducing it.
pub fn tunnell_test(n: &Integer) -> Result<TunnellVerdict> {
    let v = checked_n(n)?;
    Ok(verdict(v, &counts_u64(v)))
}

/// Squarefree `n` in `[lo, hi]` passing the criterion, ascending.
pub fn congruent_candidates(lo: u64, hi: u64) -> Result<Vec<Integer>> {
    if lo < 1 || lo > hi {
        return Err(Error::Domain(format!("bad range [{lo}, {hi}]")));
    }
    let found: Vec<u64> = (lo..=hi)
        .into_par_iter()
        .filter(|&v| is_squarefree(&Integer::from(v)))
        .filter(|&v| verdict(v, &counts_u64(v)) == TunnellVerdict::CongruentCandidateBsd)
        .collect();
    Ok(found.into_iter().map(Integer::from).collect())
}
