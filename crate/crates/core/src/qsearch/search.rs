//! The sieved search over `x = p/q` with `|p| + q <= limit`.
//!
//! Rows are denominators `q`; each row scans the numerators allowed by the
//! positivity intervals. A candidate must pass residue tables of the
//! homogeneous form modulo several small moduli before it is evaluated, first
//! in `i128` and, on overflow, with big integers.

use std::ops::ControlFlow;

use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use super::poly::Interval;
use super::{positivity_intervals, QuarticCurve, QuarticHit};
use crate::budget::Deadline;
use crate::numth::{gcd_u64, is_perfect_square, is_square_i128, Integer, Rational};

const MODULI: [usize; 13] = [64, 63, 65, 11, 17, 19, 23, 29, 31, 37, 41, 43, 47];

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub limit: u64,
    /// Number of partitions of each block of rows; results do not depend on it.
    pub workers: usize,
    /// Restrict to `x >= 0`.
    pub nonneg_only: bool,
    /// Restrict to `lo <= x <= hi`.
    pub window: Option<(Rational, Rational)>,
    pub deadline: Deadline,
}

impl SearchOptions {
    pub fn new(limit: u64) -> Self {
        SearchOptions {
            limit,
            workers: std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
            nonneg_only: false,
            window: None,
            deadline: Deadline::none(),
        }
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn nonneg_only(mut self, yes: bool) -> Self {
        self.nonneg_only = yes;
        self
    }

    pub fn window(mut self, lo: Rational, hi: Rational) -> Self {
        self.window = Some((lo, hi));
        self
    }

    pub fn deadline(mut self, deadline: Deadline) -> Self {
        self.deadline = deadline;
        self
    }
}

/// How a streaming search ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchEnd<T> {
    /// The visitor stopped the search.
    Found(T),
    /// Every candidate up to the limit was examined.
    Exhausted,
    /// The deadline passed first.
    TimedOut,
}

impl<T> SearchEnd<T> {
    pub fn found(self) -> Option<T> {
        match self {
            SearchEnd::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn timed_out(&self) -> bool {
        matches!(self, SearchEnd::TimedOut)
    }
}

/// All hits of `w^2 = q(x)`, sorted by `(q', p)`.
pub fn quartic_search(q: &QuarticCurve, limit: u64) -> Vec<QuarticHit> {
    quartic_search_scaled(q, &Integer::one(), limit)
}

/// All hits of `q(x) = m w^2`, sorted by `(q', p)`.
pub fn quartic_search_scaled(q: &QuarticCurve, m: &Integer, limit: u64) -> Vec<QuarticHit> {
    let mut out = Vec::new();
    let _ = search_quartic::<()>(q, m, &SearchOptions::new(limit), |h| {
        out.push(h.clone());
        ControlFlow::Continue(())
    });
    out
}

/// Streams hits of `q(x) = m w^2` in `(q', p)` order to `visit`, which may
/// stop the search early.
pub fn search_quartic<T>(
    q: &QuarticCurve,
    m: &Integer,
    opts: &SearchOptions,
    mut visit: impl FnMut(&QuarticHit) -> ControlFlow<T>,
) -> SearchEnd<T> {
    assert!(!m.is_zero(), "scale must be non-zero");
    let prep = Prepared::new(q, m, opts);
    let workers = opts.workers.max(1);
    let block = (workers * 8).max(16) as u64;
    let mut start = 1u64;
    while start <= opts.limit {
        if opts.deadline.expired() {
            return SearchEnd::TimedOut;
        }
        let end = (start + block).min(opts.limit + 1);
        let mut hits: Vec<(u64, i64, QuarticHit)> = (0..workers)
            .into_par_iter()
            .flat_map_iter(|w| {
                let mut local = Vec::new();
                let mut row = start + w as u64;
                while row < end {
                    prep.scan_row(row, &mut local);
                    row += workers as u64;
                }
                local
            })
            .collect();
        hits.sort_by_key(|a| (a.0, a.1));
        for (_, _, h) in &hits {
            if let ControlFlow::Break(t) = visit(h) {
                return SearchEnd::Found(t);
            }
        }
        start = end;
    }
    SearchEnd::Exhausted
}

struct Prepared<'a> {
    original: &'a QuarticCurve,
    m: Integer,
    /// `m * q`, ascending degree.
    big: [Integer; 5],
    small: Option<[i128; 5]>,
    intervals: Vec<Interval>,
    /// `tables[j][(q mod M) * M + (p mod M)]` for `M = MODULI[j]`.
    tables: Vec<Vec<bool>>,
    limit: u64,
    nonneg_only: bool,
    window: Option<(Rational, Rational)>,
}

impl<'a> Prepared<'a> {
    fn new(q: &'a QuarticCurve, m: &Integer, opts: &SearchOptions) -> Self {
        let scaled = q.scaled(m);
        let big = scaled.coeffs().clone();
        let small = big.iter().map(|c| c.to_i128()).collect::<Option<Vec<_>>>().map(|v| v.try_into().unwrap());
        let tables = residue_tables(&big);
        Prepared {
            original: q,
            m: m.clone(),
            intervals: positivity_intervals(&scaled),
            big,
            small,
            tables,
            limit: opts.limit,
            nonneg_only: opts.nonneg_only,
            window: opts.window.clone(),
        }
    }

    fn ranges(&self, q: u64) -> Vec<(i64, i64)> {
        let mut span = (self.limit - q) as i64;
        let mut lo_cap = if self.nonneg_only { 0 } else { -span };
        let qr = Rational::from_integer(Integer::from(q));
        if let Some((wlo, whi)) = &self.window {
            lo_cap = lo_cap.max((wlo * &qr).ceil().to_integer().to_i64().unwrap_or(i64::MAX));
            span = span.min((whi * &qr).floor().to_integer().to_i64().unwrap_or(i64::MIN));
        }
        let mut out: Vec<(i64, i64)> = Vec::new();
        for iv in &self.intervals {
            let lo = match &iv.lo {
                Some(l) => (l * &qr).ceil().to_integer().to_i64().unwrap_or(i64::MAX).max(lo_cap),
                None => lo_cap,
            };
            let hi = match &iv.hi {
                Some(h) => (h * &qr).floor().to_integer().to_i64().unwrap_or(i64::MIN).min(span),
                None => span,
            };
            if lo > hi {
                continue;
            }
            match out.last_mut() {
                Some(last) if lo <= last.1 + 1 => last.1 = last.1.max(hi),
                _ => out.push((lo, hi)),
            }
        }
        out
    }

    fn scan_row(&self, q: u64, out: &mut Vec<(u64, i64, QuarticHit)>) {
        let rows = row_tables(&self.tables, q);
        // c_i q^(4-i) in i128, when every term fits.
        let folded: Option<[i128; 5]> = self.small.and_then(|c| {
            let mut f = [0i128; 5];
            let mut qp: i128 = 1;
            for i in (0..5).rev() {
                f[i] = c[i].checked_mul(qp)?;
                if i > 0 {
                    qp = qp.checked_mul(q as i128)?;
                }
            }
            Some(f)
        });
        let qbig = Integer::from(q);
        for (lo, hi) in self.ranges(q) {
            for p in lo..=hi {
                if !passes(&rows, p) {
                    continue;
                }
                if gcd_u64(p.unsigned_abs(), q) != 1 {
                    continue;
                }
                let root = match folded.and_then(|f| horner_i128(&f, p as i128)) {
                    Some(v) => match is_square_i128(v) {
                        Some(r) => Integer::from(r),
                        None => continue,
                    },
                    None => {
                        let v = self.eval_big(&Integer::from(p), &qbig);
                        match is_perfect_square(&v) {
                            Some(r) => r,
                            None => continue,
                        }
                    }
                };
                out.push((q, p, self.hit(p, q, root)));
            }
        }
    }

    fn eval_big(&self, p: &Integer, q: &Integer) -> Integer {
        let mut acc = Integer::zero();
        for (i, c) in self.big.iter().enumerate().rev() {
            acc = acc * p + c * q.pow(4 - i as u32);
        }
        acc
    }

    fn hit(&self, p: i64, q: u64, root: Integer) -> QuarticHit {
        let q = Integer::from(q);
        let x = Rational::new(Integer::from(p), q.clone());
        let w = Rational::new(root, &q * &q * self.m.abs());
        debug_assert!(!w.is_negative());
        assert_eq!(&w * &w * &self.m, self.original.eval(&x), "emitted hit is not on the curve");
        QuarticHit { x, w }
    }
}

/// `tables[j][(q mod M) * M + (p mod M)]` says whether `F(p, q)` is a square
/// modulo `M = MODULI[j]`.
fn residue_tables(big: &[Integer; 5]) -> Vec<Vec<bool>> {
    MODULI
        .iter()
        .map(|&md| {
            let cm: Vec<u64> = big.iter().map(|c| c.mod_floor(&Integer::from(md)).to_u64().unwrap()).collect();
            let mut squares = vec![false; md];
            for i in 0..md {
                squares[i * i % md] = true;
            }
            let mut t = vec![false; md * md];
            for qr in 0..md as u64 {
                for pr in 0..md as u64 {
                    let mut acc = 0u64;
                    let mut qp = 1u64;
                    let mut terms = [0u64; 5];
                    for (i, term) in terms.iter_mut().enumerate().rev() {
                        *term = cm[i] * qp % md as u64;
                        qp = qp * qr % md as u64;
                    }
                    // Horner in p with q-powers folded into the terms.
                    for term in terms.iter().rev() {
                        acc = (acc * pr + term) % md as u64;
                    }
                    t[qr as usize * md + pr as usize] = squares[acc as usize];
                }
            }
            t
        })
        .collect()
}

fn row_tables(tables: &[Vec<bool>], q: u64) -> [&[bool]; 13] {
    std::array::from_fn(|j| {
        let md = MODULI[j];
        let r = (q as usize) % md;
        &tables[j][r * md..(r + 1) * md]
    })
}

#[inline]
fn passes(rows: &[&[bool]; 13], p: i64) -> bool {
    // Indices mirror MODULI; literal moduli let the compiler strength-reduce.
    rows[0][p.rem_euclid(64) as usize]
        && rows[1][p.rem_euclid(63) as usize]
        && rows[2][p.rem_euclid(65) as usize]
        && rows[3][p.rem_euclid(11) as usize]
        && rows[4][p.rem_euclid(17) as usize]
        && rows[5][p.rem_euclid(19) as usize]
        && rows[6][p.rem_euclid(23) as usize]
        && rows[7][p.rem_euclid(29) as usize]
        && rows[8][p.rem_euclid(31) as usize]
        && rows[9][p.rem_euclid(37) as usize]
        && rows[10][p.rem_euclid(41) as usize]
        && rows[11][p.rem_euclid(43) as usize]
        && rows[12][p.rem_euclid(47) as usize]
}

#[inline]
fn horner_i128(f: &[i128; 5], p: i128) -> Option<i128> {
    let mut acc = f[4];
    for i in (0..4).rev() {
        acc = acc.checked_mul(p)?.checked_add(f[i])?;
    }
    Some(acc)
}

/// Residue-table verdicts for single points; used to test sieve soundness.
#[cfg(test)]
pub(crate) struct SieveProbe(Vec<Vec<bool>>);

#[cfg(test)]
impl SieveProbe {
    pub(crate) fn new(q: &QuarticCurve) -> Self {
        SieveProbe(residue_tables(q.coeffs()))
    }

    pub(crate) fn accepts(&self, p: i64, q: u64) -> bool {
        passes(&row_tables(&self.0, q), p)
    }
}
