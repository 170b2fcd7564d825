//! The plain searches: Pythagorean parameters, `(A, D)` pairs and the direct
//! quartic `d z^2 = u^4 - e^2 v^4`.

use std::ops::ControlFlow;

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{check_squarefree, deadline_for, w, wq, DivisorSet, Method, SearchConfig, SolutionCertificate, SolveError};
use crate::curve::{triangle_to_point, Curve, UvwRep};
use crate::numth::{factorize, is_square_u128, signed_squarefree_divisors, Integer, Rational};
use crate::qsearch::{search_quartic, QuarticCurve};
use crate::triangle::{pyth_search, Triangle};

/// First scaled primitive triangle of area `n`.
pub fn solve_pythagorean(n: &Integer, cfg: &SearchConfig) -> Result<Option<SolutionCertificate>, SolveError> {
    check_squarefree(n)?;
    let Some(t) = pyth_search(n, cfg.limit_for(Method::Pythagorean)).into_iter().next() else {
        return Ok(None);
    };
    let witnesses = vec![wq("a", t.a()), wq("b", t.b())];
    Ok(SolutionCertificate::from_point(Method::Pythagorean, witnesses, triangle_to_point(&t)?))
}

/// Divisors of `m` (given by its factorization) up to `cap`, ascending.
fn divisors_upto(fac: &[(u64, u32)], cap: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for &(p, e) in fac {
        let mut extra = Vec::new();
        for &d in &out {
            let mut v = d;
            for _ in 0..e {
                match v.checked_mul(p) {
                    Some(x) if x <= cap => {
                        v = x;
                        extra.push(v);
                    }
                    _ => break,
                }
            }
        }
        out.extend(extra);
    }
    out.sort_unstable();
    out
}

fn factor_u64(v: u64) -> Result<Vec<(u64, u32)>, SolveError> {
    Ok(factorize(&Integer::from(v))?
        .factors
        .iter()
        .map(|(p, e)| (p.to_u64().expect("factor of a u64"), *e))
        .collect())
}

fn merge(a: &[(u64, u32)], b: &[(u64, u32)], b_mult: u32) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = a.to_vec();
    for &(p, e) in b {
        match out.iter_mut().find(|(q, _)| *q == p) {
            Some(slot) => slot.1 += e * b_mult,
            None => out.push((p, e * b_mult)),
        }
    }
    out
}

/// `A B = 2 n D^2` with `A^4 + 4 n^2 D^4 = (A H)^2`, scanning `D` upwards
/// and then divisors `A` of `2 n D^2` with `A + D <= limit`.
pub fn solve_naive(n: &Integer, cfg: &SearchConfig) -> Result<Option<SolutionCertificate>, SolveError> {
    check_squarefree(n)?;
    let Some(nn) = n.to_u64() else {
        return Ok(None);
    };
    let limit = cfg.limit_for(Method::Naive);
    let deadline = deadline_for(cfg, Method::Naive);
    let two_n = factor_u64(2 * nn)?;
    for d in 1..limit {
        if deadline.expired() {
            return Ok(None);
        }
        let fac = merge(&two_n, &factor_u64(d)?, 2);
        let d4 = (d as u128).pow(4);
        let Some(rhs) = (nn as u128).checked_pow(2).and_then(|n2| n2.checked_mul(4)).and_then(|v| v.checked_mul(d4)) else {
            return Ok(None);
        };
        for a in divisors_upto(&fac, limit - d) {
            let Some(hh) = (a as u128).pow(4).checked_add(rhs) else {
                continue;
            };
            let Some(root) = is_square_u128(hh) else {
                continue;
            };
            if root % a as u128 != 0 {
                continue;
            }
            let h = Integer::from(root / a as u128);
            let (ai, di) = (Integer::from(a), Integer::from(d));
            let t = Triangle::new(
                Rational::new(ai.clone(), di.clone()),
                Rational::new(Integer::from(2) * n * &di, ai.clone()),
                Rational::new(h.clone(), di.clone()),
                n.clone(),
            );
            let witnesses = vec![w("A", ai), w("D", di), w("H", h)];
            if let Some(cert) = SolutionCertificate::from_point(Method::Naive, witnesses, triangle_to_point(&t)?) {
                return Ok(Some(cert));
            }
        }
    }
    Ok(None)
}

fn direct_divisors(n: &Integer, set: DivisorSet) -> Result<Vec<Integer>, SolveError> {
    let all = signed_squarefree_divisors(n)?;
    Ok(match set {
        DivisorSet::All => all,
        DivisorSet::Trivial => all.into_iter().filter(|d| d.abs().is_one() || &d.abs() == n).collect(),
    })
}

/// Streams a certificate for every hit of `d z^2 = u^4 - e^2 v^4`.
fn direct_scan(
    n: &Integer,
    cfg: &SearchConfig,
    mut visit: impl FnMut(SolutionCertificate) -> ControlFlow<()>,
) -> Result<(), SolveError> {
    check_squarefree(n)?;
    let curve = Curve::congruent(n.clone())?;
    let opts = cfg.search_options(Method::Direct, deadline_for(cfg, Method::Direct)).nonneg_only(true);
    for d in direct_divisors(n, cfg.direct_divisors)? {
        let e = n / &d;
        let quartic = QuarticCurve::new([-(&e * &e), Integer::zero(), Integer::zero(), Integer::zero(), Integer::one()]);
        let end = search_quartic(&quartic, &d, &opts, |h| {
            let (u, v) = (h.x.numer().clone(), h.x.denom().clone());
            let z = (&h.w * Rational::from_integer(&v * &v)).to_integer();
            if u.is_zero() || z.is_zero() {
                return ControlFlow::Continue(());
            }
            let rep = UvwRep { d: d.clone(), u: u.clone(), v: v.clone(), w: &d * &z };
            let witnesses = vec![w("d", d.clone()), w("e", e.clone()), w("u", u), w("v", v), w("w", rep.w.clone())];
            match SolutionCertificate::from_point(Method::Direct, witnesses, rep.point(&curve)) {
                Some(cert) => visit(cert),
                None => ControlFlow::Continue(()),
            }
        });
        if end.found().is_some() {
            break;
        }
        if opts.deadline.expired() {
            break;
        }
    }
    Ok(())
}

/// Loops over signed squarefree divisors `d` of `n` with `e = n/d` and
/// searches `u + v <= limit` for `d z^2 = u^4 - e^2 v^4`.
pub fn solve_direct(n: &Integer, cfg: &SearchConfig) -> Result<Option<SolutionCertificate>, SolveError> {
    let mut first = None;
    direct_scan(n, cfg, |c| {
        first = Some(c);
        ControlFlow::Break(())
    })?;
    Ok(first)
}

/// Every certificate the direct search finds up to the limit, one per
/// distinct triangle, in search order.
pub fn direct_certificates(n: &Integer, cfg: &SearchConfig) -> Result<Vec<SolutionCertificate>, SolveError> {
    let mut out: Vec<SolutionCertificate> = Vec::new();
    direct_scan(n, cfg, |c| {
        if !out.iter().any(|o| o.triangle == c.triangle) {
            out.push(c);
        }
        ControlFlow::Continue(())
    })?;
    Ok(out)
}
