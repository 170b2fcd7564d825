//! Arithmetic progressions of squares `(x^2 - n, x^2, x^2 + n)` built from a
//! representation `n = r0^2 + s0^2` and a slope `g`.

use std::cmp::Ordering;
use std::ops::ControlFlow;

use num_traits::{One, Signed, Zero};

use super::{check_squarefree, deadline_for, w, wq, Method, SearchConfig, SolutionCertificate, SolveError};
use crate::curve::triangle_to_point;
use crate::numth::{rat_int, rational_sqrt, sum_of_two_squares, Integer, Rational};
use crate::qsearch::{descent_search, search_quartic, Conic, QuadricPair, QuarticCurve};
use crate::triangle::{triangle_from_ap, ApTriple, Triangle};

/// The two quadratics whose product must be a square.
fn hartley_conics(r0: &Integer, s0: &Integer) -> (Conic, Conic) {
    let two = Integer::from(2);
    (
        Conic::new(r0.clone(), &two * s0, -r0.clone()),
        Conic::new(-(&two * s0), Integer::from(4) * r0, &two * s0),
    )
}

/// `-2 (r0 g^2 + 2 s0 g - r0)(s0 g^2 - 2 r0 g - s0)`.
pub fn hartley_quartic(r0: &Integer, s0: &Integer) -> QuarticCurve {
    let (f, g) = hartley_conics(r0, s0);
    let (a, b) = ([f.c, f.b, f.a], [g.c, g.b, g.a]);
    let mut c: [Integer; 5] = Default::default();
    for i in 0..3 {
        for j in 0..3 {
            c[i + j] += &a[i] * &b[j];
        }
    }
    QuarticCurve::new(c)
}

/// Intermediate values from a slope `g` to the progression's middle root `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HartleyChain {
    pub g: Rational,
    pub t: Rational,
    pub r: Rational,
    pub s: Rational,
    pub z: Rational,
    pub y: Rational,
    pub x: Rational,
}

/// Follows `g` to a triangle, or `None` when a square root or a division fails.
pub fn hartley_chain(n: &Integer, r0: &Integer, s0: &Integer, g: &Rational) -> Option<(HartleyChain, Triangle)> {
    let one = Rational::one();
    let two = rat_int(Integer::from(2));
    let nr = rat_int(n.clone());
    let (r0q, s0q) = (rat_int(r0.clone()), rat_int(s0.clone()));
    let t = &two * (g * &r0q + &s0q) / (g * g + &one);
    let r = &r0q - g * &t;
    let s = &s0q - &t;
    if r.is_zero() || s.is_zero() {
        return None;
    }
    let z = (&r * &r + &s * &s) / (&two * &r * &s);
    if z.is_zero() || z == -one.clone() {
        return None;
    }
    let y = rational_sqrt(&(&nr * (&z - &one) / (&z * (&z + &one))))?;
    if y.is_zero() {
        return None;
    }
    let x = (&nr - &y * &y) / (&two * &y);
    let x2 = &x * &x;
    let ap = ApTriple { p: rational_sqrt(&(&x2 - &nr))?, q: x.clone(), r: rational_sqrt(&(&x2 + &nr))?, n: n.clone() };
    let tri = triangle_from_ap(&ap).ok()?;
    Some((HartleyChain { g: g.clone(), t, r, s, z, y, x }, tri))
}

/// `g` and `-1/g` give the same triangle; report the one with `|g| >= 1`,
/// falling back to the other if its chain breaks.
fn chain_either(n: &Integer, r0: &Integer, s0: &Integer, g: &Rational) -> Option<(HartleyChain, Triangle)> {
    let mut order = vec![g.clone()];
    if !g.is_zero() {
        let partner = -g.recip();
        if g.abs() < Rational::one() {
            order.insert(0, partner);
        } else {
            order.push(partner);
        }
    }
    order.iter().find_map(|g| hartley_chain(n, r0, s0, g))
}

fn certificate(
    r0: &Integer,
    s0: &Integer,
    chain: &HartleyChain,
    tri: &Triangle,
    extra: Vec<(String, Rational)>,
) -> Option<SolutionCertificate> {
    let mut witnesses = vec![
        w("r0", r0.clone()),
        w("s0", s0.clone()),
        wq("g", &chain.g),
        wq("t", &chain.t),
        wq("r", &chain.r),
        wq("s", &chain.s),
        wq("z", &chain.z),
        wq("y", &chain.y),
        wq("x", &chain.x),
    ];
    witnesses.extend(extra);
    SolutionCertificate::from_point(Method::Hartley, witnesses, triangle_to_point(tri).ok()?)
}

/// For each `n = r0^2 + s0^2`, searches `|g| <= 1` for a square value of the
/// quartic, and optionally falls back to the two-conic descent.
///
/// Among the first successes of each representation the smallest `(q, |p|)`
/// wins, then a positive reported `g`, then the earlier representation.
pub fn solve_hartley(n: &Integer, cfg: &SearchConfig) -> Result<Option<SolutionCertificate>, SolveError> {
    check_squarefree(n)?;
    let reps = sum_of_two_squares(n);
    if reps.is_empty() {
        return Err(SolveError::NoTwoSquareRepresentation(n.clone()));
    }
    let deadline = deadline_for(cfg, Method::Hartley);
    let one = Rational::one();
    let opts = cfg.search_options(Method::Hartley, deadline).window(-one.clone(), one);
    let mut best: Option<((Integer, Integer, bool, usize), SolutionCertificate)> = None;
    for (idx, (r0, s0)) in reps.iter().enumerate() {
        let found = search_quartic(&hartley_quartic(r0, s0), &Integer::one(), &opts, |h| {
            let Some((chain, tri)) = chain_either(n, r0, s0, &h.x) else {
                return ControlFlow::Continue(());
            };
            match certificate(r0, s0, &chain, &tri, Vec::new()) {
                Some(cert) => {
                    let key = (h.x.denom().clone(), h.x.numer().abs(), chain.g.is_negative(), idx);
                    ControlFlow::Break((key, cert))
                }
                None => ControlFlow::Continue(()),
            }
        });
        if let Some((key, cert)) = found.found() {
            if best.as_ref().is_none_or(|(k, _)| key.cmp(k) == Ordering::Less) {
                best = Some((key, cert));
            }
        }
    }
    if let Some((_, cert)) = best {
        return Ok(Some(cert));
    }
    if !cfg.hartley_descent {
        return Ok(None);
    }
    for (r0, s0) in &reps {
        if deadline.expired() {
            break;
        }
        let (first, second) = hartley_conics(r0, s0);
        let Ok(pair) = QuadricPair::new(first, second) else {
            continue;
        };
        let found = descent_search(&pair, &cfg.search_options(Method::Hartley, deadline), cfg.seed_bound, cfg.seeds, |hit| {
            let Some((chain, tri)) = chain_either(n, r0, s0, &hit.x) else {
                return ControlFlow::Continue(());
            };
            let mut extra = vec![w("k", hit.k.clone())];
            if let Some(t) = &hit.t {
                extra.push(wq("descent_t", t));
            }
            match certificate(r0, s0, &chain, &tri, extra) {
                Some(cert) => ControlFlow::Break(cert),
                None => ControlFlow::Continue(()),
            }
        });
        if let Some(cert) = found.found() {
            return Ok(Some(cert));
        }
    }
    Ok(None)
}
