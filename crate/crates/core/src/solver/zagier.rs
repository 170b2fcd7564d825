//! Primes `n = 8K + 5`: split `n = c^2 + d^2` over the Gaussian integers and
//! reduce `n z^2 = 4 p^4 + q^4` to a quartic in one parameter `k`.

use std::ops::ControlFlow;

use num_integer::Integer as _;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{check_squarefree, deadline_for, w, wq, Method, SearchConfig, SolutionCertificate, SolveError};
use crate::curve::Curve;
use crate::numth::{is_perfect_square, is_probable_prime, rat_int, sum_of_two_squares, Integer, Rational};
use crate::qsearch::{search_quartic, QuarticCurve};

const SEED_BOUND: i64 = 50;

/// The `(x0, y0, p0)` with `c (x0^2 - y0^2) - 2 d x0 y0 = 2 p0^2`,
/// `|x0| <= 50`, `1 <= y0 <= 50`, smallest by `p0`, then `y0`, then `|x0|`
/// with positive `x0` first.
pub fn zagier_seed(c: &Integer, d: &Integer) -> Option<(Integer, Integer, Integer)> {
    let (c, d) = (c.to_i64()? as i128, d.to_i64()? as i128);
    let mut best: Option<(Integer, i64, i64, bool, i64)> = None;
    for y0 in 1..=SEED_BOUND {
        for x0 in -SEED_BOUND..=SEED_BOUND {
            let (x, y) = (x0 as i128, y0 as i128);
            let v = c * (x * x - y * y) - 2 * d * x * y;
            if v <= 0 || v % 2 != 0 {
                continue;
            }
            let Some(p0) = is_perfect_square(&Integer::from(v / 2)) else {
                continue;
            };
            let key = (p0, y0, x0.abs(), x0 < 0, x0);
            if best.as_ref().is_none_or(|b| key < *b) {
                best = Some(key);
            }
        }
    }
    best.map(|(p0, y0, _, _, x0)| (Integer::from(x0), Integer::from(y0), p0))
}

/// The quartic in `k` whose square values give `x/y` with both Gaussian
/// parts resolving to squares.
pub fn zagier_quartic(c: &Integer, d: &Integer, seed: (&Integer, &Integer, &Integer)) -> QuarticCurve {
    let (x0, y0, p0) = seed;
    let i = |v: i64| Integer::from(v);
    let x02 = x0 * x0;
    let y02 = y0 * y0;
    let c4 = i(4) * (i(2) * c * x0 * y0 + d * (&x02 - &y02));
    let c3 = i(-16) * p0 * (c * y0 + d * x0);
    let c2 = i(4) * d * (c * (&x02 - &y02) - i(2) * d * x0 * y0 + i(4) * p0 * p0);
    let c1 = i(8) * p0 * (c * c * y0 - c * d * x0 + i(2) * d * d * y0);
    let c0 = i(-2) * c * c * c * x0 * y0 + c * c * d * (&x02 + i(3) * &y02) - i(4) * c * d * d * x0 * y0
        + i(4) * d * d * d * &y02;
    QuarticCurve::from_descending(c4, c3, c2, c1, c0)
}

fn x_over_y(c: &Integer, d: &Integer, seed: (&Integer, &Integer, &Integer), k: &Rational) -> Option<Rational> {
    let (x0, y0, p0) = seed;
    let q = |v: &Integer| rat_int(v.clone());
    let two = rat_int(Integer::from(2));
    let den = q(y0) * (&two * k * k - q(c));
    if den.is_zero() {
        return None;
    }
    Some((q(c) * q(x0) - &two * (q(d) * q(y0) - k * (k * q(x0) - &two * q(p0)))) / den)
}

/// For a prime `n = 8K + 5`, tries each `n = c^2 + d^2` in turn.
pub fn solve_zagier(n: &Integer, cfg: &SearchConfig) -> Result<Option<SolutionCertificate>, SolveError> {
    check_squarefree(n)?;
    if !is_probable_prime(n) || n.mod_floor(&Integer::from(8)) != Integer::from(5) {
        return Err(SolveError::MethodInapplicable(format!("{n} is not a prime of the form 8K+5")));
    }
    let curve = Curve::congruent(n.clone())?;
    let opts = cfg.search_options(Method::Zagier, deadline_for(cfg, Method::Zagier));
    let mut seeded = false;
    for (c, d) in sum_of_two_squares(n) {
        let Some((x0, y0, p0)) = zagier_seed(&c, &d) else {
            continue;
        };
        seeded = true;
        let seed = (&x0, &y0, &p0);
        let quartic = zagier_quartic(&c, &d, seed);
        let found = search_quartic(&quartic, &Integer::from(1), &opts, |h| {
            let Some(ratio) = x_over_y(&c, &d, seed, &h.x) else {
                return ControlFlow::Continue(());
            };
            let (x, y) = (ratio.numer().clone(), ratio.denom().clone());
            let two = Integer::from(2);
            let p2 = &c * (&x * &x - &y * &y) - &two * &d * &x * &y;
            let q2 = &d * (&x * &x - &y * &y) + &two * &c * &x * &y;
            if !p2.is_positive() || !p2.is_even() {
                return ControlFlow::Continue(());
            }
            let (Some(p), Some(q)) = (is_perfect_square(&(&p2 / &two)), is_perfect_square(&q2)) else {
                return ControlFlow::Continue(());
            };
            let t = &two * &p * &p - &q * &q;
            let v = &two * &p * &q;
            let s = &two * &p * &p + &q * &q;
            let u = n * (&x * &x + &y * &y);
            if v.is_zero() {
                return ControlFlow::Continue(());
            }
            let Some(point) = curve.lift_x(Rational::new(&u * &u, &v * &v)) else {
                return ControlFlow::Continue(());
            };
            let witnesses = vec![
                w("c", c.clone()),
                w("d2", d.clone()),
                w("x0", x0.clone()),
                w("y0", y0.clone()),
                w("p0", p0.clone()),
                wq("k", &h.x),
                w("x", x),
                w("y", y),
                w("p", p),
                w("q", q),
                w("t", t),
                w("v", v),
                w("s", s),
                w("u", u),
            ];
            match SolutionCertificate::from_point(Method::Zagier, witnesses, point) {
                Some(cert) => ControlFlow::Break(cert),
                None => ControlFlow::Continue(()),
            }
        });
        if let Some(cert) = found.found() {
            return Ok(Some(cert));
        }
    }
    if !seeded {
        return Err(SolveError::NoInitialSolution);
    }
    Ok(None)
}
