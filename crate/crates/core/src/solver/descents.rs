//! Descents that reduce the curve to a single quartic: the divisor descent
//! `e^2 r^4 + 6 e r^2 s^2 + s^4 = 4 d t^2`, its matrix-reduced refinement, and
//! the descent through the 2-isogenous curve.

use std::ops::ControlFlow;

use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{check_squarefree, deadline_for, w, wq, Method, SearchConfig, SolutionCertificate, SolveError};
use crate::curve::{from_isogeny, Curve};
use crate::numth::{ext_gcd, is_perfect_square, rat_int, rational_sqrt, signed_squarefree_divisors, Integer, Rational};
use crate::qsearch::{search_quartic, QuarticCurve};

/// The point with `X = d (e f + g)^2 / (4 f g)`, i.e. `u = (e r^2 + s^2)/2`,
/// `v = r s` for `f = r^2`, `g = s^2`.
fn divisor_point(curve: &Curve, d: &Integer, e: &Integer, f: &Rational, g: &Rational) -> Option<crate::curve::CurvePoint> {
    if f.is_zero() || g.is_zero() {
        return None;
    }
    let num = rat_int(e.clone()) * f + g;
    let x = rat_int(d.clone()) * &num * &num / (rat_int(Integer::from(4)) * f * g);
    curve.lift_x(x)
}

/// Loops over signed squarefree `d | n` with `e = n/d` and searches
/// `r + s <= limit` for `e^2 r^4 + 6 e r^2 s^2 + s^4 = 4 d t^2`.
///
/// `u = (e r^2 + s^2)/2` is kept as a rational; an odd `e r^2 + s^2` still
/// gives a point.
pub fn solve_eqdesc(n: &Integer, cfg: &SearchConfig) -> Result<Option<SolutionCertificate>, SolveError> {
    check_squarefree(n)?;
    let curve = Curve::congruent(n.clone())?;
    let opts = cfg.search_options(Method::Eqdesc, deadline_for(cfg, Method::Eqdesc)).nonneg_only(true);
    for d in signed_squarefree_divisors(n)? {
        let e = n / &d;
        let z = Integer::zero();
        let quartic = QuarticCurve::new([Integer::one(), z.clone(), Integer::from(6) * &e, z, &e * &e]);
        let found = search_quartic(&quartic, &d, &opts, |h| {
            let (r, s) = (h.x.numer().clone(), h.x.denom().clone());
            if r.is_zero() {
                return ControlFlow::Continue(());
            }
            let f = rat_int(&r * &r);
            let g = rat_int(&s * &s);
            let Some(point) = divisor_point(&curve, &d, &e, &f, &g) else {
                return ControlFlow::Continue(());
            };
            let u = Rational::new(&e * &r * &r + &s * &s, Integer::from(2));
            let witnesses =
                vec![w("d", d.clone()), w("e", e.clone()), w("r", r.clone()), w("s", s.clone()), wq("u", &u), w("v", &r * &s)];
            match SolutionCertificate::from_point(Method::Eqdesc, witnesses, point) {
                Some(cert) => ControlFlow::Break(cert),
                None => ControlFlow::Continue(()),
            }
        });
        if let Some(cert) = found.found() {
            return Ok(Some(cert));
        }
        if opts.deadline.expired() {
            break;
        }
    }
    Ok(None)
}

/// `b/a = -2(k+1)/(k^2+1)`, `u^2 = a^2 - 2ab - b^2`, `m v^2 = a^2 + 2ab - b^2`,
/// giving the point `(2u^2/v^2, 2uw/v^3)` on the isogenous curve.
pub fn solve_isogeny_descent(n: &Integer, cfg: &SearchConfig) -> Result<Option<SolutionCertificate>, SolveError> {
    check_squarefree(n)?;
    let iso = Curve::isogeny(n.clone())?;
    let opts = cfg.search_options(Method::IsogenyDescent, deadline_for(cfg, Method::IsogenyDescent));
    let i = |v: i64| Integer::from(v);
    let quartic = QuarticCurve::from_descending(i(1), i(-4), i(-6), i(-12), i(-7));
    for m in [n.clone(), -n.clone()] {
        let found = search_quartic(&quartic, &m, &opts, |h| {
            let k = &h.x;
            let one = Rational::one();
            let ratio = -rat_int(i(2)) * (k + &one) / (k * k + &one);
            let (b, a) = (ratio.numer().clone(), ratio.denom().clone());
            let Some(u) = is_perfect_square(&(&a * &a - i(2) * &a * &b - &b * &b)) else {
                return ControlFlow::Continue(());
            };
            let mv2 = &a * &a + i(2) * &a * &b - &b * &b;
            if !(&mv2 % &m).is_zero() {
                return ControlFlow::Continue(());
            }
            let Some(v) = is_perfect_square(&(&mv2 / &m)).filter(|v| v.is_positive()) else {
                return ControlFlow::Continue(());
            };
            let (u2, v2) = (&u * &u, &v * &v);
            let two_t2 = &u2 * &u2 + n * n * &v2 * &v2;
            let Some(t) = two_t2.is_even().then(|| is_perfect_square(&(&two_t2 / i(2)))).flatten() else {
                return ControlFlow::Continue(());
            };
            let wv = i(2) * &t;
            let big_u = Rational::new(i(2) * &u2, v2.clone());
            let big_v = Rational::new(i(2) * &u * &wv, &v2 * &v);
            let Ok(ip) = iso.point(big_u, big_v) else {
                return ControlFlow::Continue(());
            };
            let Ok(point) = from_isogeny(&ip) else {
                return ControlFlow::Continue(());
            };
            let witnesses = vec![
                w("m", m.clone()),
                wq("k", k),
                w("a", a),
                w("b", b),
                w("u", u.clone()),
                w("v", v.clone()),
                w("w", wv.clone()),
                wq("U", ip.x().expect("affine")),
                wq("V", ip.y().expect("affine")),
            ];
            match SolutionCertificate::from_point(Method::IsogenyDescent, witnesses, point) {
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

const KWW_SEED_BOUND: i128 = 1_000_000;

/// One initial solution `(1, g0, t0)` of `e^2 + 6 e g0 + g0^2 = 4 d t0^2` with
/// its Bezout pair `alpha gamma - beta d t0 = 1` and the assembled quartic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KwwInstance {
    pub d: Integer,
    pub e: Integer,
    pub g0: Integer,
    pub t0: Integer,
    pub gamma: Integer,
    pub alpha: Integer,
    pub beta: Integer,
    /// In `z = x/y`, before any square content is removed.
    pub quartic: QuarticCurve,
}

impl KwwInstance {
    /// `d e^2 (beta^2 d - alpha^2)/2 - d^2 (beta gamma - alpha t0)^2 / 4`.
    pub fn k_value(&self) -> Rational {
        let (d, e, a, b) = (&self.d, &self.e, &self.alpha, &self.beta);
        let m = b * &self.gamma - a * &self.t0;
        Rational::new(d * e * e * (b * b * d - a * a), Integer::from(2)) - Rational::new(d * d * &m * &m, Integer::from(4))
    }

    fn new(d: &Integer, e: &Integer, g0: i128, t0: Integer) -> Result<Option<Self>, SolveError> {
        let g0 = Integer::from(g0);
        let gamma = (Integer::from(3) * e + &g0) / Integer::from(2);
        let dt0 = d * &t0;
        let (g, alpha, b) = ext_gcd(&gamma, &dt0);
        if !g.is_one() {
            return Ok(None);
        }
        let i = |v: i64| Integer::from(v);
        let quartic = QuarticCurve::from_descending(
            d * d * &g0,
            i(-16) * d * d * &t0,
            i(24) * d * (i(4) * e + &g0),
            i(-64) * d * &t0,
            i(16) * &g0,
        );
        let inst = KwwInstance { d: d.clone(), e: e.clone(), g0, t0, gamma, alpha, beta: -b, quartic };
        assert_eq!(inst.k_value(), Rational::new(-d.clone(), i(4)), "K = -d/4 fails for {inst:?}");
        Ok(Some(inst))
    }

    /// Back-substitutes `z = x/y` to `f = r^2` and `g = s^2`.
    pub fn back_substitute(&self, z: &Rational) -> Option<(Rational, Rational)> {
        let (x, y) = (rat_int(z.numer().clone()), rat_int(z.denom().clone()));
        let q = |v: &Integer| rat_int(v.clone());
        let two = rat_int(Integer::from(2));
        let (d, e) = (q(&self.d), q(&self.e));
        let k = -&d / rat_int(Integer::from(4));
        let r = (&k * &x * &x + &y * &y) / &two;
        let c = (&k * &x * &x - &y * &y) / &two;
        let a = &x * &y;
        let b = &c - &d * (q(&self.beta) * q(&self.gamma) - q(&self.alpha) * q(&self.t0)) * &a / &two;
        let nn = &d * &e * &e * &a * &a;
        let p = &a * &b;
        let h = &r * &r;
        let m = q(&self.alpha) * &nn + &d * q(&self.t0) * &p;
        let kk = q(&self.beta) * &nn + q(&self.gamma) * &p;
        let f = h.clone();
        let g = q(&self.g0) * &h + &two * &m;
        let t = q(&self.t0) * &h + &kk;
        let lhs = &e * &e * &f * &f + rat_int(Integer::from(6)) * &e * &f * &g + &g * &g;
        if lhs != rat_int(Integer::from(4)) * &d * &t * &t {
            return None;
        }
        rational_sqrt(&g)?;
        Some((f, g))
    }
}

/// Initial solutions for every divisor, at most `per_divisor` each, ordered
/// by divisor and then by `|g0|` with positive `g0` first.
pub fn kww_instances(n: &Integer, per_divisor: usize) -> Result<Vec<KwwInstance>, SolveError> {
    check_squarefree(n)?;
    let mut out = Vec::new();
    let mut seeded = false;
    for d in signed_squarefree_divisors(n)? {
        let e = n / &d;
        let (Some(ei), Some(di)) = (e.to_i128(), d.to_i128()) else {
            continue;
        };
        if ei.abs() > 1 << 40 {
            continue;
        }
        let mut taken = 0;
        'seeds: for mag in 0..=KWW_SEED_BOUND {
            let candidates: &[i128] = if mag == 0 { &[0] } else { &[mag, -mag] };
            for &g0 in candidates {
                if (g0 - ei).rem_euclid(2) != 0 {
                    continue;
                }
                let val = ei * ei + 6 * ei * g0 + g0 * g0;
                if val % (4 * di) != 0 || val / (4 * di) < 0 {
                    continue;
                }
                let Some(t0) = is_perfect_square(&Integer::from(val / (4 * di))) else {
                    continue;
                };
                seeded = true;
                if let Some(inst) = KwwInstance::new(&d, &e, g0, t0)? {
                    out.push(inst);
                    taken += 1;
                    if taken >= per_divisor {
                        break 'seeds;
                    }
                }
            }
        }
    }
    if out.is_empty() {
        return Err(if seeded { SolveError::CoprimalityFailure } else { SolveError::NoInitialSolution });
    }
    Ok(out)
}

/// Searches the reduced quartic of each initial solution and recovers
/// `(r, s)` for the divisor descent.
pub fn solve_kww(n: &Integer, cfg: &SearchConfig) -> Result<Option<SolutionCertificate>, SolveError> {
    let instances = kww_instances(n, cfg.kww_instances)?;
    let curve = Curve::congruent(n.clone())?;
    let opts = cfg.search_options(Method::Kww, deadline_for(cfg, Method::Kww));
    for inst in &instances {
        let (quartic, _) = inst.quartic.without_square_content();
        let found = search_quartic(&quartic, &Integer::one(), &opts, |h| {
            // z = 0 only returns the initial solution.
            if h.x.is_zero() {
                return ControlFlow::Continue(());
            }
            let Some((f, g)) = inst.back_substitute(&h.x) else {
                return ControlFlow::Continue(());
            };
            let Some(point) = divisor_point(&curve, &inst.d, &inst.e, &f, &g) else {
                return ControlFlow::Continue(());
            };
            let witnesses = vec![
                w("d", inst.d.clone()),
                w("e", inst.e.clone()),
                w("g0", inst.g0.clone()),
                w("t0", inst.t0.clone()),
                w("alpha", inst.alpha.clone()),
                w("beta", inst.beta.clone()),
                wq("z", &h.x),
                wq("f", &f),
                wq("g", &g),
            ];
            match SolutionCertificate::from_point(Method::Kww, witnesses, point) {
                Some(cert) => ControlFlow::Break(cert),
                None => ControlFlow::Continue(()),
            }
        });
        if let Some(cert) = found.found() {
            return Ok(Some(cert));
        }
        if opts.deadline.expired() {
            break;
        }
    }
    Ok(None)
}
