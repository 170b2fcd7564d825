//! Conics `a x^2 + b x + c = k y^2` and the descent that turns a product of
//! two quadratics being a square into a single quartic in a slope `t`.

use std::ops::ControlFlow;

use num_integer::Integer as _;
use num_traits::{Signed, Zero};

use super::search::{search_quartic, SearchEnd, SearchOptions};
use super::QuarticCurve;
use crate::error::{Error, Result};
use crate::numth::{gcd_u64, is_perfect_square, rat_int, rational_sqrt, signed_squarefree_divisors, Integer, Rational};

/// The quadratic `a x^2 + b x + c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Conic {
    pub a: Integer,
    pub b: Integer,
    pub c: Integer,
    disc: Integer,
}

impl Conic {
    pub fn new(a: Integer, b: Integer, c: Integer) -> Self {
        let disc = &b * &b - Integer::from(4) * &a * &c;
        Conic { a, b, c, disc }
    }

    /// `b^2 - 4ac`.
    pub fn discriminant(&self) -> &Integer {
        &self.disc
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        (x * &self.a + &self.b) * x + &self.c
    }

    /// `a p^2 + b p q + c q^2`.
    pub fn eval_homogeneous(&self, p: &Integer, q: &Integer) -> Integer {
        &self.a * p * p + &self.b * p * q + &self.c * q * q
    }
}

/// Two quadratics whose product should be a square, with the admissible
/// squarefree parts `k` of each factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadricPair {
    pub first: Conic,
    pub second: Conic,
    pub resultant: Integer,
    pub k_candidates: Vec<Integer>,
}

impl QuadricPair {
    pub fn new(first: Conic, second: Conic) -> Result<Self> {
        let res = resultant(&first, &second);
        if res.is_zero() {
            return Err(Error::DegeneratePair);
        }
        let k_candidates = signed_squarefree_divisors(&res)?;
        Ok(QuadricPair { first, second, resultant: res, k_candidates })
    }
}

/// Sylvester resultant of two quadratics, by fraction-free elimination.
pub fn resultant(f: &Conic, g: &Conic) -> Integer {
    let z = Integer::zero;
    let m = vec![
        vec![f.a.clone(), f.b.clone(), f.c.clone(), z()],
        vec![z(), f.a.clone(), f.b.clone(), f.c.clone()],
        vec![g.a.clone(), g.b.clone(), g.c.clone(), z()],
        vec![z(), g.a.clone(), g.b.clone(), g.c.clone()],
    ];
    bareiss_det(m)
}

fn bareiss_det(mut m: Vec<Vec<Integer>>) -> Integer {
    let n = m.len();
    let mut sign = Integer::from(1);
    let mut prev = Integer::from(1);
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return Integer::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Signed squarefree divisors of the pair's resultant.
pub fn resultant_k_candidates(pair: &QuadricPair) -> Vec<Integer> {
    pair.k_candidates.clone()
}

/// The second intersection of the line of slope `t` through `known` with
/// `a x^2 + b x + c = k y^2`.
pub fn conic_second_point(
    conic: &Conic,
    k: &Integer,
    known: (&Rational, &Rational),
    t: &Rational,
) -> Result<(Rational, Rational)> {
    let (x0, y0) = known;
    let kr = rat_int(k.clone());
    if conic.eval(x0) != &kr * y0 * y0 {
        return Err(Error::Domain("known point is not on the conic".into()));
    }
    let den = &kr * t * t - rat_int(conic.a.clone());
    if den.is_zero() {
        return Err(Error::AsymptoticSlope);
    }
    let two = rat_int(Integer::from(2));
    let num = x0 * rat_int(conic.a.clone()) + rat_int(conic.b.clone()) + &kr * t * (t * x0 - two * y0);
    let x = num / den;
    let y = y0 + t * (&x - x0);
    debug_assert_eq!(conic.eval(&x), &kr * &y * &y);
    Ok((x, y))
}

/// The quartic in `t` whose square values give `x` with both
/// `first(x) = k y^2` and `second(x) = k z^2`, starting from the point
/// `(p0/q0, w0/q0)` on the first conic.
pub fn product_descent(pair: &QuadricPair, k: &Integer, start: (&Integer, &Integer, &Integer)) -> Result<QuarticCurve> {
    let (p0, w0, q0) = start;
    if !pair.k_candidates.contains(k) {
        return Err(Error::Domain(format!("{k} does not divide the resultant")));
    }
    if !q0.is_positive() || p0.gcd(q0) != Integer::from(1) {
        return Err(Error::Domain("start point must be in lowest terms with q0 > 0".into()));
    }
    if pair.first.eval_homogeneous(p0, q0) != k * w0 * w0 {
        return Err(Error::Domain("start point is not on the first conic".into()));
    }
    let (a, b) = (&pair.first.a, &pair.first.b);
    let (d, e, f) = (&pair.second.a, &pair.second.b, &pair.second.c);
    let two = Integer::from(2);
    let k2 = k * k;
    let k3 = &k2 * k;
    let c4 = &k3 * (d * p0 * p0 + e * p0 * q0 + f * q0 * q0);
    let c3 = -&two * &k3 * w0 * (&two * d * p0 + e * q0);
    let c2 = &k2
        * (&two * a * (d * p0 * p0 - f * q0 * q0)
            + b * q0 * (&two * d * p0 + e * q0)
            + Integer::from(4) * d * k * w0 * w0);
    let c1 = -&two * &k2 * w0 * (a * (&two * d * p0 - e * q0) + &two * b * d * q0);
    let c0 = k * (a * a * (d * p0 * p0 - e * p0 * q0 + f * q0 * q0) + a * b * q0 * (&two * d * p0 - e * q0) + b * b * d * q0 * q0);
    QuarticCurve::try_new([c0, c1, c2, c3, c4])
}

/// First `(p0, w0, q0)` with `a p0^2 + b p0 q0 + c q0^2 = k w0^2`, scanning
/// `|p0| + q0` up to `bound`, then `q0`, positive `p0` first; `w0 >= 0`.
pub fn find_conic_point(conic: &Conic, k: &Integer, bound: u64) -> Option<(Integer, Integer, Integer)> {
    conic_points(conic, k, bound).next()
}

/// Every point [`find_conic_point`] would consider, in the same order.
pub fn conic_points<'a>(
    conic: &'a Conic,
    k: &'a Integer,
    bound: u64,
) -> impl Iterator<Item = (Integer, Integer, Integer)> + 'a {
    (1..=bound)
        .flat_map(|s| (1..=s).map(move |q0| (s - q0, q0)))
        .filter(|&(p_abs, q0)| gcd_u64(p_abs, q0) == 1)
        .flat_map(|(p_abs, q0)| {
            let signs: &[i64] = if p_abs == 0 { &[1] } else { &[1, -1] };
            signs.iter().map(move |&sg| (Integer::from(p_abs) * sg, Integer::from(q0)))
        })
        .filter_map(move |(p, q)| {
            let v = conic.eval_homogeneous(&p, &q);
            if !(&v % k).is_zero() {
                return None;
            }
            is_perfect_square(&(v / k)).map(|w| (p, w, q))
        })
}

/// A common solution found by [`descent_search`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentHit {
    pub k: Integer,
    pub start: (Integer, Integer, Integer),
    /// `None` when the starting point itself already works.
    pub t: Option<Rational>,
    pub x: Rational,
    /// `first(x) = k y^2`.
    pub y: Rational,
    /// `second(x) = k z^2`, `z >= 0`.
    pub z: Rational,
}

/// For each candidate `k`, takes up to `seeds` starting points of height at
/// most `seed_bound`, searches each descent quartic, and streams every `x`
/// solving both conics.
pub fn descent_search<T>(
    pair: &QuadricPair,
    opts: &SearchOptions,
    seed_bound: u64,
    seeds: usize,
    mut visit: impl FnMut(&DescentHit) -> ControlFlow<T>,
) -> SearchEnd<T> {
    for k in &pair.k_candidates {
        for (p0, w0, q0) in conic_points(&pair.first, k, seed_bound).take(seeds) {
            if opts.deadline.expired() {
                return SearchEnd::TimedOut;
            }
            match descend_from(pair, k, (p0, w0, q0), opts, &mut visit) {
                SearchEnd::Exhausted => {}
                other => return other,
            }
        }
    }
    SearchEnd::Exhausted
}

fn descend_from<T>(
    pair: &QuadricPair,
    k: &Integer,
    (p0, w0, q0): (Integer, Integer, Integer),
    opts: &SearchOptions,
    visit: &mut impl FnMut(&DescentHit) -> ControlFlow<T>,
) -> SearchEnd<T> {
    let x0 = Rational::new(p0.clone(), q0.clone());
    let y0 = Rational::new(w0.clone(), q0.clone());
    let kr = rat_int(k.clone());
    let start = (p0.clone(), w0.clone(), q0.clone());
    if let Some(z) = rational_sqrt(&(pair.second.eval(&x0) / &kr)) {
        let hit = DescentHit { k: k.clone(), start: start.clone(), t: None, x: x0.clone(), y: y0.clone(), z };
        if let ControlFlow::Break(v) = visit(&hit) {
            return SearchEnd::Found(v);
        }
    }
    let Ok(quartic) = product_descent(pair, k, (&p0, &w0, &q0)) else {
        return SearchEnd::Exhausted;
    };
    let (quartic, _) = quartic.without_square_content();
    search_quartic(&quartic, &Integer::from(1), opts, |h| {
        let Ok((x, y)) = conic_second_point(&pair.first, k, (&x0, &y0), &h.x) else {
            return ControlFlow::Continue(());
        };
        match rational_sqrt(&(pair.second.eval(&x) / &kr)) {
            Some(z) => visit(&DescentHit { k: k.clone(), start: start.clone(), t: Some(h.x.clone()), x, y, z }),
            None => ControlFlow::Continue(()),
        }
    })
}
