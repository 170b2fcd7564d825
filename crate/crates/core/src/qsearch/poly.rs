//! Small dense polynomials over the rationals: Sturm sequences, exact real
//! root isolation, rational root extraction and splitting an integer quartic
//! into two integer quadratics.

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::numth::{factorize, is_perfect_square, rat_int, Integer, Rational};

/// Coefficients by ascending degree, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Poly(Vec<Rational>);

impl Poly {
    pub(crate) fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Poly(c)
    }

    pub(crate) fn from_integers(c: &[Integer]) -> Self {
        Poly::new(c.iter().cloned().map(rat_int).collect())
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lead(&self) -> &Rational {
        self.0.last().expect("non-zero polynomial")
    }

    pub(crate) fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    fn sign_at(&self, x: &Rational) -> i32 {
        sign(&self.eval(x))
    }

    fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat_int(Integer::from(i)))
                .collect(),
        )
    }

    fn rem(&self, d: &Poly) -> Poly {
        let mut r = self.0.clone();
        let dl = d.lead();
        let dd = d.degree();
        while r.len() > dd && !r.is_empty() {
            let shift = r.len() - 1 - dd;
            let f = r.last().unwrap() / dl;
            for (i, c) in d.0.iter().enumerate() {
                r[i + shift] -= &f * c;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        Poly::new(r)
    }

    fn quo(&self, d: &Poly) -> Poly {
        let mut r = self.0.clone();
        let dl = d.lead();
        let dd = d.degree();
        if r.len() <= dd {
            return Poly::new(Vec::new());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        while r.len() > dd && !r.is_empty() {
            let shift = r.len() - 1 - dd;
            let f = r.last().unwrap() / dl;
            for (i, c) in d.0.iter().enumerate() {
                r[i + shift] -= &f * c;
            }
            q[shift] = f;
            r.pop();
        }
        Poly::new(q)
    }

    fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }

    /// Same roots, each simple.
    fn squarefree_part(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            self.clone()
        } else {
            self.quo(&g)
        }
    }

    /// Integer multiple with coprime coefficients.
    fn primitive_integer(&self) -> Vec<Integer> {
        let mut l = Integer::one();
        for c in &self.0 {
            l = l.lcm(c.denom());
        }
        let ints: Vec<Integer> = self.0.iter().map(|c| (c * rat_int(l.clone())).to_integer()).collect();
        let g = ints.iter().fold(Integer::zero(), |g, c| g.gcd(c));
        ints.into_iter().map(|c| c / &g).collect()
    }

    /// Cauchy bound: every real root lies strictly inside `(-B, B)`.
    fn root_bound(&self) -> Rational {
        let l = self.lead().abs();
        let m = self.0[..self.0.len() - 1].iter().map(|c| c.abs() / &l).max().unwrap_or_default();
        m + Rational::one() + Rational::one()
    }
}

fn sign(x: &Rational) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

struct Sturm(Vec<Poly>);

impl Sturm {
    fn new(p: &Poly) -> Self {
        let mut chain = vec![p.clone(), p.derivative()];
        loop {
            let n = chain.len();
            let r = chain[n - 2].rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(Poly::new(r.0.into_iter().map(|c| -c).collect()));
        }
        Sturm(chain)
    }

    fn variations(&self, x: &Rational) -> usize {
        let signs = self.0.iter().map(|p| p.sign_at(x)).filter(|&s| s != 0);
        count_changes(signs)
    }
}

fn count_changes(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut changes = 0;
    for s in signs {
        if last != 0 && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

/// Closed interval `[lo, hi]` holding exactly one real root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct RootBox {
    pub lo: Rational,
    pub hi: Rational,
}

/// Isolates every real root of `p` (non-zero) into boxes of width at most
/// `width`, ascending. A box collapses to a point when the root is hit exactly.
pub(crate) fn isolate_roots(p: &Poly, width: &Rational) -> Vec<RootBox> {
    if p.degree() == 0 {
        return Vec::new();
    }
    let sq = p.squarefree_part();
    let sturm = Sturm::new(&sq);
    let b = sq.root_bound();
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((a, c)) = stack.pop() {
        let count = sturm.variations(&a) - sturm.variations(&c);
        if count == 0 {
            continue;
        }
        if count == 1 && &c - &a <= *width {
            out.push(RootBox { lo: a, hi: c });
            continue;
        }
        let mid = (&a + &c) / rat_int(Integer::from(2));
        if sq.eval(&mid).is_zero() {
            if count == 1 {
                out.push(RootBox { lo: mid.clone(), hi: mid });
                continue;
            }
            // Nudge the split off the root; only finitely many roots exist.
            let mut step = (&c - &a) / rat_int(Integer::from(8));
            let mut split = &mid + &step;
            while sq.eval(&split).is_zero() {
                step /= rat_int(Integer::from(2));
                split = &mid + &step;
            }
            stack.push((split.clone(), c));
            stack.push((a, split));
        } else {
            stack.push((mid.clone(), c));
            stack.push((a, mid));
        }
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    out
}

/// A possibly unbounded closed interval; `None` means infinite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Option<Rational>,
    pub hi: Option<Rational>,
}

impl Interval {
    pub fn whole() -> Self {
        Interval { lo: None, hi: None }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lo.as_ref().is_none_or(|lo| lo <= x) && self.hi.as_ref().is_none_or(|hi| x <= hi)
    }
}

/// Intervals whose union covers `{x : p(x) >= 0}`; every root box is kept so
/// that zeros of `p` are never lost.
pub(crate) fn nonnegative_intervals(p: &Poly, width: &Rational) -> Vec<Interval> {
    if p.is_zero() {
        return vec![Interval::whole()];
    }
    let roots = isolate_roots(p, width);
    if roots.is_empty() {
        return if p.sign_at(&Rational::zero()) >= 0 { vec![Interval::whole()] } else { Vec::new() };
    }
    let one = Rational::one();
    let two = rat_int(Integer::from(2));
    let mut pieces: Vec<Interval> = Vec::new();
    let push = |iv: Interval, pieces: &mut Vec<Interval>| {
        if let Some(last) = pieces.last_mut() {
            if let (Some(h), Some(l)) = (&last.hi, &iv.lo) {
                if l <= h {
                    if iv.hi.is_none() || last.hi.as_ref() < iv.hi.as_ref() {
                        last.hi = iv.hi;
                    }
                    return;
                }
            }
        }
        pieces.push(iv);
    };

    // Left of the first root.
    let first = &roots[0];
    if p.sign_at(&(&first.lo - &one)) > 0 {
        push(Interval { lo: None, hi: Some(first.hi.clone()) }, &mut pieces);
    }
    for (i, r) in roots.iter().enumerate() {
        push(Interval { lo: Some(r.lo.clone()), hi: Some(r.hi.clone()) }, &mut pieces);
        let gap_hi = roots.get(i + 1);
        let sample = match gap_hi {
            Some(next) => (&r.hi + &next.lo) / &two,
            None => &r.hi + &one,
        };
        if p.sign_at(&sample) > 0 {
            let hi = gap_hi.map(|next| next.hi.clone());
            push(Interval { lo: Some(r.lo.clone()), hi }, &mut pieces);
        }
    }
    pieces
}

/// Simplest (smallest denominator) rational in `[lo, hi]`.
pub(crate) fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    let fl = lo.floor();
    if &fl == lo {
        return fl;
    }
    let up = &fl + Rational::one();
    if &up <= hi {
        return up;
    }
    let inner = simplest_between(&(Rational::one() / (hi - &fl)), &(Rational::one() / (lo - &fl)));
    fl + Rational::one() / inner
}

/// Exact rational roots, ascending, without multiplicity.
pub(crate) fn rational_roots_of(p: &Poly) -> Vec<Rational> {
    if p.is_zero() || p.degree() == 0 {
        return Vec::new();
    }
    let sq = p.squarefree_part();
    let ints = sq.primitive_integer();
    let lead = ints.last().unwrap().abs();
    // Distinct rationals with denominators dividing `lead` are >= 1/lead^2 apart.
    let width = Rational::new(Integer::one(), &lead * &lead * 2);
    let exact = Poly::from_integers(&ints);
    isolate_roots(&exact, &width)
        .into_iter()
        .filter_map(|b| {
            let cand = simplest_between(&b.lo, &b.hi);
            exact.eval(&cand).is_zero().then_some(cand)
        })
        .collect()
}

fn divisors(n: &Integer) -> Vec<Integer> {
    let n = n.abs();
    if n.is_zero() {
        return Vec::new();
    }
    let fac = factorize(&n).expect("non-zero");
    let mut out = vec![Integer::one()];
    for (p, e) in &fac.factors {
        let mut next = Vec::with_capacity(out.len() * (*e as usize + 1));
        for d in &out {
            let mut pk = d.clone();
            for _ in 0..=*e {
                next.push(pk.clone());
                pk *= p;
            }
        }
        out = next;
    }
    out.sort();
    out
}

/// Splits `c4 x^4 + ... + c0` as `(a x^2 + b x + c)(d x^2 + e x + f)` over
/// the integers, with `a > 0`, returning `[a, b, c]` and `[d, e, f]`.
/// `None` when no split exists or when `c0 = 0`.
pub(crate) fn split_into_quadratics(c: &[Integer; 5]) -> Option<([Integer; 3], [Integer; 3])> {
    if c[4].is_zero() || c[0].is_zero() {
        return None;
    }
    let content = c.iter().fold(Integer::zero(), |g, x| g.gcd(x));
    let prim: Vec<Integer> = c.iter().map(|x| x / &content).collect();
    let (p0, p1, p2, p3, p4) = (&prim[0], &prim[1], &prim[2], &prim[3], &prim[4]);
    let lead_divs = divisors(p4);
    let const_divs = divisors(p0);
    for a in &lead_divs {
        let d = p4 / a;
        for cabs in &const_divs {
            for cc in [cabs.clone(), -cabs] {
                let f = p0 / &cc;
                // a e + b d = p3 ; b f + c e = p1
                let det = &d * &cc - a * &f;
                if det.is_zero() {
                    if let Some((b, e)) = split_proportional(a, &d, &cc, p1, p2, p3) {
                        return Some(([a * &content, b * &content, cc * &content], [d, e, f]));
                    }
                    continue;
                }
                let b_num = p3 * &cc - a * p1;
                let e_num = &d * p1 - &f * p3;
                if !(&b_num % &det).is_zero() || !(&e_num % &det).is_zero() {
                    continue;
                }
                let b = b_num / &det;
                let e = e_num / &det;
                if a * &f + &b * &e + &cc * &d == *p2 {
                    return Some(([a * &content, b * &content, cc * &content], [d, e, f]));
                }
            }
        }
    }
    None
}

/// The split when `c/a = f/d = l`: then `b d + a e = p3`, `p1 = l p3` and
/// `(a e)(b d) = a d (p2 - 2 l a d)`, so `a e` is a root of a quadratic.
fn split_proportional(
    a: &Integer,
    d: &Integer,
    c: &Integer,
    p1: &Integer,
    p2: &Integer,
    p3: &Integer,
) -> Option<(Integer, Integer)> {
    // l = c / a; scale the constraints by a to stay integral.
    if c * p3 != a * p1 {
        return None;
    }
    let ad = a * d;
    // prod = a d p2 - 2 c d (a d)
    let prod = &ad * p2 - Integer::from(2) * c * d * &ad;
    let disc = p3 * p3 - Integer::from(4) * &prod;
    let r = is_perfect_square(&disc)?;
    for u2 in [p3 + &r, p3 - &r] {
        if u2.is_odd() {
            continue;
        }
        let u: Integer = u2 / 2;
        let v = p3 - &u;
        if u.is_multiple_of(a) && v.is_multiple_of(d) {
            return Some((v / d, u / a));
        }
    }
    None
}
