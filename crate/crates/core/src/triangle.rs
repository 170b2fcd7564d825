//! Rational right triangles, their arithmetic progressions of squares, and
//! Pythagorean-parameter searches.

use std::collections::BTreeMap;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numth::{gcd_u64, is_square_u128, rat_int, squarefree_decompose, Integer, Rational};

/// A right triangle with rational legs `a <= b`, hypotenuse `h` and area `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Triangle {
    a: Rational,
    b: Rational,
    h: Rational,
    n: Integer,
}

impl Triangle {
    /// Stores the legs in canonical order `a <= b`. Nothing else is checked;
    /// see [`Triangle::verify`].
    pub fn new(a: Rational, b: Rational, h: Rational, n: Integer) -> Self {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        Self { a, b, h, n }
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn h(&self) -> &Rational {
        &self.h
    }

    pub fn area(&self) -> &Integer {
        &self.n
    }

    /// Exact check of positivity, `a^2 + b^2 = h^2` and `a*b = 2n`.
    pub fn verify(&self) -> bool {
        let zero = Rational::zero();
        self.a > zero
            && self.b > zero
            && self.h > zero
            && self.n.is_positive()
            && &self.a * &self.a + &self.b * &self.b == &self.h * &self.h
            && &self.a * &self.b == rat_int(&self.n * 2)
    }
}

/// Three squares `p^2, q^2, r^2` in arithmetic progression with common
/// difference `n`. `p` may be negative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApTriple {
    pub p: Rational,
    pub q: Rational,
    pub r: Rational,
    pub n: Integer,
}

impl ApTriple {
    pub fn is_valid(&self) -> bool {
        let n = rat_int(self.n.clone());
        &self.q * &self.q - &self.p * &self.p == n && &self.r * &self.r - &self.q * &self.q == n
    }
}

pub fn ap_from_triangle(t: &Triangle) -> ApTriple {
    let two = rat_int(Integer::from(2));
    ApTriple {
        p: (&t.a - &t.b) / &two,
        q: &t.h / &two,
        r: (&t.a + &t.b) / &two,
        n: t.n.clone(),
    }
}

pub fn triangle_from_ap(ap: &ApTriple) -> Result<Triangle> {
    let r = ap.r.abs();
    let p = ap.p.abs();
    if r <= p || !ap.is_valid() {
        return Err(Error::MalformedAp);
    }
    let a = &r + &p;
    let b = &r - &p;
    let h = ap.q.abs() * rat_int(Integer::from(2));
    Ok(Triangle::new(a, b, h, ap.n.clone()))
}

/// Scales a triangle of integer area `s*f^2` down to squarefree area `s`.
pub fn normalize_area(t: &Triangle) -> Result<(Triangle, Integer)> {
    let (s, f) = squarefree_decompose(&t.n)?;
    let fr = rat_int(f.clone());
    Ok((Triangle::new(&t.a / &fr, &t.b / &fr, &t.h / &fr, s), f))
}

/// Coprime `p > q > 0` of opposite parity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PythParams {
    p: u64,
    q: u64,
}

impl PythParams {
    pub fn new(p: u64, q: u64) -> Result<Self> {
        if q == 0 || p <= q || gcd_u64(p, q) != 1 || (p - q).is_multiple_of(2) {
            return Err(Error::Domain(format!("({p}, {q}) is not a primitive Pythagorean pair")));
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }
}

/// The integer triangle `(p^2 - q^2, 2pq, p^2 + q^2)` of area `pq(p^2 - q^2)`.
pub fn pyth_triangle(params: PythParams) -> Triangle {
    let p = Integer::from(params.p);
    let q = Integer::from(params.q);
    let a = &p * &p - &q * &q;
    let b = Integer::from(2) * &p * &q;
    let h = &p * &p + &q * &q;
    let area = &p * &q * &a;
    Triangle::new(rat_int(a), rat_int(b), rat_int(h), area)
}

/// Every primitive pair with `p + q <= limit` whose area is `n * D^2`,
/// scaled down by `D`. Distinct by canonical legs, sorted by the
/// denominator of `a` (then by `a`).
pub fn pyth_search(n: &Integer, limit: u64) -> Vec<Triangle> {
    let Some(n64) = n.to_u64().filter(|&v| v > 0) else {
        return Vec::new();
    };
    let mut found: BTreeMap<(Integer, Rational), Triangle> = BTreeMap::new();
    for p in 2..limit {
        for q in 1..p.min(limit - p + 1) {
            if (p - q) % 2 == 0 || gcd_u64(p, q) != 1 {
                continue;
            }
            let (p128, q128) = (p as u128, q as u128);
            let Some(area) = p128
                .checked_mul(q128)
                .and_then(|pq| pq.checked_mul(p128 * p128 - q128 * q128))
            else {
                continue;
            };
            if area % n64 as u128 != 0 {
                continue;
            }
            let Some(d) = is_square_u128(area / n64 as u128) else {
                continue;
            };
            let base = pyth_triangle(PythParams { p, q });
            let scale = rat_int(Integer::from(d));
            let t = Triangle::new(&base.a / &scale, &base.b / &scale, &base.h / &scale, n.clone());
            found.entry((t.a.denom().clone(), t.a.clone())).or_insert(t);
        }
    }
    found.into_values().collect()
}

impl Triangle {
    /// The same triangle scaled by an integer factor; its area grows by `f^2`.
    pub fn scaled(&self, f: &Integer) -> Triangle {
        let fr = rat_int(f.clone());
        Triangle::new(&self.a * &fr, &self.b * &fr, &self.h * &fr, &self.n * f * f)
    }

    pub fn is_integral(&self) -> bool {
        self.a.denom().is_one() && self.b.denom().is_one() && self.h.denom().is_one()
    }
}
