//! The congruent-number curve `Y^2 = X^3 - N^2 X`, its 2-isogenous partner
//! `V^2 = U^3 + 4 N^2 U`, and the maps between points, triangles and the two
//! curves.
//!
//! Both curves have the shape `y^2 = x^3 + A x`, so the geometry is shared.

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numth::{
    is_perfect_square, is_squarefree, ln_abs, rat_int, rational_sqrt, squarefree_decompose,
    Integer, Rational,
};
use crate::qsearch::{rational_roots, QuarticCurve};
use crate::triangle::Triangle;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Model {
    /// `Y^2 = X^3 - N^2 X`
    Congruent,
    /// `V^2 = U^3 + 4 N^2 U`
    Isogeny,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Curve {
    model: Model,
    n: Integer,
}

impl Curve {
    pub fn congruent(n: Integer) -> Result<Self> {
        Self::new(Model::Congruent, n)
    }

    pub fn isogeny(n: Integer) -> Result<Self> {
        Self::new(Model::Isogeny, n)
    }

    fn new(model: Model, n: Integer) -> Result<Self> {
        if !n.is_positive() || !is_squarefree(&n) {
            return Err(Error::NotSquarefree(n));
        }
        Ok(Self { model, n })
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn n(&self) -> &Integer {
        &self.n
    }

    /// The linear coefficient `A` of `y^2 = x^3 + A x`.
    pub fn a4(&self) -> Integer {
        let n2 = &self.n * &self.n;
        match self.model {
            Model::Congruent => -n2,
            Model::Isogeny => n2 * 4,
        }
    }

    pub fn contains(&self, x: &Rational, y: &Rational) -> bool {
        y * y == x * x * x + rat_int(self.a4()) * x
    }

    /// Builds an affine point, rejecting coordinates off the curve.
    pub fn point(&self, x: Rational, y: Rational) -> Result<CurvePoint> {
        if !self.contains(&x, &y) {
            return Err(Error::NotOnCurve);
        }
        Ok(CurvePoint { curve: self.clone(), coords: Some((x, y)) })
    }

    /// Point with the given x and the non-negative y, if `x^3 + A x` is a
    /// rational square.
    pub fn lift_x(&self, x: Rational) -> Option<CurvePoint> {
        let rhs = &x * &x * &x + rat_int(self.a4()) * &x;
        let y = rational_sqrt(&rhs)?;
        Some(CurvePoint { curve: self.clone(), coords: Some((x, y)) })
    }

    pub fn infinity(&self) -> CurvePoint {
        CurvePoint { curve: self.clone(), coords: None }
    }
}

/// A point on one of the two curves; `coords` is `None` at infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CurvePoint {
    curve: Curve,
    coords: Option<(Rational, Rational)>,
}

impl CurvePoint {
    /// Unchecked constructor; pair with [`on_curve`] when the data is untrusted.
    pub fn from_parts(curve: Curve, x: Rational, y: Rational) -> Self {
        Self { curve, coords: Some((x, y)) }
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn is_infinity(&self) -> bool {
        self.coords.is_none()
    }

    pub fn x(&self) -> Option<&Rational> {
        self.coords.as_ref().map(|(x, _)| x)
    }

    pub fn y(&self) -> Option<&Rational> {
        self.coords.as_ref().map(|(_, y)| y)
    }

    pub fn coords(&self) -> Option<(&Rational, &Rational)> {
        self.coords.as_ref().map(|(x, y)| (x, y))
    }
}

pub fn on_curve(pt: &CurvePoint) -> bool {
    match &pt.coords {
        None => true,
        Some((x, y)) => pt.curve.contains(x, y),
    }
}

pub fn negate(pt: &CurvePoint) -> CurvePoint {
    CurvePoint { curve: pt.curve.clone(), coords: pt.coords.as_ref().map(|(x, y)| (x.clone(), -y)) }
}

fn third_point(curve: &Curve, x1: &Rational, y1: &Rational, x2: &Rational, slope: Rational) -> CurvePoint {
    // No x^2 term, so the three x-coordinates sum to slope^2.
    let x3 = &slope * &slope - x1 - x2;
    let y3 = y1 + &slope * (&x3 - x1);
    CurvePoint { curve: curve.clone(), coords: Some((x3, y3)) }
}

/// Third intersection of the secant through `p1` and `p2` (not negated).
pub fn chord(p1: &CurvePoint, p2: &CurvePoint) -> Result<CurvePoint> {
    if p1.curve != p2.curve {
        return Err(Error::CurveMismatch);
    }
    let ((x1, y1), (x2, y2)) = match (&p1.coords, &p2.coords) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::Domain("chord needs affine points".into())),
    };
    if x1 == x2 {
        return Err(Error::VerticalLine);
    }
    let slope = (y2 - y1) / (x2 - x1);
    Ok(third_point(&p1.curve, x1, y1, x2, slope))
}

/// Second intersection of the tangent at `p` (not negated).
pub fn tangent(p: &CurvePoint) -> Result<CurvePoint> {
    let (x, y) = p.coords.as_ref().ok_or(Error::PointAtInfinity)?;
    if y.is_zero() {
        return Err(Error::TorsionPoint);
    }
    let three = rat_int(Integer::from(3));
    let slope = (three * x * x + rat_int(p.curve.a4())) / (y * rat_int(Integer::from(2)));
    Ok(third_point(&p.curve, x, y, x, slope))
}

/// `(P, Q) -> (Q^2/P^2, Q (P^2 + N^2) / P^2)`.
pub fn to_isogeny(p: &CurvePoint) -> Result<CurvePoint> {
    if p.curve.model != Model::Congruent {
        return Err(Error::CurveMismatch);
    }
    let (x, y) = p.coords.as_ref().ok_or(Error::PointAtInfinity)?;
    if x.is_zero() {
        return Err(Error::TorsionPoint);
    }
    let n2 = rat_int(&p.curve.n * &p.curve.n);
    let x2 = x * x;
    let u = y * y / &x2;
    let v = y * (&x2 + n2) / &x2;
    Ok(CurvePoint { curve: Curve { model: Model::Isogeny, n: p.curve.n.clone() }, coords: Some((u, v)) })
}

/// `(U, V) -> (V^2 / 4U^2, V (U^2 - 4N^2) / 8U^2)`.
pub fn from_isogeny(p: &CurvePoint) -> Result<CurvePoint> {
    if p.curve.model != Model::Isogeny {
        return Err(Error::CurveMismatch);
    }
    let (u, v) = p.coords.as_ref().ok_or(Error::PointAtInfinity)?;
    if u.is_zero() {
        return Err(Error::TorsionPoint);
    }
    let n2 = rat_int(&p.curve.n * &p.curve.n);
    let u2 = u * u;
    let x = v * v / (&u2 * rat_int(Integer::from(4)));
    let y = v * (&u2 - n2 * rat_int(Integer::from(4))) / (&u2 * rat_int(Integer::from(8)));
    Ok(CurvePoint { curve: Curve { model: Model::Congruent, n: p.curve.n.clone() }, coords: Some((x, y)) })
}

/// `X = N b / t`, `Y = 2 N^2 / t` with `t = h - a`.
pub fn triangle_to_point(t: &Triangle) -> Result<CurvePoint> {
    let curve = Curve::congruent(t.area().clone())?;
    let n = rat_int(t.area().clone());
    let s = t.h() - t.a();
    if !s.is_positive() {
        return Err(Error::Domain("h must exceed a".into()));
    }
    let x = &n * t.b() / &s;
    let y = &n * &n * rat_int(Integer::from(2)) / &s;
    Ok(CurvePoint { curve, coords: Some((x, y)) })
}

/// `a = |y/x|`, `b = 2N/a`, `h = |(x^2 + N^2)/y|`.
pub fn point_to_triangle(p: &CurvePoint) -> Result<Triangle> {
    if p.curve.model != Model::Congruent {
        return Err(Error::CurveMismatch);
    }
    let (x, y) = p.coords.as_ref().ok_or(Error::PointAtInfinity)?;
    let n = rat_int(p.curve.n.clone());
    if x.is_zero() || y.is_zero() || x.abs() == n {
        return Err(Error::TorsionPoint);
    }
    let a = (y / x).abs();
    let b = &n * rat_int(Integer::from(2)) / &a;
    let h = ((x * x + &n * &n) / y).abs();
    Ok(Triangle::new(a, b, h, p.curve.n.clone()))
}

/// `(P^2 + N^2)^2 - 4 X P (P - N)(P + N)` with denominators cleared; its
/// rational roots are the points whose tangent lands on `x_target`.
pub fn tangent_preimage_quartic(x_target: &Rational, curve: &Curve) -> QuarticCurve {
    let n2 = &curve.n * &curve.n;
    let (num, den) = (x_target.numer(), x_target.denom());
    // den (P^4 + 2N^2 P^2 + N^4) - 4 num (P^3 - N^2 P)
    QuarticCurve::new([
        den * &n2 * &n2,
        num * &n2 * 4,
        den * &n2 * 2,
        -(num * Integer::from(4)),
        den.clone(),
    ])
}

/// Rational roots of [`tangent_preimage_quartic`], ascending.
pub fn tangent_preimages(x_target: &Rational, curve: &Curve) -> Vec<Rational> {
    rational_roots(&tangent_preimage_quartic(x_target, curve))
}

/// `X = d u^2 / v^2`, `Y = d u w / v^3` with `d | N` squarefree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UvwRep {
    pub d: Integer,
    pub u: Integer,
    pub v: Integer,
    pub w: Integer,
}

impl UvwRep {
    pub fn point(&self, curve: &Curve) -> CurvePoint {
        let v2 = &self.v * &self.v;
        let x = Rational::new(&self.d * &self.u * &self.u, v2.clone());
        let y = Rational::new(&self.d * &self.u * &self.w, v2 * &self.v);
        CurvePoint { curve: curve.clone(), coords: Some((x, y)) }
    }

    /// `d^2 w^2 = d^3 u^4 - N^2 d v^4` together with the gcd and divisibility conditions.
    pub fn is_valid_for(&self, n: &Integer) -> bool {
        let (d, u, v, w) = (&self.d, &self.u, &self.v, &self.w);
        let u2 = u * u;
        let v2 = v * v;
        v.is_positive()
            && !d.is_zero()
            && (n % d).is_zero()
            && u.gcd(v).is_one()
            && w.gcd(v).is_one()
            && d.gcd(v).is_one()
            && d * d * w * w == d * d * d * &u2 * &u2 - n * n * d * &v2 * &v2
    }
}

pub fn uvw_decompose(p: &CurvePoint) -> Result<UvwRep> {
    if p.curve.model != Model::Congruent {
        return Err(Error::CurveMismatch);
    }
    let (x, y) = p.coords.as_ref().ok_or(Error::PointAtInfinity)?;
    if x.is_zero() || y.is_zero() {
        return Err(Error::TorsionPoint);
    }
    let v = is_perfect_square(x.denom()).ok_or(Error::NotOnCurve)?;
    let (d, u) = squarefree_decompose(x.numer())?;
    // Y = d u w / v^3
    let w_rat = y * rat_int(&v * &v * &v) / rat_int(&d * &u);
    if !w_rat.is_integer() {
        return Err(Error::NotOnCurve);
    }
    let rep = UvwRep { d, u, v, w: w_rat.to_integer() };
    if !rep.is_valid_for(&p.curve.n) {
        return Err(Error::NotOnCurve);
    }
    Ok(rep)
}

/// `ln max(|num X|, den X)`.
pub fn naive_height(p: &CurvePoint) -> Result<f64> {
    let x = p.x().ok_or(Error::PointAtInfinity)?;
    let num = x.numer().abs();
    let big = if &num > x.denom() { num } else { x.denom().clone() };
    Ok(ln_abs(&big))
}
