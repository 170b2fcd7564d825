//! Rational points on `w^2 = q(x)` for integer quartics `q`, plus the
//! conic machinery used to split a product of two quadratics.

mod conic;
mod poly;
mod search;

use num_integer::Integer as _;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::numth::{squarefree_decompose, Integer, Rational};

pub use conic::{
    conic_points, conic_second_point, descent_search, find_conic_point, product_descent, resultant, resultant_k_candidates, Conic,
    DescentHit, QuadricPair,
};
pub use poly::Interval;
pub use search::{quartic_search, quartic_search_scaled, search_quartic, SearchEnd, SearchOptions};

/// `c4 x^4 + c3 x^3 + c2 x^2 + c1 x + c0`, never identically zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuarticCurve {
    /// Indexed by degree: `c[0]` is the constant term.
    c: [Integer; 5],
}

impl QuarticCurve {
    /// Coefficients by ascending degree. Panics on the zero polynomial.
    pub fn new(c: [Integer; 5]) -> Self {
        Self::try_new(c).expect("quartic must not be identically zero")
    }

    pub fn try_new(c: [Integer; 5]) -> Result<Self> {
        if c.iter().all(Zero::is_zero) {
            return Err(Error::Domain("zero quartic".into()));
        }
        Ok(QuarticCurve { c })
    }

    /// Coefficients by descending degree, as usually written.
    pub fn from_descending(c4: Integer, c3: Integer, c2: Integer, c1: Integer, c0: Integer) -> Self {
        Self::new([c0, c1, c2, c3, c4])
    }

    pub fn coeffs(&self) -> &[Integer; 5] {
        &self.c
    }

    pub fn coeff(&self, degree: usize) -> &Integer {
        &self.c[degree]
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.c.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// `sum c_i p^i q^(4-i)`.
    pub fn eval_homogeneous(&self, p: &Integer, q: &Integer) -> Integer {
        let mut acc = Integer::zero();
        for (i, c) in self.c.iter().enumerate().rev() {
            acc = acc * p + c * q.pow(4 - i as u32);
        }
        acc
    }

    pub fn content(&self) -> Integer {
        self.c.iter().fold(Integer::zero(), |g, c| g.gcd(c))
    }

    pub fn scaled(&self, m: &Integer) -> Self {
        Self::new(self.c.clone().map(|c| c * m))
    }

    /// Divides out the largest square `s^2` dividing the content; square
    /// values of the result and of `self` correspond through `w -> s w`.
    pub fn without_square_content(&self) -> (Self, Integer) {
        let content = self.content();
        let (_, s) = squarefree_decompose(&content.abs()).expect("content is non-zero");
        let s2 = &s * &s;
        (Self::new(self.c.clone().map(|c| c / &s2)), s)
    }
}

/// A rational point on `w^2 = q(x)` (or `m w^2 = q(x)` for scaled searches).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuarticHit {
    pub x: Rational,
    pub w: Rational,
}

/// Intervals covering `{x : q(x) >= 0}`, with endpoints refined to width at
/// most 1/64 around each real root.
pub fn positivity_intervals(q: &QuarticCurve) -> Vec<Interval> {
    poly::nonnegative_intervals(&poly::Poly::from_integers(q.coeffs()), &Rational::new(1.into(), 64.into()))
}

/// Exact rational roots of `q`, ascending, each listed once.
pub fn rational_roots(q: &QuarticCurve) -> Vec<Rational> {
    poly::rational_roots_of(&poly::Poly::from_integers(q.coeffs()))
}

/// Splits `q` into two integer quadratics.
pub fn factor_into_quadratics(q: &QuarticCurve) -> Option<(Conic, Conic)> {
    let ([a, b, c], [d, e, f]) = poly::split_into_quadratics(q.coeffs())?;
    Some((Conic::new(a, b, c), Conic::new(d, e, f)))
}

#[cfg(test)]
mod tests;
