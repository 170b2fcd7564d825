//! Exact integer and rational arithmetic plus the elementary number theory
//! every search leans on: square detection, squarefree parts, factoring,
//! divisor lattices and two-square representations.
//!
//! Hot loops work on machine integers (`u64`/`u128`/`i128`) and only fall back
//! to [`Integer`] when a value no longer fits.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision signed integer.
pub type Integer = BigInt;

/// Arbitrary-precision fraction, always in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

const fn squares_mod<const M: usize>() -> [bool; M] {
    let mut t = [false; M];
    let mut i = 0;
    while i < M {
        t[(i * i) % M] = true;
        i += 1;
    }
    t
}

pub(crate) const QR64: [bool; 64] = squares_mod::<64>();
pub(crate) const QR63: [bool; 63] = squares_mod::<63>();
pub(crate) const QR65: [bool; 65] = squares_mod::<65>();
pub(crate) const QR11: [bool; 11] = squares_mod::<11>();

/// 64 * 63 * 65 * 11; a single reduction feeds all four residue tables.
const FILTER_MODULUS: u64 = 2_882_880;

#[inline]
fn passes_residue_filters(r: u64) -> bool {
    QR64[(r & 63) as usize]
        && QR63[(r % 63) as usize]
        && QR65[(r % 65) as usize]
        && QR11[(r % 11) as usize]
}

pub fn int(v: i64) -> Integer {
    Integer::from(v)
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(Integer::from(num), Integer::from(den))
}

pub fn rat_int(v: Integer) -> Rational {
    Rational::from_integer(v)
}

/// Parses `"num/den"` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: Integer = n.trim().parse().map_err(|_| bad())?;
            let d: Integer = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(rat_int(s.parse().map_err(|_| bad())?)),
    }
}

/// Always `num/den`, including integers (`12/1`).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Floor of the square root of a `u128`.
pub fn isqrt_u128(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let est = ((n as f64).sqrt() as u128).max(1);
    // One Newton step lands on or above the floor root; then descend.
    let mut x = (est + n / est) >> 1;
    loop {
        let y = (x + n / x) >> 1;
        if y >= x {
            return x;
        }
        x = y;
    }
}

pub fn is_square_u128(n: u128) -> Option<u128> {
    if !passes_residue_filters((n % FILTER_MODULUS as u128) as u64) {
        return None;
    }
    let r = isqrt_u128(n);
    (r * r == n).then_some(r)
}

pub fn is_square_i128(n: i128) -> Option<u128> {
    if n < 0 {
        None
    } else {
        is_square_u128(n as u128)
    }
}

/// Floor of the square root. Negative input is a domain error.
pub fn integer_sqrt(n: &Integer) -> Result<Integer> {
    if n.is_negative() {
        return Err(Error::Domain(format!("integer_sqrt of negative {n}")));
    }
    if let Some(v) = n.to_u128() {
        return Ok(Integer::from(isqrt_u128(v)));
    }
    Ok(n.sqrt())
}

/// Returns the non-negative root when `n` is a perfect square.
pub fn is_perfect_square(n: &Integer) -> Option<Integer> {
    if n.is_negative() {
        return None;
    }
    if let Some(v) = n.to_u128() {
        return is_square_u128(v).map(Integer::from);
    }
    let r = (n % FILTER_MODULUS).to_u64().expect("residue fits");
    if !passes_residue_filters(r) {
        return None;
    }
    let root = n.sqrt();
    (&root * &root == *n).then_some(root)
}

/// Exact square root of a rational, if it has one.
pub fn rational_sqrt(x: &Rational) -> Option<Rational> {
    let n = is_perfect_square(x.numer())?;
    let d = is_perfect_square(x.denom())?;
    Some(Rational::new_raw(n, d))
}

/// Natural log of |n|, accurate for integers of any size. `ln 0` is 0.
pub fn ln_abs(n: &Integer) -> f64 {
    let bits = n.bits();
    if bits == 0 {
        return 0.0;
    }
    if bits <= 1000 {
        return n.abs().to_f64().expect("finite").ln();
    }
    let shift = bits - 64;
    let top = (n.abs() >> shift).to_f64().expect("finite");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Extended Euclid: returns `(g, x, y)` with `a*x + b*y = g >= 0`.
pub fn ext_gcd(a: &Integer, b: &Integer) -> (Integer, Integer, Integer) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

// ---------------------------------------------------------------------------
// Factorization

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub sign: i8,
    /// Strictly increasing primes with positive exponents.
    pub factors: Vec<(Integer, u32)>,
}

impl Factorization {
    pub fn value(&self) -> Integer {
        let mut v = Integer::from(self.sign);
        for (p, e) in &self.factors {
            v *= num_traits::pow(p.clone(), *e as usize);
        }
        v
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn primes(&self) -> impl Iterator<Item = &Integer> {
        self.factors.iter().map(|(p, _)| p)
    }
}

const TRIAL_LIMIT: u32 = 1_000_000;

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_LIMIT as usize;
        let mut composite = vec![false; n + 1];
        let mut out = Vec::with_capacity(80_000);
        for i in 2..=n {
            if !composite[i] {
                out.push(i as u32);
                let mut j = i * i;
                while j <= n {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        out
    })
}

#[inline]
fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    r
}

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Strong probable-prime test to the first twelve prime bases; exact below 2^64.
pub fn is_probable_prime(n: &Integer) -> bool {
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    if n.is_negative() || n.is_even() {
        return false;
    }
    let one = Integer::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'witness: for &a in &MR_BASES {
        let mut x = Integer::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_brent_u64(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mulmod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        let mut q = 1u64;
        let mut r = 1u64;
        let m = 128u64;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mulmod(q, x.abs_diff(y), n);
                }
                g = gcd_u64(q, n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn pollard_brent_big(n: &Integer) -> Integer {
    if n.is_even() {
        return Integer::from(2);
    }
    let mut c = Integer::one();
    loop {
        let f = |x: &Integer| (x * x + &c) % n;
        let mut x = Integer::from(2);
        let mut y = x.clone();
        let mut g = Integer::one();
        let mut steps = 0u64;
        while g.is_one() {
            x = f(&x);
            y = f(&f(&y));
            g = (&x - &y).abs().gcd(n);
            steps += 1;
            if steps > 5_000_000 {
                break;
            }
        }
        if !g.is_one() && &g != n {
            return g;
        }
        c += 1;
    }
}

fn split_u64(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    let d = pollard_brent_u64(n);
    split_u64(d, out);
    split_u64(n / d, out);
}

fn split_big(n: Integer, out: &mut Vec<Integer>) {
    if n.is_one() {
        return;
    }
    if let Some(v) = n.to_u64() {
        let mut small = Vec::new();
        split_u64(v, &mut small);
        out.extend(small.into_iter().map(Integer::from));
        return;
    }
    if is_probable_prime(&n) {
        out.push(n);
        return;
    }
    let d = pollard_brent_big(&n);
    let rest = &n / &d;
    split_big(d, out);
    split_big(rest, out);
}

/// Trial division to 10^6, then Pollard-Brent rho. Deterministic.
pub fn factorize(n: &Integer) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::Domain("factorize(0)".into()));
    }
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut m = n.abs();
    let mut primes: Vec<Integer> = Vec::new();

    if let Some(mut v) = m.to_u64() {
        for &p in small_primes() {
            let p = p as u64;
            if p * p > v {
                break;
            }
            while v % p == 0 {
                primes.push(Integer::from(p));
                v /= p;
            }
        }
        let mut rest = Vec::new();
        split_u64(v, &mut rest);
        primes.extend(rest.into_iter().map(Integer::from));
    } else {
        for &p in small_primes() {
            let pb = Integer::from(p);
            if &pb * &pb > m {
                break;
            }
            while (&m % p).is_zero() {
                primes.push(pb.clone());
                m /= p;
            }
        }
        split_big(m, &mut primes);
    }

    primes.sort();
    let mut factors: Vec<(Integer, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    Ok(Factorization { sign, factors })
}

pub fn is_squarefree(n: &Integer) -> bool {
    !n.is_zero() && factorize(n).map(|f| f.is_squarefree()).unwrap_or(false)
}

/// Writes `n = s * f^2` with `s` squarefree, `f >= 1` and `sign(s) = sign(n)`.
pub fn squarefree_decompose(n: &Integer) -> Result<(Integer, Integer)> {
    if n.is_zero() {
        return Err(Error::Domain("squarefree_decompose(0)".into()));
    }
    let fac = factorize(n)?;
    let mut s = Integer::from(fac.sign);
    let mut f = Integer::one();
    for (p, e) in &fac.factors {
        if e % 2 == 1 {
            s *= p;
        }
        f *= num_traits::pow(p.clone(), (*e / 2) as usize);
    }
    Ok((s, f))
}

/// Every squarefree divisor of `n`, both signs, ordered by `(|d|, sign)`
/// with the positive one first.
pub fn signed_squarefree_divisors(n: &Integer) -> Result<Vec<Integer>> {
    let fac = factorize(n)?;
    let mut pos = vec![Integer::one()];
    for p in fac.primes() {
        let extra: Vec<Integer> = pos.iter().map(|d| d * p).collect();
        pos.extend(extra);
    }
    pos.sort();
    Ok(pos.into_iter().flat_map(|d| [d.clone(), -d]).collect())
}

/// All `(c, d)` with `c, d >= 1` and `c^2 + d^2 = n`, ordered by `c`
/// descending (so `157 -> [(11, 6), (6, 11)]`).
pub fn sum_of_two_squares(n: &Integer) -> Vec<(Integer, Integer)> {
    if !n.is_positive() {
        return Vec::new();
    }
    let mut out = Vec::new();
    if let Some(v) = n.to_u128() {
        let mut c = isqrt_u128(v);
        while c >= 1 {
            if let Some(d) = is_square_u128(v - c * c) {
                if d >= 1 {
                    out.push((Integer::from(c), Integer::from(d)));
                }
            }
            c -= 1;
        }
        return out;
    }
    let mut c = n.sqrt();
    while c.is_positive() {
        if let Some(d) = is_perfect_square(&(n - &c * &c)) {
            if d.is_positive() {
                out.push((c.clone(), d));
            }
        }
        c -= 1;
    }
    out
}

/// Numerator/denominator of a rational as a pair of `i128` when both fit.
pub fn rational_parts_i128(x: &Rational) -> Option<(i128, i128)> {
    Some((x.numer().to_i128()?, x.denom().to_i128()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn i(v: i64) -> Integer {
        Integer::from(v)
    }

    fn trial_squarefree_decompose(n: i64) -> (i64, i64) {
        let sign = n.signum();
        let mut m = n.abs();
        let (mut s, mut f) = (1, 1);
        let mut p = 2;
        while p * p <= m {
            while m % (p * p) == 0 {
                m /= p * p;
                f *= p;
            }
            if m % p == 0 {
                s *= p;
                m /= p;
            }
            p += 1;
        }
        (sign * s * m, f)
    }

    #[test]
    fn integer_sqrt_examples() {
        assert_eq!(integer_sqrt(&i(0)).unwrap(), i(0));
        assert_eq!(integer_sqrt(&i(1764)).unwrap(), i(42));
        // 368^2 = 135424 <= 136160 < 136161 = 369^2
        assert_eq!(integer_sqrt(&i(136160)).unwrap(), i(368));
        assert!(integer_sqrt(&i(-1)).is_err());
    }

    #[test]
    fn isqrt_u128_extremes() {
        for n in [u128::MAX, u128::MAX - 1, (1u128 << 64) * ((1u128 << 63) - 1), 1 << 126] {
            let r = isqrt_u128(n);
            assert!(r * r <= n);
            assert!((r + 1).checked_mul(r + 1).is_none_or(|s| s > n));
        }
        let r = (1u128 << 63) + 12345;
        assert_eq!(isqrt_u128(r * r), r);
        assert_eq!(isqrt_u128(r * r - 1), r - 1);
    }

    #[test]
    fn perfect_square_examples() {
        // A=9, D=6 for area 5: A^4 + 100 D^4 = 136161 = 369^2.
        assert_eq!(9i64.pow(4) + 100 * 6i64.pow(4), 136161);
        assert_eq!(is_perfect_square(&i(136161)), Some(i(369)));
        assert_eq!(is_perfect_square(&i(2)), None);
        assert_eq!(is_perfect_square(&i(-4)), None);
        let big = Integer::parse_bytes(b"123456789012345678901234567890123", 10).unwrap();
        assert_eq!(is_perfect_square(&(&big * &big)), Some(big.clone()));
        assert_eq!(is_perfect_square(&(&big * &big + 1)), None);
    }

    #[test]
    fn squarefree_decompose_examples() {
        assert_eq!(squarefree_decompose(&i(45)).unwrap(), (i(5), i(3)));
        assert_eq!(squarefree_decompose(&i(6)).unwrap(), (i(6), i(1)));
        assert_eq!(squarefree_decompose(&i(-18)).unwrap(), (i(-2), i(3)));
        assert!(squarefree_decompose(&i(0)).is_err());
        for n in [45, -18, 720, 1, -1, 1000001, 97 * 97 * 3] {
            let (s, f) = trial_squarefree_decompose(n);
            assert_eq!(squarefree_decompose(&i(n)).unwrap(), (i(s), i(f)), "n={n}");
        }
    }

    #[test]
    fn factorize_examples() {
        let f = factorize(&i(1254)).unwrap();
        assert_eq!(f.factors, vec![(i(2), 1), (i(3), 1), (i(11), 1), (i(19), 1)]);
        let f = factorize(&i(1000001)).unwrap();
        assert_eq!(f.factors, vec![(i(101), 1), (i(9901), 1)]);
        let f = factorize(&i(1)).unwrap();
        assert!(f.factors.is_empty());
        assert_eq!(f.sign, 1);
        assert!(factorize(&i(0)).is_err());
        let f = factorize(&i(-29274)).unwrap();
        assert_eq!(f.sign, -1);
        assert_eq!(f.value(), i(-29274));
    }

    #[test]
    fn factorize_beyond_trial_division() {
        // Two primes above 10^6 force the rho path; a third pushes past 2^64.
        let p = Integer::from(1_000_003u64);
        let q = Integer::from(2_147_483_647u64);
        let r = Integer::from(4_294_967_311u64);
        let n = &p * &q * &r * &q;
        let f = factorize(&n).unwrap();
        assert_eq!(f.value(), n);
        assert_eq!(f.factors, vec![(p, 1), (q, 2), (r, 1)]);
        assert!(f.primes().all(is_probable_prime));
    }

    #[test]
    fn divisor_lattice_examples() {
        let d: Vec<i64> = signed_squarefree_divisors(&i(6))
            .unwrap()
            .iter()
            .map(|d| d.to_i64().unwrap())
            .collect();
        assert_eq!(d, vec![1, -1, 2, -2, 3, -3, 6, -6]);
        let d = signed_squarefree_divisors(&i(79)).unwrap();
        assert_eq!(d, vec![i(1), i(-1), i(79), i(-79)]);
        // Brute-force oracle for 12: divisors whose square-part is trivial.
        let mut oracle: Vec<i64> = (1..=12)
            .filter(|d| 12 % d == 0 && trial_squarefree_decompose(*d).1 == 1)
            .flat_map(|d| [d, -d])
            .collect();
        oracle.sort_by_key(|d| (d.abs(), *d < 0));
        let got: Vec<i64> = signed_squarefree_divisors(&i(12))
            .unwrap()
            .iter()
            .map(|d| d.to_i64().unwrap())
            .collect();
        assert_eq!(got, oracle);
    }

    #[test]
    fn two_square_examples() {
        assert_eq!(sum_of_two_squares(&i(157)), vec![(i(11), i(6)), (i(6), i(11))]);
        assert_eq!(sum_of_two_squares(&i(37)), vec![(i(6), i(1)), (i(1), i(6))]);
        assert!(sum_of_two_squares(&i(3)).is_empty());
        assert_eq!(sum_of_two_squares(&i(50)), vec![(i(7), i(1)), (i(5), i(5)), (i(1), i(7))]);
    }

    #[test]
    fn two_squares_exhaustive_small() {
        for n in 1..=10_000i64 {
            let mut oracle = Vec::new();
            let mut c = 1;
            while c * c < n {
                let mut d = 1;
                while c * c + d * d <= n {
                    if c * c + d * d == n {
                        oracle.push((i(c), i(d)));
                    }
                    d += 1;
                }
                c += 1;
            }
            oracle.reverse();
            assert_eq!(sum_of_two_squares(&i(n)), oracle, "n={n}");
        }
    }

    #[test]
    fn rational_helpers() {
        assert_eq!(parse_rational("-882/145").unwrap(), rat(-882, 145));
        assert_eq!(parse_rational("12").unwrap(), rat(12, 1));
        assert_eq!(parse_rational("6/-4").unwrap(), rat(-3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x/2").is_err());
        assert_eq!(format_rational(&rat(12, 1)), "12/1");
        assert_eq!(rational_sqrt(&rat(25, 4)), Some(rat(5, 2)));
        assert_eq!(rational_sqrt(&rat(2, 4)), None);
        assert!((ln_abs(&i(12)) - 12f64.ln()).abs() < 1e-12);
        let huge = num_traits::pow(Integer::from(10), 400);
        assert!((ln_abs(&huge) - 400.0 * 10f64.ln()).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn squarefree_recomposes(n in -1_000_000_000i64..1_000_000_000) {
            prop_assume!(n != 0);
            let (s, f) = squarefree_decompose(&i(n)).unwrap();
            prop_assert_eq!(&s * &f * &f, i(n));
            prop_assert!(factorize(&s).unwrap().is_squarefree());
            prop_assert!(f.is_positive());
        }

        #[test]
        fn square_detection_agrees_with_isqrt(n in 1u64..1_000_000) {
            let r = integer_sqrt(&Integer::from(n)).unwrap();
            let expected = (&r * &r == Integer::from(n)).then_some(r);
            prop_assert_eq!(is_perfect_square(&Integer::from(n)), expected);
        }

        #[test]
        fn rational_field_identity(
            a in "-?[1-9][0-9]{0,199}", b in "[1-9][0-9]{0,199}",
            c in "-?[1-9][0-9]{0,199}", d in "[1-9][0-9]{0,199}",
        ) {
            let (a, b, c, d): (Integer, Integer, Integer, Integer) =
                (a.parse().unwrap(), b.parse().unwrap(), c.parse().unwrap(), d.parse().unwrap());
            let lhs = (Rational::new(a.clone(), b.clone()) + Rational::new(c.clone(), d.clone()))
                * rat_int(&b * &d);
            prop_assert_eq!(lhs, rat_int(&a * &d + &c * &b));
        }

        #[test]
        fn factorization_is_exact(n in 2u64..u64::MAX) {
            let f = factorize(&Integer::from(n)).unwrap();
            prop_assert_eq!(f.value(), Integer::from(n));
            prop_assert!(f.factors.windows(2).all(|w| w[0].0 < w[1].0));
            prop_assert!(f.primes().all(|p| is_prime_u64(p.to_u64().unwrap())));
        }
    }
}
