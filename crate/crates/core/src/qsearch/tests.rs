use std::ops::ControlFlow;

use num_traits::{Signed, Zero};
use proptest::prelude::*;

use super::search::SieveProbe;
use super::*;
use crate::numth::{int, rat, Integer, Rational};

fn quartic(desc: [i64; 5]) -> QuarticCurve {
    let [c4, c3, c2, c1, c0] = desc.map(int);
    QuarticCurve::from_descending(c4, c3, c2, c1, c0)
}

/// `-2 (r g^2 + 2 s g - r)(s g^2 - 2 r g - s)`.
fn hartley_quartic(r: i64, s: i64) -> QuarticCurve {
    let f = [r, 2 * s, -r];
    let g = [-2 * s, 4 * r, 2 * s];
    let mut c = [0i64; 5];
    for (i, x) in f.iter().enumerate() {
        for (j, y) in g.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    quartic(c)
}

fn hartley_pair(r: i64, s: i64) -> QuadricPair {
    QuadricPair::new(Conic::new(int(r), int(2 * s), int(-r)), Conic::new(int(-2 * s), int(4 * r), int(2 * s))).unwrap()
}

fn f64_of(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap()
}

#[test]
fn hartley_positivity_brackets_the_four_roots() {
    let q = hartley_quartic(6, 1);
    let s37 = 37f64.sqrt();
    let roots = [(-1.0 - s37) / 6.0, 6.0 - s37, (-1.0 + s37) / 6.0, 6.0 + s37];
    let ivs = positivity_intervals(&q);
    // Every root lies in some interval, and every interval endpoint sits
    // within 1/64 of a root.
    for r in roots {
        assert!(ivs.iter().any(|iv| iv.contains(&Rational::from_float(r).unwrap())));
    }
    for iv in &ivs {
        for e in [&iv.lo, &iv.hi].into_iter().flatten() {
            let x = f64_of(e);
            assert!(roots.iter().any(|r| (r - x).abs() <= 1.0 / 64.0), "{x}");
        }
    }
    // Negative leading coefficient: bounded intervals only.
    assert!(ivs.iter().all(|iv| iv.lo.is_some() && iv.hi.is_some()));
    assert!(!ivs.iter().any(|iv| iv.contains(&rat(0, 1)) && q.eval(&rat(0, 1)).is_negative()));
}

#[test]
fn definite_quartics() {
    assert_eq!(positivity_intervals(&quartic([1, 0, 0, 0, 1])), vec![Interval::whole()]);
    assert!(positivity_intervals(&quartic([-1, 0, 0, 0, -1])).is_empty());
}

#[test]
fn hartley_hit_n37() {
    let hits = quartic_search(&hartley_quartic(6, 1), 13);
    assert!(hits.contains(&QuarticHit { x: rat(12, 1), w: rat(42, 1) }), "{hits:?}");
}

#[test]
fn zagier_quartic_hit() {
    let q = quartic([4 * 213, -4 * 200, 4 * 66, 4 * 28, -4 * 124]);
    let hits = quartic_search(&q, 341);
    assert!(hits.iter().any(|h| h.x == rat(-262, 79)));
}

#[test]
fn scaled_searches() {
    let q = quartic([1, -4, -6, -12, -7]);
    let hits = quartic_search_scaled(&q, &int(-103), 119);
    let h = hits.iter().find(|h| h.x == rat(100, 19)).expect("k = 100/19");
    assert_eq!(&h.w * &h.w * rat(-103, 1), q.eval(&h.x));

    let q = quartic([10201, 0, -606, 0, 1]);
    let hits = quartic_search_scaled(&q, &int(-1), 450);
    assert!(hits.iter().any(|h| h.x == rat(53, 397)));

    let q = hartley_quartic(6, 1);
    assert_eq!(quartic_search_scaled(&q, &int(1), 60), quartic_search(&q, 60));
}

#[test]
fn hits_are_sorted_and_exact() {
    let q = hartley_quartic(6, 1);
    let hits = quartic_search(&q, 400);
    for h in &hits {
        assert!(!h.w.is_negative());
        assert_eq!(&h.w * &h.w, q.eval(&h.x));
    }
    let keys: Vec<_> = hits.iter().map(|h| (h.x.denom().clone(), h.x.numer().clone())).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn worker_partitioning_does_not_change_results() {
    let q = hartley_quartic(6, 1);
    let run = |w| {
        let mut out = Vec::new();
        let _ = search_quartic::<()>(&q, &int(1), &SearchOptions::new(500).workers(w), |h| {
            out.push(h.clone());
            ControlFlow::Continue(())
        });
        out
    };
    let one = run(1);
    assert!(!one.is_empty());
    assert_eq!(run(2), one);
    assert_eq!(run(8), one);
}

#[test]
fn early_stop_returns_first_hit() {
    let q = hartley_quartic(6, 1);
    let all = quartic_search(&q, 300);
    let first = search_quartic(&q, &int(1), &SearchOptions::new(300), |h| ControlFlow::Break(h.clone()));
    assert_eq!(first, SearchEnd::Found(all[0].clone()));
}

#[test]
fn hartley_symmetry_n37() {
    let q = hartley_quartic(6, 1);
    let hits = quartic_search(&q, 600);
    let xs: Vec<Rational> = hits.iter().map(|h| h.x.clone()).collect();
    assert!(xs.len() >= 2);
    for x in &xs {
        if !x.is_zero() {
            let image = -x.recip();
            assert!(xs.contains(&image), "{x} has no partner");
        }
    }
}

#[test]
fn sieve_never_rejects_squares() {
    use rand::{rngs::StdRng, Rng, SeedableRng};
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut checked = 0usize;
    for round in 0..2500 {
        // S(x)^2 + lambda * prod (q_i x - p_i): every point below is square.
        let s: [i64; 3] = std::array::from_fn(|_| rng.random_range(-40..=40));
        let pts: Vec<(i64, u64)> = (0..40)
            .map(|_| loop {
                let p = rng.random_range(-3000i64..=3000);
                let q = rng.random_range(1u64..=3000);
                if crate::numth::gcd_u64(p.unsigned_abs(), q) == 1 {
                    break (p, q);
                }
            })
            .collect();
        let lambda: i64 = if round % 2 == 0 { 0 } else { rng.random_range(-5..=5) };
        let mut c = [Integer::zero(), Integer::zero(), Integer::zero(), Integer::zero(), Integer::zero()];
        for i in 0..3 {
            for j in 0..3 {
                c[i + j] += int(s[i] * s[j]);
            }
        }
        let mut prod = vec![Integer::from(lambda)];
        for (p, q) in pts.iter().take(4) {
            let mut next = vec![Integer::zero(); prod.len() + 1];
            for (i, v) in prod.iter().enumerate() {
                next[i + 1] += v * Integer::from(*q);
                next[i] -= v * Integer::from(*p);
            }
            prod = next;
        }
        for (i, v) in prod.into_iter().enumerate() {
            c[i] += v;
        }
        if c.iter().all(Zero::is_zero) {
            continue;
        }
        let quartic = QuarticCurve::new(c);
        let probe = SieveProbe::new(&quartic);
        let sure = if lambda == 0 { pts.len() } else { 4 };
        for (p, q) in pts.iter().take(sure) {
            let v = quartic.eval_homogeneous(&int(*p), &Integer::from(*q));
            assert!(crate::numth::is_perfect_square(&v).is_some());
            assert!(probe.accepts(*p, *q), "sieve rejected a square at {p}/{q}");
            checked += 1;
        }
        // The remaining points are mostly non-squares; the sieve may reject
        // them, but must agree with the exact test whenever it is a square.
        for (p, q) in pts.iter().skip(sure) {
            let v = quartic.eval_homogeneous(&int(*p), &Integer::from(*q));
            if crate::numth::is_perfect_square(&v).is_some() {
                assert!(probe.accepts(*p, *q));
            }
            checked += 1;
        }
    }
    assert!(checked >= 100_000);
}

#[test]
fn conic_second_point_examples() {
    // Y^2 = 1 + 2X^2 through (0, 1), slope q/p.
    let conic = Conic::new(int(2), int(0), int(1));
    for (p, q) in [(1i64, 1i64), (2, 1), (1, 3), (5, 7)] {
        let (x, y) = conic_second_point(&conic, &int(1), (&rat(0, 1), &rat(1, 1)), &rat(q, p)).unwrap();
        let t = 2 * p * p - q * q;
        assert_eq!(x, rat(2 * p * q, t));
        assert_eq!(y, rat(2 * p * p + q * q, t));
    }
    // Slope zero mirrors about the axis of the parabola.
    let conic = Conic::new(int(3), int(5), int(28));
    let (x0, y0) = (rat(1, 1), rat(6, 1));
    let (x, y) = conic_second_point(&conic, &int(1), (&x0, &y0), &rat(0, 1)).unwrap();
    assert_eq!((x, y), (rat(-8, 3), rat(6, 1)));
    assert_eq!(
        conic_second_point(&Conic::new(int(2), int(0), int(2)), &int(2), (&rat(0, 1), &rat(1, 1)), &rat(1, 1)),
        Err(crate::Error::AsymptoticSlope)
    );
}

#[test]
fn resultants() {
    let pair = QuadricPair::new(Conic::new(int(1), int(0), int(1)), Conic::new(int(1), int(0), int(-1))).unwrap();
    assert_eq!(pair.resultant, int(4));
    assert_eq!(resultant_k_candidates(&pair), vec![int(1), int(-1), int(2), int(-2)]);

    for (r, s) in [(6i64, 1i64), (11, 6), (10, 1), (1, 2)] {
        let n = r * r + s * s;
        let pair = hartley_pair(r, s);
        assert_eq!(pair.resultant, int(-16 * n * n));
        let expected = crate::numth::signed_squarefree_divisors(&int(2 * n)).unwrap();
        assert_eq!(pair.k_candidates, expected);
    }

    let shared = QuadricPair::new(Conic::new(int(1), int(-3), int(2)), Conic::new(int(1), int(1), int(-2)));
    assert_eq!(shared, Err(crate::Error::DegeneratePair));
}

#[test]
fn descent_n157() {
    let pair = hartley_pair(11, 6);
    let start = find_conic_point(&pair.first, &int(1), 50).unwrap();
    assert_eq!(start, (int(-2), int(3), int(1)));
    let q = product_descent(&pair, &int(1), (&start.0, &start.1, &start.2)).unwrap();
    assert_eq!(q, quartic([-124, -552, -648, 1464, 5092]));
    let hit = descent_search(&pair, &SearchOptions::new(200), 50, 1, |h| ControlFlow::Break(h.clone())).found().unwrap();
    assert_eq!(hit.k, int(1));
    assert_eq!(hit.t, Some(rat(-52, 131)));
    // The partner -1/x of the value a plain search would need.
    assert_eq!(hit.x, rat(136146, 186067));
}

#[test]
fn descent_rejects_bad_inputs() {
    let pair = hartley_pair(11, 6);
    assert!(product_descent(&pair, &int(3), (&int(-2), &int(3), &int(1))).is_err());
    assert!(product_descent(&pair, &int(1), (&int(-2), &int(4), &int(1))).is_err());
}

#[test]
fn factored_quartic_n8662() {
    let q = quartic([405, -25444, 217608, -101776, 6480]);
    let (f, s) = factor_into_quadratics(&q).unwrap();
    let mut got = [(f.a.clone(), f.b.clone(), f.c.clone()), (s.a.clone(), s.b.clone(), s.c.clone())];
    got.sort();
    assert_eq!(got, [(int(5), int(-264), int(20)), (int(81), int(-812), int(324))]);
    let pair = QuadricPair::new(f, s).unwrap();
    let target = Rational::new(Integer::from(420742975301u64), Integer::from(561839195u64));
    let prod = pair.first.eval(&target) * pair.second.eval(&target);
    assert!(crate::numth::rational_sqrt(&prod).is_some());
    // Both factors are squares themselves, so the point sits on the k = 1
    // branch; the slope from a modest starting point reaches it.
    let (first, second) = if pair.first.a == int(5) { (&pair.first, &pair.second) } else { (&pair.second, &pair.first) };
    let ordered = QuadricPair::new(first.clone(), second.clone()).unwrap();
    let start = (int(-145), int(1145), int(31));
    assert!(conic_points(first, &int(1), 176).any(|p| p == start));
    let t = rat(11340, 5417);
    let quartic = product_descent(&ordered, &int(1), (&start.0, &start.1, &start.2)).unwrap();
    assert!(crate::numth::rational_sqrt(&quartic.eval(&t)).is_some());
    let (x, _) = conic_second_point(first, &int(1), (&rat(-145, 31), &rat(1145, 31)), &t).unwrap();
    assert_eq!(x, target);
}

proptest! {
    #[test]
    fn positivity_never_excludes_nonnegative(
        c in prop::array::uniform5(-50i64..50),
        p in -400i64..400,
        q in 1i64..60,
    ) {
        prop_assume!(c.iter().any(|&v| v != 0));
        let quart = quartic(c);
        let x = rat(p, q);
        if !quart.eval(&x).is_negative() {
            prop_assert!(positivity_intervals(&quart).iter().any(|iv| iv.contains(&x)));
        }
    }

    #[test]
    fn resultant_matches_closed_form(v in prop::array::uniform6(-60i64..60)) {
        let [a, b, c, d, e, f] = v;
        let closed = (a * f - c * d).pow(2) - (a * e - b * d) * (b * f - c * e);
        let r = resultant(&Conic::new(int(a), int(b), int(c)), &Conic::new(int(d), int(e), int(f)));
        prop_assert_eq!(r, int(closed));
    }

    #[test]
    fn second_point_lies_on_conic(
        a in -20i64..20, b in -20i64..20, k in prop::sample::select(vec![1i64, -1, 2, -3, 5, 6]),
        x0 in -20i64..20, y0 in -20i64..20, tn in -30i64..30, td in 1i64..30,
    ) {
        let c = k * y0 * y0 - a * x0 * x0 - b * x0;
        let conic = Conic::new(int(a), int(b), int(c));
        let t = rat(tn, td);
        if let Ok((x, y)) = conic_second_point(&conic, &int(k), (&rat(x0, 1), &rat(y0, 1)), &t) {
            prop_assert_eq!(conic.eval(&x), rat(k, 1) * &y * &y);
        } else {
            prop_assert_eq!(rat(k, 1) * &t * &t, rat(a, 1));
        }
    }

    #[test]
    fn rational_roots_recovered(r1n in -30i64..30, r1d in 1i64..12, r2n in -30i64..30, r2d in 1i64..12, m in 1i64..5) {
        // (r1d x - r1n)(r2d x - r2n)(x^2 + m)
        let l1 = [-r1n, r1d];
        let l2 = [-r2n, r2d];
        let quad = [l1[0] * l2[0], l1[0] * l2[1] + l1[1] * l2[0], l1[1] * l2[1]];
        let mut c = [0i64; 5];
        for (i, v) in quad.iter().enumerate() {
            c[i] += v * m;
            c[i + 2] += v;
        }
        let q = QuarticCurve::new(c.map(int));
        let mut expected = vec![rat(r1n, r1d), rat(r2n, r2d)];
        expected.sort();
        expected.dedup();
        prop_assert_eq!(rational_roots(&q), expected);
    }
}
