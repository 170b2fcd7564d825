use congruent_core::curve::on_curve;
use congruent_core::numth::{int, parse_rational, Integer, Rational};
use congruent_core::qsearch::factor_into_quadratics;
use congruent_core::solver::*;
use congruent_core::triangle::Triangle;
use congruent_core::tunnell::{congruent_candidates, tunnell_test, TunnellVerdict};
use proptest::prelude::*;

fn q(s: &str) -> Rational {
    parse_rational(s).unwrap()
}

fn cfg() -> SearchConfig {
    SearchConfig::default()
}

fn wit(c: &SolutionCertificate, name: &str) -> Rational {
    c.witness(name).unwrap_or_else(|| panic!("missing witness {name}")).clone()
}

fn legs(c: &SolutionCertificate) -> (Rational, Rational) {
    (c.triangle.a().clone(), c.triangle.b().clone())
}

#[test]
fn naive_examples() {
    let c = solve_naive(&int(5), &cfg().with_limit(15)).unwrap().unwrap();
    assert_eq!((wit(&c, "A"), wit(&c, "D")), (q("9"), q("6")));
    assert_eq!(c.triangle, Triangle::new(q("3/2"), q("20/3"), q("41/6"), int(5)));
    assert!(solve_naive(&int(5), &cfg().with_limit(14)).unwrap().is_none());
    assert!(solve_naive(&int(3), &cfg().with_limit(2000)).unwrap().is_none());
}

#[test]
fn hartley_n37_chain() {
    let c = solve_hartley(&int(37), &cfg()).unwrap().unwrap();
    for (name, v) in [
        ("g", "12"),
        ("t", "146/145"),
        ("r", "-882/145"),
        ("s", "-1/145"),
        ("z", "777925/1764"),
        ("y", "37002/128035"),
        ("x", "605170417321/9475102140"),
    ] {
        assert_eq!(wit(&c, name), q(v), "{name}");
    }
    assert_eq!(legs(&c), (q("450660/777923"), q("777923/6090")));
}

#[test]
fn hartley_chain_is_symmetric_in_g() {
    let (_, a) = hartley_chain(&int(37), &int(6), &int(1), &q("12")).unwrap();
    let (_, b) = hartley_chain(&int(37), &int(6), &int(1), &q("-1/12")).unwrap();
    assert_eq!(a, b);
    assert!(hartley_chain(&int(37), &int(6), &int(1), &q("2")).is_none());
}

#[test]
fn hartley_larger_examples() {
    let c = solve_hartley(&int(101), &cfg()).unwrap().unwrap();
    assert_eq!(wit(&c, "g"), q("149/141"));

    let c = solve_hartley(&int(53), &cfg()).unwrap().unwrap();
    assert_eq!(legs(&c), (q("1472112483/202332130"), q("21447205780/1472112483")));

    assert!(solve_hartley(&int(157), &cfg()).unwrap().is_none());
    let mut with_descent = cfg();
    with_descent.hartley_descent = true;
    let c = solve_hartley(&int(157), &with_descent).unwrap().unwrap();
    assert_eq!(wit(&c, "descent_t"), q("-52/131"));
    assert_eq!(wit(&c, "g"), q("-186067/136146"));
}

#[test]
fn applicability_errors_are_distinct() {
    assert!(matches!(solve_hartley(&int(3), &cfg()), Err(SolveError::NoTwoSquareRepresentation(_))));
    assert!(matches!(solve_zagier(&int(7), &cfg()), Err(SolveError::MethodInapplicable(_))));
    assert!(matches!(solve_zagier(&int(65), &cfg()), Err(SolveError::MethodInapplicable(_))));
    assert!(matches!(solve_factor(&int(7), &cfg()), Err(SolveError::MethodInapplicable(_))));
    assert!(solve_naive(&int(12), &cfg()).is_err());
    assert!(matches!(solve(&int(0), &cfg()), Err(SolveError::InvalidInput(_))));
}

#[test]
fn eqdesc_examples() {
    let c = solve_eqdesc(&int(79), &cfg().with_limit(200)).unwrap().unwrap();
    let got: Vec<Rational> = ["d", "e", "r", "s"].iter().map(|n| wit(&c, n)).collect();
    assert_eq!(got, [q("-79"), q("-1"), q("125"), q("52")]);
    assert_eq!(legs(&c), (q("233126551/167973000"), q("335946000/2950969")));

    let c = solve_eqdesc(&int(101), &cfg()).unwrap().unwrap();
    let got: Vec<Rational> = ["d", "e", "r", "s", "u", "v"].iter().map(|n| wit(&c, n)).collect();
    assert_eq!(got, [q("-1"), q("-101"), q("53"), q("397"), q("-63050"), q("21041")]);
    assert_eq!(legs(&c), (q("267980280100/44538033219"), q("44538033219/1326635050")));
    assert_eq!(c.triangle.h(), &q("2015242462949760001961/59085715926389725950"));
}

#[test]
fn zagier_n157() {
    assert_eq!(zagier_seed(&int(11), &int(6)), None);
    let seed = zagier_seed(&int(6), &int(11)).unwrap();
    assert_eq!(seed, (int(4), int(1), int(1)));
    let quartic = zagier_quartic(&int(6), &int(11), (&seed.0, &seed.1, &seed.2));
    assert_eq!(quartic.coeffs(), &[-124, 28, 66, -200, 213].map(|v| int(4 * v)));

    let c = solve_zagier(&int(157), &cfg()).unwrap().unwrap();
    for (name, v) in [
        ("k", "-262/79"),
        ("x", "322213"),
        ("y", "49921"),
        ("p", "356441"),
        ("q", "1143522"),
        ("v", "815196250404"),
        ("s", "1561742937446"),
        ("t", "-1053542191522"),
        ("u", "16691191806770"),
    ] {
        assert_eq!(wit(&c, name), q(v), "{name}");
    }
    let y = c.point.y().unwrap();
    assert_eq!(y.numer(), &"538962435089604615078004307258785218335".parse::<Integer>().unwrap());
    assert!((c.height - 54.6).abs() <= 0.2 * 54.6);
}

#[test]
fn isogeny_descent_n103() {
    let c = solve_isogeny_descent(&int(103), &cfg()).unwrap().unwrap();
    for (name, v) in [("m", "-103"), ("k", "100/19"), ("a", "10361"), ("b", "-4522"), ("u", "13439"), ("v", "257")] {
        assert_eq!(wit(&c, name), q(v), "{name}");
    }
    assert_eq!((wit(&c, "U"), wit(&c, "V")), (q("361213442/66049"), q("6869952561580/16974593")));
    assert_eq!(
        c.point.coords(),
        Some((
            &q("16332534559428025/11928893315329"),
            &q("2081363685506152106939880/41200286097029552767")
        ))
    );
}

#[test]
fn kww_instances_satisfy_the_k_identity() {
    for v in [5i64, 6, 7, 13, 14, 15, 21, 22, 23, 29, 30, 31, 34, 37, 38] {
        let Ok(all) = kww_instances(&int(v), 3) else {
            continue;
        };
        for inst in all {
            assert_eq!(inst.k_value(), Rational::new(-inst.d.clone(), int(4)));
            let lhs = &inst.e * &inst.e + int(6) * &inst.e * &inst.g0 + &inst.g0 * &inst.g0;
            assert_eq!(lhs, int(4) * &inst.d * &inst.t0 * &inst.t0);
        }
    }
}

#[test]
fn kww_n8662() {
    let all = kww_instances(&int(8662), 3).unwrap();
    let inst = all.iter().find(|i| i.g0 == int(1620)).unwrap();
    assert_eq!((inst.d.clone(), inst.t0.clone()), (int(1), int(6361)));
    let (reduced, s) = inst.quartic.without_square_content();
    assert_eq!(s, int(2));
    assert_eq!(reduced.coeffs(), &[6480, -101776, 217608, -25444, 405].map(int));
    assert!(factor_into_quadratics(&reduced).is_some());

    let z = q("420742975301/561839195");
    let (f, g) = inst.back_substitute(&z).unwrap();
    assert!(congruent_core::numth::rational_sqrt(&f).is_some());
    assert!(congruent_core::numth::rational_sqrt(&g).is_some());
}

#[test]
fn kww_on_one_and_seven_mod_eight() {
    let small = cfg().with_limit(300);
    for v in [7i64, 15, 23, 31, 47, 71, 17, 73, 89, 97] {
        match solve_kww(&int(v), &small) {
            Ok(found) => assert!(found.is_none(), "{v}"),
            Err(e) => assert!(matches!(e, SolveError::NoInitialSolution | SolveError::CoprimalityFailure), "{v}: {e}"),
        }
    }
    // 41 = 8*5 + 1 does have a hit, from the square g0 = 25; it verifies.
    let c = solve_kww(&int(41), &small).unwrap().unwrap();
    assert_eq!((wit(&c, "g0"), wit(&c, "z")), (q("25"), q("28/3")));
    assert!(c.verify());
}

#[test]
fn factor_examples() {
    let c = solve_factor(&int(1000001), &cfg()).unwrap().unwrap();
    assert_eq!(c.point.x(), Some(&q("310941179641/77841")));
    assert_eq!((wit(&c, "a"), wit(&c, "b")), (q("101"), q("9901")));
    assert!((c.height - 310941179641f64.ln()).abs() < 1e-9);

    let c = solve_factor(&int(6), &cfg()).unwrap().unwrap();
    assert!(c.verify());
    assert_eq!(c.triangle.area(), &int(6));
}

#[test]
fn direct_finds_two_triangles_for_41() {
    let all = direct_certificates(&int(41), &cfg()).unwrap();
    assert!(all.len() >= 2);
    assert_ne!(all[0].triangle, all[1].triangle);
}

#[test]
fn pipeline_examples() {
    let c = solve(&int(6), &cfg()).unwrap();
    assert_eq!(c.triangle, Triangle::new(q("3"), q("4"), q("5"), int(6)));
    assert!(matches!(solve(&int(3), &cfg()), Err(SolveError::NotCongruentByTunnell(_))));

    let c = solve(&int(157), &cfg()).unwrap();
    assert_eq!(c.method, Method::Zagier);

    let c = solve(&int(24), &cfg()).unwrap();
    assert_eq!(c.n, int(6));
    assert_eq!(c.scale(), int(2));
    let big = c.scaled_triangle();
    assert_eq!(big.area(), &int(24));
    assert!(big.verify());

    let mut off = cfg().with_methods(&[Method::Naive]).with_limit(50);
    off.tunnell_screen = false;
    assert!(matches!(solve(&int(3), &off), Err(SolveError::Unsolved(_))));
}

#[test]
fn methods_agree_on_small_areas() {
    let small = cfg().with_limit(1500);
    for v in [5i64, 6, 7, 13, 14, 15] {
        for m in Method::ALL {
            if let Ok(Some(c)) = solve_with(&int(v), m, &small) {
                assert!(c.verify(), "{v} {m}");
                assert_eq!(c.triangle.area(), &int(v));
                assert_eq!(c.method, m);
            }
        }
    }
}

#[test]
fn results_do_not_depend_on_workers() {
    for v in [37i64, 79, 103] {
        let base = solve(&int(v), &SearchConfig { workers: 1, ..cfg() }).unwrap();
        for workers in [2, 8] {
            assert_eq!(solve(&int(v), &SearchConfig { workers, ..cfg() }).unwrap(), base, "{v} with {workers}");
        }
    }
}

#[test]
fn method_names_round_trip() {
    for m in Method::ALL {
        assert_eq!(m.name().parse::<Method>().unwrap(), m);
    }
    assert!("simplex".parse::<Method>().is_err());
}

#[test]
fn tampered_certificates_fail() {
    let c = solve(&int(5), &cfg()).unwrap();
    let mut bad = c.clone();
    bad.triangle = Triangle::new(q("3"), q("4"), q("5"), int(5));
    assert!(!bad.verify());
    let mut bad = c.clone();
    bad.n = int(6);
    assert!(!bad.verify());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn solved_candidates_verify(idx in 0usize..36) {
        let list = congruent_candidates(1, 99).unwrap();
        let n = &list[idx];
        let c = solve(n, &cfg()).unwrap();
        prop_assert!(c.verify());
        prop_assert!(on_curve(&c.point));
        prop_assert_eq!(c.triangle.area(), n);
        prop_assert_eq!(tunnell_test(n).unwrap(), TunnellVerdict::CongruentCandidateBsd);
    }

    #[test]
    fn scaled_inputs_keep_their_area(idx in 0usize..12, f in 1i64..6) {
        let list = congruent_candidates(1, 40).unwrap();
        let n = &list[idx % list.len()];
        let c = solve(&(n * int(f * f)), &cfg()).unwrap();
        prop_assert_eq!(&c.n, n);
        let big = c.scaled_triangle();
        prop_assert_eq!(big.area(), &(n * int(f * f)));
        prop_assert!(big.verify());
    }
}
