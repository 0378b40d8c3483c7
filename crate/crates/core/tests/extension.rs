use plgroups::exact_pl::{Interval, PLMap};
use plgroups::extension::{
    extended_group, germ_exponents, germ_slope, higman_instance_check, make_f_alpha, make_xi_alpha, solve_germ,
    xi_commutator_identity, Endpoint, ExtConfig, GermExponents,
};
use plgroups::labelling::Labelling;
use plgroups::line_group::{GroupWord, LineGen};
use plgroups::rational::{q, Rational};
use plgroups::thompson::{bump, interval_transporter, is_in_f, standard_elements};
use plgroups::Error;
use proptest::prelude::*;

fn iv(a: Rational, b: Rational) -> Interval {
    Interval::of(a, b)
}

fn config(alpha: Rational) -> ExtConfig {
    ExtConfig::new(alpha, iv(q(1, 2), q(5, 8)), iv(q(1, 4), q(5, 16))).unwrap()
}

#[test]
fn f_alpha_values() {
    let f = make_f_alpha(&q(1, 3)).unwrap();
    assert_eq!(f.eval(&q(1, 2)).unwrap(), q(1, 6));
    assert_eq!(f.eval(&Rational::one()).unwrap(), Rational::one());
    assert_eq!(f.slope_right_of(&Rational::zero()), q(1, 3));
    assert_eq!(f.slope_left_of(&Rational::one()), q(5, 3));
    assert!(!is_in_f(&f));
    assert!(make_f_alpha(&q(1, 4)).is_err());
    assert!(make_f_alpha(&q(4, 3)).is_err());
}

#[test]
fn config_validation() {
    assert!(ExtConfig::new(q(1, 3), iv(q(1, 4), q(5, 16)), iv(q(1, 2), q(5, 8))).is_err());
    assert!(ExtConfig::new(q(1, 3), iv(q(1, 2), q(3, 4)), iv(q(1, 2), q(5, 8))).is_err());
    assert!(ExtConfig::new(q(1, 3), iv(q(1, 2), q(3, 4)), iv(q(1, 8), q(3, 8))).is_err());
    assert!(ExtConfig::new(q(1, 3), iv(q(1, 2), q(3, 4)), iv(q(1, 4), q(3, 8))).is_ok());
    assert!(ExtConfig::new(q(1, 2), iv(q(1, 2), q(5, 8)), iv(q(1, 4), q(5, 16))).is_err());
}

#[test]
fn xi_alpha_shape() {
    let cfg = config(q(1, 3));
    let xi = make_xi_alpha(&cfg).unwrap();
    for x in [q(1, 8), q(1, 4), q(5, 16), q(3, 8), q(1, 2), q(5, 8), q(3, 4), q(15, 16)] {
        assert_eq!(xi.eval(&x).unwrap(), x);
    }
    assert_ne!(xi.eval(&q(9, 16)).unwrap(), q(9, 16));
    assert_ne!(xi.eval(&q(9, 32)).unwrap(), q(9, 32));
    assert_eq!(xi.slope_right_of(&q(1, 2)), q(1, 3));
    assert_eq!(xi.slope_right_of(&q(1, 4)), Rational::int(3));
    let on_i = germ_exponents(&xi.restrict(&cfg.i).unwrap(), Endpoint::Left, &cfg.alpha).unwrap();
    let on_j = germ_exponents(&xi.restrict(&cfg.j).unwrap(), Endpoint::Left, &cfg.alpha).unwrap();
    assert_eq!(on_i.alpha_exp + on_j.alpha_exp, 0);
    let supp = xi.support().unwrap();
    assert!(supp.iter().all(|c| cfg.i.contains_interval(c) || cfg.j.contains_interval(c)));
}

#[test]
fn xi_identity_holds() {
    for alpha in [q(1, 3), q(3, 5)] {
        let cfg = config(alpha);
        for i1 in [iv(q(3, 4), q(13, 16)), iv(q(7, 8), q(15, 16))] {
            let r = xi_commutator_identity(&cfg, &i1).unwrap();
            assert!(r.equal, "alpha {} I1 {}", cfg.alpha, i1);
        }
    }
    assert!(xi_commutator_identity(&config(q(1, 3)), &iv(q(1, 8), q(3, 16))).is_err());
}

#[test]
fn germ_examples() {
    let a = q(1, 3);
    let f = make_f_alpha(&a).unwrap();
    assert_eq!(germ_exponents(&f, Endpoint::Left, &a).unwrap(), GermExponents { two_exp: 0, alpha_exp: 1 });
    let s = standard_elements();
    assert_eq!(germ_exponents(&s.a, Endpoint::Left, &a).unwrap(), GermExponents { two_exp: 1, alpha_exp: 0 });
    let id = PLMap::unit_identity();
    assert_eq!(germ_exponents(&id, Endpoint::Right, &a).unwrap(), GermExponents { two_exp: 0, alpha_exp: 0 });
    assert_eq!(solve_germ(&q(4, 9), &a).unwrap(), GermExponents { two_exp: 2, alpha_exp: 2 });
    assert_eq!(solve_germ(&q(3, 8), &a).unwrap(), GermExponents { two_exp: -3, alpha_exp: -1 });
    assert_eq!(solve_germ(&q(6, 5), &q(3, 5)).unwrap(), GermExponents { two_exp: 1, alpha_exp: 1 });
}

#[test]
fn germs_separate_alphas() {
    let f = make_f_alpha(&q(3, 5)).unwrap();
    assert!(matches!(germ_exponents(&f, Endpoint::Left, &q(1, 3)), Err(Error::NotRepresentable { .. })));
    let g = make_f_alpha(&q(1, 3)).unwrap();
    assert!(germ_exponents(&g, Endpoint::Left, &q(3, 5)).is_err());
    assert!(solve_germ(&q(1, 9), &q(1, 3)).is_ok());
    assert!(solve_germ(&q(1, 5), &q(1, 3)).is_err());
}

#[test]
fn higman_examples() {
    let b = bump(&iv(q(1, 4), q(3, 8))).unwrap();
    let push = interval_transporter(&iv(q(1, 4), q(3, 8)), &iv(q(1, 2), q(9, 16))).unwrap();
    let off = interval_transporter(&iv(q(1, 2), q(9, 16)), &iv(q(5, 8), q(11, 16))).unwrap();
    assert!(higman_instance_check(&b, &b, &off, &push).unwrap());
    let id = PLMap::unit_identity();
    let wide = bump(&iv(q(1, 8), q(7, 8))).unwrap();
    assert!(!higman_instance_check(&wide, &wide, &wide, &id).unwrap());
    let far = bump(&iv(q(3, 4), q(7, 8))).unwrap();
    assert!(!higman_instance_check(&b, &b, &far, &id).unwrap());
    assert!(higman_instance_check(&b, &far, &off, &push).is_ok_and(|ok| !ok));
}

#[test]
fn extended_generators() {
    let cfg = config(q(1, 3));
    let xi = make_xi_alpha(&cfg).unwrap();
    let rho = Labelling::from_seed_str("a").unwrap();
    let group = extended_group(rho.clone(), &cfg).unwrap();
    let g = group.generator(LineGen::Gamma).unwrap();
    let w = group.generator(LineGen::Omega).unwrap();
    for n in -6..6 {
        let block = group.restrict(&g, &Interval::ints(n, n + 1).unwrap()).normalize_from(&Interval::ints(n, n + 1).unwrap()).unwrap();
        let label = rho.label_at(&(Rational::int(n) + q(1, 2))).unwrap();
        let expected = if label.is_inverse() { xi.iota_conjugate().unwrap() } else { xi.clone() };
        assert_eq!(block, expected, "block {n}");
        let half = Rational::int(n) - q(1, 2);
        let chi_block = Interval::new(half.clone(), &half + &Rational::one()).unwrap();
        let label = rho.label_at(&Rational::int(n)).unwrap();
        let expected = if label.is_inverse() { xi.iota_conjugate().unwrap() } else { xi.clone() };
        assert_eq!(group.restrict(&w, &chi_block).normalize_from(&chi_block).unwrap(), expected, "chi block {n}");
    }
    for k in -40..40 {
        let x = q(k, 7);
        for e in [&g, &w] {
            let y = group.eval_point(e, &x);
            assert!((y - &x).abs() < Rational::one());
        }
    }
    let word: GroupWord = "g z2 w^-1 x1".parse().unwrap();
    let e = group.elem(&word).unwrap();
    let narrow = group.restrict(&e, &Interval::ints(-2, 2).unwrap());
    let wide = group.restrict(&e, &Interval::ints(-6, 6).unwrap()).restrict(&Interval::ints(-2, 2).unwrap()).unwrap();
    assert_eq!(narrow, wide);
    assert!(plgroups::line_group::LineGroup::new(rho).parse("g").is_err());
}

#[test]
fn compact_commutators_have_finitely_many_breakpoints() {
    let cfg = config(q(1, 3));
    let xi = make_xi_alpha(&cfg).unwrap();
    let h = bump(&iv(q(17, 32), q(5, 8))).unwrap();
    let c = PLMap::commutator(&xi, &h).unwrap();
    assert!(!c.is_identity());
    let hull = c.support_hull().unwrap().unwrap();
    assert!(hull.lo().is_positive() && hull.hi() < &Rational::one());
    assert!(c.breakpoints().len() < 64);
}

proptest! {
    #[test]
    fn thompson_elements_have_no_alpha_germ(m in -6i64..6, den in prop::sample::select(vec![3i64, 5, 7, 9, 15])) {
        let alpha = q(1, den);
        let s = standard_elements();
        let f = s.a.pow(m).unwrap().compose(&s.b.pow(2).unwrap()).unwrap();
        prop_assert!(is_in_f(&f));
        for at in [Endpoint::Left, Endpoint::Right] {
            prop_assert_eq!(germ_exponents(&f, at, &alpha).unwrap().alpha_exp, 0);
        }
    }

    #[test]
    fn germ_solving_round_trips(two in -20i64..20, n in -6i64..6, num in 1i64..12, den in prop::sample::select(vec![3i64, 5, 7, 13])) {
        prop_assume!(num < den);
        let alpha = q(num, den);
        prop_assume!(!alpha.is_dyadic());
        let e = GermExponents { two_exp: two, alpha_exp: n };
        prop_assume!(alpha != q(1, 2));
        let slope = germ_slope(e, &alpha);
        let back = solve_germ(&slope, &alpha).unwrap();
        prop_assert_eq!(germ_slope(back, &alpha), slope);
    }
}
