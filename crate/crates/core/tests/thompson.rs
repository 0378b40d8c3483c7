use plgroups::exact_pl::{Interval, PLMap};
use plgroups::rational::{q, Rational};
use plgroups::thompson::*;
use proptest::prelude::*;

fn iv(a: (i64, i64), b: (i64, i64)) -> Interval {
    Interval::of(q(a.0, a.1), q(b.0, b.1))
}

#[test]
fn relators_hold_for_both_generator_pairs() {
    let s = standard_elements();
    for r in relators(&s.a, &s.b).unwrap() {
        assert!(r.is_identity());
    }
    for r in relators(&s.nu2, &s.nu3).unwrap() {
        assert!(r.is_identity());
    }
    // a non-relator stays nontrivial
    assert!(!PLMap::commutator(&s.a, &s.b).unwrap().is_identity());
}

#[test]
fn standard_set_invariants() {
    let s = standard_elements();
    for f in [&s.a, &s.b, &s.c0, &s.c1, &s.nu1, &s.nu2, &s.nu3] {
        assert!(is_in_f(f), "{f:?}");
    }
    assert!(s.phi.nodes().iter().all(|(x, y)| x.is_dyadic() && y.is_dyadic()));
    assert!(s.phi.slopes().iter().all(Rational::is_power_of_two));
    assert_eq!(s.phi.range(), inner_interval());
    assert_eq!(s.c0.eval(&q(1, 32)).unwrap(), q(1, 16));
    for k in 1..16 {
        let x = q(k, 256);
        assert_eq!(s.c0.eval(&x).unwrap(), &x * &Rational::int(2));
    }
    assert_eq!(s.nu2.eval(&q(1, 16)).unwrap(), q(1, 16));
    assert_eq!(s.nu2.eval(&q(5, 16)).unwrap(), q(9, 16));
    assert_eq!(s.phi.eval(&q(3, 4)).unwrap(), q(13, 16));
    for f in [&s.nu2, &s.nu3] {
        let hull = f.support_hull().unwrap().unwrap();
        assert!(inner_interval().contains_interval(&hull));
    }
}

#[test]
fn membership_examples() {
    let s = standard_elements();
    assert!(is_in_f(&PLMap::unit_identity()));
    let bad = PLMap::new(vec![(q(0, 1), q(0, 1)), (q(1, 2), q(3, 4)), (q(1, 1), q(1, 1))]).unwrap();
    assert!(!is_in_f(&bad));
    assert!(is_in_f_prime(&s.nu2));
    assert!(!is_in_f_prime(&s.c0));
    assert!(is_in_f_prime(&PLMap::unit_identity()));
    assert!(is_in_h(&s.nu1));
    assert_eq!(endpoint_log_slopes(&s.nu1), Some((1, 1)));
    assert!(!is_in_h(&s.c0));
    assert!(is_in_h(&s.nu3));
}

#[test]
fn tree_pair_of_a() {
    let s = standard_elements();
    let tp = tree_pair_from_pl(&s.a).unwrap();
    let left_heavy = Tree::node(Tree::node(Tree::Leaf, Tree::Leaf), Tree::Leaf);
    assert_eq!(tp.domain_tree, left_heavy);
    assert_eq!(tp.range_tree, Tree::right_vine(3));
    assert_eq!(pl_from_tree_pair(&tp).unwrap(), s.a);
    let id = tree_pair_from_pl(&PLMap::unit_identity()).unwrap();
    assert_eq!(id.domain_tree, Tree::Leaf);
    assert_eq!(id.range_tree, Tree::Leaf);
    assert_eq!(pl_from_tree_pair(&tree_pair_from_pl(&s.nu2).unwrap()).unwrap(), s.nu2);
    let json = serde_json::to_string(&tp).unwrap();
    assert_eq!(json, r#"{"domain_tree":[[[],[]],[]],"range_tree":[[],[[],[]]]}"#);
    assert_eq!(serde_json::from_str::<TreePair>(&json).unwrap(), tp);
    assert!(tree_pair_from_pl(&s.phi).is_err());
}

#[test]
fn factorize_examples() {
    let s = standard_elements();
    assert!(f_factorize(&PLMap::unit_identity()).unwrap().is_empty());
    assert_eq!(f_factorize(&s.a).unwrap().to_string(), "A");
    assert_eq!(f_factorize(&s.b).unwrap().to_string(), "B");
    let ab = s.a.compose(&s.b).unwrap();
    assert_eq!(eval_f_word(&f_factorize(&ab).unwrap()), ab);
    for f in [&s.c0, &s.c1, &s.nu1, &s.nu2, &s.nu3] {
        assert_eq!(&eval_f_word(&f_factorize(f).unwrap()), f);
    }
}

#[test]
fn transporter_examples() {
    let i = iv((1, 4), (1, 2));
    let j = iv((1, 2), (3, 4));
    assert!(interval_transporter(&i, &i).unwrap().is_identity());
    let t = interval_transporter(&i, &j).unwrap();
    assert!(is_in_f_prime(&t));
    assert_eq!(t.eval(&q(3, 8)).unwrap(), q(5, 8));
    assert_eq!(t.eval(&q(1, 4)).unwrap(), q(1, 4) + q(1, 4));
    assert!(t.breakpoints().iter().all(|b| !i.contains_open(b)));
    assert!(interval_transporter(&iv((0, 1), (1, 4)), &j).is_err());
    assert!(interval_transporter(&iv((1, 4), (3, 4)), &j).is_err());

    let p = interval_pair_transporter(&iv((1, 8), (1, 4)), &iv((1, 2), (5, 8)), &iv((1, 4), (1, 2)), &iv((3, 4), (13, 16)))
        .unwrap();
    assert!(is_in_f_prime(&p));
    assert_eq!(p.eval(&q(3, 16)).unwrap(), q(3, 8));
    assert_eq!(p.eval(&q(9, 16)).unwrap(), q(25, 32));
    let same = interval_pair_transporter(&iv((1, 8), (1, 4)), &iv((1, 2), (5, 8)), &iv((1, 8), (1, 4)), &iv((1, 2), (5, 8)))
        .unwrap();
    assert!(same.is_identity());
    assert!(interval_pair_transporter(&j, &i, &i, &j).is_err());
}

#[test]
fn bump_examples() {
    let b = bump(&iv((1, 4), (1, 2))).unwrap();
    assert!(is_in_f_prime(&b) && !b.is_identity());
    let supp = b.support().unwrap();
    assert_eq!(supp.len(), 1);
    assert!(iv((1, 4), (1, 2)).contains_strictly(&supp[0]));
    let whole = bump(&Interval::unit()).unwrap();
    assert!(is_in_f_prime(&whole));
    assert_eq!(whole.support().unwrap(), vec![iv((1, 4), (1, 2))]);
    let sym = symmetric_bump(&[iv((1, 4), (3, 8)), iv((5, 8), (3, 4))]).unwrap();
    assert!(sym.is_symmetric() && is_in_f_prime(&sym) && !sym.is_identity());
    for c in sym.support().unwrap() {
        assert!(iv((1, 4), (3, 8)).contains_strictly(&c) || iv((5, 8), (3, 4)).contains_strictly(&c));
    }
    assert!(symmetric_bump(&[iv((1, 4), (3, 8))]).is_err());
    let h = hump(&q(1, 16), &q(15, 16)).unwrap();
    assert_eq!(h.support().unwrap(), vec![inner_interval()]);
}

#[test]
fn conjugation_depth_examples() {
    assert_eq!(conjugation_depth(&standard_elements().nu2).unwrap(), 0);
    let b = bump(&iv((1, 32), (1, 16))).unwrap();
    let m = conjugation_depth(&b).unwrap();
    // independent count: push the support hull forward under nu1 one step at a time
    let hull = b.support_hull().unwrap().unwrap();
    let nu1 = &standard_elements().nu1;
    let mut lo = hull.lo().clone();
    let mut steps = 0;
    while lo < q(1, 16) {
        lo = nu1.eval(&lo).unwrap();
        steps += 1;
    }
    assert_eq!(m, steps);
    assert!(m > 0);
    let conj = nu1_conjugate(&b, m as i64).unwrap();
    assert!(inner_interval().contains_interval(&conj.support_hull().unwrap().unwrap()));
    assert!(conjugation_depth(&standard_elements().c0).is_err());
}

#[test]
fn alternating_examples() {
    let s = standard_elements();
    let id = alternating_factorization(&PLMap::unit_identity()).unwrap();
    assert!(id.word.is_empty());
    assert_eq!((id.nu2_sum, id.nu3_sum), (0, 0));
    let comm = PLMap::commutator(&s.nu2, &s.nu3).unwrap();
    let w = alternating_factorization(&comm).unwrap();
    assert_eq!((w.nu2_sum, w.nu3_sum), (0, 0));
    assert_eq!(eval_nu_word(&w.word), comm);
    let f = s.nu2.compose(&s.nu3).unwrap().compose(&s.nu2.invert()).unwrap();
    let w = alternating_factorization(&f).unwrap();
    assert_eq!(eval_nu_word(&w.word), f);
    assert_eq!((w.nu2_sum, w.nu3_sum), (0, 1));
    for pair in w.word.syllables().windows(2) {
        assert_ne!(pair[0].gen, pair[1].gen);
    }
    assert!(alternating_factorization(&s.nu1).is_err());
}

#[test]
fn nu_factorization_of_h_elements() {
    let s = standard_elements();
    for h in [&s.nu1, &s.nu2, &s.nu3, &PLMap::unit_identity()] {
        assert_eq!(&eval_nu_word(&nu_factorization(h).unwrap()), h);
    }
    assert!(nu_factorization(&s.c0).is_err());
}

fn arb_tree(carets: usize) -> BoxedStrategy<Tree> {
    if carets == 0 {
        return Just(Tree::Leaf).boxed();
    }
    (0..carets)
        .prop_flat_map(move |left| (arb_tree(left), arb_tree(carets - 1 - left)))
        .prop_map(|(l, r)| Tree::node(l, r))
        .boxed()
}

fn arb_tree_pair() -> impl Strategy<Value = TreePair> {
    (0usize..=12).prop_flat_map(|n| (arb_tree(n), arb_tree(n))).prop_map(|(d, r)| TreePair::new(d, r).unwrap())
}

fn arb_f_word() -> impl Strategy<Value = FWord> {
    proptest::collection::vec((prop_oneof![Just(FGen::A), Just(FGen::B)], -2i64..=2), 0..6).prop_map(|v| {
        let mut w = FWord::new();
        for (g, e) in v {
            w.push(g, e);
        }
        w
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn factorize_round_trips_on_tree_pairs(tp in arb_tree_pair()) {
        let f = pl_from_tree_pair(&tp).unwrap();
        prop_assert!(is_in_f(&f));
        let w = f_factorize(&f).unwrap();
        prop_assert_eq!(eval_f_word(&w), f.clone());
        let reduced = tree_pair_from_pl(&f).unwrap();
        prop_assert!(reduced.domain_tree.leaf_count() <= tp.domain_tree.leaf_count());
        prop_assert_eq!(pl_from_tree_pair(&reduced).unwrap(), f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn h_membership_under_nu1_powers(w in arb_f_word(), k in -3i64..=3, slot in 1i64..14) {
        let g = eval_f_word(&w);
        let f = g.rescale(&Interval::of(q(slot, 16), q(slot + 1, 16))).unwrap().extend_by_identity(&Interval::unit()).unwrap();
        prop_assert!(is_in_f_prime(&f));
        prop_assert!(is_in_h(&f));
        let shifted = standard_elements().nu1.pow(k).unwrap().compose(&f).unwrap();
        prop_assert!(is_in_h(&shifted));
    }

    #[test]
    fn f_prime_elements_are_reconstructed(w in arb_f_word(), v in arb_f_word(), slot in 0i64..8, depth in 3i64..6) {
        // compact support inside (0, 1): rescale into a small standard interval, then mix with a commutator
        let unit = Interval::unit();
        let place = |word: &FWord| {
            let size = Rational::pow2(-depth);
            let lo = &size * &Rational::int(slot.min((1 << depth) - 3) + 1);
            let hi = &lo + &size;
            eval_f_word(word).rescale(&Interval::of(lo, hi)).unwrap().extend_by_identity(&unit).unwrap()
        };
        let comm = PLMap::commutator(&eval_f_word(&w), &eval_f_word(&v)).unwrap();
        let f = place(&w).compose(&comm).unwrap();
        prop_assert!(is_in_f_prime(&f));
        let m = conjugation_depth(&f).unwrap() as i64;
        let inner = nu1_conjugate(&f, m).unwrap();
        let alt = alternating_factorization(&inner).unwrap();
        let rebuilt = nu1_conjugate(&eval_nu_word(&alt.word), -m).unwrap();
        prop_assert_eq!(rebuilt, f.clone());
        prop_assert_eq!(eval_nu_word(&nu_factorization(&f).unwrap()), f);
    }

    #[test]
    fn transporters_are_mutually_inverse(a in 2i64..30, b in 2i64..30, da in 5u32..7, db in 5u32..7) {
        let i = Interval::of(q(a, 1 << da), q(a + 1, 1 << da));
        let j = Interval::of(q(b, 1 << db), q(b + 1, 1 << db));
        let t = interval_transporter(&i, &j).unwrap();
        let back = interval_transporter(&j, &i).unwrap();
        prop_assert_eq!(t.invert(), back.clone());
        prop_assert!(t.compose(&back).unwrap().is_identity());
        prop_assert!(is_in_f_prime(&t));
        prop_assert_eq!(t.eval(i.lo()).unwrap(), j.lo().clone());
        prop_assert_eq!(t.eval(i.hi()).unwrap(), j.hi().clone());
    }
}
