use plgroups::exact_pl::{Interval, PLMap};
use plgroups::rational::{q, Rational};
use plgroups::thompson::standard_elements;
use proptest::prelude::*;

fn r(n: i64, d: i64) -> Rational {
    q(n, d)
}

/// Random self-map of [0, 1] from sorted node pairs with denominators up to 64.
fn arb_unit_map() -> impl Strategy<Value = PLMap> {
    (1usize..6).prop_flat_map(|n| {
        (
            proptest::collection::btree_set(1i64..64, n),
            proptest::collection::btree_set(1i64..64, n),
        )
            .prop_map(|(xs, ys)| {
                let mut nodes = vec![(Rational::zero(), Rational::zero())];
                nodes.extend(xs.iter().zip(ys.iter()).map(|(x, y)| (r(*x, 64), r(*y, 64))));
                nodes.push((Rational::one(), Rational::one()));
                PLMap::new(nodes).unwrap()
            })
    })
}

fn arb_point() -> impl Strategy<Value = Rational> {
    (0i64..=997).prop_map(|n| r(n, 997))
}

#[test]
fn identity_eval() {
    let id = PLMap::identity(&Interval::unit());
    assert_eq!(id.eval(&r(1, 3)).unwrap(), r(1, 3));
    assert!(id.eval(&r(4, 3)).is_err());
}

#[test]
fn c0_values() {
    let s = standard_elements();
    assert_eq!(s.c0.eval(&r(1, 32)).unwrap(), r(1, 16));
    assert_eq!(s.c0.eval(&r(1, 8)).unwrap(), r(3, 16));
    assert_eq!(s.c0.invert().eval(&r(1, 16)).unwrap(), r(1, 32));
}

#[test]
fn compose_examples() {
    let s = standard_elements();
    let ab = s.a.compose(&s.b).unwrap();
    // A sends 1/8 to 1/4, where B is the identity; 1/4 goes to 1/2
    assert_eq!(ab.eval(&r(1, 8)).unwrap(), r(1, 4));
    assert_eq!(ab.eval(&r(1, 4)).unwrap(), r(1, 2));
    let nu1 = s.c0.compose(&s.c1).unwrap();
    assert_eq!(nu1.support().unwrap(), vec![Interval::of(r(0, 1), r(1, 4)), Interval::of(r(3, 4), r(1, 1))]);
    assert!(s.a.compose(&s.a.invert()).unwrap().is_identity());
}

#[test]
fn compose_rejects_mismatched_domains() {
    let s = standard_elements();
    assert!(s.phi.compose(&s.a).is_err());
    assert!(s.a.compose(&s.phi).is_ok());
}

#[test]
fn rejects_non_monotone_and_shrinking() {
    assert!(PLMap::new(vec![(r(0, 1), r(0, 1)), (r(1, 2), r(3, 4)), (r(1, 1), r(1, 2))]).is_err());
    // t -> t/2 is a valid PL map onto [0, 1/2] but it does not fix 1
    let half = PLMap::new(vec![(r(0, 1), r(0, 1)), (r(1, 1), r(1, 2))]).unwrap();
    assert!(!half.fixes_endpoints());
    assert!(half.support().is_err());
}

#[test]
fn supports_and_fixed_points() {
    let s = standard_elements();
    assert!(PLMap::unit_identity().support().unwrap().is_empty());
    assert_eq!(s.c0.support().unwrap(), vec![Interval::of(r(0, 1), r(1, 4))]);
    let fx = s.c0.fixed_points();
    assert_eq!(fx.isolated, vec![r(0, 1)]);
    assert_eq!(fx.fixed_intervals, vec![Interval::of(r(1, 4), r(1, 1))]);
    let id = PLMap::unit_identity().fixed_points();
    assert_eq!(id.fixed_intervals, vec![Interval::unit()]);
    assert!(id.isolated.is_empty());
}

#[test]
fn crossing_fixed_point() {
    // moves right then left: crossing at 1/2
    let f = PLMap::new(vec![(r(-1, 1), r(-1, 1)), (r(0, 1), r(1, 2)), (r(1, 1), r(1, 2) + r(1, 4)), (r(2, 1), r(2, 1))])
        .unwrap();
    let fx = f.fixed_points();
    assert!(fx.fixed_intervals.is_empty());
    assert_eq!(fx.isolated.len(), 3);
    for p in &fx.isolated {
        assert_eq!(&f.eval(p).unwrap(), p);
    }
}

#[test]
fn iota_examples() {
    let s = standard_elements();
    assert_eq!(s.c0.iota_conjugate().unwrap(), s.c1);
    assert_eq!(s.c1.support().unwrap(), vec![Interval::of(r(3, 4), r(1, 1))]);
    assert!(s.nu1.is_symmetric());
    assert!(PLMap::unit_identity().is_symmetric());
    assert!(s.phi.iota_conjugate().is_ok());
    let off = PLMap::identity(&Interval::of(r(0, 1), r(2, 1)));
    assert!(off.iota_conjugate().is_err());
}

#[test]
fn rescale_examples() {
    let s = standard_elements();
    let target = Interval::of(r(3, 1), r(4, 1));
    let moved = s.nu2.rescale_isometric(&target).unwrap();
    assert_eq!(moved.eval(&(r(3, 1) + r(5, 16))).unwrap(), r(3, 1) + r(9, 16));
    let c = s.c0.rescale_isometric(&Interval::of(r(-1, 2), r(1, 2))).unwrap();
    assert_eq!(c.eval(&(r(-1, 2) + r(1, 32))).unwrap(), r(-1, 2) + r(1, 16));
    assert!(PLMap::unit_identity().rescale(&target).unwrap().is_identity());
    assert!(s.a.rescale_isometric(&Interval::of(r(0, 1), r(2, 1))).is_err());
    assert!(s.a.rescale(&Interval::of(r(0, 1), r(2, 1))).is_ok());
}

#[test]
fn inverse_slopes_are_reciprocal() {
    let s = standard_elements();
    let inv = s.nu2.invert();
    let mut a: Vec<Rational> = s.nu2.slopes().iter().map(Rational::recip).collect();
    let mut b = inv.slopes();
    a.sort();
    b.sort();
    assert_eq!(a, b);
}

#[test]
fn json_shape() {
    let s = standard_elements();
    let v = serde_json::to_value(&s.a).unwrap();
    assert_eq!(
        v,
        serde_json::json!({"domain": ["0", "1"], "nodes": [["0", "0"], ["1/4", "1/2"], ["1/2", "3/4"], ["1", "1"]]})
    );
    let back: PLMap = serde_json::from_value(v).unwrap();
    assert_eq!(back, s.a);
    let bad = serde_json::json!({"domain": ["0", "2"], "nodes": [["0", "0"], ["1", "1"]]});
    assert!(serde_json::from_value::<PLMap>(bad).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compose_matches_pointwise(f in arb_unit_map(), g in arb_unit_map(), xs in proptest::collection::vec(arb_point(), 100)) {
        let fg = f.compose(&g).unwrap();
        for x in &xs {
            prop_assert_eq!(fg.eval(x).unwrap(), g.eval(&f.eval(x).unwrap()).unwrap());
        }
    }

    #[test]
    fn invert_is_involution(f in arb_unit_map()) {
        prop_assert_eq!(f.invert().invert(), f.clone());
        prop_assert!(f.compose(&f.invert()).unwrap().is_identity());
        prop_assert!(f.invert().compose(&f).unwrap().is_identity());
    }

    #[test]
    fn canonical_form_is_unique(f in arb_unit_map(), splits in proptest::collection::vec(1i64..997, 0..5)) {
        // inserting redundant nodes never changes the canonical form
        let mut nodes: Vec<(Rational, Rational)> = f.nodes().to_vec();
        for s in splits {
            let x = r(s, 997);
            if !nodes.iter().any(|(nx, _)| nx == &x) {
                nodes.push((x.clone(), f.eval(&x).unwrap()));
            }
        }
        nodes.sort();
        prop_assert_eq!(PLMap::new(nodes).unwrap(), f.clone());
        // equal functions have equal nodes: compare against f composed with identity
        let g = f.compose(&PLMap::unit_identity()).unwrap();
        prop_assert_eq!(g.nodes(), f.nodes());
        for w in f.slopes().windows(2) {
            prop_assert_ne!(&w[0], &w[1]);
        }
    }

    #[test]
    fn support_boundaries_are_transition_points(f in arb_unit_map()) {
        let supp = f.support().unwrap();
        for w in supp.windows(2) {
            prop_assert!(w[0].hi() <= w[1].lo());
        }
        for iv in &supp {
            prop_assert_eq!(&f.eval(iv.lo()).unwrap(), iv.lo());
            prop_assert_eq!(&f.eval(iv.hi()).unwrap(), iv.hi());
            let mid = iv.midpoint();
            prop_assert_ne!(f.eval(&mid).unwrap(), mid.clone());
            // points just inside both ends are moved
            let eps = iv.len() / Rational::int(1000);
            let a = iv.lo() + &eps;
            let b = iv.hi() - &eps;
            prop_assert_ne!(f.eval(&a).unwrap(), a);
            prop_assert_ne!(f.eval(&b).unwrap(), b);
        }
    }

    #[test]
    fn iota_reverses_over_composition(f in arb_unit_map(), g in arb_unit_map()) {
        let lhs = f.compose(&g).unwrap().iota_conjugate().unwrap();
        let rhs = f.iota_conjugate().unwrap().compose(&g.iota_conjugate().unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(f.iota_conjugate().unwrap().iota_conjugate().unwrap(), f.clone());
    }

    #[test]
    fn restrict_and_concat_roundtrip(f in arb_unit_map(), cut in 1i64..997) {
        let c = r(cut, 997);
        let left = f.restrict(&Interval::of(Rational::zero(), c.clone())).unwrap();
        let right = f.restrict(&Interval::of(c, Rational::one())).unwrap();
        prop_assert_eq!(PLMap::concat(&[left, right]).unwrap(), f.clone());
    }
}
