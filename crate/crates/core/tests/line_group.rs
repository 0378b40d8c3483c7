use plgroups::exact_pl::{Interval, PLMap};
use plgroups::labelling::{Labelling, Letter};
use plgroups::line_group::{GroupWord, LineGen, LineGroup};
use plgroups::rational::{q, Rational};
use plgroups::thompson::NuGen;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn group() -> LineGroup {
    LineGroup::new(Labelling::from_seed_str("a").unwrap())
}

fn random_word(rng: &mut ChaCha8Rng, max_len: usize) -> GroupWord {
    let len = rng.gen_range(1..=max_len);
    GroupWord::new(
        (0..len)
            .map(|_| (LineGen::BASIC[rng.gen_range(0..6)], if rng.gen_bool(0.5) { 1 } else { -1 }))
            .collect(),
    )
}

/// One generator on `[-r, r]`, built block by block straight from the
/// definitions; blocks sticking out of the interval act trivially.
fn brute_generator(rho: &Labelling, g: LineGen, inverse: bool, r: i64) -> PLMap {
    let (nu, chi) = match g {
        LineGen::Zeta(nu) => (nu, false),
        LineGen::Chi(nu) => (nu, true),
        _ => unreachable!(),
    };
    let mut pieces = Vec::new();
    let mut x = Rational::int(-r);
    if chi {
        pieces.push(PLMap::identity(&Interval::of(x.clone(), q(1, 2) - Rational::int(r))));
        x = q(1, 2) - Rational::int(r);
    }
    while &x + &Rational::one() <= Rational::int(r) {
        let centre = &x + &q(1, 2);
        let label = rho.label_at(&centre).unwrap();
        let mut base = nu.map().clone();
        if label.is_inverse() {
            base = base.iota_conjugate().unwrap();
        }
        if inverse {
            base = base.invert();
        }
        pieces.push(base.translate(&x));
        x = x + Rational::one();
    }
    if x < Rational::int(r) {
        pieces.push(PLMap::identity(&Interval::of(x, Rational::int(r))));
    }
    PLMap::concat(&pieces).unwrap()
}

#[test]
fn generator_examples() {
    let g = group();
    let z2 = g.parse("z2").unwrap();
    assert_eq!(g.eval_point(&z2, &q(5, 16)), q(9, 16));
    assert_eq!(g.generator_restriction(LineGen::Zeta(NuGen::Nu2), 0).unwrap().eval(&q(5, 16)).unwrap(), q(9, 16));
    assert_eq!(g.labelling().label_h(0), Letter::A);
    let x2 = g.generator_restriction(LineGen::Chi(NuGen::Nu2), 0).unwrap();
    assert_eq!(x2.eval(&q(-3, 16)).unwrap(), q(1, 16));
    let id = g.parse("").unwrap();
    assert_eq!(g.eval_point(&id, &q(7, 3)), q(7, 3));
}

#[test]
fn zeta1_ignores_label_twist() {
    let g = group();
    let z1 = g.parse("z1").unwrap();
    let base = NuGen::Nu1.map();
    for n in -6..6 {
        let m = g.restrict(&z1, &Interval::ints(n, n + 1).unwrap());
        assert_eq!(m, base.translate(&Rational::int(n)));
    }
}

#[test]
fn locality_oracle() {
    let g = group();
    let rho = g.labelling().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let window = Interval::ints(-3, 3).unwrap();
    for _ in 0..100 {
        let w = random_word(&mut rng, 6);
        let e = g.elem(&w).unwrap();
        let fast = g.window_map(&e, -3, 3).unwrap();
        let mut full = PLMap::identity(&Interval::ints(-12, 12).unwrap());
        for (gen, exp) in &w.letters {
            for _ in 0..exp.unsigned_abs() {
                full = full.compose(&brute_generator(&rho, *gen, *exp < 0, 12)).unwrap();
            }
        }
        let brute = full.restrict(&window).unwrap();
        assert_eq!(fast.map, brute, "word {w}");
        let k = w.len() as i64;
        assert!(fast.margin <= Rational::int(k + 1), "word {w} margin {}", fast.margin);
    }
}

fn random_h(rng: &mut ChaCha8Rng) -> PLMap {
    use plgroups::thompson::{eval_nu_word, NuWord};
    let mut w = NuWord::new();
    for _ in 0..rng.gen_range(1..=4) {
        w.push(NuGen::ALL[rng.gen_range(0..3)], rng.gen_range(-2..=2));
    }
    eval_nu_word(&w)
}

#[test]
fn displacement_below_one() {
    let g = group();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for gen in LineGen::BASIC {
        let e = g.generator(gen).unwrap();
        for _ in 0..500 {
            let x = Rational::new(rng.gen_range(-50 * 256..=50 * 256), 256);
            let y = g.eval_point(&e, &x);
            assert!((&y - &x).abs() < Rational::one(), "{gen} moves {x} to {y}");
            assert_eq!(g.eval_point(&e.inverse(), &y), x);
        }
    }
}

#[test]
fn group_law_on_windows() {
    let g = group();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let w1 = random_word(&mut rng, 4);
        let w2 = random_word(&mut rng, 4);
        let (a, b) = (g.elem(&w1).unwrap(), g.elem(&w2).unwrap());
        let window = Interval::ints(-2, 2).unwrap();
        let ma = g.restrict(&a, &window);
        let mb = g.restrict(&b, &ma.range());
        assert_eq!(g.restrict(&a.then(&b), &window), ma.compose(&mb).unwrap());
        assert!(g.restrict(&a.then(&a.inverse()), &window).is_identity());
        let inv_word = g.elem(&w1.inverse()).unwrap();
        assert!(g.is_identity_on(&a.then(&inv_word), -3, 3).unwrap());
    }
}

#[test]
fn embeddings_are_homomorphisms() {
    use plgroups::line_group::Selection;
    let g = group();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..50 {
        let (f, h) = (random_h(&mut rng), random_h(&mut rng));
        let fh = f.compose(&h).unwrap();
        let lam = |m: &PLMap| g.lambda(m, Selection::All).unwrap();
        let pi = |m: &PLMap| g.pi(m, Selection::All).unwrap();
        assert!(g.equal_on(&lam(&f).then(&lam(&h)), &lam(&fh), -3, 3).unwrap());
        assert!(g.equal_on(&pi(&f).then(&pi(&h)), &pi(&fh), -3, 3).unwrap());
    }
    // disjoint selections multiply to the union
    let f = random_h(&mut rng);
    let x: std::collections::BTreeSet<i64> = [1, 5].into();
    let y: std::collections::BTreeSet<i64> = [-3, 3, 7].into();
    let union = x.union(&y).copied().collect();
    let lx = g.lambda(&f, Selection::Only(x)).unwrap();
    let ly = g.lambda(&f, Selection::Only(y)).unwrap();
    assert!(g.equal_on(&lx.then(&ly), &g.lambda(&f, Selection::Only(union)).unwrap(), -4, 4).unwrap());
    assert!(g.lambda(&f, Selection::Only(Default::default())).unwrap().is_trivially_identity() || {
        let e = g.lambda(&f, Selection::Only(Default::default())).unwrap();
        g.is_identity_on(&e, -4, 4).unwrap()
    });
}

#[test]
fn lambda_matches_generator_words() {
    use plgroups::line_group::Selection;
    let g = group();
    let nu2 = NuGen::Nu2.map();
    let l = g.lambda(nu2, Selection::All).unwrap();
    assert!(g.equal_on(&l, &g.parse("z2").unwrap(), -4, 4).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..5 {
        let h = random_h(&mut rng);
        let word = g.lambda_word(&h).unwrap();
        assert!(g.equal_on(&g.elem(&word).unwrap(), &g.lambda(&h, Selection::All).unwrap(), -3, 3).unwrap());
        let word = g.pi_word(&h).unwrap();
        assert!(g.equal_on(&g.elem(&word).unwrap(), &g.pi(&h, Selection::All).unwrap(), -3, 3).unwrap());
    }
}

#[test]
fn perfectness_witnesses() {
    use plgroups::line_group::{half_shift, Selection};
    use plgroups::thompson::is_in_f_prime;
    let g = group();
    let z1 = g.parse("z1").unwrap();
    let x1 = g.parse("x1").unwrap();
    let from_pi = g.pi_preimage(&z1, -6, 6).unwrap();
    let from_lambda = g.lambda_preimage(&x1, -6, 6).unwrap();
    assert!(is_in_f_prime(&from_pi));
    assert!(is_in_f_prime(&from_lambda));
    assert_eq!(from_pi, half_shift(NuGen::Nu1.map()).unwrap());
    assert_eq!(from_pi, from_lambda);
    let back = g.pi(&from_pi, Selection::All).unwrap();
    assert!(g.equal_on(&back, &z1, -2, 2).unwrap());
    for (name, nu) in [("z2", NuGen::Nu2), ("z3", NuGen::Nu3)] {
        let pre = g.lambda_preimage(&g.parse(name).unwrap(), -4, 4).unwrap();
        assert_eq!(&pre, nu.map());
        assert!(is_in_f_prime(&pre));
    }
    for (name, nu) in [("x2", NuGen::Nu2), ("x3", NuGen::Nu3)] {
        let pre = g.pi_preimage(&g.parse(name).unwrap(), -4, 4).unwrap();
        assert_eq!(&pre, nu.map());
    }
    assert!(g.lambda_preimage(&g.parse("z2 x2").unwrap(), -4, 4).is_err());
}

#[test]
fn phi_images_and_z_membership() {
    let g = group();
    let id = g.parse("").unwrap();
    assert_eq!(g.phi_image_set(&id, -10, 10), [Rational::zero()].into());
    let z2 = g.parse("z2").unwrap();
    assert!(g.in_z(&z2, -10, 10).unwrap().holds());
    assert_eq!(g.phi_image_set(&z2, -10, 10), [Rational::zero()].into());
    assert!(g.in_z(&id, -5, 5).unwrap().holds());
    let x2 = g.parse("x2").unwrap();
    let cert = g.in_z(&x2, -5, 5).unwrap();
    assert!(!cert.holds());
    assert_eq!(cert.witness, Some(-5));
    let w = g.parse("z2 x1 z3^-1").unwrap();
    let (set, summary) = g.phi_image_classes(&w, (-6, 6)).unwrap();
    assert!(summary.stabilized);
    assert!(g.phi_image_set(&w, -40, 40).is_subset(&set));
    assert!(set.len() <= summary.class_count);
}

#[test]
fn fixed_points_exist_for_quasi_periodic() {
    let g = group();
    let z2 = g.parse("z2").unwrap();
    let p = g.find_fixed_point(&z2, 1000).unwrap();
    assert_eq!(g.eval_point(&z2, &p.point()), p.point());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut found = 0;
    while found < 20 {
        let w = random_word(&mut rng, 6);
        let e = g.elem(&w).unwrap();
        if g.is_identity_on(&e, -8, 8).unwrap() {
            continue;
        }
        let p = g.find_fixed_point(&e, 100_000).unwrap();
        assert_eq!(g.eval_point(&e, &p.point()), p.point(), "word {w}");
        found += 1;
    }
}

#[test]
fn tau_admits_fixed_point_free_words() {
    let tau = LineGroup::new(Labelling::periodic_tau());
    let mut failures = Vec::new();
    let gens = LineGen::BASIC;
    for i in 0..6 {
        for j in 0..6 {
            for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                let w = GroupWord::new(vec![(gens[i], si), (gens[j], sj)]);
                let e = tau.elem(&w).unwrap();
                if tau.find_fixed_point(&e, 200).is_err() {
                    failures.push(w.to_string());
                }
            }
        }
    }
    assert!(!failures.is_empty());
}

#[test]
fn mirror_step_finds_fixed_points() {
    let g = group();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut used = 0;
    for _ in 0..60 {
        let w = random_word(&mut rng, 6);
        let e = g.elem(&w).unwrap();
        if g.eval_point(&e, &Rational::zero()) == Rational::zero() {
            continue;
        }
        let p = g.mirror_fixed_point(&e, 100_000).unwrap();
        assert_eq!(g.eval_point(&e, &p.point()), p.point(), "word {w}");
        used += 1;
    }
    assert!(used >= 10);
}

#[test]
fn transport_confinement() {
    let g = group();
    for (iv, m1, m2) in [
        (Interval::of(q(1, 4), q(1, 2)), 0, 1),
        (Interval::of(q(1, 3), q(2, 3)), 0, 3),
        (Interval::of(Rational::int(2) + q(1, 10), Rational::int(2) + q(9, 10)), 2, -2),
        (Interval::of(q(-7, 8), q(-5, 8)), -1, -1),
    ] {
        let t = g.transport(&iv, m1, m2).unwrap();
        let target = Interval::ints(m2, m2 + 1).unwrap();
        assert!(target.contains_strictly(&t.image), "{iv} {m1}->{m2}: {}", t.image);
        let word = g.transport_word(&t).unwrap();
        let (lo, hi) = (Rational::int(m1.min(m2)), Rational::int(m1.max(m2) + 1));
        let (mut a, mut b) = (iv.lo().clone(), iv.hi().clone());
        for (gen, exp) in &word.letters {
            let mut letter = g.generator(*gen).unwrap();
            if *exp < 0 {
                letter = letter.inverse();
            }
            for _ in 0..exp.unsigned_abs() {
                a = g.eval_point(&letter, &a);
                b = g.eval_point(&letter, &b);
                assert!(lo <= a && a < b && b <= hi, "prefix image [{a}, {b}] escapes");
            }
        }
        assert_eq!(Interval::of(a, b), t.image);
        if m1 == m2 {
            assert!(word.is_empty());
        }
    }
}

#[test]
fn single_atom_embedding() {
    use plgroups::line_group::Selection;
    let g = group();
    let nu2 = NuGen::Nu2.map();
    let x: std::collections::BTreeSet<i64> = [-3, 1, 5, 21].into();
    let e = g.lambda(nu2, Selection::Only(x)).unwrap();
    let report = g.atoms(&e, -4, 4).unwrap();
    assert_eq!(report.atoms.len(), 1);
    assert_eq!(&report.atoms[0].map, nu2);
    assert_eq!(report.atoms[0].flags, vec![q(-3, 2), q(1, 2), q(5, 2)]);
    assert!(g.atoms(&g.parse("x2").unwrap(), -4, 4).is_err());
    let z = g.parse("z2 z3^-1 z2^-1 z3").unwrap();
    let report = g.atoms(&z, -6, 6).unwrap();
    let classes = report.classes.as_ref().unwrap();
    assert!(classes.stabilized);
    assert!(report.atoms.len() <= classes.class_count);
    for a in &report.atoms {
        assert!(plgroups::thompson::is_in_f_prime(&a.map));
    }
}
