//! Verification suites: deterministic, seeded batteries of exact checks
//! whose outcome is a serializable [`Report`].

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::batch;
use crate::error::{Error, Result};
use crate::exact_pl::{Interval, PLMap};
use crate::extension::{
    germ_exponents, higman_instance_check, make_f_alpha, xi_commutator_identity, Endpoint, ExtConfig, GermExponents,
};
use crate::labelling::{word_inverse, Block, Labelling};
use crate::line_group::{GroupWord, LineGen, LineGroup};
use crate::rational::{q, Rational};
use crate::simplicity_lab::{intersection_witness, pingpong_table_check, Check, Lab};
use crate::thompson::{
    bump, eval_f_word, f_factorize, interval_transporter, is_in_f_prime, pl_from_tree_pair, relators,
    standard_elements, tree_pair_from_pl, FGen, FWord, NuGen,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Thompson,
    Labelling,
    Line,
    Pingpong,
    Simplicity,
    Extension,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 7] = ["thompson", "labelling", "line", "pingpong", "simplicity", "extension", "all"];

    fn parts(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![
                Suite::Thompson,
                Suite::Labelling,
                Suite::Line,
                Suite::Pingpong,
                Suite::Simplicity,
                Suite::Extension,
            ],
            s => vec![s],
        }
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Suite> {
        Ok(match s {
            "thompson" => Suite::Thompson,
            "labelling" => Suite::Labelling,
            "line" => Suite::Line,
            "pingpong" => Suite::Pingpong,
            "simplicity" => Suite::Simplicity,
            "extension" => Suite::Extension,
            "all" => Suite::All,
            _ => return Err(Error::Config(format!("unknown suite {s:?} (expected one of {})", Suite::NAMES.join(", ")))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = match self {
            Suite::Thompson => 0,
            Suite::Labelling => 1,
            Suite::Line => 2,
            Suite::Pingpong => 3,
            Suite::Simplicity => 4,
            Suite::Extension => 5,
            Suite::All => 6,
        };
        f.write_str(Suite::NAMES[i])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyConfig {
    /// seed word, or `tau` for the periodic labelling
    pub seed: String,
    pub window: (i64, i64),
    pub rng_seed: u64,
    pub alpha: Rational,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: "a".into(), window: (-8, 8), rng_seed: 0, alpha: q(1, 3) }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.window.0 >= self.window.1 {
            return Err(Error::Config(format!("window [{}, {}] is empty", self.window.0, self.window.1)));
        }
        labelling_for(&self.seed)?;
        Ok(())
    }
}

/// `tau` selects the periodic labelling; anything else is a seed word.
pub fn labelling_for(seed: &str) -> Result<Labelling> {
    if seed.trim() == "tau" {
        Ok(Labelling::periodic_tau())
    } else {
        Labelling::from_seed_str(seed)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub suite: Suite,
    pub config: VerifyConfig,
    /// sorted by name
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl Report {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<Report> {
    cfg.validate()?;
    let mut checks = Vec::new();
    for part in suite.parts() {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
        let found = match part {
            Suite::Thompson => thompson(&mut rng),
            Suite::Labelling => labelling(cfg, &mut rng),
            Suite::Line => line(cfg, &mut rng),
            Suite::Pingpong => pingpong(cfg),
            Suite::Simplicity => simplicity(cfg, &mut rng),
            Suite::Extension => extension(cfg),
            Suite::All => unreachable!(),
        };
        match found {
            Ok(mut c) => checks.append(&mut c),
            Err(e) => checks.push(Check::new(format!("{part}/completed"), false, e.to_string())),
        }
    }
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    let passed = checks.iter().all(|c| c.passed);
    Ok(Report { suite, config: cfg.clone(), checks, passed })
}

fn ok(name: &str, passed: bool) -> Check {
    Check::new(name, passed, String::new())
}

pub fn random_word(rng: &mut ChaCha8Rng, max_len: usize) -> GroupWord {
    let len = rng.gen_range(1..=max_len);
    GroupWord::new(
        (0..len)
            .map(|_| (LineGen::BASIC[rng.gen_range(0..6)], if rng.gen_bool(0.5) { 1 } else { -1 }))
            .collect(),
    )
}

/// Random nonidentity words (on the window) of bounded length.
pub fn random_nonidentity_words(
    group: &LineGroup,
    rng: &mut ChaCha8Rng,
    count: usize,
    max_len: usize,
    window: (i64, i64),
) -> Result<Vec<GroupWord>> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let w = random_word(rng, max_len);
        if !group.is_identity_on(&group.elem(&w)?, window.0, window.1)? {
            out.push(w);
        }
    }
    Ok(out)
}

fn random_f(rng: &mut ChaCha8Rng) -> Result<PLMap> {
    let mut w = FWord::new();
    for _ in 0..rng.gen_range(1..=6) {
        let g = if rng.gen_bool(0.5) { FGen::A } else { FGen::B };
        w.push(g, rng.gen_range(-2..=2));
    }
    Ok(eval_f_word(&w))
}

fn thompson(rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let s = standard_elements();
    let mut out = Vec::new();
    for (name, a, b) in [("thompson/relators/a-b", &s.a, &s.b), ("thompson/relators/nu2-nu3", &s.nu2, &s.nu3)] {
        out.push(ok(name, relators(a, b)?.iter().all(PLMap::is_identity)));
    }
    let support = s.c0.support()?;
    out.push(ok("thompson/c0/support", support == vec![Interval::of(Rational::zero(), q(1, 4))]));
    let start = s.c0.restrict(&Interval::of(Rational::zero(), q(1, 16)))?;
    out.push(ok(
        "thompson/c0/doubling",
        start == PLMap::affine(&Interval::of(Rational::zero(), q(1, 16)), &Interval::of(Rational::zero(), q(1, 8))),
    ));
    out.push(ok("thompson/nu1/symmetric", s.nu1.is_symmetric()));
    let mut factor_ok = true;
    let mut tree_ok = true;
    for _ in 0..20 {
        let f = random_f(rng)?;
        factor_ok &= eval_f_word(&f_factorize(&f)?) == f;
        tree_ok &= pl_from_tree_pair(&tree_pair_from_pl(&f)?)? == f;
    }
    out.push(ok("thompson/factorize/round-trip", factor_ok));
    out.push(ok("thompson/tree-pair/round-trip", tree_ok));
    Ok(out)
}

fn labelling(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let rho = labelling_for(&cfg.seed)?;
    let mut out = Vec::new();
    if let Some(b0) = rho.stage(0) {
        out.push(ok("labelling/seed-block", rho.block_word(&b0) == rho.seed()));
    }
    if rho.is_quasi_periodic() {
        let blocks: Vec<Block> = (0..20)
            .map(|_| {
                let start = rng.gen_range(-200..=190);
                Block::from_indices(start, start + rng.gen_range(0..=8))
            })
            .collect();
        let found = batch::map(&blocks, |x| {
            rho.find_inverse_block(x, 4096).is_ok_and(|y| rho.block_word(&y) == word_inverse(&rho.block_word(x)))
        });
        let hits = found.iter().filter(|f| **f).count();
        out.push(Check::new(
            "labelling/inverse-blocks",
            hits == found.len(),
            format!("{hits} of {} blocks", found.len()),
        ));
    }
    let tau = Labelling::periodic_tau();
    let b = Block::from_indices(1, 1);
    out.push(ok("labelling/tau-contrast", tau.find_inverse_block(&b, 256).is_err()));
    Ok(out)
}

/// A generator on `[-r, r]`, laid block by block straight from the labels;
/// blocks that stick out of the interval act trivially.
fn direct_generator(rho: &Labelling, g: LineGen, inverse: bool, r: i64) -> Result<PLMap> {
    let (nu, half) = match g {
        LineGen::Zeta(nu) => (nu, false),
        LineGen::Chi(nu) => (nu, true),
        _ => return Err(Error::Config("direct evaluation covers the basic generators only".into())),
    };
    let end = Rational::int(r);
    let mut x = Rational::int(-r);
    let mut pieces = Vec::new();
    if half {
        let next = &x + &Rational::half();
        pieces.push(PLMap::identity(&Interval::new(x, next.clone())?));
        x = next;
    }
    while &x + &Rational::one() <= end {
        let mut base = nu.map().clone();
        if rho.label_at(&(&x + &Rational::half()))?.is_inverse() {
            base = base.iota_conjugate()?;
        }
        if inverse {
            base = base.invert();
        }
        pieces.push(base.translate(&x));
        x = x + Rational::one();
    }
    if x < end {
        pieces.push(PLMap::identity(&Interval::new(x, end)?));
    }
    PLMap::concat(&pieces)
}

fn direct_restriction(rho: &Labelling, w: &GroupWord, lo: i64, hi: i64) -> Result<PLMap> {
    let r = lo.abs().max(hi.abs()) + w.len() as i64 + 2;
    let mut full = PLMap::identity(&Interval::ints(-r, r)?);
    for (g, e) in &w.letters {
        let step = direct_generator(rho, *g, *e < 0, r)?;
        for _ in 0..e.unsigned_abs() {
            full = full.compose(&step)?;
        }
    }
    full.restrict(&Interval::ints(lo, hi)?)
}

fn line(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let group = LineGroup::new(labelling_for(&cfg.seed)?);
    let rho = group.labelling().clone();
    let (lo, hi) = (-3, 3);
    let words: Vec<GroupWord> = (0..100).map(|_| random_word(rng, 6)).collect();
    let agree = batch::map(&words, |w| -> Result<bool> {
        let fast = group.window_map(&group.elem(w)?, lo, hi)?;
        Ok(fast.map == direct_restriction(&rho, w, lo, hi)? && fast.margin <= Rational::int(w.len() as i64 + 1))
    });
    let bad = agree.iter().filter(|a| !matches!(a, Ok(true))).count();
    let mut out = vec![Check::new("line/locality", bad == 0, format!("{} of {} words agree", words.len() - bad, words.len()))];

    let mut small = true;
    for g in LineGen::BASIC {
        let e = group.generator(g)?;
        for k in 0..500 {
            let x = Rational::new(k - 250, 37);
            small &= (group.eval_point(&e, &x) - &x).abs() < Rational::one();
        }
    }
    out.push(ok("line/displacement", small));

    if rho.is_quasi_periodic() {
        let words = random_nonidentity_words(&group, rng, 20, 6, (-8, 8))?;
        let fixed = batch::map(&words, |w| -> Result<bool> {
            let e = group.elem(w)?;
            let p = group.find_fixed_point(&e, 100_000)?.point();
            Ok(group.eval_point(&e, &p) == p)
        });
        let bad = fixed.iter().filter(|f| !matches!(f, Ok(true))).count();
        out.push(Check::new("line/fixed-points", bad == 0, format!("{bad} of {} words without a fixed point", words.len())));
    }
    let tau = LineGroup::new(Labelling::periodic_tau());
    let mut contrast = None;
    'outer: for a in LineGen::BASIC {
        for b in LineGen::BASIC {
            let w = GroupWord::new(vec![(a, 1), (b, 1)]);
            if tau.find_fixed_point(&tau.elem(&w)?, 200).is_err() {
                contrast = Some(w.to_string());
                break 'outer;
            }
        }
    }
    out.push(Check::new("line/tau-contrast", contrast.is_some(), contrast.unwrap_or_default()));
    let z1 = group.generator(LineGen::Zeta(NuGen::Nu1))?;
    let x1 = group.generator(LineGen::Chi(NuGen::Nu1))?;
    out.push(ok("line/perfectness/pi-preimage", is_in_f_prime(&group.pi_preimage(&z1, -6, 6)?)));
    out.push(ok("line/perfectness/lambda-preimage", is_in_f_prime(&group.lambda_preimage(&x1, -6, 6)?)));
    Ok(out)
}

fn pingpong(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let group = LineGroup::new(labelling_for(&cfg.seed)?);
    let (lo, hi) = (cfg.window.0.max(-4), cfg.window.1.min(4));
    let report = pingpong_table_check(&group, lo, hi.max(lo + 1), 6)?;
    let mut out: Vec<Check> = report
        .checks
        .iter()
        .map(|c| Check::new(format!("pingpong/{}", c.name), c.passed, c.detail.clone()))
        .collect();
    out.push(Check::new(
        "pingpong/free-words",
        report.identity_words.is_empty(),
        format!("{} words, {} act trivially", report.words_checked, report.identity_words.len()),
    ));
    Ok(out)
}

fn simplicity(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let group = LineGroup::new(labelling_for(&cfg.seed)?);
    let words = random_nonidentity_words(&group, rng, 5, 4, cfg.window)?;
    let covers = batch::map(&words, |w| -> Result<(String, bool, String)> {
        let chain = Lab::new(&group, group.elem(w)?, cfg.window).normal_closure_cover().chain;
        let detail = match &chain.failure {
            Some(f) => f.clone(),
            None => format!("{} steps, {} uncovered", chain.steps.len(), chain.uncovered.len()),
        };
        Ok((w.to_string(), chain.complete, detail))
    });
    let mut out = Vec::new();
    for (i, c) in covers.into_iter().enumerate() {
        match c {
            Ok((w, done, detail)) => out.push(Check::new(format!("simplicity/cover/{i}"), done, format!("{w}: {detail}"))),
            Err(e) => out.push(Check::new(format!("simplicity/cover/{i}"), false, e.to_string())),
        }
    }
    let s = standard_elements();
    let atom = PLMap::commutator(&s.nu2, &s.nu3)?;
    let x = [q(1, 2), q(3, 2)].into_iter().collect();
    let y = [q(3, 2), q(5, 2)].into_iter().collect();
    let wit = intersection_witness(&group, &x, &y, &atom, (-1, 4))?;
    out.push(ok("simplicity/intersection", wit.equal));
    Ok(out)
}

fn extension(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let ext = ExtConfig::new(cfg.alpha.clone(), Interval::of(q(1, 2), q(5, 8)), Interval::of(q(1, 4), q(5, 16)))?;
    let mut out = Vec::new();
    for (name, i1) in [("a", Interval::of(q(3, 4), q(13, 16))), ("b", Interval::of(q(7, 8), q(15, 16)))] {
        out.push(ok(&format!("extension/xi-identity/{name}"), xi_commutator_identity(&ext, &i1)?.equal));
    }
    let f = make_f_alpha(&cfg.alpha)?;
    out.push(ok(
        "extension/germ/f-alpha",
        germ_exponents(&f, Endpoint::Left, &cfg.alpha)? == GermExponents { two_exp: 0, alpha_exp: 1 },
    ));
    let other = if cfg.alpha == q(1, 3) { q(3, 5) } else { q(1, 3) };
    let cross = germ_exponents(&make_f_alpha(&other)?, Endpoint::Left, &cfg.alpha);
    out.push(Check::new(
        "extension/germ/cross-alpha",
        matches!(cross, Err(Error::NotRepresentable { .. })),
        format!("slope {other}"),
    ));
    let b = bump(&Interval::of(q(1, 4), q(3, 8)))?;
    let push = interval_transporter(&Interval::of(q(1, 4), q(3, 8)), &Interval::of(q(1, 2), q(9, 16)))?;
    let off = interval_transporter(&Interval::of(q(1, 2), q(9, 16)), &Interval::of(q(5, 8), q(11, 16)))?;
    out.push(ok("extension/higman", higman_instance_check(&b, &b, &off, &push)?));
    let group = crate::extension::extended_group(labelling_for(&cfg.seed)?, &ext)?;
    let e = group.parse("g z2 w^-1")?;
    let narrow = group.restrict(&e, &Interval::ints(-2, 2)?);
    let wide = group.restrict(&e, &Interval::ints(-6, 6)?).restrict(&Interval::ints(-2, 2)?)?;
    out.push(ok("extension/locality", narrow == wide));
    Ok(out)
}
