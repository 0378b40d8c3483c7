use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_pl::{Interval, PLMap};
use crate::labelling::{half_index, Block};
use crate::line_group::{AtomReport, Elem, LineGroup, Selection};
use crate::rational::Rational;
use crate::thompson::{bump, hump, is_in_f_prime, largest_dyadic_inside};

use super::ledger::Certified;
use super::Check;

const FIXED_POINT_SEARCH: i64 = 1 << 16;
const WINDOW_DOUBLINGS: usize = 4;
const EPSILON_HALVINGS: u32 = 40;
const CANDIDATES: usize = 8;

/// Working context: the group, the root element whose normal closure is
/// explored, and the window on which everything is verified.
pub struct Lab<'a> {
    pub group: &'a LineGroup,
    pub root: Elem,
    pub window: (i64, i64),
}

#[derive(Clone, Debug)]
pub struct IntoZ {
    pub q: Certified,
    /// symmetric element of H' whose copies were commuted with the input
    pub g: PLMap,
    pub component: Interval,
    pub phi_images: Vec<Rational>,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagPartition {
    /// block size in half-step positions
    pub m: usize,
    pub blocks: Vec<(Rational, Rational)>,
    pub all_hit: bool,
}

#[derive(Clone, Debug)]
pub struct Spread {
    pub elem: Certified,
    pub atom: PLMap,
    pub flags: Vec<Rational>,
    /// the half-integer this element was built to flag (none for the input)
    pub target: Option<Rational>,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug)]
pub struct Compatible {
    pub elem: Certified,
    pub atom: PLMap,
    pub flags: Vec<Rational>,
    pub changed: bool,
    pub g: Option<PLMap>,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug)]
pub struct Extracted {
    pub elem: Certified,
    pub atom: PLMap,
    pub flags: Vec<Rational>,
    pub l: PLMap,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainStep {
    pub tag: String,
    pub word: String,
    pub letters: u64,
    pub ledger_terms: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atom: Option<PLMap>,
    pub checks: Vec<Check>,
}

/// Report of a normal-closure cover run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessChain {
    pub input_word: String,
    pub window: (i64, i64),
    pub steps: Vec<ChainStep>,
    pub covered: Vec<Rational>,
    pub uncovered: Vec<Rational>,
    pub complete: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

impl WitnessChain {
    pub fn all_checks_pass(&self) -> bool {
        self.steps.iter().all(|s| s.checks.iter().all(|c| c.passed))
    }
}

#[derive(Clone, Debug)]
pub struct CoverPiece {
    pub elem: Certified,
    pub atom: PLMap,
    pub flags: Vec<Rational>,
}

#[derive(Clone, Debug)]
pub struct Cover {
    pub chain: WitnessChain,
    pub pieces: Vec<CoverPiece>,
}

/// A transition point of `h` in `(0, 1)` that is not a transition point of
/// any context element different from `h`.
pub fn is_compatible(h: &PLMap, context: &[PLMap]) -> Option<Rational> {
    let own = h.transition_points().ok()?;
    let others: BTreeSet<Rational> = context
        .iter()
        .filter(|c| *c != h)
        .flat_map(|c| c.transition_points().unwrap_or_default())
        .collect();
    own.into_iter()
        .filter(|x| x.is_positive() && x < &Rational::one())
        .find(|x| !others.contains(x))
}

fn step(tag: &str, c: &Certified, flags: Vec<Rational>, atom: Option<PLMap>, checks: Vec<Check>) -> ChainStep {
    ChainStep {
        tag: tag.into(),
        word: c.elem.to_string(),
        letters: c.elem.letter_count(),
        ledger_terms: c.terms.len(),
        flags,
        atom,
        checks,
    }
}

fn iota(x: &Rational) -> Rational {
    Rational::one() - x
}

/// Open gaps of `(a, b)` left after removing `points`, largest first.
fn gaps(a: &Rational, b: &Rational, points: &BTreeSet<Rational>) -> Vec<Interval> {
    let mut cuts = vec![a.clone()];
    cuts.extend(points.iter().filter(|p| a < *p && *p < b).cloned());
    cuts.push(b.clone());
    let mut out: Vec<Interval> = cuts.windows(2).map(|w| Interval::of(w[0].clone(), w[1].clone())).collect();
    out.sort_by(|x, y| y.len().cmp(&x.len()).then(x.lo().cmp(y.lo())));
    out
}

fn power_of_two(k: u32) -> Rational {
    Rational::pow2(-(k as i64))
}

impl Lab<'_> {
    pub fn new(group: &LineGroup, root: Elem, window: (i64, i64)) -> Lab<'_> {
        Lab { group, root, window }
    }

    fn half_integers(&self) -> Vec<Rational> {
        (self.window.0..self.window.1).map(|n| Rational::new(2 * n + 1, 2)).collect()
    }

    fn atoms(&self, e: &Elem) -> Result<AtomReport> {
        self.group.atoms(e, self.window.0, self.window.1)
    }

    fn z_checks(&self, e: &Elem, checks: &mut Vec<Check>) -> Result<bool> {
        let cert = self.group.in_z(e, self.window.0, self.window.1)?;
        let stabilized = cert.classes.as_ref().is_none_or(|c| c.stabilized);
        checks.push(Check::new(
            "fixes integers",
            cert.holds(),
            cert.witness.map(|w| format!("witness {w}")).unwrap_or_default(),
        ));
        checks.push(Check::new(
            "class mode stabilized",
            stabilized,
            cert.classes.as_ref().map(|c| format!("{} classes, radius {}", c.class_count, c.radius_steps)).unwrap_or_default(),
        ));
        Ok(cert.holds() && stabilized)
    }

    fn ledger_check(&self, c: &Certified) -> Result<Check> {
        let ok = c.replay_matches(self.group, &self.root, self.window.0, self.window.1)?;
        Ok(Check::new("ledger replay", ok, format!("{} conjugate factors", c.terms.len())))
    }

    /// Finds a nonidentity element of the normal closure of `f` that fixes
    /// the integers: `f h f^-1 h^-1` with `h = lambda(g)`, `g` symmetric and
    /// supported away from the fractional parts of the images of integers,
    /// with a support boundary inside a support component of `f` that ends
    /// at a fixed point.
    pub fn into_z(&self, f: &Certified) -> Result<IntoZ> {
        let (lo, hi) = self.window;
        if self.group.is_identity_on(&f.elem, lo, hi)? {
            return Err(Error::Verification("input acts trivially on the window".into()));
        }
        let (mut wlo, mut whi) = (lo, hi);
        for _ in 0..=WINDOW_DOUBLINGS {
            let m = self.group.restrict(&f.elem, &Interval::ints(wlo, whi)?);
            let mut comps: Vec<Interval> = m
                .moved_components()
                .into_iter()
                .filter(|c| c.lo() > m.lo() || c.hi() < m.hi())
                .collect();
            if comps.is_empty() {
                let z = self.group.find_fixed_point(&f.elem, FIXED_POINT_SEARCH)?.point();
                let width = whi - wlo;
                wlo = wlo.min(z.floor_i64() - 1) - width / 2;
                whi = whi.max(z.ceil_i64() + 1) + width / 2;
                continue;
            }
            comps.sort_by_key(|c| c.midpoint().abs());
            let (classes, summary) = self.group.phi_image_classes(&f.elem, self.window)?;
            let mut b: BTreeSet<Rational> = classes;
            b.extend(self.group.phi_image_set(&f.elem, lo, hi));
            let y: BTreeSet<Rational> = b.iter().flat_map(|x| [x.clone(), iota(x)]).collect();
            let mut tries = 0;
            for comp in &comps {
                let first = comp.lo().floor_i64();
                for n in first..comp.hi().ceil_i64() {
                    let shift = Rational::int(n);
                    let a = Rational::max(comp.lo(), &shift) - &shift;
                    let bb = Rational::min(comp.hi(), &(&shift + &Rational::one())) - &shift;
                    if a >= bb {
                        continue;
                    }
                    for gap in gaps(&a, &bb, &y) {
                        let half = Rational::half();
                        let region = if gap.lo() < &half {
                            Interval::of(gap.lo().clone(), Rational::min(gap.hi(), &half))
                        } else {
                            gap.mirror_unit()
                        };
                        tries += 1;
                        if tries > CANDIDATES {
                            break;
                        }
                        let d = largest_dyadic_inside(&region);
                        let one_side = hump(d.lo(), d.hi())?;
                        let g = one_side.compose(&one_side.iota_conjugate()?)?;
                        let h = self.group.lambda(&g, Selection::All)?;
                        let q = f.inverse().commutator_with(&h.inverse());
                        if self.group.is_identity_on(&q.elem, lo, hi)? {
                            continue;
                        }
                        let mut checks = vec![
                            Check::new("nonidentity on window", true, String::new()),
                            Check::new("g symmetric", g.is_symmetric(), String::new()),
                            Check::new("g in F'", is_in_f_prime(&g), String::new()),
                            Check::new(
                                "phi images finite",
                                summary.stabilized,
                                format!("{} values over {} classes", b.len(), summary.class_count),
                            ),
                        ];
                        if !self.z_checks(&q.elem, &mut checks)? {
                            continue;
                        }
                        checks.push(self.ledger_check(&q)?);
                        return Ok(IntoZ {
                            q,
                            g,
                            component: comp.clone(),
                            phi_images: b.into_iter().collect(),
                            checks,
                        });
                    }
                }
            }
            return Err(Error::SearchFailed("no support component gave a nonidentity commutator".into()));
        }
        Err(Error::SearchFailed("no support component with a fixed end after enlarging the window".into()))
    }

    /// Block size `m` (from the recurrence of the label block forcing one
    /// flag) and the partition of the window into `m`-blocks, each checked
    /// to contain a flag.
    pub fn flag_cover_partition(&self, report: &AtomReport, flags: &[Rational]) -> Result<FlagPartition> {
        let first = flags.first().ok_or_else(|| Error::Verification("atom has no flag in the window".into()))?;
        let radius = report.classes.as_ref().map_or(1, |c| c.radius_steps as i64);
        let centre = half_index(first)?;
        let forcing = Block::from_indices(centre - radius, centre + radius);
        let range = 64.max(8 * radius).max(4 * (self.window.1 - self.window.0));
        let m = self.group.labelling().recurrence_radius(&forcing, range)?;
        let flag_h: BTreeSet<i64> = flags.iter().filter_map(|f| half_index(f).ok()).collect();
        let (lo_h, hi_h) = (2 * self.window.0, 2 * self.window.1);
        let mut blocks = Vec::new();
        let mut all_hit = true;
        let mut start = lo_h;
        while start + m as i64 - 1 <= hi_h {
            let end = start + m as i64 - 1;
            all_hit &= flag_h.range(start..=end).next().is_some();
            blocks.push((Rational::new(start, 2), Rational::new(end, 2)));
            start = end + 1;
        }
        Ok(FlagPartition { m, blocks, all_hit })
    }

    /// Elements of the normal closure fixing the integers whose atom flags
    /// together cover every half-integer of the window. Targets are handled
    /// left to right: the support near the closest flag is transported to
    /// the target block and a commutator with a one-component `lambda(k)`
    /// isolates it there.
    pub fn atom_spread(&self, f: &Certified) -> Result<Vec<Spread>> {
        let report = self.atoms(&f.elem)?;
        let (h, flags) = report
            .atoms
            .iter()
            .filter(|a| !a.flags.is_empty())
            .max_by(|a, b| a.flags.len().cmp(&b.flags.len()).then(b.flags.first().cmp(&a.flags.first())))
            .map(|a| (a.map.clone(), a.flags.clone()))
            .ok_or_else(|| Error::Verification("no atom flagged inside the window".into()))?;
        let all_atoms = report.maps();
        let mut covered: BTreeSet<Rational> = flags.iter().cloned().collect();
        let mut out = vec![Spread {
            elem: f.clone(),
            atom: h.clone(),
            flags: flags.clone(),
            target: None,
            checks: vec![Check::new("atom in F'", is_in_f_prime(&h), String::new())],
        }];
        for t in self.half_integers() {
            if covered.contains(&t) {
                continue;
            }
            let j = flags
                .iter()
                .min_by(|a, b| (*a - &t).abs().cmp(&(*b - &t).abs()).then(a.cmp(b)))
                .expect("nonempty flags")
                .clone();
            let spread = self.spread_to(f, &h, &all_atoms, &j, &t)?;
            covered.extend(spread.flags.iter().cloned());
            out.push(spread);
        }
        Ok(out)
    }

    fn spread_to(&self, f: &Certified, h: &PLMap, all_atoms: &[PLMap], j: &Rational, t: &Rational) -> Result<Spread> {
        let nj = j.floor_i64();
        let s = t.floor_i64();
        let block = self.group.restrict(&f.elem, &Interval::ints(nj, nj + 1)?);
        let support = block.support_hull()?.ok_or_else(|| Error::Verification(format!("no support at flag {j}")))?;
        let tr = self.group.transport(&support, nj, s)?;
        let gi = tr.elem.inverse();
        let (mut s0, _) = self.group.phi_image_classes(&gi, self.window)?;
        s0.extend(self.group.phi_image_set(&gi, self.window.0, self.window.1));
        let s1: BTreeSet<Rational> = s0.iter().flat_map(|x| [x.clone(), iota(x)]).collect();
        let mut s_all = s1.clone();
        for p in all_atoms {
            let twisted = p.iota_conjugate()?;
            for pp in [p.clone(), p.invert(), twisted.clone(), twisted.invert()] {
                for x in &s1 {
                    s_all.insert(pp.eval(x)?);
                }
            }
        }
        let mut last_err = None;
        for comp in h.support()? {
            for gap in gaps(comp.lo(), comp.hi(), &s_all).into_iter().take(3) {
                let k = bump(&gap)?;
                let lk = self.group.lambda(&k, Selection::All)?;
                let out = f.commutator_with(&lk).conjugate(&tr.elem);
                let mut checks = vec![Check::new("k in F'", is_in_f_prime(&k), format!("support {gap}"))];
                if !self.z_checks(&out.elem, &mut checks)? {
                    last_err = Some(format!("conjugated commutator left the integer-fixing subgroup (gap {gap})"));
                    continue;
                }
                let report = self.atoms(&out.elem)?;
                let Some(atom) = report.atom_at(t) else {
                    last_err = Some(format!("no atom at {t}"));
                    continue;
                };
                checks.push(Check::new("atom at target", true, t.to_string()));
                checks.push(Check::new("atom in F'", is_in_f_prime(&atom.map), String::new()));
                checks.push(self.ledger_check(&out)?);
                return Ok(Spread {
                    atom: atom.map.clone(),
                    flags: atom.flags.clone(),
                    elem: out,
                    target: Some(t.clone()),
                    checks,
                });
            }
        }
        Err(Error::SearchFailed(format!(
            "could not flag {t}: {}",
            last_err.unwrap_or_else(|| "no admissible support gap".into())
        )))
    }

    /// Returns `f` itself when `h` already has a private transition point
    /// among the atoms of `f`; otherwise `[f^-1 lambda(g) f, lambda(g)]` for a
    /// two-component `g` near a transition point of `h`, found by halving a
    /// dyadic scale until the new atom is compatible.
    pub fn make_compatible(&self, f: &Certified, h: &PLMap) -> Result<Compatible> {
        let report = self.atoms(&f.elem)?;
        let flags = report.flags_of(h);
        let all_atoms = report.maps();
        if let Some(x) = is_compatible(h, &all_atoms) {
            return Ok(Compatible {
                elem: f.clone(),
                atom: h.clone(),
                flags,
                changed: false,
                g: None,
                checks: vec![Check::new("already compatible", true, format!("transition point {x}"))],
            });
        }
        let (g, new_h) = separate(h, &all_atoms)?;
        let lg = self.group.lambda(&g, Selection::All)?;
        let k = f.double_commutator(&lg);
        let mut checks = vec![Check::new("g in F'", is_in_f_prime(&g), String::new())];
        self.z_checks(&k.elem, &mut checks)?;
        let new_report = self.atoms(&k.elem)?;
        let new_flags = new_report.flags_of(&new_h);
        let contains = flags.iter().all(|x| new_flags.contains(x));
        checks.push(Check::new("flags contain input flags", contains, format!("{} -> {}", flags.len(), new_flags.len())));
        let compatible = is_compatible(&new_h, &new_report.maps());
        checks.push(Check::new(
            "new atom compatible",
            compatible.is_some(),
            compatible.map(|x| format!("transition point {x}")).unwrap_or_default(),
        ));
        checks.push(Check::new("atom in F'", is_in_f_prime(&new_h), String::new()));
        checks.push(self.ledger_check(&k)?);
        Ok(Compatible { elem: k, atom: new_h, flags: new_flags, changed: true, g: Some(g), checks })
    }

    /// `[f^-1 lambda(l) f, lambda(l)]` for a one-component `l` around a
    /// private transition point of `h`: a single-atom element whose flags
    /// are exactly those of `h` in `f`.
    pub fn extract_kx(&self, f: &Certified, h: &PLMap) -> Result<Extracted> {
        let report = self.atoms(&f.elem)?;
        let flags = report.flags_of(h);
        let all_atoms = report.maps();
        let x = is_compatible(h, &all_atoms)
            .ok_or_else(|| Error::Verification("atom has no private transition point".into()))?;
        for d in 4..4 + EPSILON_HALVINGS {
            let eps = power_of_two(d);
            let u = (&x - &eps).floor_to_grid(d);
            let v = (&x + &eps).ceil_to_grid(d);
            if !u.is_positive() || v >= Rational::one() {
                continue;
            }
            let iv = Interval::of(u.clone(), v.clone());
            let others_ok = all_atoms.iter().filter(|p| *p != h).all(|p| {
                let r = p.restrict(&iv).expect("inside unit");
                r.is_identity() || {
                    let img = r.range();
                    img.hi() < iv.lo() || img.lo() > iv.hi()
                }
            });
            if !others_ok {
                continue;
            }
            let left = h.restrict(&Interval::of(u.clone(), x.clone()))?.fixed_points();
            let right = h.restrict(&Interval::of(x.clone(), v.clone()))?.fixed_points();
            let only_x = |s: &crate::exact_pl::FixedSet| s.fixed_intervals.is_empty() && s.isolated.iter().all(|p| p == &x);
            if !only_x(&left) && !only_x(&right) {
                continue;
            }
            let l = hump(&u, &v)?;
            let atom = PLMap::commutator(&l.conjugate_by(h)?, &l)?;
            if atom.is_identity() {
                continue;
            }
            let ll = self.group.lambda(&l, Selection::All)?;
            let g = f.double_commutator(&ll);
            let out = self.atoms(&g.elem)?;
            let mut checks = vec![Check::new("l in F'", is_in_f_prime(&l), format!("support {iv}"))];
            checks.push(Check::new("single atom", out.atoms.len() == 1, format!("{} atoms", out.atoms.len())));
            let same = out.atoms.first().is_some_and(|a| a.map == atom);
            checks.push(Check::new("atom is the commutator", same, String::new()));
            let got = out.atoms.first().map(|a| a.flags.clone()).unwrap_or_default();
            checks.push(Check::new("flags preserved", got == flags, format!("{} flags", got.len())));
            checks.push(Check::new("atom in F'", is_in_f_prime(&atom), String::new()));
            checks.push(self.ledger_check(&g)?);
            return Ok(Extracted { elem: g, atom, flags: got, l, checks });
        }
        Err(Error::SearchFailed(format!("no interval around {x} separated the other atoms")))
    }

    /// The full pipeline; failures are recorded in the returned chain.
    pub fn normal_closure_cover(&self) -> Cover {
        let mut chain = WitnessChain {
            input_word: self.root.to_string(),
            window: self.window,
            steps: Vec::new(),
            covered: Vec::new(),
            uncovered: self.half_integers(),
            complete: false,
            failure: None,
        };
        let mut pieces = Vec::new();
        if let Err(e) = self.run(&mut chain, &mut pieces) {
            chain.failure = Some(e.to_string());
        }
        let covered: BTreeSet<Rational> = pieces.iter().flat_map(|p: &CoverPiece| p.flags.iter().cloned()).collect();
        chain.uncovered = self.half_integers().into_iter().filter(|t| !covered.contains(t)).collect();
        chain.covered = covered.into_iter().collect();
        chain.complete = chain.failure.is_none() && chain.uncovered.is_empty() && chain.all_checks_pass();
        Cover { chain, pieces }
    }

    fn run(&self, chain: &mut WitnessChain, pieces: &mut Vec<CoverPiece>) -> Result<()> {
        let root = Certified::root(&self.root);
        let fail = |chain: &mut WitnessChain, tag: &str, e: Error| {
            chain.steps.push(ChainStep {
                tag: tag.into(),
                word: String::new(),
                letters: 0,
                ledger_terms: 0,
                flags: Vec::new(),
                atom: None,
                checks: vec![Check::new("step completed", false, e.to_string())],
            });
            e
        };
        let z = self.into_z(&root).map_err(|e| fail(chain, "into-z", e))?;
        chain.steps.push(step("into-z", &z.q, Vec::new(), None, z.checks.clone()));

        let report = self.atoms(&z.q.elem).map_err(|e| fail(chain, "flag-partition", e))?;
        if let Some(a) = report.atoms.iter().filter(|a| !a.flags.is_empty()).max_by_key(|a| a.flags.len()) {
            let part = self.flag_cover_partition(&report, &a.flags).map_err(|e| fail(chain, "flag-partition", e))?;
            let detail = format!("m = {}, {} full blocks", part.m, part.blocks.len());
            chain.steps.push(step(
                "flag-partition",
                &z.q,
                a.flags.clone(),
                Some(a.map.clone()),
                vec![Check::new("every block meets a flag", part.all_hit, detail)],
            ));
        }

        let spreads = self.atom_spread(&z.q).map_err(|e| fail(chain, "atom-spread", e))?;
        for s in &spreads {
            chain.steps.push(step("atom-spread", &s.elem, s.flags.clone(), Some(s.atom.clone()), s.checks.clone()));
        }
        for s in spreads {
            let c = self.make_compatible(&s.elem, &s.atom).map_err(|e| fail(chain, "make-compatible", e))?;
            chain.steps.push(step("make-compatible", &c.elem, c.flags.clone(), Some(c.atom.clone()), c.checks.clone()));
            let x = self.extract_kx(&c.elem, &c.atom).map_err(|e| fail(chain, "extract-single-atom", e))?;
            chain.steps.push(step("extract-single-atom", &x.elem, x.flags.clone(), Some(x.atom.clone()), x.checks.clone()));
            pieces.push(CoverPiece { elem: x.elem, atom: x.atom, flags: x.flags });
        }
        Ok(())
    }
}

/// A two-component `g` near a transition point of `h`, supported on `I1`
/// and a slightly larger `I2` around `I1 h` with `I2 h` disjoint from `I2`,
/// after which the commutator atom `[h^-1 g h, g]` has a private transition
/// point among the commutators built from all atoms.
fn separate(h: &PLMap, atoms: &[PLMap]) -> Result<(PLMap, PLMap)> {
    for x in h.transition_points()? {
        if !x.is_positive() || x >= Rational::one() {
            continue;
        }
        let left_node = h.nodes().iter().rev().map(|n| &n.0).find(|p| *p < &x).cloned();
        let right_node = h.nodes().iter().map(|n| &n.0).find(|p| *p > &x).cloned();
        for (left, bound) in [(true, left_node), (false, right_node)] {
            let Some(bound) = bound else { continue };
            let slope = if left { h.slope_left_of(&x) } else { h.slope_right_of(&x) };
            if slope == Rational::one() {
                continue;
            }
            let side = if left { Interval::of(bound, x.clone()) } else { Interval::of(x.clone(), bound) };
            for d in 4..4 + EPSILON_HALVINGS {
                let eps = power_of_two(d);
                let w = power_of_two(d + 3);
                let i1 = if left {
                    let u = (&x - &eps).floor_to_grid(d + 3);
                    Interval::of(u.clone(), &u + &w)
                } else {
                    let v = (&x + &eps).ceil_to_grid(d + 3);
                    Interval::of(&v - &w, v)
                };
                let image = |iv: &Interval| -> Result<Interval> { Interval::new(h.eval(iv.lo())?, h.eval(iv.hi())?) };
                let moved = image(&i1)?;
                let pad = power_of_two(d + 5);
                let i2 = Interval::new(
                    (moved.lo() - &pad).floor_to_grid(d + 5),
                    (moved.hi() + &pad).ceil_to_grid(d + 5),
                )?;
                let i3 = image(&i2)?;
                let inside = [&i1, &i2, &i3].iter().all(|iv| side.contains_strictly(iv));
                let apart = |a: &Interval, b: &Interval| a.hi() < b.lo() || b.hi() < a.lo();
                if !inside || !apart(&i1, &i2) || !apart(&i2, &i3) {
                    continue;
                }
                let g = hump(i1.lo(), i1.hi())?.compose(&hump(i2.lo(), i2.hi())?)?;
                let comm = |p: &PLMap| -> Result<PLMap> { PLMap::commutator(&g.conjugate_by(p)?, &g) };
                let new_h = comm(h)?;
                if new_h.is_identity() {
                    continue;
                }
                let context = atoms.iter().map(comm).collect::<Result<Vec<_>>>()?;
                let context: Vec<PLMap> = context.into_iter().filter(|c| !c.is_identity()).collect();
                if is_compatible(&new_h, &context).is_some() {
                    return Ok((g, new_h));
                }
            }
        }
    }
    Err(Error::SearchFailed(format!("no separating element after {EPSILON_HALVINGS} halvings")))
}
