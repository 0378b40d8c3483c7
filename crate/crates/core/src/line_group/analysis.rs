use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_pl::{Interval, PLMap};
use crate::labelling::{format_word, from_half_index, Block, Centers, Letter};
use crate::line_group::elem::Elem;
use crate::line_group::group::LineGroup;
use crate::rational::Rational;

const MIN_CLASS_RANGE: i64 = 32;
const MAX_CLASS_RANGE: i64 = 1 << 13;
const CLASS_RETRIES: usize = 6;

/// Summary of a class-mode computation: one representative per labelling
/// window class of the given radius.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassSummary {
    pub radius_steps: u32,
    pub range: i64,
    pub class_count: usize,
    /// the class set did not change when the scanned range doubled
    pub stabilized: bool,
}

/// Unit-block restrictions of an element, one per window class.
#[derive(Clone, Debug)]
pub struct ClassScan {
    pub summary: ClassSummary,
    pub entries: Vec<ClassEntry>,
}

#[derive(Clone, Debug)]
pub struct ClassEntry {
    pub word: Vec<Letter>,
    pub centre_h: i64,
    pub count: usize,
    /// restriction to the unit block centred at the representative,
    /// translated so the block is `[0, 1]`
    pub block: PLMap,
}

/// Outcome of a fixed-point search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FixedPoint {
    Point { at: Rational },
    Interval { at: Interval },
}

impl FixedPoint {
    pub fn point(&self) -> Rational {
        match self {
            FixedPoint::Point { at } => at.clone(),
            FixedPoint::Interval { at } => at.lo().clone(),
        }
    }
}

/// Membership certificate for the subgroup fixing every integer with no
/// integer transition point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZCertificate {
    pub window: (i64, i64),
    pub in_z: bool,
    pub witness: Option<i64>,
    pub classes: Option<ClassSummary>,
}

impl ZCertificate {
    /// Window and (when computed) every class passed.
    pub fn holds(&self) -> bool {
        self.in_z
    }

    pub fn require(&self) -> Result<()> {
        match self.witness {
            None => Ok(()),
            Some(w) => Err(Error::NotInZ { witness: w }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Atom {
    pub map: PLMap,
    /// flags inside the window
    pub flags: Vec<Rational>,
    /// window words (class mode) whose centre carries this atom
    pub class_words: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomReport {
    pub window: (i64, i64),
    pub atoms: Vec<Atom>,
    pub classes: Option<ClassSummary>,
}

impl AtomReport {
    pub fn flags_of(&self, map: &PLMap) -> Vec<Rational> {
        self.atoms.iter().find(|a| &a.map == map).map(|a| a.flags.clone()).unwrap_or_default()
    }

    /// The atom flagged at `q`, if any.
    pub fn atom_at(&self, q: &Rational) -> Option<&Atom> {
        self.atoms.iter().find(|a| a.flags.contains(q))
    }

    pub fn maps(&self) -> Vec<PLMap> {
        self.atoms.iter().map(|a| a.map.clone()).collect()
    }
}

fn unit_block(centre_h: i64) -> Interval {
    let c = from_half_index(centre_h);
    Interval::of(&c - &Rational::half(), &c + &Rational::half())
}

/// `f` fixes `x` and is the identity on the segments on both sides of it.
fn locally_identity_at(f: &PLMap, x: &Rational) -> bool {
    f.eval(x).is_ok_and(|y| &y == x)
        && (x == f.lo() || f.slope_left_of(x) == Rational::one())
        && (x == f.hi() || f.slope_right_of(x) == Rational::one())
}

impl LineGroup {
    fn block_tracked(&self, e: &Elem, centre_h: i64) -> (PLMap, i64) {
        let iv = unit_block(centre_h);
        let (m, labels) = self.restrict_tracked(e, &iv);
        let radius = labels.map_or(0, |(lo, hi)| (centre_h - lo).max(hi - centre_h).max(0));
        (m.translate(&-iv.lo()), radius)
    }

    /// One unit-block restriction per labelling window class. The radius
    /// is grown until every representative's evaluation stays inside it, so
    /// equal class words force equal restrictions.
    pub fn class_scan(&self, e: &Elem, centers: Centers, window: (i64, i64)) -> Result<ClassScan> {
        if !e.is_uniform() {
            return Err(Error::Config("class mode needs an element of the full generator group".into()));
        }
        let parity = match centers {
            Centers::Integers => 0,
            Centers::HalfIntegers => 1,
        };
        let mut radius = (2 * window.0..=2 * window.1)
            .filter(|h| h.rem_euclid(2) == parity)
            .map(|h| self.block_tracked(e, h).1)
            .max()
            .unwrap_or(0)
            .max(1);
        'retry: for _ in 0..CLASS_RETRIES {
            let mut range = MIN_CLASS_RANGE.max(4 * radius);
            let mut wc = self.labelling().window_classes(radius as u32, range, centers);
            while !wc.stabilized && range < MAX_CLASS_RANGE {
                range *= 2;
                wc = self.labelling().window_classes(radius as u32, range, centers);
            }
            let mut entries = Vec::with_capacity(wc.classes.len());
            for (word, class) in &wc.classes {
                let (block, r) = self.block_tracked(e, class.representative_h);
                if r > radius {
                    radius = r;
                    continue 'retry;
                }
                entries.push(ClassEntry { word: word.clone(), centre_h: class.representative_h, count: class.count, block });
            }
            let summary =
                ClassSummary { radius_steps: radius as u32, range, class_count: entries.len(), stabilized: wc.stabilized };
            return Ok(ClassScan { summary, entries });
        }
        Err(Error::SearchFailed(format!("class radius did not settle (last radius {radius} half-steps)")))
    }

    /// `{ frac(x . e) : x integer in [lo, hi] }`.
    pub fn phi_image_set(&self, e: &Elem, lo: i64, hi: i64) -> BTreeSet<Rational> {
        (lo..=hi).map(|n| self.eval_point(e, &Rational::int(n)).fract()).collect()
    }

    /// Class-mode version of [`LineGroup::phi_image_set`]: one
    /// representative integer per window class.
    pub fn phi_image_classes(&self, e: &Elem, window: (i64, i64)) -> Result<(BTreeSet<Rational>, ClassSummary)> {
        let scan = self.class_scan(e, Centers::Integers, window)?;
        let half = Rational::half();
        let set = scan.entries.iter().map(|c| (c.block.eval(&half).expect("centre in block") - &half).fract()).collect();
        Ok((set, scan.summary))
    }

    /// Checks that every integer of `[lo, hi]` is fixed with the identity on
    /// both sides; for elements of the full generator group also every
    /// window class of integer centres.
    pub fn in_z(&self, e: &Elem, lo: i64, hi: i64) -> Result<ZCertificate> {
        let half = Rational::half();
        for n in lo..=hi {
            let (block, _) = self.block_tracked(e, 2 * n);
            if !locally_identity_at(&block, &half) {
                return Ok(ZCertificate { window: (lo, hi), in_z: false, witness: Some(n), classes: None });
            }
        }
        if !e.is_uniform() {
            return Ok(ZCertificate { window: (lo, hi), in_z: true, witness: None, classes: None });
        }
        let scan = self.class_scan(e, Centers::Integers, (lo, hi))?;
        let witness = scan.entries.iter().find(|c| !locally_identity_at(&c.block, &half)).map(|c| c.centre_h / 2);
        Ok(ZCertificate { window: (lo, hi), in_z: witness.is_none(), witness, classes: Some(scan.summary) })
    }

    /// `kappa_q(e)` for the half-integer `q = n + 1/2`, untwisted when the
    /// label at `q` is an inverse letter.
    pub fn kappa(&self, e: &Elem, n: i64) -> PLMap {
        let (block, _) = self.block_tracked(e, 2 * n + 1);
        self.untwist(block, 2 * n + 1)
    }

    fn untwist(&self, block: PLMap, centre_h: i64) -> PLMap {
        if self.labelling().label_h(centre_h).is_inverse() {
            block.iota_conjugate().expect("unit block map")
        } else {
            block
        }
    }

    /// Atoms and flags of an element fixing the integers, on the window and
    /// (for full-generator elements) over all window classes.
    pub fn atoms(&self, e: &Elem, lo: i64, hi: i64) -> Result<AtomReport> {
        let cert = self.in_z(e, lo, hi)?;
        cert.require()?;
        let mut atoms: Vec<Atom> = Vec::new();
        let add = |atoms: &mut Vec<Atom>, map: PLMap| -> usize {
            match atoms.iter().position(|a| a.map == map) {
                Some(i) => i,
                None => {
                    atoms.push(Atom { map, flags: Vec::new(), class_words: Vec::new() });
                    atoms.len() - 1
                }
            }
        };
        for n in lo..hi {
            let k = self.kappa(e, n);
            if !k.is_identity() {
                let i = add(&mut atoms, k);
                atoms[i].flags.push(from_half_index(2 * n + 1));
            }
        }
        let mut classes = None;
        if e.is_uniform() {
            let scan = self.class_scan(e, Centers::HalfIntegers, (lo, hi))?;
            for c in &scan.entries {
                let k = self.untwist(c.block.clone(), c.centre_h);
                if !k.is_identity() {
                    let i = add(&mut atoms, k);
                    atoms[i].class_words.push(format_word(&c.word));
                }
            }
            classes = Some(scan.summary);
        }
        Ok(AtomReport { window: (lo, hi), atoms, classes })
    }

    /// A fixed point of `e`: first searched on `[-(k+1), k+1]` for a word of
    /// `k` letters; otherwise an integer moved one way is paired with the
    /// mirror integer of an inverse label block, which is moved the other
    /// way, and a fixed point is extracted between them.
    pub fn find_fixed_point(&self, e: &Elem, search_bound: i64) -> Result<FixedPoint> {
        if e.is_trivially_identity() {
            return Ok(FixedPoint::Point { at: Rational::zero() });
        }
        let r = e.letter_count() as i64 + 1;
        let window = self.restrict(e, &Interval::ints(-r, r)?);
        if let Some(p) = nearest_fixed(&window) {
            return Ok(p);
        }
        self.mirror_fixed_point(e, search_bound)
    }

    /// The mirror step of [`LineGroup::find_fixed_point`] on its own: needs
    /// `0` to be moved by `e`.
    pub fn mirror_fixed_point(&self, e: &Elem, search_bound: i64) -> Result<FixedPoint> {
        let r = e.letter_count() as i64 + 1;
        let x = Rational::zero();
        let y = self.eval_point(e, &x);
        if y == x {
            return Ok(FixedPoint::Point { at: x });
        }
        let moved_right = y > x;
        let block = Block::from_indices(-2 * r, 2 * r);
        let mirror = self.labelling().find_inverse_block(&block, search_bound)?;
        // t -> s - t carries the block onto its mirror with inverted labels
        let s = (mirror.start_h + block.end_h()) / 2;
        let x1 = Rational::int(s);
        let y1 = self.eval_point(e, &x1);
        if (y1 < x1) != moved_right {
            return Err(Error::Verification(format!("mirror point {x1} is not moved the opposite way")));
        }
        let (a, b) = if s < 0 { (s, 0) } else { (0, s) };
        let between = self.restrict(e, &Interval::ints(a, b)?);
        nearest_fixed(&between).ok_or_else(|| Error::Verification("no sign change between mirror points".into()))
    }
}

/// The fixed point or fixed interval of `f` closest to 0.
fn nearest_fixed(f: &PLMap) -> Option<FixedPoint> {
    let set = f.fixed_points();
    let dist = |x: &Rational| x.abs();
    let mut best: Option<(Rational, FixedPoint)> = None;
    for p in set.isolated {
        let d = dist(&p);
        if best.as_ref().is_none_or(|(bd, _)| &d < bd) {
            best = Some((d, FixedPoint::Point { at: p }));
        }
    }
    for iv in set.fixed_intervals {
        let d = if iv.contains(&Rational::zero()) { Rational::zero() } else { Rational::min(&dist(iv.lo()), &dist(iv.hi())) };
        if best.as_ref().is_none_or(|(bd, _)| &d < bd) {
            best = Some((d, FixedPoint::Interval { at: iv }));
        }
    }
    best.map(|(_, p)| p)
}
