//! Labellings of the half-integers by `a`, `b` and their inverses.
//!
//! Positions are handled internally as half-step indices `h = 2q`, so that
//! integers are even indices and half-integers odd ones.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    A,
    AInv,
    B,
    BInv,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        match self {
            Letter::A => Letter::AInv,
            Letter::AInv => Letter::A,
            Letter::B => Letter::BInv,
            Letter::BInv => Letter::B,
        }
    }

    pub fn is_a_type(self) -> bool {
        matches!(self, Letter::A | Letter::AInv)
    }

    /// `a^-1` and `b^-1` select the mirrored copy of a map.
    pub fn is_inverse(self) -> bool {
        matches!(self, Letter::AInv | Letter::BInv)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Letter::A => "a",
            Letter::AInv => "a^-1",
            Letter::B => "b",
            Letter::BInv => "b^-1",
        })
    }
}

impl FromStr for Letter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Letter> {
        match s {
            "a" => Ok(Letter::A),
            "b" => Ok(Letter::B),
            "a^-1" | "a⁻¹" | "A" => Ok(Letter::AInv),
            "b^-1" | "b⁻¹" | "B" => Ok(Letter::BInv),
            _ => Err(Error::Parse(format!("unknown label letter {s:?}"))),
        }
    }
}

impl Serialize for Letter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Letter {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Space-separated rendering, e.g. `a b^-1 a`.
pub fn format_word(w: &[Letter]) -> String {
    w.iter().map(Letter::to_string).collect::<Vec<_>>().join(" ")
}

pub fn parse_word(s: &str) -> Result<Vec<Letter>> {
    s.split_whitespace().map(str::parse).collect()
}

/// Formal inverse: reverse and invert every letter.
pub fn word_inverse(w: &[Letter]) -> Vec<Letter> {
    w.iter().rev().map(|l| l.inverse()).collect()
}

/// Odd length, `a`-letters at odd positions, `b`-letters at even ones.
pub fn is_permissible(w: &[Letter]) -> bool {
    w.len() % 2 == 1 && w.iter().enumerate().all(|(i, l)| l.is_a_type() == (i % 2 == 0))
}

/// Half-step index of a half-integer.
pub fn half_index(q: &Rational) -> Result<i64> {
    let twice = q * &Rational::int(2);
    if twice.is_integer() {
        Ok(twice.floor_i64())
    } else {
        Err(Error::NotHalfInteger(q.clone()))
    }
}

pub fn from_half_index(h: i64) -> Rational {
    Rational::new(h, 2)
}

/// The block `{k, k + 1/2, ..., k + n/2}` stored as start index `2k` and
/// `n` half-steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Block {
    pub start_h: i64,
    pub steps: u32,
}

impl Block {
    pub fn new(start: &Rational, steps: u32) -> Result<Block> {
        Ok(Block { start_h: half_index(start)?, steps })
    }

    /// Block covering half-step indices `lo..=hi`.
    pub fn from_indices(lo: i64, hi: i64) -> Block {
        assert!(lo <= hi);
        Block { start_h: lo, steps: (hi - lo) as u32 }
    }

    pub fn end_h(&self) -> i64 {
        self.start_h + self.steps as i64
    }

    pub fn len(&self) -> usize {
        self.steps as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn start(&self) -> Rational {
        from_half_index(self.start_h)
    }

    pub fn end(&self) -> Rational {
        from_half_index(self.end_h())
    }

    pub fn contains_block(&self, other: &Block) -> bool {
        self.start_h <= other.start_h && other.end_h() <= self.end_h()
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<i64> {
        self.start_h..=self.end_h()
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{} .. {}}}", self.start(), self.end())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabellingKind {
    QuasiPeriodic,
    /// Integers labelled `a`, half-integers `b`.
    PeriodicTau,
}

#[derive(Debug, Default)]
struct Cache {
    /// labels at indices `0, 1, 2, ...`
    right: Vec<Letter>,
    /// labels at indices `-1, -2, ...`
    left: Vec<Letter>,
    /// `(lo, hi)` index range of each stage block
    stages: Vec<(i64, i64)>,
}

impl Cache {
    fn get(&self, h: i64) -> Letter {
        if h >= 0 {
            self.right[h as usize]
        } else {
            self.left[(-h - 1) as usize]
        }
    }

    fn set(&mut self, h: i64, l: Letter) {
        if h >= 0 {
            debug_assert_eq!(h as usize, self.right.len());
            self.right.push(l);
        } else {
            debug_assert_eq!((-h - 1) as usize, self.left.len());
            self.left.push(l);
        }
    }

    /// Materializes the next stage.
    fn grow(&mut self) {
        let n = self.stages.len() - 1;
        let (lo, hi) = self.stages[n];
        let len = hi - lo + 1;
        if n.is_multiple_of(2) {
            // extend left of k = lo
            self.set(lo - 1, Letter::B);
            for l in 2..=len + 1 {
                let src = self.get(lo + (l - 2));
                self.set(lo - l, src.inverse());
            }
            self.stages.push((lo - len - 1, hi));
        } else {
            self.set(hi + 1, Letter::B);
            for l in 2..=len + 1 {
                let src = self.get(hi - (l - 2));
                self.set(hi + l, src.inverse());
            }
            self.stages.push((lo, hi + len + 1));
        }
    }

    fn covers(&self, lo: i64, hi: i64) -> bool {
        let (a, b) = *self.stages.last().expect("stage 0 exists");
        a <= lo && hi <= b
    }
}

#[derive(Debug)]
struct Inner {
    kind: LabellingKind,
    seed: Vec<Letter>,
    cache: RwLock<Cache>,
}

/// A labelling of the half-integers, grown lazily stage by stage. Cloning is
/// cheap and clones share the cache.
#[derive(Clone, Debug)]
pub struct Labelling {
    inner: Arc<Inner>,
}

impl Labelling {
    /// The quasi-periodic labelling grown from a permissible seed placed on
    /// `{0, 1/2, ..., (m-1)/2}`.
    pub fn from_seed(seed: &[Letter]) -> Result<Labelling> {
        if !is_permissible(seed) {
            return Err(Error::Permissibility(format_word(seed)));
        }
        let cache = Cache { right: seed.to_vec(), left: Vec::new(), stages: vec![(0, seed.len() as i64 - 1)] };
        Ok(Labelling {
            inner: Arc::new(Inner { kind: LabellingKind::QuasiPeriodic, seed: seed.to_vec(), cache: RwLock::new(cache) }),
        })
    }

    pub fn from_seed_str(seed: &str) -> Result<Labelling> {
        Labelling::from_seed(&parse_word(seed)?)
    }

    /// The periodic labelling: `a` on integers, `b` on half-integers.
    pub fn periodic_tau() -> Labelling {
        Labelling {
            inner: Arc::new(Inner {
                kind: LabellingKind::PeriodicTau,
                seed: vec![Letter::A],
                cache: RwLock::new(Cache::default()),
            }),
        }
    }

    pub fn kind(&self) -> &LabellingKind {
        &self.inner.kind
    }

    pub fn is_quasi_periodic(&self) -> bool {
        self.inner.kind == LabellingKind::QuasiPeriodic
    }

    pub fn seed(&self) -> &[Letter] {
        &self.inner.seed
    }

    fn ensure(&self, lo: i64, hi: i64) {
        if self.inner.cache.read().expect("cache lock").covers(lo, hi) {
            return;
        }
        let mut cache = self.inner.cache.write().expect("cache lock");
        while !cache.covers(lo, hi) {
            cache.grow();
        }
    }

    /// Label at half-step index `h`.
    pub fn label_h(&self, h: i64) -> Letter {
        match self.inner.kind {
            LabellingKind::PeriodicTau => {
                if h.rem_euclid(2) == 0 {
                    Letter::A
                } else {
                    Letter::B
                }
            }
            LabellingKind::QuasiPeriodic => {
                self.ensure(h, h);
                self.inner.cache.read().expect("cache lock").get(h)
            }
        }
    }

    pub fn label_at(&self, q: &Rational) -> Result<Letter> {
        Ok(self.label_h(half_index(q)?))
    }

    /// Labels at indices `lo..=hi`.
    pub fn labels_h(&self, lo: i64, hi: i64) -> Vec<Letter> {
        if lo > hi {
            return Vec::new();
        }
        match self.inner.kind {
            LabellingKind::PeriodicTau => (lo..=hi).map(|h| self.label_h(h)).collect(),
            LabellingKind::QuasiPeriodic => {
                self.ensure(lo, hi);
                let cache = self.inner.cache.read().expect("cache lock");
                (lo..=hi).map(|h| cache.get(h)).collect()
            }
        }
    }

    pub fn block_word(&self, x: &Block) -> Vec<Letter> {
        self.labels_h(x.start_h, x.end_h())
    }

    /// Stage block `B_n` (quasi-periodic labellings only).
    pub fn stage(&self, n: usize) -> Option<Block> {
        if !self.is_quasi_periodic() {
            return None;
        }
        loop {
            {
                let cache = self.inner.cache.read().expect("cache lock");
                if let Some(&(lo, hi)) = cache.stages.get(n) {
                    return Some(Block::from_indices(lo, hi));
                }
            }
            let mut cache = self.inner.cache.write().expect("cache lock");
            while cache.stages.len() <= n {
                cache.grow();
            }
        }
    }

    /// Smallest stage index whose block contains `x`.
    fn containing_stage(&self, x: &Block) -> usize {
        self.ensure(x.start_h, x.end_h());
        let cache = self.inner.cache.read().expect("cache lock");
        cache
            .stages
            .iter()
            .position(|&(lo, hi)| lo <= x.start_h && x.end_h() <= hi)
            .expect("ensured")
    }

    /// A block inside `[-bound, bound]` carrying the formal inverse of the
    /// word on `x`. Tries the mirror image written by the next stage first,
    /// then scans.
    pub fn find_inverse_block(&self, x: &Block, search_bound: i64) -> Result<Block> {
        let target = word_inverse(&self.block_word(x));
        let (lo_b, hi_b) = (-2 * search_bound, 2 * search_bound);
        if self.is_quasi_periodic() {
            let n = self.containing_stage(x);
            let stage = self.stage(n).expect("quasi-periodic");
            let (a, b) = if n.is_multiple_of(2) {
                let k = stage.start_h;
                (2 * k - x.end_h() - 2, 2 * k - x.start_h - 2)
            } else {
                let k = stage.end_h();
                (2 * k - x.end_h() + 2, 2 * k - x.start_h + 2)
            };
            if lo_b <= a && b <= hi_b {
                let y = Block::from_indices(a, b);
                if self.block_word(&y) == target {
                    return Ok(y);
                }
            }
        }
        let len = x.steps as i64;
        if hi_b - lo_b >= len {
            let labels = self.labels_h(lo_b, hi_b);
            for start in 0..=(labels.len() - target.len()) {
                if labels[start..start + target.len()] == target[..] {
                    return Ok(Block::from_indices(lo_b + start as i64, lo_b + start as i64 + len));
                }
            }
        }
        Err(Error::SearchFailed(format!(
            "no block with word {} inside [-{search_bound}, {search_bound}]",
            format_word(&target)
        )))
    }

    /// Smallest block size `n` such that every block of `n` consecutive
    /// positions inside `[-range, range]` contains the word of `x`.
    /// Window-verified only.
    pub fn recurrence_radius(&self, x: &Block, test_range: i64) -> Result<usize> {
        let w = self.block_word(x);
        let labels = self.labels_h(-2 * test_range, 2 * test_range);
        let total = labels.len();
        let len = w.len();
        if total < len {
            return Err(Error::SearchFailed("test range shorter than the block".into()));
        }
        // next_occ[t]: first occurrence start >= t
        let mut next_occ = vec![usize::MAX; total + 1];
        for t in (0..total).rev() {
            next_occ[t] = if t + len <= total && labels[t..t + len] == w[..] { t } else { next_occ[t + 1] };
        }
        // need[t]: size a block starting at t must have to contain an occurrence
        let mut prefix_max = Vec::with_capacity(total);
        let mut m = 0usize;
        for (t, &s) in next_occ.iter().take(total).enumerate() {
            let need = if s == usize::MAX { usize::MAX } else { s + len - t };
            m = m.max(need);
            prefix_max.push(m);
        }
        for n in len..=total {
            if prefix_max[total - n] <= n {
                return Ok(n);
            }
        }
        Err(Error::SearchFailed(format!(
            "word {} does not recur inside [-{test_range}, {test_range}]",
            format_word(&w)
        )))
    }

    /// Distinct words of radius `radius_steps` centred at integers (or at
    /// half-integers) inside `[-range, range]`, each with the centre of
    /// smallest absolute value carrying it.
    pub fn window_classes(&self, radius_steps: u32, range: i64, centers: Centers) -> WindowClasses {
        let collect = |range: i64| {
            let mut classes: BTreeMap<Vec<Letter>, WindowClass> = BTreeMap::new();
            let r = radius_steps as i64;
            let labels = self.labels_h(-2 * range - r, 2 * range + r);
            let offset = 2 * range + r;
            for c in -2 * range..=2 * range {
                if c.rem_euclid(2) != centers.parity() {
                    continue;
                }
                let i = (c + offset) as usize;
                let word = labels[i - r as usize..=i + r as usize].to_vec();
                let entry = classes.entry(word).or_insert(WindowClass { count: 0, representative_h: c });
                entry.count += 1;
                if c.abs() < entry.representative_h.abs() {
                    entry.representative_h = c;
                }
            }
            classes
        };
        let classes = collect(range);
        let doubled = collect(2 * range.max(1));
        let stabilized = classes.keys().eq(doubled.keys());
        WindowClasses { radius_steps, range, classes, stabilized }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Centers {
    Integers,
    HalfIntegers,
}

impl Centers {
    fn parity(self) -> i64 {
        match self {
            Centers::Integers => 0,
            Centers::HalfIntegers => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WindowClass {
    /// number of centres carrying the word
    pub count: usize,
    /// half-step index of a centre carrying it, closest to 0
    pub representative_h: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowClasses {
    pub radius_steps: u32,
    pub range: i64,
    pub classes: BTreeMap<Vec<Letter>, WindowClass>,
    /// the class set is unchanged when the range doubles
    pub stabilized: bool,
}

/// JSON export of a labelling window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabellingExport {
    pub seed: Vec<Letter>,
    pub range: i64,
    pub labels: BTreeMap<String, Letter>,
}

impl LabellingExport {
    pub fn new(rho: &Labelling, range: i64) -> LabellingExport {
        let labels = (-2 * range..=2 * range)
            .map(|h| (from_half_index(h).to_string(), rho.label_h(h)))
            .collect();
        LabellingExport { seed: rho.seed().to_vec(), range, labels }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn traced_stages_for_seed_a() {
        let rho = Labelling::from_seed_str("a").unwrap();
        let expect = [
            (q(-1, 1), Letter::AInv),
            (q(-1, 2), Letter::B),
            (q(0, 1), Letter::A),
            (q(1, 2), Letter::B),
            (q(1, 1), Letter::AInv),
            (q(3, 2), Letter::BInv),
            (q(2, 1), Letter::A),
        ];
        for (p, l) in expect {
            assert_eq!(rho.label_at(&p).unwrap(), l, "at {p}");
        }
        assert_eq!(rho.stage(1), Some(Block::from_indices(-2, 0)));
        assert_eq!(rho.stage(2), Some(Block::from_indices(-2, 4)));
    }

    #[test]
    fn rejects_bad_seeds_and_points() {
        assert!(Labelling::from_seed_str("a b").is_err());
        assert!(Labelling::from_seed_str("b").is_err());
        assert!(Labelling::from_seed_str("a a a").is_err());
        let rho = Labelling::from_seed_str("a").unwrap();
        assert!(matches!(rho.label_at(&q(1, 3)), Err(Error::NotHalfInteger(_))));
    }
}
