use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exact_pl::PLMap;

/// `gen^exp` with `exp != 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Syllable<G> {
    pub gen: G,
    pub exp: i64,
}

/// A freely reduced word stored as powers of generators; adjacent syllables
/// always have different generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(bound(serialize = "G: Serialize", deserialize = "G: Deserialize<'de>"))]
pub struct PowerWord<G> {
    syllables: Vec<Syllable<G>>,
}

impl<G> Default for PowerWord<G> {
    fn default() -> Self {
        PowerWord { syllables: Vec::new() }
    }
}

impl<G: Copy + Eq> PowerWord<G> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(gen: G, exp: i64) -> Self {
        let mut w = Self::new();
        w.push(gen, exp);
        w
    }

    pub fn syllables(&self) -> &[Syllable<G>] {
        &self.syllables
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Number of letters, counting `g^3` as three.
    pub fn letter_count(&self) -> u64 {
        self.syllables.iter().map(|s| s.exp.unsigned_abs()).sum()
    }

    /// Appends `gen^exp`, merging with the last syllable and cancelling.
    pub fn push(&mut self, gen: G, exp: i64) {
        if exp == 0 {
            return;
        }
        if let Some(last) = self.syllables.last_mut() {
            if last.gen == gen {
                last.exp += exp;
                if last.exp == 0 {
                    self.syllables.pop();
                }
                return;
            }
        }
        self.syllables.push(Syllable { gen, exp });
    }

    pub fn append(&mut self, other: &PowerWord<G>) {
        for s in &other.syllables {
            self.push(s.gen, s.exp);
        }
    }

    pub fn concat(&self, other: &PowerWord<G>) -> PowerWord<G> {
        let mut w = self.clone();
        w.append(other);
        w
    }

    pub fn inverse(&self) -> PowerWord<G> {
        PowerWord {
            syllables: self.syllables.iter().rev().map(|s| Syllable { gen: s.gen, exp: -s.exp }).collect(),
        }
    }

    pub fn map_gens<H: Copy + Eq>(&self, f: impl Fn(G) -> H) -> PowerWord<H> {
        let mut w = PowerWord::new();
        for s in &self.syllables {
            w.push(f(s.gen), s.exp);
        }
        w
    }

    /// Replaces each generator by a word and reduces.
    pub fn substitute<H: Copy + Eq>(&self, f: impl Fn(G) -> PowerWord<H>) -> PowerWord<H> {
        let mut w = PowerWord::new();
        for s in &self.syllables {
            let image = f(s.gen);
            let image = if s.exp < 0 { image.inverse() } else { image };
            for _ in 0..s.exp.unsigned_abs() {
                w.append(&image);
            }
        }
        w
    }

    pub fn exponent_sum(&self, gen: G) -> i64 {
        self.syllables.iter().filter(|s| s.gen == gen).map(|s| s.exp).sum()
    }

    /// Evaluates left to right (right action) given maps for the generators.
    pub fn eval(&self, identity: &PLMap, gen_map: impl Fn(G) -> PLMap) -> Result<PLMap> {
        let mut acc = identity.clone();
        for s in &self.syllables {
            let g = gen_map(s.gen);
            let g = if s.exp < 0 { g.invert() } else { g };
            for _ in 0..s.exp.unsigned_abs() {
                acc = acc.compose(&g)?;
            }
        }
        Ok(acc)
    }
}

impl<G: fmt::Display> fmt::Display for PowerWord<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "id");
        }
        for (i, s) in self.syllables.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if s.exp == 1 {
                write!(f, "{}", s.gen)?;
            } else {
                write!(f, "{}^{}", s.gen, s.exp)?;
            }
        }
        Ok(())
    }
}
