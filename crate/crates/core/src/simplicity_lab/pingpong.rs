use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_pl::{Interval, PLMap};
use crate::line_group::{Elem, LineGroup, Selection};
use crate::rational::{q, Rational};
use crate::thompson::{hump, is_in_f_prime};

use super::Check;

const MAX_POWER: i64 = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PingPongReport {
    /// the power of the hump on `[1/16, 15/16]` that was needed
    pub power: i64,
    pub f: PLMap,
    pub window: (i64, i64),
    pub words_checked: usize,
    pub identity_words: Vec<String>,
    pub checks: Vec<Check>,
}

impl PingPongReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed) && self.identity_words.is_empty()
    }
}

/// Moves every point of `(1/16, 15/16)` to the right, supported exactly
/// there, and pushes `[6/16, 10/16]` into `(14/16, 15/16)` (forwards) and
/// `(1/16, 2/16)` (backwards). Returns the map and the power used.
pub fn pingpong_element() -> Result<(PLMap, i64)> {
    let base = hump(&q(1, 16), &q(15, 16))?;
    let middle = Interval::of(q(6, 16), q(10, 16));
    let (fwd, bwd) = (Interval::of(q(14, 16), q(15, 16)), Interval::of(q(1, 16), q(2, 16)));
    let mut f = base.clone();
    for p in 1..=MAX_POWER {
        if maps_into(&f, &middle, &fwd)? && maps_into(&f.invert(), &middle, &bwd)? {
            return Ok((f, p));
        }
        f = f.compose(&base)?;
    }
    Err(Error::SearchFailed(format!("no power up to {MAX_POWER} satisfies the displacement conditions")))
}

/// `iv . f` lies in the open interior of `target`.
fn maps_into(f: &PLMap, iv: &Interval, target: &Interval) -> Result<bool> {
    let image = Interval::new(f.eval(iv.lo())?, f.eval(iv.hi())?)?;
    Ok(target.contains_strictly(&image))
}

/// `iv . f` lies in `target` (closed).
fn image_within(m: &PLMap, iv: &Interval, target: &Interval) -> Result<bool> {
    Ok(target.contains(&m.eval(iv.lo())?) && target.contains(&m.eval(iv.hi())?))
}

fn table_intervals(centres_h: impl Iterator<Item = i64>) -> Vec<Interval> {
    let r = q(2, 16);
    centres_h
        .map(|h| {
            let c = Rational::new(h, 2);
            Interval::of(&c - &r, &c + &r)
        })
        .collect()
}

/// Builds the ping-pong element, checks both displacement conditions, the
/// table on the window, and that every reduced word of length at most
/// `max_len` in `lambda(f)^(+-1)`, `pi(f)^(+-1)` acts nontrivially on the
/// window.
pub fn pingpong_table_check(group: &LineGroup, lo: i64, hi: i64, max_len: usize) -> Result<PingPongReport> {
    let (f, power) = pingpong_element()?;
    let mut checks = Vec::new();
    let middle = Interval::of(q(6, 16), q(10, 16));
    checks.push(Check::new(
        "forward displacement",
        maps_into(&f, &middle, &Interval::of(q(14, 16), q(15, 16)))?,
        format!("[6/16, 10/16] . f^{power} inside (14/16, 15/16)"),
    ));
    checks.push(Check::new(
        "backward displacement",
        maps_into(&f.invert(), &middle, &Interval::of(q(1, 16), q(2, 16)))?,
        format!("[6/16, 10/16] . f^-{power} inside (1/16, 2/16)"),
    ));
    checks.push(Check::new("f in F'", is_in_f_prime(&f), String::new()));
    let support = f.support()?;
    checks.push(Check::new(
        "support",
        support == vec![Interval::of(q(1, 16), q(15, 16))],
        format!("{support:?}"),
    ));

    let lam = group.lambda(&f, Selection::All)?;
    let pi = group.pi(&f, Selection::All)?;
    // table sets: neighbourhoods of integers (lambda side) and half-integers (pi side)
    let near_int = table_intervals((2 * lo..=2 * hi).filter(|h| h % 2 == 0));
    let near_half = table_intervals((2 * lo..2 * hi).filter(|h| h.rem_euclid(2) == 1));
    let disjoint = near_int.iter().all(|a| near_half.iter().all(|b| !a.overlaps_open(b) && a.hi() != b.lo()));
    checks.push(Check::new("table sets disjoint", disjoint, String::new()));
    let mut table_ok = true;
    for (e, from, to) in [(&lam, &near_half, &near_int), (&pi, &near_int, &near_half)] {
        for sign in [false, true] {
            let e = if sign { e.inverse() } else { e.clone() };
            for iv in from.iter().filter(|iv| iv.lo() > &Rational::int(lo) && iv.hi() < &Rational::int(hi)) {
                let m = group.restrict(&e, iv);
                let hit = to.iter().any(|t| image_within(&m, iv, t).unwrap_or(false));
                table_ok &= hit;
            }
        }
    }
    checks.push(Check::new("ping-pong table", table_ok, "each letter maps the other table set into its own".into()));

    let window = Interval::ints(lo, hi)?;
    let letters = [lam.clone(), lam.inverse(), pi.clone(), pi.inverse()];
    let names = ["L", "L^-1", "P", "P^-1"];
    let mut identity_words = Vec::new();
    let mut count = 0usize;
    let mut stack: Vec<(Vec<usize>, PLMap)> = vec![(Vec::new(), PLMap::identity(&window))];
    while let Some((word, map)) = stack.pop() {
        if !word.is_empty() {
            count += 1;
            if map.is_identity() {
                identity_words.push(word.iter().map(|&i| names[i]).collect::<Vec<_>>().join(" "));
            }
        }
        if word.len() == max_len {
            continue;
        }
        for (i, letter) in letters.iter().enumerate() {
            if word.last().is_some_and(|&last| last ^ 1 == i) {
                continue;
            }
            let step = group.restrict(letter, &map.range());
            let mut next = word.clone();
            next.push(i);
            stack.push((next, map.compose(&step)?));
        }
    }
    Ok(PingPongReport { power, f, window: (lo, hi), words_checked: count, identity_words, checks })
}

/// `lambda(f)` and `pi(f)` for the ping-pong element.
pub fn pingpong_generators(group: &LineGroup) -> Result<(Elem, Elem)> {
    let (f, _) = pingpong_element()?;
    Ok((group.lambda(&f, Selection::All)?, group.pi(&f, Selection::All)?))
}
