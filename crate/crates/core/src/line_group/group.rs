use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_pl::{Interval, PLMap};
use crate::labelling::Labelling;
use crate::line_group::elem::{Elem, GlueKind, GluedGen, Node, Selection};
use crate::line_group::word::{GroupWord, LineGen};
use crate::rational::Rational;
use crate::thompson::require_h;

type MemoKey = (u64, bool, Rational, Rational);

const MEMO_LIMIT: usize = 400_000;

/// A window restriction and the half-step range of the labels it consulted.
type Evaluated = (Arc<PLMap>, Option<(i64, i64)>);

fn merge_labels(a: Option<(i64, i64)>, b: Option<(i64, i64)>) -> Option<(i64, i64)> {
    match (a, b) {
        (Some((a0, a1)), Some((b0, b1))) => Some((a0.min(b0), a1.max(b1))),
        (x, None) | (None, x) => x,
    }
}

/// The exact restriction of a line homeomorphism to an integer window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowMap {
    pub window: Interval,
    pub map: PLMap,
    /// how far beyond the window (in units) labels may be consulted
    pub margin: Rational,
}

/// Evaluation context: a labelling, the named generators and a memo of
/// window restrictions shared by all elements.
pub struct LineGroup {
    rho: Labelling,
    gens: BTreeMap<LineGen, Elem>,
    memo: Mutex<HashMap<MemoKey, Evaluated>>,
}

impl std::fmt::Debug for LineGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LineGroup").field("rho", &self.rho).finish_non_exhaustive()
    }
}

fn offset(kind: GlueKind) -> Rational {
    match kind {
        GlueKind::Zeta => Rational::zero(),
        GlueKind::Chi => Rational::half(),
    }
}

/// Block numbers `n` whose block `[n - o, n + 1 - o]` meets `(c, d)`.
fn block_range(kind: GlueKind, c: &Rational, d: &Rational) -> (i64, i64) {
    let o = offset(kind);
    let first = (c + &o).floor_i64();
    let last = (d + &o).ceil_i64() - 1;
    (first, last.max(first))
}

impl LineGroup {
    pub fn new(rho: Labelling) -> LineGroup {
        let mut gens = BTreeMap::new();
        for g in LineGen::BASIC {
            let (kind, nu) = match g {
                LineGen::Zeta(nu) => (GlueKind::Zeta, nu),
                LineGen::Chi(nu) => (GlueKind::Chi, nu),
                _ => unreachable!(),
            };
            let glued = GluedGen::new(kind, g.to_string(), nu.map().clone(), Selection::All).expect("nu maps fix 0, 1");
            gens.insert(g, Elem::gen(Arc::new(glued)));
        }
        LineGroup { rho, gens, memo: Mutex::new(HashMap::new()) }
    }

    /// Adds `g` and `w`: copies of `xi` glued like the `z` and `x` letters.
    pub fn with_extension(rho: Labelling, xi: &PLMap) -> Result<LineGroup> {
        let mut group = LineGroup::new(rho);
        let g = GluedGen::new(GlueKind::Zeta, "g", xi.clone(), Selection::All)?;
        let w = GluedGen::new(GlueKind::Chi, "w", xi.clone(), Selection::All)?;
        group.gens.insert(LineGen::Gamma, Elem::gen(Arc::new(g)));
        group.gens.insert(LineGen::Omega, Elem::gen(Arc::new(w)));
        Ok(group)
    }

    pub fn labelling(&self) -> &Labelling {
        &self.rho
    }

    pub fn generator(&self, g: LineGen) -> Result<Elem> {
        self.gens
            .get(&g)
            .cloned()
            .ok_or_else(|| Error::Config(format!("generator {g} needs an extension configuration")))
    }

    pub fn elem(&self, w: &GroupWord) -> Result<Elem> {
        let mut factors = Vec::with_capacity(w.letters.len());
        for (g, e) in &w.letters {
            factors.push(self.generator(*g)?.pow(*e));
        }
        Ok(Elem::product(factors))
    }

    pub fn parse(&self, word: &str) -> Result<Elem> {
        self.elem(&word.parse()?)
    }

    /// `lambda_X(h)`: copies of `h` on the blocks `[n, n+1]` with `n + 1/2` selected.
    pub fn lambda(&self, h: &PLMap, selection: Selection) -> Result<Elem> {
        require_h(h)?;
        self.glued(GlueKind::Zeta, "lambda", h, selection)
    }

    /// `pi_X(h)`: copies of `h` on the blocks `[n - 1/2, n + 1/2]` with `n` selected.
    pub fn pi(&self, h: &PLMap, selection: Selection) -> Result<Elem> {
        require_h(h)?;
        self.glued(GlueKind::Chi, "pi", h, selection)
    }

    /// Glues an arbitrary endpoint-fixing map of `[0, 1]`.
    pub fn glued(&self, kind: GlueKind, name: &str, base: &PLMap, selection: Selection) -> Result<Elem> {
        if base.is_identity() {
            return Ok(Elem::identity());
        }
        Ok(Elem::gen(Arc::new(GluedGen::new(kind, name, base.clone(), selection)?)))
    }

    fn glued_restrict(&self, g: &GluedGen, inverted: bool, c: &Rational, d: &Rational) -> PLMap {
        let o = offset(g.kind);
        let (first, last) = block_range(g.kind, c, d);
        let mut nodes: Vec<(Rational, Rational)> = vec![(c.clone(), c.clone())];
        for n in first..=last {
            let key = g.kind.key_index(n);
            let shift = Rational::int(n) - &o;
            let end = &shift + &Rational::one();
            let a = Rational::max(c, &shift);
            let b = Rational::min(d, &end);
            if a >= b {
                continue;
            }
            if !g.selection.contains(key) {
                nodes.push((b.clone(), b));
                continue;
            }
            let mirrored = self.rho.label_h(key).is_inverse();
            let base = g.variant(mirrored, inverted);
            let ua = &a - &shift;
            let ub = &b - &shift;
            if nodes.last().map(|n| &n.0) == Some(&a) {
                nodes.pop();
            }
            nodes.push((a.clone(), &base.eval_unchecked(&ua) + &shift));
            for (x, y) in base.nodes() {
                if &ua < x && x < &ub {
                    nodes.push((x + &shift, y + &shift));
                }
            }
            nodes.push((b.clone(), &base.eval_unchecked(&ub) + &shift));
        }
        PLMap::canonical(nodes)
    }

    fn restrict_rec(&self, e: &Elem, outer_inv: bool, c: &Rational, d: &Rational) -> Evaluated {
        let inv = outer_inv ^ e.inv;
        let key = (e.inner.id, inv, c.clone(), d.clone());
        if let Some(m) = self.memo.lock().expect("memo lock").get(&key) {
            return m.clone();
        }
        let out = match &e.inner.node {
            Node::Identity => (Arc::new(PLMap::identity(&Interval::of(c.clone(), d.clone()))), None),
            Node::Gen(g) => {
                let (first, last) = block_range(g.kind, c, d);
                let labels = Some((g.kind.key_index(first), g.kind.key_index(last)));
                (Arc::new(self.glued_restrict(g, inv, c, d)), labels)
            }
            Node::Product(children) => {
                let mut acc: Option<PLMap> = None;
                let mut labels = None;
                let (mut lo, mut hi) = (c.clone(), d.clone());
                let mut step = |child: &Elem| {
                    let (m, l) = self.restrict_rec(child, inv, &lo, &hi);
                    labels = merge_labels(labels, l);
                    let r = m.range();
                    lo = r.lo().clone();
                    hi = r.hi().clone();
                    acc = Some(match acc.take() {
                        None => (*m).clone(),
                        Some(a) => a.compose_unchecked(&m),
                    });
                };
                if inv {
                    children.iter().rev().for_each(&mut step);
                } else {
                    children.iter().for_each(&mut step);
                }
                (Arc::new(acc.expect("products are nonempty")), labels)
            }
        };
        let mut memo = self.memo.lock().expect("memo lock");
        if memo.len() > MEMO_LIMIT {
            memo.clear();
        }
        memo.insert(key, out.clone());
        out
    }

    /// Exact restriction of `e` to `iv` (the range is the image of `iv`).
    pub fn restrict(&self, e: &Elem, iv: &Interval) -> PLMap {
        (*self.restrict_rec(e, false, iv.lo(), iv.hi()).0).clone()
    }

    pub fn window_map(&self, e: &Elem, lo: i64, hi: i64) -> Result<WindowMap> {
        let window = Interval::ints(lo, hi)?;
        let (map, labels) = self.restrict_tracked(e, &window);
        let (dlo, dhi) = labels.unwrap_or((2 * lo, 2 * hi));
        let margin = Rational::max(
            &(Rational::int(lo) - Rational::new(dlo, 2)),
            &(Rational::new(dhi, 2) - Rational::int(hi)),
        );
        Ok(WindowMap { window, map, margin: Rational::max(&margin, &Rational::zero()) })
    }

    pub fn eval_point(&self, e: &Elem, x: &Rational) -> Rational {
        let mut x = x.clone();
        e.for_each_letter(&mut |g, inv| {
            let o = offset(g.kind);
            let n = (&x + &o).floor_i64();
            let shift = Rational::int(n) - &o;
            if x == shift || !g.selection.contains(g.kind.key_index(n)) {
                return;
            }
            let mirrored = self.rho.label_h(g.kind.key_index(n)).is_inverse();
            let u = &x - &shift;
            x = &g.variant(mirrored, inv).eval_unchecked(&u) + &shift;
        });
        x
    }

    /// Half-step index range of every label consulted while evaluating `e`
    /// on `iv` (`None` when no label is consulted).
    pub fn dependency(&self, e: &Elem, iv: &Interval) -> Option<(i64, i64)> {
        self.restrict_rec(e, false, iv.lo(), iv.hi()).1
    }

    /// The restriction together with its consulted label range.
    pub fn restrict_tracked(&self, e: &Elem, iv: &Interval) -> (PLMap, Option<(i64, i64)>) {
        let (m, l) = self.restrict_rec(e, false, iv.lo(), iv.hi());
        ((*m).clone(), l)
    }

    /// Restriction of a generator to its block with index `n`:
    /// `[n, n+1]` for `z` letters, `[n - 1/2, n + 1/2]` for `x` letters.
    pub fn generator_restriction(&self, g: LineGen, n: i64) -> Result<PLMap> {
        let kind = match g {
            LineGen::Zeta(_) | LineGen::Gamma => GlueKind::Zeta,
            LineGen::Chi(_) | LineGen::Omega => GlueKind::Chi,
        };
        let lo = Rational::int(n) - offset(kind);
        let hi = &lo + &Rational::one();
        Ok(self.restrict(&self.generator(g)?, &Interval::of(lo, hi)))
    }

    fn preimage(&self, e: &Elem, kind: GlueKind, lo: i64, hi: i64) -> Result<PLMap> {
        let o = offset(kind);
        let mut found: Option<PLMap> = None;
        let (first, last) = match kind {
            GlueKind::Zeta => (lo, hi - 1),
            GlueKind::Chi => (lo + 1, hi - 1),
        };
        if first > last {
            return Err(Error::Config("window too small for a preimage".into()));
        }
        for n in first..=last {
            let shift = Rational::int(n) - &o;
            let block = Interval::of(shift.clone(), &shift + &Rational::one());
            let m = self.restrict(e, &block);
            if m.range() != block {
                return Err(Error::NotInGroup {
                    group: if kind == GlueKind::Zeta { "lambda(H)" } else { "pi(H)" },
                    reason: format!("block {block} is not invariant"),
                });
            }
            let unit = m.translate(&-&shift);
            let unit = if self.rho.label_h(kind.key_index(n)).is_inverse() { unit.iota_conjugate()? } else { unit };
            match &found {
                None => found = Some(unit),
                Some(prev) if prev == &unit => {}
                Some(_) => {
                    return Err(Error::NotInGroup {
                        group: if kind == GlueKind::Zeta { "lambda(H)" } else { "pi(H)" },
                        reason: format!("block {block} carries a different map"),
                    })
                }
            }
        }
        let h = found.expect("nonempty block range");
        require_h(&h)?;
        Ok(h)
    }

    /// `lambda^-1(e)`, window-verified on `[lo, hi]`.
    pub fn lambda_preimage(&self, e: &Elem, lo: i64, hi: i64) -> Result<PLMap> {
        self.preimage(e, GlueKind::Zeta, lo, hi)
    }

    /// `pi^-1(e)`, window-verified on `[lo, hi]`.
    pub fn pi_preimage(&self, e: &Elem, lo: i64, hi: i64) -> Result<PLMap> {
        self.preimage(e, GlueKind::Chi, lo, hi)
    }

    /// `lambda(h)` written in the `z` letters through a `nu` factorization of `h`.
    pub fn lambda_word(&self, h: &PLMap) -> Result<GroupWord> {
        let w = crate::thompson::nu_factorization(h)?;
        Ok(GroupWord::new(w.syllables().iter().map(|s| (LineGen::Zeta(s.gen), s.exp)).collect()))
    }

    pub fn pi_word(&self, h: &PLMap) -> Result<GroupWord> {
        let w = crate::thompson::nu_factorization(h)?;
        Ok(GroupWord::new(w.syllables().iter().map(|s| (LineGen::Chi(s.gen), s.exp)).collect()))
    }

    /// Maps are equal on `[lo, hi]`.
    pub fn equal_on(&self, a: &Elem, b: &Elem, lo: i64, hi: i64) -> Result<bool> {
        let w = Interval::ints(lo, hi)?;
        Ok(self.restrict(a, &w) == self.restrict(b, &w))
    }

    pub fn is_identity_on(&self, e: &Elem, lo: i64, hi: i64) -> Result<bool> {
        Ok(self.restrict(e, &Interval::ints(lo, hi)?).is_identity())
    }

    pub fn clear_memo(&self) {
        self.memo.lock().expect("memo lock").clear();
    }
}

/// The map `t -> f(t + 1/2) - 1/2` on `[0, 1/2]` and `t -> f(t - 1/2) + 1/2`
/// on `[1/2, 1]`: the same copies of `f` seen from blocks offset by half a unit.
/// Needs `f` to fix 1/2.
pub fn half_shift(f: &PLMap) -> Result<PLMap> {
    let half = Rational::half();
    if f.eval(&half)? != half {
        return Err(Error::InvalidMap("half shift needs a map fixing 1/2".into()));
    }
    let right = f.restrict(&Interval::of(half.clone(), Rational::one()))?.translate(&-&half);
    let left = f.restrict(&Interval::of(Rational::zero(), half.clone()))?.translate(&half);
    PLMap::concat(&[right, left])
}

