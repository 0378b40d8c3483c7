use std::collections::BTreeSet;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_pl::{Interval, PLMap};

/// How copies of a base map are laid on the line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GlueKind {
    /// one copy on each `[n, n+1]`, keyed by the label at `n + 1/2`
    Zeta,
    /// one copy on each `[n - 1/2, n + 1/2]`, keyed by the label at `n`
    Chi,
}

impl GlueKind {
    /// Half-step index of the label that keys the block containing block
    /// number `n`.
    pub fn key_index(self, n: i64) -> i64 {
        match self {
            GlueKind::Zeta => 2 * n + 1,
            GlueKind::Chi => 2 * n,
        }
    }
}

/// Which blocks carry a copy; the rest act as the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Selection {
    All,
    /// half-step indices of the keying labels
    Only(BTreeSet<i64>),
}

impl Selection {
    pub fn contains(&self, key: i64) -> bool {
        match self {
            Selection::All => true,
            Selection::Only(s) => s.contains(&key),
        }
    }
}

/// A homeomorphism of the line built from copies of one map of `[0, 1]`
/// fixing its endpoints, mirrored on blocks whose label is an inverse letter.
#[derive(Debug)]
pub struct GluedGen {
    pub kind: GlueKind,
    pub name: String,
    pub base: PLMap,
    pub selection: Selection,
    /// plain, mirrored, plain inverse, mirrored inverse
    variants: [PLMap; 4],
}

impl GluedGen {
    pub fn new(kind: GlueKind, name: impl Into<String>, base: PLMap, selection: Selection) -> Result<GluedGen> {
        if base.domain() != Interval::unit() || !base.fixes_endpoints() {
            return Err(Error::InvalidMap("glued maps must fix the endpoints of [0, 1]".into()));
        }
        let twisted = base.iota_conjugate()?;
        let variants = [base.clone(), twisted.clone(), base.invert(), twisted.invert()];
        Ok(GluedGen { kind, name: name.into(), base, selection, variants })
    }

    pub fn variant(&self, mirrored: bool, inverted: bool) -> &PLMap {
        &self.variants[(mirrored as usize) + 2 * (inverted as usize)]
    }
}

#[derive(Debug)]
pub(crate) enum Node {
    Identity,
    Gen(Arc<GluedGen>),
    Product(Vec<Elem>),
}

#[derive(Debug)]
pub(crate) struct ElemInner {
    pub(crate) id: u64,
    pub(crate) node: Node,
    letters: u64,
    uniform: bool,
}

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// A symbolic element of a group of line homeomorphisms: a DAG of glued
/// generators and products. Cloning and inverting are O(1); evaluation goes
/// through [`crate::line_group::LineGroup`].
#[derive(Clone, Debug)]
pub struct Elem {
    pub(crate) inner: Arc<ElemInner>,
    pub(crate) inv: bool,
}

impl Elem {
    fn from_node(node: Node) -> Elem {
        let (letters, uniform) = match &node {
            Node::Identity => (0, true),
            Node::Gen(g) => (1, g.selection == Selection::All),
            Node::Product(cs) => (
                cs.iter().map(|c| c.inner.letters).fold(0u64, u64::saturating_add),
                cs.iter().all(|c| c.inner.uniform),
            ),
        };
        Elem {
            inner: Arc::new(ElemInner { id: NEXT_ID.fetch_add(1, Ordering::Relaxed), node, letters, uniform }),
            inv: false,
        }
    }

    pub fn identity() -> Elem {
        Elem::from_node(Node::Identity)
    }

    pub fn gen(g: Arc<GluedGen>) -> Elem {
        Elem::from_node(Node::Gen(g))
    }

    /// Left-to-right product (apply the first factor first).
    pub fn product(factors: Vec<Elem>) -> Elem {
        let factors: Vec<Elem> = factors.into_iter().filter(|f| !f.is_trivially_identity()).collect();
        match factors.len() {
            0 => Elem::identity(),
            1 => factors.into_iter().next().expect("one factor"),
            _ => Elem::from_node(Node::Product(factors)),
        }
    }

    pub fn then(&self, other: &Elem) -> Elem {
        Elem::product(vec![self.clone(), other.clone()])
    }

    pub fn inverse(&self) -> Elem {
        Elem { inner: self.inner.clone(), inv: !self.inv }
    }

    pub fn pow(&self, k: i64) -> Elem {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        Elem::product(vec![base; k.unsigned_abs() as usize])
    }

    /// `c^-1 self c`.
    pub fn conjugate_by(&self, c: &Elem) -> Elem {
        Elem::product(vec![c.inverse(), self.clone(), c.clone()])
    }

    /// `a^-1 b^-1 a b`.
    pub fn commutator(a: &Elem, b: &Elem) -> Elem {
        Elem::product(vec![a.inverse(), b.inverse(), a.clone(), b.clone()])
    }

    pub fn is_trivially_identity(&self) -> bool {
        matches!(self.inner.node, Node::Identity)
    }

    /// Number of generator occurrences in the fully expanded word.
    pub fn letter_count(&self) -> u64 {
        self.inner.letters
    }

    /// Every generator acts on all blocks, so the element commutes with the
    /// label-preserving translations and class arguments apply.
    pub fn is_uniform(&self) -> bool {
        self.inner.uniform
    }

    /// Visits the generator occurrences left to right with their effective
    /// inversion flags.
    pub fn for_each_letter(&self, f: &mut impl FnMut(&Arc<GluedGen>, bool)) {
        fn walk(e: &Elem, inv: bool, f: &mut impl FnMut(&Arc<GluedGen>, bool)) {
            let inv = inv ^ e.inv;
            match &e.inner.node {
                Node::Identity => {}
                Node::Gen(g) => f(g, inv),
                Node::Product(cs) => {
                    if inv {
                        for c in cs.iter().rev() {
                            walk(c, true, f);
                        }
                    } else {
                        for c in cs {
                            walk(c, false, f);
                        }
                    }
                }
            }
        }
        walk(self, false, f);
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(e: &Elem, inv: bool, out: &mut Vec<String>, budget: &mut usize) {
            if *budget == 0 {
                return;
            }
            let inv = inv ^ e.inv;
            match &e.inner.node {
                Node::Identity => {}
                Node::Gen(g) => {
                    *budget -= 1;
                    out.push(if inv { format!("{}^-1", g.name) } else { g.name.clone() });
                }
                Node::Product(cs) => {
                    let iter: Box<dyn Iterator<Item = &Elem>> =
                        if inv { Box::new(cs.iter().rev()) } else { Box::new(cs.iter()) };
                    for c in iter {
                        go(c, inv, out, budget);
                    }
                }
            }
        }
        let mut parts = Vec::new();
        let mut budget = 64usize;
        go(self, false, &mut parts, &mut budget);
        if parts.is_empty() {
            return write!(f, "id");
        }
        write!(f, "{}", parts.join(" "))?;
        if self.letter_count() > 64 {
            write!(f, " ... ({} letters)", self.letter_count())?;
        }
        Ok(())
    }
}
