use crate::error::Result;
use crate::line_group::{Elem, LineGroup};

/// One factor `c^-1 f^sign c` of a conjugate-product expression in the
/// root element `f`.
#[derive(Clone, Debug)]
pub struct LedgerTerm {
    pub sign: i8,
    pub conj: Elem,
}

/// An element together with an explicit expression as a product of
/// conjugates of the root element and its inverse, which certifies
/// membership in the normal closure of the root.
#[derive(Clone, Debug)]
pub struct Certified {
    pub elem: Elem,
    pub terms: Vec<LedgerTerm>,
}

/// A factor of a product handed to [`Certified::from_items`].
pub enum Item<'a> {
    Cert(&'a Certified),
    CertInv(&'a Certified),
    Free(Elem),
}

impl Certified {
    pub fn root(f: &Elem) -> Certified {
        Certified { elem: f.clone(), terms: vec![LedgerTerm { sign: 1, conj: Elem::identity() }] }
    }

    pub fn inverse(&self) -> Certified {
        let terms = self.terms.iter().rev().map(|t| LedgerTerm { sign: -t.sign, conj: t.conj.clone() }).collect();
        Certified { elem: self.elem.inverse(), terms }
    }

    /// `c^-1 self c`.
    pub fn conjugate(&self, c: &Elem) -> Certified {
        let terms = self.terms.iter().map(|t| LedgerTerm { sign: t.sign, conj: t.conj.then(c) }).collect();
        Certified { elem: self.elem.conjugate_by(c), terms }
    }

    /// `[self, b] = self^-1 b^-1 self b`.
    pub fn commutator_with(&self, b: &Elem) -> Certified {
        Certified::from_items(&[Item::CertInv(self), Item::Free(b.inverse()), Item::Cert(self), Item::Free(b.clone())])
    }

    /// `[self^-1 b self, b]`, expanded as
    /// `self^-1 b^-1 self b^-1 self^-1 b self b`.
    pub fn double_commutator(&self, b: &Elem) -> Certified {
        let bi = b.inverse();
        Certified::from_items(&[
            Item::CertInv(self),
            Item::Free(bi.clone()),
            Item::Cert(self),
            Item::Free(bi),
            Item::CertInv(self),
            Item::Free(b.clone()),
            Item::Cert(self),
            Item::Free(b.clone()),
        ])
    }

    /// Product of certified and free factors. The free factors must
    /// multiply to the identity; each certified factor is then conjugated by
    /// the product of the free factors after it.
    pub fn from_items(items: &[Item<'_>]) -> Certified {
        let mut elems = Vec::with_capacity(items.len());
        let mut terms = Vec::new();
        let mut tail = Elem::identity();
        let mut pending: Vec<(Certified, Elem)> = Vec::new();
        for item in items.iter().rev() {
            match item {
                Item::Free(e) => tail = e.then(&tail),
                Item::Cert(c) => pending.push(((*c).clone(), tail.clone())),
                Item::CertInv(c) => pending.push((c.inverse(), tail.clone())),
            }
        }
        for (c, conj) in pending.into_iter().rev() {
            terms.extend(c.conjugate(&conj).terms);
        }
        for item in items {
            elems.push(match item {
                Item::Free(e) => e.clone(),
                Item::Cert(c) => c.elem.clone(),
                Item::CertInv(c) => c.elem.inverse(),
            });
        }
        Certified { elem: Elem::product(elems), terms }
    }

    /// The expression rebuilt from the root alone.
    pub fn replay(&self, root: &Elem) -> Elem {
        Elem::product(
            self.terms
                .iter()
                .map(|t| if t.sign > 0 { root.clone() } else { root.inverse() }.conjugate_by(&t.conj))
                .collect(),
        )
    }

    /// The replayed expression agrees with the element on `[lo, hi]`.
    pub fn replay_matches(&self, group: &LineGroup, root: &Elem, lo: i64, hi: i64) -> Result<bool> {
        group.equal_on(&self.replay(root), &self.elem, lo, hi)
    }
}
