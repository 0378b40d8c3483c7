use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_pl::{Interval, PLMap};
use crate::line_group::elem::{Elem, GlueKind, Selection};
use crate::line_group::group::LineGroup;
use crate::line_group::word::GroupWord;
use crate::rational::{q, Rational};
use crate::thompson::dyadic_map_between;

/// One step of a transport: a copy of `base` glued on every block of the
/// given kind, chosen so that on block `block` it carries `from` into `to`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransportPhase {
    pub kind: GlueKind,
    pub block: i64,
    pub base: PLMap,
    pub from: Interval,
    pub to: Interval,
}

#[derive(Clone, Debug)]
pub struct Transport {
    pub phases: Vec<TransportPhase>,
    /// product of the phases as glued elements
    pub elem: Elem,
    /// image of the input interval
    pub image: Interval,
}

/// An F' map of `[0, 1]` sending `[u, v]` (closure inside `(0, 1)`) into the
/// dyadic interval `target`.
fn unit_push(u: &Rational, v: &Rational, target: &Interval) -> Result<PLMap> {
    let mut depth = 3;
    let (d0, d1) = loop {
        let d0 = u.floor_to_grid(depth);
        let d1 = v.ceil_to_grid(depth);
        if d0.is_positive() && d1 < Rational::one() && d0 < d1 {
            break (d0, d1);
        }
        depth += 1;
        if depth > 200 {
            return Err(Error::InvalidInterval(format!("[{u}, {v}] does not sit inside (0, 1)")));
        }
    };
    if &d0 == target.lo() && &d1 == target.hi() {
        return Ok(PLMap::unit_identity());
    }
    let one = Rational::one();
    let edge = [&d0, target.lo(), &(&one - &d1), &(&one - target.hi())]
        .into_iter()
        .min()
        .expect("nonempty")
        .clone();
    let mut eps = edge.floor_pow2();
    if eps == edge {
        eps = eps / Rational::int(2);
    }
    let src = [Rational::zero(), eps.clone(), d0, d1, &one - &eps, one.clone()];
    let dst = [Rational::zero(), eps.clone(), target.lo().clone(), target.hi().clone(), &one - &eps, one.clone()];
    dyadic_map_between(&src, &dst, &[true, false, false, false, true])
}

impl LineGroup {
    fn phase(&self, kind: GlueKind, block: i64, from: &Interval, target_unit: &Interval) -> Result<TransportPhase> {
        let start = match kind {
            GlueKind::Zeta => Rational::int(block),
            GlueKind::Chi => Rational::int(block) - Rational::half(),
        };
        let push = unit_push(&(from.lo() - &start), &(from.hi() - &start), target_unit)?;
        let to = target_unit.translate(&start);
        let image_lo = &push.eval(&(from.lo() - &start))? + &start;
        let image_hi = &push.eval(&(from.hi() - &start))? + &start;
        debug_assert!(to.contains_interval(&Interval::of(image_lo, image_hi)));
        let base = if self.labelling().label_h(kind.key_index(block)).is_inverse() { push.iota_conjugate()? } else { push };
        Ok(TransportPhase { kind, block, base, from: from.clone(), to })
    }

    /// Moves `iv` (closure inside `(m1, m1 + 1)`) into `(m2, m2 + 1)`,
    /// alternating pushes inside unit blocks `[n, n+1]` and carries across
    /// integers inside `[n - 1/2, n + 1/2]`. Every intermediate image stays
    /// inside `[min(m1, m2), max(m1, m2) + 1]`.
    pub fn transport(&self, iv: &Interval, m1: i64, m2: i64) -> Result<Transport> {
        let block = Interval::ints(m1, m1 + 1)?;
        if !block.contains_strictly(iv) {
            return Err(Error::InvalidInterval(format!("{iv} is not inside the open block {block}")));
        }
        let mut phases = Vec::new();
        let mut current = iv.clone();
        let mut m = m1;
        let (zeta_target, chi_target) =
            if m2 > m1 { (q(5, 8), q(5, 8)) } else { (q(1, 4), q(1, 4)) };
        let unit = |lo: Rational| Interval::of(lo.clone(), lo + q(1, 8));
        while m != m2 {
            let p = self.phase(GlueKind::Zeta, m, &current, &unit(zeta_target.clone()))?;
            current = p.to.clone();
            phases.push(p);
            let centre = if m2 > m { m + 1 } else { m };
            let p = self.phase(GlueKind::Chi, centre, &current, &unit(chi_target.clone()))?;
            current = p.to.clone();
            phases.push(p);
            m = if m2 > m { m + 1 } else { m - 1 };
        }
        let mut factors = Vec::new();
        let mut image = iv.clone();
        for p in &phases {
            let e = self.glued(p.kind, "t", &p.base, Selection::All)?;
            let m = self.restrict(&e, &image);
            image = m.range();
            factors.push(e);
        }
        Ok(Transport { phases, elem: Elem::product(factors), image })
    }

    /// The transport as a word in the named generators.
    pub fn transport_word(&self, t: &Transport) -> Result<GroupWord> {
        let mut letters = Vec::new();
        for p in &t.phases {
            let w = match p.kind {
                GlueKind::Zeta => self.lambda_word(&p.base)?,
                GlueKind::Chi => self.pi_word(&p.base)?,
            };
            letters.extend(w.letters);
        }
        Ok(GroupWord::new(letters))
    }
}
