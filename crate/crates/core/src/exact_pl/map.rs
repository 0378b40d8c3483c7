use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_pl::Interval;
use crate::rational::Rational;

/// An orientation-preserving piecewise-linear homeomorphism from a closed
/// rational interval onto another, stored as its canonical node list.
///
/// Canonical means: x and y strictly increasing, both domain endpoints present,
/// and no interior node where the slope does not change. Two maps are equal as
/// functions iff their node lists are equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PLMap {
    nodes: Vec<(Rational, Rational)>,
}

/// Fixed set of a PL map, computed segment by segment.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FixedSet {
    pub isolated: Vec<Rational>,
    pub fixed_intervals: Vec<Interval>,
}

impl FixedSet {
    pub fn is_empty(&self) -> bool {
        self.isolated.is_empty() && self.fixed_intervals.is_empty()
    }

    /// Some fixed point, preferring isolated ones.
    pub fn any_point(&self) -> Option<Rational> {
        self.isolated
            .first()
            .cloned()
            .or_else(|| self.fixed_intervals.first().map(|iv| iv.lo().clone()))
    }
}

fn interp(x0: &Rational, y0: &Rational, x1: &Rational, y1: &Rational, x: &Rational) -> Rational {
    if x == x0 {
        return y0.clone();
    }
    if x == x1 {
        return y1.clone();
    }
    y0 + &((x - x0) * (y1 - y0) / (x1 - x0))
}

fn collinear(a: &(Rational, Rational), b: &(Rational, Rational), c: &(Rational, Rational)) -> bool {
    (&b.1 - &a.1) * (&c.0 - &b.0) == (&c.1 - &b.1) * (&b.0 - &a.0)
}

impl PLMap {
    /// Validates monotonicity and returns the canonical form.
    pub fn new(nodes: Vec<(Rational, Rational)>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidMap("need at least two nodes".into()));
        }
        for w in nodes.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::InvalidMap(format!(
                    "x-coordinates not strictly increasing at {}",
                    w[1].0
                )));
            }
            if w[0].1 >= w[1].1 {
                return Err(Error::InvalidMap(format!(
                    "not orientation preserving near x = {}",
                    w[1].0
                )));
            }
        }
        Ok(Self::canonical(nodes))
    }

    pub(crate) fn canonical(nodes: Vec<(Rational, Rational)>) -> Self {
        let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(nodes.len());
        for node in nodes {
            if let Some(last) = out.last() {
                if last.0 == node.0 {
                    debug_assert_eq!(last.1, node.1);
                    continue;
                }
            }
            while out.len() >= 2 && collinear(&out[out.len() - 2], &out[out.len() - 1], &node) {
                out.pop();
            }
            out.push(node);
        }
        PLMap { nodes: out }
    }

    pub fn identity(domain: &Interval) -> Self {
        PLMap {
            nodes: vec![
                (domain.lo().clone(), domain.lo().clone()),
                (domain.hi().clone(), domain.hi().clone()),
            ],
        }
    }

    pub fn unit_identity() -> Self {
        PLMap::identity(&Interval::unit())
    }

    /// The affine bijection from `from` onto `to`.
    pub fn affine(from: &Interval, to: &Interval) -> Self {
        PLMap {
            nodes: vec![(from.lo().clone(), to.lo().clone()), (from.hi().clone(), to.hi().clone())],
        }
    }

    pub fn nodes(&self) -> &[(Rational, Rational)] {
        &self.nodes
    }

    pub fn lo(&self) -> &Rational {
        &self.nodes[0].0
    }

    pub fn hi(&self) -> &Rational {
        &self.nodes[self.nodes.len() - 1].0
    }

    pub fn domain(&self) -> Interval {
        Interval::of(self.lo().clone(), self.hi().clone())
    }

    pub fn range(&self) -> Interval {
        Interval::of(self.nodes[0].1.clone(), self.nodes[self.nodes.len() - 1].1.clone())
    }

    pub fn segment_count(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn slope(&self, segment: usize) -> Rational {
        let (a, b) = (&self.nodes[segment], &self.nodes[segment + 1]);
        (&b.1 - &a.1) / (&b.0 - &a.0)
    }

    pub fn slopes(&self) -> Vec<Rational> {
        (0..self.segment_count()).map(|i| self.slope(i)).collect()
    }

    /// Interior nodes (all of them are genuine breakpoints in canonical form).
    pub fn breakpoints(&self) -> Vec<Rational> {
        self.nodes[1..self.nodes.len() - 1].iter().map(|n| n.0.clone()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.nodes.len() == 2 && self.nodes.iter().all(|(x, y)| x == y)
    }

    pub fn fixes_endpoints(&self) -> bool {
        let first = &self.nodes[0];
        let last = &self.nodes[self.nodes.len() - 1];
        first.0 == first.1 && last.0 == last.1
    }

    fn segment_of(&self, x: &Rational) -> usize {
        // first node with node.x >= x, then step back to the segment start
        let idx = self.nodes.partition_point(|n| &n.0 < x);
        idx.saturating_sub(1).min(self.nodes.len() - 2)
    }

    fn segment_of_y(&self, y: &Rational) -> usize {
        let idx = self.nodes.partition_point(|n| &n.1 < y);
        idx.saturating_sub(1).min(self.nodes.len() - 2)
    }

    /// Image of `x` (right action `x·f`).
    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        if x < self.lo() || x > self.hi() {
            return Err(Error::Domain { point: Box::new(x.clone()), lo: Box::new(self.lo().clone()), hi: Box::new(self.hi().clone()) });
        }
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &Rational) -> Rational {
        let i = self.segment_of(x);
        let (a, b) = (&self.nodes[i], &self.nodes[i + 1]);
        interp(&a.0, &a.1, &b.0, &b.1, x)
    }

    /// Preimage of `y` under the map.
    pub fn eval_inverse(&self, y: &Rational) -> Result<Rational> {
        let r = self.range();
        if !r.contains(y) {
            return Err(Error::Domain { point: Box::new(y.clone()), lo: Box::new(r.lo().clone()), hi: Box::new(r.hi().clone()) });
        }
        let i = self.segment_of_y(y);
        let (a, b) = (&self.nodes[i], &self.nodes[i + 1]);
        Ok(interp(&a.1, &a.0, &b.1, &b.0, y))
    }

    /// Slope of the segment immediately right of `x` (`x < hi`).
    pub fn slope_right_of(&self, x: &Rational) -> Rational {
        let idx = self.nodes.partition_point(|n| &n.0 <= x);
        let seg = idx.saturating_sub(1).min(self.nodes.len() - 2);
        self.slope(seg)
    }

    /// Slope of the segment immediately left of `x` (`x > lo`).
    pub fn slope_left_of(&self, x: &Rational) -> Rational {
        let idx = self.nodes.partition_point(|n| &n.0 < x);
        let seg = idx.saturating_sub(1).min(self.nodes.len() - 2);
        self.slope(seg)
    }

    /// Apply `self`, then `g`. Requires the range of `self` to equal the
    /// domain of `g`.
    pub fn compose(&self, g: &PLMap) -> Result<PLMap> {
        if self.range() != g.domain() {
            return Err(Error::DomainMismatch(format!(
                "range {} of first map differs from domain {} of second",
                self.range(),
                g.domain()
            )));
        }
        Ok(self.compose_unchecked(g))
    }

    pub(crate) fn compose_unchecked(&self, g: &PLMap) -> PLMap {
        let f = &self.nodes;
        let gn = &g.nodes;
        let mut out = Vec::with_capacity(f.len() + gn.len());
        let (mut i, mut j) = (0usize, 0usize);
        // fi: current f segment (by y), gj: current g segment (by x)
        let (mut fi, mut gj) = (0usize, 0usize);
        while i < f.len() || j < gn.len() {
            let y = match (f.get(i), gn.get(j)) {
                (Some(a), Some(b)) => {
                    if a.1 < b.0 {
                        i += 1;
                        a.1.clone()
                    } else if b.0 < a.1 {
                        j += 1;
                        b.0.clone()
                    } else {
                        i += 1;
                        j += 1;
                        a.1.clone()
                    }
                }
                (Some(a), None) => {
                    i += 1;
                    a.1.clone()
                }
                (None, Some(b)) => {
                    j += 1;
                    b.0.clone()
                }
                (None, None) => unreachable!(),
            };
            while fi + 2 < f.len() && f[fi + 1].1 < y {
                fi += 1;
            }
            while gj + 2 < gn.len() && gn[gj + 1].0 < y {
                gj += 1;
            }
            let x = interp(&f[fi].1, &f[fi].0, &f[fi + 1].1, &f[fi + 1].0, &y);
            let z = interp(&gn[gj].0, &gn[gj].1, &gn[gj + 1].0, &gn[gj + 1].1, &y);
            out.push((x, z));
        }
        PLMap::canonical(out)
    }

    pub fn invert(&self) -> PLMap {
        PLMap { nodes: self.nodes.iter().map(|(x, y)| (y.clone(), x.clone())).collect() }
    }

    /// `self^k` for maps of an interval onto itself.
    pub fn pow(&self, k: i64) -> Result<PLMap> {
        if self.domain() != self.range() && k != 1 {
            return Err(Error::DomainMismatch("powers need a self-map".into()));
        }
        let base = if k < 0 { self.invert() } else { self.clone() };
        let mut acc = PLMap::identity(&self.domain());
        for _ in 0..k.unsigned_abs() {
            acc = acc.compose_unchecked(&base);
        }
        Ok(acc)
    }

    /// Restriction to a subinterval of the domain.
    pub fn restrict(&self, to: &Interval) -> Result<PLMap> {
        if !self.domain().contains_interval(to) {
            return Err(Error::DomainMismatch(format!("{} is not inside {}", to, self.domain())));
        }
        let mut nodes = Vec::new();
        nodes.push((to.lo().clone(), self.eval_unchecked(to.lo())));
        nodes.extend(self.nodes.iter().filter(|n| to.contains_open(&n.0)).cloned());
        nodes.push((to.hi().clone(), self.eval_unchecked(to.hi())));
        Ok(PLMap::canonical(nodes))
    }

    /// Glues maps on consecutive intervals whose endpoint values agree.
    pub fn concat(pieces: &[PLMap]) -> Result<PLMap> {
        let mut nodes: Vec<(Rational, Rational)> = Vec::new();
        for p in pieces {
            if let Some(last) = nodes.last() {
                let first = &p.nodes[0];
                if last != first {
                    return Err(Error::DomainMismatch(format!(
                        "pieces do not glue at x = {} ({} vs {})",
                        first.0, last.1, first.1
                    )));
                }
                nodes.extend(p.nodes[1..].iter().cloned());
            } else {
                nodes.extend(p.nodes.iter().cloned());
            }
        }
        if nodes.is_empty() {
            return Err(Error::InvalidMap("no pieces".into()));
        }
        PLMap::new(nodes)
    }

    /// Extends an endpoint-fixing map by the identity to a larger interval.
    pub fn extend_by_identity(&self, to: &Interval) -> Result<PLMap> {
        if !self.fixes_endpoints() {
            return Err(Error::EndpointsNotFixed);
        }
        if !to.contains_interval(&self.domain()) {
            return Err(Error::DomainMismatch(format!("{} does not contain {}", to, self.domain())));
        }
        let mut nodes = Vec::with_capacity(self.nodes.len() + 2);
        nodes.push((to.lo().clone(), to.lo().clone()));
        nodes.extend(self.nodes.iter().cloned());
        nodes.push((to.hi().clone(), to.hi().clone()));
        Ok(PLMap::canonical(nodes))
    }

    /// Conjugate by the translation `t -> t + by`.
    pub fn translate(&self, by: &Rational) -> PLMap {
        PLMap { nodes: self.nodes.iter().map(|(x, y)| (x + by, y + by)).collect() }
    }

    /// Conjugate of a map on `[0, 1]` by the orientation-preserving affine
    /// bijection `[0, 1] -> target`.
    pub fn rescale(&self, target: &Interval) -> Result<PLMap> {
        if self.domain() != Interval::unit() {
            return Err(Error::DomainMismatch(format!("rescale needs domain [0, 1], got {}", self.domain())));
        }
        let (a, len) = (target.lo(), target.len());
        Ok(PLMap { nodes: self.nodes.iter().map(|(x, y)| (a + &(x * &len), a + &(y * &len))).collect() })
    }

    /// Rescale restricted to unit-length targets (isometric conjugation).
    pub fn rescale_isometric(&self, target: &Interval) -> Result<PLMap> {
        if target.len() != Rational::one() {
            return Err(Error::InvalidInterval(format!("{target} does not have unit length")));
        }
        self.rescale(target)
    }

    /// Pull a map on `source` back to `[0, 1]` (inverse of [`PLMap::rescale`]).
    pub fn normalize_from(&self, source: &Interval) -> Result<PLMap> {
        if self.domain() != *source {
            return Err(Error::DomainMismatch(format!("expected domain {source}, got {}", self.domain())));
        }
        let (a, len) = (source.lo(), source.len());
        Ok(PLMap { nodes: self.nodes.iter().map(|(x, y)| ((x - a) / &len, (y - a) / &len)).collect() })
    }

    /// `t -> 1 - f(1 - t)` for maps on `[0, 1]`.
    pub fn iota_conjugate(&self) -> Result<PLMap> {
        if self.domain() != Interval::unit() {
            return Err(Error::DomainMismatch(format!(
                "iota conjugation needs domain [0, 1], got {}",
                self.domain()
            )));
        }
        let one = Rational::one();
        Ok(PLMap { nodes: self.nodes.iter().rev().map(|(x, y)| (&one - x, &one - y)).collect() })
    }

    pub fn is_symmetric(&self) -> bool {
        self.iota_conjugate().is_ok_and(|c| &c == self)
    }

    /// Fixed points, segment by segment.
    pub fn fixed_points(&self) -> FixedSet {
        let mut set = FixedSet::default();
        let disp: Vec<Rational> = self.nodes.iter().map(|(x, y)| y - x).collect();
        let mut open_interval: Option<Rational> = None;
        let push_point = |set: &mut FixedSet, p: Rational| {
            if set.isolated.last() != Some(&p) && set.fixed_intervals.last().map(|iv| iv.hi()) != Some(&p) {
                set.isolated.push(p);
            }
        };
        for i in 0..self.segment_count() {
            let (x0, x1) = (&self.nodes[i].0, &self.nodes[i + 1].0);
            let (d0, d1) = (&disp[i], &disp[i + 1]);
            if d0.is_zero() && d1.is_zero() {
                if open_interval.is_none() {
                    if set.isolated.last() == Some(x0) {
                        set.isolated.pop();
                    }
                    open_interval = Some(x0.clone());
                }
                continue;
            }
            if let Some(start) = open_interval.take() {
                set.fixed_intervals.push(Interval::of(start, x0.clone()));
            }
            if d0.is_zero() {
                push_point(&mut set, x0.clone());
            }
            if d0.signum() * d1.signum() < 0 {
                let t = x0 + &(d0 * &(x1 - x0) / (d0 - d1));
                push_point(&mut set, t);
            }
            if d1.is_zero() {
                push_point(&mut set, x1.clone());
            }
        }
        if let Some(start) = open_interval.take() {
            set.fixed_intervals.push(Interval::of(start, self.hi().clone()));
        }
        set
    }

    /// Maximal intervals of the domain on which the map moves every point.
    /// Interior ends are fixed points; an end at the domain boundary may be a
    /// moved point when the map does not fix its endpoints.
    pub fn moved_components(&self) -> Vec<Interval> {
        let fixed = self.fixed_points();
        let mut cuts: Vec<(Rational, Rational)> = fixed
            .isolated
            .iter()
            .map(|p| (p.clone(), p.clone()))
            .chain(fixed.fixed_intervals.iter().map(|iv| (iv.lo().clone(), iv.hi().clone())))
            .collect();
        cuts.sort();
        let mut out = Vec::new();
        let mut cursor = self.lo().clone();
        for (a, b) in cuts {
            if cursor < a {
                out.push(Interval::of(cursor.clone(), a.clone()));
            }
            if b > cursor {
                cursor = b;
            }
        }
        if &cursor < self.hi() {
            out.push(Interval::of(cursor, self.hi().clone()));
        }
        out
    }

    /// Open support as maximal open intervals; the map must fix its endpoints.
    pub fn support(&self) -> Result<Vec<Interval>> {
        if !self.fixes_endpoints() {
            return Err(Error::EndpointsNotFixed);
        }
        Ok(self.moved_components())
    }

    /// Boundary points of the open support.
    pub fn transition_points(&self) -> Result<Vec<Rational>> {
        let mut pts: Vec<Rational> = Vec::new();
        for iv in self.support()? {
            for p in [iv.lo(), iv.hi()] {
                if pts.last() != Some(p) {
                    pts.push(p.clone());
                }
            }
        }
        Ok(pts)
    }

    /// Convex hull of the support, if nonempty.
    pub fn support_hull(&self) -> Result<Option<Interval>> {
        let s = self.support()?;
        Ok(match (s.first(), s.last()) {
            (Some(a), Some(b)) => Some(Interval::of(a.lo().clone(), b.hi().clone())),
            _ => None,
        })
    }

    /// Commutator `a^-1 b^-1 a b` of two self-maps of the same interval.
    pub fn commutator(a: &PLMap, b: &PLMap) -> Result<PLMap> {
        a.invert().compose(&b.invert())?.compose(a)?.compose(b)
    }

    /// `c^-1 self c`.
    pub fn conjugate_by(&self, c: &PLMap) -> Result<PLMap> {
        c.invert().compose(self)?.compose(c)
    }
}

impl fmt::Debug for PLMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PLMap[")?;
        for (i, (x, y)) in self.nodes.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({x}, {y})")?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct PLMapJson {
    domain: [Rational; 2],
    nodes: Vec<[Rational; 2]>,
}

impl Serialize for PLMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PLMapJson {
            domain: [self.lo().clone(), self.hi().clone()],
            nodes: self.nodes.iter().map(|(x, y)| [x.clone(), y.clone()]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PLMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PLMapJson::deserialize(d)?;
        let map = PLMap::new(raw.nodes.into_iter().map(|[x, y]| (x, y)).collect())
            .map_err(serde::de::Error::custom)?;
        if map.lo() != &raw.domain[0] || map.hi() != &raw.domain[1] {
            return Err(serde::de::Error::custom("domain does not match node endpoints"));
        }
        Ok(map)
    }
}
