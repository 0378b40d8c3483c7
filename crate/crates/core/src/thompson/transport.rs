use crate::error::{Error, Result};
use crate::exact_pl::{dyadic_decomposition, Interval, PLMap};
use crate::rational::{q, Rational};
use crate::thompson::standard::standard_elements;

/// Splits the largest (leftmost on ties) piece in half.
fn split_largest(pieces: &mut Vec<Interval>) {
    let mut best = 0;
    for (i, p) in pieces.iter().enumerate() {
        if p.len() > pieces[best].len() {
            best = i;
        }
    }
    let p = pieces.remove(best);
    let mid = p.midpoint();
    pieces.insert(best, Interval::of(mid.clone(), p.hi().clone()));
    pieces.insert(best, Interval::of(p.lo().clone(), mid));
}

/// Element of F-type (dyadic nodes, power-of-2 slopes) sending the points
/// `src[i]` to `dst[i]`. Piece `i` is mapped linearly when `linear[i]` holds,
/// which requires the length ratio to be a power of 2. The construction is
/// symmetric: swapping `src` and `dst` yields the inverse map.
pub fn dyadic_map_between(src: &[Rational], dst: &[Rational], linear: &[bool]) -> Result<PLMap> {
    if src.len() != dst.len() || src.len() < 2 || linear.len() + 1 != src.len() {
        return Err(Error::InvalidMap("point lists have mismatched lengths".into()));
    }
    if src.iter().chain(dst).any(|x| !x.is_dyadic()) {
        return Err(Error::InvalidMap("transport points must be dyadic".into()));
    }
    let mut nodes = vec![(src[0].clone(), dst[0].clone())];
    for i in 0..linear.len() {
        if src[i] >= src[i + 1] || dst[i] >= dst[i + 1] {
            return Err(Error::InvalidMap("transport points must increase".into()));
        }
        if linear[i] {
            let ratio = (&dst[i + 1] - &dst[i]) / (&src[i + 1] - &src[i]);
            if !ratio.is_power_of_two() {
                return Err(Error::InvalidMap(format!("linear piece needs a power-of-2 slope, got {ratio}")));
            }
            nodes.push((src[i + 1].clone(), dst[i + 1].clone()));
            continue;
        }
        let mut a = dyadic_decomposition(&src[i], &src[i + 1]);
        let mut b = dyadic_decomposition(&dst[i], &dst[i + 1]);
        while a.len() < b.len() {
            split_largest(&mut a);
        }
        while b.len() < a.len() {
            split_largest(&mut b);
        }
        nodes.extend(a.iter().zip(&b).map(|(p, r)| (p.hi().clone(), r.hi().clone())));
    }
    PLMap::new(nodes)
}

fn require_inner_standard(iv: &Interval) -> Result<()> {
    if iv.is_standard_dyadic_inside_unit() {
        Ok(())
    } else {
        Err(Error::InvalidInterval(format!("{iv} is not a standard dyadic interval inside (0, 1)")))
    }
}

/// Largest power of two strictly below `x > 0`.
fn pow2_below(x: &Rational) -> Rational {
    let p = x.floor_pow2();
    if &p == x {
        p / Rational::int(2)
    } else {
        p
    }
}

fn collar(points: &[&Rational]) -> Rational {
    let one = Rational::one();
    let m = points
        .iter()
        .map(|p| if *p < &q(1, 2) { (*p).clone() } else { &one - *p })
        .min()
        .expect("nonempty");
    pow2_below(&m)
}

/// An F' element mapping `i` linearly onto `j`. `transporter(j, i)` is the
/// inverse of `transporter(i, j)`.
pub fn interval_transporter(i: &Interval, j: &Interval) -> Result<PLMap> {
    require_inner_standard(i)?;
    require_inner_standard(j)?;
    let eps = collar(&[i.lo(), i.hi(), j.lo(), j.hi()]);
    let one = Rational::one();
    let src = [Rational::zero(), eps.clone(), i.lo().clone(), i.hi().clone(), &one - &eps, one.clone()];
    let dst = [Rational::zero(), eps.clone(), j.lo().clone(), j.hi().clone(), &one - &eps, one.clone()];
    dyadic_map_between(&src, &dst, &[true, false, true, false, true])
}

/// An F' element mapping `i1` onto `j1` and `i2` onto `j2`, linearly on both.
pub fn interval_pair_transporter(i1: &Interval, i2: &Interval, j1: &Interval, j2: &Interval) -> Result<PLMap> {
    for iv in [i1, i2, j1, j2] {
        require_inner_standard(iv)?;
    }
    if i1.hi() >= i2.lo() || j1.hi() >= j2.lo() {
        return Err(Error::InvalidInterval("pair transporter needs sup(I1) < inf(I2) and sup(J1) < inf(J2)".into()));
    }
    let eps = collar(&[i1.lo(), i2.hi(), j1.lo(), j2.hi()]);
    let one = Rational::one();
    let pts = |a: &Interval, b: &Interval| {
        [
            Rational::zero(),
            eps.clone(),
            a.lo().clone(),
            a.hi().clone(),
            b.lo().clone(),
            b.hi().clone(),
            &one - &eps,
            one.clone(),
        ]
    };
    dyadic_map_between(&pts(i1, i2), &pts(j1, j2), &[true, false, true, false, true, false, true])
}

/// `A` rescaled onto `[u, v]` and extended by the identity to `[0, 1]`:
/// support exactly `(u, v)`, moving every point of it to the right.
pub fn hump(u: &Rational, v: &Rational) -> Result<PLMap> {
    let target = Interval::new(u.clone(), v.clone())?;
    if !Interval::unit().contains_interval(&target) {
        return Err(Error::InvalidInterval(format!("{target} is not inside [0, 1]")));
    }
    standard_elements().a.rescale(&target)?.extend_by_identity(&Interval::unit())
}

/// Largest standard dyadic interval whose closure lies in the open interior
/// of `iv` (leftmost among equals).
pub fn largest_dyadic_inside(iv: &Interval) -> Interval {
    let mut size = iv.len().floor_pow2();
    loop {
        let k = (iv.lo() / &size).floor() + 1;
        let lo = Rational::from(k) * &size;
        let hi = &lo + &size;
        if &hi < iv.hi() {
            return Interval::of(lo, hi);
        }
        size = size / Rational::int(2);
    }
}

/// A one-component F' element whose support closure lies in `int(iv)`.
pub fn bump(iv: &Interval) -> Result<PLMap> {
    if !Interval::unit().contains_interval(iv) {
        return Err(Error::InvalidInterval(format!("{iv} is not inside [0, 1]")));
    }
    let inner = largest_dyadic_inside(iv);
    hump(inner.lo(), inner.hi())
}

/// A symmetric F' element supported inside a symmetric region, built from a
/// bump in the left part of its first component and its mirror image.
pub fn symmetric_bump(region: &[Interval]) -> Result<PLMap> {
    let half = q(1, 2);
    let mut mirrored: Vec<Interval> = region.iter().map(Interval::mirror_unit).collect();
    mirrored.sort();
    let mut sorted = region.to_vec();
    sorted.sort();
    if mirrored != sorted {
        return Err(Error::InvalidInterval("region is not symmetric about 1/2".into()));
    }
    let first = sorted.first().ok_or_else(|| Error::InvalidInterval("empty region".into()))?;
    if first.lo() >= &half {
        return Err(Error::InvalidInterval("region has no part left of 1/2".into()));
    }
    let left = Interval::new(first.lo().clone(), Rational::min(first.hi(), &half))?;
    let b = bump(&left)?;
    b.compose(&b.iota_conjugate()?)
}
