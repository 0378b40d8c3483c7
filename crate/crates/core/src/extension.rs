//! Extended groups built from a slope-`alpha` element: `f_alpha`, the
//! two-interval map `xi_alpha`, the generators `g`/`w`, germ exponents, and
//! a displacement check for Higman-style simplicity criteria.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_pl::{Interval, PLMap};
use crate::labelling::Labelling;
use crate::line_group::LineGroup;
use crate::rational::{odd_part, two_valuation, Rational};
use crate::thompson::{interval_pair_transporter, interval_transporter};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtConfig {
    pub alpha: Rational,
    /// carries the rescaled `f_alpha`
    pub i: Interval,
    /// carries the inverse copy; lies to the left of `i`
    pub j: Interval,
}

impl ExtConfig {
    pub fn new(alpha: Rational, i: Interval, j: Interval) -> Result<ExtConfig> {
        let cfg = ExtConfig { alpha, i, j };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        check_alpha(&self.alpha)?;
        for iv in [&self.i, &self.j] {
            if !iv.is_standard_dyadic_inside_unit() {
                return Err(Error::Config(format!("{iv} is not a standard dyadic interval inside (0, 1)")));
            }
        }
        if self.j.hi() >= self.i.lo() {
            return Err(Error::Config(format!("J = {} must lie to the left of I = {}", self.j, self.i)));
        }
        Ok(())
    }
}

fn check_alpha(alpha: &Rational) -> Result<()> {
    if !alpha.is_positive() || alpha >= &Rational::one() {
        return Err(Error::Config(format!("alpha = {alpha} is not in (0, 1)")));
    }
    if alpha.is_dyadic() {
        return Err(Error::Config(format!("alpha = {alpha} is dyadic")));
    }
    Ok(())
}

/// Slope `alpha` on `[0, 1/2]` and `2 - alpha` on `[1/2, 1]`.
pub fn make_f_alpha(alpha: &Rational) -> Result<PLMap> {
    check_alpha(alpha)?;
    PLMap::new(vec![
        (Rational::zero(), Rational::zero()),
        (Rational::half(), alpha / &Rational::int(2)),
        (Rational::one(), Rational::one()),
    ])
}

/// `f_alpha` rescaled into `I`, its inverse carried onto `J` by a dyadic
/// transporter, identity elsewhere.
pub fn make_xi_alpha(cfg: &ExtConfig) -> Result<PLMap> {
    cfg.validate()?;
    let sigma = make_f_alpha(&cfg.alpha)?.rescale(&cfg.i)?;
    let to_i = interval_transporter(&cfg.j, &cfg.i)?;
    let on_j = to_i.restrict(&cfg.j)?.compose(&sigma.invert())?.compose(&to_i.invert().restrict(&cfg.i)?)?;
    let zero = Rational::zero();
    let one = Rational::one();
    PLMap::concat(&[
        PLMap::identity(&Interval::new(zero, cfg.j.lo().clone())?),
        on_j,
        PLMap::identity(&Interval::new(cfg.j.hi().clone(), cfg.i.lo().clone())?),
        sigma,
        PLMap::identity(&Interval::new(cfg.i.hi().clone(), one)?),
    ])
}

/// The base group extended by `g` (copies of `xi_alpha` on unit blocks) and
/// `w` (copies on half-shifted blocks).
pub fn extended_group(rho: Labelling, cfg: &ExtConfig) -> Result<LineGroup> {
    LineGroup::with_extension(rho, &make_xi_alpha(cfg)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Endpoint {
    Left,
    Right,
}

/// `slope = 2^two_exp * alpha^alpha_exp`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GermExponents {
    pub two_exp: i64,
    pub alpha_exp: i64,
}

fn rational_two_valuation(x: &Rational) -> i64 {
    two_valuation(x.numer()) as i64 - two_valuation(x.denom()) as i64
}

fn odd_rational(x: &Rational) -> Rational {
    Rational::from_big(odd_part(x.numer()), odd_part(x.denom()))
}

fn size(x: &Rational) -> u64 {
    x.numer().bits() + x.denom().bits()
}

/// Solves `slope = 2^m alpha^n`: the odd parts fix `n`, the 2-adic
/// valuations then fix `m`.
pub fn solve_germ(slope: &Rational, alpha: &Rational) -> Result<GermExponents> {
    check_alpha(alpha)?;
    let not_rep = || Error::NotRepresentable { slope: Box::new(slope.clone()), alpha: Box::new(alpha.clone()) };
    if !slope.is_positive() {
        return Err(not_rep());
    }
    let target = odd_rational(slope);
    let base = odd_rational(alpha);
    let unit = Rational::one();
    let mut n = 0i64;
    let (mut up, mut down) = (unit.clone(), unit.clone());
    loop {
        if up == target {
            break;
        }
        if down == target {
            n = -n;
            break;
        }
        if size(&up) > size(&target) + 1 && size(&down) > size(&target) + 1 {
            return Err(not_rep());
        }
        n += 1;
        up = &up * &base;
        down = &down / &base;
    }
    let two_exp = rational_two_valuation(slope) - n * rational_two_valuation(alpha);
    Ok(GermExponents { two_exp, alpha_exp: n })
}

/// Germ exponents of the slope at an endpoint of the domain.
pub fn germ_exponents(f: &PLMap, at: Endpoint, alpha: &Rational) -> Result<GermExponents> {
    let slope = match at {
        Endpoint::Left => f.slope_right_of(f.lo()),
        Endpoint::Right => f.slope_left_of(f.hi()),
    };
    solve_germ(&slope, alpha)
}

/// `2^two_exp * alpha^alpha_exp`.
pub fn germ_slope(e: GermExponents, alpha: &Rational) -> Rational {
    let mut s = Rational::pow2(e.two_exp);
    let step = if e.alpha_exp >= 0 { alpha.clone() } else { alpha.recip() };
    for _ in 0..e.alpha_exp.unsigned_abs() {
        s = &s * &step;
    }
    s
}

fn image(f: &PLMap, iv: &Interval) -> Result<Interval> {
    Interval::new(f.eval(iv.lo())?, f.eval(iv.hi())?)
}

/// `S f4 f3` and `S f4` are disjoint, where `S` is the union of the supports
/// of `f1` and `f2`.
pub fn higman_instance_check(f1: &PLMap, f2: &PLMap, f3: &PLMap, f4: &PLMap) -> Result<bool> {
    for f in [f1, f2, f3, f4] {
        if f.domain() != Interval::unit() || !f.fixes_endpoints() {
            return Err(Error::EndpointsNotFixed);
        }
    }
    let mut s = f1.support()?;
    s.extend(f2.support()?);
    let moved: Vec<Interval> = s.iter().map(|c| image(f4, c)).collect::<Result<_>>()?;
    let twice: Vec<Interval> = moved.iter().map(|c| image(f3, c)).collect::<Result<_>>()?;
    Ok(twice.iter().all(|a| moved.iter().all(|b| !a.overlaps_open(b))))
}

/// `xi_alpha` rebuilt as `f2^-1 (f1^-1 xi f1 xi^-1) f2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct XiIdentity {
    pub i1: Interval,
    pub f1: PLMap,
    pub f2: PLMap,
    pub rebuilt: PLMap,
    pub equal: bool,
}

/// `f1` fixes `J` and maps `I` onto `I1`; `f2` maps `I` onto `J` and `I1`
/// onto `I`; both linear on those intervals.
pub fn xi_commutator_identity(cfg: &ExtConfig, i1: &Interval) -> Result<XiIdentity> {
    cfg.validate()?;
    if cfg.i.hi() >= i1.lo() {
        return Err(Error::Config(format!("I1 = {i1} must lie to the right of I = {}", cfg.i)));
    }
    let xi = make_xi_alpha(cfg)?;
    let f1 = interval_pair_transporter(&cfg.j, &cfg.i, &cfg.j, i1)?;
    let f2 = interval_pair_transporter(&cfg.i, i1, &cfg.j, &cfg.i)?;
    let rebuilt = f2
        .invert()
        .compose(&f1.invert())?
        .compose(&xi)?
        .compose(&f1)?
        .compose(&xi.invert())?
        .compose(&f2)?;
    Ok(XiIdentity { i1: i1.clone(), equal: rebuilt == xi, f1, f2, rebuilt })
}
