use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_pl::{Interval, PLMap};
use crate::rational::Rational;
use crate::thompson::factor::f_factorize;
use crate::thompson::membership::{endpoint_log_slopes, require_f_prime, require_h};
use crate::thompson::standard::{inner_interval, standard_elements, FGen, NuGen};
use crate::thompson::word::PowerWord;

pub type NuWord = PowerWord<NuGen>;

fn depth_by(f: &PLMap, done: impl Fn(&Rational, &Rational) -> bool) -> Result<u32> {
    require_f_prime(f)?;
    let Some(hull) = f.support_hull()? else {
        return Ok(0);
    };
    let nu1 = &standard_elements().nu1;
    let (mut a, mut b) = (hull.lo().clone(), hull.hi().clone());
    let mut m = 0;
    while !done(&a, &b) {
        a = nu1.eval_unchecked(&a);
        b = nu1.eval_unchecked(&b);
        m += 1;
    }
    Ok(m)
}

/// Smallest `m` with `Supp(nu1^-m f nu1^m)` inside `[1/16, 15/16]`.
pub fn conjugation_depth(f: &PLMap) -> Result<u32> {
    let inner = inner_interval();
    depth_by(f, |a, b| a >= inner.lo() && b <= inner.hi())
}

/// Like [`conjugation_depth`] but with the support closure inside the open
/// interval `(1/16, 15/16)`.
pub fn strict_conjugation_depth(f: &PLMap) -> Result<u32> {
    let inner = inner_interval();
    depth_by(f, |a, b| a > inner.lo() && b < inner.hi())
}

/// `nu1^-m f nu1^m`.
pub fn nu1_conjugate(f: &PLMap, m: i64) -> Result<PLMap> {
    let c = standard_elements().nu1.pow(m)?;
    f.conjugate_by(&c)
}

/// Alternating `nu2`/`nu3` power word for an element of F supported in
/// `[1/16, 15/16]`, with its exponent sums.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlternatingWord {
    pub word: NuWord,
    pub nu2_sum: i64,
    pub nu3_sum: i64,
}

pub fn alternating_factorization(f: &PLMap) -> Result<AlternatingWord> {
    let s = standard_elements();
    let inner = inner_interval();
    if f.domain() != Interval::unit() {
        return Err(Error::DomainMismatch(format!("expected domain [0, 1], got {}", f.domain())));
    }
    if let Some(hull) = f.support_hull()? {
        if !inner.contains_interval(&hull) {
            return Err(Error::NotInGroup {
                group: "F[1/16,15/16]",
                reason: format!("support hull {hull} leaves [1/16, 15/16]"),
            });
        }
    }
    let pulled = s.phi.compose(&f.restrict(&inner)?)?.compose(&s.phi.invert())?;
    let fw = f_factorize(&pulled)?;
    let word = fw.map_gens(|g| match g {
        FGen::A => NuGen::Nu2,
        FGen::B => NuGen::Nu3,
    });
    Ok(AlternatingWord { nu2_sum: word.exponent_sum(NuGen::Nu2), nu3_sum: word.exponent_sum(NuGen::Nu3), word })
}

/// A word in `nu1, nu2, nu3` for an element of H.
pub fn nu_factorization(h: &PLMap) -> Result<NuWord> {
    require_h(h)?;
    let (k, _) = endpoint_log_slopes(h).expect("H element");
    let nu1 = &standard_elements().nu1;
    let g = h.compose(&nu1.pow(-k)?)?;
    let m = conjugation_depth(&g)? as i64;
    let inner = nu1_conjugate(&g, m)?;
    let alt = alternating_factorization(&inner)?;
    let mut w = NuWord::single(NuGen::Nu1, m);
    w.append(&alt.word);
    w.push(NuGen::Nu1, k - m);
    Ok(w)
}

pub fn eval_nu_word(w: &NuWord) -> PLMap {
    w.eval(&PLMap::identity(&Interval::unit()), |g| g.map().clone())
        .expect("nu words evaluate on [0, 1]")
}
