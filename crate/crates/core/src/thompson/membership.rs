use crate::error::{Error, Result};
use crate::exact_pl::{Interval, PLMap};

fn f_violation(f: &PLMap) -> Option<String> {
    if f.domain() != Interval::unit() {
        return Some(format!("domain {} is not [0, 1]", f.domain()));
    }
    if !f.fixes_endpoints() {
        return Some("does not fix 0 and 1".into());
    }
    if let Some((x, y)) = f.nodes().iter().find(|(x, y)| !x.is_dyadic() || !y.is_dyadic()) {
        return Some(format!("node ({x}, {y}) is not dyadic"));
    }
    if let Some(s) = f.slopes().into_iter().find(|s| !s.is_power_of_two()) {
        return Some(format!("slope {s} is not a power of 2"));
    }
    None
}

/// Membership in Thompson's group F.
pub fn is_in_f(f: &PLMap) -> bool {
    f_violation(f).is_none()
}

pub fn require_f(f: &PLMap) -> Result<()> {
    match f_violation(f) {
        None => Ok(()),
        Some(reason) => Err(Error::NotInGroup { group: "F", reason }),
    }
}

/// Membership in F': F with identity germs at both endpoints.
pub fn is_in_f_prime(f: &PLMap) -> bool {
    is_in_f(f) && f.slope(0) == crate::Rational::one() && f.slope(f.segment_count() - 1) == crate::Rational::one()
}

pub fn require_f_prime(f: &PLMap) -> Result<()> {
    require_f(f)?;
    if is_in_f_prime(f) {
        Ok(())
    } else {
        Err(Error::NotInGroup { group: "F'", reason: "support closure meets 0 or 1".into() })
    }
}

/// Base-2 logarithms of the slopes at 0 and at 1 (F elements only).
pub fn endpoint_log_slopes(f: &PLMap) -> Option<(i64, i64)> {
    let s0 = f.slope(0).log2_exact()?;
    let s1 = f.slope(f.segment_count() - 1).log2_exact()?;
    Some((s0, s1))
}

/// Membership in H: F elements whose germs at 0 and 1 have equal slope.
pub fn is_in_h(f: &PLMap) -> bool {
    is_in_f(f) && endpoint_log_slopes(f).is_some_and(|(a, b)| a == b)
}

pub fn require_h(f: &PLMap) -> Result<()> {
    require_f(f)?;
    if is_in_h(f) {
        Ok(())
    } else {
        Err(Error::NotInGroup { group: "H", reason: "slopes at 0 and 1 differ".into() })
    }
}
