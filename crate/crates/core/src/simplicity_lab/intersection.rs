use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_pl::PLMap;
use crate::labelling::half_index;
use crate::line_group::{Elem, LineGroup, Selection};
use crate::rational::Rational;
use crate::thompson::{alternating_factorization, conjugation_depth, nu1_conjugate, require_f_prime, NuGen};

/// One factor of the interleaved product: which flag set it is glued over
/// and the `nu` power it carries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub over: char,
    pub gen: String,
    pub exp: i64,
}

/// Product of `lambda_X` and `lambda_Y` images equal to
/// `lambda_{X cap Y}(atom)`, checked on a window.
#[derive(Clone, Debug)]
pub struct IntersectionWitness {
    pub depth: u32,
    pub factors: Vec<Factor>,
    /// an identity factor was appended to keep the X/Y alternation
    pub padded: bool,
    pub elem: Elem,
    pub target: Elem,
    pub window: (i64, i64),
    pub equal: bool,
}

fn selection(flags: &BTreeSet<Rational>) -> Result<Selection> {
    Ok(Selection::Only(flags.iter().map(half_index).collect::<Result<_>>()?))
}

/// Conjugates `atom` by a power of `nu1` into `[1/16, 15/16]`, factors it
/// there into alternating `nu2`/`nu3` syllables, glues the `nu2` syllables
/// over `x` and the `nu3` syllables over `y`, and conjugates back over `x`.
/// Blocks flagged by only one set see a zero exponent sum and act trivially.
pub fn intersection_witness(
    group: &LineGroup,
    x: &BTreeSet<Rational>,
    y: &BTreeSet<Rational>,
    atom: &PLMap,
    window: (i64, i64),
) -> Result<IntersectionWitness> {
    require_f_prime(atom)?;
    let both: BTreeSet<Rational> = x.intersection(y).cloned().collect();
    if both.is_empty() && !atom.is_identity() {
        return Err(Error::Verification("disjoint flag sets admit only the identity".into()));
    }
    let (sx, sy) = (selection(x)?, selection(y)?);
    let m = conjugation_depth(atom)?;
    let inner = nu1_conjugate(atom, m as i64)?;
    let alt = alternating_factorization(&inner)?;
    let nu = |g: NuGen, e: i64| g.map().pow(e);

    let mut factors = vec![Factor { over: 'X', gen: "nu1".into(), exp: m as i64 }];
    let mut elems = vec![group.lambda(&nu(NuGen::Nu1, m as i64)?, sx.clone())?];
    for s in alt.word.syllables() {
        let (over, sel, name) = match s.gen {
            NuGen::Nu2 => ('X', &sx, "nu2"),
            _ => ('Y', &sy, "nu3"),
        };
        factors.push(Factor { over, gen: name.into(), exp: s.exp });
        elems.push(group.lambda(&nu(s.gen, s.exp)?, sel.clone())?);
    }
    let padded = alt.word.syllables().len() % 2 == 1;
    if padded {
        factors.push(Factor { over: 'Y', gen: "id".into(), exp: 0 });
    }
    factors.push(Factor { over: 'X', gen: "nu1".into(), exp: -(m as i64) });
    elems.push(group.lambda(&nu(NuGen::Nu1, -(m as i64))?, sx)?);

    let elem = Elem::product(elems);
    let target = group.lambda(atom, selection(&both)?)?;
    let equal = group.equal_on(&elem, &target, window.0, window.1)?;
    Ok(IntersectionWitness { depth: m, factors, padded, elem, target, window, equal })
}
