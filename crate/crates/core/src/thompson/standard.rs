use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::exact_pl::{Interval, PLMap};
use crate::rational::{q, Rational};

/// Generators of Thompson's group F.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FGen {
    A,
    B,
}

impl fmt::Display for FGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FGen::A => "A",
            FGen::B => "B",
        })
    }
}

/// Generators of H: the symmetric `nu1` and the two generators of F
/// supported in `[1/16, 15/16]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NuGen {
    Nu1,
    Nu2,
    Nu3,
}

impl NuGen {
    pub const ALL: [NuGen; 3] = [NuGen::Nu1, NuGen::Nu2, NuGen::Nu3];

    pub fn index(self) -> usize {
        match self {
            NuGen::Nu1 => 1,
            NuGen::Nu2 => 2,
            NuGen::Nu3 => 3,
        }
    }

    pub fn from_index(i: usize) -> Option<NuGen> {
        match i {
            1 => Some(NuGen::Nu1),
            2 => Some(NuGen::Nu2),
            3 => Some(NuGen::Nu3),
            _ => None,
        }
    }

    pub fn map(self) -> &'static PLMap {
        let s = standard_elements();
        match self {
            NuGen::Nu1 => &s.nu1,
            NuGen::Nu2 => &s.nu2,
            NuGen::Nu3 => &s.nu3,
        }
    }
}

impl fmt::Display for NuGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "nu{}", self.index())
    }
}

/// The fixed elements of F used throughout.
#[derive(Clone, Debug)]
pub struct FStandardSet {
    pub a: PLMap,
    pub b: PLMap,
    pub c0: PLMap,
    pub c1: PLMap,
    pub nu1: PLMap,
    pub nu2: PLMap,
    pub nu3: PLMap,
    /// `[0, 1] -> [1/16, 15/16]`: shift by 1/16 on `[0, 3/4]`, slope 1/2 after.
    pub phi: PLMap,
}

impl FStandardSet {
    pub fn gen(&self, g: FGen) -> &PLMap {
        match g {
            FGen::A => &self.a,
            FGen::B => &self.b,
        }
    }
}

fn nodes(pts: &[(Rational, Rational)]) -> PLMap {
    PLMap::new(pts.to_vec()).expect("standard element nodes are valid")
}

fn build() -> FStandardSet {
    let a = nodes(&[(q(0, 1), q(0, 1)), (q(1, 4), q(1, 2)), (q(1, 2), q(3, 4)), (q(1, 1), q(1, 1))]);
    let b = nodes(&[
        (q(0, 1), q(0, 1)),
        (q(1, 2), q(1, 2)),
        (q(5, 8), q(3, 4)),
        (q(3, 4), q(7, 8)),
        (q(1, 1), q(1, 1)),
    ]);
    let c0 = nodes(&[
        (q(0, 1), q(0, 1)),
        (q(1, 16), q(1, 8)),
        (q(1, 8), q(3, 16)),
        (q(1, 4), q(1, 4)),
        (q(1, 1), q(1, 1)),
    ]);
    let c1 = c0.iota_conjugate().expect("unit domain");
    let nu1 = c0.compose(&c1).expect("same domain");
    let phi = nodes(&[(q(0, 1), q(1, 16)), (q(3, 4), q(13, 16)), (q(1, 1), q(15, 16))]);
    let transplant = |g: &PLMap| {
        phi.invert()
            .compose(g)
            .and_then(|m| m.compose(&phi))
            .and_then(|m| m.extend_by_identity(&Interval::unit()))
            .expect("phi conjugation is well defined")
    };
    let nu2 = transplant(&a);
    let nu3 = transplant(&b);
    FStandardSet { a, b, c0, c1, nu1, nu2, nu3, phi }
}

/// Shared, lazily built standard elements.
pub fn standard_elements() -> &'static FStandardSet {
    static SET: OnceLock<FStandardSet> = OnceLock::new();
    SET.get_or_init(build)
}

/// The interval `[1/16, 15/16]` carrying `nu2`, `nu3`.
pub fn inner_interval() -> Interval {
    Interval::of(q(1, 16), q(15, 16))
}
