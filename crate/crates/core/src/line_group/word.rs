use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::thompson::NuGen;

/// Named generators: `z1..z3` and `x1..x3`, plus `g` and `w` for the two
/// extra generators of the extended groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LineGen {
    Zeta(NuGen),
    Chi(NuGen),
    Gamma,
    Omega,
}

impl LineGen {
    pub const BASIC: [LineGen; 6] = [
        LineGen::Zeta(NuGen::Nu1),
        LineGen::Zeta(NuGen::Nu2),
        LineGen::Zeta(NuGen::Nu3),
        LineGen::Chi(NuGen::Nu1),
        LineGen::Chi(NuGen::Nu2),
        LineGen::Chi(NuGen::Nu3),
    ];
}

impl fmt::Display for LineGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LineGen::Zeta(n) => write!(f, "z{}", n.index()),
            LineGen::Chi(n) => write!(f, "x{}", n.index()),
            LineGen::Gamma => write!(f, "g"),
            LineGen::Omega => write!(f, "w"),
        }
    }
}

impl FromStr for LineGen {
    type Err = Error;
    fn from_str(s: &str) -> Result<LineGen> {
        let bad = || Error::Parse(format!("unknown generator {s:?} (expected z1..z3, x1..x3, g, w)"));
        match s {
            "g" => return Ok(LineGen::Gamma),
            "w" => return Ok(LineGen::Omega),
            _ => {}
        }
        let mut chars = s.chars();
        let head = chars.next().ok_or_else(bad)?;
        let idx: usize = chars.as_str().parse().map_err(|_| bad())?;
        let nu = NuGen::from_index(idx).ok_or_else(bad)?;
        match head {
            'z' => Ok(LineGen::Zeta(nu)),
            'x' => Ok(LineGen::Chi(nu)),
            _ => Err(bad()),
        }
    }
}

/// A word over the named generators, e.g. `z2 x2 z1^-1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GroupWord {
    pub letters: Vec<(LineGen, i64)>,
}

impl GroupWord {
    pub fn new(letters: Vec<(LineGen, i64)>) -> GroupWord {
        GroupWord { letters: letters.into_iter().filter(|(_, e)| *e != 0).collect() }
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Length counting `z1^3` as three letters.
    pub fn len(&self) -> usize {
        self.letters.iter().map(|(_, e)| e.unsigned_abs() as usize).sum()
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord { letters: self.letters.iter().rev().map(|(g, e)| (*g, -e)).collect() }
    }

    /// Letters expanded to exponents +1 / -1 and freely reduced.
    pub fn reduced(&self) -> GroupWord {
        let mut out: Vec<(LineGen, i64)> = Vec::new();
        for (g, e) in &self.letters {
            let step = e.signum();
            for _ in 0..e.unsigned_abs() {
                if out.last() == Some(&(*g, -step)) {
                    out.pop();
                } else {
                    out.push((*g, step));
                }
            }
        }
        GroupWord { letters: out }
    }

    pub fn uses_extension(&self) -> bool {
        self.letters.iter().any(|(g, _)| matches!(g, LineGen::Gamma | LineGen::Omega))
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "id");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|(g, e)| if *e == 1 { g.to_string() } else { format!("{g}^{e}") })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl FromStr for GroupWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<GroupWord> {
        let mut letters = Vec::new();
        let mut offset = 0usize;
        for (i, raw) in s.split_whitespace().enumerate() {
            let pos = s[offset..].find(raw).map(|p| p + offset).unwrap_or(offset);
            offset = pos + raw.len();
            if raw == "id" {
                continue;
            }
            let (name, exp) = match raw.split_once('^') {
                Some((n, e)) => {
                    let e: i64 = e.parse().map_err(|_| {
                        Error::Parse(format!("token {} at column {}: bad exponent in {raw:?}", i + 1, pos + 1))
                    })?;
                    (n, e)
                }
                None => (raw, 1),
            };
            let g: LineGen = name
                .parse()
                .map_err(|e: Error| Error::Parse(format!("token {} at column {}: {e}", i + 1, pos + 1)))?;
            letters.push((g, exp));
        }
        Ok(GroupWord::new(letters))
    }
}

impl Serialize for GroupWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GroupWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}
