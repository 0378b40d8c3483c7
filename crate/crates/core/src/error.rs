use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("point {point} outside domain [{lo}, {hi}]")]
    Domain {
        point: Box<Rational>,
        lo: Box<Rational>,
        hi: Box<Rational>,
    },
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("invalid interval: {0}")]
    InvalidInterval(String),
    #[error("map does not fix the endpoints of its domain")]
    EndpointsNotFixed,
    #[error("not an element of {group}: {reason}")]
    NotInGroup { group: &'static str, reason: String },
    #[error("non-permissible seed word: {0}")]
    Permissibility(String),
    #[error("not a half-integer: {0}")]
    NotHalfInteger(Rational),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("bounded search failed: {0}")]
    SearchFailed(String),
    #[error("element is not in the integer-fixing subgroup: witness integer {witness}")]
    NotInZ { witness: i64 },
    #[error("slope {slope} is not of the form 2^m * {alpha}^n")]
    NotRepresentable { slope: Box<Rational>, alpha: Box<Rational> },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
