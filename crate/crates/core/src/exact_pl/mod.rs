//! Exact piecewise-linear homeomorphisms of closed rational intervals.

mod interval;
mod map;

pub use interval::{dyadic_decomposition, Interval};
pub use map::{FixedSet, PLMap};
