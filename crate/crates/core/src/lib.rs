pub mod batch;
pub mod error;
pub mod exact_pl;
pub mod extension;
pub mod labelling;
pub mod line_group;
pub mod rational;
pub mod simplicity_lab;
pub mod thompson;
pub mod verify;

pub use error::{Error, Result};
pub use exact_pl::{Interval, PLMap};
pub use rational::{q, Rational};
