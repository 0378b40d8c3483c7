//! Constructive runs of the normal-closure machinery on finite windows:
//! ping-pong free subgroups, descent into the integer-fixing subgroup,
//! spreading and separating atoms, and extraction of single-atom elements,
//! each certified by a conjugate-product ledger.

mod intersection;
mod ledger;
mod pingpong;
mod pipeline;

use serde::{Deserialize, Serialize};

pub use intersection::{intersection_witness, Factor, IntersectionWitness};
pub use ledger::{Certified, Item, LedgerTerm};
pub use pingpong::{pingpong_element, pingpong_generators, pingpong_table_check, PingPongReport};
pub use pipeline::{
    is_compatible, ChainStep, Compatible, Cover, CoverPiece, Extracted, FlagPartition, IntoZ, Lab, Spread,
    WitnessChain,
};

/// A named verification verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: String) -> Check {
        Check { name: name.into(), passed, detail }
    }
}
