//! Thompson's group F: the fixed elements, membership tests, tree pairs,
//! factorization over `A`, `B` and over the `nu` generators, and transporters.

mod depth;
mod factor;
mod membership;
mod standard;
mod transport;
mod tree;
mod word;

pub use depth::{
    alternating_factorization, conjugation_depth, eval_nu_word, nu1_conjugate, nu_factorization,
    strict_conjugation_depth, AlternatingWord, NuWord,
};
pub use factor::{eval_f_word, f_factorize, FWord};
pub use membership::{
    endpoint_log_slopes, is_in_f, is_in_f_prime, is_in_h, require_f, require_f_prime, require_h,
};
pub use standard::{inner_interval, standard_elements, FGen, FStandardSet, NuGen};
pub use transport::{
    bump, dyadic_map_between, hump, interval_pair_transporter, interval_transporter, largest_dyadic_inside,
    symmetric_bump,
};
pub use tree::{pl_from_tree_pair, tree_pair_from_pl, Tree, TreePair};
pub use word::{PowerWord, Syllable};

use crate::error::Result;
use crate::exact_pl::PLMap;

/// Evaluates both standard relators of F on a pair of generators.
pub fn relators(a: &PLMap, b: &PLMap) -> Result<[PLMap; 2]> {
    let ab_inv = a.compose(&b.invert())?;
    let a_inv = a.invert();
    let conj1 = a_inv.compose(b)?.compose(a)?;
    let conj2 = a_inv.compose(&a_inv)?.compose(b)?.compose(a)?.compose(a)?;
    Ok([PLMap::commutator(&ab_inv, &conj1)?, PLMap::commutator(&ab_inv, &conj2)?])
}
