use crate::error::Result;
use crate::exact_pl::{Interval, PLMap};
use crate::thompson::standard::{standard_elements, FGen};
use crate::thompson::tree::{tree_pair_from_pl, Tree};
use crate::thompson::word::PowerWord;

pub type FWord = PowerWord<FGen>;

/// `X_0 = A`, `X_n = A^-(n-1) B A^(n-1)`.
fn x_gen(n: usize) -> FWord {
    if n == 0 {
        return FWord::single(FGen::A, 1);
    }
    let k = (n - 1) as i64;
    let mut w = FWord::single(FGen::A, -k);
    w.push(FGen::B, 1);
    w.push(FGen::A, k);
    w
}

/// Positive word for the tree pair `(t, right vine)`, indices shifted by `shift`.
fn vine_word(t: &Tree, shift: usize, out: &mut FWord) {
    let mut current = t.clone();
    let mut shift = shift;
    loop {
        match current {
            Tree::Leaf => return,
            Tree::Node(l, r) => match *l {
                Tree::Leaf => {
                    current = *r;
                    shift += 1;
                }
                Tree::Node(t1, t2) => {
                    out.append(&x_gen(shift));
                    current = Tree::Node(t1, Box::new(Tree::Node(t2, r)));
                }
            },
        }
    }
}

/// A word over `A`, `B` evaluating to `f` (right action, left to right).
pub fn f_factorize(f: &PLMap) -> Result<FWord> {
    let pair = tree_pair_from_pl(f)?;
    let mut pos = FWord::new();
    vine_word(&pair.domain_tree, 0, &mut pos);
    let mut neg = FWord::new();
    vine_word(&pair.range_tree, 0, &mut neg);
    Ok(pos.concat(&neg.inverse()))
}

pub fn eval_f_word(w: &FWord) -> PLMap {
    let s = standard_elements();
    w.eval(&PLMap::identity(&Interval::unit()), |g| s.gen(g).clone())
        .expect("F words evaluate on [0, 1]")
}
