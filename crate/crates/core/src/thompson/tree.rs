use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact_pl::{Interval, PLMap};
use crate::rational::Rational;
use crate::thompson::membership::require_f;

/// A finite rooted binary tree describing a standard dyadic subdivision of
/// `[0, 1]`. JSON form: a leaf is `[]`, a caret is `[left, right]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Tree {
    Leaf,
    Node(Box<Tree>, Box<Tree>),
}

impl Tree {
    pub fn node(l: Tree, r: Tree) -> Tree {
        Tree::Node(Box::new(l), Box::new(r))
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Tree::Leaf => 1,
            Tree::Node(l, r) => l.leaf_count() + r.leaf_count(),
        }
    }

    pub fn caret_count(&self) -> usize {
        self.leaf_count() - 1
    }

    /// Right vine with `n` leaves.
    pub fn right_vine(n: usize) -> Tree {
        assert!(n >= 1);
        let mut t = Tree::Leaf;
        for _ in 1..n {
            t = Tree::node(Tree::Leaf, t);
        }
        t
    }

    /// Leaf intervals, left to right.
    pub fn leaves(&self) -> Vec<Interval> {
        let mut out = Vec::with_capacity(self.leaf_count());
        self.collect_leaves(Interval::unit(), &mut out);
        out
    }

    fn collect_leaves(&self, iv: Interval, out: &mut Vec<Interval>) {
        match self {
            Tree::Leaf => out.push(iv),
            Tree::Node(l, r) => {
                let mid = iv.midpoint();
                l.collect_leaves(Interval::of(iv.lo().clone(), mid.clone()), out);
                r.collect_leaves(Interval::of(mid, iv.hi().clone()), out);
            }
        }
    }

    /// The tree whose leaves are exactly `leaves`, a sorted tiling of `iv` by
    /// standard dyadic intervals.
    fn from_leaves(iv: &Interval, leaves: &[Interval]) -> Result<Tree> {
        match leaves {
            [] => Err(Error::InvalidMap("empty leaf set".into())),
            [only] if only == iv => Ok(Tree::Leaf),
            _ => {
                let mid = iv.midpoint();
                let split = leaves.partition_point(|l| l.hi() <= &mid);
                if split == 0 || split == leaves.len() || leaves[split - 1].hi() != &mid {
                    return Err(Error::InvalidMap(format!("leaves do not form a dyadic tiling of {iv}")));
                }
                let l = Tree::from_leaves(&Interval::of(iv.lo().clone(), mid.clone()), &leaves[..split])?;
                let r = Tree::from_leaves(&Interval::of(mid, iv.hi().clone()), &leaves[split..])?;
                Ok(Tree::node(l, r))
            }
        }
    }
}

impl Serialize for Tree {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Tree::Leaf => Vec::<Tree>::new().serialize(s),
            Tree::Node(l, r) => [l.as_ref(), r.as_ref()].serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Tree {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let mut children = Vec::<Tree>::deserialize(d)?;
        match children.len() {
            0 => Ok(Tree::Leaf),
            2 => {
                let r = children.pop().expect("two children");
                let l = children.pop().expect("two children");
                Ok(Tree::node(l, r))
            }
            n => Err(serde::de::Error::custom(format!("a tree node has 0 or 2 children, got {n}"))),
        }
    }
}

/// An element of F as a pair of trees with equal leaf counts: the i-th
/// domain leaf maps linearly onto the i-th range leaf.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TreePair {
    pub domain_tree: Tree,
    pub range_tree: Tree,
}

impl TreePair {
    pub fn new(domain_tree: Tree, range_tree: Tree) -> Result<Self> {
        if domain_tree.leaf_count() != range_tree.leaf_count() {
            return Err(Error::InvalidMap(format!(
                "leaf counts differ: {} vs {}",
                domain_tree.leaf_count(),
                range_tree.leaf_count()
            )));
        }
        Ok(TreePair { domain_tree, range_tree })
    }
}

fn build_domain_tree(f: &PLMap, iv: Interval) -> Tree {
    let linear = !f.breakpoints().iter().any(|b| iv.contains_open(b));
    if linear {
        let image = Interval::of(f.eval_unchecked(iv.lo()), f.eval_unchecked(iv.hi()));
        if image.is_standard_dyadic() {
            return Tree::Leaf;
        }
    }
    let mid = iv.midpoint();
    Tree::node(
        build_domain_tree(f, Interval::of(iv.lo().clone(), mid.clone())),
        build_domain_tree(f, Interval::of(mid, iv.hi().clone())),
    )
}

/// The reduced tree pair of an element of F.
pub fn tree_pair_from_pl(f: &PLMap) -> Result<TreePair> {
    require_f(f)?;
    let domain_tree = build_domain_tree(f, Interval::unit());
    let images: Vec<Interval> = domain_tree
        .leaves()
        .iter()
        .map(|iv| Interval::of(f.eval_unchecked(iv.lo()), f.eval_unchecked(iv.hi())))
        .collect();
    let range_tree = Tree::from_leaves(&Interval::unit(), &images)?;
    Ok(TreePair { domain_tree, range_tree })
}

pub fn pl_from_tree_pair(t: &TreePair) -> Result<PLMap> {
    let d = t.domain_tree.leaves();
    let r = t.range_tree.leaves();
    if d.len() != r.len() {
        return Err(Error::InvalidMap("tree pair leaf counts differ".into()));
    }
    let mut nodes: Vec<(Rational, Rational)> = vec![(Rational::zero(), Rational::zero())];
    nodes.extend(d.iter().zip(&r).map(|(a, b)| (a.hi().clone(), b.hi().clone())));
    PLMap::new(nodes)
}
