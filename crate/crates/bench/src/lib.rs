//! Fixed inputs for the benchmarks.

use arboreal::{Forest, MarkedForest, MarkedTree, Tree};

/// The ladder with `n` vertices.
pub fn ladder(n: usize) -> Forest {
    Forest::single(Tree::ladder(n))
}

/// The corolla with `n` leaves.
pub fn corolla(n: usize) -> Tree {
    Tree::from_children(vec![Tree::leaf(); n])
}

/// A forest of `k` copies of the corolla with `n` leaves.
pub fn corolla_forest(n: usize, k: usize) -> Forest {
    Forest::from_factors(vec![corolla(n); k])
}

/// The corolla with `n` leaves, every leaf marked.
pub fn marked_corolla(n: usize) -> MarkedTree {
    MarkedTree::from_parts(false, vec![MarkedTree::leaf(true); n]).expect("leaves are closed")
}

pub fn marked(t: MarkedTree) -> MarkedForest {
    MarkedForest::single(t)
}
