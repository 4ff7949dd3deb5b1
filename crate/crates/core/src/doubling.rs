//! The doubling bialgebra `D = S(V)`.
//!
//! Basis elements are marked forests; the marks of each component form the
//! pruning `s` of its shape `t`. The coproduct cuts only inside the marked
//! part:
//!
//! ```text
//! Δ(t, s) = Σ_{c ∈ Adm(s)} (t, P^c(s)) ⊗ (R^c(t), R^c(s))
//! ```
//!
//! The left leg keeps the whole shape and marks just the removed set `W`; the
//! right leg deletes `W` from the shape and keeps the remaining marks.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::linear::{extend_bilinear, LinComb, Tensor2};
use crate::tree::{forest_splits, Forest, MarkedForest, MarkedTree, Monomial, SplitRule};

pub fn product(a: &MarkedForest, b: &MarkedForest) -> MarkedForest {
    a.mul(b)
}

pub fn product_lin(a: &LinComb<MarkedForest>, b: &LinComb<MarkedForest>) -> LinComb<MarkedForest> {
    extend_bilinear(a, b, |x, y| LinComb::basis(x.mul(y)))
}

fn split_coproduct(p: &MarkedForest, keep_roots: bool) -> LinComb<Tensor2<MarkedForest, MarkedForest>> {
    let rule = SplitRule { only_marked: true, keep_roots };
    LinComb::combine(forest_splits(p.factors(), rule).into_iter().map(|s| {
        let left = Monomial::from_factors(s.taken.iter().map(MarkedTree::canonicalized).collect());
        let right = Monomial::from_factors(s.rest);
        (1, Tensor2(left, right))
    }))
}

pub fn coproduct(p: &MarkedForest) -> LinComb<Tensor2<MarkedForest, MarkedForest>> {
    split_coproduct(p, false)
}

pub fn coproduct_lin(x: &LinComb<MarkedForest>) -> LinComb<Tensor2<MarkedForest, MarkedForest>> {
    x.linear(coproduct)
}

/// The left coaction `D' → D ⊗ D'`: the coproduct restricted to cuts that
/// leave every root on the right, so no component of `D'` disappears.
pub fn coaction(p: &MarkedForest) -> LinComb<Tensor2<MarkedForest, MarkedForest>> {
    split_coproduct(p, true)
}

/// `ε(t, s) = ε(s)`: one exactly when nothing is marked.
pub fn counit(p: &MarkedForest) -> BigInt {
    if p.mark_count() == 0 {
        BigInt::one()
    } else {
        BigInt::zero()
    }
}

/// Grading by the number of marked vertices.
pub fn degree(p: &MarkedForest) -> usize {
    p.mark_count()
}

/// The second projection `(t, s) ↦ s`.
pub fn p2(p: &MarkedForest) -> Forest {
    p.pruning()
}

pub fn p2_lin(x: &LinComb<MarkedForest>) -> LinComb<Forest> {
    x.map_basis(p2)
}
