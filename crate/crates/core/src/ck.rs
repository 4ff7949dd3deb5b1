//! The Connes–Kreimer bialgebra `H = S(T)` of rooted forests.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::linear::{extend_bilinear, tensor_apply, LinComb, Tensor2};
use crate::tree::{admissible_cuts, forest_splits, Forest, MarkedTree, Monomial, SplitRule, Tree};

/// Forest product (disjoint union).
pub fn product(a: &Forest, b: &Forest) -> Forest {
    a.mul(b)
}

pub fn product_lin(a: &LinComb<Forest>, b: &LinComb<Forest>) -> LinComb<Forest> {
    extend_bilinear(a, b, |x, y| LinComb::basis(x.mul(y)))
}

/// `Δ(f) = Σ_c P^c(f) ⊗ R^c(f)` over every admissible cut of the whole forest.
pub fn coproduct(f: &Forest) -> LinComb<Tensor2<Forest, Forest>> {
    LinComb::combine(admissible_cuts(f).into_iter().map(|c| (1, Tensor2(c.pruning, c.trunk))))
}

pub fn coproduct_lin(x: &LinComb<Forest>) -> LinComb<Tensor2<Forest, Forest>> {
    x.linear(coproduct)
}

/// The left coaction `H' → H ⊗ H'`: cuts that leave every root on the trunk,
/// so each trunk component is a tree.
pub fn coaction(f: &Forest) -> LinComb<Tensor2<Forest, Forest>> {
    let components: Vec<MarkedTree> = f.factors().iter().map(|t| t.as_marked().clone()).collect();
    let rule = SplitRule { only_marked: false, keep_roots: true };
    LinComb::combine(forest_splits(&components, rule).into_iter().map(|s| {
        let pruning = Monomial::from_factors(s.pieces.into_iter().map(plain).collect());
        let trunk = Monomial::from_factors(s.rest.into_iter().map(plain).collect());
        (1, Tensor2(pruning, trunk))
    }))
}

fn plain(t: MarkedTree) -> Tree {
    Tree::try_from(t).expect("unmarked input stays unmarked")
}

pub fn counit(f: &Forest) -> BigInt {
    if f.is_one() {
        BigInt::one()
    } else {
        BigInt::zero()
    }
}

/// Antipode by the recursion `S(f) = -f - Σ' S(P^c f) R^c f` over nontrivial cuts.
pub struct Antipode {
    memo: Mutex<HashMap<Forest, LinComb<Forest>>>,
}

impl Default for Antipode {
    fn default() -> Self {
        Self { memo: Mutex::new(HashMap::new()) }
    }
}

impl Antipode {
    pub fn apply(&self, f: &Forest) -> LinComb<Forest> {
        if f.is_one() {
            return LinComb::basis(Forest::one());
        }
        if let Some(hit) = self.memo.lock().unwrap().get(f) {
            return hit.clone();
        }
        let mut out = LinComb::term(-1, f.clone());
        for cut in admissible_cuts(f) {
            if cut.pruning.is_one() || cut.trunk.is_one() {
                continue;
            }
            let s = self.apply(&cut.pruning);
            out -= product_lin(&s, &LinComb::basis(cut.trunk));
        }
        self.memo.lock().unwrap().insert(f.clone(), out.clone());
        out
    }
}

pub fn antipode(f: &Forest) -> LinComb<Forest> {
    Antipode::default().apply(f)
}

/// `m ∘ (S ⊗ id) ∘ Δ`, which equals `u ∘ ε`.
pub fn antipode_left_convolution(f: &Forest) -> LinComb<Forest> {
    let s = Antipode::default();
    let d = coproduct(f);
    let applied = tensor_apply(&d, |p| s.apply(p), |r| LinComb::basis(r.clone()));
    applied.linear(|Tensor2(a, b)| LinComb::basis(a.mul(b)))
}
