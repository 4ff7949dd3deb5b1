//! The doubling pre-Lie product `⤳` on marked trees and its enveloping
//! product `✦` on marked forests.

use crate::linear::{extend_bilinear, LinComb};
use crate::oudom_guin::{Enveloping, PreLie};
use crate::tree::{MarkedForest, MarkedTree};

/// `(t1, s1) ⤳ (t2, s2)`: graft `t1`, marks and all, onto each vertex of `t2`
/// outside `s2`. The marked part of every term is `s1 s2`.
pub fn leadsto(p1: &MarkedTree, p2: &MarkedTree) -> LinComb<MarkedTree> {
    let mut out = LinComb::zero();
    for v in p2.vertices() {
        if p2.subtree(&v.path).is_some_and(MarkedTree::is_marked) {
            continue;
        }
        let grafted = p2.graft_at(p1, &v).expect("grafting at an unmarked vertex keeps closure");
        out.add_term(1.into(), grafted);
    }
    out
}

pub fn leadsto_lin(a: &LinComb<MarkedTree>, b: &LinComb<MarkedTree>) -> LinComb<MarkedTree> {
    extend_bilinear(a, b, leadsto)
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Doubling;

impl PreLie for Doubling {
    type Basis = MarkedTree;

    fn product(&self, x: &MarkedTree, y: &MarkedTree) -> LinComb<MarkedTree> {
        leadsto(x, y)
    }
}

pub type DoublingEnvelope = Enveloping<Doubling>;

/// `m1 ✦ m2` on monomials of marked trees.
pub fn bigstar(m1: &MarkedForest, m2: &MarkedForest) -> LinComb<MarkedForest> {
    Enveloping::new(Doubling).star(m1, m2)
}
