//! The grafting pre-Lie product on rooted trees.

use crate::linear::{extend_bilinear, LinComb};
use crate::oudom_guin::PreLie;
use crate::tree::{Tree, VertexRef};

/// `t → s`: graft the root of `t` onto every vertex of `s` in turn.
pub fn graft_sum(t: &Tree, s: &Tree) -> LinComb<Tree> {
    LinComb::combine(s.vertices().iter().map(|v| (1, s.graft_at(t, v).expect("unmarked graft"))))
}

pub fn graft(a: &LinComb<Tree>, b: &LinComb<Tree>) -> LinComb<Tree> {
    extend_bilinear(a, b, graft_sum)
}

/// `[a, b] = a → b - b → a`
pub fn bracket(a: &LinComb<Tree>, b: &LinComb<Tree>) -> LinComb<Tree> {
    graft(a, b) - graft(b, a)
}

/// Grafting as a pre-Lie context for the enveloping-algebra engine.
#[derive(Clone, Copy, Debug, Default)]
pub struct Grafting {
    /// Graft only at the root. Not pre-Lie; exists to exercise the verifier.
    pub root_only: bool,
}

impl PreLie for Grafting {
    type Basis = Tree;

    fn product(&self, x: &Tree, y: &Tree) -> LinComb<Tree> {
        if self.root_only {
            LinComb::basis(y.graft_at(x, &VertexRef::root()).expect("root exists"))
        } else {
            graft_sum(x, y)
        }
    }
}
