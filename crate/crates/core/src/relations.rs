//! Maps tying the grafting world `(T, →)` to the doubling world `(V, ⤳)`.

use crate::doubling_prelie::bigstar;
use crate::linear::{extend_bilinear, LinComb, Tensor2};
use crate::oudom_guin::unshuffle;
use crate::tree::{Forest, MarkedForest, MarkedTree, Monomial, Tree};

/// `t1 ◇ (t2, s2)`: graft `t1` onto each marked vertex; the grafted copy
/// joins the marked part, so the pruning grows by `|t1|` vertices.
pub fn diamond(t1: &Tree, p: &MarkedTree) -> LinComb<MarkedTree> {
    let scion = t1.fully_marked();
    let mut out = LinComb::zero();
    for v in p.vertices() {
        if p.subtree(&v.path).is_some_and(MarkedTree::is_marked) {
            out.add_term(1.into(), p.graft_at(&scion, &v).expect("marked scion on marked vertex"));
        }
    }
    out
}

pub fn diamond_lin(a: &LinComb<Tree>, x: &LinComb<MarkedTree>) -> LinComb<MarkedTree> {
    extend_bilinear(a, x, diamond)
}

/// Which target vertices a simultaneous graft may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Targets {
    /// Any vertex.
    All,
    /// Unmarked vertices only.
    Unmarked,
    /// Any vertices, as long as at least one scion lands on a marked one.
    HitsMarked,
}

/// `Σ_(a) a' · (a'' grafted simultaneously onto target)` over the Sweedler
/// terms with non-empty `a''`, each factor of `a''` going to its own chosen
/// vertex. Scions and target keep their marks.
pub(crate) fn simultaneous_grafts(a: &MarkedForest, target: &MarkedTree, targets: Targets) -> LinComb<MarkedForest> {
    let vertices: Vec<(Vec<usize>, bool)> = target
        .vertices()
        .into_iter()
        .map(|v| {
            let marked = target.subtree(&v.path).is_some_and(MarkedTree::is_marked);
            (v.path, marked)
        })
        .filter(|(_, marked)| targets != Targets::Unmarked || !marked)
        .collect();
    let mut out = LinComb::zero();
    for (Tensor2(kept, grafted), c) in unshuffle(a).iter() {
        if grafted.is_one() || vertices.is_empty() {
            continue;
        }
        let scions = grafted.factors();
        let mut choice = vec![0usize; scions.len()];
        loop {
            let hits_marked = choice.iter().any(|&i| vertices[i].1);
            if targets != Targets::HitsMarked || hits_marked {
                let grafts: Vec<(&[usize], &MarkedTree)> =
                    choice.iter().zip(scions).map(|(&i, s)| (vertices[i].0.as_slice(), s)).collect();
                let grown = target.attach_all(&grafts);
                out.add_term(c.clone(), kept.mul(&Monomial::single(grown)));
            }
            // odometer over vertex choices
            let mut k = 0;
            while k < choice.len() {
                choice[k] += 1;
                if choice[k] < vertices.len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
            if k == choice.len() {
                break;
            }
        }
    }
    out
}

/// `a ★_g (t2, s2)`: the part of `a ★ t2` in which at least one factor is
/// grafted onto a marked vertex of `t2`. Returned at shape level.
///
/// With this convention `(a, s1) ✦ (t2, s2)` has shape `a ★ t2 - a ★_g (t2, s2)`.
pub fn star_g(a: &Forest, p: &MarkedTree) -> LinComb<Forest> {
    simultaneous_grafts(&a.to_marked(), p, Targets::HitsMarked).map_basis(MarkedForest::shape)
}

/// The action `α((t, s) ⊗ t') = (t ★ t', s)` of `H'` on `D'`. The grafts of
/// `★` all land on the unmarked vertices of `t'`, so this is `✦` against the
/// unmarked copy of `t'`, and the marks of `p` ride along unchanged.
pub fn alpha(p: &MarkedForest, f: &Forest) -> LinComb<MarkedForest> {
    bigstar(p, &f.to_marked())
}

pub fn alpha_lin(x: &LinComb<MarkedForest>, h: &LinComb<Forest>) -> LinComb<MarkedForest> {
    extend_bilinear(x, h, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doubling::p2;
    use crate::grafting::Grafting;
    use crate::oudom_guin::Enveloping;
    use crate::text::{parse, parse_tree, to_forests};

    fn t(s: &str) -> MarkedTree {
        parse_tree(s).unwrap()
    }

    fn plain(s: &str) -> Tree {
        Tree::try_from(t(s)).unwrap()
    }

    fn f(s: &str) -> Forest {
        to_forests(&parse(s).unwrap()).unwrap().basis_elements().next().unwrap().clone()
    }

    fn m(s: &str) -> MarkedForest {
        parse(s).unwrap().basis_elements().next().unwrap().clone()
    }

    #[test]
    fn diamond_on_marked_leaf() {
        let out = diamond(&Tree::leaf(), &t("(()*)"));
        assert_eq!(out.to_string(), "((()*)*)");
        assert!(diamond(&plain("(())"), &t("((()))")).is_zero());
        let image: LinComb<Forest> = out.map_basis(|x| p2(&MarkedForest::single(x.clone())));
        let expected =
            crate::grafting::graft_sum(&Tree::leaf(), &Tree::leaf()).map_basis(|x| Forest::single(x.clone()));
        assert_eq!(image, expected);
    }

    #[test]
    fn star_g_examples() {
        assert!(star_g(&f("() (())"), &t("((()))")).is_zero());
        assert_eq!(star_g(&f("()"), &t("(()*)")).to_string(), "((()))");
        assert!(star_g(&Forest::one(), &t("(()*)")).is_zero());
    }

    #[test]
    fn alpha_examples() {
        let p = m("(()*) ()");
        assert_eq!(alpha(&p, &Forest::one()), LinComb::basis(p.clone()));
        let out = alpha(&m("(()*)"), &f("()"));
        assert_eq!(out.to_string(), "((()*)) + (()*) ()");
        assert!(out.basis_elements().all(|x| x.mark_count() == 1 && x.is_closed()));
    }

    #[test]
    fn alpha_shape_is_star() {
        let og = Enveloping::new(Grafting::default());
        for (p, h) in [("(()*) ()", "(())"), ("((()*)*)", "() ()"), ("(()()*)", "(()())")] {
            let (p, h) = (m(p), f(h));
            let shapes = alpha(&p, &h).map_basis(MarkedForest::shape);
            assert_eq!(shapes, og.star(&p.shape(), &h));
        }
    }

    #[test]
    fn simultaneous_all_targets_is_extended_graft() {
        let og = Enveloping::new(Grafting::default());
        let a = f("(()) ()");
        let b = plain("(())");
        let closed = simultaneous_grafts(&a.to_marked(), b.as_marked(), Targets::All)
            .filter(|x| x.len() == 1)
            .map_basis(MarkedForest::shape);
        assert_eq!(closed, og.extended_product(&a, &Forest::single(b)));
    }
}
