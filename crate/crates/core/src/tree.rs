//! Canonical unordered rooted trees, forests and marked trees.
//!
//! A [`MarkedTree`] is a rooted tree together with a descendant-closed set of
//! marked vertices. The marked vertices form the pruning `s` of an admissible
//! cut of the tree, so a marked tree encodes one element `(t, s)` of the
//! doubling space. A plain [`Tree`] is a marked tree with no marks.
//!
//! Children are kept sorted by the order on canonical encodings, so two trees
//! are isomorphic iff they are structurally equal. The encoding of a vertex is
//! `(` followed by the encodings of its children and `)`, with a trailing `*`
//! when the vertex is marked. The derived order agrees with byte-wise
//! comparison of those encodings.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use crate::error::{Error, Result};

static CLOSURE_VIOLATIONS: AtomicUsize = AtomicUsize::new(0);

/// Number of descendant-closure violations detected by operations since
/// process start. Stays at zero while every operation behaves.
pub fn closure_violations() -> usize {
    CLOSURE_VIOLATIONS.load(AtomicOrdering::Relaxed)
}

pub(crate) fn record_violation() {
    CLOSURE_VIOLATIONS.fetch_add(1, AtomicOrdering::Relaxed);
}

/// Address of a vertex: a component index (0 for a single tree) and the child
/// indices to follow from that component's root, in canonical order.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexRef {
    pub component: usize,
    pub path: Vec<usize>,
}

impl VertexRef {
    pub fn root() -> Self {
        Self::default()
    }

    pub fn in_tree(path: Vec<usize>) -> Self {
        Self { component: 0, path }
    }
}

impl fmt::Display for VertexRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.component)?;
        for (i, p) in self.path.iter().enumerate() {
            if i > 0 {
                f.write_str("/")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MarkedTree {
    marked: bool,
    children: Vec<MarkedTree>,
}

impl Ord for MarkedTree {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.children.iter().zip(&other.children) {
            match a.cmp(b) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        // `((..)(` sorts before `((..))`, so the vertex with more children comes first;
        // an unmarked encoding is a prefix of the marked one.
        other.children.len().cmp(&self.children.len()).then(self.marked.cmp(&other.marked))
    }
}

impl PartialOrd for MarkedTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl MarkedTree {
    pub fn leaf(marked: bool) -> Self {
        Self { marked, children: Vec::new() }
    }

    /// Builds a vertex over the given subtrees, sorting them canonically.
    pub fn from_parts(marked: bool, children: Vec<MarkedTree>) -> Result<Self> {
        if marked {
            if let Some(c) = children.iter().find(|c| !c.marked) {
                return Err(Error::InvalidMarks(format!("marked vertex has unmarked child {c}")));
            }
        }
        Ok(Self::raw(marked, children).sorted())
    }

    /// Rebuilds `self` with children recursively sorted; validates closure.
    pub fn canonicalize(&self) -> Result<Self> {
        let out = self.canonicalized();
        if !out.is_closed() {
            return Err(Error::InvalidMarks(format!("{out} is not descendant-closed")));
        }
        Ok(out)
    }

    pub(crate) fn raw(marked: bool, children: Vec<MarkedTree>) -> Self {
        Self { marked, children }
    }

    fn sorted(mut self) -> Self {
        self.children.sort();
        self
    }

    pub(crate) fn canonicalized(&self) -> Self {
        let mut children: Vec<_> = self.children.iter().map(Self::canonicalized).collect();
        children.sort();
        Self { marked: self.marked, children }
    }

    pub fn is_marked(&self) -> bool {
        self.marked
    }

    pub fn children(&self) -> &[MarkedTree] {
        &self.children
    }

    pub fn vertex_count(&self) -> usize {
        1 + self.children.iter().map(Self::vertex_count).sum::<usize>()
    }

    pub fn mark_count(&self) -> usize {
        usize::from(self.marked) + self.children.iter().map(Self::mark_count).sum::<usize>()
    }

    /// Descendant closure: every child of a marked vertex is marked.
    pub fn is_closed(&self) -> bool {
        self.children.iter().all(|c| (!self.marked || c.marked) && c.is_closed())
    }

    pub fn is_fully_marked(&self) -> bool {
        self.marked && self.children.iter().all(Self::is_fully_marked)
    }

    /// The underlying tree with marks forgotten.
    pub fn shape(&self) -> Tree {
        Tree(self.with_all_marks(false))
    }

    pub(crate) fn with_all_marks(&self, marked: bool) -> MarkedTree {
        let mut children: Vec<_> = self.children.iter().map(|c| c.with_all_marks(marked)).collect();
        children.sort();
        MarkedTree { marked, children }
    }

    /// The marked part `s` as a forest of plain trees.
    pub fn pruning(&self) -> Forest {
        let mut pieces = Vec::new();
        self.collect_marked_pieces(&mut pieces);
        Monomial::from_factors(pieces)
    }

    fn collect_marked_pieces(&self, out: &mut Vec<Tree>) {
        if self.marked {
            out.push(self.shape());
        } else {
            for c in &self.children {
                c.collect_marked_pieces(out);
            }
        }
    }

    /// All vertices in preorder (root first, children in canonical order).
    pub fn vertices(&self) -> Vec<VertexRef> {
        let mut out = Vec::with_capacity(self.vertex_count());
        let mut path = Vec::new();
        self.collect_vertices(&mut path, &mut out);
        out
    }

    fn collect_vertices(&self, path: &mut Vec<usize>, out: &mut Vec<VertexRef>) {
        out.push(VertexRef::in_tree(path.clone()));
        for (i, c) in self.children.iter().enumerate() {
            path.push(i);
            c.collect_vertices(path, out);
            path.pop();
        }
    }

    pub fn subtree(&self, path: &[usize]) -> Option<&MarkedTree> {
        match path.split_first() {
            None => Some(self),
            Some((i, rest)) => self.children.get(*i)?.subtree(rest),
        }
    }

    fn subtree_mut(&mut self, path: &[usize]) -> Option<&mut MarkedTree> {
        match path.split_first() {
            None => Some(self),
            Some((i, rest)) => self.children.get_mut(*i)?.subtree_mut(rest),
        }
    }

    /// Grafts the root of `scion` onto vertex `at` of `self`; `scion` keeps its marks.
    ///
    /// Fails with [`Error::ClosureViolation`] when `at` is marked and the scion
    /// root is not, since the result would not be descendant-closed.
    pub fn graft_at(&self, scion: &MarkedTree, at: &VertexRef) -> Result<MarkedTree> {
        let target = self
            .subtree(&at.path)
            .filter(|_| at.component == 0)
            .ok_or_else(|| Error::InvalidVertex(format!("{at} in {self}")))?;
        if target.marked && !scion.marked {
            record_violation();
            return Err(Error::ClosureViolation(format!(
                "grafting unmarked {scion} onto marked vertex {at} of {self}"
            )));
        }
        Ok(self.graft_unchecked(scion, &at.path))
    }

    fn graft_unchecked(&self, scion: &MarkedTree, path: &[usize]) -> MarkedTree {
        match path.split_first() {
            None => {
                let mut children = self.children.clone();
                children.push(scion.clone());
                MarkedTree::raw(self.marked, children).sorted()
            }
            Some((i, rest)) => {
                let mut children = self.children.clone();
                children[*i] = children[*i].graft_unchecked(scion, rest);
                MarkedTree::raw(self.marked, children).sorted()
            }
        }
    }

    /// Grafts several scions at once. Paths refer to `self`, and appending
    /// children never disturbs existing indices, so all grafts land where
    /// addressed. The result is canonicalized but closure is not checked.
    pub(crate) fn attach_all(&self, grafts: &[(&[usize], &MarkedTree)]) -> MarkedTree {
        let mut out = self.clone();
        for (path, scion) in grafts {
            out.subtree_mut(path).expect("graft path valid").children.push((*scion).clone());
        }
        out.canonicalized()
    }
}

impl fmt::Display for MarkedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for c in &self.children {
            write!(f, "{c}")?;
        }
        f.write_str(if self.marked { ")*" } else { ")" })
    }
}

impl fmt::Debug for MarkedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An unmarked rooted tree, a basis element of the pre-Lie algebra of trees.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tree(MarkedTree);

impl Tree {
    /// The single vertex `•`.
    pub fn leaf() -> Self {
        Tree(MarkedTree::leaf(false))
    }

    /// A root over the given subtrees.
    pub fn from_children(children: Vec<Tree>) -> Self {
        Tree(MarkedTree::raw(false, children.into_iter().map(|t| t.0).collect()).sorted())
    }

    /// The chain with `n` vertices.
    pub fn ladder(n: usize) -> Self {
        assert!(n >= 1, "a tree has at least one vertex");
        (1..n).fold(Tree::leaf(), |t, _| Tree::from_children(vec![t]))
    }

    pub fn as_marked(&self) -> &MarkedTree {
        &self.0
    }

    pub fn into_marked(self) -> MarkedTree {
        self.0
    }

    /// The same tree with every vertex marked, i.e. the pair `(t, t)`.
    pub fn fully_marked(&self) -> MarkedTree {
        self.0.with_all_marks(true)
    }

    pub fn children(&self) -> impl Iterator<Item = Tree> + '_ {
        self.0.children.iter().map(|c| Tree(c.clone()))
    }

    pub fn vertex_count(&self) -> usize {
        self.0.vertex_count()
    }

    pub fn vertices(&self) -> Vec<VertexRef> {
        self.0.vertices()
    }

    pub fn graft_at(&self, scion: &Tree, at: &VertexRef) -> Result<Tree> {
        self.0.graft_at(&scion.0, at).map(Tree)
    }
}

impl TryFrom<MarkedTree> for Tree {
    type Error = Error;

    fn try_from(t: MarkedTree) -> Result<Self> {
        if t.mark_count() > 0 {
            return Err(Error::WrongKind { expected: "an unmarked tree", found: t.to_string() });
        }
        Ok(Tree(t.canonicalized()))
    }
}

impl From<Tree> for MarkedTree {
    fn from(t: Tree) -> Self {
        t.0
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// A commutative monomial: a multiset of basis elements stored sorted.
///
/// The empty monomial is the unit `1`. It sorts after every non-empty
/// monomial, matching the byte order of the printed forms (`1` follows `(`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial<B>(Vec<B>);

/// A forest of plain trees: basis of `H = S(T)` and of `H'`.
pub type Forest = Monomial<Tree>;

/// A forest of marked trees: basis of `D = S(V)` and of `D'`.
pub type MarkedForest = Monomial<MarkedTree>;

impl<B: Ord> Ord for Monomial<B> {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.0.is_empty(), other.0.is_empty()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => self.0.cmp(&other.0),
        }
    }
}

impl<B: Ord> PartialOrd for Monomial<B> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<B: Ord + Clone> Monomial<B> {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn single(b: B) -> Self {
        Monomial(vec![b])
    }

    pub fn from_factors(mut factors: Vec<B>) -> Self {
        factors.sort();
        Monomial(factors)
    }

    pub fn factors(&self) -> &[B] {
        &self.0
    }

    pub fn into_factors(self) -> Vec<B> {
        self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut factors = Vec::with_capacity(self.0.len() + other.0.len());
        factors.extend_from_slice(&self.0);
        factors.extend_from_slice(&other.0);
        Monomial::from_factors(factors)
    }

    /// Splits off the first factor: `m = x · rest`.
    pub fn split_first(&self) -> Option<(&B, Monomial<B>)> {
        let (x, rest) = self.0.split_first()?;
        Some((x, Monomial(rest.to_vec())))
    }

    pub fn map<C: Ord + Clone>(&self, f: impl FnMut(&B) -> C) -> Monomial<C> {
        Monomial::from_factors(self.0.iter().map(f).collect())
    }
}

impl Forest {
    pub fn vertex_count(&self) -> usize {
        self.0.iter().map(Tree::vertex_count).sum()
    }

    /// Vertices of all components; `component` indexes the sorted factor list.
    pub fn vertices(&self) -> Vec<VertexRef> {
        vertices_of(self.0.iter().map(Tree::as_marked))
    }

    pub fn to_marked(&self) -> MarkedForest {
        self.map(|t| t.as_marked().clone())
    }
}

impl MarkedForest {
    pub fn vertex_count(&self) -> usize {
        self.0.iter().map(MarkedTree::vertex_count).sum()
    }

    pub fn mark_count(&self) -> usize {
        self.0.iter().map(MarkedTree::mark_count).sum()
    }

    pub fn is_closed(&self) -> bool {
        self.0.iter().all(MarkedTree::is_closed)
    }

    pub fn shape(&self) -> Forest {
        self.map(MarkedTree::shape)
    }

    /// The marked parts of all components, multiplied together.
    pub fn pruning(&self) -> Forest {
        self.0.iter().fold(Forest::one(), |acc, t| acc.mul(&t.pruning()))
    }

    pub fn vertices(&self) -> Vec<VertexRef> {
        vertices_of(self.0.iter())
    }

    pub fn to_plain(&self) -> Result<Forest> {
        let trees = self.0.iter().cloned().map(Tree::try_from).collect::<Result<Vec<_>>>()?;
        Ok(Monomial::from_factors(trees))
    }
}

fn vertices_of<'a>(components: impl Iterator<Item = &'a MarkedTree>) -> Vec<VertexRef> {
    components
        .enumerate()
        .flat_map(|(i, t)| t.vertices().into_iter().map(move |v| VertexRef { component: i, path: v.path }))
        .collect()
}

impl<B: fmt::Display> fmt::Display for Monomial<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl<B: fmt::Display> fmt::Debug for Monomial<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// One admissible cut of a forest, given by the descendant-closed vertex set
/// that goes to the pruning side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cut {
    pub pruning: Forest,
    pub trunk: Forest,
    /// The removed vertex set, addressed in the input forest.
    pub selected: Vec<VertexRef>,
}

/// Which vertices may be removed when splitting a tree.
#[derive(Clone, Copy, Debug)]
pub(crate) struct SplitRule {
    /// Only marked vertices may be removed.
    pub only_marked: bool,
    /// Roots always stay on the trunk side.
    pub keep_roots: bool,
}

/// Removal of one descendant-closed vertex set `W` from a forest.
#[derive(Clone, Debug)]
pub(crate) struct Split {
    /// The input with marks replaced by `W`, children in input order.
    pub taken: Vec<MarkedTree>,
    /// What remains after deleting `W`; original marks kept.
    pub rest: Vec<MarkedTree>,
    /// The maximal subtrees in `W`; original marks kept.
    pub pieces: Vec<MarkedTree>,
}

fn tree_splits(
    node: &MarkedTree,
    rule: SplitRule,
    is_root: bool,
) -> Vec<(MarkedTree, Option<MarkedTree>, Vec<MarkedTree>)> {
    // Each vertex not in W combines independent choices for its children.
    let mut partial: Vec<(Vec<MarkedTree>, Vec<MarkedTree>, Vec<MarkedTree>)> =
        vec![(Vec::new(), Vec::new(), Vec::new())];
    for child in &node.children {
        let options = tree_splits(child, rule, false);
        let mut next = Vec::with_capacity(partial.len() * options.len());
        for (taken, rest, pieces) in &partial {
            for (t, r, p) in &options {
                let mut taken = taken.clone();
                taken.push(t.clone());
                let mut rest = rest.clone();
                rest.extend(r.iter().cloned());
                let mut pieces = pieces.clone();
                pieces.extend(p.iter().cloned());
                next.push((taken, rest, pieces));
            }
        }
        partial = next;
    }
    let mut out: Vec<_> = partial
        .into_iter()
        .map(|(taken, rest, pieces)| (MarkedTree::raw(false, taken), Some(MarkedTree::raw(node.marked, rest)), pieces))
        .collect();
    let removable = !(is_root && rule.keep_roots) && (!rule.only_marked || node.marked);
    if removable {
        out.push((node.with_marks_unsorted(true), None, vec![node.clone()]));
    }
    out
}

impl MarkedTree {
    fn with_marks_unsorted(&self, marked: bool) -> MarkedTree {
        MarkedTree::raw(marked, self.children.iter().map(|c| c.with_marks_unsorted(marked)).collect())
    }
}

/// Every way to remove a descendant-closed vertex set from a forest.
pub(crate) fn forest_splits(components: &[MarkedTree], rule: SplitRule) -> Vec<Split> {
    let mut partial = vec![Split { taken: Vec::new(), rest: Vec::new(), pieces: Vec::new() }];
    for component in components {
        let options = tree_splits(component, rule, true);
        let mut next = Vec::with_capacity(partial.len() * options.len());
        for s in &partial {
            for (t, r, p) in &options {
                let mut s = s.clone();
                s.taken.push(t.clone());
                s.rest.extend(r.iter().map(MarkedTree::canonicalized));
                s.pieces.extend(p.iter().cloned());
                next.push(s);
            }
        }
        partial = next;
    }
    partial
}

fn marked_refs(components: &[MarkedTree]) -> Vec<VertexRef> {
    fn walk(t: &MarkedTree, component: usize, path: &mut Vec<usize>, out: &mut Vec<VertexRef>) {
        if t.marked {
            out.push(VertexRef { component, path: path.clone() });
        }
        for (i, c) in t.children.iter().enumerate() {
            path.push(i);
            walk(c, component, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    for (i, t) in components.iter().enumerate() {
        walk(t, i, &mut Vec::new(), &mut out);
    }
    out
}

/// All admissible cuts of a forest, trivial ones included: one entry per
/// descendant-closed vertex subset, in a fixed enumeration order.
pub fn admissible_cuts(f: &Forest) -> Vec<Cut> {
    let components: Vec<MarkedTree> = f.factors().iter().map(|t| t.as_marked().clone()).collect();
    forest_splits(&components, SplitRule { only_marked: false, keep_roots: false })
        .into_iter()
        .map(|s| Cut {
            selected: marked_refs(&s.taken),
            pruning: Monomial::from_factors(s.pieces.into_iter().map(Tree).collect()),
            trunk: Monomial::from_factors(s.rest.into_iter().map(Tree).collect()),
        })
        .collect()
}

/// All canonical trees with `n` vertices, sorted. Empty for `n = 0`.
pub fn enumerate_trees(n: usize) -> Vec<Tree> {
    match n {
        0 => Vec::new(),
        1 => vec![Tree::leaf()],
        _ => {
            let mut out = BTreeSet::new();
            for t in enumerate_trees(n - 1) {
                for v in t.vertices() {
                    out.insert(t.graft_at(&Tree::leaf(), &v).expect("unmarked graft"));
                }
            }
            out.into_iter().collect()
        }
    }
}

/// Every tree with `n` vertices under every descendant-closed mark set, sorted.
pub fn enumerate_marked_trees(n: usize) -> Vec<MarkedTree> {
    let mut out = BTreeSet::new();
    for t in enumerate_trees(n) {
        out.extend(markings(&t));
    }
    out.into_iter().collect()
}

/// The distinct marked trees with shape `t`.
pub fn markings(t: &Tree) -> Vec<MarkedTree> {
    let rule = SplitRule { only_marked: false, keep_roots: false };
    let set: BTreeSet<MarkedTree> = forest_splits(std::slice::from_ref(t.as_marked()), rule)
        .into_iter()
        .map(|s| s.taken[0].canonicalized())
        .collect();
    set.into_iter().collect()
}

/// All multisets of `pool` elements whose weights sum to `n`, where `pool`
/// lists `(element, weight)` pairs with positive weights.
pub fn multisets<B: Ord + Clone>(pool: &[(B, usize)], n: usize) -> Vec<Monomial<B>> {
    fn go<B: Ord + Clone>(
        pool: &[(B, usize)],
        start: usize,
        left: usize,
        acc: &mut Vec<B>,
        out: &mut Vec<Monomial<B>>,
    ) {
        if left == 0 {
            out.push(Monomial::from_factors(acc.clone()));
            return;
        }
        for i in start..pool.len() {
            let (b, w) = &pool[i];
            if *w <= left {
                acc.push(b.clone());
                go(pool, i, left - w, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(pool, 0, n, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// All forests with `n` vertices in total; `[1]` for `n = 0`.
pub fn enumerate_forests(n: usize) -> Vec<Forest> {
    let pool: Vec<(Tree, usize)> = (1..=n).flat_map(|k| enumerate_trees(k).into_iter().map(move |t| (t, k))).collect();
    multisets(&pool, n)
}

/// All marked forests whose shapes have `n` vertices in total.
pub fn enumerate_marked_forests(n: usize) -> Vec<MarkedForest> {
    let pool: Vec<(MarkedTree, usize)> =
        (1..=n).flat_map(|k| enumerate_marked_trees(k).into_iter().map(move |t| (t, k))).collect();
    multisets(&pool, n)
}
