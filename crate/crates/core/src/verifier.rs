//! Exhaustive, degree-bounded verification of the algebraic identities.
//!
//! Each [`IdentityId`] names one identity together with the kinds of basis
//! elements it quantifies over. [`check`] enumerates every input tuple whose
//! total vertex count is at most the bound, in increasing total degree, and
//! compares both sides exactly. The first mismatch is reported as a
//! counterexample, so counterexamples are minimal in that order.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ck::{self, Antipode};
use crate::doubling;
use crate::doubling_prelie::{leadsto, leadsto_lin, Doubling};
use crate::error::{Error, Result};
use crate::grafting::Grafting;
use crate::linear::{contract_left, contract_right, extend_bilinear, m13, tensor, LinComb, Tensor2, Tensor3, Tensor4};
use crate::oudom_guin::{lift, unshuffle, unshuffle_lin, Enveloping, PreLie};
use crate::relations::{diamond, diamond_lin, simultaneous_grafts, star_g, Targets};
use crate::text::parse;
use crate::tree::{
    enumerate_forests, enumerate_marked_forests, enumerate_marked_trees, enumerate_trees, Forest, MarkedForest,
    MarkedTree, Monomial, Tree,
};

/// Default cap on the number of cases a single check may evaluate.
pub const DEFAULT_MAX_CASES: u64 = 1_000_000;

macro_rules! identities {
    ($($variant:ident => $name:literal,)*) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum IdentityId {
            $(#[serde(rename = $name)] $variant,)*
        }

        impl IdentityId {
            pub const ALL: &'static [IdentityId] = &[$(IdentityId::$variant,)*];

            pub fn name(self) -> &'static str {
                match self {
                    $(IdentityId::$variant => $name,)*
                }
            }
        }

        impl FromStr for IdentityId {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok(IdentityId::$variant),)*
                    _ => Err(Error::UnknownIdentity(s.to_string())),
                }
            }
        }
    };
}

identities! {
    CkCoassoc => "CK_COASSOC",
    CkCompat => "CK_COMPAT",
    CkAntipode => "CK_ANTIPODE",
    PrelieGraft => "PRELIE_GRAFT",
    JacobiGraft => "JACOBI_GRAFT",
    OgHopfCk => "OG_HOPF_CK",
    ComodCoalgH => "COMOD_COALG_H",
    DCoassoc => "D_COASSOC",
    DCompat => "D_COMPAT",
    P2Bialg => "P2_BIALG",
    PrelieDoubling => "PRELIE_DOUBLING",
    OgHopfDbl => "OG_HOPF_DBL",
    ComodCoalgD => "COMOD_COALG_D",
    PrelieModule => "PRELIE_MODULE",
    DiamondDerivation => "DIAMOND_DERIVATION",
    P2PrelieMod => "P2_PRELIE_MOD",
    StargDecomp => "STARG_DECOMP",
    ModuleBialgAction => "MODULE_BIALG_ACTION",
    ModuleBialgDiag1 => "MODULE_BIALG_DIAG1",
    ModuleBialgDiag2 => "MODULE_BIALG_DIAG2",
    GradingAdditive => "GRADING_ADDITIVE",
    MarkClosure => "MARK_CLOSURE",
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Deliberate defects, for checking that the verifier can fail.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mutation {
    #[default]
    None,
    /// `(x a) ▷ b = x ▷ (a ▷ b) + (x ▷ a) ▷ b` in the grafting envelope.
    FlipRule3Sign,
    /// Grafting only at the root.
    RootOnlyGrafting,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    /// Canonical text of each input.
    pub inputs: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail(Counterexample),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub identity: IdentityId,
    pub bound: usize,
    /// Largest total vertex count over all inputs of a case.
    pub max_total_degree: usize,
    /// What each input ranges over.
    pub inputs: Vec<String>,
    pub cases_checked: u64,
    pub mutation: Mutation,
    #[serde(flatten)]
    pub status: Status,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {} bound={} cases={}", self.identity, self.bound, self.cases_checked)?;
        if self.mutation != Mutation::None {
            write!(f, " mutation={:?}", self.mutation)?;
        }
        if let Status::Fail(c) = &self.status {
            write!(f, " inputs=[{}] lhs={} rhs={}", c.inputs.join(", "), c.lhs, c.rhs)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Config {
    pub bound: usize,
    pub max_cases: u64,
    pub mutation: Mutation,
}

impl Config {
    pub fn new(bound: usize) -> Self {
        Self { bound, max_cases: DEFAULT_MAX_CASES, mutation: Mutation::None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Tree,
    Marked,
    Forest,
    ForestOrOne,
    MarkedForest,
    MarkedForestOrOne,
}

impl Kind {
    fn min_degree(self) -> usize {
        match self {
            Kind::ForestOrOne | Kind::MarkedForestOrOne => 0,
            _ => 1,
        }
    }

    fn describe(self) -> &'static str {
        match self {
            Kind::Tree => "tree",
            Kind::Marked => "marked tree",
            Kind::Forest => "non-empty forest",
            Kind::ForestOrOne => "forest",
            Kind::MarkedForest => "non-empty marked forest",
            Kind::MarkedForestOrOne => "marked forest",
        }
    }

    fn objects(self, n: usize) -> Vec<Input> {
        match self {
            Kind::Tree => enumerate_trees(n).into_iter().map(Input::Tree).collect(),
            Kind::Marked => enumerate_marked_trees(n).into_iter().map(Input::Marked).collect(),
            Kind::Forest | Kind::ForestOrOne => {
                if n < self.min_degree() {
                    return Vec::new();
                }
                enumerate_forests(n).into_iter().map(Input::Forest).collect()
            }
            Kind::MarkedForest | Kind::MarkedForestOrOne => {
                if n < self.min_degree() {
                    return Vec::new();
                }
                enumerate_marked_forests(n).into_iter().map(Input::MarkedForest).collect()
            }
        }
    }

    fn parse(self, text: &str) -> Result<Input> {
        let x = parse(text)?;
        let mut terms = x.iter();
        let (m, c) = match (terms.next(), terms.next()) {
            (Some(t), None) if t.1.is_one() => t,
            _ => return Err(Error::WrongKind { expected: self.describe(), found: text.to_string() }),
        };
        let wrong = || Error::WrongKind { expected: self.describe(), found: text.to_string() };
        let _ = c;
        match self {
            Kind::Tree => match m.factors() {
                [t] => Ok(Input::Tree(Tree::try_from(t.clone())?)),
                _ => Err(wrong()),
            },
            Kind::Marked => match m.factors() {
                [t] => Ok(Input::Marked(t.clone())),
                _ => Err(wrong()),
            },
            Kind::Forest | Kind::ForestOrOne => Ok(Input::Forest(m.to_plain()?)),
            Kind::MarkedForest | Kind::MarkedForestOrOne => Ok(Input::MarkedForest(m.clone())),
        }
    }
}

#[derive(Clone, Debug)]
enum Input {
    Tree(Tree),
    Marked(MarkedTree),
    Forest(Forest),
    MarkedForest(MarkedForest),
}

impl Input {
    fn tree(&self) -> &Tree {
        match self {
            Input::Tree(t) => t,
            _ => unreachable!("signature mismatch"),
        }
    }

    fn marked(&self) -> &MarkedTree {
        match self {
            Input::Marked(t) => t,
            _ => unreachable!("signature mismatch"),
        }
    }

    fn forest(&self) -> &Forest {
        match self {
            Input::Forest(f) => f,
            _ => unreachable!("signature mismatch"),
        }
    }

    fn marked_forest(&self) -> &MarkedForest {
        match self {
            Input::MarkedForest(f) => f,
            _ => unreachable!("signature mismatch"),
        }
    }
}

impl fmt::Display for Input {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Input::Tree(t) => t.fmt(f),
            Input::Marked(t) => t.fmt(f),
            Input::Forest(x) => x.fmt(f),
            Input::MarkedForest(x) => x.fmt(f),
        }
    }
}

fn signature(id: IdentityId) -> &'static [Kind] {
    use IdentityId::*;
    use Kind as K;
    match id {
        CkCoassoc | CkAntipode | ComodCoalgH => &[K::Forest],
        CkCompat => &[K::Forest, K::Forest],
        PrelieGraft | JacobiGraft => &[K::Tree, K::Tree, K::Tree],
        OgHopfCk => &[K::Forest, K::Forest, K::ForestOrOne],
        DCoassoc | P2Bialg | ComodCoalgD => &[K::MarkedForest],
        DCompat | GradingAdditive => &[K::MarkedForest, K::MarkedForest],
        PrelieDoubling => &[K::Marked, K::Marked, K::Marked],
        OgHopfDbl => &[K::MarkedForest, K::MarkedForest, K::MarkedForestOrOne],
        PrelieModule => &[K::Tree, K::Tree, K::Marked],
        DiamondDerivation => &[K::Tree, K::Marked, K::Marked],
        P2PrelieMod => &[K::Tree, K::Marked],
        StargDecomp => &[K::MarkedForest, K::Marked],
        ModuleBialgAction => &[K::MarkedForest, K::Forest, K::Forest],
        ModuleBialgDiag1 => &[K::MarkedForest, K::MarkedForest, K::Forest],
        ModuleBialgDiag2 => &[K::MarkedForest, K::Forest],
        MarkClosure => &[K::Marked, K::Marked],
    }
}

/// Largest total degree of a case. Every identity uses the requested bound on
/// the sum of its inputs' vertex counts, which gives tuples with more inputs
/// smaller per-argument budgets.
fn budget(_id: IdentityId, bound: usize) -> usize {
    bound
}

/// Splits `total` over the slots, each at least its kind's minimum.
fn compositions(kinds: &[Kind], total: usize) -> Vec<Vec<usize>> {
    fn go(kinds: &[Kind], left: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        match kinds.split_first() {
            None => {
                if left == 0 {
                    out.push(acc.clone());
                }
            }
            Some((k, rest)) => {
                let reserved: usize = rest.iter().map(|k| k.min_degree()).sum();
                if left < k.min_degree() + reserved {
                    return;
                }
                for d in k.min_degree()..=left - reserved {
                    acc.push(d);
                    go(rest, left - d, acc, out);
                    acc.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    go(kinds, total, &mut Vec::new(), &mut out);
    out
}

struct Mismatch {
    lhs: String,
    rhs: String,
}

type Outcome = std::result::Result<(), Mismatch>;

fn same<B: Ord + Clone + fmt::Display>(label: &str, lhs: &LinComb<B>, rhs: &LinComb<B>) -> Outcome {
    if lhs == rhs {
        Ok(())
    } else {
        Err(Mismatch { lhs: format!("{label}: {lhs}"), rhs: format!("{label}: {rhs}") })
    }
}

fn same_scalar(label: &str, lhs: BigInt, rhs: BigInt) -> Outcome {
    if lhs == rhs {
        Ok(())
    } else {
        Err(Mismatch { lhs: format!("{label}: {lhs}"), rhs: format!("{label}: {rhs}") })
    }
}

fn forest_tensor_mul(
    a: &LinComb<Tensor2<Forest, Forest>>,
    b: &LinComb<Tensor2<Forest, Forest>>,
) -> LinComb<Tensor2<Forest, Forest>> {
    extend_bilinear(a, b, |Tensor2(a1, a2), Tensor2(b1, b2)| LinComb::basis(Tensor2(a1.mul(b1), a2.mul(b2))))
}

fn marked_tensor_mul(
    a: &LinComb<Tensor2<MarkedForest, MarkedForest>>,
    b: &LinComb<Tensor2<MarkedForest, MarkedForest>>,
) -> LinComb<Tensor2<MarkedForest, MarkedForest>> {
    extend_bilinear(a, b, |Tensor2(a1, a2), Tensor2(b1, b2)| LinComb::basis(Tensor2(a1.mul(b1), a2.mul(b2))))
}

/// `(Δ ⊗ id)Δ` and `(id ⊗ Δ)Δ` for any coproduct on monomials.
fn coassociativity<B: Ord + Clone + fmt::Display>(
    x: &Monomial<B>,
    delta: impl Fn(&Monomial<B>) -> LinComb<Tensor2<Monomial<B>, Monomial<B>>>,
) -> Outcome
where
    Monomial<B>: fmt::Display,
{
    let d = delta(x);
    let left = d.linear(|Tensor2(a, b)| delta(a).map_basis(|Tensor2(p, q)| Tensor3(p.clone(), q.clone(), b.clone())));
    let right = d.linear(|Tensor2(a, b)| delta(b).map_basis(|Tensor2(p, q)| Tensor3(a.clone(), p.clone(), q.clone())));
    same("coassociativity", &left, &right)
}

fn counit_axioms<B: Ord + Clone>(
    x: &Monomial<B>,
    d: &LinComb<Tensor2<Monomial<B>, Monomial<B>>>,
    counit: impl Fn(&Monomial<B>) -> BigInt + Copy,
) -> Outcome
where
    Monomial<B>: fmt::Display,
{
    let id = LinComb::basis(x.clone());
    same("left counit", &contract_left(d, counit), &id)?;
    same("right counit", &contract_right(d, counit), &id)
}

/// `(I ⊗ Γ)ρ = (m^13 ⊗ I)(ρ ⊗ ρ)Γ`, `(Δ ⊗ I)ρ = (I ⊗ ρ)ρ` and `(ε ⊗ I)ρ = id`.
fn comodule_coalgebra<B: Ord + Clone>(
    x: &Monomial<B>,
    coaction: impl Fn(&Monomial<B>) -> LinComb<Tensor2<Monomial<B>, Monomial<B>>>,
    coproduct: impl Fn(&Monomial<B>) -> LinComb<Tensor2<Monomial<B>, Monomial<B>>>,
    counit: impl Fn(&Monomial<B>) -> BigInt + Copy,
) -> Outcome
where
    Monomial<B>: fmt::Display,
{
    let rho = coaction(x);
    let lhs = rho
        .linear(|Tensor2(p, r)| unshuffle(r).map_basis(|Tensor2(r1, r2)| Tensor3(p.clone(), r1.clone(), r2.clone())));
    let four = unshuffle(x).linear(|Tensor2(x1, x2)| {
        extend_bilinear(&coaction(x1), &coaction(x2), |Tensor2(p1, r1), Tensor2(p2, r2)| {
            LinComb::basis(Tensor4(p1.clone(), r1.clone(), p2.clone(), r2.clone()))
        })
    });
    let rhs = m13(&four, |a, b| LinComb::basis(a.mul(b)));
    same("(I⊗Γ)ρ vs (m13⊗I)(ρ⊗ρ)Γ", &lhs, &rhs)?;

    let left =
        rho.linear(|Tensor2(p, r)| coproduct(p).map_basis(|Tensor2(a, b)| Tensor3(a.clone(), b.clone(), r.clone())));
    let right =
        rho.linear(|Tensor2(p, r)| coaction(r).map_basis(|Tensor2(a, b)| Tensor3(p.clone(), a.clone(), b.clone())));
    same("coaction coassociativity", &left, &right)?;
    same("coaction counit", &contract_left(&rho, counit), &LinComb::basis(x.clone()))
}

/// Associativity, unit, and compatibility of `★` with the unshuffle coproduct.
fn enveloping_bialgebra<C: PreLie>(
    env: &Enveloping<C>,
    a: &Monomial<C::Basis>,
    b: &Monomial<C::Basis>,
    c: &Monomial<C::Basis>,
) -> Outcome
where
    C::Basis: fmt::Display,
{
    let ab = env.star(a, b);
    let left = env.star_lin(&ab, &LinComb::basis(c.clone()));
    let right = env.star_lin(&LinComb::basis(a.clone()), &env.star(b, c));
    same("associativity", &left, &right)?;
    let one = Monomial::one();
    same("left unit", &env.star(&one, a), &LinComb::basis(a.clone()))?;
    same("right unit", &env.star(a, &one), &LinComb::basis(a.clone()))?;
    let lhs = unshuffle_lin(&ab);
    let rhs = env.star_tensor(&unshuffle(a), &unshuffle(b));
    same("Γ(a★b) vs Γ(a)★Γ(b)", &lhs, &rhs)?;
    same_scalar("counit of product", ab.evaluate(crate::oudom_guin::counit), BigInt::from(0))?;
    coassociativity(a, unshuffle)?;
    let flipped = unshuffle(a).map_basis(|Tensor2(x, y)| Tensor2(y.clone(), x.clone()));
    same("cocommutativity", &flipped, &unshuffle(a))?;
    if let ([x], [y]) = (a.factors(), b.factors()) {
        let mut expected = LinComb::basis(a.mul(b));
        expected += lift(&env.context().product(x, y));
        same("x★y = xy + x▷y", &ab, &expected)?;
    }
    Ok(())
}

struct Engines {
    mutation: Mutation,
    graft: Enveloping<Grafting>,
    dbl: Enveloping<Doubling>,
    antipode: Antipode,
}

impl Engines {
    fn new(mutation: Mutation) -> Self {
        let ctx = Grafting { root_only: mutation == Mutation::RootOnlyGrafting };
        let graft = if mutation == Mutation::FlipRule3Sign {
            Enveloping::with_flipped_rule3(ctx)
        } else {
            Enveloping::new(ctx)
        };
        Self { mutation, graft, dbl: Enveloping::new(Doubling), antipode: Antipode::default() }
    }

    fn graft_product(&self, a: &LinComb<Tree>, b: &LinComb<Tree>) -> LinComb<Tree> {
        extend_bilinear(a, b, |x, y| self.graft.context().product(x, y))
    }

    fn graft_bracket(&self, a: &LinComb<Tree>, b: &LinComb<Tree>) -> LinComb<Tree> {
        self.graft_product(a, b) - self.graft_product(b, a)
    }

    fn alpha(&self, p: &MarkedForest, f: &Forest) -> LinComb<MarkedForest> {
        self.dbl.star(p, &f.to_marked())
    }

    fn alpha_lin(&self, x: &LinComb<MarkedForest>, h: &LinComb<Forest>) -> LinComb<MarkedForest> {
        extend_bilinear(x, h, |p, f| self.alpha(p, f))
    }

    fn evaluate(&self, id: IdentityId, case: &[Input]) -> Outcome {
        use IdentityId::*;
        match id {
            CkCoassoc => {
                let f = case[0].forest();
                coassociativity(f, ck::coproduct)?;
                counit_axioms(f, &ck::coproduct(f), ck::counit)
            }
            CkCompat => {
                let (f, g) = (case[0].forest(), case[1].forest());
                let lhs = ck::coproduct(&f.mul(g));
                let rhs = forest_tensor_mul(&ck::coproduct(f), &ck::coproduct(g));
                same("Δ(fg) vs Δ(f)Δ(g)", &lhs, &rhs)
            }
            CkAntipode => {
                let f = case[0].forest();
                let d = ck::coproduct(f);
                let unit = LinComb::term(ck::counit(f), Forest::one());
                let left =
                    d.linear(|Tensor2(p, r)| ck::product_lin(&self.antipode.apply(p), &LinComb::basis(r.clone())));
                same("m(S⊗id)Δ", &left, &unit)?;
                let right =
                    d.linear(|Tensor2(p, r)| ck::product_lin(&LinComb::basis(p.clone()), &self.antipode.apply(r)));
                same("m(id⊗S)Δ", &right, &unit)
            }
            PrelieGraft => {
                let [x, y, z] = [0, 1, 2].map(|i| LinComb::basis(case[i].tree().clone()));
                let assoc = |a: &LinComb<Tree>, b: &LinComb<Tree>, c: &LinComb<Tree>| {
                    self.graft_product(&self.graft_product(a, b), c) - self.graft_product(a, &self.graft_product(b, c))
                };
                same("associator symmetry", &assoc(&x, &y, &z), &assoc(&y, &x, &z))
            }
            JacobiGraft => {
                let [x, y, z] = [0, 1, 2].map(|i| LinComb::basis(case[i].tree().clone()));
                let br = |a: &LinComb<Tree>, b: &LinComb<Tree>| self.graft_bracket(a, b);
                let sum = br(&x, &br(&y, &z)) + br(&y, &br(&z, &x)) + br(&z, &br(&x, &y));
                same("Jacobi sum", &sum, &LinComb::zero())
            }
            OgHopfCk => {
                let (a, b, c) = (case[0].forest(), case[1].forest(), case[2].forest());
                enveloping_bialgebra(&self.graft, a, b, c)?;
                // a ▷ t as a sum over maps from the factors of a to the vertices of t
                let ab = a.mul(b);
                match c.factors() {
                    [t] => {
                        let closed = simultaneous_grafts(&ab.to_marked(), t.as_marked(), Targets::All)
                            .filter(|m| m.len() == 1)
                            .map_basis(MarkedForest::shape);
                        same("ab▷t vs simultaneous grafts", &self.graft.extended_product(&ab, c), &closed)
                    }
                    _ => Ok(()),
                }
            }
            ComodCoalgH => comodule_coalgebra(case[0].forest(), ck::coaction, ck::coproduct, ck::counit),
            DCoassoc => {
                let p = case[0].marked_forest();
                coassociativity(p, doubling::coproduct)?;
                counit_axioms(p, &doubling::coproduct(p), doubling::counit)
            }
            DCompat => {
                let (p, q) = (case[0].marked_forest(), case[1].marked_forest());
                let lhs = doubling::coproduct(&p.mul(q));
                let rhs = marked_tensor_mul(&doubling::coproduct(p), &doubling::coproduct(q));
                same("Δ(pq) vs Δ(p)Δ(q)", &lhs, &rhs)
            }
            P2Bialg => {
                let p = case[0].marked_forest();
                let lhs = ck::coproduct(&doubling::p2(p));
                let rhs = doubling::coproduct(p).map_basis(|Tensor2(a, b)| Tensor2(doubling::p2(a), doubling::p2(b)));
                same("ΔP2 vs (P2⊗P2)Δ", &lhs, &rhs)?;
                same_scalar("counit", ck::counit(&doubling::p2(p)), doubling::counit(p))
            }
            PrelieDoubling => {
                let [x, y, z] = [0, 1, 2].map(|i| LinComb::basis(case[i].marked().clone()));
                let assoc = |a: &LinComb<MarkedTree>, b: &LinComb<MarkedTree>, c: &LinComb<MarkedTree>| {
                    leadsto_lin(&leadsto_lin(a, b), c) - leadsto_lin(a, &leadsto_lin(b, c))
                };
                let defect = assoc(&x, &y, &z);
                same("associator symmetry", &defect, &assoc(&y, &x, &z))?;
                // both scions land on unmarked vertices of the third tree
                let pair = MarkedForest::from_factors(vec![case[0].marked().clone(), case[1].marked().clone()]);
                let double = simultaneous_grafts(&pair, case[2].marked(), Targets::Unmarked)
                    .filter(|m| m.len() == 1)
                    .map_basis(|m| m.factors()[0].clone());
                same("defect vs double graft", &(-defect), &double)
            }
            OgHopfDbl => enveloping_bialgebra(
                &self.dbl,
                case[0].marked_forest(),
                case[1].marked_forest(),
                case[2].marked_forest(),
            ),
            ComodCoalgD => {
                comodule_coalgebra(case[0].marked_forest(), doubling::coaction, doubling::coproduct, doubling::counit)
            }
            PrelieModule => {
                let [t1, t2] = [0, 1].map(|i| LinComb::basis(case[i].tree().clone()));
                let p = LinComb::basis(case[2].marked().clone());
                let side = |a: &LinComb<Tree>, b: &LinComb<Tree>| {
                    diamond_lin(a, &diamond_lin(b, &p)) - diamond_lin(&self.graft_product(a, b), &p)
                };
                same("module associator symmetry", &side(&t1, &t2), &side(&t2, &t1))
            }
            DiamondDerivation => {
                let t1 = LinComb::basis(case[0].tree().clone());
                let (p, q) = (LinComb::basis(case[1].marked().clone()), LinComb::basis(case[2].marked().clone()));
                let lhs = diamond_lin(&t1, &leadsto_lin(&p, &q));
                let rhs = leadsto_lin(&diamond_lin(&t1, &p), &q) + leadsto_lin(&p, &diamond_lin(&t1, &q));
                same("t◇(p⤳q) vs (t◇p)⤳q + p⤳(t◇q)", &lhs, &rhs)
            }
            P2PrelieMod => {
                let (t1, p) = (case[0].tree(), case[1].marked());
                let lhs = diamond(t1, p).map_basis(MarkedTree::pruning);
                let rhs = self.graft.extended_product(&Forest::single(t1.clone()), &p.pruning());
                same("P2(t◇p) vs t→P2(p)", &lhs, &rhs)
            }
            StargDecomp => {
                let (p1, p2) = (case[0].marked_forest(), case[1].marked());
                let target = MarkedForest::single(p2.clone());
                let bs = self.dbl.star(p1, &target);
                let shapes = bs.map_basis(MarkedForest::shape);
                let expected = self.graft.star(&p1.shape(), &Forest::single(p2.shape())) - star_g(&p1.shape(), p2);
                same("shape(p1✦p2) vs t1★t2 - t1★_g t2", &shapes, &expected)?;
                let s = p1.pruning().mul(&p2.pruning());
                let seconds = bs.map_basis(MarkedForest::pruning);
                same("P2(p1✦p2) vs (Σ coeff) s1s2", &seconds, &LinComb::term(bs.coefficient_sum(), s))?;
                let mut carried = LinComb::basis(p1.mul(&target));
                carried += simultaneous_grafts(p1, p2, Targets::Unmarked);
                same("p1✦p2 vs mark-carrying grafts", &bs, &carried)
            }
            ModuleBialgAction => {
                let p = LinComb::basis(case[0].marked_forest().clone());
                let (f1, f2) = (case[1].forest(), case[2].forest());
                let lhs = self.alpha_lin(&self.alpha_lin(&p, &LinComb::basis(f1.clone())), &LinComb::basis(f2.clone()));
                let rhs = self.alpha_lin(&p, &self.graft.star(f1, f2));
                same("α(α(p,f1),f2) vs α(p,f1★f2)", &lhs, &rhs)
            }
            ModuleBialgDiag1 => {
                let (p1, p2, h) = (case[0].marked_forest(), case[1].marked_forest(), case[2].forest());
                let lhs = self.alpha_lin(&self.dbl.star(p1, p2), &LinComb::basis(h.clone()));
                let rhs =
                    unshuffle(h).linear(|Tensor2(h1, h2)| self.dbl.star_lin(&self.alpha(p1, h1), &self.alpha(p2, h2)));
                same("α∘(✦⊗I) vs ✦∘(α⊗α)∘Γ23", &lhs, &rhs)
            }
            ModuleBialgDiag2 => {
                let (p, h) = (case[0].marked_forest(), case[1].forest());
                let lhs = unshuffle_lin(&self.alpha(p, h));
                let rhs = extend_bilinear(&unshuffle(p), &unshuffle(h), |Tensor2(p1, p2), Tensor2(h1, h2)| {
                    tensor(&self.alpha(p1, h1), &self.alpha(p2, h2))
                });
                same("χ∘α vs (α⊗α)∘τ23∘(χ⊗Γ)", &lhs, &rhs)
            }
            GradingAdditive => self.grading(case[0].marked_forest(), case[1].marked_forest()),
            MarkClosure => self.closure(case[0].marked(), case[1].marked()),
        }
    }

    fn grading(&self, p: &MarkedForest, q: &MarkedForest) -> Outcome {
        fn all_terms<B: Ord + Clone + fmt::Display>(
            label: &str,
            x: &LinComb<B>,
            degree: impl Fn(&B) -> usize,
            expected: usize,
        ) -> Outcome {
            match x.basis_elements().find(|b| degree(b) != expected) {
                None => Ok(()),
                Some(b) => Err(Mismatch {
                    lhs: format!("{label}: degree {} for {b}", degree(b)),
                    rhs: format!("{label}: degree {expected}"),
                }),
            }
        }
        let (t, u) = (p.shape(), q.shape());
        all_terms("Δ_CK", &ck::coproduct(&t), |Tensor2(a, b)| a.vertex_count() + b.vertex_count(), t.vertex_count())?;
        all_terms("Δ_D", &doubling::coproduct(p), |Tensor2(a, b)| a.mark_count() + b.mark_count(), p.mark_count())?;
        all_terms("product", &LinComb::basis(p.mul(q)), MarkedForest::mark_count, p.mark_count() + q.mark_count())?;
        all_terms("★", &self.graft.star(&t, &u), Forest::vertex_count, t.vertex_count() + u.vertex_count())?;
        let bs = self.dbl.star(p, q);
        all_terms("✦ shape", &bs, MarkedForest::vertex_count, p.vertex_count() + q.vertex_count())?;
        all_terms("✦ marks", &bs, MarkedForest::mark_count, p.mark_count() + q.mark_count())
    }

    fn closure(&self, p: &MarkedTree, q: &MarkedTree) -> Outcome {
        let (mp, mq) = (MarkedForest::single(p.clone()), MarkedForest::single(q.clone()));
        let mut produced: Vec<MarkedTree> = Vec::new();
        produced.extend(leadsto(p, q).basis_elements().cloned());
        produced.extend(diamond(&p.shape(), q).basis_elements().cloned());
        for m in self.dbl.star(&mp, &mq).basis_elements() {
            produced.extend(m.factors().iter().cloned());
        }
        for m in self.alpha(&mp, &Forest::single(q.shape())).basis_elements() {
            produced.extend(m.factors().iter().cloned());
        }
        for Tensor2(a, b) in doubling::coproduct(&mp).basis_elements() {
            produced.extend(a.factors().iter().chain(b.factors()).cloned());
        }
        let bad: Vec<String> = produced.iter().filter(|t| !t.is_closed()).map(ToString::to_string).collect();
        if bad.is_empty() {
            Ok(())
        } else {
            crate::tree::record_violation();
            Err(Mismatch { lhs: format!("open mark sets: {}", bad.join(", ")), rhs: "none".to_string() })
        }
    }
}

fn for_each_case(kinds: &[Kind], max_total: usize, mut visit: impl FnMut(&[Input]) -> std::ops::ControlFlow<()>) {
    let min_total: usize = kinds.iter().map(|k| k.min_degree()).sum::<usize>().max(1);
    let mut pools: Vec<Vec<Vec<Input>>> = kinds.iter().map(|_| Vec::new()).collect();
    for total in min_total..=max_total {
        for comp in compositions(kinds, total) {
            for (slot, (&k, &d)) in kinds.iter().zip(&comp).enumerate() {
                while pools[slot].len() <= d {
                    let n = pools[slot].len();
                    pools[slot].push(k.objects(n));
                }
            }
            let lists: Vec<&Vec<Input>> = comp.iter().enumerate().map(|(slot, &d)| &pools[slot][d]).collect();
            if lists.iter().any(|l| l.is_empty()) {
                continue;
            }
            let mut idx = vec![0usize; lists.len()];
            loop {
                let case: Vec<Input> = idx.iter().zip(&lists).map(|(&i, l)| l[i].clone()).collect();
                if visit(&case).is_break() {
                    return;
                }
                let mut k = lists.len();
                loop {
                    if k == 0 {
                        break;
                    }
                    k -= 1;
                    idx[k] += 1;
                    if idx[k] < lists[k].len() {
                        break;
                    }
                    idx[k] = 0;
                    if k == 0 {
                        k = usize::MAX;
                        break;
                    }
                }
                if k == usize::MAX {
                    break;
                }
            }
        }
    }
}

/// Checks one identity on every case up to `bound` with default settings.
pub fn check(id: IdentityId, bound: usize) -> Result<Report> {
    check_with(id, &Config::new(bound))
}

pub fn check_with(id: IdentityId, config: &Config) -> Result<Report> {
    let engines = Engines::new(config.mutation);
    let kinds = signature(id);
    let max_total = budget(id, config.bound);
    let mut report = Report {
        identity: id,
        bound: config.bound,
        max_total_degree: max_total,
        inputs: kinds.iter().map(|k| k.describe().to_string()).collect(),
        cases_checked: 0,
        mutation: config.mutation,
        status: Status::Pass,
    };
    let mut exhausted = false;
    for_each_case(kinds, max_total, |case| {
        if report.cases_checked >= config.max_cases {
            exhausted = true;
            return std::ops::ControlFlow::Break(());
        }
        report.cases_checked += 1;
        match engines.evaluate(id, case) {
            Ok(()) => std::ops::ControlFlow::Continue(()),
            Err(m) => {
                report.status = Status::Fail(Counterexample {
                    inputs: case.iter().map(ToString::to_string).collect(),
                    lhs: m.lhs,
                    rhs: m.rhs,
                });
                std::ops::ControlFlow::Break(())
            }
        }
    });
    debug_assert_eq!(engines.mutation, config.mutation);
    if exhausted {
        return Err(Error::ResourceLimit { partial: Box::new(report) });
    }
    Ok(report)
}

/// Runs every catalog identity, concurrently, reporting in catalog order.
pub fn run_suite(bound: usize) -> Result<Vec<Report>> {
    run_suite_with(&Config::new(bound))
}

pub fn run_suite_with(config: &Config) -> Result<Vec<Report>> {
    IdentityId::ALL.par_iter().map(|&id| check_with(id, config)).collect()
}

/// Re-evaluates a failing report's counterexample. `Ok(true)` when it still fails.
pub fn replay(report: &Report) -> Result<bool> {
    let Status::Fail(c) = &report.status else {
        return Ok(false);
    };
    let kinds = signature(report.identity);
    if kinds.len() != c.inputs.len() {
        return Err(Error::WrongKind { expected: "one input per slot", found: c.inputs.join(", ") });
    }
    let case = kinds.iter().zip(&c.inputs).map(|(k, text)| k.parse(text)).collect::<Result<Vec<_>>>()?;
    Ok(Engines::new(report.mutation).evaluate(report.identity, &case).is_err())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_roundtrip() {
        for &id in IdentityId::ALL {
            assert_eq!(id.name().parse::<IdentityId>().unwrap(), id);
        }
        assert_eq!(IdentityId::ALL.len(), 22);
        assert!("NOPE".parse::<IdentityId>().is_err());
    }

    #[test]
    fn compositions_respect_minimums() {
        let c = compositions(&[Kind::Forest, Kind::ForestOrOne], 2);
        assert_eq!(c, vec![vec![1, 1], vec![2, 0]]);
        assert!(compositions(&[Kind::Tree, Kind::Tree, Kind::Tree], 2).is_empty());
    }

    #[test]
    fn single_vertex_coassociativity() {
        let r = check(IdentityId::CkCoassoc, 1).unwrap();
        assert!(r.passed());
        assert_eq!(r.cases_checked, 1);
    }

    #[test]
    fn prelie_grafting_passes() {
        let r = check(IdentityId::PrelieGraft, 6).unwrap();
        assert!(r.passed(), "{r}");
        assert!(r.cases_checked > 0);
    }

    #[test]
    fn root_only_grafting_is_caught() {
        let config = Config { mutation: Mutation::RootOnlyGrafting, ..Config::new(4) };
        let r = check_with(IdentityId::PrelieGraft, &config).unwrap();
        assert!(!r.passed());
        assert!(replay(&r).unwrap());
        let Status::Fail(c) = &r.status else { unreachable!() };
        assert_eq!(c.inputs.len(), 3);
    }

    #[test]
    fn flipped_rule3_is_caught() {
        let config = Config { mutation: Mutation::FlipRule3Sign, ..Config::new(4) };
        let r = check_with(IdentityId::OgHopfCk, &config).unwrap();
        assert!(!r.passed());
        assert!(replay(&r).unwrap());
        // without the mutation the same inputs pass
        let clean = Report { mutation: Mutation::None, ..r };
        assert!(!replay(&clean).unwrap());
    }

    #[test]
    fn case_budget_cuts_off_deterministically() {
        let config = Config { max_cases: 5, ..Config::new(4) };
        let a = check_with(IdentityId::CkCompat, &config);
        let b = check_with(IdentityId::CkCompat, &config);
        match (a, b) {
            (Err(Error::ResourceLimit { partial: a }), Err(Error::ResourceLimit { partial: b })) => {
                assert_eq!(a.cases_checked, 5);
                assert_eq!(a, b);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn reruns_are_identical() {
        assert_eq!(check(IdentityId::StargDecomp, 4).unwrap(), check(IdentityId::StargDecomp, 4).unwrap());
    }

    #[test]
    fn report_json_shape() {
        let r = check(IdentityId::CkCoassoc, 2).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["identity"], "CK_COASSOC");
        assert_eq!(v["status"], "pass");
        let back: Report = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}
