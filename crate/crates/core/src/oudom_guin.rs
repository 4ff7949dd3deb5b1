//! Enveloping algebra of a pre-Lie algebra on the symmetric algebra.
//!
//! Given a pre-Lie product `▷` on a basis, the product is extended to
//! monomials by
//!
//! ```text
//! 1 ▷ b       = b
//! a ▷ 1       = ε(a) 1
//! (x a) ▷ b   = x ▷ (a ▷ b) - (x ▷ a) ▷ b
//! a ▷ (b c)   = Σ (a' ▷ b)(a'' ▷ c)
//! ```
//!
//! and `a ★ b = Σ a' (a'' ▷ b)`, with `Γ(a) = Σ a' ⊗ a''` the unshuffling
//! coproduct. The right-splitting rule is applied before left peeling.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::linear::{extend_bilinear, LinComb, Tensor2};
use crate::tree::Monomial;

/// A bilinear product on a basis, expected to satisfy the left pre-Lie identity.
pub trait PreLie: Sync {
    type Basis: Clone + Ord + Hash + Send + Sync;

    fn product(&self, x: &Self::Basis, y: &Self::Basis) -> LinComb<Self::Basis>;
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// `Γ(m) = Σ_I m_I ⊗ m_{∖I}` over sub-multisets, with binomial weights for
/// repeated factors.
pub fn unshuffle<B: Ord + Clone>(m: &Monomial<B>) -> LinComb<Tensor2<Monomial<B>, Monomial<B>>> {
    let mut groups: Vec<(&B, usize)> = Vec::new();
    for b in m.factors() {
        match groups.last_mut() {
            Some((g, k)) if *g == b => *k += 1,
            _ => groups.push((b, 1)),
        }
    }
    let mut out = vec![(BigInt::one(), Vec::new(), Vec::new())];
    for (b, k) in groups {
        let mut next = Vec::with_capacity(out.len() * (k + 1));
        for (c, left, right) in &out {
            for j in 0..=k {
                let mut left = left.clone();
                let mut right = right.clone();
                left.extend(std::iter::repeat_n(b.clone(), j));
                right.extend(std::iter::repeat_n(b.clone(), k - j));
                next.push((c * binomial(k, j), left, right));
            }
        }
        out = next;
    }
    LinComb::combine(
        out.into_iter().map(|(c, l, r)| (c, Tensor2(Monomial::from_factors(l), Monomial::from_factors(r)))),
    )
}

pub fn unshuffle_lin<B: Ord + Clone>(x: &LinComb<Monomial<B>>) -> LinComb<Tensor2<Monomial<B>, Monomial<B>>> {
    x.linear(unshuffle)
}

/// The algebra morphism killing every non-empty monomial.
pub fn counit<B: Ord + Clone>(m: &Monomial<B>) -> BigInt {
    if m.is_one() {
        BigInt::one()
    } else {
        BigInt::zero()
    }
}

/// Commutative product of monomial combinations.
pub fn mul<B: Ord + Clone>(a: &LinComb<Monomial<B>>, b: &LinComb<Monomial<B>>) -> LinComb<Monomial<B>> {
    extend_bilinear(a, b, |x, y| LinComb::basis(x.mul(y)))
}

/// Embeds a combination of basis elements as length-one monomials.
pub fn lift<B: Ord + Clone>(x: &LinComb<B>) -> LinComb<Monomial<B>> {
    x.map_basis(|b| Monomial::single(b.clone()))
}

type Memo<B> = Mutex<HashMap<(Monomial<B>, Monomial<B>), LinComb<Monomial<B>>>>;

/// The extended product and `★` for one pre-Lie context, memoized.
pub struct Enveloping<C: PreLie> {
    ctx: C,
    flip_rule3: bool,
    memo: Memo<C::Basis>,
}

impl<C: PreLie> Enveloping<C> {
    pub fn new(ctx: C) -> Self {
        Self { ctx, flip_rule3: false, memo: Mutex::new(HashMap::new()) }
    }

    /// An engine whose left-peeling rule adds instead of subtracts. Only
    /// useful for checking that the verifier notices.
    pub fn with_flipped_rule3(ctx: C) -> Self {
        Self { ctx, flip_rule3: true, memo: Mutex::new(HashMap::new()) }
    }

    pub fn context(&self) -> &C {
        &self.ctx
    }

    /// `a ▷ b` on monomials.
    pub fn extended_product(&self, a: &Monomial<C::Basis>, b: &Monomial<C::Basis>) -> LinComb<Monomial<C::Basis>> {
        if a.is_one() {
            return LinComb::basis(b.clone());
        }
        if b.is_one() {
            return LinComb::zero();
        }
        let key = (a.clone(), b.clone());
        if let Some(hit) = self.memo.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let out = if b.len() >= 2 {
            let (head, rest) = b.split_first().expect("non-empty");
            let head = Monomial::single(head.clone());
            let mut out = LinComb::zero();
            for (Tensor2(a1, a2), c) in unshuffle(a).iter() {
                let left = self.extended_product(a1, &head);
                let right = self.extended_product(a2, &rest);
                out.add_scaled(c, mul(&left, &right));
            }
            out
        } else if a.len() == 1 {
            lift(&self.ctx.product(&a.factors()[0], &b.factors()[0]))
        } else {
            let (x, rest) = a.split_first().expect("non-empty");
            let x = Monomial::single(x.clone());
            let inner = self.extended_product(&rest, b);
            let first = inner.linear(|m| self.extended_product(&x, m));
            let x_on_rest = self.extended_product(&x, &rest);
            let second = x_on_rest.linear(|m| self.extended_product(m, b));
            if self.flip_rule3 {
                first + second
            } else {
                first - second
            }
        };
        self.memo.lock().unwrap().insert(key, out.clone());
        out
    }

    pub fn extended_product_lin(
        &self,
        a: &LinComb<Monomial<C::Basis>>,
        b: &LinComb<Monomial<C::Basis>>,
    ) -> LinComb<Monomial<C::Basis>> {
        extend_bilinear(a, b, |x, y| self.extended_product(x, y))
    }

    /// `a ★ b = Σ a' (a'' ▷ b)`
    pub fn star(&self, a: &Monomial<C::Basis>, b: &Monomial<C::Basis>) -> LinComb<Monomial<C::Basis>> {
        let mut out = LinComb::zero();
        for (Tensor2(a1, a2), c) in unshuffle(a).iter() {
            let grafted = self.extended_product(a2, b);
            out.add_scaled(c, mul(&LinComb::basis(a1.clone()), &grafted));
        }
        out
    }

    pub fn star_lin(
        &self,
        a: &LinComb<Monomial<C::Basis>>,
        b: &LinComb<Monomial<C::Basis>>,
    ) -> LinComb<Monomial<C::Basis>> {
        extend_bilinear(a, b, |x, y| self.star(x, y))
    }

    /// `★` on the tensor square, factor by factor.
    #[allow(clippy::type_complexity)]
    pub fn star_tensor(
        &self,
        a: &LinComb<Tensor2<Monomial<C::Basis>, Monomial<C::Basis>>>,
        b: &LinComb<Tensor2<Monomial<C::Basis>, Monomial<C::Basis>>>,
    ) -> LinComb<Tensor2<Monomial<C::Basis>, Monomial<C::Basis>>> {
        extend_bilinear(a, b, |Tensor2(a1, a2), Tensor2(b1, b2)| {
            crate::linear::tensor(&self.star(a1, b1), &self.star(a2, b2))
        })
    }
}
