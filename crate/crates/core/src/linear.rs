//! Finite formal sums with exact integer coefficients.
//!
//! Every algebraic structure in this crate is defined on basis elements and
//! extended (bi)linearly. [`LinComb`] is the free module over an ordered basis;
//! tensor bases are the [`Tensor2`], [`Tensor3`] and [`Tensor4`] tuples.

use std::collections::btree_map::{self, BTreeMap};
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

/// A finite linear combination of basis elements of type `B`.
///
/// Zero coefficients are never stored, and terms iterate in the order of `B`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinComb<B: Ord> {
    terms: BTreeMap<B, BigInt>,
}

impl<B: Ord> Default for LinComb<B> {
    fn default() -> Self {
        Self { terms: BTreeMap::new() }
    }
}

impl<B: Ord + Clone> LinComb<B> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(b: B) -> Self {
        Self::term(BigInt::one(), b)
    }

    pub fn term(coeff: impl Into<BigInt>, b: B) -> Self {
        let mut out = Self::zero();
        out.add_term(coeff.into(), b);
        out
    }

    /// Sums the coefficients of equal basis elements and drops zeros.
    pub fn combine<C, I>(terms: I) -> Self
    where
        C: Into<BigInt>,
        I: IntoIterator<Item = (C, B)>,
    {
        let mut out = Self::zero();
        for (c, b) in terms {
            out.add_term(c.into(), b);
        }
        out
    }

    pub fn add_term(&mut self, coeff: BigInt, b: B) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(b) {
            btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += coeff * other`
    pub fn add_scaled(&mut self, coeff: &BigInt, other: LinComb<B>) {
        for (b, c) in other.terms {
            self.add_term(c * coeff, b);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, b: &B) -> BigInt {
        self.terms.get(b).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&B, &BigInt)> {
        self.terms.iter()
    }

    pub fn basis_elements(&self) -> impl Iterator<Item = &B> {
        self.terms.keys()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(b, c)| (b.clone(), c * k)).collect() }
    }

    /// Linear extension of a basis map.
    pub fn map_basis<C: Ord + Clone>(&self, mut f: impl FnMut(&B) -> C) -> LinComb<C> {
        LinComb::combine(self.terms.iter().map(|(b, c)| (c.clone(), f(b))))
    }

    /// Linear extension of a map from basis elements to combinations.
    pub fn linear<C: Ord + Clone>(&self, mut f: impl FnMut(&B) -> LinComb<C>) -> LinComb<C> {
        let mut out = LinComb::zero();
        for (b, c) in &self.terms {
            out.add_scaled(c, f(b));
        }
        out
    }

    /// Keeps the terms whose basis element satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&B) -> bool) -> Self {
        Self { terms: self.terms.iter().filter(|(b, _)| keep(b)).map(|(b, c)| (b.clone(), c.clone())).collect() }
    }

    /// Applies a linear functional with integer values.
    pub fn evaluate(&self, mut f: impl FnMut(&B) -> BigInt) -> BigInt {
        self.terms.iter().map(|(b, c)| c * f(b)).sum()
    }

    /// Sum of all coefficients.
    pub fn coefficient_sum(&self) -> BigInt {
        self.terms.values().sum()
    }
}

impl<B: Ord + Clone> FromIterator<(BigInt, B)> for LinComb<B> {
    fn from_iter<I: IntoIterator<Item = (BigInt, B)>>(iter: I) -> Self {
        Self::combine(iter)
    }
}

impl<B: Ord + Clone + fmt::Display> LinComb<B> {
    /// Array of `{coeff, basis}` objects, coefficients as decimal strings.
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Term {
            coeff: String,
            basis: String,
        }
        let terms: Vec<Term> =
            self.terms.iter().map(|(b, c)| Term { coeff: c.to_string(), basis: b.to_string() }).collect();
        serde_json::to_value(terms).expect("terms serialize")
    }
}

/// `Σ a_i b_j f(basis_i, basis_j)`
pub fn extend_bilinear<A, B, C>(a: &LinComb<A>, b: &LinComb<B>, mut f: impl FnMut(&A, &B) -> LinComb<C>) -> LinComb<C>
where
    A: Ord + Clone,
    B: Ord + Clone,
    C: Ord + Clone,
{
    let mut out = LinComb::zero();
    for (x, cx) in a.iter() {
        for (y, cy) in b.iter() {
            out.add_scaled(&(cx * cy), f(x, y));
        }
    }
    out
}

/// `a ⊗ b`
pub fn tensor<A, B>(a: &LinComb<A>, b: &LinComb<B>) -> LinComb<Tensor2<A, B>>
where
    A: Ord + Clone,
    B: Ord + Clone,
{
    extend_bilinear(a, b, |x, y| LinComb::basis(Tensor2(x.clone(), y.clone())))
}

/// `(f ⊗ g)(x)`
pub fn tensor_apply<A, B, C, D>(
    x: &LinComb<Tensor2<A, B>>,
    mut f: impl FnMut(&A) -> LinComb<C>,
    mut g: impl FnMut(&B) -> LinComb<D>,
) -> LinComb<Tensor2<C, D>>
where
    A: Ord + Clone,
    B: Ord + Clone,
    C: Ord + Clone,
    D: Ord + Clone,
{
    x.linear(|Tensor2(a, b)| tensor(&f(a), &g(b)))
}

/// Contracts the left leg with an integer-valued functional, e.g. `(ε ⊗ id)`.
pub fn contract_left<A, B>(x: &LinComb<Tensor2<A, B>>, mut f: impl FnMut(&A) -> BigInt) -> LinComb<B>
where
    A: Ord + Clone,
    B: Ord + Clone,
{
    let mut out = LinComb::zero();
    for (Tensor2(a, b), c) in x.iter() {
        out.add_term(c * f(a), b.clone());
    }
    out
}

/// Contracts the right leg, e.g. `(id ⊗ ε)`.
pub fn contract_right<A, B>(x: &LinComb<Tensor2<A, B>>, mut f: impl FnMut(&B) -> BigInt) -> LinComb<A>
where
    A: Ord + Clone,
    B: Ord + Clone,
{
    let mut out = LinComb::zero();
    for (Tensor2(a, b), c) in x.iter() {
        out.add_term(c * f(b), a.clone());
    }
    out
}

/// Swaps the middle two factors of a four-fold tensor.
pub fn tau23<A, B, C, D>(x: &LinComb<Tensor4<A, B, C, D>>) -> LinComb<Tensor4<A, C, B, D>>
where
    A: Ord + Clone,
    B: Ord + Clone,
    C: Ord + Clone,
    D: Ord + Clone,
{
    x.map_basis(|Tensor4(a, b, c, d)| Tensor4(a.clone(), c.clone(), b.clone(), d.clone()))
}

/// `m^13 := (m ⊗ I) ∘ τ^23`: multiplies the first and third factors, keeping the
/// second and fourth in place.
pub fn m13<A, B, D>(
    x: &LinComb<Tensor4<A, B, A, D>>,
    mut mul: impl FnMut(&A, &A) -> LinComb<A>,
) -> LinComb<Tensor3<A, B, D>>
where
    A: Ord + Clone,
    B: Ord + Clone,
    D: Ord + Clone,
{
    tau23(x).linear(|Tensor4(a, c, b, d)| mul(a, c).map_basis(|ac| Tensor3(ac.clone(), b.clone(), d.clone())))
}

impl<B: Ord + Clone> AddAssign<LinComb<B>> for LinComb<B> {
    fn add_assign(&mut self, rhs: LinComb<B>) {
        for (b, c) in rhs.terms {
            self.add_term(c, b);
        }
    }
}

impl<B: Ord + Clone> AddAssign<&LinComb<B>> for LinComb<B> {
    fn add_assign(&mut self, rhs: &LinComb<B>) {
        for (b, c) in &rhs.terms {
            self.add_term(c.clone(), b.clone());
        }
    }
}

impl<B: Ord + Clone> SubAssign<LinComb<B>> for LinComb<B> {
    fn sub_assign(&mut self, rhs: LinComb<B>) {
        for (b, c) in rhs.terms {
            self.add_term(-c, b);
        }
    }
}

impl<B: Ord + Clone> SubAssign<&LinComb<B>> for LinComb<B> {
    fn sub_assign(&mut self, rhs: &LinComb<B>) {
        for (b, c) in &rhs.terms {
            self.add_term(-c.clone(), b.clone());
        }
    }
}

impl<B: Ord + Clone> Add for LinComb<B> {
    type Output = LinComb<B>;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl<B: Ord + Clone> Add for &LinComb<B> {
    type Output = LinComb<B>;
    fn add(self, rhs: Self) -> LinComb<B> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<B: Ord + Clone> Sub for LinComb<B> {
    type Output = LinComb<B>;
    fn sub(mut self, rhs: Self) -> Self {
        self -= rhs;
        self
    }
}

impl<B: Ord + Clone> Sub for &LinComb<B> {
    type Output = LinComb<B>;
    fn sub(self, rhs: Self) -> LinComb<B> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<B: Ord + Clone> Neg for LinComb<B> {
    type Output = LinComb<B>;
    fn neg(self) -> Self {
        Self { terms: self.terms.into_iter().map(|(b, c)| (b, -c)).collect() }
    }
}

impl<B: Ord + Clone> std::iter::Sum for LinComb<B> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        let mut out = Self::zero();
        for x in iter {
            out += x;
        }
        out
    }
}

/// Canonical text: `0` for the zero combination, otherwise terms joined by
/// ` + ` / ` - `, with a coefficient prefix only when it is not 1.
impl<B: Ord + fmt::Display> fmt::Display for LinComb<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (b, c)) in self.terms.iter().enumerate() {
            let magnitude = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-{magnitude} ")?;
                } else if !magnitude.is_one() {
                    write!(f, "{magnitude} ")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
                if !magnitude.is_one() {
                    write!(f, "{magnitude} ")?;
                }
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl<B: Ord + fmt::Display> fmt::Debug for LinComb<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tensor2<A, B>(pub A, pub B);

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tensor3<A, B, C>(pub A, pub B, pub C);

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tensor4<A, B, C, D>(pub A, pub B, pub C, pub D);

impl<A: fmt::Display, B: fmt::Display> fmt::Display for Tensor2<A, B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} # {}", self.0, self.1)
    }
}

impl<A: fmt::Display, B: fmt::Display, C: fmt::Display> fmt::Display for Tensor3<A, B, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} # {} # {}", self.0, self.1, self.2)
    }
}

impl<A: fmt::Display, B: fmt::Display, C: fmt::Display, D: fmt::Display> fmt::Display for Tensor4<A, B, C, D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} # {} # {} # {}", self.0, self.1, self.2, self.3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn combine_sums_and_drops_zeros() {
        let x = LinComb::combine([(1, "a"), (2, "a")]);
        assert_eq!(x, LinComb::term(3, "a"));
        let y = LinComb::combine([(1, "b"), (-1, "b")]);
        assert!(y.is_zero());
        assert_eq!(y.to_string(), "0");
    }

    #[test]
    fn display_signs() {
        let x = LinComb::combine([(-1, "a"), (2, "b"), (-3, "c"), (1, "d")]);
        assert_eq!(x.to_string(), "-1 a + 2 b - 3 c + d");
    }

    #[test]
    fn bilinear_with_zero_is_zero() {
        let a: LinComb<u8> = LinComb::zero();
        let b = LinComb::basis(3u8);
        let out = extend_bilinear(&a, &b, |x, y| LinComb::basis(x + y));
        assert!(out.is_zero());
        let out = extend_bilinear(&b, &a, |x, y| LinComb::basis(x + y));
        assert!(out.is_zero());
    }

    #[test]
    fn bilinear_scales() {
        let a = LinComb::term(2, 1u8);
        let b = LinComb::term(3, 10u8);
        let out = extend_bilinear(&a, &b, |x, y| LinComb::basis(x + y));
        assert_eq!(out, LinComb::term(6, 11u8));
    }

    #[test]
    fn tau23_swaps_middle() {
        let x = LinComb::basis(Tensor4('a', 'b', 'c', 'd'));
        assert_eq!(tau23(&x), LinComb::basis(Tensor4('a', 'c', 'b', 'd')));
    }

    #[test]
    fn m13_multiplies_outer_factors() {
        let x = LinComb::basis(Tensor4(2u32, 'r', 3u32, 's'));
        let out = m13(&x, |a, b| LinComb::basis(a * b));
        assert_eq!(out, LinComb::basis(Tensor3(6u32, 'r', 's')));
    }

    #[test]
    fn json_schema() {
        let x = LinComb::combine([(-2, "a"), (1, "b")]);
        let v = x.to_json();
        assert_eq!(v, serde_json::json!([{"coeff": "-2", "basis": "a"}, {"coeff": "1", "basis": "b"}]));
    }

    fn terms() -> impl Strategy<Value = Vec<(i64, u8)>> {
        prop::collection::vec((-5i64..=5, 0u8..6), 0..12)
    }

    proptest! {
        #[test]
        fn combine_is_order_independent(mut ts in terms(), seed in any::<u64>()) {
            let a = LinComb::combine(ts.clone());
            // deterministic shuffle
            let n = ts.len();
            if n > 1 {
                let mut s = seed;
                for i in (1..n).rev() {
                    s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    ts.swap(i, (s >> 33) as usize % (i + 1));
                }
            }
            prop_assert_eq!(a, LinComb::combine(ts));
        }

        #[test]
        fn bilinear_distributes(x in terms(), y in terms(), z in terms()) {
            let (x, y, z) = (LinComb::combine(x), LinComb::combine(y), LinComb::combine(z));
            let f = |a: &u8, b: &u8| LinComb::combine([(1, (*a as u16) * 7 + *b as u16), (-2, *b as u16)]);
            let left = extend_bilinear(&(&x + &y), &z, f);
            let right = extend_bilinear(&x, &z, f) + extend_bilinear(&y, &z, f);
            prop_assert_eq!(left, right);
            let left = extend_bilinear(&z, &(&x + &y), f);
            let right = extend_bilinear(&z, &x, f) + extend_bilinear(&z, &y, f);
            prop_assert_eq!(left, right);
        }
    }
}
