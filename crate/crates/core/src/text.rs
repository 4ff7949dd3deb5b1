//! Text form of trees, forests and linear combinations.
//!
//! ```text
//! Tree   := '(' Tree* ')' Mark?        Mark := '*'
//! Forest := Tree (' ' Tree)*  |  '1'
//! Term   := [Integer ' '] Forest
//! Expr   := Term ((' + ' | ' - ') Term)*  |  '0'
//! ```
//!
//! Only the first term may carry a sign on its coefficient. Printing goes
//! through the `Display` impls and always re-parses to the same value.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::linear::LinComb;
use crate::tree::{Forest, MarkedForest, MarkedTree, Monomial, Tree};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { src: text.as_bytes(), pos: 0 }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<u8> {
        self.src.get(self.pos + offset).copied()
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.pos, message: message.into() })
    }

    fn expect(&mut self, byte: u8) -> Result<()> {
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{}`", byte as char))
        }
    }

    fn at_end(&self) -> bool {
        self.pos == self.src.len()
    }

    fn tree(&mut self) -> Result<MarkedTree> {
        let start = self.pos;
        self.expect(b'(')?;
        let mut children = Vec::new();
        while self.peek() == Some(b'(') {
            children.push(self.tree()?);
        }
        self.expect(b')')?;
        let marked = self.peek() == Some(b'*');
        if marked {
            self.pos += 1;
        }
        MarkedTree::from_parts(marked, children).map_err(|e| match e {
            Error::InvalidMarks(m) => Error::InvalidMarks(format!("{m} (at byte {start})")),
            other => other,
        })
    }

    fn forest(&mut self) -> Result<MarkedForest> {
        if self.peek() == Some(b'1') {
            self.pos += 1;
            return Ok(Monomial::one());
        }
        let mut trees = vec![self.tree()?];
        while self.peek() == Some(b' ') && self.peek_at(1) == Some(b'(') {
            self.pos += 1;
            trees.push(self.tree()?);
        }
        Ok(Monomial::from_factors(trees))
    }

    fn integer(&mut self) -> BigInt {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().unwrap()
    }

    /// One term; `None` for a literal `0`.
    fn term(&mut self, first: bool) -> Result<Option<(BigInt, MarkedForest)>> {
        let negative = first && self.peek() == Some(b'-');
        if negative {
            self.pos += 1;
        }
        let sign = |c: BigInt| if negative { -c } else { c };
        match self.peek() {
            Some(b'(') => Ok(Some((sign(BigInt::one()), self.forest()?))),
            Some(b) if b.is_ascii_digit() => {
                let start = self.pos;
                let n = self.integer();
                let coefficient_follows =
                    self.peek() == Some(b' ') && matches!(self.peek_at(1), Some(b'(') | Some(b'1'));
                if coefficient_follows {
                    self.pos += 1;
                    let f = self.forest()?;
                    return Ok(Some((sign(n), f)));
                }
                match &self.src[start..self.pos] {
                    b"1" => Ok(Some((sign(BigInt::one()), Monomial::one()))),
                    b"0" => Ok(None),
                    _ => {
                        self.pos = start;
                        self.err("a bare integer must be followed by a forest")
                    }
                }
            }
            _ => self.err("expected a term"),
        }
    }

    fn expr(&mut self) -> Result<LinComb<MarkedForest>> {
        if self.src.is_empty() {
            return self.err("empty expression");
        }
        let mut out = LinComb::zero();
        if let Some((c, f)) = self.term(true)? {
            out.add_term(c, f);
        }
        while !self.at_end() {
            let negative = match (self.peek(), self.peek_at(1), self.peek_at(2)) {
                (Some(b' '), Some(b'+'), Some(b' ')) => false,
                (Some(b' '), Some(b'-'), Some(b' ')) => true,
                _ => return self.err("expected ` + ` or ` - `"),
            };
            self.pos += 3;
            if let Some((c, f)) = self.term(false)? {
                out.add_term(if negative { -c } else { c }, f);
            }
        }
        Ok(out)
    }
}

/// Parses an expression into a canonical combination of marked forests.
/// Unmarked input yields marked forests with empty mark sets.
pub fn parse(text: &str) -> Result<LinComb<MarkedForest>> {
    Parser::new(text).expr()
}

/// Parses exactly one (possibly marked) tree.
pub fn parse_tree(text: &str) -> Result<MarkedTree> {
    let mut p = Parser::new(text);
    let t = p.tree()?;
    if !p.at_end() {
        return p.err("trailing input after tree");
    }
    Ok(t)
}

/// Canonical text of a combination; `0` for zero.
pub fn print_canonical<B: Ord + Clone + std::fmt::Display>(x: &LinComb<B>) -> String {
    x.to_string()
}

/// Narrows a parsed combination to plain forests.
pub fn to_forests(x: &LinComb<MarkedForest>) -> Result<LinComb<Forest>> {
    let mut out = LinComb::zero();
    for (f, c) in x.iter() {
        out.add_term(c.clone(), f.to_plain()?);
    }
    Ok(out)
}

/// Narrows a parsed combination to single plain trees.
pub fn to_trees(x: &LinComb<MarkedForest>) -> Result<LinComb<Tree>> {
    let mut out = LinComb::zero();
    for (f, c) in x.iter() {
        let t = single_factor(f, "a single tree")?;
        out.add_term(c.clone(), Tree::try_from(t)?);
    }
    Ok(out)
}

/// Narrows a parsed combination to single marked trees.
pub fn to_marked_trees(x: &LinComb<MarkedForest>) -> Result<LinComb<MarkedTree>> {
    let mut out = LinComb::zero();
    for (f, c) in x.iter() {
        out.add_term(c.clone(), single_factor(f, "a single marked tree")?);
    }
    Ok(out)
}

fn single_factor(f: &MarkedForest, expected: &'static str) -> Result<MarkedTree> {
    match f.factors() {
        [t] => Ok(t.clone()),
        _ => Err(Error::WrongKind { expected, found: f.to_string() }),
    }
}
