//! Exact symbolic algebra on rooted trees: the Connes–Kreimer bialgebra, the
//! grafting pre-Lie algebra and its enveloping product, the doubling
//! bialgebra of marked trees with its own pre-Lie structure, and an
//! exhaustive verifier for the identities relating them.
//!
//! ```
//! use arboreal::{parse, print_canonical, ck};
//!
//! let x = arboreal::text::to_forests(&parse("(())").unwrap()).unwrap();
//! let f = x.basis_elements().next().unwrap();
//! assert_eq!(print_canonical(&ck::coproduct(f)), "(()) # 1 + () # () + 1 # (())");
//! ```

pub mod ck;
pub mod doubling;
pub mod doubling_prelie;
pub mod error;
pub mod grafting;
pub mod linear;
pub mod oudom_guin;
pub mod relations;
pub mod text;
pub mod tree;
pub mod verifier;

pub use error::{Error, Result};
pub use linear::{LinComb, Tensor2, Tensor3, Tensor4};
pub use text::{parse, parse_tree, print_canonical};
pub use tree::{
    admissible_cuts, closure_violations, enumerate_forests, enumerate_marked_forests, enumerate_marked_trees,
    enumerate_trees, Cut, Forest, MarkedForest, MarkedTree, Monomial, Tree, VertexRef,
};
pub use verifier::{
    check, check_with, replay, run_suite, run_suite_with, Config, IdentityId, Mutation, Report, Status,
};

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
struct ReadmeDoctests;
