//! Exact computations with Leibniz algebras and their identities.
//!
//! Left-normed normal forms, linearization, multilinear parts `P_n` of
//! varieties and their dimensions, Young-diagram generators, and two
//! concrete Leibniz algebras used as evaluation targets: the metabelian
//! Engel algebra `M` over `Z_p` and the Heisenberg-module algebra `H^s`.

pub mod algebra_hs;
pub mod algebra_m;
pub mod error;
pub mod eval;
pub mod expr;
mod linalg;
pub mod lincomb;
pub mod normal;
pub mod perm;
pub mod pn;
pub mod report;
pub mod scalar;
pub mod young;

pub use error::{Error, Result};
pub use expr::{parse, parse_in, Expression, RawTerm, Symbol};
pub use lincomb::LinComb;
pub use normal::{normalize, LeftWord, NormalForm};
pub use perm::Permutation;
pub use scalar::{Field, Scalar};
