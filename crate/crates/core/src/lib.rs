//! Equivariant module categories over prime fields.
//!
//! A finite group `G` acting on a finite-dimensional algebra `A` by
//! automorphisms gives a skew group algebra `AG`, and modules over `AG` are
//! the same thing as `A`-modules with a compatible family of isomorphisms
//! `lambda_g: M^g -> M`. This crate builds all of these objects as exact
//! matrices over `F_p` and checks the structural results relating the two
//! sides: induction/forgetful adjunctions, decomposition of Hom spaces into
//! isotypic parts, blocks for trivial actions, reconstruction of `A^{G'}`
//! from `AG` through the character group, stable categories of
//! self-injective algebras, and homotopy categories of bounded complexes.
//!
//! Conventions: module elements are row vectors and everything acts on the
//! right; a homomorphism `f: M -> N` is the matrix `H` with `f(v) = v * H`,
//! so `g o f` has matrix `H_f * H_g`.

pub mod actions;
pub mod algebras;
pub mod equivariant;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod groups;
pub mod homotopy;
pub mod io;
pub mod reconstruct;
pub mod report;
pub mod scenario;

pub use error::{Error, Result};
pub use field::{Fp, Mat, Prime};
