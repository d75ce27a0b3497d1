//! Exact characters of local operators in holomorphically twisted 4d N=1 theories.
//!
//! The crate is organized bottom-up:
//!
//! - [`series`]: truncated multivariate Laurent series with exact rational coefficients
//! - [`characters`]: closed-form product formulas and their numeric special functions
//! - [`operators`]: the explicit operator basis and a brute-force character oracle
//! - [`koszul`]: the superpotential differential and sectorwise exact cohomology
//! - [`current_algebra`]: the dg model of punctured ℂ², its residue, and the mode algebra
//! - [`reduction`]: compactification identities and the Hodge-to-de-Rham family
//!
//! Every computation with exact inputs is exact; floating point only appears in
//! [`characters::numeric`].

pub mod error;
pub mod rational;
pub mod characters;
pub mod current_algebra;
pub mod koszul;
pub mod linalg;
pub mod operators;
pub mod poly;
pub mod reduction;
pub mod series;

pub use error::{Error, Result};
pub use rational::Q;
pub use series::{FugacitySpec, SignedMonomial, Substitution, TruncatedSeries};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/series.md")]
    mod series {}
    #[doc = include_str!("../../../book/src/characters.md")]
    mod characters {}
    #[doc = include_str!("../../../book/src/operators.md")]
    mod operators {}
    #[doc = include_str!("../../../book/src/koszul.md")]
    mod koszul {}
    #[doc = include_str!("../../../book/src/current-algebra.md")]
    mod current_algebra {}
    #[doc = include_str!("../../../book/src/reduction.md")]
    mod reduction {}
}
