//! Finite-field restriction theory for the flat disk.
//!
//! The flat disk is `F = {(α, α·α, β, α·β) : α, β ∈ F_q^{d−1}} ⊂ F_q^{2d}`.
//! The crate provides exact
//! arithmetic in `F_q` and `Q(ζ_p)`, exact and floating Fourier transforms on
//! `F_q^n`, closed forms for the transform of the surface measure, numerical
//! operator-norm experiments, and a calculus of exponent pairs.

pub mod characters;
pub mod cyclo;
pub mod error;
pub mod exponents;
pub mod field;
pub mod lattice;
pub mod normlab;
pub mod oracle;
pub mod report;
pub mod space;
pub mod suite;
pub mod transform;
pub mod varieties;

pub use error::{Error, Result};

/// Guide chapters, compiled and run as doc-tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/transforms.md")]
    mod transforms {}
    #[doc = include_str!("../../../book/src/flat-disk.md")]
    mod flat_disk {}
    #[doc = include_str!("../../../book/src/norms.md")]
    mod norms {}
    #[doc = include_str!("../../../book/src/kakeya.md")]
    mod kakeya {}
    #[doc = include_str!("../../../book/src/exponents.md")]
    mod exponents {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
