//! Supports, minimal codewords and generalized weights of linear codes over
//! finite principal ideal rings.
//!
//! A finite principal ideal ring is represented as an ordered product of
//! chain rings (integers modulo a prime power, or a finite field). Codes are
//! submodules of `R^n`, support functions are value-vector maps `R^n -> N^u`
//! satisfying three axioms, and generalized weights are computed by three
//! independent routes: a minimal-codeword subset search, an exhaustive
//! submodule enumeration, and minimal shifts of graded Betti numbers of the
//! code's monomial ideal.

pub mod caps;
pub mod code;
pub mod error;
pub mod estimate;
pub mod monomial;
pub mod ring;
pub mod support;
#[cfg(test)]
pub(crate) mod testkit;
pub mod value;
pub mod weights;

pub use caps::Caps;
pub use error::{Error, Result};
