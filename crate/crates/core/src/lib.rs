//! Exact computations for the Q-construction of the Batalin–Vilkovisky
//! cyclic operad: weight-truncated BV compositions, the 1-shifted cyclic
//! ∞-operad `QBV`, the morphism built from genus-zero ψ-class intersection
//! numbers, and the two graph complexes compared by `Φ_{g,n}`.
//!
//! Everything is computed over ℚ; no floating point is used anywhere.

pub mod bv;
pub mod error;
pub mod feyn;
pub mod fmorph;
pub mod label;
pub mod linalg;
pub mod psi;
pub mod qbv;

pub use error::{Error, Result};
pub use label::Label;
pub use linalg::Rational;
