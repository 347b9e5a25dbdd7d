//! Minimum uncertainty states of the skew-information refined uncertainty
//! relation `U_x U_y ≥ ¼⟨Jz⟩²` for a single spin `j`.
//!
//! The crate builds the saturating families (rotated Gibbs states and pure
//! intelligent states), re-derives them from the saturation conditions through
//! a recurrence on `√ρ` and through Wick symbols, and checks the large-`j`
//! bosonic limits. Every module works in the Dicke basis with index
//! `a = j + m`, so index 0 is `|j,−j⟩`.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod families;
pub mod limits;
pub mod numerics;
pub mod random;
pub mod recurrence;
pub mod spin;
pub mod uncertainty;
pub mod wick;

pub use error::{Error, Result};
