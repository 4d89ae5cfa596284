//! Numerics for Orlicz and weighted Orlicz spaces on finite measure-space
//! models, and analysis of multiplication operators `M_u f = u·f` acting
//! on them.
//!
//! The measure space is a desk-scale model: finitely many explicit atoms,
//! a nonatomic segment resolved into dyadic cells, and a countable atom
//! family described by closed-form rules. Functions are piecewise constant
//! on these pieces, so modulars and norms reduce to finite sums plus
//! rule-based tails.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod descriptor;
pub mod error;
pub mod harness;
pub mod intervals;
pub mod measure;
pub mod norms;
pub mod operator;
pub mod orlicz;
pub mod sample;
pub mod search;
pub mod suite;

pub use error::{Error, Result};
pub use measure::{MeasureSpace, PieceSet, SimpleFunction, WeightedStructure};
pub use orlicz::OrliczFunction;
