//! Boundedness and compactness diagnostics for intrinsic operators mapping
//! classical spaces of holomorphic functions on the unit disk into growth
//! spaces.
//!
//! The pipeline: parse symbols ([`expr`]), describe the source and target
//! spaces ([`spaces`], [`weights`]), build an operator ([`operators`]), then
//! sample the scalar criterion profile near the boundary and read off
//! verdicts ([`criteria`]). The [`cli`] module wraps all of this behind JSON
//! job files.

pub mod asymptotics;
pub mod cli;
pub mod criteria;
pub mod expr;
pub mod operators;
pub mod series;
pub mod spaces;
pub mod weights;

pub use expr::{parse, Expr, ExprError};
pub use series::TaylorSeries;
