//! Scalar criterion profiles and the verdicts read off them.
//!
//! For an operator `T: X -> Y` with `Y` a growth or Bloch-type space, the
//! profile is `z -> v(z) |factor(z)| ||delta||_X`, sampled on rays towards
//! the boundary. Its supremum decides boundedness (and equals the operator
//! norm when the point-evaluation norms are exact); its boundary limit
//! decides compactness.

mod classify;
mod closed_form;
mod dn;
mod kernel;
mod profile;
mod verdicts;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::asymptotics::FitTolerances;
use crate::expr::ExprError;
use crate::operators::OperatorError;
use crate::spaces::{NormEstimate, SpaceError};

pub use classify::{classify_symbol, Classification, Membership, SymbolFamily};
pub use closed_form::{
    closed_form_verdict, cross_check, predict_power_family, ClosedFormRecord, CrossCheck,
    PowerFamilyPrediction, Regime,
};
pub use dn::{dn_diagnostic, dn_from_profile, DnDiagnostic, DnEntry, DnVerdict};
pub use kernel::{kernel_lower_bound, kernel_test_function, KernelBound, KernelTrial};
pub use profile::{criterion_profile, Bound, CriterionProfile, Limit, ProfileGrid, ProfileSample};
pub use verdicts::{
    boundedness_verdict, compactness_verdict, AnalysisVerdict, Boundedness, Compactness,
};

#[derive(Debug, Error)]
pub enum CriteriaError {
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("phi(z) reached the unit circle at z = {z} (|phi(z)| = {modulus})")]
    BoundaryReached { z: Complex64, modulus: f64 },
    #[error(
        "test function at w = {w} has norm {} in the source space (allowed deviation {tolerance})",
        estimate.value
    )]
    KernelNormDeviation {
        w: f64,
        estimate: Box<NormEstimate>,
        tolerance: f64,
    },
    #[error("empty profile: {0}")]
    EmptyProfile(String),
}

/// Every numerical threshold used by the criteria, with its default.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub fit: FitTolerances,
    /// Relative growth of the partial sups over the last four levels.
    pub cauchy: f64,
    /// Sup over `D_N` counted as vanished below this.
    pub dn: f64,
    /// Relative gap allowed between the profile sup and the kernel bound.
    pub norm_equality: f64,
    pub series: f64,
    pub self_map: f64,
    /// Allowed deviation of a kernel test function's norm from 1.
    pub test_norm: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            fit: FitTolerances::default(),
            cauchy: 1e-3,
            dn: 0.05,
            norm_equality: 0.02,
            series: 1e-12,
            self_map: 1e-9,
            test_norm: 1e-3,
        }
    }
}
