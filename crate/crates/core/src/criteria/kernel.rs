// Operator-norm lower bounds from unit-norm reproducing-kernel test functions.

use serde::Serialize;

use super::{CriteriaError, Tolerances};
use crate::expr::parse;
use crate::operators::OperatorSymbol;
use crate::spaces::{space_norm, FunctionHandle, NormConfig, NormEstimate, SpaceDescriptor, SpaceKind};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelTrial {
    pub w: f64,
    /// Norm of the test function in the source space (ideally 1).
    pub test_norm: f64,
    pub image_norm: NormEstimate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelBound {
    /// Largest image norm over the trials; a lower bound for `||T||`.
    pub value: f64,
    pub trials: Vec<KernelTrial>,
    /// Set when some image already failed to lie in the target space.
    pub unbounded: bool,
}

/// The normalized kernel at the real point `w`: it has unit norm in `x` and
/// `|k_w(w)| = ||delta_w||`.
pub fn kernel_test_function(x: &SpaceDescriptor, w: f64) -> Result<FunctionHandle, CriteriaError> {
    if !(0.0..1.0).contains(&w.abs()) {
        return Err(CriteriaError::Unsupported(format!("trial radius {w} is not in [0, 1)")));
    }
    // (1 - w^2)^a (1 - w z)^(-2a) with a = ||delta|| exponent.
    let a = match x.kind() {
        SpaceKind::Hardy { p } => 1.0 / p,
        SpaceKind::Bergman { p, alpha } => (2.0 + alpha) / p,
        _ => {
            return Err(CriteriaError::Unsupported(format!(
                "kernel test functions exist for hardy and bergman sources, not {x}"
            )))
        }
    };
    let scale = (-w).mul_add(w, 1.0).powf(a);
    let text = format!("{scale} * (1 - {w}*z)^(-{})", 2.0 * a);
    Ok(FunctionHandle::from_expr(parse(&text)?))
}

/// `max_w ||T k_w||_Y` over the trial radii.
pub fn kernel_lower_bound(
    t: &OperatorSymbol,
    x: &SpaceDescriptor,
    y: &SpaceDescriptor,
    trial_radii: &[f64],
    norm: &NormConfig,
    tol: &Tolerances,
) -> Result<KernelBound, CriteriaError> {
    if trial_radii.is_empty() {
        return Err(CriteriaError::EmptyProfile("no trial radii".into()));
    }
    let mut trials = Vec::with_capacity(trial_radii.len());
    for &w in trial_radii {
        let k = kernel_test_function(x, w)?;
        let cfg = NormConfig {
            extra_radii: vec![w.abs()],
            ..norm.clone()
        };
        let estimate = space_norm(x, &k, &cfg)?;
        if (estimate.value - 1.0).abs() > tol.test_norm || estimate.unbounded.is_some() {
            return Err(CriteriaError::KernelNormDeviation {
                w,
                estimate: Box::new(estimate),
                tolerance: tol.test_norm,
            });
        }
        let image = t.apply(&k)?;
        let image_norm = space_norm(y, &image, &cfg)?;
        trials.push(KernelTrial {
            w,
            test_norm: estimate.value,
            image_norm,
        });
    }
    let value = trials
        .iter()
        .map(|t| t.image_norm.value)
        .fold(0.0, f64::max);
    let unbounded = trials.iter().any(|t| t.image_norm.unbounded.is_some());
    Ok(KernelBound {
        value,
        trials,
        unbounded,
    })
}
