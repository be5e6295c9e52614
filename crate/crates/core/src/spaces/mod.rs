//! Function-space descriptors.
//!
//! A [`SpaceDescriptor`] names one of the Hardy, weighted Bergman, growth or
//! Bloch-type spaces and knows its point-evaluation norm. Norms of concrete
//! functions are computed in [`norm`], little-space membership in [`little`].

mod function;
mod little;
mod norm;
mod quad;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::weights::{one_minus_r2, Weight, WeightError, WeightKind};

pub use function::{FunctionError, FunctionHandle};
pub use little::{little_space_membership, LittleVerdict, LITTLE_RAYS};
pub use norm::{space_norm, NormConfig, NormEstimate, Resolution, Unbounded};

#[derive(Debug, Error)]
pub enum SpaceError {
    #[error("invalid space parameter: {0}")]
    InvalidParameter(String),
    #[error("unrecognised space `{0}`; expected hardy:p, bergman:p:alpha, growth:<weight> or bloch:<weight>, optionally with :little")]
    UnknownName(String),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("evaluation failed at z = {z}: {source}")]
    Evaluation {
        z: num_complex::Complex64,
        #[source]
        source: FunctionError,
    },
    #[error("{0} is not a little space")]
    NotLittle(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpaceKind {
    Hardy { p: f64 },
    Bergman { p: f64, alpha: f64 },
    Growth(Weight),
    BlochType(Weight),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpaceDescriptor {
    kind: SpaceKind,
    little: bool,
}

/// Whether a point-evaluation norm is the exact value or only comparable to it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Exactness {
    Exact,
    UpToConstants,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointEvalNorm {
    pub value: f64,
    pub exactness: Exactness,
}

impl SpaceDescriptor {
    pub fn hardy(p: f64) -> Result<Self, SpaceError> {
        if !(p > 1.0 && p.is_finite()) {
            return Err(SpaceError::InvalidParameter(format!(
                "Hardy exponent must satisfy 1 < p < inf, got {p}"
            )));
        }
        Ok(Self {
            kind: SpaceKind::Hardy { p },
            little: false,
        })
    }

    pub fn bergman(p: f64, alpha: f64) -> Result<Self, SpaceError> {
        if !(p > 0.0 && p.is_finite()) || !(alpha > -1.0 && alpha.is_finite()) {
            return Err(SpaceError::InvalidParameter(format!(
                "Bergman parameters must satisfy p > 0 and alpha > -1, got p = {p}, alpha = {alpha}"
            )));
        }
        Ok(Self {
            kind: SpaceKind::Bergman { p, alpha },
            little: false,
        })
    }

    pub fn growth(v: Weight) -> Self {
        Self {
            kind: SpaceKind::Growth(v),
            little: false,
        }
    }

    pub fn bloch(v: Weight) -> Self {
        Self {
            kind: SpaceKind::BlochType(v),
            little: false,
        }
    }

    /// The little subspace; only growth and Bloch-type spaces have one.
    pub fn into_little(self) -> Result<Self, SpaceError> {
        match self.kind {
            SpaceKind::Growth(_) | SpaceKind::BlochType(_) => Ok(Self {
                little: true,
                ..self
            }),
            _ => Err(SpaceError::InvalidParameter(format!(
                "{self} has no little subspace"
            ))),
        }
    }

    /// The same space without the little flag.
    pub fn big(&self) -> Self {
        Self {
            kind: self.kind.clone(),
            little: false,
        }
    }

    /// Parses `hardy:p`, `bergman:p:alpha`, `growth:<weight>`, `bloch:<weight>`
    /// with an optional `:little` suffix.
    pub fn from_name(name: &str) -> Result<Self, SpaceError> {
        let name = name.trim();
        let (body, little) = match name.strip_suffix(":little") {
            Some(body) => (body, true),
            None => (name, false),
        };
        let number = |s: &str| -> Result<f64, SpaceError> {
            s.trim()
                .parse()
                .map_err(|_| SpaceError::UnknownName(name.to_string()))
        };
        let space = if let Some(p) = body.strip_prefix("hardy:") {
            Self::hardy(number(p)?)?
        } else if let Some(rest) = body.strip_prefix("bergman:") {
            let (p, alpha) = rest
                .split_once(':')
                .ok_or_else(|| SpaceError::UnknownName(name.to_string()))?;
            Self::bergman(number(p)?, number(alpha)?)?
        } else if let Some(w) = body.strip_prefix("growth:") {
            Self::growth(Weight::from_name(w)?)
        } else if let Some(w) = body.strip_prefix("bloch:") {
            Self::bloch(Weight::from_name(w)?)
        } else {
            return Err(SpaceError::UnknownName(name.to_string()));
        };
        if little {
            space.into_little()
        } else {
            Ok(space)
        }
    }

    pub fn kind(&self) -> &SpaceKind {
        &self.kind
    }

    pub fn is_little(&self) -> bool {
        self.little
    }

    /// The weight of a growth or Bloch-type space.
    pub fn weight(&self) -> Option<&Weight> {
        match &self.kind {
            SpaceKind::Growth(v) | SpaceKind::BlochType(v) => Some(v),
            _ => None,
        }
    }

    pub fn point_eval_norm(&self, z: num_complex::Complex64) -> Result<PointEvalNorm, SpaceError> {
        self.point_eval_norm_at_radius(z.norm())
    }

    /// Norm of `f -> f(z)` for `|z| = r`.
    ///
    /// Bloch-type values are the standard comparison functions and carry
    /// [`Exactness::UpToConstants`], as do growth spaces with non-power weights.
    pub fn point_eval_norm_at_radius(&self, r: f64) -> Result<PointEvalNorm, SpaceError> {
        if !(0.0..1.0).contains(&r) {
            return Err(SpaceError::InvalidParameter(format!(
                "point evaluation needs |z| < 1, got {r}"
            )));
        }
        let x = one_minus_r2(r);
        let exact = |value| PointEvalNorm {
            value,
            exactness: Exactness::Exact,
        };
        let comparable = |value| PointEvalNorm {
            value,
            exactness: Exactness::UpToConstants,
        };
        Ok(match &self.kind {
            SpaceKind::Hardy { p } => exact(x.powf(-1.0 / p)),
            SpaceKind::Bergman { p, alpha } => exact(x.powf(-(alpha + 2.0) / p)),
            SpaceKind::Growth(v) => match v.kind() {
                WeightKind::ClassicalPower { beta } => exact(x.powf(-beta)),
                _ => comparable(1.0 / v.value_at_radius(r)?),
            },
            SpaceKind::BlochType(v) => match v.kind() {
                WeightKind::ClassicalPower { beta } => comparable(bloch_comparison(*beta, x)),
                _ => {
                    return Err(SpaceError::Unsupported(format!(
                        "no point-evaluation formula for the Bloch-type space with weight {v}"
                    )))
                }
            },
        })
    }
}

/// `1` for `beta < 1`, `log(1/x)` for `beta = 1`, `x^-(beta-1)` for `beta > 1`.
fn bloch_comparison(beta: f64, x: f64) -> f64 {
    if beta < 1.0 {
        1.0
    } else if beta == 1.0 {
        (1.0 / x).ln()
    } else {
        x.powf(-(beta - 1.0))
    }
}

impl fmt::Display for SpaceDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SpaceKind::Hardy { p } => write!(f, "hardy:{p}")?,
            SpaceKind::Bergman { p, alpha } => write!(f, "bergman:{p}:{alpha}")?,
            SpaceKind::Growth(v) => write!(f, "growth:{v}")?,
            SpaceKind::BlochType(v) => write!(f, "bloch:{v}")?,
        }
        if self.little {
            write!(f, ":little")?;
        }
        Ok(())
    }
}
