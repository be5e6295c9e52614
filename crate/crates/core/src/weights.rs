//! Radial weights `v: D -> (0, 1]`.
//!
//! Three kinds are supported: the classical power weights `(1 - |z|^2)^beta`,
//! a logarithmic weight comparable to `(1 - |z|^2) log(1/(1 - |z|^2))`, and
//! custom radial profiles given as an expression in `t = |z|`.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::asymptotics::{fit_power_law, FitTolerances};
use crate::expr::{parse_in, Expr, ExprError};

/// Radial grid used for typicality: `r_j = 1 - 2^-j`, `j = 1..=24`.
pub const TYPICALITY_LEVELS: u32 = 24;
const DECAY_TOL: f64 = 1e-6;
const CODOMAIN_SLACK: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeightError {
    #[error("weight exponent must be positive, got {0}")]
    NonPositiveExponent(f64),
    #[error("weight value {value} at |z| = {radius} is outside (0, 1]")]
    OutOfRange { radius: f64, value: f64 },
    #[error("weight profile is not real at |z| = {radius}: {value}")]
    NotReal { radius: f64, value: Complex64 },
    #[error("point |z| = {0} is not inside the disk")]
    OutsideDisk(f64),
    #[error("unrecognised weight `{0}`; expected power:<beta>, log or custom:<expr in t>")]
    UnknownName(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// `1 - r^2` with a single rounding (fused multiply-add); exact for grid
/// radii `1 - 2^-j`.
pub fn one_minus_r2(r: f64) -> f64 {
    (-r).mul_add(r, 1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub enum WeightKind {
    ClassicalPower { beta: f64 },
    /// `x (1 + log(1/x))` with `x = 1 - |z|^2`; equals 1 at the origin and
    /// is asymptotic to `x log(1/x)` at the boundary.
    Log,
    Custom { profile: Expr, at_origin: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Weight {
    kind: WeightKind,
}

impl Weight {
    pub fn power(beta: f64) -> Result<Self, WeightError> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(WeightError::NonPositiveExponent(beta));
        }
        Ok(Self {
            kind: WeightKind::ClassicalPower { beta },
        })
    }

    pub fn log() -> Self {
        Self {
            kind: WeightKind::Log,
        }
    }

    /// A custom radial profile in `t`, normalised by its value at 0.
    pub fn custom(profile: Expr) -> Result<Self, WeightError> {
        let raw = profile.eval_real(0.0)?;
        if raw.im.abs() > CODOMAIN_SLACK * raw.re.abs().max(1.0) {
            return Err(WeightError::NotReal {
                radius: 0.0,
                value: raw,
            });
        }
        if !(raw.re > 0.0) {
            return Err(WeightError::OutOfRange {
                radius: 0.0,
                value: raw.re,
            });
        }
        Ok(Self {
            kind: WeightKind::Custom {
                profile,
                at_origin: raw.re,
            },
        })
    }

    /// Parses `power:<beta>`, `log` or `custom:<expression in t>`.
    pub fn from_name(name: &str) -> Result<Self, WeightError> {
        let name = name.trim();
        if name == "log" {
            return Ok(Self::log());
        }
        if let Some(beta) = name.strip_prefix("power:") {
            let beta: f64 = beta
                .trim()
                .parse()
                .map_err(|_| WeightError::UnknownName(name.to_string()))?;
            return Self::power(beta);
        }
        if let Some(text) = name.strip_prefix("custom:") {
            return Self::custom(parse_in(text, 't')?);
        }
        Err(WeightError::UnknownName(name.to_string()))
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    /// The exponent of a classical power weight.
    pub fn power_exponent(&self) -> Option<f64> {
        match self.kind {
            WeightKind::ClassicalPower { beta } => Some(beta),
            _ => None,
        }
    }

    pub fn value(&self, z: Complex64) -> Result<f64, WeightError> {
        self.value_at_radius(z.norm())
    }

    pub fn value_at_radius(&self, r: f64) -> Result<f64, WeightError> {
        if !(0.0..1.0).contains(&r) {
            return Err(WeightError::OutsideDisk(r));
        }
        match &self.kind {
            WeightKind::ClassicalPower { beta } => Ok(one_minus_r2(r).powf(*beta)),
            WeightKind::Log => {
                let x = one_minus_r2(r);
                Ok(x * (1.0 - x.ln()))
            }
            WeightKind::Custom { profile, at_origin } => {
                let raw = profile.eval_real(r)?;
                if raw.im.abs() > CODOMAIN_SLACK * raw.re.abs().max(1.0) {
                    return Err(WeightError::NotReal {
                        radius: r,
                        value: raw,
                    });
                }
                let value = raw.re / at_origin;
                if !(value > 0.0 && value <= 1.0 + CODOMAIN_SLACK) {
                    return Err(WeightError::OutOfRange { radius: r, value });
                }
                Ok(value.min(1.0))
            }
        }
    }

    /// Grid check of the typical-weight properties.
    pub fn is_typical(&self) -> Typicality {
        let radii: Vec<f64> = std::iter::once(0.0)
            .chain((1..=TYPICALITY_LEVELS).map(|j| 1.0 - (-(j as f64)).exp2()))
            .collect();
        let mut values = Vec::with_capacity(radii.len());
        for &r in &radii {
            match self.value_at_radius(r) {
                Ok(v) => values.push(v),
                Err(e) => {
                    return Typicality::NotTypical {
                        reason: NotTypicalReason::Invalid {
                            radius: r,
                            detail: e.to_string(),
                        },
                    }
                }
            }
        }
        for (j, pair) in values.windows(2).enumerate() {
            if pair[1] > pair[0] * (1.0 + 1e-12) {
                return Typicality::NotTypical {
                    reason: NotTypicalReason::Increasing {
                        radius: radii[j + 1],
                        from: pair[0],
                        to: pair[1],
                    },
                };
            }
        }
        let last = *values.last().expect("nonempty grid");
        let tail = 8;
        let fit = fit_power_law(
            &radii[radii.len() - tail..],
            &values[values.len() - tail..],
        );
        let fit_tol = FitTolerances::default();
        let decays_by_fit = fit
            .as_ref()
            .is_some_and(|f| f.residual < fit_tol.max_residual && f.exponent > fit_tol.eps_fit);
        if last < DECAY_TOL || decays_by_fit {
            Typicality::Typical {
                last_value: last,
                exponent: fit.map(|f| f.exponent),
            }
        } else {
            Typicality::NotTypical {
                reason: NotTypicalReason::NoDecay {
                    last_value: last,
                    exponent: fit.map(|f| f.exponent),
                },
            }
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            WeightKind::ClassicalPower { beta } => write!(f, "power:{beta}"),
            WeightKind::Log => write!(f, "log"),
            WeightKind::Custom { profile, .. } => write!(f, "custom:{}", profile.source_text()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Typicality {
    Typical {
        last_value: f64,
        exponent: Option<f64>,
    },
    NotTypical {
        reason: NotTypicalReason,
    },
}

impl Typicality {
    pub fn is_typical(&self) -> bool {
        matches!(self, Typicality::Typical { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NotTypicalReason {
    Increasing { radius: f64, from: f64, to: f64 },
    NoDecay { last_value: f64, exponent: Option<f64> },
    Invalid { radius: f64, detail: String },
}
