// Closed-form exponent tables for Volterra and Cesàro operators with
// power-weighted spaces, used to cross-check the numerical verdicts.

use serde::Serialize;

use super::classify::{classify_symbol, Membership, SymbolFamily};
use super::profile::ProfileGrid;
use super::verdicts::{Boundedness, Compactness};
use super::{CriteriaError, Tolerances};
use crate::expr::Expr;
use crate::operators::OperatorKind;
use crate::spaces::{SpaceDescriptor, SpaceKind};
use crate::weights::Weight;

const EXPONENT_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "regime", rename_all = "snake_case")]
pub enum Regime {
    /// `g` in the Bloch-type class `(1-|z|^2)^gamma |g'|` bounded.
    BlochType { gamma: f64 },
    /// `(1-|z|^2)^gamma log(1/(1-|z|^2)) |g'|` bounded.
    LogBloch { gamma: f64 },
    Lipschitz,
    ConstantOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedFormRecord {
    pub operator: String,
    pub source: String,
    pub target: String,
    /// The profile behaves as `(1-|z|^2)^exponent |g'(z)|`, times
    /// `log(1/(1-|z|^2))` when `log_factor` is set.
    pub exponent: f64,
    pub log_factor: bool,
    pub regime: Regime,
    /// Human-readable boundedness condition on `g`.
    pub condition: String,
    pub bounded_family: Option<SymbolFamily>,
    pub compact_family: Option<SymbolFamily>,
    pub notes: Vec<String>,
}

/// Exponent of `||delta_z||` as a power of `1/(1-|z|^2)`, and whether a
/// logarithm multiplies it.
fn delta_exponent(x: &SpaceDescriptor) -> Result<(f64, bool), CriteriaError> {
    let power = |w: &Weight| {
        w.power_exponent().ok_or_else(|| {
            CriteriaError::Unsupported(format!("closed forms need power weights, not {w}"))
        })
    };
    Ok(match x.kind() {
        SpaceKind::Hardy { p } => (1.0 / p, false),
        SpaceKind::Bergman { p, alpha } => ((2.0 + alpha) / p, false),
        SpaceKind::Growth(w) => (power(w)?, false),
        SpaceKind::BlochType(w) => {
            let gamma = power(w)?;
            if gamma < 1.0 {
                (0.0, false)
            } else if gamma == 1.0 {
                (0.0, true)
            } else {
                (gamma - 1.0, false)
            }
        }
    })
}

pub fn closed_form_verdict(
    kind: &OperatorKind,
    x: &SpaceDescriptor,
    y: &SpaceDescriptor,
) -> Result<ClosedFormRecord, CriteriaError> {
    let operator = match kind {
        OperatorKind::Volterra { .. } => "volterra",
        OperatorKind::Cesaro { .. } => "cesaro",
        _ => {
            return Err(CriteriaError::Unsupported(
                "closed-form tables cover volterra and cesaro operators".into(),
            ))
        }
    };
    let (d, log_factor) = delta_exponent(x)?;
    let raw = match y.kind() {
        SpaceKind::Growth(w) => w.power_exponent().map(|beta| beta + 1.0 - d),
        SpaceKind::BlochType(w) => w.power_exponent().map(|beta| beta - d),
        _ => None,
    }
    .ok_or_else(|| {
        CriteriaError::Unsupported(format!(
            "closed-form tables need a growth:power or bloch:power target, not {y}"
        ))
    })?;
    let exponent = if raw.abs() < EXPONENT_SLACK { 0.0 } else { raw };
    let regime = match (exponent > 0.0, exponent == 0.0, log_factor) {
        (true, _, false) => Regime::BlochType { gamma: exponent },
        (true, _, true) => Regime::LogBloch { gamma: exponent },
        (false, true, false) => Regime::Lipschitz,
        _ => Regime::ConstantOnly,
    };
    let (condition, bounded_family, compact_family) = match &regime {
        Regime::BlochType { gamma } => (
            format!("g in B_{gamma}: sup (1-|z|^2)^{gamma} |g'(z)| < infinity"),
            Some(SymbolFamily::BlochType { gamma: *gamma }),
            Weight::power(*gamma)
                .ok()
                .map(|weight| SymbolFamily::LittleBloch { weight }),
        ),
        Regime::LogBloch { gamma } => (
            format!("sup (1-|z|^2)^{gamma} log(1/(1-|z|^2)) |g'(z)| < infinity"),
            (*gamma == 1.0).then_some(SymbolFamily::LogBloch),
            (*gamma == 1.0).then(|| SymbolFamily::LittleBloch {
                weight: Weight::log(),
            }),
        ),
        Regime::Lipschitz => (
            "g Lipschitz, read as sup |g'(z)| < infinity".to_string(),
            Some(SymbolFamily::Lipschitz),
            Some(SymbolFamily::ConstantOnly),
        ),
        Regime::ConstantOnly => (
            "only constant g".to_string(),
            Some(SymbolFamily::ConstantOnly),
            Some(SymbolFamily::ConstantOnly),
        ),
    };
    let mut notes = Vec::new();
    if operator == "cesaro" {
        notes.push("cesaro shares the volterra table through the shift relation".into());
    }
    if y.is_little() {
        notes.push("little target: the compactness condition is the relevant one".into());
    }
    Ok(ClosedFormRecord {
        operator: operator.into(),
        source: x.to_string(),
        target: y.to_string(),
        exponent,
        log_factor,
        regime,
        condition,
        bounded_family,
        compact_family,
        notes,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerFamilyPrediction {
    pub s: f64,
    /// Boundary exponent of the profile on the real axis.
    pub exponent: f64,
    pub bounded: bool,
    pub compact: bool,
}

/// Prediction for `g_s = (1-z)^(-s)`: bounded iff `s <= a - 1`, compact iff
/// `s < a - 1` (both strict under a log factor).
pub fn predict_power_family(record: &ClosedFormRecord, s: f64) -> PowerFamilyPrediction {
    if s == 0.0 {
        return PowerFamilyPrediction {
            s,
            exponent: f64::INFINITY,
            bounded: true,
            compact: true,
        };
    }
    let e = record.exponent - s - 1.0;
    let e = if e.abs() < EXPONENT_SLACK { 0.0 } else { e };
    PowerFamilyPrediction {
        s,
        exponent: e,
        bounded: if record.log_factor { e > 0.0 } else { e >= 0.0 },
        compact: e > 0.0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum CrossCheck {
    Agrees { condition: String },
    Disagrees { detail: String },
    /// One side gave no definite answer.
    Undetermined { detail: String },
}

fn membership_answer(m: &Membership) -> Option<bool> {
    match m {
        Membership::Member { .. } => Some(true),
        Membership::NotMember { .. } => Some(false),
        Membership::Inconclusive { .. } => None,
    }
}

/// Compares the numerical verdicts with membership of `g` in the families
/// the record names. `None` when the record names no family.
pub fn cross_check(
    record: &ClosedFormRecord,
    g: &Expr,
    bounded: &Boundedness,
    compact: &Compactness,
    grid: ProfileGrid,
    tol: &Tolerances,
) -> Result<Option<CrossCheck>, CriteriaError> {
    let Some(family) = &record.bounded_family else {
        return Ok(None);
    };
    let numeric_bounded = match bounded {
        Boundedness::Yes { .. } => Some(true),
        Boundedness::No { .. } => Some(false),
        Boundedness::Inconclusive { .. } => None,
    };
    let symbolic_bounded = membership_answer(&classify_symbol(g, family, grid, tol)?.membership);
    let mut checks = vec![("bounded", numeric_bounded, symbolic_bounded, family.clone())];
    if let (Some(little), Some(true)) = (&record.compact_family, symbolic_bounded) {
        let numeric = match compact {
            Compactness::Yes { .. } => Some(true),
            Compactness::No { .. } => Some(false),
            Compactness::Inconclusive { .. } => None,
        };
        let symbolic = membership_answer(&classify_symbol(g, little, grid, tol)?.membership);
        checks.push(("compact", numeric, symbolic, little.clone()));
    }
    for (what, numeric, symbolic, family) in checks {
        match (numeric, symbolic) {
            (Some(a), Some(b)) if a != b => {
                return Ok(Some(CrossCheck::Disagrees {
                    detail: format!(
                        "{what}: numerical verdict {a}, but membership of g in {family} is {b}"
                    ),
                }))
            }
            (None, _) | (_, None) => {
                return Ok(Some(CrossCheck::Undetermined {
                    detail: format!("{what}: no definite answer for g in {family}"),
                }))
            }
            _ => {}
        }
    }
    Ok(Some(CrossCheck::Agrees {
        condition: record.condition.clone(),
    }))
}
