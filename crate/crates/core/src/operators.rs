//! Weighted composition, Volterra, Cesàro, multiplication and
//! differentiation operators acting on [`FunctionHandle`]s.
//!
//! Images carry a pointwise evaluator whenever the input does, and a Taylor
//! series whenever the series arithmetic is legal (composition needs
//! `phi(0) = 0`).

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::expr::{Expr, ExprError};
use crate::series::DEFAULT_DEGREE_CAP;
use crate::spaces::FunctionHandle;

pub const SELF_MAP_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OperatorError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("symbol `{symbol}` is not analytic at 0: {detail}")]
    NotAnalytic { symbol: String, detail: String },
    #[error("missing capability: {0}")]
    MissingCapability(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum OperatorKind {
    WeightedComposition { u: Expr, phi: Expr },
    Volterra { g: Expr },
    Cesaro { g: Expr },
    Multiplication { h: Expr },
    Differentiation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSymbol {
    kind: OperatorKind,
    g_prime: Option<Expr>,
    degree_cap: usize,
}

fn require_analytic(name: &str, e: &Expr) -> Result<(), OperatorError> {
    e.to_series(8).map(|_| ()).map_err(|err| OperatorError::NotAnalytic {
        symbol: format!("{name} = {}", e.source_text()),
        detail: err.to_string(),
    })
}

impl OperatorSymbol {
    fn new(kind: OperatorKind) -> Self {
        let g_prime = match &kind {
            OperatorKind::Volterra { g } | OperatorKind::Cesaro { g } => Some(g.differentiate()),
            _ => None,
        };
        Self {
            kind,
            g_prime,
            degree_cap: DEFAULT_DEGREE_CAP,
        }
    }

    /// `f -> u (f o phi)`; `phi` must pass the self-map check.
    pub fn weighted_composition(u: Expr, phi: Expr) -> Result<Self, OperatorError> {
        Self::weighted_composition_with_tol(u, phi, SELF_MAP_TOL)
    }

    pub fn weighted_composition_with_tol(
        u: Expr,
        phi: Expr,
        self_map_tol: f64,
    ) -> Result<Self, OperatorError> {
        phi.check_self_map(self_map_tol)?;
        Ok(Self::new(OperatorKind::WeightedComposition { u, phi }))
    }

    /// `f -> int_0^z f g'`.
    pub fn volterra(g: Expr) -> Result<Self, OperatorError> {
        require_analytic("g", &g)?;
        Ok(Self::new(OperatorKind::Volterra { g }))
    }

    /// `f -> (1/z) int_0^z f g'`.
    pub fn cesaro(g: Expr) -> Result<Self, OperatorError> {
        require_analytic("g", &g)?;
        Ok(Self::new(OperatorKind::Cesaro { g }))
    }

    pub fn multiplication(h: Expr) -> Self {
        Self::new(OperatorKind::Multiplication { h })
    }

    pub fn differentiation() -> Self {
        Self::new(OperatorKind::Differentiation)
    }

    pub fn with_degree_cap(mut self, n: usize) -> Self {
        self.degree_cap = n;
        self
    }

    pub fn kind(&self) -> &OperatorKind {
        &self.kind
    }

    /// `g'` for Volterra and Cesàro operators.
    pub fn g_prime(&self) -> Option<&Expr> {
        self.g_prime.as_ref()
    }

    /// Short name used in configs and reports.
    pub fn name(&self) -> &'static str {
        match self.kind {
            OperatorKind::WeightedComposition { .. } => "wcomp",
            OperatorKind::Volterra { .. } => "volterra",
            OperatorKind::Cesaro { .. } => "cesaro",
            OperatorKind::Multiplication { .. } => "mult",
            OperatorKind::Differentiation => "diff",
        }
    }

    fn g_prime_handle(&self, f: &FunctionHandle) -> FunctionHandle {
        let gp = self.g_prime.clone().expect("integral operators carry g'");
        let cap = f
            .series()
            .map_or(self.degree_cap, |s| s.degree_cap().max(self.degree_cap));
        match gp.to_series(cap) {
            Ok(s) => FunctionHandle::with_series(gp, s),
            Err(_) => FunctionHandle::from_expr_pointwise(gp),
        }
    }

    pub fn apply(&self, f: &FunctionHandle) -> Result<FunctionHandle, OperatorError> {
        Ok(match &self.kind {
            OperatorKind::WeightedComposition { u, phi } => {
                let at_zero = phi.eval(Complex64::new(0.0, 0.0))?;
                if f.is_series_only()
                    && at_zero != Complex64::new(0.0, 0.0)
                    && f.series().is_some_and(|s| s.valid_radius() < 1.0)
                {
                    return Err(OperatorError::MissingCapability(format!(
                        "composition with phi(0) = {at_zero} needs a pointwise evaluator for f; \
                         series composition is only available when phi(0) = 0"
                    )));
                }
                let inner = if phi.is_identity() {
                    f.clone()
                } else {
                    FunctionHandle::compose(f, phi)
                };
                FunctionHandle::product(&FunctionHandle::from_expr(u.clone()), &inner)
            }
            OperatorKind::Volterra { .. } => {
                FunctionHandle::integral(&FunctionHandle::product(f, &self.g_prime_handle(f)))
            }
            OperatorKind::Cesaro { .. } => {
                FunctionHandle::average(&FunctionHandle::product(f, &self.g_prime_handle(f)))
            }
            OperatorKind::Multiplication { h } => {
                FunctionHandle::product(&FunctionHandle::from_expr(h.clone()), f)
            }
            OperatorKind::Differentiation => f.derivative(),
        })
    }
}

impl fmt::Display for OperatorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            OperatorKind::WeightedComposition { u, phi } => {
                write!(f, "wcomp(u = {}, phi = {})", u.source_text(), phi.source_text())
            }
            OperatorKind::Volterra { g } => write!(f, "volterra(g = {})", g.source_text()),
            OperatorKind::Cesaro { g } => write!(f, "cesaro(g = {})", g.source_text()),
            OperatorKind::Multiplication { h } => write!(f, "mult(h = {})", h.source_text()),
            OperatorKind::Differentiation => write!(f, "diff"),
        }
    }
}

/// Largest coefficient gap between `T_g f` and `z C_g f`.
pub fn shift_relation_residual(g: &Expr, f: &FunctionHandle) -> Result<f64, OperatorError> {
    if f.series().is_none() {
        return Err(OperatorError::MissingCapability(
            "the shift relation is checked on coefficients; f has no Taylor series".into(),
        ));
    }
    let volterra = OperatorSymbol::volterra(g.clone())?.apply(f)?;
    let cesaro = OperatorSymbol::cesaro(g.clone())?.apply(f)?;
    let (Some(v), Some(c)) = (volterra.series(), cesaro.series()) else {
        return Err(OperatorError::MissingCapability(
            "g' has no Taylor series at 0".into(),
        ));
    };
    let shifted = c.shift_up();
    let n = v.coeffs().len().max(shifted.coeffs().len());
    let zero = Complex64::new(0.0, 0.0);
    Ok((0..n)
        .map(|k| {
            let a = v.coeffs().get(k).copied().unwrap_or(zero);
            let b = shifted.coeffs().get(k).copied().unwrap_or(zero);
            (a - b).norm()
        })
        .fold(0.0, f64::max))
}
