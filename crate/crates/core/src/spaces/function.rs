// Concrete holomorphic functions: a pointwise evaluator plus, when
// available, a truncated Taylor series at 0.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use thiserror::Error;

use super::quad::{graded_integral, panels_for_gap};
use crate::expr::{parse, Expr, ExprError};
use crate::series::{SeriesError, TaylorSeries, DEFAULT_DEGREE_CAP};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FunctionError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("non-finite value at z = {0}")]
    NonFinite(Complex64),
}

#[derive(Clone)]
enum Evaluator {
    Closed(Expr),
    /// Evaluate the attached series.
    Series,
    /// `int_0^z h(w) dw`.
    Integral(FunctionHandle),
    /// `int_0^1 t^k h(t z) dt`.
    Moment { integrand: FunctionHandle, power: i32 },
    Product(FunctionHandle, FunctionHandle),
    Sum(Vec<(Complex64, FunctionHandle)>),
    /// `outer(inner(z))`.
    Compose { outer: FunctionHandle, inner: Expr },
}

struct Inner {
    eval: Evaluator,
    series: Option<TaylorSeries>,
    derivative: OnceLock<FunctionHandle>,
}

/// A holomorphic function on the disk. Cheap to clone.
#[derive(Clone)]
pub struct FunctionHandle {
    inner: Arc<Inner>,
}

impl fmt::Debug for FunctionHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionHandle")
            .field("description", &self.describe())
            .field("has_series", &self.inner.series.is_some())
            .finish()
    }
}

impl FunctionHandle {
    fn new(eval: Evaluator, series: Option<TaylorSeries>) -> Self {
        Self {
            inner: Arc::new(Inner {
                eval,
                series,
                derivative: OnceLock::new(),
            }),
        }
    }

    /// A closed form; the Taylor series is attached when the expression is
    /// analytic at 0.
    pub fn from_expr(e: Expr) -> Self {
        let series = e.to_series(DEFAULT_DEGREE_CAP).ok();
        Self::new(Evaluator::Closed(e), series)
    }

    /// A closed form without computing its series.
    pub fn from_expr_pointwise(e: Expr) -> Self {
        Self::new(Evaluator::Closed(e), None)
    }

    pub fn parse(text: &str) -> Result<Self, ExprError> {
        Ok(Self::from_expr(parse(text)?))
    }

    pub fn from_series(s: TaylorSeries) -> Self {
        Self::new(Evaluator::Series, Some(s))
    }

    /// A closed form with a series computed elsewhere (e.g. at another cap).
    pub fn with_series(e: Expr, s: TaylorSeries) -> Self {
        Self::new(Evaluator::Closed(e), Some(s))
    }

    /// True when the only way to evaluate is the truncated series.
    pub fn is_series_only(&self) -> bool {
        matches!(self.inner.eval, Evaluator::Series)
    }

    pub fn closed_form(&self) -> Option<&Expr> {
        match &self.inner.eval {
            Evaluator::Closed(e) => Some(e),
            _ => None,
        }
    }

    pub fn series(&self) -> Option<&TaylorSeries> {
        self.inner.series.as_ref()
    }

    /// Short human-readable description of how the function is represented.
    pub fn describe(&self) -> String {
        match &self.inner.eval {
            Evaluator::Closed(e) => e.to_string(),
            Evaluator::Series => format!(
                "series(N = {})",
                self.inner.series.as_ref().map_or(0, |s| s.degree_cap())
            ),
            Evaluator::Integral(h) => format!("integral_0^z [{}]", h.describe()),
            Evaluator::Moment { integrand, power } => {
                format!("int_0^1 t^{power} [{}](t z) dt", integrand.describe())
            }
            Evaluator::Product(a, b) => format!("[{}] * [{}]", a.describe(), b.describe()),
            Evaluator::Sum(terms) => terms
                .iter()
                .map(|(c, h)| format!("{c} [{}]", h.describe()))
                .collect::<Vec<_>>()
                .join(" + "),
            Evaluator::Compose { outer, inner } => format!("[{}] o ({inner})", outer.describe()),
        }
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64, FunctionError> {
        let value = match &self.inner.eval {
            Evaluator::Closed(e) => e.eval(z)?,
            Evaluator::Series => self
                .inner
                .series
                .as_ref()
                .expect("series evaluator always carries a series")
                .eval(z)?,
            Evaluator::Integral(h) => z * moment(h, 0, z)?,
            Evaluator::Moment { integrand, power } => moment(integrand, *power, z)?,
            Evaluator::Product(a, b) => a.eval(z)? * b.eval(z)?,
            Evaluator::Sum(terms) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for (c, h) in terms {
                    acc += c * h.eval(z)?;
                }
                acc
            }
            Evaluator::Compose { outer, inner } => outer.eval(inner.eval(z)?)?,
        };
        if value.re.is_finite() && value.im.is_finite() {
            Ok(value)
        } else {
            Err(FunctionError::NonFinite(z))
        }
    }

    /// The derivative, built once and cached.
    pub fn derivative(&self) -> FunctionHandle {
        self.inner.derivative.get_or_init(|| self.build_derivative()).clone()
    }

    fn build_derivative(&self) -> FunctionHandle {
        let series = self.inner.series.as_ref().map(TaylorSeries::derivative);
        match &self.inner.eval {
            Evaluator::Closed(e) => Self::new(Evaluator::Closed(e.differentiate()), series),
            Evaluator::Series => Self::from_series(series.expect("series evaluator has a series")),
            Evaluator::Integral(h) => h.clone(),
            Evaluator::Moment { integrand, power } => Self::new(
                Evaluator::Moment {
                    integrand: integrand.derivative(),
                    power: power + 1,
                },
                series,
            ),
            Evaluator::Product(a, b) => Self::linear_combination(&[
                (Complex64::new(1.0, 0.0), Self::product(&a.derivative(), b)),
                (Complex64::new(1.0, 0.0), Self::product(a, &b.derivative())),
            ]),
            Evaluator::Sum(terms) => Self::linear_combination(
                &terms
                    .iter()
                    .map(|(c, h)| (*c, h.derivative()))
                    .collect::<Vec<_>>(),
            ),
            Evaluator::Compose { outer, inner } => Self::product(
                &Self::compose(&outer.derivative(), inner),
                &Self::from_expr(inner.differentiate()),
            ),
        }
    }

    /// `a * b`, kept in closed form when both factors are.
    pub fn product(a: &FunctionHandle, b: &FunctionHandle) -> FunctionHandle {
        let series = match (a.series(), b.series()) {
            (Some(x), Some(y)) => Some(x.multiply(y)),
            _ => None,
        };
        match (a.closed_form(), b.closed_form()) {
            (Some(x), Some(y)) => Self::new(Evaluator::Closed(x.mul(y)), series),
            _ => Self::new(Evaluator::Product(a.clone(), b.clone()), series),
        }
    }

    /// `sum c_i f_i`.
    pub fn linear_combination(terms: &[(Complex64, FunctionHandle)]) -> FunctionHandle {
        let series = terms.iter().try_fold(None::<TaylorSeries>, |acc, (c, h)| {
            let term = h.series()?.scale(*c);
            Some(Some(match acc {
                None => term,
                Some(s) => s.add(&term),
            }))
        });
        let series = series.flatten();
        let closed: Option<Vec<Expr>> = terms
            .iter()
            .map(|(c, h)| h.closed_form().map(|e| e.scale(*c)))
            .collect();
        match closed {
            Some(parts) if !parts.is_empty() => {
                let sum = parts[1..].iter().fold(parts[0].clone(), |acc, e| acc.add(e));
                Self::new(Evaluator::Closed(sum), series)
            }
            _ => Self::new(Evaluator::Sum(terms.to_vec()), series),
        }
    }

    /// `outer(inner(z))`. The series is composed only when `inner(0) = 0`.
    pub fn compose(outer: &FunctionHandle, inner: &Expr) -> FunctionHandle {
        if let Some(e) = outer.closed_form() {
            let substituted = e.substitute(inner);
            return match outer.series() {
                Some(_) => Self::from_expr(substituted),
                None => Self::from_expr_pointwise(substituted),
            };
        }
        let series = match (outer.series(), inner_series_at_zero(inner)) {
            (Some(f), Some(phi)) => f.compose_at_zero(&phi).ok(),
            _ => None,
        };
        Self::new(
            Evaluator::Compose {
                outer: outer.clone(),
                inner: inner.clone(),
            },
            series,
        )
    }

    /// `int_0^z h(w) dw`.
    pub fn integral(h: &FunctionHandle) -> FunctionHandle {
        let series = h.series().map(TaylorSeries::antiderivative);
        Self::new(Evaluator::Integral(h.clone()), series)
    }

    /// `(1/z) int_0^z h(w) dw`, continuously extended to `z = 0`.
    pub fn average(h: &FunctionHandle) -> FunctionHandle {
        let series = h.series().map(|s| s.antiderivative().shift_down());
        Self::new(
            Evaluator::Moment {
                integrand: h.clone(),
                power: 0,
            },
            series,
        )
    }

    /// Largest disagreement between evaluator and series at the probe points
    /// inside the series' valid radius.
    pub fn consistency_gap(&self) -> Option<f64> {
        let s = self.series()?;
        let mut worst = 0.0_f64;
        for z in crate::expr::probe_points() {
            let z = z * (s.valid_radius() / 0.9).min(1.0);
            if let (Ok(a), Ok(b)) = (self.eval(z), s.eval(z)) {
                worst = worst.max((a - b).norm() / (1.0 + a.norm()));
            }
        }
        Some(worst)
    }
}

fn inner_series_at_zero(inner: &Expr) -> Option<TaylorSeries> {
    if inner.eval(Complex64::new(0.0, 0.0)).ok()? != Complex64::new(0.0, 0.0) {
        return None;
    }
    inner.to_series(DEFAULT_DEGREE_CAP).ok()
}

/// `int_0^1 t^k h(t z) dt` with panels graded towards the boundary.
fn moment(h: &FunctionHandle, power: i32, z: Complex64) -> Result<Complex64, FunctionError> {
    let panels = panels_for_gap(1.0 - z.norm());
    graded_integral(panels, |t| Ok(h.eval(z * t)? * t.powi(power)))
}
