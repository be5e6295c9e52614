//! Truncated Taylor series with complex coefficients.
//!
//! A [`TaylorSeries`] stores `a_0..a_N` together with the radius inside which
//! the truncation error is certified to stay below the series tolerance.
//! Series built from explicit coefficients are exact polynomials (radius 1);
//! series obtained by truncating an infinite expansion carry a radius
//! estimated from the geometric decay of their last retained coefficients.

use num_complex::Complex64;
use thiserror::Error;

/// Default truncation degree.
pub const DEFAULT_DEGREE_CAP: usize = 256;
/// Default bound on the estimated truncation tail inside `valid_radius`.
pub const DEFAULT_SERIES_TOL: f64 = 1e-12;
/// Number of trailing coefficients used by the tail model.
pub const TAIL_WINDOW: usize = 8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const RADIUS_SLACK: f64 = 1e-12;
// Largest degree kept when composing two exact polynomials.
const MAX_EXACT_DEGREE: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("point |z| = {abs} lies outside the certified radius {valid_radius}")]
    OutsideValidRadius { abs: f64, valid_radius: f64 },
    #[error("dilation factor {0} is outside [0, 1)")]
    DilationOutOfRange(f64),
    #[error("series composition needs phi(0) = 0, got {0}; evaluate pointwise instead")]
    NonZeroInnerConstant(Complex64),
    #[error("valid radius {0} is outside (0, 1]")]
    InvalidRadius(f64),
    #[error("a series needs at least one coefficient")]
    Empty,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaylorSeries {
    coeffs: Vec<Complex64>,
    valid_radius: f64,
    exact: bool,
}

impl TaylorSeries {
    /// An exact polynomial `a_0 + a_1 z + ... + a_N z^N`; valid on the closed disk.
    pub fn polynomial(coeffs: Vec<Complex64>) -> Result<Self, SeriesError> {
        if coeffs.is_empty() {
            return Err(SeriesError::Empty);
        }
        Ok(Self {
            coeffs,
            valid_radius: 1.0,
            exact: true,
        })
    }

    /// Real-coefficient convenience wrapper around [`TaylorSeries::polynomial`].
    pub fn polynomial_real(coeffs: &[f64]) -> Result<Self, SeriesError> {
        Self::polynomial(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// The truncation of an infinite expansion; the valid radius comes from the tail model.
    pub fn truncated(coeffs: Vec<Complex64>) -> Result<Self, SeriesError> {
        Self::truncated_with_tol(coeffs, DEFAULT_SERIES_TOL)
    }

    pub fn truncated_with_tol(coeffs: Vec<Complex64>, tol: f64) -> Result<Self, SeriesError> {
        if coeffs.is_empty() {
            return Err(SeriesError::Empty);
        }
        let valid_radius = estimate_valid_radius(&coeffs, tol);
        Ok(Self {
            coeffs,
            valid_radius,
            exact: false,
        })
    }

    pub fn constant(c: Complex64) -> Self {
        Self {
            coeffs: vec![c],
            valid_radius: 1.0,
            exact: true,
        }
    }

    /// The identity map `z`.
    pub fn identity() -> Self {
        Self {
            coeffs: vec![ZERO, Complex64::new(1.0, 0.0)],
            valid_radius: 1.0,
            exact: true,
        }
    }

    /// Shrinks the certified radius. Radii can only be lowered this way.
    pub fn with_valid_radius(mut self, radius: f64) -> Result<Self, SeriesError> {
        if !(radius > 0.0 && radius <= 1.0) {
            return Err(SeriesError::InvalidRadius(radius));
        }
        self.valid_radius = self.valid_radius.min(radius);
        Ok(self)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree_cap(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn valid_radius(&self) -> f64 {
        self.valid_radius
    }

    /// True when the coefficients are the complete expansion (a polynomial).
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Estimated `sum_{k>N} |a_k| r^k` from the geometric tail model.
    pub fn tail_bound(&self, r: f64) -> f64 {
        if self.exact {
            return 0.0;
        }
        tail_estimate(&self.coeffs, r)
    }

    /// Horner evaluation at `z`, refused outside the certified radius.
    pub fn eval(&self, z: Complex64) -> Result<Complex64, SeriesError> {
        let abs = z.norm();
        if abs > self.valid_radius * (1.0 + RADIUS_SLACK) {
            return Err(SeriesError::OutsideValidRadius {
                abs,
                valid_radius: self.valid_radius,
            });
        }
        Ok(self.horner(z))
    }

    fn horner(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &a| acc * z + a)
    }

    pub fn derivative(&self) -> Self {
        let coeffs = if self.coeffs.len() == 1 {
            vec![ZERO]
        } else {
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &a)| a * k as f64)
                .collect()
        };
        Self {
            coeffs,
            valid_radius: self.valid_radius,
            exact: self.exact,
        }
    }

    /// The primitive vanishing at 0.
    pub fn antiderivative(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(ZERO);
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &a)| a / (k + 1) as f64),
        );
        Self {
            coeffs,
            valid_radius: self.valid_radius,
            exact: self.exact,
        }
    }

    /// Cauchy product. Exact polynomial operands never limit the truncation degree.
    pub fn multiply(&self, other: &Self) -> Self {
        let (cap, exact) = match (self.exact, other.exact) {
            (true, true) => (self.degree_cap() + other.degree_cap(), true),
            (true, false) => (other.degree_cap(), false),
            (false, true) => (self.degree_cap(), false),
            (false, false) => (self.degree_cap().min(other.degree_cap()), false),
        };
        Self {
            coeffs: cauchy_product(&self.coeffs, &other.coeffs, cap),
            valid_radius: self.valid_radius.min(other.valid_radius),
            exact,
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&a| a * c).collect(),
            valid_radius: self.valid_radius,
            exact: self.exact,
        }
    }

    /// Coefficientwise sum, zero-padded to the longer operand.
    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|k| {
                self.coeffs.get(k).copied().unwrap_or(ZERO)
                    + other.coeffs.get(k).copied().unwrap_or(ZERO)
            })
            .collect();
        Self {
            coeffs,
            valid_radius: self.valid_radius.min(other.valid_radius),
            exact: self.exact && other.exact,
        }
    }

    /// Multiplication by `z`.
    pub fn shift_up(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(ZERO);
        coeffs.extend_from_slice(&self.coeffs);
        Self {
            coeffs,
            valid_radius: self.valid_radius,
            exact: self.exact,
        }
    }

    /// Left inverse of [`TaylorSeries::shift_up`]: drops `a_0` and divides by `z`.
    pub fn shift_down(&self) -> Self {
        let coeffs = if self.coeffs.len() == 1 {
            vec![ZERO]
        } else {
            self.coeffs[1..].to_vec()
        };
        Self {
            coeffs,
            valid_radius: self.valid_radius,
            exact: self.exact,
        }
    }

    /// `f_r(z) = f(rz)` for `0 <= r < 1`.
    pub fn dilate(&self, r: f64) -> Result<Self, SeriesError> {
        if !(0.0..1.0).contains(&r) {
            return Err(SeriesError::DilationOutOfRange(r));
        }
        let mut power = 1.0;
        let coeffs = self
            .coeffs
            .iter()
            .map(|&a| {
                let b = a * power;
                power *= r;
                b
            })
            .collect();
        let valid_radius = if r == 0.0 {
            1.0
        } else {
            (self.valid_radius / r).min(1.0)
        };
        Ok(Self {
            coeffs,
            valid_radius,
            exact: self.exact,
        })
    }

    /// Series of `f ∘ phi` for `phi(0) = 0`, by Horner's scheme in series arithmetic.
    pub fn compose_at_zero(&self, phi: &Self) -> Result<Self, SeriesError> {
        let phi0 = phi.coeffs[0];
        if phi0.norm() > 1e-14 {
            return Err(SeriesError::NonZeroInnerConstant(phi0));
        }
        let (cap, exact) = match (self.exact, phi.exact) {
            (true, true) => {
                let full = self.degree_cap() * phi.degree_cap();
                if full <= MAX_EXACT_DEGREE {
                    (full.max(self.degree_cap()), true)
                } else {
                    (self.degree_cap().max(phi.degree_cap()), false)
                }
            }
            (true, false) => (phi.degree_cap(), false),
            (false, true) => (self.degree_cap(), false),
            (false, false) => (self.degree_cap().min(phi.degree_cap()), false),
        };
        let mut inner = phi.coeffs.clone();
        inner[0] = ZERO;
        let mut acc = vec![ZERO; cap + 1];
        for &a in self.coeffs.iter().rev() {
            acc = cauchy_product(&acc, &inner, cap);
            acc[0] += a;
        }
        if exact {
            return Ok(Self {
                coeffs: acc,
                valid_radius: 1.0,
                exact: true,
            });
        }
        let estimated = estimate_valid_radius(&acc, DEFAULT_SERIES_TOL);
        Ok(Self {
            coeffs: acc,
            valid_radius: estimated.min(phi.valid_radius),
            exact: false,
        })
    }
}

/// Truncated Cauchy product keeping degrees `0..=cap`.
pub(crate) fn cauchy_product(a: &[Complex64], b: &[Complex64], cap: usize) -> Vec<Complex64> {
    let mut out = vec![ZERO; cap + 1];
    for (i, &ai) in a.iter().enumerate().take(cap + 1) {
        if ai == ZERO {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(cap + 1 - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Geometric model `|a_k| ≈ anchor * ratio^(k-N)` fitted to the trailing window.
fn tail_model(coeffs: &[Complex64]) -> Option<(f64, f64)> {
    let n = coeffs.len() - 1;
    let start = coeffs.len().saturating_sub(TAIL_WINDOW);
    let points: Vec<(f64, f64)> = coeffs[start..]
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > 0.0)
        .map(|(i, a)| ((start + i) as f64, a.norm().ln()))
        .collect();
    if points.is_empty() {
        return None;
    }
    let ratio = if points.len() == 1 {
        1.0
    } else {
        let m = points.len() as f64;
        let mean_k = points.iter().map(|p| p.0).sum::<f64>() / m;
        let mean_l = points.iter().map(|p| p.1).sum::<f64>() / m;
        let sxx: f64 = points.iter().map(|p| (p.0 - mean_k).powi(2)).sum();
        let sxy: f64 = points
            .iter()
            .map(|p| (p.0 - mean_k) * (p.1 - mean_l))
            .sum();
        (sxy / sxx).exp()
    };
    let anchor = points
        .iter()
        .map(|&(k, l)| l.exp() * ratio.powf(n as f64 - k))
        .fold(0.0, f64::max);
    Some((anchor, ratio))
}

fn tail_estimate(coeffs: &[Complex64], r: f64) -> f64 {
    let Some((anchor, ratio)) = tail_model(coeffs) else {
        return 0.0;
    };
    let q = ratio * r;
    if q >= 1.0 {
        return f64::INFINITY;
    }
    let n = (coeffs.len() - 1) as i32;
    anchor * r.powi(n) * q / (1.0 - q)
}

/// Largest radius in (0, 1] whose estimated tail stays below `tol`.
pub fn estimate_valid_radius(coeffs: &[Complex64], tol: f64) -> f64 {
    if tail_estimate(coeffs, 1.0) <= tol {
        return 1.0;
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if tail_estimate(coeffs, mid) <= tol {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // A zero radius cannot be represented; keep a tiny certified disk instead.
    lo.max(f64::MIN_POSITIVE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn reals(s: &TaylorSeries) -> Vec<f64> {
        s.coeffs().iter().map(|a| a.re).collect()
    }

    #[test]
    fn eval_examples() {
        let p = TaylorSeries::polynomial_real(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(p.eval(c(0.0)).unwrap(), c(1.0));
        // 1 + 2(0.5) + 3(0.25)
        assert_abs_diff_eq!(p.eval(c(0.5)).unwrap().re, 2.75, epsilon = 1e-15);

        let geometric = TaylorSeries::truncated(vec![c(1.0); 65]).unwrap();
        assert!(geometric.valid_radius() > 0.5);
        let oracle: f64 = (0..2000).map(|k| 0.5_f64.powi(k)).sum();
        assert_abs_diff_eq!(geometric.eval(c(0.5)).unwrap().re, oracle, epsilon = 1e-12);
    }

    #[test]
    fn eval_refuses_points_outside_radius() {
        let geometric = TaylorSeries::truncated(vec![c(1.0); 65]).unwrap();
        let err = geometric.eval(c(0.95)).unwrap_err();
        assert!(matches!(err, SeriesError::OutsideValidRadius { .. }));
    }

    #[test]
    fn derivative_examples() {
        let p = TaylorSeries::polynomial_real(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(reals(&p.derivative()), vec![2.0, 6.0]);
        assert_eq!(reals(&TaylorSeries::constant(c(5.0)).derivative()), vec![0.0]);
        let g = TaylorSeries::polynomial_real(&[1.0, 1.0, 1.0, 1.0]).unwrap();
        assert_eq!(reals(&g.derivative()), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn antiderivative_examples() {
        let p = TaylorSeries::polynomial_real(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(reals(&p.antiderivative()), vec![0.0, 1.0, 1.0, 1.0]);
        let z = TaylorSeries::polynomial_real(&[0.0]).unwrap();
        assert_eq!(reals(&z.antiderivative()), vec![0.0, 0.0]);
    }

    #[test]
    fn multiply_examples() {
        let a = TaylorSeries::polynomial_real(&[1.0, 1.0]).unwrap();
        let b = TaylorSeries::polynomial_real(&[1.0, -1.0]).unwrap();
        assert_eq!(reals(&a.multiply(&b)), vec![1.0, 0.0, -1.0]);

        let f = TaylorSeries::polynomial_real(&[0.5, -2.0, 3.0]).unwrap();
        let one = TaylorSeries::constant(c(1.0));
        assert_eq!(f.multiply(&one).coeffs(), f.coeffs());

        let geometric = TaylorSeries::truncated(vec![c(1.0); 33]).unwrap();
        let product = geometric.multiply(&b);
        assert_eq!(product.degree_cap(), 32);
        assert_eq!(product.coeffs()[0], c(1.0));
        assert!(product.coeffs()[1..].iter().all(|&a| a == c(0.0)));
    }

    #[test]
    fn dilate_examples() {
        let sq = TaylorSeries::polynomial_real(&[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(reals(&sq.dilate(0.5).unwrap()), vec![0.0, 0.0, 0.25]);
        let f = TaylorSeries::polynomial_real(&[3.0, 1.0, -1.0]).unwrap();
        let f0 = f.dilate(0.0).unwrap();
        assert_eq!(reals(&f0), vec![3.0, 0.0, 0.0]);
        assert!(matches!(f.dilate(1.0), Err(SeriesError::DilationOutOfRange(_))));
        assert!(matches!(f.dilate(-0.1), Err(SeriesError::DilationOutOfRange(_))));
    }

    #[test]
    fn dilate_raises_valid_radius() {
        let geometric = TaylorSeries::truncated(vec![c(1.0); 257]).unwrap();
        let r = geometric.valid_radius();
        let d = geometric.dilate(0.5).unwrap();
        assert_abs_diff_eq!(d.valid_radius(), (r / 0.5).min(1.0));
    }

    #[test]
    fn compose_examples() {
        let sq = TaylorSeries::polynomial_real(&[0.0, 0.0, 1.0]).unwrap();
        let half = TaylorSeries::polynomial_real(&[0.0, 0.5]).unwrap();
        let composed = sq.compose_at_zero(&half).unwrap();
        assert_eq!(reals(&composed), vec![0.0, 0.0, 0.25]);

        let f = TaylorSeries::polynomial_real(&[2.0, -1.0, 0.5, 4.0]).unwrap();
        let id = TaylorSeries::identity();
        assert_eq!(reals(&f.compose_at_zero(&id).unwrap()), reals(&f));

        let geometric = TaylorSeries::truncated(vec![c(1.0); 21]).unwrap();
        let z2 = TaylorSeries::polynomial_real(&[0.0, 0.0, 1.0]).unwrap();
        let even = geometric.compose_at_zero(&z2).unwrap();
        let expected: Vec<f64> = (0..=20).map(|k| if k % 2 == 0 { 1.0 } else { 0.0 }).collect();
        assert_eq!(reals(&even), expected);

        let shifted = TaylorSeries::polynomial_real(&[0.1, 1.0]).unwrap();
        assert!(matches!(
            f.compose_at_zero(&shifted),
            Err(SeriesError::NonZeroInnerConstant(_))
        ));
    }

    #[test]
    fn tail_bound_is_below_tolerance_inside_radius() {
        let coeffs: Vec<Complex64> = (1..=257).map(|k| c(1.0 / k as f64)).collect();
        let s = TaylorSeries::truncated(coeffs).unwrap();
        let r = s.valid_radius();
        assert!(r > 0.8 && r < 1.0, "radius {r}");
        assert!(s.tail_bound(r) <= DEFAULT_SERIES_TOL * 1.0001);
    }

    #[test]
    fn shifts_are_inverse() {
        let f = TaylorSeries::polynomial_real(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(f.shift_up().shift_down(), f);
    }
}
