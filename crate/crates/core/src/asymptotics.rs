//! Boundary asymptotics of radial samples.
//!
//! A sequence of positive values sampled at radii `r_j = 1 - 2^-j` is fitted
//! to `C (1 - r)^e` by least squares in log-log coordinates. The sign of `e`
//! separates decay, a finite nonzero limit, and divergence.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A point of the disk together with its exactly known modulus.
///
/// On the boundary grid `1 - r^2` loses all relative accuracy if `r` is
/// recomputed from `z`, so the generating radius travels with the point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint {
    pub z: Complex64,
    pub r: f64,
}

impl DiskPoint {
    pub fn polar(r: f64, theta: f64) -> Self {
        Self {
            z: Complex64::from_polar(r, theta),
            r,
        }
    }

    /// A point whose modulus is computed from `z`.
    pub fn from_z(z: Complex64) -> Self {
        Self { z, r: z.norm() }
    }
}

/// `1 - 2^-j`, exact in binary floating point for `j <= 52`.
pub fn grid_radius(j: u32) -> f64 {
    1.0 - (-(j as f64)).exp2()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FitTolerances {
    /// Number of trailing radii used by the fit.
    pub window: usize,
    /// Fits with RMS log-residual at or above this are unreliable.
    pub max_residual: f64,
    /// Exponents with `|e| < eps_fit` are read as a finite nonzero limit.
    pub eps_fit: f64,
    /// Values below this count as zero.
    pub decay_tol: f64,
}

impl Default for FitTolerances {
    fn default() -> Self {
        Self {
            window: 12,
            max_residual: 0.05,
            eps_fit: 0.01,
            decay_tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerFit {
    pub exponent: f64,
    pub log_constant: f64,
    pub residual: f64,
}

/// Least-squares fit of `ln value = log_constant + exponent * ln(1 - r)`.
///
/// Nonpositive values are skipped; `None` when fewer than two remain or the
/// abscissae coincide.
pub fn fit_power_law(radii: &[f64], values: &[f64]) -> Option<PowerFit> {
    let points: Vec<(f64, f64)> = radii
        .iter()
        .zip(values)
        .filter(|(r, v)| **v > 0.0 && v.is_finite() && **r < 1.0)
        .map(|(r, v)| ((1.0 - r).ln(), v.ln()))
        .collect();
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let exponent = sxy / sxx;
    let log_constant = my - exponent * mx;
    let residual = (points
        .iter()
        .map(|p| (p.1 - log_constant - exponent * p.0).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Some(PowerFit {
        exponent,
        log_constant,
        residual,
    })
}

/// Aitken's delta-squared extrapolation of the last three terms.
///
/// Falls back to the last term when the second difference vanishes or the
/// acceleration would move further than the last step suggests.
pub fn aitken(x0: f64, x1: f64, x2: f64) -> f64 {
    let d1 = x1 - x0;
    let d2 = x2 - x1;
    let dd = d2 - d1;
    if dd == 0.0 || !dd.is_finite() {
        return x2;
    }
    let limit = x2 - d2 * d2 / dd;
    if !limit.is_finite() || (limit - x2).abs() > 16.0 * d2.abs().max(f64::EPSILON * x2.abs()) {
        return x2;
    }
    limit
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RayBehaviour {
    /// Every value in the window is below the decay tolerance.
    Zero,
    Decaying { exponent: f64 },
    Stable { exponent: f64, limit: f64 },
    Diverging { exponent: f64 },
    Unreliable { exponent: Option<f64>, residual: Option<f64> },
}

impl RayBehaviour {
    pub fn exponent(&self) -> Option<f64> {
        match *self {
            RayBehaviour::Zero => None,
            RayBehaviour::Decaying { exponent }
            | RayBehaviour::Stable { exponent, .. }
            | RayBehaviour::Diverging { exponent } => Some(exponent),
            RayBehaviour::Unreliable { exponent, .. } => exponent,
        }
    }

    pub fn is_reliable(&self) -> bool {
        !matches!(self, RayBehaviour::Unreliable { .. })
    }

    /// Boundary limit along the ray; `None` for divergent or unreliable rays.
    pub fn limit(&self) -> Option<f64> {
        match *self {
            RayBehaviour::Zero | RayBehaviour::Decaying { .. } => Some(0.0),
            RayBehaviour::Stable { limit, .. } => Some(limit),
            _ => None,
        }
    }
}

/// Fit the trailing window of one ray and classify its boundary behaviour.
pub fn classify_ray(radii: &[f64], values: &[f64], tol: &FitTolerances) -> RayBehaviour {
    let n = radii.len().min(values.len());
    let start = n.saturating_sub(tol.window.max(3));
    let (radii, values) = (&radii[start..n], &values[start..n]);
    if values.iter().all(|v| v.abs() < tol.decay_tol) {
        return RayBehaviour::Zero;
    }
    let Some(fit) = fit_power_law(radii, values) else {
        return RayBehaviour::Unreliable {
            exponent: None,
            residual: None,
        };
    };
    if fit.residual >= tol.max_residual {
        return RayBehaviour::Unreliable {
            exponent: Some(fit.exponent),
            residual: Some(fit.residual),
        };
    }
    let e = fit.exponent;
    if e >= tol.eps_fit {
        RayBehaviour::Decaying { exponent: e }
    } else if e <= -tol.eps_fit {
        RayBehaviour::Diverging { exponent: e }
    } else {
        let k = values.len();
        RayBehaviour::Stable {
            exponent: e,
            limit: aitken(values[k - 3], values[k - 2], values[k - 1]),
        }
    }
}
