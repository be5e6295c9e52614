// Norms of concrete functions by quadrature (Hardy, Bergman) or by a sup
// over a polar grid refining towards the boundary (growth, Bloch-type).

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::quad::{circle_mean, dyadic_breakpoints, jacobi, legendre, panels_for_gap, CircleMean};
use super::{FunctionHandle, SpaceDescriptor, SpaceError, SpaceKind};
use crate::asymptotics::{classify_ray, grid_radius, FitTolerances, RayBehaviour};
use crate::weights::Weight;

const BERGMAN_PANEL_NODES: usize = 32;
const BERGMAN_ANGULAR_START: usize = 512;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NormConfig {
    /// Rays of the growth/Bloch sup grid.
    pub rays: usize,
    /// Radii per dyadic level of the sup grid: `1 - 2^(-m/R)`.
    pub radial_refinement: u32,
    /// Deepest level: radii reach `1 - 2^-max_j`.
    pub max_j: u32,
    /// Starting trapezoid size for Hardy circle means.
    pub angular_m: usize,
    pub max_angular_m: usize,
    pub angular_rel_tol: f64,
    /// Gauss-Jacobi nodes in `s = r^2` for the Bergman integral.
    pub bergman_nodes: usize,
    /// Radii added to every grid, e.g. the pole radius of a test function.
    /// For Bergman norms they switch on panels graded towards the boundary.
    pub extra_radii: Vec<f64>,
    pub fit: FitTolerances,
}

impl Default for NormConfig {
    fn default() -> Self {
        Self {
            rays: 256,
            radial_refinement: 4,
            max_j: 40,
            angular_m: 2048,
            max_angular_m: 1 << 20,
            angular_rel_tol: 1e-13,
            bergman_nodes: 128,
            extra_radii: Vec::new(),
            fit: FitTolerances::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Resolution {
    /// Angular points (largest trapezoid size for quadrature norms).
    pub angular: usize,
    /// Radii, or radial quadrature nodes.
    pub radial: usize,
    pub max_radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Unbounded {
    /// Fitted boundary exponent of the growing quantity; `None` when the
    /// quadrature itself was non-finite.
    pub exponent: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormEstimate {
    pub value: f64,
    pub unbounded: Option<Unbounded>,
    pub resolution: Resolution,
    pub warnings: Vec<String>,
}

/// Norm of `f` in `x` (the Bloch-type value is the seminorm `sup v|f'|`).
pub fn space_norm(
    x: &SpaceDescriptor,
    f: &FunctionHandle,
    cfg: &NormConfig,
) -> Result<NormEstimate, SpaceError> {
    match x.kind() {
        SpaceKind::Hardy { p } => hardy_norm(*p, f, cfg),
        SpaceKind::Bergman { p, alpha } => bergman_norm(*p, *alpha, f, cfg),
        SpaceKind::Growth(v) => sup_norm(v, f, cfg),
        SpaceKind::BlochType(v) => sup_norm(v, &f.derivative(), cfg),
    }
}

fn abs_pow(w: Complex64, p: f64) -> f64 {
    if p == 2.0 {
        w.norm_sqr()
    } else {
        w.norm().powf(p)
    }
}

fn eval_at(f: &FunctionHandle, z: Complex64) -> Result<Complex64, SpaceError> {
    f.eval(z).map_err(|source| SpaceError::Evaluation { z, source })
}

fn valid_extras(cfg: &NormConfig) -> impl Iterator<Item = f64> + '_ {
    cfg.extra_radii
        .iter()
        .copied()
        .filter(|r| (0.0..1.0).contains(r))
}

fn sorted_unique(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

fn circle_mean_p(
    f: &FunctionHandle,
    r: f64,
    p: f64,
    m0: usize,
    cfg: &NormConfig,
) -> Result<CircleMean, SpaceError> {
    circle_mean(m0, cfg.max_angular_m, cfg.angular_rel_tol, |theta| {
        Ok(abs_pow(eval_at(f, Complex64::from_polar(r, theta))?, p))
    })
}

fn convergence_warning(label: &str, means: &[(f64, CircleMean)]) -> Option<String> {
    let failed: Vec<f64> = means
        .iter()
        .filter(|(_, m)| !m.converged)
        .map(|(r, _)| *r)
        .collect();
    let worst = failed.iter().copied().fold(f64::NAN, f64::max);
    (!failed.is_empty()).then(|| {
        format!(
            "{label}: angular quadrature reached its cap at {} radii (largest r = {worst})",
            failed.len()
        )
    })
}

fn hardy_norm(p: f64, f: &FunctionHandle, cfg: &NormConfig) -> Result<NormEstimate, SpaceError> {
    let grid: Vec<f64> = (1..=cfg.max_j).map(grid_radius).collect();
    let radii = sorted_unique(
        std::iter::once(0.0)
            .chain(grid.iter().copied())
            .chain(valid_extras(cfg))
            .collect(),
    );
    let means: Vec<(f64, CircleMean)> = radii
        .par_iter()
        .map(|&r| Ok((r, circle_mean_p(f, r, p, cfg.angular_m, cfg)?)))
        .collect::<Result<_, SpaceError>>()?;
    let mut warnings: Vec<String> = convergence_warning("hardy", &means).into_iter().collect();
    let angular = means.iter().map(|(_, m)| m.points).max().unwrap_or(0);
    let resolution = Resolution {
        angular,
        radial: radii.len(),
        max_radius: *radii.last().expect("nonempty"),
    };
    let norms: Vec<f64> = means.iter().map(|(_, m)| m.mean.powf(1.0 / p)).collect();
    if norms.iter().any(|v| !v.is_finite()) {
        return Ok(NormEstimate {
            value: f64::MAX,
            unbounded: Some(Unbounded { exponent: None }),
            resolution,
            warnings,
        });
    }
    let value = norms.iter().copied().fold(0.0, f64::max);
    let on_grid: Vec<f64> = grid
        .iter()
        .map(|r| norms[radii.iter().position(|x| x == r).expect("grid radius present")])
        .collect();
    let unbounded = match classify_ray(&grid, &on_grid, &cfg.fit) {
        RayBehaviour::Diverging { exponent } => {
            warnings.push(format!("circle means grow like (1-r)^{exponent}"));
            Some(Unbounded {
                exponent: Some(exponent),
            })
        }
        _ => None,
    };
    Ok(NormEstimate {
        value,
        unbounded,
        resolution,
        warnings,
    })
}

// Nodes s_i and weights w_i with sum w_i F(s_i) ~ int_0^1 (1-s)^alpha F(s) ds.
fn bergman_rule(alpha: f64, cfg: &NormConfig) -> Vec<(f64, f64)> {
    let outer = valid_extras(cfg).fold(None, |acc: Option<f64>, r| Some(acc.map_or(r, |a| a.max(r))));
    let Some(rho) = outer else {
        let scale = 2f64.powf(-alpha - 1.0);
        return jacobi(cfg.bergman_nodes, alpha)
            .into_iter()
            .map(|(x, w)| (0.5 * (x + 1.0), w * scale))
            .collect();
    };
    let k = panels_for_gap(1.0 - rho * rho) + 1;
    let b = dyadic_breakpoints(k);
    let gl = legendre(BERGMAN_PANEL_NODES);
    let mut rule = Vec::new();
    for w in b.windows(2).take(b.len() - 2) {
        let (mid, half) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
        for &(x, wt) in &gl {
            let s = mid + half * x;
            rule.push((s, wt * half * (1.0 - s).powf(alpha)));
        }
    }
    let a = b[b.len() - 2];
    let scale = (0.5 * (1.0 - a)).powf(alpha + 1.0);
    for (x, wt) in jacobi(BERGMAN_PANEL_NODES, alpha) {
        rule.push((a + (1.0 - a) * 0.5 * (x + 1.0), wt * scale));
    }
    rule
}

fn bergman_norm(
    p: f64,
    alpha: f64,
    f: &FunctionHandle,
    cfg: &NormConfig,
) -> Result<NormEstimate, SpaceError> {
    let rule = bergman_rule(alpha, cfg);
    let means: Vec<(f64, CircleMean)> = rule
        .par_iter()
        .map(|&(s, _)| {
            let r = s.sqrt();
            Ok((r, circle_mean_p(f, r, p, BERGMAN_ANGULAR_START, cfg)?))
        })
        .collect::<Result<_, SpaceError>>()?;
    let warnings: Vec<String> = convergence_warning("bergman", &means).into_iter().collect();
    let integral: f64 = rule
        .iter()
        .zip(&means)
        .map(|((_, w), (_, m))| w * m.mean)
        .sum();
    let value = ((alpha + 1.0) * integral).powf(1.0 / p);
    let resolution = Resolution {
        angular: means.iter().map(|(_, m)| m.points).max().unwrap_or(0),
        radial: rule.len(),
        max_radius: means.iter().map(|(r, _)| *r).fold(0.0, f64::max),
    };
    let unbounded = (!value.is_finite()).then_some(Unbounded { exponent: None });
    Ok(NormEstimate {
        value: if value.is_finite() { value } else { f64::MAX },
        unbounded,
        resolution,
        warnings,
    })
}

/// Radii of the sup grid: 0, the refined dyadic levels and the extras.
/// Returns the sorted radii and the indices of the dyadic levels among them.
pub(crate) fn sup_grid_radii(cfg: &NormConfig) -> (Vec<f64>, Vec<usize>) {
    let levels = cfg.radial_refinement.max(1);
    let dyadic: Vec<f64> = (1..=levels * cfg.max_j)
        .map(|m| 1.0 - (-(m as f64) / levels as f64).exp2())
        .collect();
    let radii = sorted_unique(
        std::iter::once(0.0)
            .chain(dyadic.iter().copied())
            .chain(valid_extras(cfg))
            .collect(),
    );
    let index = dyadic
        .iter()
        .map(|r| radii.iter().position(|x| x == r).expect("dyadic radius present"))
        .collect();
    (radii, index)
}

fn sup_norm(v: &Weight, f: &FunctionHandle, cfg: &NormConfig) -> Result<NormEstimate, SpaceError> {
    let (radii, dyadic) = sup_grid_radii(cfg);
    let rays = cfg.rays.max(1);
    let rows: Vec<Vec<f64>> = radii
        .par_iter()
        .map(|&r| {
            let vr = v.value_at_radius(r)?;
            (0..rays)
                .map(|k| {
                    let z = Complex64::from_polar(r, std::f64::consts::TAU * k as f64 / rays as f64);
                    Ok(vr * eval_at(f, z)?.norm())
                })
                .collect::<Result<Vec<f64>, SpaceError>>()
        })
        .collect::<Result<_, SpaceError>>()?;
    let value = rows.iter().flatten().copied().fold(0.0, f64::max);
    let levels: Vec<f64> = dyadic.iter().map(|&i| radii[i]).collect();
    let fit = FitTolerances {
        window: cfg.fit.window * cfg.radial_refinement.max(1) as usize,
        ..cfg.fit
    };
    let mut worst: Option<f64> = None;
    for k in 0..rays {
        let ray: Vec<f64> = dyadic.iter().map(|&i| rows[i][k]).collect();
        if let RayBehaviour::Diverging { exponent } = classify_ray(&levels, &ray, &fit) {
            worst = Some(worst.map_or(exponent, |w: f64| w.min(exponent)));
        }
    }
    let mut warnings = Vec::new();
    if let Some(e) = worst {
        warnings.push(format!("weighted values grow like (1-r)^{e} along some ray"));
    }
    Ok(NormEstimate {
        value,
        unbounded: worst.map(|e| Unbounded { exponent: Some(e) }),
        resolution: Resolution {
            angular: rays,
            radial: radii.len(),
            max_radius: *radii.last().expect("nonempty"),
        },
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use approx::assert_abs_diff_eq;

    fn norm(space: &str, f: &str) -> NormEstimate {
        let x = SpaceDescriptor::from_name(space).unwrap();
        space_norm(&x, &FunctionHandle::parse(f).unwrap(), &NormConfig::default()).unwrap()
    }

    #[test]
    fn growth_examples() {
        assert_eq!(norm("growth:power:1", "1").value, 1.0);
        let n = norm("growth:power:1", "1/(1-z)");
        assert_abs_diff_eq!(n.value, 2.0, epsilon = 1e-3);
        assert!(n.unbounded.is_none());
        let n = norm("growth:power:0.5", "1/(1-z)");
        assert!(n.unbounded.is_some());
    }

    #[test]
    fn hardy_kernel_has_unit_norm() {
        let n = norm("hardy:2", "(0.75)^(0.5)/(1-0.5*z)");
        assert_abs_diff_eq!(n.value, 1.0, epsilon = 1e-6);
        assert!(n.warnings.is_empty());
    }

    #[test]
    fn hardy_detects_growth() {
        let n = norm("hardy:2", "(1-z)^(-0.75)");
        assert!(n.unbounded.is_some());
    }

    #[test]
    fn bergman_weighted_monomials() {
        // |z^k|^2 against (alpha+1)(1-|z|^2)^alpha dA: Gamma(k+1)Gamma(alpha+2)/Gamma(k+alpha+2)
        let alpha = 1.0;
        for k in 0..6 {
            let n = norm("bergman:2:1", &format!("z^{k}"));
            let mut want = 1.0;
            for i in 1..=k {
                want *= i as f64 / (i as f64 + alpha + 1.0);
            }
            assert_abs_diff_eq!(n.value, want.sqrt(), epsilon = 1e-12);
        }
    }

    #[test]
    fn graded_bergman_rule_resolves_kernels() {
        let w: f64 = 0.999;
        let k = format!("({})^(1)/(1-{w}*z)^2", 1.0 - w * w);
        let x = SpaceDescriptor::from_name("bergman:2:0").unwrap();
        let cfg = NormConfig {
            extra_radii: vec![w],
            ..NormConfig::default()
        };
        let n = space_norm(&x, &FunctionHandle::from_expr(parse(&k).unwrap()), &cfg).unwrap();
        assert_abs_diff_eq!(n.value, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn bloch_seminorm() {
        let n = norm("bloch:power:1", "log(1/(1-z))");
        assert_abs_diff_eq!(n.value, 2.0, epsilon = 1e-3);
    }

    #[test]
    fn evaluation_failure_is_an_error() {
        let x = SpaceDescriptor::from_name("growth:power:1").unwrap();
        let f = FunctionHandle::parse("1/(z-0.5)").unwrap();
        assert!(matches!(
            space_norm(&x, &f, &NormConfig::default()),
            Err(SpaceError::Evaluation { .. })
        ));
    }
}
