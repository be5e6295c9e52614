// Sampling of criterion profiles on rays towards the boundary.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{CriteriaError, Tolerances};
use crate::asymptotics::{classify_ray, grid_radius, DiskPoint, FitTolerances, RayBehaviour};
use crate::expr::Expr;
use crate::operators::{OperatorKind, OperatorSymbol};
use crate::spaces::{Exactness, SpaceDescriptor, SpaceKind};
use crate::weights::Weight;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ProfileGrid {
    pub rays: usize,
    /// Radii `1 - 2^-j` for `j = 1..=max_j`.
    pub max_j: u32,
}

impl Default for ProfileGrid {
    fn default() -> Self {
        Self { rays: 64, max_j: 40 }
    }
}

impl ProfileGrid {
    pub fn theta(&self, k: usize) -> f64 {
        std::f64::consts::TAU * k as f64 / self.rays as f64
    }

    pub fn radii(&self) -> Vec<f64> {
        (1..=self.max_j).map(grid_radius).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileSample {
    pub ray: usize,
    pub theta: f64,
    pub j: u32,
    pub r: f64,
    #[serde(skip)]
    pub z: Complex64,
    /// Weighted profile value.
    pub value: f64,
    /// The same without the target weight, `|factor| ||delta||`.
    pub unweighted: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Bound {
    Finite { value: f64 },
    Infinite { max_sampled: f64, exponent: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Limit {
    Finite { value: f64 },
    Infinite { exponent: f64 },
    Oscillatory,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionProfile {
    /// The sampled expression, e.g. `(1-|z|^2)^1.5 |g'(z)| ||delta_z||`.
    pub description: String,
    pub grid: ProfileGrid,
    /// Ray-major: all radii of ray 0, then ray 1, ...
    pub samples: Vec<ProfileSample>,
    pub ray_fits: Vec<RayBehaviour>,
    pub sup_estimate: Bound,
    pub boundary_limit: Limit,
    /// Set when a point-evaluation norm is only known up to constants.
    pub equivalence_flag: bool,
    #[serde(skip)]
    pub fit: FitTolerances,
}

impl CriterionProfile {
    pub fn ray(&self, k: usize) -> &[ProfileSample] {
        let n = self.grid.max_j as usize;
        &self.samples[k * n..(k + 1) * n]
    }

    pub fn max_sampled(&self) -> f64 {
        self.samples.iter().map(|s| s.value).fold(0.0, f64::max)
    }

    pub fn exponents(&self) -> Vec<Option<f64>> {
        self.ray_fits.iter().map(RayBehaviour::exponent).collect()
    }
}

/// Samples `f(point) = (value, unweighted)` over the grid and fits each ray.
pub(crate) fn sample_radial<F>(
    description: String,
    grid: ProfileGrid,
    fit: FitTolerances,
    equivalence_flag: bool,
    f: F,
) -> Result<CriterionProfile, CriteriaError>
where
    F: Fn(DiskPoint) -> Result<(f64, f64), CriteriaError> + Sync,
{
    if grid.rays == 0 || grid.max_j == 0 {
        return Err(CriteriaError::EmptyProfile("grid has no points".into()));
    }
    let radii = grid.radii();
    let n = radii.len();
    let samples = (0..grid.rays * n)
        .into_par_iter()
        .map(|idx| {
            let (k, i) = (idx / n, idx % n);
            let theta = grid.theta(k);
            let p = DiskPoint::polar(radii[i], theta);
            let (value, unweighted) = f(p)?;
            Ok(ProfileSample {
                ray: k,
                theta,
                j: i as u32 + 1,
                r: p.r,
                z: p.z,
                value,
                unweighted,
            })
        })
        .collect::<Result<Vec<_>, CriteriaError>>()?;
    let ray_fits: Vec<RayBehaviour> = (0..grid.rays)
        .map(|k| {
            let values: Vec<f64> = samples[k * n..(k + 1) * n].iter().map(|s| s.value).collect();
            classify_ray(&radii, &values, &fit)
        })
        .collect();
    let max_sampled = samples.iter().map(|s| s.value).fold(0.0, f64::max);
    let worst_divergence = ray_fits
        .iter()
        .filter_map(|b| match b {
            RayBehaviour::Diverging { exponent } => Some(*exponent),
            _ => None,
        })
        .reduce(f64::min);
    let (sup_estimate, boundary_limit) = match worst_divergence {
        Some(exponent) => (
            Bound::Infinite {
                max_sampled,
                exponent,
            },
            Limit::Infinite { exponent },
        ),
        None => {
            let limit = if ray_fits.iter().all(RayBehaviour::is_reliable) {
                Limit::Finite {
                    value: ray_fits
                        .iter()
                        .filter_map(RayBehaviour::limit)
                        .fold(0.0, f64::max),
                }
            } else {
                Limit::Oscillatory
            };
            (Bound::Finite { value: max_sampled }, limit)
        }
    };
    Ok(CriterionProfile {
        description,
        grid,
        samples,
        ray_fits,
        sup_estimate,
        boundary_limit,
        equivalence_flag,
        fit,
    })
}

fn eval_abs(e: &Expr, z: Complex64) -> Result<f64, CriteriaError> {
    Ok(e.eval(z)?.norm())
}

enum Factor<'a> {
    Composition { u: &'a Expr, phi: &'a Expr },
    Symbol(&'a Expr),
}

const SUPPORTED: &str = "supported pairings: wcomp -> growth:<weight>, mult -> growth:<weight>, \
                         volterra/cesaro -> bloch:<weight>, volterra/cesaro -> growth:power:<beta>";

/// The factorized criterion profile of `T: X -> Y`.
pub fn criterion_profile(
    t: &OperatorSymbol,
    x: &SpaceDescriptor,
    y: &SpaceDescriptor,
    grid: ProfileGrid,
    tol: &Tolerances,
) -> Result<CriterionProfile, CriteriaError> {
    let unsupported = || CriteriaError::Unsupported(format!("{} -> {y}; {SUPPORTED}", t.name()));
    let (factor, weight, description) = match (t.kind(), y.kind()) {
        (OperatorKind::WeightedComposition { u, phi }, SpaceKind::Growth(v)) => (
            Factor::Composition { u, phi },
            v.clone(),
            format!("v(z) |u(z)| ||delta_phi(z)||, v = {v}"),
        ),
        (OperatorKind::Multiplication { h }, SpaceKind::Growth(v)) => (
            Factor::Symbol(h),
            v.clone(),
            format!("v(z) |h(z)| ||delta_z||, v = {v}"),
        ),
        (OperatorKind::Volterra { .. } | OperatorKind::Cesaro { .. }, SpaceKind::BlochType(v)) => (
            Factor::Symbol(t.g_prime().expect("integral operator")),
            v.clone(),
            format!("v(z) |g'(z)| ||delta_z||, v = {v}"),
        ),
        (OperatorKind::Volterra { .. } | OperatorKind::Cesaro { .. }, SpaceKind::Growth(v)) => {
            let beta = v.power_exponent().ok_or_else(unsupported)?;
            (
                Factor::Symbol(t.g_prime().expect("integral operator")),
                Weight::power(beta + 1.0).expect("positive exponent"),
                format!("(1-|z|^2)^{} |g'(z)| ||delta_z||", beta + 1.0),
            )
        }
        _ => return Err(unsupported()),
    };
    let exactness = x.point_eval_norm_at_radius(0.5)?.exactness;
    let description = format!("{description}, delta in {x}");
    sample_radial(
        description,
        grid,
        tol.fit,
        exactness == Exactness::UpToConstants,
        |p| {
            let (modulus, delta) = match &factor {
                Factor::Composition { u, phi } => {
                    let q = if phi.is_identity() {
                        p
                    } else {
                        DiskPoint::from_z(phi.eval(p.z)?)
                    };
                    if q.r >= 1.0 {
                        return Err(CriteriaError::BoundaryReached {
                            z: p.z,
                            modulus: q.r,
                        });
                    }
                    (eval_abs(u, p.z)?, x.point_eval_norm_at_radius(q.r)?.value)
                }
                Factor::Symbol(e) => (eval_abs(e, p.z)?, x.point_eval_norm_at_radius(p.r)?.value),
            };
            let unweighted = modulus * delta;
            Ok((weight.value_at_radius(p.r)? * unweighted, unweighted))
        },
    )
}

impl From<crate::weights::WeightError> for CriteriaError {
    fn from(e: crate::weights::WeightError) -> Self {
        CriteriaError::Space(e.into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use approx::assert_abs_diff_eq;

    fn space(name: &str) -> SpaceDescriptor {
        SpaceDescriptor::from_name(name).unwrap()
    }

    fn profile(t: &OperatorSymbol, x: &str, y: &str) -> CriterionProfile {
        criterion_profile(t, &space(x), &space(y), ProfileGrid::default(), &Tolerances::default())
            .unwrap()
    }

    #[test]
    fn identity_composition_is_identically_one() {
        let t = OperatorSymbol::weighted_composition(parse("1").unwrap(), parse("z").unwrap()).unwrap();
        let p = profile(&t, "growth:power:1", "growth:power:1");
        for s in &p.samples {
            assert!((s.value - 1.0).abs() <= 1e-12);
        }
        assert_eq!(p.boundary_limit, Limit::Finite { value: 1.0 });
    }

    #[test]
    fn volterra_into_bloch_on_the_real_ray() {
        let t = OperatorSymbol::volterra(parse("log(1/(1-z))").unwrap()).unwrap();
        let p = profile(&t, "hardy:2", "bloch:power:1.5");
        let s = p.ray(0)[0];
        assert_eq!(s.r, 0.5);
        assert_abs_diff_eq!(s.value, 1.5, epsilon = 1e-14);
        for s in p.ray(0) {
            assert_abs_diff_eq!(s.value, 1.0 + s.r, epsilon = 1e-12);
        }
        assert!(!p.equivalence_flag);
    }

    #[test]
    fn cesaro_between_growth_spaces_at_origin() {
        let t = OperatorSymbol::cesaro(parse("log(1/(1-z))").unwrap()).unwrap();
        let x = space("growth:power:1");
        let y = space("growth:power:1");
        let grid = ProfileGrid::default();
        let p = criterion_profile(&t, &x, &y, grid, &Tolerances::default()).unwrap();
        // (1-r^2)^2 |g'| (1-r^2)^-1 = (1-r^2)/(1-r) on the real ray
        for s in p.ray(0) {
            assert_abs_diff_eq!(s.value, 1.0 + s.r, epsilon = 1e-12);
        }
    }

    #[test]
    fn unsupported_pairings() {
        let t = OperatorSymbol::differentiation();
        let err = criterion_profile(
            &t,
            &space("hardy:2"),
            &space("growth:power:1"),
            ProfileGrid::default(),
            &Tolerances::default(),
        );
        assert!(matches!(err, Err(CriteriaError::Unsupported(_))));
        let t = OperatorSymbol::volterra(parse("z").unwrap()).unwrap();
        let err = criterion_profile(
            &t,
            &space("hardy:2"),
            &space("growth:log"),
            ProfileGrid::default(),
            &Tolerances::default(),
        );
        assert!(matches!(err, Err(CriteriaError::Unsupported(_))));
    }

    #[test]
    fn bloch_source_sets_equivalence_flag() {
        let t = OperatorSymbol::volterra(parse("z").unwrap()).unwrap();
        let p = profile(&t, "bloch:power:0.5", "bloch:power:1");
        assert!(p.equivalence_flag);
    }
}
