// Membership in H_{v,0} / B_{v,0}: does v|f| (or v|f'|) vanish at the boundary?

use num_complex::Complex64;
use serde::Serialize;

use super::{FunctionHandle, SpaceDescriptor, SpaceError, SpaceKind};
use crate::asymptotics::{classify_ray, grid_radius, FitTolerances, RayBehaviour};

pub const LITTLE_RAYS: usize = 32;
const LEVELS: u32 = 40;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum LittleVerdict {
    /// Every ray decays; `min_exponent` is the slowest fitted decay rate.
    Member { min_exponent: Option<f64> },
    /// Some ray keeps a positive level (`limit`) or diverges (`limit: None`).
    NotMember { limit: Option<f64>, ray: usize },
    Inconclusive { reason: String },
}

impl LittleVerdict {
    pub fn is_member(&self) -> bool {
        matches!(self, LittleVerdict::Member { .. })
    }
}

/// Evidence for `f` lying in the little space `x`, from 32 rays at radii
/// `1 - 2^-j`, `j = 1..=40`.
pub fn little_space_membership(
    f: &FunctionHandle,
    x: &SpaceDescriptor,
    tol: &FitTolerances,
) -> Result<LittleVerdict, SpaceError> {
    if !x.is_little() {
        return Err(SpaceError::NotLittle(x.to_string()));
    }
    let (v, g) = match x.kind() {
        SpaceKind::Growth(v) => (v, f.clone()),
        SpaceKind::BlochType(v) => (v, f.derivative()),
        _ => return Err(SpaceError::NotLittle(x.to_string())),
    };
    let radii: Vec<f64> = (1..=LEVELS).map(grid_radius).collect();
    let weights = radii
        .iter()
        .map(|&r| v.value_at_radius(r))
        .collect::<Result<Vec<f64>, _>>()?;
    let mut behaviours = Vec::with_capacity(LITTLE_RAYS);
    for k in 0..LITTLE_RAYS {
        let theta = std::f64::consts::TAU * k as f64 / LITTLE_RAYS as f64;
        let values = radii
            .iter()
            .zip(&weights)
            .map(|(&r, w)| {
                let z = Complex64::from_polar(r, theta);
                g.eval(z)
                    .map(|value| w * value.norm())
                    .map_err(|source| SpaceError::Evaluation { z, source })
            })
            .collect::<Result<Vec<f64>, _>>()?;
        behaviours.push(classify_ray(&radii, &values, tol));
    }
    Ok(verdict(&behaviours, tol))
}

fn verdict(behaviours: &[RayBehaviour], tol: &FitTolerances) -> LittleVerdict {
    if let Some(ray) = behaviours
        .iter()
        .position(|b| matches!(b, RayBehaviour::Diverging { .. }))
    {
        return LittleVerdict::NotMember { limit: None, ray };
    }
    let stuck = behaviours
        .iter()
        .enumerate()
        .filter_map(|(k, b)| match b {
            RayBehaviour::Stable { limit, .. } if *limit > tol.decay_tol => Some((k, *limit)),
            _ => None,
        })
        .max_by(|a, b| a.1.total_cmp(&b.1));
    if let Some((ray, limit)) = stuck {
        return LittleVerdict::NotMember {
            limit: Some(limit),
            ray,
        };
    }
    let all_decay = behaviours
        .iter()
        .all(|b| matches!(b, RayBehaviour::Zero | RayBehaviour::Decaying { .. }));
    if all_decay {
        let min_exponent = behaviours
            .iter()
            .filter_map(|b| match b {
                RayBehaviour::Decaying { exponent } => Some(*exponent),
                _ => None,
            })
            .reduce(f64::min);
        return LittleVerdict::Member { min_exponent };
    }
    let unreliable = behaviours.iter().filter(|b| !b.is_reliable()).count();
    LittleVerdict::Inconclusive {
        reason: format!("{unreliable} of {} rays have unreliable fits", behaviours.len()),
    }
}
