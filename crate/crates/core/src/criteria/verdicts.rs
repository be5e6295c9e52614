// Three-valued boundedness and compactness verdicts read off a profile.

use serde::Serialize;

use super::closed_form::CrossCheck;
use super::dn::DnVerdict;
use super::profile::CriterionProfile;
use super::Tolerances;
use crate::asymptotics::RayBehaviour;

/// Levels between the two partial sups compared by the Cauchy check.
const CAUCHY_LAG: u32 = 4;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Boundedness {
    /// `norm_estimate` is the operator norm when `equivalence_flag` is unset,
    /// and comparable to it otherwise.
    Yes {
        norm_estimate: f64,
        equivalence_flag: bool,
    },
    No { divergence_exponent: f64 },
    Inconclusive { reason: String },
}

impl Boundedness {
    pub fn is_yes(&self) -> bool {
        matches!(self, Boundedness::Yes { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Compactness {
    /// `min_exponent` is the slowest decay rate among the rays.
    Yes { min_exponent: Option<f64> },
    /// `limit` is the largest positive boundary level, absent when unbounded.
    No { limit: Option<f64> },
    Inconclusive { reason: String },
}

impl Compactness {
    pub fn is_yes(&self) -> bool {
        matches!(self, Compactness::Yes { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisVerdict {
    pub bounded: Boundedness,
    pub compact: Compactness,
    pub dn_condition: Option<DnVerdict>,
    pub closed_form_cross_check: Option<CrossCheck>,
    /// Tensions between the components, e.g. a vanishing `D_N` sup next to
    /// a non-compact profile.
    pub notes: Vec<String>,
}

impl AnalysisVerdict {
    pub fn new(
        profile: &CriterionProfile,
        tol: &Tolerances,
        dn_condition: Option<DnVerdict>,
        closed_form_cross_check: Option<CrossCheck>,
    ) -> Self {
        let bounded = boundedness_verdict(profile, tol);
        let compact = compactness_from(&bounded, profile, tol);
        let mut notes = Vec::new();
        if dn_condition == Some(DnVerdict::Holds) && matches!(compact, Compactness::No { .. }) {
            notes.push(
                "the D_N condition holds on the grid but the profile does not vanish at the boundary"
                    .into(),
            );
        }
        if profile.equivalence_flag {
            notes.push(
                "point evaluation in the source space is known up to constants; \
                 the norm estimate is not an exact operator norm"
                    .into(),
            );
        }
        Self {
            bounded,
            compact,
            dn_condition,
            closed_form_cross_check,
            notes,
        }
    }
}

fn partial_sup(profile: &CriterionProfile, j_max: u32) -> f64 {
    profile
        .samples
        .iter()
        .filter(|s| s.j <= j_max)
        .map(|s| s.value)
        .fold(0.0, f64::max)
}

pub fn boundedness_verdict(profile: &CriterionProfile, tol: &Tolerances) -> Boundedness {
    let diverging = profile
        .ray_fits
        .iter()
        .filter_map(|b| match b {
            RayBehaviour::Diverging { exponent } => Some(*exponent),
            _ => None,
        })
        .reduce(f64::min);
    if let Some(divergence_exponent) = diverging {
        return Boundedness::No {
            divergence_exponent,
        };
    }
    let rays = profile.ray_fits.len();
    let reliable = profile.ray_fits.iter().filter(|b| b.is_reliable()).count();
    if 2 * reliable <= rays {
        return Boundedness::Inconclusive {
            reason: format!("only {reliable} of {rays} ray fits are reliable"),
        };
    }
    let j = profile.grid.max_j;
    let full = partial_sup(profile, j);
    if j > CAUCHY_LAG {
        let earlier = partial_sup(profile, j - CAUCHY_LAG);
        let gap = if full > 0.0 { (full - earlier) / full } else { 0.0 };
        if gap > tol.cauchy {
            return Boundedness::Inconclusive {
                reason: format!(
                    "partial sups still grow: {earlier} at j = {} vs {full} at j = {j}",
                    j - CAUCHY_LAG
                ),
            };
        }
    }
    Boundedness::Yes {
        norm_estimate: full,
        equivalence_flag: profile.equivalence_flag,
    }
}

/// Compactness requires boundedness first, so `Yes` never appears without it.
pub fn compactness_verdict(profile: &CriterionProfile, tol: &Tolerances) -> Compactness {
    compactness_from(&boundedness_verdict(profile, tol), profile, tol)
}

fn compactness_from(
    bounded: &Boundedness,
    profile: &CriterionProfile,
    tol: &Tolerances,
) -> Compactness {
    match bounded {
        Boundedness::No { .. } => return Compactness::No { limit: None },
        Boundedness::Inconclusive { reason } => {
            return Compactness::Inconclusive {
                reason: format!("boundedness undecided: {reason}"),
            }
        }
        Boundedness::Yes { .. } => {}
    }
    let stuck = profile
        .ray_fits
        .iter()
        .filter_map(|b| match b {
            RayBehaviour::Stable { limit, .. } if *limit > tol.fit.decay_tol => Some(*limit),
            _ => None,
        })
        .reduce(f64::max);
    if let Some(limit) = stuck {
        return Compactness::No { limit: Some(limit) };
    }
    let mut min_exponent: Option<f64> = None;
    for (k, b) in profile.ray_fits.iter().enumerate() {
        match b {
            RayBehaviour::Zero | RayBehaviour::Stable { .. } => {}
            RayBehaviour::Decaying { exponent } => {
                min_exponent = Some(min_exponent.map_or(*exponent, |m| m.min(*exponent)));
            }
            RayBehaviour::Unreliable { .. } | RayBehaviour::Diverging { .. } => {
                return Compactness::Inconclusive {
                    reason: format!("ray {k} has no reliable boundary behaviour"),
                }
            }
        }
    }
    Compactness::Yes { min_exponent }
}
