// Membership of a symbol in the weighted derivative classes that govern the
// integral operators.

use std::fmt;

use serde::{Serialize, Serializer};

use super::profile::{sample_radial, CriterionProfile, ProfileGrid};
use super::verdicts::{boundedness_verdict, compactness_verdict, Boundedness, Compactness};
use super::{CriteriaError, Tolerances};
use crate::expr::Expr;
use crate::weights::{one_minus_r2, Weight};

#[derive(Debug, Clone, PartialEq)]
pub enum SymbolFamily {
    /// `sup (1-|z|^2)^gamma |g'| < inf`.
    BlochType { gamma: f64 },
    /// `sup (1-|z|^2) log(1/(1-|z|^2)) |g'| < inf`.
    LogBloch,
    /// Read as `sup |g'| < inf`.
    Lipschitz,
    /// `(1-|z|^2)^beta |g| -> 0`.
    LittleGrowth { beta: f64 },
    /// `v |g'| -> 0`.
    LittleBloch { weight: Weight },
    /// `g' = 0`.
    ConstantOnly,
}

impl SymbolFamily {
    /// Parses `bloch:<gamma>`, `logbloch`, `lipschitz`, `little-growth:<beta>`,
    /// `little-bloch:<weight>` or `constant`.
    pub fn from_name(name: &str) -> Result<Self, CriteriaError> {
        let name = name.trim();
        let number = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CriteriaError::Unsupported(format!("symbol family `{name}`")))
        };
        Ok(match name {
            "logbloch" => SymbolFamily::LogBloch,
            "lipschitz" => SymbolFamily::Lipschitz,
            "constant" => SymbolFamily::ConstantOnly,
            _ => {
                if let Some(g) = name.strip_prefix("bloch:") {
                    SymbolFamily::BlochType { gamma: number(g)? }
                } else if let Some(b) = name.strip_prefix("little-growth:") {
                    SymbolFamily::LittleGrowth { beta: number(b)? }
                } else if let Some(w) = name.strip_prefix("little-bloch:") {
                    SymbolFamily::LittleBloch {
                        weight: Weight::from_name(w)?,
                    }
                } else {
                    return Err(CriteriaError::Unsupported(format!(
                        "symbol family `{name}`; expected bloch:<gamma>, logbloch, lipschitz, \
                         little-growth:<beta>, little-bloch:<weight> or constant"
                    )));
                }
            }
        })
    }

    fn is_little(&self) -> bool {
        matches!(
            self,
            SymbolFamily::LittleGrowth { .. } | SymbolFamily::LittleBloch { .. }
        )
    }
}

impl fmt::Display for SymbolFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolFamily::BlochType { gamma } => write!(f, "bloch:{gamma}"),
            SymbolFamily::LogBloch => write!(f, "logbloch"),
            SymbolFamily::Lipschitz => write!(f, "lipschitz"),
            SymbolFamily::LittleGrowth { beta } => write!(f, "little-growth:{beta}"),
            SymbolFamily::LittleBloch { weight } => write!(f, "little-bloch:{weight}"),
            SymbolFamily::ConstantOnly => write!(f, "constant"),
        }
    }
}

impl Serialize for SymbolFamily {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Membership {
    /// `seminorm` is the sampled sup of the defining expression.
    Member { seminorm: f64 },
    NotMember { detail: String },
    Inconclusive { reason: String },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub symbol: String,
    pub family: SymbolFamily,
    pub membership: Membership,
    /// How the family was read, when that is a choice.
    pub interpretation: Option<String>,
    pub profile_sup: f64,
    pub grid: ProfileGrid,
}

/// Samples the defining expression of `family` for `g` on the criterion grid.
pub fn classify_symbol(
    g: &Expr,
    family: &SymbolFamily,
    grid: ProfileGrid,
    tol: &Tolerances,
) -> Result<Classification, CriteriaError> {
    let g_prime = g.differentiate();
    let (target, description) = match family {
        SymbolFamily::LittleGrowth { beta } => (g, format!("(1-|z|^2)^{beta} |g(z)|")),
        SymbolFamily::BlochType { gamma } => (&g_prime, format!("(1-|z|^2)^{gamma} |g'(z)|")),
        SymbolFamily::LogBloch => (&g_prime, "(1-|z|^2) log(1/(1-|z|^2)) |g'(z)|".into()),
        SymbolFamily::Lipschitz | SymbolFamily::ConstantOnly => (&g_prime, "|g'(z)|".into()),
        SymbolFamily::LittleBloch { weight } => (&g_prime, format!("v(z) |g'(z)|, v = {weight}")),
    };
    let weight = |r: f64| -> Result<f64, CriteriaError> {
        let x = one_minus_r2(r);
        Ok(match family {
            SymbolFamily::BlochType { gamma } => x.powf(*gamma),
            SymbolFamily::LittleGrowth { beta } => x.powf(*beta),
            SymbolFamily::LogBloch => x * (1.0 / x).ln(),
            SymbolFamily::Lipschitz | SymbolFamily::ConstantOnly => 1.0,
            SymbolFamily::LittleBloch { weight } => weight.value_at_radius(r)?,
        })
    };
    let profile = sample_radial(description, grid, tol.fit, false, |p| {
        let m = target.eval(p.z)?.norm();
        Ok((weight(p.r)? * m, m))
    })?;
    let membership = if family.is_little() {
        little_membership(&profile, tol)
    } else if *family == SymbolFamily::ConstantOnly {
        constant_membership(&profile, tol)
    } else {
        big_membership(&profile, tol)
    };
    Ok(Classification {
        symbol: g.source_text().to_string(),
        family: family.clone(),
        membership,
        interpretation: (*family == SymbolFamily::Lipschitz)
            .then(|| "Lipschitz read as sup |g'| < infinity on the disk".to_string()),
        profile_sup: profile.max_sampled(),
        grid,
    })
}

fn big_membership(profile: &CriterionProfile, tol: &Tolerances) -> Membership {
    match boundedness_verdict(profile, tol) {
        Boundedness::Yes { norm_estimate, .. } => Membership::Member {
            seminorm: norm_estimate,
        },
        Boundedness::No {
            divergence_exponent,
        } => Membership::NotMember {
            detail: format!("grows like (1-|z|)^{divergence_exponent}"),
        },
        Boundedness::Inconclusive { reason } => Membership::Inconclusive { reason },
    }
}

fn little_membership(profile: &CriterionProfile, tol: &Tolerances) -> Membership {
    match compactness_verdict(profile, tol) {
        Compactness::Yes { .. } => Membership::Member {
            seminorm: profile.max_sampled(),
        },
        Compactness::No { limit: Some(l) } => Membership::NotMember {
            detail: format!("tends to {l} along some ray"),
        },
        Compactness::No { limit: None } => Membership::NotMember {
            detail: "unbounded".into(),
        },
        Compactness::Inconclusive { reason } => Membership::Inconclusive { reason },
    }
}

fn constant_membership(profile: &CriterionProfile, tol: &Tolerances) -> Membership {
    let sup = profile.max_sampled();
    if sup < tol.fit.decay_tol {
        Membership::Member { seminorm: sup }
    } else {
        Membership::NotMember {
            detail: format!("|g'| reaches {sup}"),
        }
    }
}
