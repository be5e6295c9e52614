// Sups of the weighted profile over the level sets D_N = {||T* K_z|| > N}.

use serde::Serialize;

use super::profile::{criterion_profile, CriterionProfile, ProfileGrid};
use super::{CriteriaError, Tolerances};
use crate::asymptotics::fit_power_law;
use crate::operators::OperatorSymbol;
use crate::spaces::SpaceDescriptor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DnVerdict {
    Holds,
    Fails,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DnEntry {
    pub n: f64,
    /// Grid samples inside `D_N`.
    pub count: usize,
    /// Sup of the weighted profile over those samples; absent when `D_N`
    /// misses the grid.
    pub sup: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DnDiagnostic {
    pub entries: Vec<DnEntry>,
    pub verdict: DnVerdict,
    /// Decay rate of the sups in `N` (slope of `log sup` against `log N`).
    pub slope: Option<f64>,
    pub note: String,
}

impl DnDiagnostic {
    pub fn sups(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.sup.unwrap_or(0.0)).collect()
    }
}

/// Profile of `T: X -> Y`, then [`dn_from_profile`].
pub fn dn_diagnostic(
    t: &OperatorSymbol,
    x: &SpaceDescriptor,
    y: &SpaceDescriptor,
    n_list: &[f64],
    grid: ProfileGrid,
    tol: &Tolerances,
) -> Result<DnDiagnostic, CriteriaError> {
    let profile = criterion_profile(t, x, y, grid, tol)?;
    dn_from_profile(&profile, n_list, tol)
}

/// The condition is sufficient for compactness only; `Fails` is evidence
/// against it, not against compactness.
///
/// `Holds` when the sups are non-increasing and end below `tol.dn`, or when
/// they decrease strictly with a power-law rate in `N` faster than
/// `-eps_fit`. `Fails` when they do not decay in `N`.
pub fn dn_from_profile(
    profile: &CriterionProfile,
    n_list: &[f64],
    tol: &Tolerances,
) -> Result<DnDiagnostic, CriteriaError> {
    if n_list.is_empty() {
        return Err(CriteriaError::EmptyProfile("N list is empty".into()));
    }
    if let Some(bad) = n_list.iter().find(|n| !(**n > 0.0 && n.is_finite())) {
        return Err(CriteriaError::EmptyProfile(format!("N = {bad} is not a positive level")));
    }
    let mut levels = n_list.to_vec();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let entries: Vec<DnEntry> = levels
        .iter()
        .map(|&n| {
            let inside = profile.samples.iter().filter(|s| s.unweighted > n);
            let (count, sup) = inside.fold((0, None), |(c, m): (usize, Option<f64>), s| {
                (c + 1, Some(m.map_or(s.value, |m| m.max(s.value))))
            });
            DnEntry { n, count, sup }
        })
        .collect();
    if entries.iter().all(|e| e.sup.is_none()) {
        return Ok(DnDiagnostic {
            entries,
            verdict: DnVerdict::Holds,
            slope: None,
            note: "every D_N misses the grid: the condition holds vacuously".into(),
        });
    }
    let sups: Vec<f64> = entries.iter().map(|e| e.sup.unwrap_or(0.0)).collect();
    let last = *sups.last().expect("nonempty");
    let non_increasing = sups.windows(2).all(|w| w[1] <= w[0]);
    let strictly = sups.windows(2).all(|w| w[1] < w[0]);
    let (ns, vals): (Vec<f64>, Vec<f64>) = entries
        .iter()
        .filter_map(|e| e.sup.filter(|s| *s > 0.0).map(|s| (e.n, s)))
        .unzip();
    // fit_power_law fits against 1 - r; feed it 1 - 1/N so the exponent is
    // the slope in N with the sign flipped.
    let slope = (ns.len() >= 2)
        .then(|| {
            let pseudo: Vec<f64> = ns.iter().map(|n| 1.0 - 1.0 / n).collect();
            fit_power_law(&pseudo, &vals).map(|f| -f.exponent)
        })
        .flatten();
    let eps = tol.fit.eps_fit;
    let (verdict, note) = if non_increasing && last < tol.dn {
        (DnVerdict::Holds, format!("sup over the last D_N is {last} < {}", tol.dn))
    } else if strictly && slope.is_some_and(|s| s < -eps) {
        (
            DnVerdict::Holds,
            format!(
                "sups decrease strictly like N^{:.4}; the last ({last}) is still above {}",
                slope.expect("checked"),
                tol.dn
            ),
        )
    } else if slope.map_or(true, |s| s >= -eps) {
        (
            DnVerdict::Fails,
            format!("sups do not decay in N; the last is {last}"),
        )
    } else {
        (
            DnVerdict::Inconclusive,
            "sups decay overall but not monotonically".to_string(),
        )
    };
    Ok(DnDiagnostic {
        entries,
        verdict,
        slope,
        note,
    })
}
