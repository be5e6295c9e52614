// The analysis pipeline and the JSON report it produces.

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::config::{JobConfig, ValidatedJob};
use super::CliError;
use crate::asymptotics::RayBehaviour;
use crate::criteria::{
    classify_symbol, closed_form_verdict, criterion_profile, cross_check, dn_from_profile,
    kernel_lower_bound, AnalysisVerdict, Bound, Boundedness, Classification, ClosedFormRecord,
    CriteriaError, CriterionProfile, DnDiagnostic, KernelBound, Limit, ProfileGrid, Tolerances,
};
use crate::expr::parse;
use crate::operators::OperatorKind;
use crate::spaces::{
    little_space_membership, FunctionHandle, LittleVerdict, SpaceDescriptor, SpaceKind,
};
use crate::weights::Weight;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

impl ToolInfo {
    pub fn current() -> Self {
        Self {
            name: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileSummary {
    pub description: String,
    pub grid: ProfileGrid,
    pub max_radius: f64,
    pub samples: usize,
    pub sup_estimate: Bound,
    pub boundary_limit: Limit,
    pub ray_exponents: Vec<Option<f64>>,
    pub ray_fits: Vec<RayBehaviour>,
    pub equivalence_flag: bool,
}

impl ProfileSummary {
    fn new(p: &CriterionProfile) -> Self {
        Self {
            description: p.description.clone(),
            grid: p.grid,
            max_radius: p.samples.iter().map(|s| s.r).fold(0.0, f64::max),
            samples: p.samples.len(),
            sup_estimate: p.sup_estimate,
            boundary_limit: p.boundary_limit,
            ray_exponents: p.exponents(),
            ray_fits: p.ray_fits.clone(),
            equivalence_flag: p.equivalence_flag,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DnReport {
    pub grid: ProfileGrid,
    #[serde(flatten)]
    pub diagnostic: DnDiagnostic,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UpperEstimate {
    /// Sup of the profile over the grid.
    pub value: f64,
    pub finite: bool,
    /// Unset when point evaluation is only known up to constants.
    pub exact: bool,
    pub grid: ProfileGrid,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormEstimates {
    pub upper: UpperEstimate,
    pub lower: Option<KernelBound>,
    /// `(upper - lower) / upper` when both are finite.
    pub relative_gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LittleCheck {
    pub statement: String,
    pub verdict: LittleVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub tool: ToolInfo,
    pub config: JobConfig,
    /// SHA-256 of the grid, quadrature and tolerance settings.
    pub grid_fingerprint: String,
    pub operator: String,
    pub profile: ProfileSummary,
    pub verdict: AnalysisVerdict,
    pub dn: Option<DnReport>,
    pub closed_form: Option<ClosedFormRecord>,
    pub norm_estimates: NormEstimates,
    pub classifications: Vec<Classification>,
    pub little_space_checks: Vec<LittleCheck>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

fn stage<T>(name: &'static str, r: Result<T, CriteriaError>) -> Result<T, CliError> {
    r.map_err(|source| CliError::Stage { stage: name, source })
}

pub fn grid_fingerprint(config: &JobConfig) -> String {
    let material = serde_json::to_string(&(
        &config.grid,
        &config.norm,
        &config.tolerances,
        &config.n_list,
        &config.trial_radii,
    ))
    .expect("settings serialize");
    hex::encode(Sha256::digest(material.as_bytes()))
}

/// Runs every stage for one job. Deterministic for a fixed config and version.
pub fn run_analysis(config: &JobConfig) -> Result<Report, CliError> {
    analyze_job(config).map(|(report, _)| report)
}

/// [`run_analysis`], also handing back the full profile for CSV output.
pub fn analyze_job(config: &JobConfig) -> Result<(Report, CriterionProfile), CliError> {
    let ValidatedJob {
        operator,
        source,
        target,
    } = config.validate()?;
    let tol = &config.tolerances;
    let grid = config.grid;
    let mut warnings = Vec::new();

    let profile = stage(
        "profile",
        criterion_profile(&operator, &source, &target, grid, tol),
    )?;
    let dn = if config.n_list.is_empty() {
        None
    } else {
        Some(stage("dn", dn_from_profile(&profile, &config.n_list, tol))?)
    };

    let closed_form = match closed_form_verdict(operator.kind(), &source, &target) {
        Ok(r) => Some(r),
        Err(CriteriaError::Unsupported(msg)) => {
            if operator.g_prime().is_some() {
                warnings.push(format!("no closed-form cross-check: {msg}"));
            }
            None
        }
        Err(e) => return Err(CliError::Stage { stage: "closed_form", source: e }),
    };

    let mut verdict = AnalysisVerdict::new(&profile, tol, dn.as_ref().map(|d| d.verdict), None);
    let mut classifications = Vec::new();
    if let (Some(record), Some(g)) = (&closed_form, config.operator.symbol()) {
        let g = stage("cross_check", parse(g).map_err(Into::into))?;
        verdict.closed_form_cross_check = stage(
            "cross_check",
            cross_check(record, &g, &verdict.bounded, &verdict.compact, grid, tol),
        )?;
        for family in [&record.bounded_family, &record.compact_family].into_iter().flatten() {
            classifications.push(stage("classify", classify_symbol(&g, family, grid, tol))?);
        }
    }

    let lower = match source.kind() {
        SpaceKind::Hardy { .. } | SpaceKind::Bergman { .. } if !config.trial_radii.is_empty() => {
            Some(stage(
                "kernel_bound",
                kernel_lower_bound(&operator, &source, &target, &config.trial_radii, &config.norm, tol),
            )?)
        }
        _ => None,
    };
    let upper = UpperEstimate {
        value: match verdict.bounded {
            Boundedness::Yes { norm_estimate, .. } => norm_estimate,
            _ => profile.max_sampled(),
        },
        finite: !matches!(profile.sup_estimate, Bound::Infinite { .. }),
        exact: !profile.equivalence_flag,
        grid,
    };
    let relative_gap = lower
        .as_ref()
        .filter(|l| upper.finite && !l.unbounded && upper.value > 0.0)
        .map(|l| (upper.value - l.value) / upper.value);
    if let Some(gap) = relative_gap {
        if gap < -tol.norm_equality {
            warnings.push(format!(
                "kernel lower bound exceeds the profile sup by {:.3}%",
                -100.0 * gap
            ));
        } else if upper.exact && verdict.bounded.is_yes() && gap > tol.norm_equality {
            warnings.push(format!(
                "kernel lower bound is {:.3}% below the profile sup; more trial radii may close the gap",
                100.0 * gap
            ));
        }
    }

    let little_space_checks = stage(
        "little_space",
        little_checks(operator.kind(), &target, tol),
    )?;
    if target.is_little() {
        warnings.push(
            "little target: the verdicts read the profile of the enclosing space; mapping into \
             the little space also needs the images of polynomials to lie in it"
                .into(),
        );
    }
    if matches!(operator.kind(), OperatorKind::Cesaro { .. }) {
        warnings.push(
            "C_g f is extended continuously to z = 0 with value f(0) g'(0); some texts set it to 0 there"
                .into(),
        );
    }
    if profile.equivalence_flag {
        warnings.push("point evaluation in the source space is known up to constants".into());
    }
    for (k, fit) in profile.ray_fits.iter().enumerate() {
        if let RayBehaviour::Unreliable { residual, .. } = fit {
            warnings.push(format!("ray {k}: unreliable fit (residual {residual:?})"));
        }
    }
    if let Boundedness::Inconclusive { reason } = &verdict.bounded {
        warnings.push(format!("boundedness inconclusive: {reason}"));
    }

    let report = Report {
        tool: ToolInfo::current(),
        config: config.clone(),
        grid_fingerprint: grid_fingerprint(config),
        operator: operator.to_string(),
        profile: ProfileSummary::new(&profile),
        verdict,
        dn: dn.map(|diagnostic| DnReport { grid, diagnostic }),
        closed_form,
        norm_estimates: NormEstimates {
            upper,
            lower,
            relative_gap,
        },
        classifications,
        little_space_checks,
        warnings,
    };
    Ok((report, profile))
}

/// Necessary conditions for compactness into a little space: the
/// multiplier (or symbol) itself must lie in a little class.
fn little_checks(
    kind: &OperatorKind,
    target: &SpaceDescriptor,
    tol: &Tolerances,
) -> Result<Vec<LittleCheck>, CriteriaError> {
    if !target.is_little() {
        return Ok(Vec::new());
    }
    let (statement, f, space) = match (kind, target.kind()) {
        (OperatorKind::WeightedComposition { u, .. }, SpaceKind::Growth(_)) => {
            (format!("u = {} lies in {target}", u.source_text()), u.clone(), target.clone())
        }
        (OperatorKind::Multiplication { h }, SpaceKind::Growth(_)) => {
            (format!("h = {} lies in {target}", h.source_text()), h.clone(), target.clone())
        }
        (OperatorKind::Volterra { g } | OperatorKind::Cesaro { g }, SpaceKind::BlochType(_)) => {
            (format!("g = {} lies in {target}", g.source_text()), g.clone(), target.clone())
        }
        (OperatorKind::Volterra { g } | OperatorKind::Cesaro { g }, SpaceKind::Growth(v)) => {
            let Some(beta) = v.power_exponent() else {
                return Ok(Vec::new());
            };
            let space = SpaceDescriptor::growth(Weight::power(beta)?).into_little()?;
            (format!("g = {} lies in {space}", g.source_text()), g.clone(), space)
        }
        _ => return Ok(Vec::new()),
    };
    let verdict = little_space_membership(&FunctionHandle::from_expr_pointwise(f), &space, &tol.fit)?;
    Ok(vec![LittleCheck { statement, verdict }])
}
