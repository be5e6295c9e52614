// Job files: what to analyse, on which grid, and where to write results.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::criteria::{ProfileGrid, Tolerances};
use crate::expr::parse;
use crate::operators::OperatorSymbol;
use crate::spaces::{NormConfig, SpaceDescriptor};

/// The operator as written in a job file, e.g.
/// `{"kind": "volterra", "g": "log(1/(1-z))"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OperatorSpec {
    Wcomp { u: String, phi: String },
    Volterra { g: String },
    Cesaro { g: String },
    Mult { h: String },
    Diff,
}

impl OperatorSpec {
    pub fn build(&self, tol: &Tolerances) -> Result<OperatorSymbol, CliError> {
        let expr = |field: &str, text: &str| {
            parse(text).map_err(|e| CliError::Config(format!("operator.{field}: {e}")))
        };
        let op = |r: Result<OperatorSymbol, _>| r.map_err(|e| CliError::Config(format!("operator: {e}")));
        match self {
            OperatorSpec::Wcomp { u, phi } => op(OperatorSymbol::weighted_composition_with_tol(
                expr("u", u)?,
                expr("phi", phi)?,
                tol.self_map,
            )),
            OperatorSpec::Volterra { g } => op(OperatorSymbol::volterra(expr("g", g)?)),
            OperatorSpec::Cesaro { g } => op(OperatorSymbol::cesaro(expr("g", g)?)),
            OperatorSpec::Mult { h } => Ok(OperatorSymbol::multiplication(expr("h", h)?)),
            OperatorSpec::Diff => Ok(OperatorSymbol::differentiation()),
        }
    }

    /// The symbol classified against the closed-form tables, if any.
    pub fn symbol(&self) -> Option<&str> {
        match self {
            OperatorSpec::Volterra { g } | OperatorSpec::Cesaro { g } => Some(g),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputPaths {
    pub report: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub operator: OperatorSpec,
    pub source: String,
    pub target: String,
    #[serde(default)]
    pub grid: ProfileGrid,
    /// Quadrature and sup-grid settings for norms of test-function images.
    #[serde(default)]
    pub norm: NormConfig,
    #[serde(default = "default_n_list")]
    pub n_list: Vec<f64>,
    #[serde(default = "default_trial_radii")]
    pub trial_radii: Vec<f64>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: OutputPaths,
}

fn default_n_list() -> Vec<f64> {
    vec![10.0, 100.0, 1000.0]
}

fn default_trial_radii() -> Vec<f64> {
    vec![0.9, 0.99, 0.999, 0.9999]
}

/// A config whose names and parameters have all been resolved.
#[derive(Debug, Clone)]
pub struct ValidatedJob {
    pub operator: OperatorSymbol,
    pub source: SpaceDescriptor,
    pub target: SpaceDescriptor,
}

impl JobConfig {
    pub fn new(operator: OperatorSpec, source: &str, target: &str) -> Self {
        Self {
            operator,
            source: source.into(),
            target: target.into(),
            grid: ProfileGrid::default(),
            norm: NormConfig::default(),
            n_list: default_n_list(),
            trial_radii: default_trial_radii(),
            tolerances: Tolerances::default(),
            output: OutputPaths::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<ValidatedJob, CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if self.grid.rays == 0 {
            return bad("grid.rays must be positive".into());
        }
        if !(1..=52).contains(&self.grid.max_j) {
            return bad(format!("grid.max_j must lie in 1..=52, got {}", self.grid.max_j));
        }
        if self.norm.rays == 0 || self.norm.max_j == 0 || self.norm.bergman_nodes == 0 {
            return bad("norm.rays, norm.max_j and norm.bergman_nodes must be positive".into());
        }
        if self.norm.angular_m == 0 || self.norm.max_angular_m < self.norm.angular_m {
            return bad("norm.angular_m must be positive and at most norm.max_angular_m".into());
        }
        if let Some(n) = self.n_list.iter().find(|n| !(**n > 0.0 && n.is_finite())) {
            return bad(format!("n_list entries must be positive, got {n}"));
        }
        if let Some(w) = self.trial_radii.iter().find(|w| !(0.0..1.0).contains(&w.abs())) {
            return bad(format!("trial radii must lie in (-1, 1), got {w}"));
        }
        let space = |field: &str, name: &str| {
            SpaceDescriptor::from_name(name).map_err(|e| CliError::Config(format!("{field}: {e}")))
        };
        Ok(ValidatedJob {
            operator: self.operator.build(&self.tolerances)?,
            source: space("source", &self.source)?,
            target: space("target", &self.target)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_fills_defaults() {
        let c = JobConfig::from_json(
            r#"{"operator": {"kind": "volterra", "g": "log(1/(1-z))"},
                "source": "hardy:2", "target": "bloch:power:1.5"}"#,
        )
        .unwrap();
        assert_eq!(c.grid, ProfileGrid::default());
        assert_eq!(c.n_list, vec![10.0, 100.0, 1000.0]);
        assert_eq!(c.tolerances, Tolerances::default());
        c.validate().unwrap();
    }

    #[test]
    fn rejects_bad_input() {
        let mut c = JobConfig::new(OperatorSpec::Volterra { g: "z".into() }, "hardy:2", "nowhere");
        assert!(c.validate().is_err());
        c.target = "growth:power:1".into();
        c.grid.rays = 0;
        assert!(c.validate().is_err());
        assert!(JobConfig::from_json(r#"{"operator": {"kind": "shift"}, "source": "", "target": ""}"#).is_err());
        let c = JobConfig::new(OperatorSpec::Wcomp { u: "1".into(), phi: "2*z".into() }, "hardy:2", "growth:power:1");
        assert!(c.validate().is_err());
    }
}
