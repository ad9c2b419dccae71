//! Scenario files: flat TOML key/value pairs with an explicit angle unit.

use std::path::Path;

use serde::Deserialize;
use su11_core::bloch_ode::{Method, OdeConfig};
use su11_core::minkowski::{classify, DEFAULT_CLASS_TOL};
use su11_core::{BlochParams, CaseClass, MVec3, Route};

use crate::error::CliError;

/// Scenarios shipped with the binary, addressable by name.
pub const BUNDLED: [(&str, &str); 4] = [
    ("fig1", include_str!("../scenarios/fig1.toml")),
    ("fig2", include_str!("../scenarios/fig2.toml")),
    ("fig3", include_str!("../scenarios/fig3.toml")),
    ("hyperbolic", include_str!("../scenarios/hyperbolic.toml")),
];

const DEFAULT_SAMPLES: usize = 2000;
/// Tolerance for `λ = β/(2α)` when both `lambda` and `beta` are given.
const LAMBDA_CONSISTENCY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AngleUnit {
    Deg,
    #[default]
    Rad,
}

impl AngleUnit {
    fn to_rad(self, x: f64) -> f64 {
        match self {
            AngleUnit::Deg => x.to_radians(),
            AngleUnit::Rad => x,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Output {
    Csv,
    Json,
    Svg,
}

/// On-disk form, before validation.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    name: String,
    #[serde(default)]
    description: String,
    class: String,
    q: [f64; 3],
    p: [f64; 3],
    r0: [f64; 3],
    lambda: Option<f64>,
    beta: Option<f64>,
    alpha: f64,
    #[serde(default)]
    angle_unit: AngleUnit,
    k_max: u64,
    chi0: Option<f64>,
    theta_end: Option<f64>,
    samples: Option<usize>,
    ode_step: Option<f64>,
    reproject_every: Option<u32>,
    routes: Option<Vec<String>>,
    outputs: Option<Vec<Output>>,
}

/// A validated scenario; all angles in radians.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub description: String,
    pub params: BlochParams,
    pub r0: MVec3,
    pub alpha: f64,
    pub chi0: f64,
    pub k_max: u64,
    pub theta_end: f64,
    pub samples: usize,
    pub ode: OdeConfig,
    pub routes: Vec<Route>,
    pub outputs: Vec<Output>,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Scenario, CliError> {
        let raw: RawScenario = toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        raw.validate()
    }

    /// Reads a scenario file; a bare bundled name (`fig1`) also works when no
    /// such file exists.
    pub fn load(source: &str) -> Result<Scenario, CliError> {
        let path = Path::new(source);
        if !path.exists() {
            if let Some((_, text)) = BUNDLED.iter().find(|(name, _)| *name == source) {
                return Scenario::parse(text);
            }
        }
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Scenario::parse(&text)
    }

    pub fn class(&self) -> CaseClass {
        self.params.class()
    }

    pub fn wants(&self, output: Output) -> bool {
        self.outputs.contains(&output)
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn vector(name: &str, a: [f64; 3], class: CaseClass) -> Result<MVec3, CliError> {
    let v = MVec3::from_array(a);
    let found = classify(v, DEFAULT_CLASS_TOL).map_err(|e| invalid(format!("{name}: {e}")))?;
    if found != class {
        return Err(invalid(format!("{name}: ClassMismatch: vector is {found}, scenario is {class}")));
    }
    Ok(v)
}

impl RawScenario {
    fn validate(self) -> Result<Scenario, CliError> {
        if self.name.is_empty() || !self.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_') {
            return Err(invalid(format!("name {:?} must be non-empty and use only [A-Za-z0-9_-]", self.name)));
        }
        let class = CaseClass::from_name(&self.class)
            .ok_or_else(|| invalid(format!("unknown class {:?} (elliptic, parabolic, hyperbolic)", self.class)))?;
        let q = vector("q", self.q, class)?;
        let p = vector("p", self.p, class)?;
        let r0 = vector("r0", self.r0, class)?;

        let alpha = self.angle_unit.to_rad(self.alpha);
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(invalid(format!("alpha must be positive, got {}", self.alpha)));
        }
        let lambda = match (self.lambda, self.beta.map(|b| self.angle_unit.to_rad(b))) {
            (Some(l), None) => l,
            (None, Some(beta)) => beta / (2.0 * alpha),
            (Some(l), Some(beta)) => {
                let implied = beta / (2.0 * alpha);
                if (l - implied).abs() > LAMBDA_CONSISTENCY_TOL * l.abs().max(1.0) {
                    return Err(invalid(format!("lambda = {l} disagrees with beta/(2 alpha) = {implied}")));
                }
                l
            }
            (None, None) => return Err(invalid("one of lambda or beta is required")),
        };
        let params = BlochParams::new(q, p, lambda, class).map_err(|e| invalid(e.to_string()))?;

        if self.k_max == 0 {
            return Err(invalid("k_max must be at least 1"));
        }
        let chi0 = self.chi0.unwrap_or(1.0);
        if !chi0.is_finite() || chi0 == 0.0 {
            return Err(invalid(format!("chi0 must be finite and nonzero, got {chi0}")));
        }
        let theta_end = self.theta_end.unwrap_or(self.k_max as f64 * alpha);
        if !(theta_end > 0.0) || !theta_end.is_finite() {
            return Err(invalid(format!("theta_end must be positive, got {theta_end}")));
        }
        let samples = self.samples.unwrap_or(DEFAULT_SAMPLES);
        if samples < 2 {
            return Err(invalid("samples must be at least 2"));
        }
        let ode = OdeConfig {
            step: self.ode_step.unwrap_or(su11_core::bloch_ode::DEFAULT_STEP),
            // Long CLI runs keep the state on the manifold by default.
            reproject_every: self.reproject_every.unwrap_or(1),
            method: Method::Rk4,
        };
        ode.validate().map_err(|e| invalid(e.to_string()))?;

        let routes = match self.routes {
            None => vec![Route::ClosedForm, Route::MapIterated, Route::OdeIntegrated],
            Some(names) => names
                .iter()
                .map(|n| {
                    Route::from_label(n).ok_or_else(|| invalid(format!("unknown route {n:?} (closed-form, map, ode)")))
                })
                .collect::<Result<_, _>>()?,
        };
        let outputs = self.outputs.unwrap_or_else(|| vec![Output::Csv, Output::Json, Output::Svg]);

        Ok(Scenario {
            name: self.name,
            description: self.description,
            params,
            r0,
            alpha,
            chi0,
            k_max: self.k_max,
            theta_end,
            samples,
            ode,
            routes,
            outputs,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
name = "t"
class = "elliptic"
q = [0.0, 0.0, 1.0]
p = [1.0, 0.0, 1.4142135623730951]
r0 = [0.5, 0.5, 1.224744871391589]
alpha = 5.0
angle_unit = "deg"
beta = 20.0
k_max = 4
"#;

    #[test]
    fn bundled_scenarios_parse() {
        for (name, text) in BUNDLED {
            let s = Scenario::parse(text).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(s.name, name);
        }
    }

    #[test]
    fn degrees_and_beta() {
        let s = Scenario::parse(BASE).unwrap();
        assert!((s.alpha - 5f64.to_radians()).abs() < 1e-16);
        assert!((s.params.lambda() - 2.0).abs() < 1e-14);
        assert_eq!(s.chi0, 1.0);
        assert_eq!(s.ode.reproject_every, 1);
        assert!((s.theta_end - 20f64.to_radians()).abs() < 1e-15);
    }

    #[test]
    fn inconsistent_lambda_rejected() {
        let text = format!("{BASE}lambda = 3.0\n");
        assert!(matches!(Scenario::parse(&text), Err(CliError::Validation(m)) if m.contains("disagrees")));
        let text = format!("{BASE}lambda = 2.0\n");
        assert!(Scenario::parse(&text).is_ok());
    }

    #[test]
    fn unnormalized_vector_rejected() {
        let text = BASE.replace("q = [0.0, 0.0, 1.0]", "q = [0.0, 0.0, 0.9486832980505138]");
        let err = Scenario::parse(&text).unwrap_err();
        assert!(err.to_string().contains("Unnormalized"), "{err}");
    }

    #[test]
    fn class_mismatch_and_unknown_keys() {
        let text = BASE.replace("elliptic", "hyperbolic");
        assert!(Scenario::parse(&text).unwrap_err().to_string().contains("ClassMismatch"));
        let text = format!("{BASE}colour = \"red\"\n");
        assert!(matches!(Scenario::parse(&text), Err(CliError::Parse(_))));
    }
}
