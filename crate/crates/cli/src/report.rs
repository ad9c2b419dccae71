//! Runs a scenario through every route and collects the verification residuals.

use serde::Serialize;
use su11_core::bloch_ode::{check_growth_cap, integrate, stroboscopic_residual};
use su11_core::closed_form::{
    decoupled_component, elliptic_bounds, sample_closed_form, symmetry_order_check, trajectory_point,
    TRAJECTORY_NORM_TOL,
};
use su11_core::map_dynamics::{exact_r2k, map_orbit, orbit_vector, verify_exact_vs_iterated, ScenarioElements};
use su11_core::minkowski::DEFAULT_CLASS_TOL;
use su11_core::{Bounds, CaseClass, Route, Trajectory};

use crate::error::CliError;
use crate::scenario::Scenario;

const EXACT_VS_ITERATED_TOL: f64 = 1e-9;
const CLOSED_VS_EXACT_TOL: f64 = 1e-10;
const STROBOSCOPIC_TOL: f64 = 1e-6;
const STROBOSCOPIC_TOL_HYPERBOLIC: f64 = 1e-5;
const SYMMETRY_TOL: f64 = 1e-10;
const SYMMETRY_SAMPLES: usize = 1024;
/// Slack on `A1 ≤ r·q ≤ A2` for sampled points.
const BOUNDS_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct BoundsJson {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    #[serde(rename = "A1")]
    pub a1: f64,
    #[serde(rename = "A2")]
    pub a2: f64,
}

impl From<Bounds> for BoundsJson {
    fn from(b: Bounds) -> Self {
        BoundsJson { a: b.a, b: b.b, c: b.c, a1: b.a1, a2: b.a2 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Residuals {
    pub exact_vs_iterated: f64,
    pub closed_vs_exact: f64,
    pub stroboscopic: f64,
    pub symmetry: Option<f64>,
    pub norm_drift: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub scenario: String,
    pub class: &'static str,
    pub lambda: f64,
    pub alpha: f64,
    pub k_max: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsJson>,
    pub residuals: Residuals,
    pub checks: Vec<Check>,
    pub status: &'static str,
}

impl Summary {
    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.pass)
    }
}

pub struct Evaluation {
    pub trajectories: Vec<Trajectory>,
    pub bounds: Option<Bounds>,
    pub summary: Summary,
}

fn check(name: &'static str, value: f64, tolerance: f64) -> Check {
    Check { name, value, tolerance, pass: value < tolerance }
}

/// Bounds exist only with `r0` and `q` on the upper sheet; anything else
/// simply has no bounds to report.
fn bounds_for(s: &Scenario) -> Option<Bounds> {
    (s.class() == CaseClass::Elliptic).then(|| elliptic_bounds(&s.params, s.r0).ok()).flatten()
}

fn route_trajectory(s: &Scenario, route: Route) -> Result<Trajectory, CliError> {
    Ok(match route {
        Route::ClosedForm => {
            let n = s.samples;
            let thetas: Vec<f64> = (0..n).map(|j| s.theta_end * j as f64 / (n - 1) as f64).collect();
            sample_closed_form(&s.params, s.r0, &thetas)?
        }
        Route::MapIterated => map_orbit(&s.params, s.r0, s.alpha, s.chi0, s.k_max)?,
        Route::OdeIntegrated => integrate(&s.params, s.r0, s.theta_end, &s.ode)?,
    })
}

pub fn evaluate(s: &Scenario) -> Result<Evaluation, CliError> {
    let class = s.class();
    check_growth_cap(&s.params, s.theta_end.max(s.k_max as f64 * s.alpha))?;
    let trajectories = s.routes.iter().map(|&r| route_trajectory(s, r)).collect::<Result<Vec<_>, _>>()?;

    let el = ScenarioElements::new(&s.params, s.r0, s.alpha, s.chi0)?;
    let (q, p, r0) = (el.q_element(), el.p_element(), el.r0_element());
    let exact_vs_iterated = verify_exact_vs_iterated(&q, &p, &r0, s.k_max)?.max_deviation;

    let mut closed_vs_exact = 0.0f64;
    for k in 0..=s.k_max {
        let group = orbit_vector(&exact_r2k(&q, &p, &r0, k), s.chi0, class, DEFAULT_CLASS_TOL)?;
        let closed = trajectory_point(&s.params, s.r0, k as f64 * s.alpha)?;
        closed_vs_exact = closed_vs_exact.max(group.distance(&closed));
    }

    let stroboscopic = stroboscopic_residual(&s.params, s.r0, s.alpha, s.chi0, s.k_max, &s.ode)?.max_deviation;
    let symmetry = if class == CaseClass::Elliptic && s.params.lambda() != 0.0 {
        Some(symmetry_order_check(&s.params, s.r0, SYMMETRY_SAMPLES)?.max_deviation)
    } else {
        None
    };
    let norm_drift = trajectories.iter().map(Trajectory::max_norm_drift).fold(0.0, f64::max);

    let strobe_tol = if class == CaseClass::Hyperbolic { STROBOSCOPIC_TOL_HYPERBOLIC } else { STROBOSCOPIC_TOL };
    let mut checks = vec![
        check("exact_vs_iterated", exact_vs_iterated, EXACT_VS_ITERATED_TOL),
        check("closed_vs_exact", closed_vs_exact, CLOSED_VS_EXACT_TOL),
        check("stroboscopic", stroboscopic, strobe_tol),
    ];
    if let Some(sym) = symmetry {
        checks.push(check("symmetry", sym, SYMMETRY_TOL));
    }
    checks.push(check("norm_drift", norm_drift, TRAJECTORY_NORM_TOL));

    let bounds = bounds_for(s);
    if let Some(b) = bounds {
        // Largest excursion of sampled r·q outside [A1, A2] over one period.
        let lambda = s.params.lambda();
        let span = if lambda != 0.0 { std::f64::consts::PI / lambda.abs() } else { s.theta_end };
        let mut excursion = 0.0f64;
        for j in 0..SYMMETRY_SAMPLES {
            let v = decoupled_component(&s.params, s.r0, span * j as f64 / SYMMETRY_SAMPLES as f64)?;
            excursion = excursion.max(b.a1 - v).max(v - b.a2);
        }
        checks.push(check("bounds", excursion.max(0.0), BOUNDS_SLACK));
    }

    let status = if checks.iter().all(|c| c.pass) { "pass" } else { "fail" };
    let summary = Summary {
        scenario: s.name.clone(),
        class: class.name(),
        lambda: s.params.lambda(),
        alpha: s.alpha,
        k_max: s.k_max,
        bounds: bounds.map(BoundsJson::from),
        residuals: Residuals { exact_vs_iterated, closed_vs_exact, stroboscopic, symmetry, norm_drift },
        checks,
        status,
    };
    Ok(Evaluation { trajectories, bounds, summary })
}
