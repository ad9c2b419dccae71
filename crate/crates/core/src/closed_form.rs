//! Closed-form trajectories of the constant-`Q` map in vector form.
//!
//! With `θ = Kα` and `λ = β/(2α)` the even iterates are
//!
//! ```text
//! r(θ) = Ad_q(2θ) t(θ),    t(θ) = Ad_p(2λθ) r0,
//! ```
//!
//! where `Ad_s(γ)` is [`adjoint_closed_form`](crate::su11::adjoint_closed_form).
//! `r(θ)·q = t(θ)·q` because the outer rotation fixes `q`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::minkowski::{classify, mcross, mdot, CaseClass, MVec3, DEFAULT_CLASS_TOL};
use crate::su11::rotate;

/// Tolerance on `|mdot(r, r) - η|`, scaled by `max(1, |r|²)`, for samples
/// stored in a [`Trajectory`].
pub const TRAJECTORY_NORM_TOL: f64 = 1e-8;

/// One dynamical scenario: axes `q`, `p`, ratio `λ = β/(2α)` and class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochParams {
    q: MVec3,
    p: MVec3,
    lambda: f64,
    class: CaseClass,
}

impl BlochParams {
    pub fn new(q: MVec3, p: MVec3, lambda: f64, class: CaseClass) -> Result<Self> {
        for v in [q, p] {
            let found = classify(v, DEFAULT_CLASS_TOL).ok();
            if found != Some(class) {
                return Err(Error::ClassMismatch { expected: class, found });
            }
        }
        if class == CaseClass::Parabolic && (q.max_abs() == 0.0 || p.max_abs() == 0.0) {
            return Err(Error::InvalidParameter("parabolic axes must be nonzero".into()));
        }
        if !lambda.is_finite() {
            return Err(Error::NonFinite("lambda"));
        }
        Ok(BlochParams { q, p, lambda, class })
    }

    /// `λ` from the map angles, `β / (2α)`.
    pub fn from_angles(q: MVec3, p: MVec3, alpha: f64, beta: f64, class: CaseClass) -> Result<Self> {
        if alpha == 0.0 {
            return Err(Error::InvalidParameter("alpha must be nonzero".into()));
        }
        Self::new(q, p, beta / (2.0 * alpha), class)
    }

    pub fn q(&self) -> MVec3 {
        self.q
    }

    pub fn p(&self) -> MVec3 {
        self.p
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn class(&self) -> CaseClass {
        self.class
    }

    pub fn eta(&self) -> f64 {
        self.class.eta_f64()
    }

    pub(crate) fn check_initial(&self, r0: MVec3) -> Result<()> {
        let found = classify(r0, DEFAULT_CLASS_TOL).ok();
        if found == Some(self.class) {
            Ok(())
        } else {
            Err(Error::ClassMismatch { expected: self.class, found })
        }
    }

    fn require(&self, class: CaseClass) -> Result<()> {
        if self.class == class {
            Ok(())
        } else {
            Err(Error::WrongClass { expected: class, found: self.class })
        }
    }
}

/// Which computational route produced a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Route {
    ClosedForm,
    MapIterated,
    OdeIntegrated,
}

impl Route {
    /// Label used in CSV output.
    pub fn label(self) -> &'static str {
        match self {
            Route::ClosedForm => "closed-form",
            Route::MapIterated => "map",
            Route::OdeIntegrated => "ode",
        }
    }

    pub fn from_label(s: &str) -> Option<Route> {
        match s {
            "closed-form" => Some(Route::ClosedForm),
            "map" => Some(Route::MapIterated),
            "ode" => Some(Route::OdeIntegrated),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub theta: f64,
    pub r: MVec3,
}

/// Ordered samples `(θ, r(θ))` from one route.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    params: BlochParams,
    r0: MVec3,
    samples: Vec<Sample>,
    route: Route,
}

impl Trajectory {
    /// Checks that `θ` is strictly increasing and every sample stays on the
    /// class manifold (see [`TRAJECTORY_NORM_TOL`]).
    pub fn new(params: BlochParams, r0: MVec3, samples: Vec<Sample>, route: Route) -> Result<Self> {
        for w in samples.windows(2) {
            if !(w[1].theta > w[0].theta) {
                return Err(Error::InvalidTrajectory(format!(
                    "theta not strictly increasing at {} -> {}",
                    w[0].theta, w[1].theta
                )));
            }
        }
        for s in &samples {
            let drift = norm_drift(s.r, params.class);
            if !(drift < TRAJECTORY_NORM_TOL) {
                return Err(Error::InvalidTrajectory(format!(
                    "sample at theta={} is off the {} manifold (scaled drift {drift:e})",
                    s.theta, params.class
                )));
            }
        }
        Ok(Trajectory { params, r0, samples, route })
    }

    pub fn params(&self) -> &BlochParams {
        &self.params
    }

    pub fn r0(&self) -> MVec3 {
        self.r0
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn route(&self) -> Route {
        self.route
    }

    pub fn last(&self) -> Option<&Sample> {
        self.samples.last()
    }

    /// Largest `|mdot(r, r) - η|` over the samples (unscaled).
    pub fn max_norm_drift(&self) -> f64 {
        let eta = self.params.eta();
        self.samples.iter().map(|s| (s.r.norm2() - eta).abs()).fold(0.0, f64::max)
    }
}

/// `|mdot(r, r) - η| / max(1, |r|²)`.
pub fn norm_drift(r: MVec3, class: CaseClass) -> f64 {
    let e2 = r.euclidean_norm().powi(2).max(1.0);
    (r.norm2() - class.eta_f64()).abs() / e2
}

/// `t(θ) = Ad_p(2λθ) r0`.
pub fn intermediate_t(params: &BlochParams, r0: MVec3, theta: f64) -> Result<MVec3> {
    params.check_initial(r0)?;
    Ok(rotate(2.0 * params.lambda * theta, params.p, r0, params.class))
}

/// `r(θ) = Ad_q(2θ) t(θ)`.
pub fn trajectory_point(params: &BlochParams, r0: MVec3, theta: f64) -> Result<MVec3> {
    let t = intermediate_t(params, r0, theta)?;
    Ok(rotate(2.0 * theta, params.q, t, params.class))
}

/// `r(θ)·q`, the component that decouples from the rest of the motion.
pub fn decoupled_component(params: &BlochParams, r0: MVec3, theta: f64) -> Result<f64> {
    Ok(mdot(trajectory_point(params, r0, theta)?, params.q))
}

/// Scalars `a = r0·q`, `b = (r0×p)·q`, `c = (p·r0)(p·q)` and, in the
/// elliptic case, the bounds `A1,2 = c ∓ sqrt(b² + (a - c)²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub a1: f64,
    pub a2: f64,
}

fn abc(params: &BlochParams, r0: MVec3) -> (f64, f64, f64) {
    let (q, p) = (params.q, params.p);
    (mdot(r0, q), mdot(mcross(r0, p), q), mdot(p, r0) * mdot(p, q))
}

/// Elliptic bounds on `t(θ)·q` (and hence `r(θ)·q`).
///
/// In the elliptic case `t(θ)·q = c + (a - c) cos(2λθ) - b sin(2λθ)`, a single
/// harmonic whose range is `[A1, A2]`. `A1 ≥ 1` needs `r0` and `q` on the
/// upper sheet, so both are required there.
pub fn elliptic_bounds(params: &BlochParams, r0: MVec3) -> Result<Bounds> {
    params.require(CaseClass::Elliptic)?;
    params.check_initial(r0)?;
    if r0.x3 < 0.0 {
        return Err(Error::LowerSheet("r0"));
    }
    if params.q.x3 < 0.0 {
        return Err(Error::LowerSheet("q"));
    }
    let (a, b, c) = abc(params, r0);
    let radius = b.hypot(a - c);
    Ok(Bounds { a, b, c, a1: c - radius, a2: c + radius })
}

/// `t(θ)·q` in the parabolic case: `a - 2λθ b + 2λ²θ² c`.
///
/// The quadratic term comes from the `(γ²/2)(t·s)s` part of the parabolic
/// adjoint action; the function is a straight line in `θ` only when `c = 0`.
pub fn parabolic_line(params: &BlochParams, r0: MVec3, theta: f64) -> Result<f64> {
    params.require(CaseClass::Parabolic)?;
    params.check_initial(r0)?;
    let (a, b, c) = abc(params, r0);
    let g = 2.0 * params.lambda * theta;
    Ok(a - g * b + 0.5 * g * g * c)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryReport {
    /// `π/|λ|`, the period of `t(θ)`.
    pub period: f64,
    /// Rotation angle `2π/λ` about `q` that maps `r(θ)` to `r(θ + π/λ)`.
    pub rotation: f64,
    pub max_deviation: f64,
    pub n_samples: usize,
}

/// Checks `r(θ + π/λ) = Ad_q(2π/λ) r(θ)` on `n_samples` points of one period.
///
/// For integer `λ = n` this is the `n`-fold symmetry of the orbit about `q`.
pub fn symmetry_order_check(params: &BlochParams, r0: MVec3, n_samples: usize) -> Result<SymmetryReport> {
    params.require(CaseClass::Elliptic)?;
    params.check_initial(r0)?;
    if params.lambda == 0.0 {
        return Err(Error::InvalidParameter("symmetry check needs lambda != 0".into()));
    }
    if n_samples == 0 {
        return Err(Error::InvalidParameter("n_samples must be positive".into()));
    }
    let shift = PI / params.lambda;
    let rotation = 2.0 * PI / params.lambda;
    let mut max_deviation = 0.0f64;
    for k in 0..n_samples {
        let theta = shift.abs() * k as f64 / n_samples as f64;
        let here = trajectory_point(params, r0, theta)?;
        let there = trajectory_point(params, r0, theta + shift)?;
        let rotated = rotate(rotation, params.q, here, params.class);
        max_deviation = max_deviation.max(there.distance(&rotated));
    }
    Ok(SymmetryReport { period: shift.abs(), rotation, max_deviation, n_samples })
}

/// Samples the closed form on the given strictly increasing grid.
pub fn sample_closed_form(params: &BlochParams, r0: MVec3, thetas: &[f64]) -> Result<Trajectory> {
    params.check_initial(r0)?;
    let samples = thetas
        .iter()
        .map(|&theta| Ok(Sample { theta, r: trajectory_point(params, r0, theta)? }))
        .collect::<Result<Vec<_>>>()?;
    Trajectory::new(*params, r0, samples, Route::ClosedForm)
}
