//! The SU(1,1) Bloch equation
//!
//! ```text
//! dr/dθ = -2 r × u(θ),    u(θ) = q + λ p(θ),    p(θ) = Ad_q(2θ) p,
//! ```
//!
//! integrated with fixed-step classical RK4. Sampling its flow at `θ = Kα`
//! reproduces the even iterates of the group map.

use crate::closed_form::{BlochParams, Route, Sample, Trajectory};
use crate::error::{Error, Result};
use crate::map_dynamics::{exact_r2k, orbit_vector, ScenarioElements};
use crate::minkowski::{mcross, reproject, CaseClass, MVec3, DEFAULT_CLASS_TOL};
use crate::su11::rotate;

pub const DEFAULT_STEP: f64 = 1e-3;
pub const MAX_STEP: f64 = 0.1;
/// Component magnitude treated as numerical blow-up.
pub const BLOWUP_LIMIT: f64 = 1e12;
/// Hyperbolic runs must keep `cosh(2θ·max(1, |λ|))` below this.
pub const HYPERBOLIC_GROWTH_CAP: f64 = 1e10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    Rk4,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeConfig {
    pub step: f64,
    /// Re-project onto the class manifold every this many steps; 0 disables.
    pub reproject_every: u32,
    pub method: Method,
}

impl Default for OdeConfig {
    fn default() -> Self {
        OdeConfig { step: DEFAULT_STEP, reproject_every: 0, method: Method::Rk4 }
    }
}

impl OdeConfig {
    pub fn with_step(step: f64) -> Self {
        OdeConfig { step, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0) || !self.step.is_finite() {
            return Err(Error::InvalidParameter(format!("ODE step must be positive, got {}", self.step)));
        }
        if self.step > MAX_STEP {
            return Err(Error::StepTooLarge(self.step));
        }
        Ok(())
    }
}

/// `p(θ) = Ad_q(2θ) p`: the field axis carried along by the outer rotation.
pub fn p_of_theta(params: &BlochParams, theta: f64) -> MVec3 {
    rotate(2.0 * theta, params.q(), params.p(), params.class())
}

/// `u(θ) = q + λ p(θ)`.
pub fn u_of_theta(params: &BlochParams, theta: f64) -> MVec3 {
    params.q() + p_of_theta(params, theta) * params.lambda()
}

/// `-2 r × u(θ)`.
pub fn rhs(params: &BlochParams, theta: f64, r: MVec3) -> MVec3 {
    mcross(r, u_of_theta(params, theta)) * -2.0
}

fn rk4_step(params: &BlochParams, theta: f64, r: MVec3, h: f64) -> MVec3 {
    let half = 0.5 * h;
    let k1 = rhs(params, theta, r);
    let k2 = rhs(params, theta + half, r + k1 * half);
    let k3 = rhs(params, theta + half, r + k2 * half);
    let k4 = rhs(params, theta + h, r + k3 * h);
    r + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

/// Fails with `Blowup` when a hyperbolic run to `theta_end` would exceed the
/// growth cap `cosh(2θ·max(1, |λ|)) < 1e10`; other classes always pass.
pub fn check_growth_cap(params: &BlochParams, theta_end: f64) -> Result<()> {
    if params.class() == CaseClass::Hyperbolic {
        let growth = (2.0 * theta_end.abs() * params.lambda().abs().max(1.0)).cosh();
        if !(growth < HYPERBOLIC_GROWTH_CAP) {
            return Err(Error::Blowup(format!(
                "hyperbolic run to theta={theta_end} exceeds the growth cap (cosh = {growth:e})"
            )));
        }
    }
    Ok(())
}

/// Advances `r` from `theta_start` to `theta_end` in fixed steps, the last one
/// shortened to land exactly on `theta_end`. `on_step` sees every accepted
/// `(θ, r)` after the start point. Returns the final state.
pub fn propagate<F>(
    params: &BlochParams,
    theta_start: f64,
    r_start: MVec3,
    theta_end: f64,
    cfg: &OdeConfig,
    mut on_step: F,
) -> Result<MVec3>
where
    F: FnMut(f64, MVec3),
{
    cfg.validate()?;
    if !(theta_end >= theta_start) {
        return Err(Error::InvalidParameter(format!("integration runs forward only ({theta_start} -> {theta_end})")));
    }
    check_growth_cap(params, theta_end)?;
    let span = theta_end - theta_start;
    let full_steps = (span / cfg.step).floor() as u64;
    let mut r = r_start;
    let mut theta = theta_start;
    let mut n: u64 = 0;
    loop {
        // Positions come from the step count, so θ does not accumulate rounding.
        let next = if n < full_steps { theta_start + (n + 1) as f64 * cfg.step } else { theta_end };
        let h = next - theta;
        if h <= 0.0 {
            break;
        }
        r = match cfg.method {
            Method::Rk4 => rk4_step(params, theta, r, h),
        };
        n += 1;
        theta = next;
        if !r.is_finite() || r.max_abs() > BLOWUP_LIMIT {
            return Err(Error::Blowup(format!("|r| exceeded {BLOWUP_LIMIT:e} at theta={theta}")));
        }
        if cfg.reproject_every > 0 && n.is_multiple_of(u64::from(cfg.reproject_every)) {
            r = reproject(r, params.class())
                .map_err(|e| Error::Blowup(format!("re-projection failed at theta={theta}: {e}")))?;
        }
        on_step(theta, r);
        if theta >= theta_end {
            break;
        }
    }
    Ok(r)
}

/// RK4 trajectory from `θ = 0` to `theta_end`, one sample per step.
pub fn integrate(params: &BlochParams, r0: MVec3, theta_end: f64, cfg: &OdeConfig) -> Result<Trajectory> {
    params.check_initial(r0)?;
    if !(theta_end > 0.0) {
        return Err(Error::InvalidParameter(format!("theta_end must be positive, got {theta_end}")));
    }
    let mut samples = vec![Sample { theta: 0.0, r: r0 }];
    propagate(params, 0.0, r0, theta_end, cfg, |theta, r| samples.push(Sample { theta, r }))?;
    Trajectory::new(*params, r0, samples, Route::OdeIntegrated)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StroboscopicEntry {
    pub k: u64,
    pub theta: f64,
    pub map: MVec3,
    pub ode: MVec3,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StroboscopicReport {
    /// Entries for `K = 0..=K_max`.
    pub entries: Vec<StroboscopicEntry>,
    pub max_deviation: f64,
}

/// Compares the ODE flow at `θ = Kα` with the group-map orbit
/// `decompose(exact_R2K(Q, P, R_0, K))`, `K = 0..=k_max`.
pub fn stroboscopic_residual(
    params: &BlochParams,
    r0: MVec3,
    alpha: f64,
    chi0: f64,
    k_max: u64,
    cfg: &OdeConfig,
) -> Result<StroboscopicReport> {
    params.check_initial(r0)?;
    let el = ScenarioElements::new(params, r0, alpha, chi0)?;
    let (q, p, r0_el) = (el.q_element(), el.p_element(), el.r0_element());
    check_growth_cap(params, k_max as f64 * alpha)?;

    let mut entries = Vec::with_capacity(k_max as usize + 1);
    entries.push(StroboscopicEntry { k: 0, theta: 0.0, map: r0, ode: r0, deviation: 0.0 });
    let mut r = r0;
    let mut theta = 0.0;
    let mut max_deviation = 0.0f64;
    for k in 1..=k_max {
        let target = k as f64 * alpha;
        r = propagate(params, theta, r, target, cfg, |_, _| {})?;
        theta = target;
        let map = orbit_vector(&exact_r2k(&q, &p, &r0_el, k), chi0, params.class(), DEFAULT_CLASS_TOL)?;
        let deviation = map.distance(&r);
        max_deviation = max_deviation.max(deviation);
        entries.push(StroboscopicEntry { k, theta, map, ode: r, deviation });
    }
    Ok(StroboscopicReport { entries, max_deviation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::trajectory_point;
    use crate::minkowski::mdot;
    use crate::su11::{adjoint_vec, exp_axis};

    fn fig1() -> (BlochParams, MVec3) {
        let q = MVec3::new(0.0, 0.0, 1.0);
        let p = MVec3::new(1.0, 0.0, 2f64.sqrt());
        let r0 = MVec3::new(0.5, 0.5, 1.5f64.sqrt());
        (BlochParams::new(q, p, 3.0, CaseClass::Elliptic).unwrap(), r0)
    }

    #[test]
    fn config_validation() {
        assert!(OdeConfig::default().validate().is_ok());
        assert_eq!(OdeConfig::with_step(0.2).validate(), Err(Error::StepTooLarge(0.2)));
        assert!(OdeConfig::with_step(0.0).validate().is_err());
        assert!(OdeConfig::with_step(f64::NAN).validate().is_err());
    }

    #[test]
    fn p_of_theta_examples() {
        let (params, _) = fig1();
        assert_eq!(p_of_theta(&params, 0.0), params.p());
        let q = params.q();
        let same = BlochParams::new(q, q, 3.0, CaseClass::Elliptic).unwrap();
        assert!(p_of_theta(&same, 2.3).distance(&q) < 1e-15);
        let theta = 0.4;
        let g = exp_axis(2.0 * theta, q, CaseClass::Elliptic).unwrap();
        let oracle = adjoint_vec(&g, params.p()).unwrap();
        assert!(p_of_theta(&params, theta).distance(&oracle) < 1e-11);
        assert!((p_of_theta(&params, theta).norm2() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn u_of_theta_examples() {
        let (params, _) = fig1();
        let still = BlochParams::new(params.q(), params.p(), 0.0, CaseClass::Elliptic).unwrap();
        assert_eq!(u_of_theta(&still, 1.7), params.q());
        assert!(u_of_theta(&params, 0.0).distance(&(params.q() + params.p() * 3.0)) < 1e-15);
        let u1 = u_of_theta(&params, 1.0);
        let expected = params.q() + p_of_theta(&params, 1.0) * 3.0;
        assert!(u1.distance(&expected) < 1e-15);
    }

    #[test]
    fn rhs_examples() {
        let (params, r0) = fig1();
        let still = BlochParams::new(params.q(), params.p(), 0.0, CaseClass::Elliptic).unwrap();
        assert_eq!(rhs(&still, 0.3, params.q()), MVec3::ZERO);
        let f = rhs(&params, 0.0, r0);
        assert!(mdot(f, r0).abs() < 1e-12);
        // -2 (r0×q + 3 r0×p), using r0×q = [√(3/2)·0 ... ] evaluated by hand:
        // r0×q = [-x2·1, x1·1, 0] = [-1/2, 1/2, 0]
        // r0×p = [-√2/2, √2/2 - √(3/2), -1/2]
        let h = 2f64.sqrt() / 2.0;
        let r0xq = MVec3::new(-0.5, 0.5, 0.0);
        let r0xp = MVec3::new(-h, h - 1.5f64.sqrt(), -0.5);
        let expected = (r0xq + r0xp * 3.0) * -2.0;
        assert!(f.distance(&expected) < 1e-14, "{f} vs {expected}");
    }

    #[test]
    fn integrate_trivial_and_errors() {
        let q = MVec3::new(0.0, 0.0, 1.0);
        let p = MVec3::new(1.0, 0.0, 2f64.sqrt());
        let still = BlochParams::new(q, p, 0.0, CaseClass::Elliptic).unwrap();
        let traj = integrate(&still, q, 1.0, &OdeConfig::with_step(0.01)).unwrap();
        assert!(traj.samples().iter().all(|s| s.r.distance(&q) < 1e-15));
        assert!((traj.last().unwrap().theta - 1.0).abs() < 1e-15);
        assert_eq!(integrate(&still, q, 1.0, &OdeConfig::with_step(0.5)), Err(Error::StepTooLarge(0.5)));
        assert!(integrate(&still, q, -1.0, &OdeConfig::default()).is_err());
    }

    #[test]
    fn final_partial_step_lands_on_end() {
        let (params, r0) = fig1();
        let traj = integrate(&params, r0, 0.105, &OdeConfig::with_step(0.01)).unwrap();
        let s = traj.samples();
        assert_eq!(s.len(), 12);
        assert_eq!(s.last().unwrap().theta, 0.105);
    }

    #[test]
    fn fig1_matches_closed_form() {
        let (params, r0) = fig1();
        let end = std::f64::consts::PI;
        let traj = integrate(&params, r0, end, &OdeConfig::with_step(1e-3)).unwrap();
        let exact = trajectory_point(&params, r0, end).unwrap();
        let err = traj.last().unwrap().r.distance(&exact);
        assert!(err < 1e-8, "err={err:e}");
    }

    #[test]
    fn reprojection_keeps_norm() {
        let (params, r0) = fig1();
        let cfg = OdeConfig { step: 0.01, reproject_every: 1, method: Method::Rk4 };
        let traj = integrate(&params, r0, 3.0, &cfg).unwrap();
        assert!(traj.max_norm_drift() < 1e-13, "{:e}", traj.max_norm_drift());
    }

    #[test]
    fn hyperbolic_growth_cap() {
        let params =
            BlochParams::new(MVec3::new(1.0, 0.0, 0.0), MVec3::new(0.0, 1.0, 0.0), 0.5, CaseClass::Hyperbolic).unwrap();
        let r0 = MVec3::new(2f64.sqrt(), 0.0, 1.0);
        assert!(matches!(integrate(&params, r0, 20.0, &OdeConfig::default()), Err(Error::Blowup(_))));
        assert!(integrate(&params, r0, 0.5, &OdeConfig::with_step(0.01)).is_ok());
    }

    #[test]
    fn stroboscopic_k0_is_zero() {
        let (params, r0) = fig1();
        let rep = stroboscopic_residual(&params, r0, 0.05, 1.0, 0, &OdeConfig::default()).unwrap();
        assert_eq!(rep.entries.len(), 1);
        assert_eq!(rep.max_deviation, 0.0);
    }
}
