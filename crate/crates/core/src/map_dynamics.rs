//! The second-order group map at constant `Q`,
//!
//! ```text
//! R_{N+1} = Q R_N Q R_{N-1} Q⁻¹ R_N⁻¹ Q⁻¹,
//! ```
//!
//! and its exact even-index solution `R_{2K} = Q^{2K} P^K R_0 P^{-K} Q^{-2K}`
//! with `P = Q⁻¹ R_1 Q R_0`.

use crate::closed_form::{BlochParams, Route, Sample, Trajectory};
use crate::error::{Error, Result};
use crate::minkowski::{CaseClass, MVec3, DEFAULT_CLASS_TOL};
use crate::su11::{decompose, exp_element, generator_coefficient, AxisAngle, GroupElement};

/// Two consecutive iterates of the map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapState {
    pub r_prev: GroupElement,
    pub r_curr: GroupElement,
    pub q: GroupElement,
    pub n: u64,
}

impl MapState {
    /// State `(R_0, R_1)` at `N = 1`.
    pub fn new(q: GroupElement, r0: GroupElement, r1: GroupElement) -> Self {
        MapState { r_prev: r0, r_curr: r1, q, n: 1 }
    }
}

/// `P = Q⁻¹ R_1 Q R_0`.
pub fn compute_p(q: &GroupElement, r0: &GroupElement, r1: &GroupElement) -> GroupElement {
    q.inverse() * *r1 * *q * *r0
}

/// `R_1 = Q P R_0⁻¹ Q⁻¹`.
pub fn compute_r1(q: &GroupElement, p: &GroupElement, r0: &GroupElement) -> GroupElement {
    *q * *p * r0.inverse() * q.inverse()
}

pub fn step(state: &MapState) -> MapState {
    let q = state.q;
    let q_inv = q.inverse();
    let r = state.r_curr;
    let next = q * r * q * state.r_prev * q_inv * r.inverse() * q_inv;
    MapState { r_prev: r, r_curr: next, q, n: state.n + 1 }
}

/// `Q^{2K} P^K R_0 P^{-K} Q^{-2K}` with powers by binary exponentiation.
pub fn exact_r2k(q: &GroupElement, p: &GroupElement, r0: &GroupElement, k: u64) -> GroupElement {
    let k = i64::try_from(k).expect("K fits in i64");
    let left = q.pow(2 * k) * p.pow(k);
    left * *r0 * left.inverse()
}

/// Same as [`exact_r2k`] with `Q`, `P` given by axis-angle; powers become
/// angle scalings and accumulate no multiplication error.
pub fn exact_r2k_axis_angle(q: &AxisAngle, p: &AxisAngle, r0: &GroupElement, k: u64) -> GroupElement {
    let kf = k as f64;
    let left = exp_element(&q.scaled(2.0 * kf)) * exp_element(&p.scaled(kf));
    left * *r0 * left.inverse()
}

/// Per-`K` entrywise deviation between iterated and closed-form `R_{2K}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactVsIterated {
    /// `(K, deviation)` for `K = 1..=K_max`.
    pub deviations: Vec<(u64, f64)>,
    pub worst_k: u64,
    pub max_deviation: f64,
}

pub fn verify_exact_vs_iterated(
    q: &GroupElement,
    p: &GroupElement,
    r0: &GroupElement,
    k_max: u64,
) -> Result<ExactVsIterated> {
    if k_max < 1 {
        return Err(Error::InvalidParameter("K_max must be at least 1".into()));
    }
    let r1 = compute_r1(q, p, r0);
    let mut state = MapState::new(*q, *r0, r1);
    let mut deviations = Vec::with_capacity(k_max as usize);
    let (mut worst_k, mut max_deviation) = (1, f64::NEG_INFINITY);
    for k in 1..=k_max {
        while state.n < 2 * k {
            state = step(&state);
        }
        let dev = state.r_curr.max_abs_diff(&exact_r2k(q, p, r0, k));
        if dev > max_deviation {
            max_deviation = dev;
            worst_k = k;
        }
        deviations.push((k, dev));
    }
    Ok(ExactVsIterated { deviations, worst_k, max_deviation })
}

/// Iterator over even-index iterates `(K, R_{2K})`, starting at `K = 0`.
pub struct EvenIterates {
    state: MapState,
    r0: Option<GroupElement>,
}

impl EvenIterates {
    pub fn new(q: &GroupElement, p: &GroupElement, r0: &GroupElement) -> Self {
        let r1 = compute_r1(q, p, r0);
        EvenIterates { state: MapState::new(*q, *r0, r1), r0: Some(*r0) }
    }
}

impl Iterator for EvenIterates {
    type Item = (u64, GroupElement);

    fn next(&mut self) -> Option<Self::Item> {
        if let Some(r0) = self.r0.take() {
            return Some((0, r0));
        }
        loop {
            self.state = step(&self.state);
            if self.state.n.is_multiple_of(2) {
                break;
            }
        }
        Some((self.state.n / 2, self.state.r_curr))
    }
}

/// The vector `r` with `R = exp(i(χ₀/2) κ·r)` for a known angle `χ₀`.
///
/// `decompose` fixes its own normalisation (elliptic `χ ∈ (0, 2π)`,
/// hyperbolic `χ > 0`, parabolic `s3 = 1`); since `R - h·1 = i f(χ) κ·s`
/// with `f = sin(χ/2)`, `χ/2` or `sinh(χ/2)`, the vector for `χ₀` is
/// `s · f(χ) / f(χ₀)`.
pub fn orbit_vector(r: &GroupElement, chi0: f64, class: CaseClass, tol: f64) -> Result<MVec3> {
    let f0 = generator_coefficient(chi0, class);
    if f0 == 0.0 || !f0.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "angle {chi0} gives a degenerate generator coefficient for the {class} class"
        )));
    }
    let d = decompose(r, tol)?;
    let a = d
        .axis_angle()
        .ok_or_else(|| Error::InvalidParameter("element is ±identity; its vector is undefined".into()))?;
    if a.class() != class {
        return Err(Error::ClassMismatch { expected: class, found: Some(a.class()) });
    }
    Ok(a.axis() * (d.sign() * a.generator_coefficient() / f0))
}

/// Group elements `(Q, P, R_0)` of a scenario: `Q = exp(α, q)`,
/// `P = exp(β, p)` with `β = 2λα`, and `R_0 = exp(χ₀, r0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioElements {
    pub q: AxisAngle,
    pub p: AxisAngle,
    pub r0: AxisAngle,
}

impl ScenarioElements {
    pub fn new(params: &BlochParams, r0: MVec3, alpha: f64, chi0: f64) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
        }
        let class = params.class();
        let beta = 2.0 * params.lambda() * alpha;
        Ok(ScenarioElements {
            q: AxisAngle::new(alpha, params.q(), class)?,
            p: AxisAngle::new(beta, params.p(), class)?,
            r0: AxisAngle::new(chi0, r0, class)?,
        })
    }

    pub fn q_element(&self) -> GroupElement {
        exp_element(&self.q)
    }

    pub fn p_element(&self) -> GroupElement {
        exp_element(&self.p)
    }

    pub fn r0_element(&self) -> GroupElement {
        exp_element(&self.r0)
    }
}

/// Discrete orbit `r_{2K}` at `θ = Kα`, `K = 0..=k_max`, by iterating the map
/// and reading each even iterate back as a vector.
pub fn map_orbit(params: &BlochParams, r0: MVec3, alpha: f64, chi0: f64, k_max: u64) -> Result<Trajectory> {
    let el = ScenarioElements::new(params, r0, alpha, chi0)?;
    let (q, p, r0_el) = (el.q_element(), el.p_element(), el.r0_element());
    let class = params.class();
    let mut samples = Vec::with_capacity(k_max as usize + 1);
    for (k, r) in EvenIterates::new(&q, &p, &r0_el).take(k_max as usize + 1) {
        let v = if k == 0 { r0 } else { orbit_vector(&r, chi0, class, DEFAULT_CLASS_TOL)? };
        samples.push(Sample { theta: k as f64 * alpha, r: v });
    }
    Trajectory::new(*params, r0, samples, Route::MapIterated)
}
