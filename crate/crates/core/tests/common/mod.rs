#![allow(dead_code)]

use std::f64::consts::PI;

use rand::Rng;
use su11_core::map_dynamics::{exact_r2k_axis_angle, ScenarioElements};
use su11_core::{BlochParams, CaseClass, MVec3};

/// Largest matrix entry allowed along a random orbit for `K ≤ 100`.
/// Roundoff in the iterated map grows like ε|R|³ to ε|R|⁴, so absolute
/// tolerances near 1e-9 only make sense for orbits of this size.
pub const DESK_SCALE: f64 = 15.0;

/// A complete map/flow scenario.
#[derive(Debug, Clone, Copy)]
pub struct Scenario {
    pub params: BlochParams,
    pub r0: MVec3,
    pub alpha: f64,
    pub chi0: f64,
}

pub fn fig1_params(lambda: f64) -> (BlochParams, MVec3) {
    let q = MVec3::new(0.0, 0.0, 1.0);
    let p = MVec3::new(1.0, 0.0, 2f64.sqrt());
    let r0 = MVec3::new(0.5, 0.5, 1.5f64.sqrt());
    (BlochParams::new(q, p, lambda, CaseClass::Elliptic).unwrap(), r0)
}

pub fn fig1() -> Scenario {
    let (params, r0) = fig1_params(3.0);
    Scenario { params, r0, alpha: 0.05, chi0: 1.0 }
}

pub fn fig2() -> Scenario {
    let (params, r0) = fig1_params(2.0);
    Scenario { params, r0, alpha: 5f64.to_radians(), chi0: 1.0 }
}

pub fn hyperbolic_desk(alpha: f64) -> Scenario {
    let params =
        BlochParams::new(MVec3::new(1.0, 0.0, 0.0), MVec3::new(0.0, 1.0, 0.0), 0.5, CaseClass::Hyperbolic).unwrap();
    Scenario { params, r0: MVec3::new(2f64.sqrt(), 0.0, 1.0), alpha, chi0: 1.0 }
}

pub fn parabolic_desk() -> Scenario {
    let params =
        BlochParams::new(MVec3::new(0.0, 1.0, 1.0), MVec3::new(1.0, 0.0, 1.0), 1.0, CaseClass::Parabolic).unwrap();
    Scenario { params, r0: MVec3::new(0.6, 0.8, 1.0), alpha: 0.02, chi0: 1.0 }
}

/// Random point on the class manifold; elliptic points on the upper sheet.
pub fn random_vector<R: Rng>(rng: &mut R, class: CaseClass) -> MVec3 {
    let phi = rng.gen_range(0.0..2.0 * PI);
    let psi = match class {
        CaseClass::Parabolic => rng.gen_range(0.3..1.5),
        _ => rng.gen_range(0.0..1.2),
    };
    MVec3::on_manifold(class, psi, phi)
}

/// Largest entry of `R_{2K}`, `K = 0..=k_max`.
pub fn orbit_scale(s: &Scenario, k_max: u64) -> f64 {
    let el = ScenarioElements::new(&s.params, s.r0, s.alpha, s.chi0).unwrap();
    let r0 = el.r0_element();
    (0..=k_max).map(|k| exact_r2k_axis_angle(&el.q, &el.p, &r0, k).matrix().max_abs()).fold(0.0, f64::max)
}

fn candidate<R: Rng>(rng: &mut R, class: CaseClass) -> Scenario {
    let q = random_vector(rng, class);
    let p = random_vector(rng, class);
    let r0 = random_vector(rng, class);
    let (alpha, lambda) = match class {
        CaseClass::Elliptic => (rng.gen_range(0.01..0.3), rng.gen_range(-4.0..4.0)),
        CaseClass::Parabolic => (rng.gen_range(0.005..0.02), rng.gen_range(-1.5..1.5)),
        CaseClass::Hyperbolic => (rng.gen_range(0.002..0.006), rng.gen_range(-1.0..1.0)),
    };
    let params = BlochParams::new(q, p, lambda, class).unwrap();
    Scenario { params, r0, alpha, chi0: rng.gen_range(0.5..2.0) }
}

/// Random scenario whose orbit stays within [`DESK_SCALE`] for `K ≤ 100`.
pub fn random_scenario<R: Rng>(rng: &mut R, class: CaseClass) -> Scenario {
    loop {
        let s = candidate(rng, class);
        if orbit_scale(&s, 100) <= DESK_SCALE {
            return s;
        }
    }
}
