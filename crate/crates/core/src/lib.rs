//! Discrete-time dynamics on SU(1,1), its exact solution, and the SU(1,1)
//! Bloch equation whose stroboscopic map it is.
//!
//! Three independent routes produce the same orbit on the hyperboloid (or
//! cone) `mdot(r, r) = η`:
//!
//! * [`map_dynamics`]: iterate the group map on 2×2 matrices;
//! * [`closed_form`]: evaluate `r(θ) = Ad_q(2θ) Ad_p(2λθ) r0` directly;
//! * [`bloch_ode`]: integrate `dr/dθ = -2 r × u(θ)` with RK4.
//!
//! [`minkowski`] and [`su11`] provide the vector algebra and the group.

// `!(x > 0.0)` style guards deliberately reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bloch_ode;
pub mod closed_form;
pub mod error;
pub mod map_dynamics;
pub mod minkowski;
pub mod su11;

pub use closed_form::{BlochParams, Bounds, Route, Sample, Trajectory};
pub use error::{Error, Result};
pub use minkowski::{mcross, mdot, CaseClass, MVec3};
pub use su11::{AxisAngle, Decomposition, GroupElement};
