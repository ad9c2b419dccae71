//! Vector algebra in Minkowski 3-space with signature (-, -, +).
//!
//! Vectors carry the three components `x1, x2, x3`. The scalar product is
//! `-x1*y1 - x2*y2 + x3*y3` and the cross product is the "twisted" one whose
//! first two components are negated relative to the Euclidean convention:
//!
//! ```text
//! x × y = [-x2*y3 + x3*y2, -x3*y1 + x1*y3, x1*y2 - x2*y1]
//! ```
//!
//! With this pair, `mdot(mcross(x, y), x) == 0`, and the cross product is the
//! vector form of the commutator in the SU(1,1) Lie algebra.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Default tolerance when classifying a vector by its Minkowski norm.
pub const DEFAULT_CLASS_TOL: f64 = 1e-9;

/// Maximum Euclidean distance accepted by [`reproject`].
pub const REPROJECT_MAX_DISTANCE: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MVec3 {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl MVec3 {
    pub const ZERO: MVec3 = MVec3::new(0.0, 0.0, 0.0);

    pub const fn new(x1: f64, x2: f64, x3: f64) -> Self {
        Self { x1, x2, x3 }
    }

    /// Checked constructor; rejects NaN and infinities.
    pub fn try_new(x1: f64, x2: f64, x3: f64) -> Result<Self> {
        let v = Self::new(x1, x2, x3);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite("MVec3"))
        }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }

    pub fn is_finite(&self) -> bool {
        self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite()
    }

    /// Point on the manifold `{x : mdot(x, x) = eta}` in polar form.
    ///
    /// * elliptic: `[sinh ψ cos φ, sinh ψ sin φ, cosh ψ]` (upper sheet)
    /// * parabolic: `ψ·[cos φ, sin φ, 1]` (future cone for ψ > 0)
    /// * hyperbolic: `[cosh ψ cos φ, cosh ψ sin φ, sinh ψ]`
    pub fn on_manifold(class: CaseClass, psi: f64, phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        match class {
            CaseClass::Elliptic => Self::new(psi.sinh() * c, psi.sinh() * s, psi.cosh()),
            CaseClass::Parabolic => Self::new(psi * c, psi * s, psi),
            CaseClass::Hyperbolic => Self::new(psi.cosh() * c, psi.cosh() * s, psi.sinh()),
        }
    }

    /// Euclidean length, used for distances and blow-up detection only.
    pub fn euclidean_norm(&self) -> f64 {
        (self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.x1.abs().max(self.x2.abs()).max(self.x3.abs())
    }

    pub fn distance(&self, other: &MVec3) -> f64 {
        (*self - *other).euclidean_norm()
    }

    pub fn mdot(&self, other: &MVec3) -> f64 {
        mdot(*self, *other)
    }

    pub fn mcross(&self, other: &MVec3) -> MVec3 {
        mcross(*self, *other)
    }

    /// Minkowski norm `mdot(x, x)`.
    pub fn norm2(&self) -> f64 {
        mdot(*self, *self)
    }
}

impl fmt::Display for MVec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.x1, self.x2, self.x3)
    }
}

impl Add for MVec3 {
    type Output = MVec3;
    fn add(self, rhs: MVec3) -> MVec3 {
        MVec3::new(self.x1 + rhs.x1, self.x2 + rhs.x2, self.x3 + rhs.x3)
    }
}

impl AddAssign for MVec3 {
    fn add_assign(&mut self, rhs: MVec3) {
        *self = *self + rhs;
    }
}

impl Sub for MVec3 {
    type Output = MVec3;
    fn sub(self, rhs: MVec3) -> MVec3 {
        MVec3::new(self.x1 - rhs.x1, self.x2 - rhs.x2, self.x3 - rhs.x3)
    }
}

impl Neg for MVec3 {
    type Output = MVec3;
    fn neg(self) -> MVec3 {
        MVec3::new(-self.x1, -self.x2, -self.x3)
    }
}

impl Mul<f64> for MVec3 {
    type Output = MVec3;
    fn mul(self, k: f64) -> MVec3 {
        MVec3::new(self.x1 * k, self.x2 * k, self.x3 * k)
    }
}

impl Mul<MVec3> for f64 {
    type Output = MVec3;
    fn mul(self, v: MVec3) -> MVec3 {
        v * self
    }
}

/// The three conjugacy classes, labelled by the axis norm `eta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseClass {
    Elliptic,
    Parabolic,
    Hyperbolic,
}

impl CaseClass {
    pub const ALL: [CaseClass; 3] = [CaseClass::Elliptic, CaseClass::Parabolic, CaseClass::Hyperbolic];

    pub fn eta(self) -> i32 {
        match self {
            CaseClass::Elliptic => 1,
            CaseClass::Parabolic => 0,
            CaseClass::Hyperbolic => -1,
        }
    }

    pub fn eta_f64(self) -> f64 {
        f64::from(self.eta())
    }

    pub fn name(self) -> &'static str {
        match self {
            CaseClass::Elliptic => "elliptic",
            CaseClass::Parabolic => "parabolic",
            CaseClass::Hyperbolic => "hyperbolic",
        }
    }

    pub fn from_name(s: &str) -> Option<CaseClass> {
        match s.to_ascii_lowercase().as_str() {
            "elliptic" => Some(CaseClass::Elliptic),
            "parabolic" => Some(CaseClass::Parabolic),
            "hyperbolic" => Some(CaseClass::Hyperbolic),
            _ => None,
        }
    }
}

impl fmt::Display for CaseClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Minkowski scalar product `-x1*y1 - x2*y2 + x3*y3`.
#[inline]
pub fn mdot(x: MVec3, y: MVec3) -> f64 {
    -x.x1 * y.x1 - x.x2 * y.x2 + x.x3 * y.x3
}

/// Twisted cross product `[-x2*y3 + x3*y2, -x3*y1 + x1*y3, x1*y2 - x2*y1]`.
#[inline]
pub fn mcross(x: MVec3, y: MVec3) -> MVec3 {
    MVec3::new(-x.x2 * y.x3 + x.x3 * y.x2, -x.x3 * y.x1 + x.x1 * y.x3, x.x1 * y.x2 - x.x2 * y.x1)
}

/// Classify `x` by its Minkowski norm.
pub fn classify(x: MVec3, tol: f64) -> Result<CaseClass> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("classification tolerance {tol} must be > 0")));
    }
    if tol >= 0.5 {
        return Err(Error::Ambiguous(tol));
    }
    if !x.is_finite() {
        return Err(Error::NonFinite("classify input"));
    }
    let n = x.norm2();
    if (n - 1.0).abs() <= tol {
        Ok(CaseClass::Elliptic)
    } else if n.abs() <= tol {
        Ok(CaseClass::Parabolic)
    } else if (n + 1.0).abs() <= tol {
        Ok(CaseClass::Hyperbolic)
    } else {
        Err(Error::Unnormalized { norm: n, tol })
    }
}

/// Pull `x` back onto `{y : mdot(y, y) = eta}`.
///
/// Elliptic and hyperbolic points are rescaled radially by `1/sqrt(|mdot(x,x)|)`,
/// which keeps the sheet in the elliptic case. Parabolic points go to the
/// Euclidean nearest point of the cone sheet sharing the sign of `x3`.
pub fn reproject(x: MVec3, class: CaseClass) -> Result<MVec3> {
    if !x.is_finite() {
        return Err(Error::NonFinite("reproject input"));
    }
    let (y, distance) = match class {
        CaseClass::Elliptic | CaseClass::Hyperbolic => {
            let n = x.norm2() * class.eta_f64();
            if n <= 0.0 {
                return Err(Error::TooFar { class, distance: f64::INFINITY });
            }
            let y = x * (1.0 / n.sqrt());
            (y, x.distance(&y))
        }
        CaseClass::Parabolic => {
            let rho = x.x1.hypot(x.x2);
            if rho == 0.0 && x.x3 == 0.0 {
                return Err(Error::InvalidParameter("cannot reproject the zero vector onto the cone".into()));
            }
            let half = 0.5 * (rho + x.x3.abs());
            let (c, s) = if rho > 0.0 { (x.x1 / rho, x.x2 / rho) } else { (1.0, 0.0) };
            let y = MVec3::new(half * c, half * s, half.copysign(x.x3));
            (y, (rho - x.x3.abs()).abs() / std::f64::consts::SQRT_2)
        }
    };
    if distance > REPROJECT_MAX_DISTANCE {
        return Err(Error::TooFar { class, distance });
    }
    Ok(y)
}
