//! SU(1,1) as 2×2 complex matrices preserving `J = diag(1, -1)`.
//!
//! Algebra elements are written through `κ = [iσ¹, iσ², σ³]` contracted with a
//! Minkowski vector, `κ·x = -iσ¹x1 - iσ²x2 + σ³x3`, which in matrix form is
//!
//! ```text
//! κ·x = [[ x3,         -i x1 - x2 ],
//!        [ -i x1 + x2,  -x3       ]]
//! ```
//!
//! It squares to `mdot(x, x)·1`, so `det(κ·x) = -mdot(x, x)` while the
//! generator `i κ·x` has `det = mdot(x, x)`. Group elements are
//! `exp(i (χ/2) κ·s)` and the adjoint action `g (κ·t) g⁻¹` moves Minkowski
//! vectors by Lorentz transformations.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::minkowski::{classify, mcross, mdot, CaseClass, MVec3, DEFAULT_CLASS_TOL};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Tolerance on the residual of projecting a conjugated matrix back onto the
/// image of `κ·x`, relative to the matrix scale.
pub const EXTRACTION_TOL: f64 = 1e-9;

/// Row-major 2×2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[ONE, ZERO], [ZERO, ONE]]);
    pub const ZERO: Mat2 = Mat2([[ZERO, ZERO], [ZERO, ZERO]]);
    /// `J = diag(1, -1)`.
    pub const J: Mat2 = Mat2([[ONE, ZERO], [ZERO, Complex64 { re: -1.0, im: 0.0 }]]);

    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> Complex64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Mat2 {
        let m = &self.0;
        Mat2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn scale(&self, k: Complex64) -> Mat2 {
        let m = &self.0;
        Mat2([[m[0][0] * k, m[0][1] * k], [m[1][0] * k, m[1][1] * k]])
    }

    /// Entrywise max modulus (the ∞-norm used for all residuals here).
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2([[a[0][0] + b[0][0], a[0][1] + b[0][1]], [a[1][0] + b[1][0], a[1][1] + b[1][1]]])
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2([[a[0][0] - b[0][0], a[0][1] - b[0][1]], [a[1][0] - b[1][0], a[1][1] - b[1][1]]])
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2([
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ])
    }
}

/// `κ·x = -iσ¹x1 - iσ²x2 + σ³x3`.
pub fn kappa_dot(x: MVec3) -> Mat2 {
    Mat2::new(
        Complex64::new(x.x3, 0.0),
        Complex64::new(-x.x2, -x.x1),
        Complex64::new(x.x2, -x.x1),
        Complex64::new(-x.x3, 0.0),
    )
}

/// Lie-algebra generator `i κ·x`; an element of su(1,1) with `det = mdot(x, x)`.
pub fn generator(x: MVec3) -> Mat2 {
    kappa_dot(x).scale(I)
}

/// Least-squares inverse of [`kappa_dot`]: returns the vector whose `κ·x` is
/// closest to `m`, together with the entrywise residual.
pub fn extract_vector(m: &Mat2) -> (MVec3, f64) {
    let a = &m.0;
    let x3 = 0.5 * (a[0][0] - a[1][1]).re;
    let x1 = -0.5 * (a[0][1] + a[1][0]).im;
    let x2 = 0.5 * (a[1][0] - a[0][1]).re;
    let x = MVec3::new(x1, x2, x3);
    let residual = m.max_abs_diff(&kappa_dot(x));
    (x, residual)
}

/// An element of SU(1,1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement(Mat2);

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement(Mat2::IDENTITY)
    }

    /// Wrap a matrix after checking `det = 1` and `m† J m = J` to `1e-12`
    /// relative to the squared entry scale.
    pub fn from_matrix(m: Mat2) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NonFinite("group element"));
        }
        let g = GroupElement(m);
        let scale = m.max_abs().max(1.0);
        let r = g.su11_residual();
        if r > 1e-12 * scale * scale {
            return Err(Error::NotInGroup(r));
        }
        Ok(g)
    }

    /// Wrap a matrix without checking the group invariants.
    pub fn from_matrix_unchecked(m: Mat2) -> Self {
        GroupElement(m)
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    /// `max(|det g - 1|, ‖g† J g - J‖∞)`.
    pub fn su11_residual(&self) -> f64 {
        let m = &self.0;
        let det_err = (m.det() - ONE).norm();
        let form_err = (m.dagger() * Mat2::J * *m).max_abs_diff(&Mat2::J);
        det_err.max(form_err)
    }

    pub fn multiply(&self, other: &GroupElement) -> GroupElement {
        GroupElement(self.0 * other.0)
    }

    /// Adjugate over determinant.
    ///
    /// Dividing by the determinant (rather than relying on `det = 1`) keeps
    /// the map iteration stable: with the bare adjugate a determinant error
    /// obeys `d_{N+1} = d_N² d_{N-1}` and grows by `1 + √2` per step.
    pub fn inverse(&self) -> GroupElement {
        let m = &self.0 .0;
        let inv_det = self.0.det().inv();
        GroupElement(Mat2([[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]]).scale(inv_det))
    }

    /// Integer power by binary exponentiation; negative powers use the inverse.
    pub fn pow(&self, n: i64) -> GroupElement {
        let mut base = if n < 0 { self.inverse() } else { *self };
        let mut e = n.unsigned_abs();
        let mut acc = GroupElement::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.multiply(&base);
            }
            base = base.multiply(&base);
            e >>= 1;
        }
        acc
    }

    pub fn half_trace(&self) -> Complex64 {
        self.0.trace() * 0.5
    }

    pub fn max_abs_diff(&self, other: &GroupElement) -> f64 {
        self.0.max_abs_diff(&other.0)
    }

    pub fn neg(&self) -> GroupElement {
        GroupElement(self.0.scale(-ONE))
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;
    fn mul(self, rhs: GroupElement) -> GroupElement {
        self.multiply(&rhs)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.0 .0;
        write!(f, "[[{}, {}], [{}, {}]]", m[0][0], m[0][1], m[1][0], m[1][1])
    }
}

pub fn multiply(g: &GroupElement, h: &GroupElement) -> GroupElement {
    g.multiply(h)
}

pub fn inverse(g: &GroupElement) -> GroupElement {
    g.inverse()
}

/// `(χ, s, class)` with `mdot(s, s) = η`.
///
/// The elliptic angle is reduced into `[0, 4π)`, the period of the spinor
/// representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisAngle {
    chi: f64,
    axis: MVec3,
    class: CaseClass,
}

impl AxisAngle {
    pub fn new(chi: f64, axis: MVec3, class: CaseClass) -> Result<Self> {
        if !chi.is_finite() {
            return Err(Error::NonFinite("axis-angle angle"));
        }
        check_axis(axis, class)?;
        if class == CaseClass::Parabolic && axis.max_abs() == 0.0 {
            return Err(Error::InvalidAxis { expected: class, found: None });
        }
        let chi = match class {
            CaseClass::Elliptic => chi.rem_euclid(4.0 * std::f64::consts::PI),
            _ => chi,
        };
        Ok(AxisAngle { chi, axis, class })
    }

    pub fn chi(&self) -> f64 {
        self.chi
    }

    pub fn axis(&self) -> MVec3 {
        self.axis
    }

    pub fn class(&self) -> CaseClass {
        self.class
    }

    /// Same axis, angle multiplied by `k`; `exp` of the result is the `k`-th power.
    pub fn scaled(&self, k: f64) -> AxisAngle {
        // Axis already validated; only the angle changes.
        let chi = match self.class {
            CaseClass::Elliptic => (self.chi * k).rem_euclid(4.0 * std::f64::consts::PI),
            _ => self.chi * k,
        };
        AxisAngle { chi, ..*self }
    }

    /// Coefficient `f(χ)` of `i κ·s` in `exp`: `sin(χ/2)`, `χ/2` or `sinh(χ/2)`.
    pub fn generator_coefficient(&self) -> f64 {
        generator_coefficient(self.chi, self.class)
    }
}

pub(crate) fn generator_coefficient(chi: f64, class: CaseClass) -> f64 {
    let half = 0.5 * chi;
    match class {
        CaseClass::Elliptic => half.sin(),
        CaseClass::Parabolic => half,
        CaseClass::Hyperbolic => half.sinh(),
    }
}

fn check_axis(s: MVec3, class: CaseClass) -> Result<()> {
    match classify(s, DEFAULT_CLASS_TOL) {
        Ok(c) if c == class => Ok(()),
        Ok(c) => Err(Error::InvalidAxis { expected: class, found: Some(c) }),
        Err(_) => Err(Error::InvalidAxis { expected: class, found: None }),
    }
}

/// `exp(i (χ/2) κ·s)` in closed form:
///
/// * elliptic: `cos(χ/2)·1 + i sin(χ/2) κ·s`
/// * parabolic: `1 + i (χ/2) κ·s`
/// * hyperbolic: `cosh(χ/2)·1 + i sinh(χ/2) κ·s`
pub fn exp_element(a: &AxisAngle) -> GroupElement {
    let half = 0.5 * a.chi;
    let scalar = match a.class {
        CaseClass::Elliptic => half.cos(),
        CaseClass::Parabolic => 1.0,
        CaseClass::Hyperbolic => half.cosh(),
    };
    let k = Complex64::new(0.0, a.generator_coefficient());
    GroupElement(Mat2::IDENTITY.scale(Complex64::new(scalar, 0.0)) + kappa_dot(a.axis).scale(k))
}

/// Convenience form of [`exp_element`] that validates the axis.
pub fn exp_axis(chi: f64, s: MVec3, class: CaseClass) -> Result<GroupElement> {
    Ok(exp_element(&AxisAngle::new(chi, s, class)?))
}

/// Adjoint action by explicit conjugation: the `t'` with `κ·t' = g (κ·t) g⁻¹`.
pub fn adjoint_vec(g: &GroupElement, t: MVec3) -> Result<MVec3> {
    let m = g.0 * kappa_dot(t) * g.inverse().0;
    let (t_new, residual) = extract_vector(&m);
    let scale = m.max_abs().max(1.0);
    if !(residual <= EXTRACTION_TOL * scale) {
        return Err(Error::ExtractionFailure { residual });
    }
    Ok(t_new)
}

/// Closed form of `exp(i(γ/2)κ·s) (κ·t) exp(-i(γ/2)κ·s)`.
///
/// * elliptic: `cos γ t - sin γ (t×s) + (1 - cos γ)(t·s) s`
/// * parabolic: `t - γ (t×s) + (γ²/2)(t·s) s`
/// * hyperbolic: `cosh γ t - sinh γ (t×s) + (cosh γ - 1)(t·s) s`
///
/// The parabolic quadratic term and the hyperbolic `cosh γ - 1` coefficient
/// are the ones that agree with [`adjoint_vec`]; writing `(t·s) s` without
/// `γ²/2`, or `cosh β - 1`, does not describe a conjugation.
pub fn adjoint_closed_form(gamma: f64, s: MVec3, t: MVec3, class: CaseClass) -> Result<MVec3> {
    check_axis(s, class)?;
    Ok(rotate(gamma, s, t, class))
}

/// [`adjoint_closed_form`] without the axis check, for callers that hold an
/// already validated axis.
#[inline]
pub(crate) fn rotate(gamma: f64, s: MVec3, t: MVec3, class: CaseClass) -> MVec3 {
    let (c0, c1, c2) = match class {
        CaseClass::Elliptic => {
            let (sn, cs) = gamma.sin_cos();
            (cs, sn, 1.0 - cs)
        }
        CaseClass::Parabolic => (1.0, gamma, 0.5 * gamma * gamma),
        CaseClass::Hyperbolic => {
            let ch = gamma.cosh();
            (ch, gamma.sinh(), ch - 1.0)
        }
    };
    t * c0 - mcross(t, s) * c1 + s * (c2 * mdot(t, s))
}

/// Result of [`decompose`]: `g = sign · exp(i(χ/2)κ·s)`, or `g = sign · 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decomposition {
    Identity { sign: f64 },
    Element { axis_angle: AxisAngle, sign: f64 },
}

impl Decomposition {
    pub fn sign(&self) -> f64 {
        match *self {
            Decomposition::Identity { sign } | Decomposition::Element { sign, .. } => sign,
        }
    }

    pub fn axis_angle(&self) -> Option<AxisAngle> {
        match *self {
            Decomposition::Identity { .. } => None,
            Decomposition::Element { axis_angle, .. } => Some(axis_angle),
        }
    }

    /// Rebuilds `g`.
    pub fn to_element(&self) -> GroupElement {
        let base = match self.axis_angle() {
            Some(a) => exp_element(&a),
            None => GroupElement::identity(),
        };
        if self.sign() < 0.0 {
            base.neg()
        } else {
            base
        }
    }
}

/// Relative nullness threshold `|mdot(v,v)| / |v|²` below which an element on
/// the trace boundary is accepted as parabolic.
const PARABOLIC_NULL_RATIO: f64 = 1e-3;

/// Axis-angle decomposition, classified by the half-trace `h = tr(g)/2`.
///
/// * `|h| < 1 - tol`: elliptic, `χ = 2 arccos h ∈ (0, 2π)`, sign `+1`.
/// * `|h| > 1 + tol`: hyperbolic, `χ = 2 arccosh |h| > 0`, sign `sgn h`.
/// * otherwise: identity if the traceless part vanishes (within `tol`),
///   parabolic if it is null, with the axis scaled to `s3 = 1` and `χ`
///   carrying the magnitude (possibly negative).
///
/// `exp_element` of the returned axis-angle times the sign reproduces `g`.
pub fn decompose(g: &GroupElement, tol: f64) -> Result<Decomposition> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("decompose tolerance {tol} must be > 0")));
    }
    let h_c = g.half_trace();
    let scale = g.0.max_abs().max(1.0);
    if h_c.im.abs() > 1e-9 * scale {
        return Err(Error::NotInGroup(h_c.im.abs()));
    }
    let h = h_c.re;
    // g = h·1 + i κ·v
    let traceless = g.0 - Mat2::IDENTITY.scale(Complex64::new(h, 0.0));
    let (v, residual) = extract_vector(&traceless.scale(-I));
    if residual > EXTRACTION_TOL * scale {
        return Err(Error::NotInGroup(residual));
    }

    let abs_h = h.abs();
    let sign = if h < 0.0 { -1.0 } else { 1.0 };
    if abs_h < 1.0 - tol {
        let chi = 2.0 * h.clamp(-1.0, 1.0).acos();
        let f = (1.0 - h * h).sqrt();
        let axis = v * (1.0 / f);
        let axis_angle = AxisAngle::new(chi, axis, CaseClass::Elliptic)?;
        return Ok(Decomposition::Element { axis_angle, sign: 1.0 });
    }
    if abs_h > 1.0 + tol {
        let chi = 2.0 * abs_h.acosh();
        let f = (h * h - 1.0).sqrt();
        let axis = v * (sign / f);
        let axis_angle = AxisAngle::new(chi, axis, CaseClass::Hyperbolic)?;
        return Ok(Decomposition::Element { axis_angle, sign });
    }

    let w = v * sign;
    if w.max_abs() <= tol {
        return Ok(Decomposition::Identity { sign });
    }
    let e2 = w.euclidean_norm().powi(2);
    if w.norm2().abs() > PARABOLIC_NULL_RATIO * e2 || w.x3 == 0.0 {
        return Err(Error::NearBoundary { half_trace: h });
    }
    let chi = 2.0 * w.x3;
    let raw = w * (1.0 / w.x3);
    // The direction is null only to roundoff; land it on the cone exactly.
    let rho = raw.x1.hypot(raw.x2);
    let axis = MVec3::new(raw.x1 / rho, raw.x2 / rho, 1.0);
    let axis_angle = AxisAngle::new(chi, axis, CaseClass::Parabolic)?;
    Ok(Decomposition::Element { axis_angle, sign })
}
