//! Joukowski parameterization of the elliptic annulus.
//!
//! A point `w = r e^{i theta}` with `r > 1` maps to `z = (w + 1/w) / 2`, which
//! lies on the ellipse with semi-axes `a_r = (r + 1/r)/2`, `b_r = (r - 1/r)/2`.
//! Circles `|w| = R` and `|w| = v` therefore bound a confocal elliptic annulus
//! with foci at `+-1`, and the map is a bijection from `|w| > 1` onto the plane
//! minus the segment `[-1, 1]`.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Absolute tolerance for deciding that a point sits on the branch cut `[-1, 1]`.
pub const CUT_TOL: f64 = 1e-14;

/// Relative slack applied to the radial bounds in [`contains`], so that points
/// constructed exactly on a boundary ellipse survive the inverse-map roundoff.
pub const BOUNDARY_SLACK: f64 = 1e-12;

/// A location `z = x + i y` in the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexPoint {
    pub x: f64,
    pub y: f64,
}

impl ComplexPoint {
    pub fn new(x: f64, y: f64) -> Self {
        debug_assert!(x.is_finite() && y.is_finite());
        Self { x, y }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    pub fn conj(self) -> Self {
        Self::new(self.x, -self.y)
    }
}

impl From<Complex64> for ComplexPoint {
    fn from(z: Complex64) -> Self {
        Self::new(z.re, z.im)
    }
}

/// Elliptic polar coordinates `(r, theta)` of `w = r e^{i theta}`, `r > 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaCoord {
    r: f64,
    theta: f64,
}

impl OmegaCoord {
    /// Builds the coordinate, normalizing `theta` into `[0, 2 pi)`.
    pub fn new(r: f64, theta: f64) -> Result<Self> {
        if !(r.is_finite() && r > 1.0) {
            return Err(Error::Domain(format!("elliptic radius must exceed 1, got {r}")));
        }
        if !theta.is_finite() {
            return Err(Error::Domain(format!("angle must be finite, got {theta}")));
        }
        let mut theta = theta.rem_euclid(TAU);
        if theta >= TAU {
            theta = 0.0;
        }
        Ok(Self { r, theta })
    }

    /// Builds the coordinate from `w` itself (`|w| > 1`).
    pub fn from_omega(w: Complex64) -> Result<Self> {
        Self::new(w.norm(), w.arg())
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn omega(&self) -> Complex64 {
        Complex64::from_polar(self.r, self.theta)
    }
}

/// The pair `(R, v)`, `1 < R < v`, of inner and outer elliptic radii.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnulusSpec {
    inner: f64,
    outer: f64,
}

impl AnnulusSpec {
    pub fn new(inner: f64, outer: f64) -> Result<Self> {
        if !(inner.is_finite() && outer.is_finite()) {
            return Err(Error::InvalidParameter("annulus radii must be finite".into()));
        }
        if !(1.0 < inner && inner < outer) {
            return Err(Error::InvalidParameter(format!(
                "annulus radii must satisfy 1 < R < v, got R = {inner}, v = {outer}"
            )));
        }
        Ok(Self { inner, outer })
    }

    /// Inner elliptic radius `R`.
    pub fn inner(&self) -> f64 {
        self.inner
    }

    /// Outer elliptic radius `v`.
    pub fn outer(&self) -> f64 {
        self.outer
    }

    /// Semi-axes `(a, b)` of the outer boundary ellipse.
    pub fn outer_semi_axes(&self) -> (f64, f64) {
        semi_axes(self.outer)
    }

    /// Semi-axes `(a, b)` of the inner boundary ellipse.
    pub fn inner_semi_axes(&self) -> (f64, f64) {
        semi_axes(self.inner)
    }

    /// Area `pi (a_v b_v - a_R b_R)` between the two ellipses.
    pub fn area(&self) -> f64 {
        let (av, bv) = self.outer_semi_axes();
        let (ar, br) = self.inner_semi_axes();
        std::f64::consts::PI * (av * bv - ar * br)
    }
}

/// Semi-axes `((r + 1/r)/2, (r - 1/r)/2)` of the image of `|w| = r`.
pub fn semi_axes(r: f64) -> (f64, f64) {
    (0.5 * (r + 1.0 / r), 0.5 * (r - 1.0 / r))
}

/// `z = (w + 1/w) / 2`.
pub fn joukowski_forward(w: OmegaCoord) -> ComplexPoint {
    let (a, b) = semi_axes(w.r);
    let (s, c) = w.theta.sin_cos();
    ComplexPoint::new(a * c, b * s)
}

/// Complex form of the forward map, for callers that already hold `w`.
pub fn joukowski(w: Complex64) -> Complex64 {
    0.5 * (w + w.inv())
}

/// True when `z` lies on the branch cut `[-1, 1]` within [`CUT_TOL`].
pub fn on_cut(z: ComplexPoint) -> bool {
    z.y.abs() <= CUT_TOL && z.x.abs() <= 1.0
}

/// Inverse Joukowski map: the unique `w` with `|w| > 1` and `(w + 1/w)/2 = z`.
pub fn joukowski_inverse(z: ComplexPoint) -> Result<OmegaCoord> {
    if on_cut(z) {
        return Err(Error::Domain(format!(
            "point ({}, {}) lies on the branch cut [-1, 1]",
            z.x, z.y
        )));
    }
    let zc = z.to_complex();
    // sqrt(z-1) sqrt(z+1) keeps the square root continuous off the cut.
    let s = (zc - 1.0).sqrt() * (zc + 1.0).sqrt();
    let a = zc + s;
    let b = zc - s;
    let w = if a.norm() >= b.norm() { a } else { b };
    if (w.norm() - 1.0).abs() <= CUT_TOL {
        return Err(Error::Domain(format!(
            "point ({}, {}) maps to |w| = 1",
            z.x, z.y
        )));
    }
    OmegaCoord::from_omega(w)
}

/// Area element `d(x,y)/d(r,theta) = |w - 1/w|^2 / (4 r)`.
pub fn jacobian(w: OmegaCoord) -> f64 {
    let om = w.omega();
    (om - om.inv()).norm_sqr() / (4.0 * w.r)
}

/// Jacobian written through `(r, theta)` only: `(r^2 + r^-2 - 2 cos 2 theta) / (4 r)`.
pub(crate) fn jacobian_rt(r: f64, theta: f64) -> f64 {
    (r * r + 1.0 / (r * r) - 2.0 * (2.0 * theta).cos()) / (4.0 * r)
}

/// Membership in the closed elliptic annulus `R <= r <= v`.
pub fn contains(spec: &AnnulusSpec, z: ComplexPoint) -> bool {
    match joukowski_inverse(z) {
        Ok(w) => in_radial_range(spec, w.r),
        Err(_) => false,
    }
}

pub(crate) fn in_radial_range(spec: &AnnulusSpec, r: f64) -> bool {
    r >= spec.inner * (1.0 - BOUNDARY_SLACK) && r <= spec.outer * (1.0 + BOUNDARY_SLACK)
}
