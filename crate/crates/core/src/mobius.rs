//! Möbius transformations of the Riemann sphere, their Poincaré extensions,
//! and the rotations `τ_φ` of space about the unit circle together with the
//! open-book decomposition of the closed half-space into the pages
//! `τ_φ(Δ)`, `0 ≤ φ ≤ π`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use thiserror::Error;

use crate::geometry::{
    chart_to_ball, chart_to_half_space, invert_sqrt2, BallPoint, HalfSpacePoint, SpacePoint,
    SpherePoint,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MobiusError {
    #[error("degenerate transformation: ad - bc = 0")]
    Degenerate,
    #[error("non-finite coefficient")]
    NonFinite,
    #[error("the image leaves the closed upper half-space")]
    LeavesHalfSpace,
    #[error("the point at infinity has no open-book coordinates; it is the φ = π image of 0")]
    InfinityHasNoPage,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `z ↦ (az + b)/(cz + d)`, stored with `ad − bc = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusTransform {
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
}

impl MobiusTransform {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self, MobiusError> {
        if ![a, b, c, d].iter().all(|w| w.re.is_finite() && w.im.is_finite()) {
            return Err(MobiusError::NonFinite);
        }
        let det = a * d - b * c;
        let size = [a, b, c, d].iter().map(|w| w.norm()).fold(0.0, f64::max);
        if det.norm() <= 1e-300 || det.norm() <= 1e-14 * size * size {
            return Err(MobiusError::Degenerate);
        }
        let k = det.sqrt().inv();
        Ok(MobiusTransform {
            a: a * k,
            b: b * k,
            c: c * k,
            d: d * k,
        })
    }

    /// `z ↦ k(z − zero)/(z − pole)`, dropping the factor whose point is ∞.
    /// Built so that `zero ↦ 0` and `pole ↦ ∞` hold exactly in floating point.
    pub fn with_zero_and_pole(k: Complex64, zero: SpherePoint, pole: SpherePoint) -> Result<Self, MobiusError> {
        if !(k.re.is_finite() && k.im.is_finite()) {
            return Err(MobiusError::NonFinite);
        }
        if k == ZERO || zero == pole {
            return Err(MobiusError::Degenerate);
        }
        let (a, b, c, d) = match (zero, pole) {
            (SpherePoint::Finite(z), SpherePoint::Finite(p)) => {
                let det = k * (z - p);
                if det.norm() <= 1e-300 {
                    return Err(MobiusError::Degenerate);
                }
                let s = det.sqrt().inv();
                let (a, c) = (k * s, s);
                (a, -(a * z), c, -(c * p))
            }
            (SpherePoint::Finite(z), SpherePoint::Infinity) => {
                let a = k * k.sqrt().inv();
                (a, -(a * z), ZERO, k.sqrt().inv())
            }
            (SpherePoint::Infinity, SpherePoint::Finite(p)) => {
                let c = (-k).sqrt().inv();
                (ZERO, k * c, c, -(c * p))
            }
            (SpherePoint::Infinity, SpherePoint::Infinity) => return Err(MobiusError::Degenerate),
        };
        if ![a, b, c, d].iter().all(|w| w.re.is_finite() && w.im.is_finite()) {
            return Err(MobiusError::NonFinite);
        }
        Ok(MobiusTransform { a, b, c, d })
    }

    pub fn identity() -> Self {
        MobiusTransform { a: ONE, b: ZERO, c: ZERO, d: ONE }
    }

    /// `z ↦ z + w`.
    pub fn translation(w: Complex64) -> Self {
        MobiusTransform { a: ONE, b: w, c: ZERO, d: ONE }
    }

    /// `z ↦ λz`.
    pub fn scaling(lambda: Complex64) -> Result<Self, MobiusError> {
        Self::new(lambda, ZERO, ZERO, ONE)
    }

    /// `z ↦ 1/z`.
    pub fn reciprocal() -> Self {
        Self::new(ZERO, ONE, ONE, ZERO).expect("1/z is invertible")
    }

    /// `z ↦ e^{iθ}(z − a)/(1 − āz)` for `|a| ≠ 1`.
    pub fn disk_automorphism(theta: f64, a: Complex64) -> Result<Self, MobiusError> {
        let rot = Complex64::from_polar(1.0, theta);
        Self::new(rot, -rot * a, -a.conj(), ONE)
    }

    pub fn coefficients(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn apply(&self, z: SpherePoint) -> SpherePoint {
        match z {
            SpherePoint::Infinity => {
                if self.c == ZERO {
                    SpherePoint::Infinity
                } else {
                    SpherePoint::from_complex(self.a / self.c)
                }
            }
            SpherePoint::Finite(z) => {
                let den = self.c * z + self.d;
                if den == ZERO {
                    SpherePoint::Infinity
                } else {
                    SpherePoint::from_complex((self.a * z + self.b) / den)
                }
            }
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MobiusTransform) -> MobiusTransform {
        let a = self.a * other.a + self.b * other.c;
        let b = self.a * other.b + self.b * other.d;
        let c = self.c * other.a + self.d * other.c;
        let d = self.c * other.b + self.d * other.d;
        // det is 1 up to rounding; renormalise so errors do not accumulate.
        MobiusTransform::new(a, b, c, d).expect("product of invertible matrices")
    }

    pub fn inverse(&self) -> MobiusTransform {
        MobiusTransform {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// The Poincaré extension to the closed upper half-space.
    pub fn extend(&self, p: HalfSpacePoint) -> HalfSpacePoint {
        match self.extend_space(p.into()) {
            SpacePoint::Infinity => HalfSpacePoint::Infinity,
            SpacePoint::Finite(v) => HalfSpacePoint::from_parts(Complex64::new(v[0], v[1]), v[2]),
        }
    }

    /// The Poincaré extension as a Möbius map of `ℝ³ ∪ {∞}` (the lower
    /// half-space is mapped by the mirror formula).
    pub fn extend_space(&self, p: SpacePoint) -> SpacePoint {
        let v = match p {
            SpacePoint::Infinity => {
                return match self.apply(SpherePoint::Infinity) {
                    SpherePoint::Infinity => SpacePoint::Infinity,
                    SpherePoint::Finite(w) => SpacePoint::Finite([w.re, w.im, 0.0]),
                }
            }
            SpacePoint::Finite(v) => v,
        };
        let (z, t) = (Complex64::new(v[0], v[1]), v[2]);
        if t == 0.0 {
            return match self.apply(SpherePoint::Finite(z)) {
                SpherePoint::Infinity => SpacePoint::Infinity,
                SpherePoint::Finite(w) => SpacePoint::Finite([w.re, w.im, 0.0]),
            };
        }
        let czd = self.c * z + self.d;
        let t2 = t * t;
        let den = czd.norm_sqr() + self.c.norm_sqr() * t2;
        let w = ((self.a * z + self.b) * czd.conj() + self.a * self.c.conj() * t2) / den;
        SpacePoint::Finite([w.re, w.im, t / den])
    }

    /// The Poincaré extension in the ball model, read through the
    /// stereographic charts on the boundary sphere.
    pub fn extend_ball(&self, v: BallPoint) -> BallPoint {
        chart_to_ball(self.extend(chart_to_half_space(v)))
    }

    /// Whether `γ(S¹) = S¹`, decided on the images of `1`, `i` and `−1`.
    pub fn preserves_unit_circle(&self) -> bool {
        [ONE, Complex64::new(0.0, 1.0), -ONE].iter().all(|&z| match self.apply(SpherePoint::Finite(z)) {
            SpherePoint::Finite(w) => (w.norm() - 1.0).abs() <= 1e-10,
            SpherePoint::Infinity => false,
        })
    }

    /// For a circle-preserving map, whether it exchanges the unit disk and
    /// its exterior (decided on the image of 0).
    pub fn swaps_disk(&self) -> bool {
        match self.apply(SpherePoint::Finite(ZERO)) {
            SpherePoint::Infinity => true,
            SpherePoint::Finite(w) => w.norm() > 1.0,
        }
    }
}

/// Open-book coordinates of a point of the closed half-space: the page
/// angle `φ ∈ [0, π]` and the point `z` of the closed unit disk with
/// `τ_φ(z) = p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpenBookCoords {
    pub phi: f64,
    pub z: Complex64,
}

/// Centre of the inversion that straightens the unit circle into the
/// `y`-axis.
const BINDING_POLE: [f64; 3] = [1.0, 0.0, 0.0];

fn rotate_about_y(phi: f64, v: [f64; 3]) -> [f64; 3] {
    // exact half-turn so that τ_π(0) lands on ∞ rather than near it
    let (s, c) = if phi == PI { (0.0, -1.0) } else { phi.sin_cos() };
    [v[0] * c + v[2] * s, v[1], -v[0] * s + v[2] * c]
}

/// `τ_φ` on all of `ℝ³ ∪ {∞}`: inversion in the sphere of radius `√2`
/// about `(1, 0, 0)` (which sends the unit circle to the `y`-axis and the
/// unit disk to the half-plane `x < 0`), a rotation by `φ` about the
/// `y`-axis, and the inversion again.
pub fn tau_phi_space(phi: f64, p: SpacePoint) -> SpacePoint {
    let phi = phi.rem_euclid(TAU);
    if phi == 0.0 {
        return p;
    }
    match invert_sqrt2(BINDING_POLE, p) {
        SpacePoint::Infinity => SpacePoint::Infinity,
        SpacePoint::Finite(q) => invert_sqrt2(BINDING_POLE, SpacePoint::Finite(rotate_about_y(phi, q))),
    }
}

/// `τ_φ` on the closed half-space. Fails when the image lies below the
/// boundary plane (as happens for points of the exterior pages).
pub fn tau_phi(phi: f64, p: HalfSpacePoint) -> Result<HalfSpacePoint, MobiusError> {
    let scale = match p {
        HalfSpacePoint::Finite { .. } => 1.0 + p.norm(),
        HalfSpacePoint::Infinity => 1.0,
    };
    tau_phi_space(phi, p.into())
        .to_half_space(1e-12 * scale)
        .ok_or(MobiusError::LeavesHalfSpace)
}

/// The open-book coordinates `(φ, z)` of `p`.
pub fn page_decompose(p: HalfSpacePoint) -> Result<OpenBookCoords, MobiusError> {
    let (z, t) = match p {
        HalfSpacePoint::Infinity => return Err(MobiusError::InfinityHasNoPage),
        HalfSpacePoint::Finite { z, t } => (z, t),
    };
    if t == 0.0 {
        let r = z.norm();
        return Ok(if r <= 1.0 {
            OpenBookCoords { phi: 0.0, z }
        } else {
            OpenBookCoords { phi: PI, z: z / z.norm_sqr() }
        });
    }
    // In the straightened picture the pages are half-planes bounded by the
    // y-axis; read off the angle there and rotate back onto the x < 0 half-plane.
    let q = match invert_sqrt2(BINDING_POLE, p.into()) {
        SpacePoint::Finite(q) => q,
        SpacePoint::Infinity => unreachable!("interior points are not the inversion centre"),
    };
    let phi = q[2].atan2(-q[0]);
    let x0 = -q[0].hypot(q[2]);
    let back = invert_sqrt2(BINDING_POLE, SpacePoint::Finite([x0, q[1], 0.0]));
    let w = match back {
        SpacePoint::Finite(v) => Complex64::new(v[0], v[1]),
        SpacePoint::Infinity => unreachable!("x0 < 0 keeps away from the inversion centre"),
    };
    let w = if w.norm() > 1.0 { w / w.norm() } else { w };
    Ok(OpenBookCoords { phi, z: w })
}

/// The point with open-book coordinates `c`.
pub fn page_point(c: OpenBookCoords) -> HalfSpacePoint {
    tau_phi(c.phi, HalfSpacePoint::boundary(c.z)).unwrap_or(HalfSpacePoint::Infinity)
}
