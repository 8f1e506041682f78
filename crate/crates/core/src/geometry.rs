//! Points of the Riemann sphere and of the two models of hyperbolic 3-space
//! (closed upper half-space and closed unit ball), the maps between them,
//! the hyperbolic metric and geodesic interpolation.

use num_complex::Complex64;
use thiserror::Error;

/// Tolerance on the norm of a vector handed to [`stereographic_project`].
pub const UNIT_NORM_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("expected a unit vector, got norm {0}")]
    NotUnit(f64),
    #[error("point is outside the closed unit ball (norm {0})")]
    OutsideBall(f64),
    #[error("negative or non-finite height t = {0}")]
    BadHeight(f64),
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("hyperbolic distance needs interior points")]
    NotInterior,
    #[error("interpolation parameter {0} is outside [0, 1]")]
    BadParameter(f64),
}

pub type Vec3 = [f64; 3];

pub(crate) fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn add(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub(crate) fn scale(s: f64, a: Vec3) -> Vec3 {
    [s * a[0], s * a[1], s * a[2]]
}

/// A point of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpherePoint {
    Finite(Complex64),
    Infinity,
}

impl SpherePoint {
    pub fn new(re: f64, im: f64) -> Self {
        SpherePoint::Finite(Complex64::new(re, im))
    }

    /// Non-finite complex values collapse onto `Infinity`.
    pub fn from_complex(z: Complex64) -> Self {
        if z.re.is_finite() && z.im.is_finite() {
            SpherePoint::Finite(z)
        } else {
            SpherePoint::Infinity
        }
    }

    pub fn finite(self) -> Option<Complex64> {
        match self {
            SpherePoint::Finite(z) => Some(z),
            SpherePoint::Infinity => None,
        }
    }

    pub fn is_infinity(self) -> bool {
        matches!(self, SpherePoint::Infinity)
    }

    /// The anti-holomorphic reflection `z ↦ 1/z̄` in the unit circle.
    pub fn reflect_unit_circle(self) -> Self {
        match self {
            SpherePoint::Infinity => SpherePoint::Finite(Complex64::new(0.0, 0.0)),
            SpherePoint::Finite(z) if z.re == 0.0 && z.im == 0.0 => SpherePoint::Infinity,
            SpherePoint::Finite(z) => SpherePoint::Finite(z / z.norm_sqr()),
        }
    }
}

impl From<Complex64> for SpherePoint {
    fn from(z: Complex64) -> Self {
        SpherePoint::from_complex(z)
    }
}

/// Chordal distance on the Riemann sphere (Euclidean distance of the lifts).
pub fn chordal_distance(a: SpherePoint, b: SpherePoint) -> f64 {
    norm(sub(stereographic_lift(a), stereographic_lift(b)))
}

/// A point of the closed upper half-space `{(x, y, t) : t ≥ 0} ∪ {∞}`.
///
/// The finite variant stores the boundary coordinate `z = x + iy` and the
/// height `t`; construct through [`HalfSpacePoint::new`] to have `t ≥ 0`
/// checked.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HalfSpacePoint {
    Finite { z: Complex64, t: f64 },
    Infinity,
}

impl HalfSpacePoint {
    pub fn new(x: f64, y: f64, t: f64) -> Result<Self, GeometryError> {
        if !(x.is_finite() && y.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        if !(t.is_finite() && t >= 0.0) {
            return Err(GeometryError::BadHeight(t));
        }
        Ok(HalfSpacePoint::Finite {
            z: Complex64::new(x, y),
            t,
        })
    }

    /// Builds a point from computed coordinates, flushing tiny negative
    /// heights from rounding to zero.
    pub(crate) fn from_parts(z: Complex64, t: f64) -> Self {
        if !(z.re.is_finite() && z.im.is_finite() && t.is_finite()) {
            return HalfSpacePoint::Infinity;
        }
        HalfSpacePoint::Finite { z, t: t.max(0.0) }
    }

    pub fn boundary(z: Complex64) -> Self {
        HalfSpacePoint::Finite { z, t: 0.0 }
    }

    pub fn origin() -> Self {
        HalfSpacePoint::boundary(Complex64::new(0.0, 0.0))
    }

    pub fn from_sphere(p: SpherePoint) -> Self {
        match p {
            SpherePoint::Finite(z) => HalfSpacePoint::boundary(z),
            SpherePoint::Infinity => HalfSpacePoint::Infinity,
        }
    }

    /// The boundary point as a point of the Riemann sphere, if it is one.
    pub fn to_sphere(self) -> Option<SpherePoint> {
        match self {
            HalfSpacePoint::Infinity => Some(SpherePoint::Infinity),
            HalfSpacePoint::Finite { z, t: 0.0 } => Some(SpherePoint::Finite(z)),
            _ => None,
        }
    }

    pub fn coords(self) -> Option<Vec3> {
        match self {
            HalfSpacePoint::Finite { z, t } => Some([z.re, z.im, t]),
            HalfSpacePoint::Infinity => None,
        }
    }

    pub fn from_coords(v: Vec3) -> Result<Self, GeometryError> {
        HalfSpacePoint::new(v[0], v[1], v[2])
    }

    pub fn is_infinity(self) -> bool {
        matches!(self, HalfSpacePoint::Infinity)
    }

    pub fn is_boundary(self) -> bool {
        match self {
            HalfSpacePoint::Finite { t, .. } => t == 0.0,
            HalfSpacePoint::Infinity => true,
        }
    }

    pub fn is_interior(self) -> bool {
        !self.is_boundary()
    }

    /// Euclidean norm; `+∞` for the point at infinity.
    pub fn norm(self) -> f64 {
        match self {
            HalfSpacePoint::Finite { z, t } => (z.norm_sqr() + t * t).sqrt(),
            HalfSpacePoint::Infinity => f64::INFINITY,
        }
    }

    pub fn height(self) -> Option<f64> {
        match self {
            HalfSpacePoint::Finite { t, .. } => Some(t),
            HalfSpacePoint::Infinity => None,
        }
    }
}

/// A point of the closed unit ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallPoint {
    v: Vec3,
}

/// Slack allowed on `‖v‖ ≤ 1` for points produced by arithmetic.
const BALL_SLACK: f64 = 1e-12;

impl BallPoint {
    pub fn new(v: Vec3) -> Result<Self, GeometryError> {
        if !v.iter().all(|c| c.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        let n = norm(v);
        if n > 1.0 + BALL_SLACK {
            return Err(GeometryError::OutsideBall(n));
        }
        Ok(BallPoint { v })
    }

    /// Computed points; radial rounding past the sphere is pulled back.
    pub(crate) fn from_raw(v: Vec3) -> Self {
        let n = norm(v);
        if n > 1.0 {
            BallPoint { v: scale(1.0 / n, v) }
        } else {
            BallPoint { v }
        }
    }

    pub fn origin() -> Self {
        BallPoint { v: [0.0; 3] }
    }

    pub fn coords(self) -> Vec3 {
        self.v
    }

    pub fn norm(self) -> f64 {
        norm(self.v)
    }

    pub fn is_boundary(self) -> bool {
        (self.norm() - 1.0).abs() <= BALL_SLACK
    }
}

/// A point of `ℝ³ ∪ {∞}`; used where Möbius maps of space leave the
/// upper half-space (the rotations about the unit circle do).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpacePoint {
    Finite(Vec3),
    Infinity,
}

impl SpacePoint {
    pub fn finite(self) -> Option<Vec3> {
        match self {
            SpacePoint::Finite(v) => Some(v),
            SpacePoint::Infinity => None,
        }
    }

    /// Euclidean distance with both-infinite treated as equal.
    pub fn distance(self, other: SpacePoint) -> f64 {
        match (self, other) {
            (SpacePoint::Finite(a), SpacePoint::Finite(b)) => norm(sub(a, b)),
            (SpacePoint::Infinity, SpacePoint::Infinity) => 0.0,
            _ => f64::INFINITY,
        }
    }

    /// Back into the closed upper half-space, if the point lies there up to
    /// `tol` in height.
    pub fn to_half_space(self, tol: f64) -> Option<HalfSpacePoint> {
        match self {
            SpacePoint::Infinity => Some(HalfSpacePoint::Infinity),
            SpacePoint::Finite(v) if v[2] >= -tol => {
                Some(HalfSpacePoint::from_parts(Complex64::new(v[0], v[1]), v[2]))
            }
            SpacePoint::Finite(_) => None,
        }
    }
}

impl From<HalfSpacePoint> for SpacePoint {
    fn from(p: HalfSpacePoint) -> Self {
        match p {
            HalfSpacePoint::Finite { z, t } => SpacePoint::Finite([z.re, z.im, t]),
            HalfSpacePoint::Infinity => SpacePoint::Infinity,
        }
    }
}

/// Inversion of `ℝ³ ∪ {∞}` in the sphere of radius `√2` about `center`.
pub(crate) fn invert_sqrt2(center: Vec3, p: SpacePoint) -> SpacePoint {
    match p {
        SpacePoint::Infinity => SpacePoint::Finite(center),
        SpacePoint::Finite(v) => {
            let d = sub(v, center);
            let r2 = dot(d, d);
            if r2 == 0.0 {
                SpacePoint::Infinity
            } else {
                SpacePoint::Finite(add(center, scale(2.0 / r2, d)))
            }
        }
    }
}

/// Stereographic lift of `ℂ̂` onto the unit sphere: `0` to the south pole,
/// `∞` to the north pole, the unit circle onto the equator.
pub fn stereographic_lift(z: SpherePoint) -> Vec3 {
    match z {
        SpherePoint::Infinity => [0.0, 0.0, 1.0],
        SpherePoint::Finite(z) => {
            let r2 = z.norm_sqr();
            let d = r2 + 1.0;
            [2.0 * z.re / d, 2.0 * z.im / d, (r2 - 1.0) / d]
        }
    }
}

/// Inverse of [`stereographic_lift`].
pub fn stereographic_project(p: Vec3) -> Result<SpherePoint, GeometryError> {
    let n = norm(p);
    if !n.is_finite() || (n - 1.0).abs() > UNIT_NORM_TOL {
        return Err(GeometryError::NotUnit(n));
    }
    let [x, y, z] = p;
    if z <= 0.0 {
        return Ok(SpherePoint::Finite(Complex64::new(x, y) / (1.0 - z)));
    }
    // (X + iY)/(1 − Z) = (1 + Z)/(X − iY) on the sphere; no cancellation near the north pole.
    let w = Complex64::new(x, -y);
    if w.re == 0.0 && w.im == 0.0 {
        return Ok(SpherePoint::Infinity);
    }
    Ok(SpherePoint::from_complex(Complex64::new(1.0 + z, 0.0) / w))
}

const SOUTH: Vec3 = [0.0, 0.0, -1.0];

/// The fixed isometry from the ball to the half-space: inversion in the
/// sphere of radius `√2` centred at the south pole. It fixes the equator
/// pointwise and sends the south pole to `∞`.
pub fn ball_to_half_space(v: BallPoint) -> HalfSpacePoint {
    invert_sqrt2(SOUTH, SpacePoint::Finite(v.v))
        .to_half_space(f64::INFINITY)
        .expect("inversion maps the ball into the upper half-space")
}

/// Inverse of [`ball_to_half_space`] (the same involution).
pub fn half_space_to_ball(p: HalfSpacePoint) -> BallPoint {
    match invert_sqrt2(SOUTH, p.into()) {
        SpacePoint::Finite(v) => BallPoint::from_raw(v),
        SpacePoint::Infinity => unreachable!("south pole is the image of infinity"),
    }
}

/// Inversion in the unit sphere, `p ↦ p/‖p‖²`; restricted to the boundary
/// plane it is `z ↦ 1/z̄`.
pub(crate) fn invert_unit_sphere(p: HalfSpacePoint) -> HalfSpacePoint {
    match p {
        HalfSpacePoint::Infinity => HalfSpacePoint::origin(),
        HalfSpacePoint::Finite { z, t } => {
            let r2 = z.norm_sqr() + t * t;
            if r2 == 0.0 {
                HalfSpacePoint::Infinity
            } else {
                HalfSpacePoint::from_parts(z / r2, t / r2)
            }
        }
    }
}

/// Isometry from the ball to the half-space whose boundary restriction is
/// [`stereographic_project`]. Ball-model constructions that act on the
/// sphere through the stereographic charts are moved to the half-space with
/// this map so that both models see the same boundary map.
pub fn chart_to_half_space(v: BallPoint) -> HalfSpacePoint {
    invert_unit_sphere(ball_to_half_space(v))
}

/// Inverse of [`chart_to_half_space`].
pub fn chart_to_ball(p: HalfSpacePoint) -> BallPoint {
    half_space_to_ball(invert_unit_sphere(p))
}

/// Hyperbolic distance in the upper half-space.
pub fn hyperbolic_distance(p: HalfSpacePoint, q: HalfSpacePoint) -> Result<f64, GeometryError> {
    match (p, q) {
        (HalfSpacePoint::Finite { z: z1, t: t1 }, HalfSpacePoint::Finite { z: z2, t: t2 })
            if t1 > 0.0 && t2 > 0.0 =>
        {
            // 2 asinh(‖p − q‖ / (2√(t₁t₂))), the stable form of the arcosh formula.
            let chord = ((z1 - z2).norm_sqr() + (t1 - t2) * (t1 - t2)).sqrt();
            Ok(2.0 * (chord / (2.0 * (t1 * t2).sqrt())).asinh())
        }
        _ => Err(GeometryError::NotInterior),
    }
}

/// Hyperbolic distance in the ball model.
pub fn ball_distance(a: BallPoint, b: BallPoint) -> Result<f64, GeometryError> {
    let (na, nb) = (1.0 - dot(a.v, a.v), 1.0 - dot(b.v, b.v));
    if na <= 0.0 || nb <= 0.0 {
        return Err(GeometryError::NotInterior);
    }
    let chord = norm(sub(a.v, b.v));
    Ok(2.0 * (chord / (na * nb).sqrt()).asinh())
}

/// `sinh(k·d)/sinh(d)`, continuous at `d = 0`.
fn sinh_ratio(k: f64, d: f64) -> f64 {
    if d < 1e-8 {
        k
    } else {
        (k * d).sinh() / d.sinh()
    }
}

/// The point on the geodesic segment `[p, q]` at distance `λ·d(p, q)` from
/// `p`.
///
/// Computed in hyperboloid coordinates, where the segment is
/// `(sinh((1−λ)d) P + sinh(λd) Q)/sinh d`; of those coordinates only
/// `1/t` and `z/t` are needed to recover the point.
pub fn geodesic_interpolate(
    p: HalfSpacePoint,
    q: HalfSpacePoint,
    lambda: f64,
) -> Result<HalfSpacePoint, GeometryError> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(GeometryError::BadParameter(lambda));
    }
    let d = hyperbolic_distance(p, q)?;
    let (HalfSpacePoint::Finite { z: z1, t: t1 }, HalfSpacePoint::Finite { z: z2, t: t2 }) = (p, q)
    else {
        unreachable!("distance succeeded on finite points")
    };
    if lambda == 0.0 {
        return Ok(p);
    }
    if lambda == 1.0 {
        return Ok(q);
    }
    let a = sinh_ratio(1.0 - lambda, d);
    let b = sinh_ratio(lambda, d);
    let u = a / t1 + b / t2;
    let w = z1 * (a / t1) + z2 * (b / t2);
    Ok(HalfSpacePoint::from_parts(w / u, 1.0 / u))
}
