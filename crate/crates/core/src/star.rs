//! The extended exponential, the ⋆-product and the quadratic family.

use std::ops::Add;

use num_complex::Complex64;
use thiserror::Error;

use crate::geometry::{HalfSpacePoint, SpherePoint};
use crate::maps::{MobiusFactorization, SphereMap};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StarError {
    #[error("height {0} is negative")]
    NegativeHeight(f64),
    #[error("point lies on the vertical axis and has no logarithm")]
    OnAxis,
    #[error("the point at infinity has no logarithm")]
    Infinity,
    #[error("0 ⋆ ∞ is undefined")]
    ZeroTimesInfinity,
    #[error("vertical scale must be positive, got {0}")]
    BadScale(f64),
}

/// Coordinates `(x, y, t)` on the domain of Êxp.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpCoords {
    x: f64,
    y: f64,
    t: f64,
}

impl ExpCoords {
    pub fn new(x: f64, y: f64, t: f64) -> Result<Self, StarError> {
        if !(t >= 0.0) {
            return Err(StarError::NegativeHeight(t));
        }
        Ok(ExpCoords { x, y, t })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn scale(&self, k: f64) -> Result<Self, StarError> {
        ExpCoords::new(k * self.x, k * self.y, k * self.t)
    }
}

impl Add for ExpCoords {
    type Output = ExpCoords;
    fn add(self, rhs: ExpCoords) -> ExpCoords {
        ExpCoords {
            x: self.x + rhs.x,
            y: self.y + rhs.y,
            t: self.t + rhs.t,
        }
    }
}

/// `(sech t · eˣ cos y, sech t · eˣ sin y, tanh t · eˣ)`.
pub fn exp_hat(c: ExpCoords) -> HalfSpacePoint {
    let r = c.x.exp();
    let (s, co) = c.y.sin_cos();
    let sech = 1.0 / c.t.cosh();
    HalfSpacePoint::from_parts(Complex64::new(sech * r * co, sech * r * s), c.t.tanh() * r)
}

/// Principal logarithm of Êxp, `y ∈ (−π, π]`.
pub fn exp_hat_inverse(p: HalfSpacePoint) -> Result<ExpCoords, StarError> {
    let HalfSpacePoint::Finite { z, t } = p else {
        return Err(StarError::Infinity);
    };
    let horizontal = z.norm();
    if horizontal == 0.0 {
        return Err(StarError::OnAxis);
    }
    let mut y = z.im.atan2(z.re);
    if y == -std::f64::consts::PI {
        y = std::f64::consts::PI;
    }
    Ok(ExpCoords {
        x: p.norm().ln(),
        y,
        t: (t / horizontal).asinh(),
    })
}

fn on_axis(p: HalfSpacePoint) -> Option<f64> {
    match p {
        HalfSpacePoint::Finite { z, t } if z.re == 0.0 && z.im == 0.0 && t > 0.0 => Some(t),
        _ => None,
    }
}

/// The commutative product on the closed upper half-space.
pub fn star_product(a: HalfSpacePoint, b: HalfSpacePoint) -> Result<HalfSpacePoint, StarError> {
    let (na, nb) = (a.norm(), b.norm());
    if (na == 0.0 && b.is_infinity()) || (nb == 0.0 && a.is_infinity()) {
        return Err(StarError::ZeroTimesInfinity);
    }
    if a.is_infinity() || b.is_infinity() {
        return Ok(HalfSpacePoint::Infinity);
    }
    if na == 0.0 || nb == 0.0 {
        return Ok(HalfSpacePoint::origin());
    }
    if on_axis(a).is_some() || on_axis(b).is_some() {
        return Ok(HalfSpacePoint::from_parts(Complex64::new(0.0, 0.0), na * nb));
    }
    match (a, b) {
        (HalfSpacePoint::Finite { z: za, t: ta }, HalfSpacePoint::Finite { z: zb, t: tb })
            if ta == 0.0 && tb == 0.0 =>
        {
            Ok(HalfSpacePoint::from_parts(za * zb, 0.0))
        }
        _ => Ok(exp_hat(exp_hat_inverse(a)? + exp_hat_inverse(b)?)),
    }
}

/// `Q̂(p) = p ⋆ p` in closed form.
pub fn q_hat(p: HalfSpacePoint) -> HalfSpacePoint {
    let HalfSpacePoint::Finite { z, t } = p else {
        return HalfSpacePoint::Infinity;
    };
    let (x, y) = (z.re, z.im);
    let s = x * x + y * y + t * t;
    if s == 0.0 {
        return HalfSpacePoint::origin();
    }
    let a = s / (s + t * t);
    HalfSpacePoint::from_parts(
        Complex64::new(a * (x * x - y * y), a * (2.0 * x * y)),
        a * (2.0 * t * s.sqrt()),
    )
}

/// `Q̂_c = T_c ∘ Q̂` with `T_c` the horizontal translation by `c`.
pub fn q_hat_c(c: Complex64, p: HalfSpacePoint) -> HalfSpacePoint {
    match q_hat(p) {
        HalfSpacePoint::Finite { z, t } => HalfSpacePoint::from_parts(z + c, t),
        HalfSpacePoint::Infinity => HalfSpacePoint::Infinity,
    }
}

/// ⋆-product of the Poincaré extensions of the factors.
pub fn product_extension(
    f: &MobiusFactorization,
    p: HalfSpacePoint,
) -> Result<HalfSpacePoint, StarError> {
    let mut factors = f.factors().iter();
    let first = factors
        .next()
        .expect("factorizations have at least one factor");
    factors.try_fold(first.map.extend(p), |acc, g| star_product(acc, g.map.extend(p)))
}

/// `(z, t) ↦ (F(z), λt)`.
pub fn vertical_extension<F: SphereMap + ?Sized>(
    f: &F,
    lambda: f64,
    p: HalfSpacePoint,
) -> Result<HalfSpacePoint, StarError> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(StarError::BadScale(lambda));
    }
    let HalfSpacePoint::Finite { z, t } = p else {
        return Ok(HalfSpacePoint::from_sphere(f.eval(SpherePoint::Infinity)));
    };
    Ok(match f.eval(SpherePoint::Finite(z)) {
        SpherePoint::Finite(w) => HalfSpacePoint::from_parts(w, lambda * t),
        SpherePoint::Infinity => HalfSpacePoint::Infinity,
    })
}
