//! Rational maps and Blaschke products in coefficient form.

mod blaschke;
mod factor;
mod linearizer;
mod polynomial;
mod rational;
mod roots;

use num_complex::Complex64;
use thiserror::Error;

use crate::geometry::SpherePoint;
use crate::mobius::{MobiusError, MobiusTransform};

pub use blaschke::{is_power_conjugate, BlaschkeProduct, DiskAction};
pub use factor::{enumerate_pairings, factor_rational, MobiusFactor, MobiusFactorization, Pairing};
pub use linearizer::{linearizer_series, PowerSeries};
pub use polynomial::Polynomial;
pub use rational::{critical_points, CriticalPoint, RationalMap};
pub use roots::{find_roots as polynomial_roots, roots_with_multiplicity, Root, CLUSTER_RADIUS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MapError {
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("map has degree {0}, need at least {1}")]
    DegreeTooLow(usize, usize),
    #[error("numerator root {zero} and denominator root {pole} coincide")]
    NotReduced { zero: Complex64, pole: Complex64 },
    #[error("Blaschke zero {0} is not inside the unit disk")]
    ZeroOutsideDisk(Complex64),
    #[error("Blaschke product needs at least one zero")]
    EmptyBlaschke,
    #[error("root finder did not converge, best backward error {residual:e}")]
    RootFinding { residual: f64 },
    #[error("invalid pairing: {0}")]
    BadPairing(String),
    #[error("point is not fixed: R(z0) - z0 = {0:e}")]
    NotFixed(f64),
    #[error("fixed point is not repelling, |multiplier| = {0}")]
    NotRepelling(f64),
    #[error("map does not preserve the unit circle")]
    NotCirclePreserving,
    #[error("point at infinity is not supported here")]
    Infinity,
    #[error(transparent)]
    Mobius(#[from] MobiusError),
}

/// Anything that acts on the Riemann sphere.
pub trait SphereMap {
    fn eval(&self, z: SpherePoint) -> SpherePoint;
}

impl SphereMap for MobiusTransform {
    fn eval(&self, z: SpherePoint) -> SpherePoint {
        self.apply(z)
    }
}

impl<T: SphereMap + ?Sized> SphereMap for &T {
    fn eval(&self, z: SpherePoint) -> SpherePoint {
        (**self).eval(z)
    }
}

/// Adapts a closure to [`SphereMap`].
pub struct FnMap<F>(pub F);

impl<F: Fn(SpherePoint) -> SpherePoint> SphereMap for FnMap<F> {
    fn eval(&self, z: SpherePoint) -> SpherePoint {
        (self.0)(z)
    }
}
