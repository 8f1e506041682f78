use num_complex::Complex64;

use super::polynomial::Polynomial;
use super::rational::{critical_points, RationalMap};
use super::roots::roots_with_multiplicity;
use super::{MapError, SphereMap};
use crate::geometry::SpherePoint;

/// Zeros must satisfy `|a| < 1 − ZERO_MARGIN`.
pub const ZERO_MARGIN: f64 = 1e-12;

/// `B(z) = e^{iθ} ∏ (z − aᵢ)/(1 − āᵢz)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlaschkeProduct {
    theta: f64,
    zeros: Vec<Complex64>,
}

/// How a circle-preserving rational map acts on the unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiskAction {
    /// Maps Δ to itself: a Blaschke product.
    Preserve,
    /// Maps Δ to its exterior: the reciprocal of a Blaschke product.
    Swap,
}

impl BlaschkeProduct {
    pub fn new(theta: f64, zeros: Vec<Complex64>) -> Result<Self, MapError> {
        if zeros.is_empty() {
            return Err(MapError::EmptyBlaschke);
        }
        if let Some(&a) = zeros
            .iter()
            .find(|a| !(a.norm() < 1.0 - ZERO_MARGIN) || !a.is_finite())
        {
            return Err(MapError::ZeroOutsideDisk(a));
        }
        Ok(BlaschkeProduct { theta, zeros })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    fn eval_finite(&self, z: Complex64) -> SpherePoint {
        let mut acc = Complex64::from_polar(1.0, self.theta);
        for &a in &self.zeros {
            let den = Complex64::new(1.0, 0.0) - a.conj() * z;
            if den.norm() == 0.0 {
                return SpherePoint::Infinity;
            }
            acc *= (z - a) / den;
        }
        SpherePoint::from_complex(acc)
    }

    pub fn eval(&self, z: SpherePoint) -> SpherePoint {
        match z.finite() {
            Some(w) if w.norm() <= 1.0 => self.eval_finite(w),
            // B(1/z̄) = 1/conj B(z) keeps the exterior as accurate as the disk.
            _ => self.eval(z.reflect_unit_circle()).reflect_unit_circle(),
        }
    }

    pub fn to_rational(&self) -> RationalMap {
        let one = Complex64::new(1.0, 0.0);
        let num = Polynomial::from_roots(&self.zeros, Complex64::from_polar(1.0, self.theta));
        let den = self
            .zeros
            .iter()
            .fold(Polynomial::constant(one), |acc, &a| {
                &acc * &Polynomial::new(vec![one, -a.conj()])
            });
        RationalMap::from_parts(num, den)
    }

    /// `self ∘ inner`, again a Blaschke product.
    pub fn compose(&self, inner: &BlaschkeProduct) -> Result<BlaschkeProduct, MapError> {
        let r = inner.to_rational();
        let mut zeros = Vec::with_capacity(self.degree() * inner.degree());
        for &a in &self.zeros {
            let p = r.num() - &r.den().scale(a);
            zeros.extend(roots_with_multiplicity(&p)?);
        }
        let untwisted = BlaschkeProduct::new(0.0, zeros)?;
        let one = SpherePoint::new(1.0, 0.0);
        let want = self.eval(inner.eval(one)).finite().ok_or(MapError::Infinity)?;
        let got = untwisted.eval(one).finite().ok_or(MapError::Infinity)?;
        Ok(BlaschkeProduct {
            theta: (want / got).arg(),
            ..untwisted
        })
    }

    /// Recovers `B` from a rational map that preserves or swaps the disk.
    pub fn from_rational(r: &RationalMap) -> Result<(BlaschkeProduct, DiskAction), MapError> {
        let d = r.degree();
        let zeros = r.zeros()?;
        let poles = r.poles()?;
        let inside = |v: &[Complex64]| v.len() == d && v.iter().all(|a| a.norm() < 1.0 - ZERO_MARGIN);
        let (candidate, action) = if inside(&zeros) {
            (zeros, DiskAction::Preserve)
        } else if inside(&poles) {
            (poles, DiskAction::Swap)
        } else {
            return Err(MapError::NotCirclePreserving);
        };
        let b0 = BlaschkeProduct::new(0.0, candidate)?;
        let target = |z: SpherePoint| -> Option<Complex64> {
            let v = r.eval(z);
            match action {
                DiskAction::Preserve => v.finite(),
                DiskAction::Swap => v.finite().map(|w| w.inv()),
            }
        };
        let one = SpherePoint::new(1.0, 0.0);
        let ratio = target(one).ok_or(MapError::NotCirclePreserving)?
            / b0.eval(one).finite().ok_or(MapError::NotCirclePreserving)?;
        if (ratio.norm() - 1.0).abs() > 1e-8 {
            return Err(MapError::NotCirclePreserving);
        }
        let b = BlaschkeProduct {
            theta: ratio.arg(),
            ..b0
        };
        for k in 0..16 {
            let z = SpherePoint::from_complex(Complex64::from_polar(
                if k % 2 == 0 { 1.0 } else { 0.5 },
                0.37 + k as f64 * 0.41,
            ));
            let (Some(want), Some(got)) = (target(z), b.eval(z).finite()) else {
                return Err(MapError::NotCirclePreserving);
            };
            if (want - got).norm() > 1e-8 * want.norm().max(1.0) {
                return Err(MapError::NotCirclePreserving);
            }
        }
        Ok((b, action))
    }

    pub fn is_power_conjugate(&self) -> Result<bool, MapError> {
        is_power_conjugate(self)
    }
}

impl SphereMap for BlaschkeProduct {
    fn eval(&self, z: SpherePoint) -> SpherePoint {
        BlaschkeProduct::eval(self, z)
    }
}

/// Whether `B = g₁ ∘ zᵈ ∘ g₂` for disk automorphisms `gᵢ`: exactly one
/// critical point in Δ, of multiplicity `d − 1`.
pub fn is_power_conjugate(b: &BlaschkeProduct) -> Result<bool, MapError> {
    let d = b.degree();
    if d < 2 {
        return Err(MapError::DegreeTooLow(d, 2));
    }
    let inside: Vec<_> = critical_points(&b.to_rational())?
        .into_iter()
        .filter(|c| c.point.finite().is_some_and(|z| z.norm() < 1.0))
        .collect();
    Ok(inside.len() == 1 && inside[0].multiplicity == d - 1)
}
