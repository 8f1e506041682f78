use std::f64::consts::PI;

use crate::geometry::{HalfSpacePoint, SpherePoint};
use crate::maps::{BlaschkeProduct, DiskAction, MapError, RationalMap};
use crate::mobius::{page_decompose, page_point, OpenBookCoords};

use super::ExtensionError;

/// A rational map that preserves or swaps the unit disk, written through a
/// Blaschke product `B` as `B` or `1/B`.
#[derive(Debug, Clone, PartialEq)]
pub struct OpenBookMap {
    blaschke: BlaschkeProduct,
    action: DiskAction,
}

impl OpenBookMap {
    pub fn new(blaschke: BlaschkeProduct, action: DiskAction) -> Self {
        OpenBookMap { blaschke, action }
    }

    pub fn from_rational(r: &RationalMap) -> Result<Self, MapError> {
        let (blaschke, action) = BlaschkeProduct::from_rational(r)?;
        Ok(OpenBookMap { blaschke, action })
    }

    pub fn blaschke(&self) -> &BlaschkeProduct {
        &self.blaschke
    }

    pub fn action(&self) -> DiskAction {
        self.action
    }

    pub fn eval_boundary(&self, z: SpherePoint) -> SpherePoint {
        let w = self.blaschke.eval(z);
        match self.action {
            DiskAction::Preserve => w,
            DiskAction::Swap => match w {
                SpherePoint::Infinity => SpherePoint::new(0.0, 0.0),
                SpherePoint::Finite(v) if v.norm() == 0.0 => SpherePoint::Infinity,
                SpherePoint::Finite(v) => SpherePoint::Finite(v.inv()),
            },
        }
    }

    /// `τ_φ(z) ↦ τ_φ(B(z))`; for `1/B` the page is turned over,
    /// `τ_φ(z) ↦ τ_{π−φ}(conj B(z))`.
    pub fn extend(&self, p: HalfSpacePoint) -> HalfSpacePoint {
        let page = match p {
            HalfSpacePoint::Infinity => OpenBookCoords {
                phi: PI,
                z: num_complex::Complex64::new(0.0, 0.0),
            },
            _ => page_decompose(p).expect("finite points have a page"),
        };
        let w = self
            .blaschke
            .eval(SpherePoint::Finite(page.z))
            .finite()
            .expect("Blaschke products map the closed disk to itself");
        let image = match self.action {
            DiskAction::Preserve => OpenBookCoords { phi: page.phi, z: w },
            DiskAction::Swap => OpenBookCoords {
                phi: PI - page.phi,
                z: w.conj(),
            },
        };
        page_point(image)
    }
}

/// Open-book extension of a Blaschke product.
pub fn open_book_extension(b: &BlaschkeProduct, p: HalfSpacePoint) -> HalfSpacePoint {
    OpenBookMap::new(b.clone(), DiskAction::Preserve).extend(p)
}

/// Open-book extension of a disk-preserving or disk-swapping rational map.
pub fn open_book_extension_rational(
    r: &RationalMap,
    p: HalfSpacePoint,
) -> Result<HalfSpacePoint, ExtensionError> {
    Ok(OpenBookMap::from_rational(r)?.extend(p))
}
