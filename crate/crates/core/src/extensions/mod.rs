//! Extension constructions beyond the ⋆-product: radial, open-book,
//! visual and conformal-barycentric, plus the comparison tools.

mod barycenter;
mod open_book;
mod radial;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::geometry::{
    chart_to_ball, chart_to_half_space, geodesic_interpolate, hyperbolic_distance, GeometryError,
    HalfSpacePoint, SpherePoint,
};
use crate::maps::{factor_rational, BlaschkeProduct, MapError, MobiusFactorization, RationalMap};
use crate::mobius::{MobiusError, MobiusTransform};
use crate::star::{product_extension, q_hat_c, vertical_extension, StarError};

pub use barycenter::{
    ball_translate, conformal_barycenter, conformal_natural_extension, visual_extension,
    visual_measure, Barycenter, QuadratureRule, SphericalQuadrature, DEFAULT_NODES,
};
pub use open_book::{open_book_extension, open_book_extension_rational, OpenBookMap};
pub use radial::radial_extension;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExtensionError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Star(#[from] StarError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Mobius(#[from] MobiusError),
    #[error("map is not admissible for the {method} extension: {reason}")]
    Inadmissible { method: ExtensionMethod, reason: String },
    #[error("invalid quadrature: {0}")]
    BadQuadrature(String),
    #[error("conformal barycenter did not converge, residual {residual:e}")]
    BarycenterDiverged { residual: f64 },
}

/// The extension constructions available through [`build_extension`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtensionMethod {
    Product,
    Radial,
    OpenBook,
    StarSquare,
    Visual,
    ConformalNatural,
    Vertical,
}

impl ExtensionMethod {
    pub const ALL: [ExtensionMethod; 7] = [
        ExtensionMethod::Product,
        ExtensionMethod::Radial,
        ExtensionMethod::OpenBook,
        ExtensionMethod::StarSquare,
        ExtensionMethod::Visual,
        ExtensionMethod::ConformalNatural,
        ExtensionMethod::Vertical,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExtensionMethod::Product => "product",
            ExtensionMethod::Radial => "radial",
            ExtensionMethod::OpenBook => "open-book",
            ExtensionMethod::StarSquare => "star-square",
            ExtensionMethod::Visual => "visual",
            ExtensionMethod::ConformalNatural => "conformal-natural",
            ExtensionMethod::Vertical => "vertical",
        }
    }
}

impl fmt::Display for ExtensionMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExtensionMethod {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ExtensionMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown extension method `{s}`"))
    }
}

/// A boundary map in one of the supported forms.
#[derive(Debug, Clone, PartialEq)]
pub enum MapInput {
    Rational(RationalMap),
    Blaschke(BlaschkeProduct),
}

impl MapInput {
    pub fn to_rational(&self) -> RationalMap {
        match self {
            MapInput::Rational(r) => r.clone(),
            MapInput::Blaschke(b) => b.to_rational(),
        }
    }

    pub fn eval(&self, z: SpherePoint) -> SpherePoint {
        match self {
            MapInput::Rational(r) => r.eval(z),
            MapInput::Blaschke(b) => b.eval(z),
        }
    }
}

impl crate::maps::SphereMap for MapInput {
    fn eval(&self, z: SpherePoint) -> SpherePoint {
        MapInput::eval(self, z)
    }
}

/// Tunables shared by the constructions.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionParams {
    pub quadrature: SphericalQuadrature,
    /// Height factor of the vertical extension.
    pub vertical_scale: f64,
    /// Explicit zero/pole pairing for the product extension.
    pub pairing: Option<Vec<(usize, usize)>>,
}

impl Default for ExtensionParams {
    fn default() -> Self {
        ExtensionParams {
            quadrature: SphericalQuadrature::fibonacci(DEFAULT_NODES, 0)
                .expect("default node count is valid"),
            vertical_scale: 1.0,
            pairing: None,
        }
    }
}

/// A map of the closed upper half-space.
pub trait Extension: Send + Sync {
    fn eval(&self, p: HalfSpacePoint) -> Result<HalfSpacePoint, ExtensionError>;
}

#[derive(Debug, Clone)]
enum Kind {
    Product(MobiusFactorization),
    Radial(RationalMap),
    OpenBook(OpenBookMap),
    StarSquare(Complex64),
    Visual(RationalMap, SphericalQuadrature),
    ConformalNatural(RationalMap, SphericalQuadrature),
    Vertical(RationalMap, f64),
}

/// An extension built by [`build_extension`].
#[derive(Debug, Clone)]
pub struct BuiltExtension {
    method: ExtensionMethod,
    kind: Kind,
}

impl BuiltExtension {
    pub fn method(&self) -> ExtensionMethod {
        self.method
    }
}

fn boundary_value(r: &RationalMap, p: HalfSpacePoint) -> Option<HalfSpacePoint> {
    p.to_sphere().map(|z| HalfSpacePoint::from_sphere(r.eval(z)))
}

impl Extension for BuiltExtension {
    fn eval(&self, p: HalfSpacePoint) -> Result<HalfSpacePoint, ExtensionError> {
        Ok(match &self.kind {
            Kind::Product(f) => product_extension(f, p)?,
            Kind::Radial(r) => chart_to_half_space(radial_extension(r, chart_to_ball(p))),
            Kind::OpenBook(m) => m.extend(p),
            Kind::StarSquare(c) => q_hat_c(*c, p),
            Kind::Visual(r, q) => match boundary_value(r, p) {
                Some(v) => v,
                None => chart_to_half_space(visual_extension(r, chart_to_ball(p), q)),
            },
            Kind::ConformalNatural(r, q) => match boundary_value(r, p) {
                Some(v) => v,
                None => chart_to_half_space(conformal_natural_extension(r, chart_to_ball(p), q)?),
            },
            Kind::Vertical(r, lambda) => vertical_extension(r, *lambda, p)?,
        })
    }
}

impl<E: Extension + ?Sized> Extension for &E {
    fn eval(&self, p: HalfSpacePoint) -> Result<HalfSpacePoint, ExtensionError> {
        (**self).eval(p)
    }
}

/// `c` when `r` is exactly `z² + c`.
fn monic_square_constant(r: &RationalMap) -> Option<Complex64> {
    if r.den().degree() != Some(0) || r.num().degree() != Some(2) {
        return None;
    }
    let k = r.den().coeffs()[0];
    let n: Vec<Complex64> = r.num().coeffs().iter().map(|&c| c / k).collect();
    ((n[2] - 1.0).norm() <= 1e-12 && n[1].norm() <= 1e-12).then_some(n[0])
}

pub fn build_extension(
    method: ExtensionMethod,
    map: &MapInput,
    params: &ExtensionParams,
) -> Result<BuiltExtension, ExtensionError> {
    let r = map.to_rational();
    let kind = match method {
        ExtensionMethod::Product => Kind::Product(factor_rational(&r, params.pairing.as_deref())?),
        ExtensionMethod::Radial => Kind::Radial(r),
        ExtensionMethod::OpenBook => Kind::OpenBook(match map {
            MapInput::Blaschke(b) => OpenBookMap::new(b.clone(), crate::maps::DiskAction::Preserve),
            MapInput::Rational(r) => OpenBookMap::from_rational(r).map_err(|e| match e {
                MapError::NotCirclePreserving => ExtensionError::Inadmissible {
                    method,
                    reason: "the map neither preserves nor swaps the unit disk".into(),
                },
                e => e.into(),
            })?,
        }),
        ExtensionMethod::StarSquare => Kind::StarSquare(monic_square_constant(&r).ok_or(
            ExtensionError::Inadmissible {
                method,
                reason: "the map is not of the form z² + c".into(),
            },
        )?),
        ExtensionMethod::Visual => Kind::Visual(r, params.quadrature.clone()),
        ExtensionMethod::ConformalNatural => Kind::ConformalNatural(r, params.quadrature.clone()),
        ExtensionMethod::Vertical => {
            if !(params.vertical_scale > 0.0) {
                return Err(StarError::BadScale(params.vertical_scale).into());
            }
            Kind::Vertical(r, params.vertical_scale)
        }
    };
    Ok(BuiltExtension { method, kind })
}

/// Seeded sample points with `x, y ∈ (−1, 1)` and `t ∈ (0.2, 1.2)`.
pub fn sample_points(samples: usize, seed: u64) -> Vec<HalfSpacePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let x = rng.random_range(-1.0..1.0);
            let y = rng.random_range(-1.0..1.0);
            let t = rng.random_range(0.2..1.2);
            HalfSpacePoint::from_parts(Complex64::new(x, y), t)
        })
        .collect()
}

/// Largest hyperbolic distance between `Ext(g∘R∘h)(p)` and `ĝ(Ext(R)(ĥ(p)))`
/// over seeded sample points.
pub fn naturality_deviation(
    method: ExtensionMethod,
    map: &MapInput,
    g: &MobiusTransform,
    h: &MobiusTransform,
    samples: usize,
    seed: u64,
    params: &ExtensionParams,
) -> Result<f64, ExtensionError> {
    let ext = build_extension(method, map, params)?;
    let composite = MapInput::Rational(map.to_rational().sandwich(g, h));
    let ext_composite = build_extension(method, &composite, params)?;
    let distances: Vec<Result<f64, ExtensionError>> = sample_points(samples, seed)
        .par_iter()
        .map(|&p| {
            let lhs = ext_composite.eval(p)?;
            let rhs = g.extend(ext.eval(h.extend(p))?);
            Ok(hyperbolic_distance(lhs, rhs)?)
        })
        .collect();
    distances
        .into_iter()
        .try_fold(0.0, |acc: f64, d| Ok(acc.max(d?)))
}

/// The point a fraction `λ` of the way along the geodesic from `a` to `b`.
pub fn homotopy_interpolate(
    a: HalfSpacePoint,
    b: HalfSpacePoint,
    lambda: f64,
) -> Result<HalfSpacePoint, ExtensionError> {
    Ok(geodesic_interpolate(a, b, lambda)?)
}
