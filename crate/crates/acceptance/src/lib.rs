//! Shared pieces of the acceptance suite: the per-criterion report and the
//! seeded generators for random points, maps and transforms.

use hypext::geometry::{BallPoint, HalfSpacePoint, SpacePoint};
use hypext::maps::{BlaschkeProduct, Polynomial, RationalMap};
use hypext::mobius::MobiusTransform;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Vec3 = [f64; 3];

/// Measured worst cases against their bounds.
pub struct Report {
    pub pass: bool,
    pub items: Vec<String>,
}

impl Default for Report {
    fn default() -> Self {
        Self::new()
    }
}

impl Report {
    pub fn new() -> Self {
        Report { pass: true, items: Vec::new() }
    }

    pub fn bound(&mut self, label: &str, value: f64, tol: f64) {
        let ok = value <= tol;
        self.pass &= ok;
        let mark = if ok { "" } else { " !" };
        self.items.push(format!("{label}={value:.2e}<={tol:.0e}{mark}"));
    }

    pub fn flag(&mut self, label: &str, ok: bool) {
        self.pass &= ok;
        self.items.push(format!("{label}={}", if ok { "ok" } else { "no !" }));
    }

    pub fn note(&mut self, text: String) {
        self.items.push(text);
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn hp(x: f64, y: f64, t: f64) -> HalfSpacePoint {
    HalfSpacePoint::new(x, y, t).unwrap()
}

pub fn v3(p: HalfSpacePoint) -> Vec3 {
    p.coords().expect("finite point")
}

pub fn vnorm(v: Vec3) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

pub fn vdist(a: Vec3, b: Vec3) -> f64 {
    vnorm([a[0] - b[0], a[1] - b[1], a[2] - b[2]])
}

pub fn rel(a: HalfSpacePoint, b: HalfSpacePoint) -> f64 {
    let (a, b) = (v3(a), v3(b));
    vdist(a, b) / vnorm(a).max(vnorm(b)).max(f64::MIN_POSITIVE)
}

/// Euclidean error relative to the larger point, at least 1; zero when
/// both are infinite.
pub fn space_rel(a: SpacePoint, b: SpacePoint) -> f64 {
    let size = |p: SpacePoint| p.finite().map_or(f64::INFINITY, vnorm);
    a.distance(b) / size(a).max(size(b)).max(1.0)
}

pub fn open_point(r: &mut ChaCha8Rng) -> HalfSpacePoint {
    hp(r.random_range(-2.0..2.0), r.random_range(-2.0..2.0), r.random_range(0.01..2.0))
}

pub fn axis_point(r: &mut ChaCha8Rng) -> HalfSpacePoint {
    hp(0.0, 0.0, r.random_range(0.05..3.0))
}

pub fn boundary_point(r: &mut ChaCha8Rng) -> HalfSpacePoint {
    hp(r.random_range(-2.0..2.0), r.random_range(-2.0..2.0), 0.0)
}

/// Open-space point most of the time, with axis and boundary mixes.
pub fn mixed_point(r: &mut ChaCha8Rng) -> HalfSpacePoint {
    match r.random_range(0..10) {
        0 => axis_point(r),
        1 => boundary_point(r),
        _ => open_point(r),
    }
}

pub fn complex_in(r: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    c(r.random_range(-radius..radius), r.random_range(-radius..radius))
}

pub fn random_mobius(r: &mut ChaCha8Rng) -> MobiusTransform {
    loop {
        let [a, b, cc, d] = [(); 4].map(|_| complex_in(r, 2.0));
        if (a * d - b * cc).norm() > 0.1 {
            return MobiusTransform::new(a, b, cc, d).unwrap();
        }
    }
}

pub fn disk_point(r: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    Complex64::from_polar(radius * r.random::<f64>().sqrt(), r.random_range(0.0..std::f64::consts::TAU))
}

pub fn disk_automorphism(r: &mut ChaCha8Rng) -> MobiusTransform {
    let theta = r.random_range(0.0..std::f64::consts::TAU);
    MobiusTransform::disk_automorphism(theta, disk_point(r, 0.8)).unwrap()
}

/// A disk automorphism, followed by `z ↦ 1/z` when `swap` is set.
pub fn circle_preserving(r: &mut ChaCha8Rng, swap: bool) -> MobiusTransform {
    let g = disk_automorphism(r);
    if swap {
        MobiusTransform::reciprocal().compose(&g)
    } else {
        g
    }
}

pub fn random_rational(r: &mut ChaCha8Rng, degree: usize) -> RationalMap {
    loop {
        let num: Vec<Complex64> = (0..=degree).map(|_| complex_in(r, 1.0)).collect();
        let den: Vec<Complex64> = (0..=degree).map(|_| complex_in(r, 1.0)).collect();
        if let Ok(m) = RationalMap::new(Polynomial::new(num), Polynomial::new(den)) {
            if m.degree() == degree {
                return m;
            }
        }
    }
}

pub fn random_blaschke(r: &mut ChaCha8Rng, degree: usize) -> BlaschkeProduct {
    let mut zeros: Vec<Complex64> = Vec::new();
    while zeros.len() < degree {
        let a = disk_point(r, 0.8);
        if zeros.iter().all(|z| (z - a).norm() > 0.05) {
            zeros.push(a);
        }
    }
    BlaschkeProduct::new(r.random_range(0.0..std::f64::consts::TAU), zeros).unwrap()
}

pub fn ball_point(r: &mut ChaCha8Rng, radius: f64) -> BallPoint {
    loop {
        let v = [(); 3].map(|_| r.random_range(-1.0..1.0));
        if vnorm(v) < 1.0 {
            return BallPoint::new(v.map(|x| x * radius)).unwrap();
        }
    }
}
