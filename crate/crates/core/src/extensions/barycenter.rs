use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{
    add, dot, norm, scale, stereographic_lift, stereographic_project, sub, BallPoint, Vec3,
};
use crate::maps::SphereMap;

use super::ExtensionError;

pub const DEFAULT_NODES: usize = 2048;
const MAX_ITERATIONS: usize = 200;
const RESIDUAL_TOL: f64 = 1e-10;

/// How the nodes of a [`SphericalQuadrature`] were produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureRule {
    /// Fibonacci lattice folded into one sixteenth of the sphere and
    /// unfolded by sign changes and the swap `x ↔ y`.
    SymmetricFibonacci,
    /// Caller-supplied nodes.
    Custom,
}

/// Equal-weight nodes on the unit sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalQuadrature {
    nodes: Vec<Vec3>,
    rule: QuadratureRule,
    seed: u64,
}

impl SphericalQuadrature {
    /// `n` nodes; `n` must be a positive multiple of 16. The seed sets the
    /// phase of the lattice.
    pub fn fibonacci(n: usize, seed: u64) -> Result<Self, ExtensionError> {
        if n == 0 || !n.is_multiple_of(16) {
            return Err(ExtensionError::BadQuadrature(format!(
                "node count {n} is not a positive multiple of 16"
            )));
        }
        let m = n / 16;
        let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
        let phase = ChaCha8Rng::seed_from_u64(seed).random_range(0.0..std::f64::consts::TAU);
        let mut nodes = Vec::with_capacity(n);
        for k in 0..m {
            // Fibonacci lattice on the upper hemisphere, folded into the
            // wedge 0 ≤ y ≤ x.
            let z = 1.0 - (k as f64 + 0.5) / m as f64;
            let r = (1.0 - z * z).sqrt();
            let (s, c) = (golden * k as f64 + phase).sin_cos();
            let (a, b) = ((r * c).abs(), (r * s).abs());
            let (x, y) = if a >= b { (a, b) } else { (b, a) };
            for (px, py) in [(x, y), (y, x)] {
                for sx in [1.0, -1.0] {
                    for sy in [1.0, -1.0] {
                        for sz in [1.0, -1.0] {
                            nodes.push([sx * px, sy * py, sz * z]);
                        }
                    }
                }
            }
        }
        Ok(SphericalQuadrature {
            nodes,
            rule: QuadratureRule::SymmetricFibonacci,
            seed,
        })
    }

    pub fn from_nodes(nodes: Vec<Vec3>) -> Result<Self, ExtensionError> {
        if nodes.is_empty() {
            return Err(ExtensionError::BadQuadrature("no nodes".into()));
        }
        if let Some(v) = nodes.iter().find(|v| (norm(**v) - 1.0).abs() > 1e-12) {
            return Err(ExtensionError::BadQuadrature(format!(
                "node {v:?} is not on the unit sphere"
            )));
        }
        Ok(SphericalQuadrature {
            nodes,
            rule: QuadratureRule::Custom,
            seed: 0,
        })
    }

    pub fn nodes(&self) -> &[Vec3] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn rule(&self) -> QuadratureRule {
        self.rule
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn weight(&self) -> f64 {
        1.0 / self.nodes.len() as f64
    }

    /// The nodes pushed forward by `f`.
    pub fn map(&self, f: impl Fn(Vec3) -> Vec3) -> Self {
        SphericalQuadrature {
            nodes: self.nodes.iter().map(|&v| f(v)).collect(),
            rule: QuadratureRule::Custom,
            seed: self.seed,
        }
    }

    pub fn mean(&self) -> Vec3 {
        mean(&self.nodes)
    }
}

fn mean(points: &[Vec3]) -> Vec3 {
    let s = points.iter().fold([0.0; 3], |acc, &v| add(acc, v));
    scale(1.0 / points.len() as f64, s)
}

/// The ball automorphism `T_a` with `T_a(a) = 0`; `T_a⁻¹ = T_{−a}`.
pub fn ball_translate(a: Vec3, x: Vec3) -> Vec3 {
    let aa = dot(a, a);
    let xa = sub(x, a);
    let num = sub(scale(1.0 - aa, xa), scale(dot(xa, xa), a));
    let den = 1.0 - 2.0 * dot(x, a) + dot(x, x) * aa;
    scale(1.0 / den, num)
}

fn neg(a: Vec3) -> Vec3 {
    [-a[0], -a[1], -a[2]]
}

/// The visual measure of `x`: the uniform nodes moved by `T_x⁻¹`.
pub fn visual_measure(x: BallPoint, quad: &SphericalQuadrature) -> SphericalQuadrature {
    let a = neg(x.coords());
    quad.map(|v| ball_translate(a, v))
}

fn push_through<R: SphereMap + ?Sized>(r: &R, v: Vec3) -> Vec3 {
    let n = norm(v);
    let z = stereographic_project(scale(1.0 / n, v)).expect("nodes lie on the sphere");
    stereographic_lift(r.eval(z))
}

/// Euclidean mean of `R` applied to the visual measure of `x`.
pub fn visual_extension<R: SphereMap + ?Sized>(
    r: &R,
    x: BallPoint,
    quad: &SphericalQuadrature,
) -> BallPoint {
    let pushed: Vec<Vec3> = visual_measure(x, quad)
        .nodes()
        .iter()
        .map(|&v| push_through(r, v))
        .collect();
    BallPoint::from_raw(mean(&pushed))
}

/// Result of [`conformal_barycenter`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Barycenter {
    pub point: BallPoint,
    pub residual: f64,
    pub iterations: usize,
}

fn solve3(m: [[f64; 3]; 3], b: Vec3) -> Option<Vec3> {
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(m);
    if d.abs() < 1e-300 {
        return None;
    }
    let mut out = [0.0; 3];
    for (k, o) in out.iter_mut().enumerate() {
        let mut mk = m;
        for i in 0..3 {
            mk[i][k] = b[i];
        }
        *o = det(mk) / d;
    }
    Some(out)
}

/// The point `w` where the measure moved by `T_w` has zero Euclidean mean.
pub fn conformal_barycenter(measure: &SphericalQuadrature) -> Result<Barycenter, ExtensionError> {
    let nodes = measure.nodes();
    let moved = |w: Vec3| -> Vec<Vec3> { nodes.iter().map(|&v| ball_translate(w, v)).collect() };
    let mut w = [0.0; 3];
    let mut pushed = moved(w);
    let mut m = mean(&pushed);
    let mut residual = norm(m);
    for iteration in 0..MAX_ITERATIONS {
        if residual <= RESIDUAL_TOL {
            return Ok(Barycenter {
                point: BallPoint::from_raw(w),
                residual,
                iterations: iteration,
            });
        }
        // d/du mean(T_u y) at u = 0 is −2(I − C) with C the second moment.
        let mut jac = [[0.0; 3]; 3];
        for y in &pushed {
            for i in 0..3 {
                for j in 0..3 {
                    jac[i][j] -= y[i] * y[j];
                }
            }
        }
        let inv_n = 1.0 / pushed.len() as f64;
        for (i, row) in jac.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = 2.0 * ((if i == j { 1.0 } else { 0.0 }) + *e * inv_n);
            }
        }
        let mut u = solve3(jac, m).ok_or(ExtensionError::BarycenterDiverged { residual })?;
        let un = norm(u);
        if un > 0.9 {
            u = scale(0.9 / un, u);
        }
        let mut accepted = false;
        for _ in 0..40 {
            let candidate = ball_translate(neg(w), u);
            let trial = moved(candidate);
            let tm = mean(&trial);
            if norm(tm) < residual {
                w = candidate;
                pushed = trial;
                m = tm;
                residual = norm(tm);
                accepted = true;
                break;
            }
            u = scale(0.5, u);
        }
        if !accepted {
            break;
        }
    }
    if residual <= RESIDUAL_TOL {
        Ok(Barycenter {
            point: BallPoint::from_raw(w),
            residual,
            iterations: MAX_ITERATIONS,
        })
    } else {
        Err(ExtensionError::BarycenterDiverged { residual })
    }
}

/// Conformal barycenter of `R` applied to the visual measure of `x`.
pub fn conformal_natural_extension<R: SphereMap + ?Sized>(
    r: &R,
    x: BallPoint,
    quad: &SphericalQuadrature,
) -> Result<BallPoint, ExtensionError> {
    let pushed = visual_measure(x, quad).map(|v| push_through(r, v));
    Ok(conformal_barycenter(&pushed)?.point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::SpherePoint;
    use crate::maps::{FnMap, Polynomial, RationalMap};

    fn quad() -> SphericalQuadrature {
        SphericalQuadrature::fibonacci(DEFAULT_NODES, 7).unwrap()
    }

    #[test]
    fn quadrature_is_balanced() {
        let q = quad();
        assert_eq!(q.len(), DEFAULT_NODES);
        assert!(q.nodes().iter().all(|v| (norm(*v) - 1.0).abs() < 1e-12));
        assert!(norm(q.mean()) < 1e-15);
        assert!(SphericalQuadrature::fibonacci(100, 0).is_err());
    }

    #[test]
    fn translation_properties() {
        let a = [0.3, -0.2, 0.5];
        assert!(norm(ball_translate(a, a)) < 1e-15);
        let v = [0.6, 0.0, 0.8];
        assert!((norm(ball_translate(a, v)) - 1.0).abs() < 1e-12);
        let back = ball_translate(neg(a), ball_translate(a, [0.1, 0.2, -0.3]));
        assert!(norm(sub(back, [0.1, 0.2, -0.3])) < 1e-14);
    }

    #[test]
    fn point_mass() {
        let zeta = [0.0, 0.6, 0.8];
        let q = SphericalQuadrature::from_nodes(vec![zeta]).unwrap();
        let r = RationalMap::polynomial(Polynomial::from_real(&[0.0, 0.0, 1.0])).unwrap();
        let got = visual_extension(&r, BallPoint::origin(), &q).coords();
        let want = stereographic_lift(r.eval(stereographic_project(zeta).unwrap()));
        assert!(norm(sub(got, want)) < 1e-15);
    }

    #[test]
    fn square_at_origin_is_on_axis() {
        let r = RationalMap::polynomial(Polynomial::from_real(&[0.0, 0.0, 1.0])).unwrap();
        let v = visual_extension(&r, BallPoint::origin(), &quad()).coords();
        assert!(v[0].abs() < 1e-12 && v[1].abs() < 1e-12);
        let b = conformal_natural_extension(&r, BallPoint::origin(), &quad()).unwrap().coords();
        assert!(b[0].abs() < 1e-10 && b[1].abs() < 1e-10);
    }

    #[test]
    fn barycenter_of_uniform_and_visual() {
        let q = quad();
        let b = conformal_barycenter(&q).unwrap();
        assert!(b.point.norm() <= 1e-10);
        let x = BallPoint::new([0.2, -0.4, 0.3]).unwrap();
        let b = conformal_barycenter(&visual_measure(x, &q)).unwrap();
        assert!(norm(sub(b.point.coords(), x.coords())) < 1e-8);
        assert!(b.residual <= 1e-10 && b.iterations <= 200);
    }

    #[test]
    fn identity_extension() {
        let id = FnMap(|z: SpherePoint| z);
        let x = BallPoint::new([0.5, 0.1, -0.2]).unwrap();
        let got = conformal_natural_extension(&id, x, &quad()).unwrap();
        assert!(norm(sub(got.coords(), x.coords())) < 1e-8);
    }
}
