use num_complex::Complex64;

use super::polynomial::Polynomial;
use super::roots::{find_roots, roots_with_multiplicity};
use super::{MapError, SphereMap};
use crate::geometry::SpherePoint;
use crate::mobius::MobiusTransform;

/// Roots of numerator and denominator closer than this make a map non-reduced.
pub const REDUCED_TOL: f64 = 1e-9;

/// `num / den` in coefficient form.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalMap {
    num: Polynomial,
    den: Polynomial,
}

impl RationalMap {
    /// Checked constructor: nonzero denominator, degree ≥ 1, reduced.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, MapError> {
        if den.is_zero() {
            return Err(MapError::ZeroPolynomial);
        }
        if num.is_zero() {
            return Err(MapError::DegreeTooLow(0, 1));
        }
        let map = RationalMap { num, den };
        let d = map.degree();
        if d < 1 {
            return Err(MapError::DegreeTooLow(d, 1));
        }
        if map.num.degree() > Some(0) && map.den.degree() > Some(0) {
            let zeros = find_roots(&map.num)?;
            let poles = find_roots(&map.den)?;
            for z in &zeros {
                for p in &poles {
                    let scale = z.value.norm().max(p.value.norm()).max(1.0);
                    if (z.value - p.value).norm() <= REDUCED_TOL * scale {
                        return Err(MapError::NotReduced {
                            zero: z.value,
                            pole: p.value,
                        });
                    }
                }
            }
        }
        Ok(map)
    }

    /// For results of operations that preserve reducedness.
    pub(crate) fn from_parts(num: Polynomial, den: Polynomial) -> Self {
        RationalMap { num, den }
    }

    pub fn polynomial(p: Polynomial) -> Result<Self, MapError> {
        Self::new(p, Polynomial::constant(Complex64::new(1.0, 0.0)))
    }

    pub fn from_mobius(g: &MobiusTransform) -> Self {
        let [a, b, c, d] = g.coefficients();
        RationalMap {
            num: Polynomial::new(vec![b, a]),
            den: Polynomial::new(vec![d, c]),
        }
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    fn deg_num(&self) -> usize {
        self.num.degree().unwrap_or(0)
    }

    fn deg_den(&self) -> usize {
        self.den.degree().unwrap_or(0)
    }

    pub fn degree(&self) -> usize {
        self.deg_num().max(self.deg_den())
    }

    pub fn eval(&self, z: SpherePoint) -> SpherePoint {
        let (dn, dd) = (self.deg_num(), self.deg_den());
        let Some(z) = z.finite() else {
            return match dn.cmp(&dd) {
                std::cmp::Ordering::Greater => SpherePoint::Infinity,
                std::cmp::Ordering::Less => SpherePoint::Finite(Complex64::new(0.0, 0.0)),
                std::cmp::Ordering::Equal => {
                    SpherePoint::from_complex(self.num.leading() / self.den.leading())
                }
            };
        };
        if z.norm() <= 1.0 {
            let d = self.den.eval(z);
            if d.norm() == 0.0 {
                return SpherePoint::Infinity;
            }
            return SpherePoint::from_complex(self.num.eval(z) / d);
        }
        let w = z.inv();
        let dr = self.den.eval_reversed(w);
        if dr.norm() == 0.0 {
            return SpherePoint::Infinity;
        }
        let ratio = self.num.eval_reversed(w) / dr;
        let shift = dn as i32 - dd as i32;
        SpherePoint::from_complex(ratio * z.powi(shift))
    }

    /// `R′(z)` at a finite point that is not a pole.
    pub fn derivative_at(&self, z: Complex64) -> Complex64 {
        let d = self.den.eval(z);
        (self.num.derivative().eval(z) * d - self.num.eval(z) * self.den.derivative().eval(z))
            / (d * d)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &RationalMap) -> RationalMap {
        let d = self.degree();
        let mut np = vec![Polynomial::constant(Complex64::new(1.0, 0.0))];
        let mut dp = vec![Polynomial::constant(Complex64::new(1.0, 0.0))];
        for k in 1..=d {
            np.push(&np[k - 1] * &inner.num);
            dp.push(&dp[k - 1] * &inner.den);
        }
        let homogenize = |p: &Polynomial| {
            p.coeffs()
                .iter()
                .enumerate()
                .fold(Polynomial::zero(), |acc, (k, &c)| {
                    &acc + &(&np[k] * &dp[d - k]).scale(c)
                })
        };
        RationalMap {
            num: homogenize(&self.num),
            den: homogenize(&self.den),
        }
    }

    /// `n`-fold iterate; `n = 0` gives the identity.
    pub fn iterate(&self, n: usize) -> RationalMap {
        let mut acc = RationalMap::from_mobius(&MobiusTransform::identity());
        for _ in 0..n {
            acc = self.compose(&acc);
        }
        acc
    }

    /// `g ∘ self ∘ h`.
    pub fn sandwich(&self, g: &MobiusTransform, h: &MobiusTransform) -> RationalMap {
        RationalMap::from_mobius(g)
            .compose(self)
            .compose(&RationalMap::from_mobius(h))
    }

    /// Finite zeros repeated by multiplicity.
    pub fn zeros(&self) -> Result<Vec<Complex64>, MapError> {
        roots_with_multiplicity(&self.num)
    }

    /// Finite poles repeated by multiplicity.
    pub fn poles(&self) -> Result<Vec<Complex64>, MapError> {
        roots_with_multiplicity(&self.den)
    }
}

impl SphereMap for RationalMap {
    fn eval(&self, z: SpherePoint) -> SpherePoint {
        RationalMap::eval(self, z)
    }
}

/// Critical point with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint {
    pub point: SpherePoint,
    pub multiplicity: usize,
}

/// Critical points of `R`, total multiplicity `2d − 2`.
pub fn critical_points(r: &RationalMap) -> Result<Vec<CriticalPoint>, MapError> {
    let d = r.degree();
    if d < 2 {
        return Err(MapError::DegreeTooLow(d, 2));
    }
    let w = &(&r.num.derivative() * &r.den) - &(&r.num * &r.den.derivative());
    let mut out: Vec<CriticalPoint> = find_roots(&w)?
        .into_iter()
        .map(|root| CriticalPoint {
            point: SpherePoint::Finite(root.value),
            multiplicity: root.multiplicity,
        })
        .collect();
    let at_infinity = (2 * d - 2).saturating_sub(w.degree().unwrap_or(0));
    if at_infinity > 0 {
        out.push(CriticalPoint {
            point: SpherePoint::Infinity,
            multiplicity: at_infinity,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn val(p: SpherePoint) -> Complex64 {
        p.finite().expect("finite")
    }

    fn z_sq_minus_one_over_z() -> RationalMap {
        RationalMap::new(
            Polynomial::from_real(&[-1.0, 0.0, 1.0]),
            Polynomial::from_real(&[0.0, 1.0]),
        )
        .unwrap()
    }

    #[test]
    fn evaluation_examples() {
        let sq = RationalMap::polynomial(Polynomial::from_real(&[0.0, 0.0, 1.0])).unwrap();
        assert!((val(sq.eval(SpherePoint::new(1.0, 1.0))) - c(0.0, 2.0)).norm() < 1e-15);
        assert!(z_sq_minus_one_over_z().eval(SpherePoint::Infinity).is_infinity());
        let q = RationalMap::polynomial(Polynomial::from_real(&[0.25, 0.0, 1.0])).unwrap();
        assert!((val(q.eval(SpherePoint::new(0.5, 0.0))) - c(0.5, 0.0)).norm() < 1e-15);
        assert!(z_sq_minus_one_over_z().eval(SpherePoint::new(0.0, 0.0)).is_infinity());
    }

    #[test]
    fn rejects_common_roots() {
        let r = RationalMap::new(
            Polynomial::from_real(&[-1.0, 0.0, 1.0]),
            Polynomial::from_real(&[-1.0, 1.0]),
        );
        assert!(matches!(r, Err(MapError::NotReduced { .. })));
        assert!(RationalMap::new(Polynomial::from_real(&[1.0]), Polynomial::from_real(&[2.0])).is_err());
    }

    #[test]
    fn critical_point_examples() {
        let sq = RationalMap::polynomial(Polynomial::from_real(&[0.0, 0.0, 1.0])).unwrap();
        let cp = critical_points(&sq).unwrap();
        assert_eq!(cp.len(), 2);
        assert!(cp.iter().any(|p| p.point.is_infinity() && p.multiplicity == 1));
        assert!(cp.iter().any(|p| p.point == SpherePoint::new(0.0, 0.0)));

        let cp = critical_points(&z_sq_minus_one_over_z()).unwrap();
        assert_eq!(cp.len(), 2);
        for want in [c(0.0, 1.0), c(0.0, -1.0)] {
            assert!(cp.iter().any(|p| (val(p.point) - want).norm() < 1e-12));
        }
    }

    #[test]
    fn critical_count_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in 2..=5 {
            for _ in 0..10 {
                let mut rand_poly = |deg: usize| {
                    Polynomial::new(
                        (0..=deg)
                            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                            .collect(),
                    )
                };
                let r = RationalMap::new(rand_poly(d), rand_poly(d)).unwrap();
                let total: usize = critical_points(&r).unwrap().iter().map(|p| p.multiplicity).sum();
                assert_eq!(total, 2 * d - 2);
            }
        }
    }

    #[test]
    fn composition_and_sandwich() {
        let r = z_sq_minus_one_over_z();
        let rr = r.iterate(2);
        assert_eq!(rr.degree(), 4);
        let z = SpherePoint::new(0.7, -0.4);
        let direct = r.eval(r.eval(z));
        assert!((val(rr.eval(z)) - val(direct)).norm() < 1e-12);

        let g = MobiusTransform::new(c(1.0, 0.0), c(0.5, 0.0), c(0.0, 0.3), c(1.0, 0.0)).unwrap();
        let h = MobiusTransform::translation(c(0.2, 0.1));
        let s = r.sandwich(&g, &h);
        let want = g.apply(r.eval(h.apply(z)));
        assert!((val(s.eval(z)) - val(want)).norm() < 1e-12);
    }

    #[test]
    fn large_arguments_do_not_overflow() {
        let r = z_sq_minus_one_over_z();
        let v = val(r.eval(SpherePoint::new(1e200, 0.0)));
        assert!((v.re / 1e200 - 1.0).abs() < 1e-12);
    }
}
