use num_complex::Complex64;

use super::rational::RationalMap;
use super::MapError;
use crate::geometry::SpherePoint;

/// Truncated Poincaré function `f(w) = Σ cₖ wᵏ` with `f(λw) = R(f(w))`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    pub base: Complex64,
    pub multiplier: Complex64,
    coeffs: Vec<Complex64>,
}

impl PowerSeries {
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, w: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * w + c)
    }
}

/// `a · b` truncated after degree `n`.
fn mul_trunc(a: &[Complex64], b: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
    for (i, &x) in a.iter().enumerate().take(n + 1) {
        if x.norm() == 0.0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(n + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Taylor coefficients of `R(z₀ + u)` up to `uⁿ`.
fn taylor(r: &RationalMap, z0: Complex64, n: usize) -> Vec<Complex64> {
    let pad = |c: &[Complex64]| {
        let mut v = c.to_vec();
        v.resize(n + 1, Complex64::new(0.0, 0.0));
        v.truncate(n + 1);
        v
    };
    let num = pad(r.num().taylor_shift(z0).coeffs());
    let den = pad(r.den().taylor_shift(z0).coeffs());
    let mut q = vec![Complex64::new(0.0, 0.0); n + 1];
    for k in 0..=n {
        let mut s = num[k];
        for j in 1..=k {
            s -= den[j] * q[k - j];
        }
        q[k] = s / den[0];
    }
    q
}

/// Linearizer of `R` at a repelling fixed point, to order `n`.
pub fn linearizer_series(r: &RationalMap, z0: SpherePoint, n: usize) -> Result<PowerSeries, MapError> {
    let z0 = z0.finite().ok_or(MapError::Infinity)?;
    let n = n.max(1);
    let image = r.eval(z0.into()).finite().ok_or(MapError::NotFixed(f64::INFINITY))?;
    let miss = (image - z0).norm();
    if miss > 1e-10 * z0.norm().max(1.0) {
        return Err(MapError::NotFixed(miss));
    }
    let t = taylor(r, z0, n);
    let lambda = t[1];
    if lambda.norm() <= 1.0 + 1e-9 {
        return Err(MapError::NotRepelling(lambda.norm()));
    }
    // u(w) = f(w) − z₀; c holds u's coefficients.
    let mut c = vec![Complex64::new(0.0, 0.0); n + 1];
    c[1] = Complex64::new(1.0, 0.0);
    let mut lambda_k = lambda;
    for k in 2..=n {
        lambda_k *= lambda;
        let mut power = c.clone();
        let mut rhs = Complex64::new(0.0, 0.0);
        for tj in t.iter().take(k + 1).skip(2) {
            power = mul_trunc(&power, &c, k);
            rhs += tj * power[k];
        }
        c[k] = rhs / (lambda_k - lambda);
    }
    c[0] = z0;
    Ok(PowerSeries {
        base: z0,
        multiplier: lambda,
        coeffs: c,
    })
}
