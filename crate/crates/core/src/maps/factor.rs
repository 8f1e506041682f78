use std::collections::HashSet;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::rational::{RationalMap, REDUCED_TOL};
use super::MapError;
use crate::geometry::{HalfSpacePoint, SpherePoint};
use crate::mobius::MobiusTransform;

/// One Möbius factor together with the endpoints of its geodesic σ.
#[derive(Debug, Clone, PartialEq)]
pub struct MobiusFactor {
    pub map: MobiusTransform,
    pub zero: SpherePoint,
    pub pole: SpherePoint,
}

impl MobiusFactor {
    /// Point of σ at parameter `s ∈ (0, 1)`, running from the zero to the pole.
    pub fn geodesic_point(&self, s: f64) -> HalfSpacePoint {
        let s = s.clamp(0.0, 1.0);
        match (self.zero.finite(), self.pole.finite()) {
            (Some(z), Some(p)) => {
                let mid = (z + p) * 0.5;
                let half = (z - p) * 0.5;
                let angle = std::f64::consts::PI * s;
                HalfSpacePoint::from_parts(mid + half * angle.cos(), half.norm() * angle.sin())
            }
            (Some(z), None) => HalfSpacePoint::from_parts(z, s / (1.0 - s)),
            (None, Some(p)) => HalfSpacePoint::from_parts(p, (1.0 - s) / s),
            (None, None) => HalfSpacePoint::Infinity,
        }
    }
}

/// Which zero was matched with which pole.
#[derive(Debug, Clone, PartialEq)]
pub struct Pairing {
    /// Finite zeros in lexicographic order, repeated by multiplicity.
    pub zeros: Vec<Complex64>,
    /// Finite poles in lexicographic order, repeated by multiplicity.
    pub poles: Vec<Complex64>,
    /// `(zero index, pole index)`.
    pub pairs: Vec<(usize, usize)>,
    pub canonical: bool,
}

/// `R = ∏ γᵢ` with every `γᵢ` a Möbius map.
#[derive(Debug, Clone, PartialEq)]
pub struct MobiusFactorization {
    factors: Vec<MobiusFactor>,
    pairing: Pairing,
}

impl MobiusFactorization {
    pub fn factors(&self) -> &[MobiusFactor] {
        &self.factors
    }

    pub fn pairing(&self) -> &Pairing {
        &self.pairing
    }

    /// Pointwise product of the factors.
    pub fn eval(&self, z: SpherePoint) -> SpherePoint {
        let mut acc = Complex64::new(1.0, 0.0);
        let (mut zeros, mut poles) = (0usize, 0usize);
        for f in &self.factors {
            match f.map.apply(z) {
                SpherePoint::Infinity => poles += 1,
                SpherePoint::Finite(w) if w.norm() == 0.0 => zeros += 1,
                SpherePoint::Finite(w) => acc *= w,
            }
        }
        match zeros.cmp(&poles) {
            std::cmp::Ordering::Greater => SpherePoint::Finite(Complex64::new(0.0, 0.0)),
            std::cmp::Ordering::Less => SpherePoint::Infinity,
            std::cmp::Ordering::Equal => SpherePoint::from_complex(acc),
        }
    }

    /// Largest relative deviation from `r` over `samples` seeded points.
    pub fn max_relative_error(&self, r: &RationalMap, samples: usize, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let z = SpherePoint::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let (Some(a), Some(b)) = (self.eval(z).finite(), r.eval(z).finite()) else {
                continue;
            };
            worst = worst.max((a - b).norm() / b.norm().max(1e-300));
        }
        worst
    }
}

fn validate(pairs: &[(usize, usize)], m: usize, n: usize) -> Result<(), MapError> {
    if pairs.len() != m.min(n) {
        return Err(MapError::BadPairing(format!(
            "expected {} pairs, got {}",
            m.min(n),
            pairs.len()
        )));
    }
    let mut zs = HashSet::new();
    let mut ps = HashSet::new();
    for &(i, j) in pairs {
        if i >= m || j >= n {
            return Err(MapError::BadPairing(format!("index ({i}, {j}) out of range")));
        }
        if !zs.insert(i) || !ps.insert(j) {
            return Err(MapError::BadPairing(format!("index ({i}, {j}) used twice")));
        }
    }
    Ok(())
}

fn build(
    r: &RationalMap,
    zeros: Vec<Complex64>,
    poles: Vec<Complex64>,
    pairs: Vec<(usize, usize)>,
    canonical: bool,
) -> Result<MobiusFactorization, MapError> {
    let mut factors = Vec::new();
    let mut k = Some(r.num().leading() / r.den().leading());
    let mut push = |z: SpherePoint, p: SpherePoint| -> Result<(), MapError> {
        // The constant rides on the first factor.
        let scale = k.take().unwrap_or(Complex64::new(1.0, 0.0));
        factors.push(MobiusFactor {
            map: MobiusTransform::with_zero_and_pole(scale, z, p)?,
            zero: z,
            pole: p,
        });
        Ok(())
    };
    for &(i, j) in &pairs {
        push(zeros[i].into(), poles[j].into())?;
    }
    let used_z: HashSet<usize> = pairs.iter().map(|p| p.0).collect();
    let used_p: HashSet<usize> = pairs.iter().map(|p| p.1).collect();
    for (_, &z) in zeros.iter().enumerate().filter(|(i, _)| !used_z.contains(i)) {
        push(z.into(), SpherePoint::Infinity)?;
    }
    for (_, &p) in poles.iter().enumerate().filter(|(j, _)| !used_p.contains(j)) {
        push(SpherePoint::Infinity, p.into())?;
    }
    Ok(MobiusFactorization {
        factors,
        pairing: Pairing {
            zeros,
            poles,
            pairs,
            canonical,
        },
    })
}

fn roots_of(r: &RationalMap) -> Result<(Vec<Complex64>, Vec<Complex64>), MapError> {
    let zeros = r.zeros()?;
    let poles = r.poles()?;
    for &z in &zeros {
        for &p in &poles {
            if (z - p).norm() <= REDUCED_TOL * z.norm().max(p.norm()).max(1.0) {
                return Err(MapError::NotReduced { zero: z, pole: p });
            }
        }
    }
    Ok((zeros, poles))
}

/// Factors `r` into Möbius maps. Without an explicit pairing the i-th zero
/// is matched with the i-th pole, both sorted lexicographically.
pub fn factor_rational(
    r: &RationalMap,
    pairing: Option<&[(usize, usize)]>,
) -> Result<MobiusFactorization, MapError> {
    let (zeros, poles) = roots_of(r)?;
    let (m, n) = (zeros.len(), poles.len());
    let (pairs, canonical) = match pairing {
        Some(p) => {
            validate(p, m, n)?;
            (p.to_vec(), false)
        }
        None => ((0..m.min(n)).map(|i| (i, i)).collect(), true),
    };
    build(r, zeros, poles, pairs, canonical)
}

fn injections(
    from: usize,
    into: usize,
    current: &mut Vec<usize>,
    used: &mut [bool],
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if current.len() == from {
        return visit(current);
    }
    for j in 0..into {
        if used[j] {
            continue;
        }
        used[j] = true;
        current.push(j);
        let stop = injections(from, into, current, used, visit);
        current.pop();
        used[j] = false;
        if stop {
            return true;
        }
    }
    false
}

/// Factorizations for distinct zero/pole pairings, at most `limit`.
pub fn enumerate_pairings(r: &RationalMap, limit: usize) -> Result<Vec<MobiusFactorization>, MapError> {
    if limit == 0 {
        return Err(MapError::BadPairing("limit must be at least 1".into()));
    }
    let (zeros, poles) = roots_of(r)?;
    let (m, n) = (zeros.len(), poles.len());
    let mut seen = HashSet::new();
    let mut chosen: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut visit = |sel: &[usize]| -> bool {
        let pairs: Vec<(usize, usize)> = if m <= n {
            sel.iter().enumerate().map(|(i, &j)| (i, j)).collect()
        } else {
            sel.iter().enumerate().map(|(j, &i)| (i, j)).collect()
        };
        let mut key: Vec<[u64; 4]> = pairs
            .iter()
            .map(|&(i, j)| {
                [
                    zeros[i].re.to_bits(),
                    zeros[i].im.to_bits(),
                    poles[j].re.to_bits(),
                    poles[j].im.to_bits(),
                ]
            })
            .collect();
        key.sort_unstable();
        if seen.insert(key) {
            chosen.push(pairs);
        }
        chosen.len() >= limit
    };
    let (from, into) = if m <= n { (m, n) } else { (n, m) };
    injections(from, into, &mut Vec::new(), &mut vec![false; into], &mut visit);
    let canonical: Vec<(usize, usize)> = (0..m.min(n)).map(|i| (i, i)).collect();
    chosen
        .into_iter()
        .map(|pairs| {
            let is_canonical = pairs == canonical;
            build(r, zeros.clone(), poles.clone(), pairs, is_canonical)
        })
        .collect()
}
