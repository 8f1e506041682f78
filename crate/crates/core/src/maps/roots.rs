use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::polynomial::Polynomial;
use super::MapError;

const MAX_SWEEPS: usize = 1000;
const SEED: u64 = 0x5EED_AB3E;

/// Roots closer than this (relative to `max(1, |r|)`) are always merged.
pub const CLUSTER_RADIUS: f64 = 1e-7;
/// Widest candidate cluster examined for a hidden multiple root.
const CANDIDATE_RADIUS: f64 = 1e-3;

/// A root together with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub value: Complex64,
    pub multiplicity: usize,
}

/// All roots of `p`, counted once each with multiplicity.
pub fn find_roots(p: &Polynomial) -> Result<Vec<Root>, MapError> {
    let raw = raw_roots(p)?;
    Ok(cluster(p, &raw))
}

/// Roots of `p` repeated according to multiplicity.
pub fn roots_with_multiplicity(p: &Polynomial) -> Result<Vec<Complex64>, MapError> {
    Ok(find_roots(p)?
        .into_iter()
        .flat_map(|r| std::iter::repeat_n(r.value, r.multiplicity))
        .collect())
}

fn backward_error(p: &Polynomial, z: Complex64) -> f64 {
    let scale = p.abs_eval(z.norm());
    if scale == 0.0 {
        0.0
    } else {
        p.eval(z).norm() / scale
    }
}

/// Simultaneous Aberth iteration, one approximation per root.
pub fn raw_roots(p: &Polynomial) -> Result<Vec<Complex64>, MapError> {
    let n = p.degree().ok_or(MapError::ZeroPolynomial)?;
    let coeffs = p.coeffs();
    let zeros_at_origin = coeffs.iter().take_while(|c| c.norm() == 0.0).count();
    let mut out = vec![Complex64::new(0.0, 0.0); zeros_at_origin];
    let q = Polynomial::new(coeffs[zeros_at_origin..].to_vec());
    let m = n - zeros_at_origin;
    match m {
        0 => return Ok(out),
        1 => {
            let c = q.coeffs();
            out.push(-c[0] / c[1]);
            return Ok(out);
        }
        _ => {}
    }

    let dq = q.derivative();
    let lead = q.leading().norm();
    let radius = (q.coeffs()[0].norm() / lead).powf(1.0 / m as f64).max(f64::MIN_POSITIVE);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut z: Vec<Complex64> = (0..m)
        .map(|k| {
            let angle = std::f64::consts::TAU * k as f64 / m as f64 + 0.4;
            let jitter = 1.0 + 0.01 * rng.random_range(-1.0..1.0);
            Complex64::from_polar(radius * jitter, angle)
        })
        .collect();
    let mut done = vec![false; m];
    let tol = 4.0 * f64::EPSILON * (m as f64 + 1.0);

    for _ in 0..MAX_SWEEPS {
        for k in 0..m {
            if done[k] {
                continue;
            }
            let pk = q.eval(z[k]);
            if pk.norm() == 0.0 || backward_error(&q, z[k]) <= tol {
                done[k] = true;
                continue;
            }
            let ratio = pk / dq.eval(z[k]);
            let repulsion: Complex64 = (0..m)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .filter(|c| c.is_finite())
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !w.is_finite() {
                let nudge = Complex64::new(1e-8, 1e-8) * z[k].norm().max(1.0);
                z[k] += nudge;
                continue;
            }
            z[k] -= w;
            if w.norm() <= f64::EPSILON * z[k].norm() {
                done[k] = true;
            }
        }
        if done.iter().all(|&d| d) {
            out.extend(z);
            return Ok(out);
        }
    }

    let worst = z
        .iter()
        .map(|&r| backward_error(&q, r))
        .fold(0.0, f64::max);
    if worst <= 1e-10 {
        out.extend(z);
        Ok(out)
    } else {
        Err(MapError::RootFinding { residual: worst })
    }
}

fn scale_of(z: Complex64) -> f64 {
    z.norm().max(1.0)
}

fn components(points: &[Complex64], radius: f64) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        let mut i = i;
        while parent[i] != r {
            let next = parent[i];
            parent[i] = r;
            i = next;
        }
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let s = scale_of(points[i]).max(scale_of(points[j]));
            if (points[i] - points[j]).norm() <= radius * s {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut label = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if label[r] == usize::MAX {
            label[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[label[r]].push(i);
    }
    groups
}

fn centroid(points: &[Complex64], idx: &[usize]) -> Complex64 {
    idx.iter().map(|&i| points[i]).sum::<Complex64>() / idx.len() as f64
}

/// Spread of the root cloud that rounding alone produces around an
/// `m`-fold root at `c`.
fn expected_spread(p: &Polynomial, c: Complex64, m: usize) -> f64 {
    let shifted = p.taylor_shift(c);
    let coeff = shifted.coeffs().get(m).copied().unwrap_or_default().norm();
    if coeff == 0.0 {
        return 0.0;
    }
    let n = p.degree().unwrap_or(0) as f64;
    let noise = 64.0 * (n + 1.0) * f64::EPSILON * p.abs_eval(c.norm());
    (noise / coeff).powf(1.0 / m as f64)
}

/// Newton on the `(m−1)`-th derivative, where an `m`-fold root is simple.
fn polish(p: &Polynomial, c: Complex64, m: usize) -> Complex64 {
    if m == 1 {
        return c;
    }
    let mut q = p.clone();
    for _ in 1..m {
        q = q.derivative();
    }
    let dq = q.derivative();
    let mut best = c;
    let mut best_val = q.eval(c).norm();
    for _ in 0..8 {
        let step = q.eval(best) / dq.eval(best);
        if !step.is_finite() {
            break;
        }
        let next = best - step;
        let val = q.eval(next).norm();
        if val >= best_val {
            break;
        }
        best = next;
        best_val = val;
    }
    best
}

fn cluster(p: &Polynomial, raw: &[Complex64]) -> Vec<Root> {
    let mut roots = Vec::new();
    for group in components(raw, CANDIDATE_RADIUS) {
        let c = centroid(raw, &group);
        let spread = group
            .iter()
            .map(|&i| (raw[i] - c).norm())
            .fold(0.0, f64::max);
        let m = group.len();
        let merge = m == 1
            || spread <= CLUSTER_RADIUS * scale_of(c)
            || spread <= 4.0 * expected_spread(p, c, m);
        if merge {
            roots.push(Root {
                value: polish(p, c, m),
                multiplicity: m,
            });
            continue;
        }
        let sub: Vec<Complex64> = group.iter().map(|&i| raw[i]).collect();
        for g in components(&sub, CLUSTER_RADIUS) {
            roots.push(Root {
                value: centroid(&sub, &g),
                multiplicity: g.len(),
            });
        }
    }
    roots.sort_by(|a, b| {
        a.value
            .re
            .total_cmp(&b.value.re)
            .then(a.value.im.total_cmp(&b.value.im))
    });
    roots
}
