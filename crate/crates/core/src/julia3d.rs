//! Escape-time rendering of the spatial filled Julia sets `K(Q̂_c)`.

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::geometry::HalfSpacePoint;
use crate::star::q_hat_c;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JuliaError {
    #[error("degenerate or invalid window {0:?}")]
    BadWindow(Vec<f64>),
    #[error("grid dimensions must be positive")]
    BadSize,
    #[error("max_iter must be at least 1")]
    BadMaxIter,
    #[error("escape radius {radius} is below max(2, |c|) = {minimum}")]
    BadEscapeRadius { radius: f64, minimum: f64 },
}

/// Smallest admissible escape radius for the parameter `c`.
pub fn min_escape_radius(c: Complex64) -> f64 {
    c.norm().max(2.0)
}

fn check_radius(c: Complex64, radius: f64) -> Result<(), JuliaError> {
    let minimum = min_escape_radius(c);
    if !(radius >= minimum) || !radius.is_finite() {
        return Err(JuliaError::BadEscapeRadius { radius, minimum });
    }
    Ok(())
}

fn check_range(lo: f64, hi: f64) -> bool {
    lo.is_finite() && hi.is_finite() && lo < hi
}

/// Iterations of `Q̂_c` applied before `‖p‖` first exceeds `radius`;
/// `max_iter` if it never does.
pub fn escape_count(c: Complex64, p: HalfSpacePoint, max_iter: u32, radius: f64) -> u32 {
    let r2 = radius * radius;
    let mut p = p;
    for n in 0..max_iter {
        let HalfSpacePoint::Finite { z, t } = p else {
            return n;
        };
        if z.re * z.re + z.im * z.im + t * t > r2 {
            return n;
        }
        p = q_hat_c(c, p);
    }
    max_iter
}

/// Escape count of the classical iteration `z ↦ z² + c`.
pub fn classical_escape_count(c: Complex64, z: Complex64, max_iter: u32, radius: f64) -> u32 {
    let r2 = radius * radius;
    let (mut x, mut y) = (z.re, z.im);
    for n in 0..max_iter {
        if x * x + y * y > r2 {
            return n;
        }
        let nx = x * x - y * y + c.re;
        let ny = 2.0 * x * y + c.im;
        x = nx;
        y = ny;
    }
    max_iter
}

/// A rectangular window in the vertical plane `y = y₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceSpec {
    pub c: Complex64,
    pub y0: f64,
    /// `[xmin, xmax, tmin, tmax]`.
    pub window: [f64; 4],
    pub width: usize,
    pub height: usize,
    pub max_iter: u32,
    pub escape_radius: f64,
}

impl SliceSpec {
    /// Plane `y = 0`, escape radius `max(2, |c|)`.
    pub fn new(c: Complex64, window: [f64; 4], width: usize, height: usize, max_iter: u32) -> Self {
        SliceSpec {
            c,
            y0: 0.0,
            window,
            width,
            height,
            max_iter,
            escape_radius: min_escape_radius(c),
        }
    }

    pub fn validate(&self) -> Result<(), JuliaError> {
        let [x0, x1, t0, t1] = self.window;
        if !check_range(x0, x1) || !check_range(t0, t1) || t0 < 0.0 || !self.y0.is_finite() {
            return Err(JuliaError::BadWindow(self.window.to_vec()));
        }
        if self.width == 0 || self.height == 0 {
            return Err(JuliaError::BadSize);
        }
        if self.max_iter == 0 {
            return Err(JuliaError::BadMaxIter);
        }
        check_radius(self.c, self.escape_radius)
    }

    /// Cell centre of column `i`.
    pub fn x_at(&self, i: usize) -> f64 {
        let [x0, x1, _, _] = self.window;
        x0 + (i as f64 + 0.5) * (x1 - x0) / self.width as f64
    }

    /// Cell centre of row `j`; row 0 is the top.
    pub fn t_at(&self, j: usize) -> f64 {
        let [_, _, t0, t1] = self.window;
        t1 - (j as f64 + 0.5) * (t1 - t0) / self.height as f64
    }
}

/// Escape counts of a slice, row-major with the top row first.
#[derive(Debug, Clone, PartialEq)]
pub struct EscapeGrid {
    pub spec: SliceSpec,
    pub counts: Vec<u32>,
}

impl EscapeGrid {
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.counts[j * self.spec.width + i]
    }

    pub fn is_interior(&self, i: usize, j: usize) -> bool {
        self.get(i, j) == self.spec.max_iter
    }
}

fn render_rows(
    width: usize,
    height: usize,
    pixel: impl Fn(usize, usize) -> u32 + Sync,
) -> Vec<u32> {
    let mut counts = vec![0u32; width * height];
    counts
        .par_chunks_mut(width)
        .enumerate()
        .for_each(|(j, row)| {
            for (i, out) in row.iter_mut().enumerate() {
                *out = pixel(i, j);
            }
        });
    counts
}

pub fn render_slice(spec: &SliceSpec) -> Result<EscapeGrid, JuliaError> {
    spec.validate()?;
    let counts = render_rows(spec.width, spec.height, |i, j| {
        let p = HalfSpacePoint::from_parts(Complex64::new(spec.x_at(i), spec.y0), spec.t_at(j));
        escape_count(spec.c, p, spec.max_iter, spec.escape_radius)
    });
    Ok(EscapeGrid {
        spec: spec.clone(),
        counts,
    })
}

/// A box `[xmin, xmax] × [ymin, ymax] × [tmin, tmax]` sampled at cell
/// centres.
#[derive(Debug, Clone, PartialEq)]
pub struct VolumeSpec {
    pub c: Complex64,
    /// `[xmin, xmax, ymin, ymax, tmin, tmax]`.
    pub window: [f64; 6],
    pub nx: usize,
    pub ny: usize,
    pub nt: usize,
    pub max_iter: u32,
    pub escape_radius: f64,
}

impl VolumeSpec {
    pub fn validate(&self) -> Result<(), JuliaError> {
        let w = self.window;
        if !check_range(w[0], w[1]) || !check_range(w[2], w[3]) || !check_range(w[4], w[5]) || w[4] < 0.0 {
            return Err(JuliaError::BadWindow(w.to_vec()));
        }
        if self.nx == 0 || self.ny == 0 || self.nt == 0 {
            return Err(JuliaError::BadSize);
        }
        if self.max_iter == 0 {
            return Err(JuliaError::BadMaxIter);
        }
        check_radius(self.c, self.escape_radius)
    }

    /// The slice through layer `k`.
    pub fn layer(&self, k: usize) -> SliceSpec {
        let w = self.window;
        SliceSpec {
            c: self.c,
            y0: w[2] + (k as f64 + 0.5) * (w[3] - w[2]) / self.ny as f64,
            window: [w[0], w[1], w[4], w[5]],
            width: self.nx,
            height: self.nt,
            max_iter: self.max_iter,
            escape_radius: self.escape_radius,
        }
    }
}

/// Counts stored layer by layer in `y`; each layer is laid out like an
/// [`EscapeGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct VolumeGrid {
    pub spec: VolumeSpec,
    pub counts: Vec<u32>,
}

impl VolumeGrid {
    pub fn get(&self, i: usize, k: usize, j: usize) -> u32 {
        self.counts[(k * self.spec.nt + j) * self.spec.nx + i]
    }

    /// Sample point of voxel `(i, k, j)` as `[x, y, t]`.
    pub fn point(&self, i: usize, k: usize, j: usize) -> [f64; 3] {
        let layer = self.spec.layer(k);
        [layer.x_at(i), layer.y0, layer.t_at(j)]
    }

    /// `x,y,t,count` rows under a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,t,count\n");
        for k in 0..self.spec.ny {
            for j in 0..self.spec.nt {
                for i in 0..self.spec.nx {
                    let [x, y, t] = self.point(i, k, j);
                    out.push_str(&format!("{x},{y},{t},{}\n", self.get(i, k, j)));
                }
            }
        }
        out
    }
}

pub fn render_volume(spec: &VolumeSpec) -> Result<VolumeGrid, JuliaError> {
    spec.validate()?;
    let layers: Vec<SliceSpec> = (0..spec.ny).map(|k| spec.layer(k)).collect();
    let counts = render_rows(spec.nx, spec.ny * spec.nt, |i, row| {
        let layer = &layers[row / spec.nt];
        let p = HalfSpacePoint::from_parts(Complex64::new(layer.x_at(i), layer.y0), layer.t_at(row % spec.nt));
        escape_count(spec.c, p, spec.max_iter, spec.escape_radius)
    });
    Ok(VolumeGrid {
        spec: spec.clone(),
        counts,
    })
}

/// Summary numbers of a slice.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceStats {
    pub interior_fraction: f64,
    /// Share of pixels whose classification differs from their mirror
    /// image under `x ↦ −x` (column reversal).
    pub symmetry_residual: f64,
    /// `[xmin, xmax, tmin, tmax]` of the interior pixel centres.
    pub bounding_box: Option<[f64; 4]>,
}

pub fn slice_stats(grid: &EscapeGrid) -> SliceStats {
    let (w, h) = (grid.spec.width, grid.spec.height);
    let total = (w * h) as f64;
    let mut interior = 0usize;
    let mut asymmetric = 0usize;
    let mut bbox: Option<[f64; 4]> = None;
    for j in 0..h {
        for i in 0..w {
            let inside = grid.is_interior(i, j);
            if inside != grid.is_interior(w - 1 - i, j) {
                asymmetric += 1;
            }
            if inside {
                interior += 1;
                let (x, t) = (grid.spec.x_at(i), grid.spec.t_at(j));
                bbox = Some(match bbox {
                    None => [x, x, t, t],
                    Some(b) => [b[0].min(x), b[1].max(x), b[2].min(t), b[3].max(t)],
                });
            }
        }
    }
    SliceStats {
        interior_fraction: interior as f64 / total,
        symmetry_residual: asymmetric as f64 / total,
        bounding_box: bbox,
    }
}

/// Escape counts along the vertical axis `(0, 0, t)`.
pub fn axis_line_counts(c: Complex64, heights: &[f64], max_iter: u32, radius: f64) -> Vec<u32> {
    heights
        .iter()
        .map(|&t| escape_count(c, HalfSpacePoint::from_parts(Complex64::new(0.0, 0.0), t), max_iter, radius))
        .collect()
}
