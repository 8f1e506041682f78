use std::io::{self, Write};

use crate::julia3d::EscapeGrid;

/// Interior (count = max_iter) is black, immediate escape is white.
pub fn pixel_value(count: u32, max_iter: u32) -> u8 {
    let c = u64::from(count.min(max_iter));
    (255 - (255 * c) / u64::from(max_iter)) as u8
}

/// Binary PGM (P5) image of the grid.
pub fn pgm_bytes(grid: &EscapeGrid) -> Vec<u8> {
    let (w, h) = (grid.spec.width, grid.spec.height);
    let mut out = format!("P5\n{w} {h}\n255\n").into_bytes();
    out.reserve(w * h);
    out.extend(grid.counts.iter().map(|&c| pixel_value(c, grid.spec.max_iter)));
    out
}

pub fn write_pgm<W: Write>(grid: &EscapeGrid, mut out: W) -> io::Result<()> {
    out.write_all(&pgm_bytes(grid))
}
