//! Extensions of rational maps from the Riemann sphere to hyperbolic 3-space.

pub mod geometry;
pub mod maps;
pub mod mobius;
pub mod star;
pub mod extensions;
pub mod julia3d;
pub mod cli;
