//! Independent estimates of the polymer radius used to validate the
//! Laplace-inversion engine: a Feynman–Kac Monte Carlo sampler of
//! Gibbs-weighted Brownian paths and a radial Crank–Nicolson solver for the
//! parabolic equation.

mod mc;
mod pde;

pub use mc::{mc_radius, McConfig};
pub use pde::{pde_moments, pde_radius, PdeConfig, PdeMoments};
