//! Analytic machinery for the globule–coil transition of a mean-field
//! polymer: the dispersion function and ground-state eigenvalue of
//! `H_β = ½Δ + βv`, the closed-form resolvent kernel, rotated-contour
//! Laplace inversion with residue extraction, the polymer radius
//! `r(β, t)`, and two independent oracles (Feynman–Kac Monte Carlo and a
//! radial Crank–Nicolson solver) for cross-validation.

pub mod error;
pub mod inversion;
pub mod oracles;
pub mod quad;
pub mod radius;
pub mod resolvent;
pub mod special;
pub mod spectral;
pub mod validation;

pub use error::{Error, Result};
pub use spectral::{Coupling, GroundState, SpectralPoint, BETA_CR, NEAR_CRITICAL_WINDOW};
