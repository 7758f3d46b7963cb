//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("spectral parameter {0} lies on the closed negative real axis (branch cut)")]
    OnBranchCut(num_complex::Complex64),

    #[error("no dispersion root found near k = 0 for beta = {beta} (search window |k| <= {window})")]
    NoRootInWindow { beta: f64, window: f64 },

    #[error("spectral parameter too close to the ground-state pole (|d| = {dispersion_abs:.3e})")]
    AtPole { dispersion_abs: f64 },

    #[error("resolvent kernel has a 1/r source singularity at r = 0")]
    OriginSingular,

    #[error("unsupported moment order nu = {0} (only 0 and 2)")]
    UnsupportedOrder(u32),

    #[error("contour node within {distance:.3e} of the ground-state pole")]
    PoleOnContour { distance: f64 },

    #[error("wrong regime for residue split: {0}")]
    WrongRegime(String),

    #[error("Monte Carlo work {required:.3e} path-steps exceeds budget {budget:.3e}")]
    WorkBudgetExceeded { required: f64, budget: f64 },

    #[error("degenerate importance weights: effective sample size {ess:.1} < {min_ess}")]
    DegenerateWeights { ess: f64, min_ess: f64 },

    #[error("PDE domain too small: boundary density {leak:.3e} of interior maximum")]
    BoundaryLeak { leak: f64 },

    #[error("beta = {beta} outside the supported window [0, beta_cr + {window}]")]
    OutOfWindow { beta: f64, window: f64 },

    #[error("Stokes-Einstein relation is undefined at beta = 0")]
    ZeroBeta,
}

pub type Result<T> = std::result::Result<T, Error>;
