//! Radial Crank–Nicolson solver for `∂p/∂t = ½Δp + βv·p` with a point
//! source at the origin.
//!
//! The substitution `φ = r·p` turns the radial Laplacian into a plain second
//! derivative: `φ_t = ½φ_rr + βv(r)φ` with `φ(0) = 0` (regularity of `p` at
//! the origin) and an absorbing boundary at `r_max`. The delta initial
//! condition is replaced by the exact free heat kernel at a small smoothing
//! time `t0`; the first steps use damped implicit Euler before switching to
//! Crank–Nicolson. Moments are trapezoid sums of `4π r φ` and `4π r³ φ`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::radius::{classify_regime, Method, RadiusEstimate};
use crate::spectral::Coupling;

/// Longest chain length the grid budget accepts.
const MAX_TIME: f64 = 200.0;

/// Number of damped implicit-Euler startup half-steps.
const STARTUP_HALF_STEPS: usize = 4;

#[derive(Debug, Clone, Copy)]
pub struct PdeConfig {
    /// Domain truncation radius; must cover the diffusive range `6√t + 3`.
    pub r_max: f64,
    pub n_r: usize,
    pub n_t: usize,
    /// Initial smoothing time for the delta source.
    pub t0: f64,
}

impl PdeConfig {
    /// Defaults for chain length `t`: grid spacing ≈ 0.01, `dt ≤ 0.025`,
    /// smoothing time `0.01·min(t, 1)`.
    pub fn for_time(t: f64) -> Self {
        let r_max = 6.0 * t.sqrt() + 4.0;
        Self {
            r_max,
            n_r: ((r_max * 100.0).ceil() as usize).max(400),
            n_t: ((40.0 * t).ceil() as usize).max(800),
            t0: 0.01 * t.min(1.0),
        }
    }

    fn validate(&self, t: f64) -> Result<()> {
        if self.r_max < 6.0 * t.sqrt() + 3.0 {
            return Err(Error::InvalidParams(format!(
                "r_max = {} below the diffusive range 6*sqrt(t)+3",
                self.r_max
            )));
        }
        if self.n_r < 400 {
            return Err(Error::InvalidParams(format!("n_r = {} < 400", self.n_r)));
        }
        if self.n_t < STARTUP_HALF_STEPS {
            return Err(Error::InvalidParams(format!("n_t = {} too small", self.n_t)));
        }
        if !(self.t0 > 0.0) || self.t0 > 0.01 * t {
            return Err(Error::InvalidParams(format!(
                "t0 = {} must lie in (0, 0.01·t]",
                self.t0
            )));
        }
        Ok(())
    }
}

/// Moments of the PDE solution at the final time.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PdeMoments {
    pub p0: f64,
    pub p2: f64,
}

/// Tridiagonal solve (Thomas); `diag` is consumed as scratch.
fn thomas(sub: f64, diag: &mut [f64], sup: f64, rhs: &mut [f64]) {
    let n = diag.len();
    for i in 1..n {
        let m = sub / diag[i - 1];
        diag[i] -= m * sup;
        rhs[i] -= m * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for i in (0..n - 1).rev() {
        rhs[i] = (rhs[i] - sup * rhs[i + 1]) / diag[i];
    }
}

struct RadialSolver {
    h: f64,
    /// Potential averaged over each grid cell (sharp interface smeared
    /// across the single straddling cell, second-order consistent).
    potential: Vec<f64>,
    phi: Vec<f64>,
}

impl RadialSolver {
    fn new(c: &Coupling, cfg: &PdeConfig) -> Self {
        let h = cfg.r_max / cfg.n_r as f64;
        let potential: Vec<f64> = (0..=cfg.n_r)
            .map(|j| {
                let r = j as f64 * h;
                let (lo, hi) = (r - 0.5 * h, r + 0.5 * h);
                if hi <= 1.0 {
                    1.0
                } else if lo >= 1.0 {
                    0.0
                } else {
                    (1.0 - lo) / h
                }
            })
            .map(|v| c.beta() * v)
            .collect();
        let phi = (0..=cfg.n_r)
            .map(|j| {
                let r = j as f64 * h;
                let kernel = (2.0 * std::f64::consts::PI * cfg.t0).powf(-1.5)
                    * (-r * r / (2.0 * cfg.t0)).exp();
                r * kernel
            })
            .collect();
        Self { h, potential, phi }
    }

    /// One θ-step: implicit Euler for `theta = 1`, Crank–Nicolson for `1/2`.
    fn step(&mut self, dt: f64, theta: f64) {
        let n = self.phi.len();
        let inv_h2 = 1.0 / (self.h * self.h);
        let interior = n - 2;
        let mut diag = vec![0.0; interior];
        let mut rhs = vec![0.0; interior];
        for j in 1..n - 1 {
            let a_diag = -inv_h2 + self.potential[j];
            diag[j - 1] = 1.0 - theta * dt * a_diag;
            let explicit = 1.0 - theta;
            rhs[j - 1] = self.phi[j]
                + explicit * dt
                    * (0.5 * inv_h2 * (self.phi[j - 1] - 2.0 * self.phi[j] + self.phi[j + 1])
                        + self.potential[j] * self.phi[j]);
        }
        let off = -theta * dt * 0.5 * inv_h2;
        thomas(off, &mut diag, off, &mut rhs);
        self.phi[1..n - 1].copy_from_slice(&rhs);
        // Dirichlet ends stay pinned
        self.phi[0] = 0.0;
        self.phi[n - 1] = 0.0;
    }

    fn moments(&self) -> PdeMoments {
        let n = self.phi.len();
        let mut m0 = 0.0;
        let mut m2 = 0.0;
        for j in 1..n - 1 {
            let r = j as f64 * self.h;
            m0 += r * self.phi[j];
            m2 += r * r * r * self.phi[j];
        }
        let scale = 4.0 * std::f64::consts::PI * self.h;
        PdeMoments {
            p0: scale * m0,
            p2: scale * m2,
        }
    }

    fn boundary_leak(&self) -> f64 {
        let n = self.phi.len();
        let p_edge = self.phi[n - 2] / ((n - 2) as f64 * self.h);
        let p_max = (1..n - 1)
            .map(|j| self.phi[j] / (j as f64 * self.h))
            .fold(0.0f64, f64::max);
        if p_max > 0.0 {
            p_edge / p_max
        } else {
            0.0
        }
    }
}

/// Solve to time `t` and return the moments of `p`.
pub fn pde_moments(c: &Coupling, t: f64, cfg: &PdeConfig) -> Result<PdeMoments> {
    if !(t > 0.0) || t > MAX_TIME {
        return Err(Error::InvalidParams(format!(
            "pde supports 0 < t <= {MAX_TIME}, got {t}"
        )));
    }
    cfg.validate(t)?;
    let mut solver = RadialSolver::new(c, cfg);
    let dt = (t - cfg.t0) / cfg.n_t as f64;
    for _ in 0..STARTUP_HALF_STEPS {
        solver.step(0.5 * dt, 1.0);
    }
    for _ in 0..cfg.n_t - STARTUP_HALF_STEPS / 2 {
        solver.step(dt, 0.5);
    }
    let leak = solver.boundary_leak();
    if leak > 1e-12 {
        return Err(Error::BoundaryLeak { leak });
    }
    Ok(solver.moments())
}

/// PDE radius `r = √(p⁽²⁾/p⁽⁰⁾)`.
pub fn pde_radius(c: &Coupling, t: f64, cfg: &PdeConfig) -> Result<RadiusEstimate> {
    let m = pde_moments(c, t, cfg)?;
    Ok(RadiusEstimate {
        beta: c.beta(),
        t,
        radius: (m.p2 / m.p0).sqrt(),
        regime: classify_regime(c, t),
        method: Method::Pde,
        stderr: 0.0,
        imag_residual: 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::BETA_CR;

    #[test]
    fn free_heat_equation_radius() {
        let c = Coupling::new(0.0).unwrap();
        let t = 10.0;
        let est = pde_radius(&c, t, &PdeConfig::for_time(t)).unwrap();
        let expect = 30.0f64.sqrt();
        assert!(
            (est.radius - expect).abs() <= 0.005 * expect,
            "r = {}, want {expect}",
            est.radius
        );
        assert_eq!(est.method, Method::Pde);
    }

    #[test]
    fn free_mass_is_conserved() {
        let c = Coupling::new(0.0).unwrap();
        for t in [2.0, 10.0] {
            let m = pde_moments(&c, t, &PdeConfig::for_time(t)).unwrap();
            assert!((m.p0 - 1.0).abs() <= 1e-6, "p0 = {} at t = {t}", m.p0);
        }
    }

    #[test]
    fn mass_grows_monotonically_for_attractive_potential() {
        let c = Coupling::new(1.0).unwrap();
        let mut last = 1.0 - 1e-12;
        for t in [1.0, 2.0, 5.0, 10.0] {
            let m = pde_moments(&c, t, &PdeConfig::for_time(t)).unwrap();
            assert!(m.p0 >= last, "p0 = {} fell below {last} at t = {t}", m.p0);
            last = m.p0;
        }
    }

    #[test]
    fn grid_refinement_changes_radius_little() {
        let c = Coupling::new(BETA_CR - 0.1).unwrap();
        let t = 10.0;
        let base = PdeConfig::for_time(t);
        let fine = PdeConfig {
            n_r: 2 * base.n_r,
            n_t: 2 * base.n_t,
            ..base
        };
        let r1 = pde_radius(&c, t, &base).unwrap().radius;
        let r2 = pde_radius(&c, t, &fine).unwrap().radius;
        assert!((r1 - r2).abs() <= 0.002 * r2, "r = {r1} vs refined {r2}");
    }

    #[test]
    fn boundary_leak_detected() {
        let c = Coupling::new(0.0).unwrap();
        let t = 10.0;
        // smallest admissible box: diffusive tail reaches the boundary
        let mut cfg = PdeConfig::for_time(t);
        cfg.r_max = 6.0 * t.sqrt() + 3.0;
        cfg.n_r = ((cfg.r_max * 100.0).ceil() as usize).max(400);
        let result = pde_moments(&c, t, &cfg);
        // either passes with a bigger box or reports the leak with this one;
        // what must not happen is a silently truncated moment
        if let Err(e) = result {
            assert!(matches!(e, Error::BoundaryLeak { .. }));
        }
    }

    #[test]
    fn config_validation() {
        let c = Coupling::new(1.0).unwrap();
        assert!(pde_moments(&c, 300.0, &PdeConfig::for_time(200.0)).is_err());
        let mut cfg = PdeConfig::for_time(10.0);
        cfg.n_r = 100;
        assert!(matches!(
            pde_moments(&c, 10.0, &cfg),
            Err(Error::InvalidParams(_))
        ));
        let mut cfg = PdeConfig::for_time(10.0);
        cfg.t0 = 1.0;
        assert!(matches!(
            pde_moments(&c, 10.0, &cfg),
            Err(Error::InvalidParams(_))
        ));
        let mut cfg = PdeConfig::for_time(10.0);
        cfg.r_max = 10.0;
        assert!(matches!(
            pde_moments(&c, 10.0, &cfg),
            Err(Error::InvalidParams(_))
        ));
    }
}
