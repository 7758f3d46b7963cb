//! Dispersion function of the matching system and the ground-state eigenvalue.
//!
//! Eigenvalues of `H_β = ½Δ + βv` (with `v` the unit-ball indicator) are the
//! zeros of the dispersion function
//!
//! ```text
//! d(β, k) = √2·k·g(β − k²) + f(β − k²),    λ = k²,
//! ```
//!
//! where `f(x) = cos √(2x)` and `g(x) = sin √(2x) / √(2x)` are entire, so `d`
//! is entire in `(β, k)` and carries no branch point at `λ = β`. A simple
//! positive eigenvalue `λ₀(β) = γ²` bifurcates from the continuous-spectrum
//! edge at the critical coupling `β_cr = π²/8`; the root `γ(β)` of
//! `d(β, ·) = 0` continues analytically to `γ < 0` below `β_cr`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::special::{cos_sqrt2x, sinc_sqrt2x, sinc_sqrt2x_prime};

/// Critical coupling `π²/8` for the unit-ball indicator potential in d = 3.
pub const BETA_CR: f64 = std::f64::consts::PI * std::f64::consts::PI / 8.0;

/// Half-width of the near-critical window in `β` where the ground-state
/// machinery is trusted. Validated by grid scans; see the module tests.
pub const NEAR_CRITICAL_WINDOW: f64 = 0.6;

/// Absolute tolerance on the root `γ` of the dispersion function.
const ROOT_TOL: f64 = 1e-13;

/// Inverse temperature together with its signed distance to criticality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Coupling {
    beta: f64,
}

impl Coupling {
    pub fn new(beta: f64) -> Result<Self> {
        if !beta.is_finite() || beta < 0.0 {
            return Err(Error::InvalidParams(format!(
                "beta must be finite and >= 0, got {beta}"
            )));
        }
        Ok(Self { beta })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Signed distance `β − β_cr`, recomputed on demand.
    pub fn delta(&self) -> f64 {
        self.beta - BETA_CR
    }

    pub fn is_near_critical(&self) -> bool {
        self.delta().abs() <= NEAR_CRITICAL_WINDOW
    }
}

/// Spectral parameter `λ` with its branch-resolved square root `√(2λ)`.
///
/// The branch is principal: `Re √(2λ) > 0` for `λ` off the closed negative
/// real axis, which the constructor rejects.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    lambda: Complex64,
    sqrt2lambda: Complex64,
}

impl SpectralPoint {
    pub fn new(lambda: Complex64) -> Result<Self> {
        if lambda.im == 0.0 && lambda.re <= 0.0 {
            return Err(Error::OnBranchCut(lambda));
        }
        Ok(Self {
            lambda,
            sqrt2lambda: (2.0 * lambda).sqrt(),
        })
    }

    pub fn real(lambda: f64) -> Result<Self> {
        Self::new(Complex64::new(lambda, 0.0))
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn sqrt2lambda(&self) -> Complex64 {
        self.sqrt2lambda
    }
}

/// Ground-state data at a coupling: the continued root `γ` of the dispersion
/// function, the eigenvalue `λ₀ = γ²` when one exists, and `∂d/∂λ` at the
/// pole (the quantity residues divide by).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GroundState {
    /// Eigenvalue `λ₀(β) = γ²`; `None` below criticality.
    pub lambda0: Option<f64>,
    /// Continued square root `γ(β)`; negative below `β_cr`.
    pub gamma: f64,
    /// `∂d/∂λ` at `λ₀`, i.e. `d_k(β, γ) / (2γ)`; `None` at `γ = 0`.
    pub d_lambda_deriv: Option<f64>,
}

/// Dispersion function `d(β, k) = √2·k·g(β − k²) + f(β − k²)`.
///
/// Entire in `k`; equals the determinant factor of the `r = 1` matching
/// system wherever both are defined.
pub fn dispersion(c: &Coupling, k: Complex64) -> Complex64 {
    dispersion_at(c.beta, k)
}

fn dispersion_at(beta: f64, k: Complex64) -> Complex64 {
    let x = beta - k * k;
    std::f64::consts::SQRT_2 * k * sinc_sqrt2x(x) + cos_sqrt2x(x)
}

/// `∂d/∂k = √2·g(x) + 2k·g(x) − 2√2·k²·g′(x)` with `x = β − k²`.
pub fn dispersion_dk(c: &Coupling, k: Complex64) -> Complex64 {
    dispersion_dk_at(c.beta, k)
}

fn dispersion_dk_at(beta: f64, k: Complex64) -> Complex64 {
    let x = beta - k * k;
    let g = sinc_sqrt2x(x);
    let gp = sinc_sqrt2x_prime(x);
    std::f64::consts::SQRT_2 * g + 2.0 * k * g - 2.0 * std::f64::consts::SQRT_2 * k * k * gp
}

/// `∂d/∂β = √2·k·g′(x) − g(x)` with `x = β − k²` (uses `f′ = −g`).
pub fn dispersion_dbeta(c: &Coupling, k: Complex64) -> Complex64 {
    let x = c.beta - k * k;
    std::f64::consts::SQRT_2 * k * sinc_sqrt2x_prime(x) - sinc_sqrt2x(x)
}

/// Critical coupling found as the root of `β ↦ d(β, 0) = cos √(2β)` on
/// `[1, 1.5]` by safeguarded Newton. Agrees with `π²/8` to 1e-12.
pub fn critical_coupling() -> f64 {
    let f = |b: f64| cos_sqrt2x(Complex64::new(b, 0.0)).re;
    let fp = |b: f64| -sinc_sqrt2x(Complex64::new(b, 0.0)).re;
    let (mut lo, mut hi) = (1.0, 1.5);
    let mut b = 1.25;
    for _ in 0..60 {
        let v = f(b);
        if v == 0.0 {
            return b;
        }
        if v > 0.0 {
            lo = b;
        } else {
            hi = b;
        }
        let step = v / fp(b);
        if step.abs() < 1e-15 {
            return b;
        }
        let next = b - step;
        b = if next > lo && next < hi {
            next
        } else {
            0.5 * (lo + hi)
        };
    }
    b
}

/// Find the real root `γ` of `d(β, ·)` nearest zero: Newton initialized at
/// `k₀ = δ/√2` with a bisection safeguard on an expanding bracket.
///
/// Requires `|β − β_cr| ≤ NEAR_CRITICAL_WINDOW`, where grid scans confirm the
/// root is unique in the search window `|k| ≤ 2|δ| + 0.1`.
pub fn ground_state(c: &Coupling) -> Result<GroundState> {
    let delta = c.delta();
    if delta.abs() > NEAR_CRITICAL_WINDOW {
        return Err(Error::OutOfWindow {
            beta: c.beta,
            window: NEAR_CRITICAL_WINDOW,
        });
    }
    let window = 2.0 * delta.abs() + 0.1;
    let d = |k: f64| dispersion_at(c.beta, Complex64::new(k, 0.0)).re;
    let dk = |k: f64| dispersion_dk_at(c.beta, Complex64::new(k, 0.0)).re;

    let mut k = delta / std::f64::consts::SQRT_2;
    let mut converged = false;
    for _ in 0..60 {
        let slope = dk(k);
        if slope.abs() < 1e-12 {
            break;
        }
        let step = d(k) / slope;
        k -= step;
        if k.abs() > window {
            break;
        }
        if step.abs() < ROOT_TOL {
            converged = true;
            break;
        }
    }

    if !converged {
        k = bisect_root(&d, delta, window)?;
        // two polishing Newton steps from the bisection estimate
        for _ in 0..2 {
            let slope = dk(k);
            if slope.abs() > 1e-12 {
                k -= d(k) / slope;
            }
        }
    }

    if d(k).abs() > 1e-11 || k.abs() > window {
        return Err(Error::NoRootInWindow {
            beta: c.beta,
            window,
        });
    }

    let gamma = if k.abs() <= ROOT_TOL { 0.0 } else { k };
    Ok(GroundState {
        lambda0: if delta >= 0.0 {
            Some(gamma * gamma)
        } else {
            None
        },
        gamma,
        d_lambda_deriv: if gamma != 0.0 {
            Some(dk(gamma) / (2.0 * gamma))
        } else {
            None
        },
    })
}

/// Bisection on `[min(0, 2δ), max(0, 2δ)]`, expanded geometrically until the
/// sign changes or the window is exhausted.
fn bisect_root(d: &dyn Fn(f64) -> f64, delta: f64, window: f64) -> Result<f64> {
    let (mut lo, mut hi) = if delta >= 0.0 {
        (0.0, (2.0 * delta).max(1e-6))
    } else {
        ((2.0 * delta).min(-1e-6), 0.0)
    };
    let mut grow = 1.6;
    while d(lo) * d(hi) > 0.0 {
        if delta >= 0.0 {
            hi *= grow;
            if hi > window {
                return Err(Error::NoRootInWindow {
                    beta: BETA_CR + delta,
                    window,
                });
            }
        } else {
            lo *= grow;
            if -lo > window {
                return Err(Error::NoRootInWindow {
                    beta: BETA_CR + delta,
                    window,
                });
            }
        }
        grow *= 1.3;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if d(lo) * d(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < ROOT_TOL {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn ck(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn dispersion_known_values() {
        let crit = Coupling::new(BETA_CR).unwrap();
        assert!(dispersion(&crit, ck(0.0)).norm() < 1e-15);

        let one = Coupling::new(1.0).unwrap();
        let expect = 2.0f64.sqrt().cos();
        assert!((dispersion(&one, ck(0.0)).re - expect).abs() < 1e-14);

        // beta = 0, lambda = 1/2: trig collapses to sinh + cosh = e^{sqrt(2*lambda)}
        let free = Coupling::new(0.0).unwrap();
        let k = ck(0.5f64.sqrt());
        assert!((dispersion(&free, k).re - std::f64::consts::E).abs() < 1e-14);
        assert_eq!(dispersion(&free, k).im, 0.0);
    }

    #[test]
    fn dispersion_dk_known_values() {
        let crit = Coupling::new(BETA_CR).unwrap();
        let expect = 2.0 * std::f64::consts::SQRT_2 / std::f64::consts::PI;
        assert!((dispersion_dk(&crit, ck(0.0)).re - expect).abs() < 1e-14);

        let one = Coupling::new(1.0).unwrap();
        assert!((dispersion_dk(&one, ck(0.0)).re - 2.0f64.sqrt().sin()).abs() < 1e-14);

        let c = Coupling::new(1.2).unwrap();
        let h = 1e-6;
        let fd = (dispersion(&c, ck(0.05 + h)) - dispersion(&c, ck(0.05 - h))) / (2.0 * h);
        let an = dispersion_dk(&c, ck(0.05));
        assert!((an - fd).norm() < 1e-7 * an.norm());
    }

    #[test]
    fn dispersion_dbeta_known_values() {
        let crit = Coupling::new(BETA_CR).unwrap();
        let expect = -2.0 / std::f64::consts::PI;
        assert!((dispersion_dbeta(&crit, ck(0.0)).re - expect).abs() < 1e-14);

        let one = Coupling::new(1.0).unwrap();
        let expect = -(2.0f64.sqrt().sin()) / 2.0f64.sqrt();
        assert!((dispersion_dbeta(&one, ck(0.0)).re - expect).abs() < 1e-14);

        let h = 1e-6;
        let k = ck(0.1);
        let fd = (dispersion(&Coupling::new(1.3 + h).unwrap(), k)
            - dispersion(&Coupling::new(1.3 - h).unwrap(), k))
            / (2.0 * h);
        let an = dispersion_dbeta(&Coupling::new(1.3).unwrap(), k);
        assert!((an - fd).norm() < 1e-7 * an.norm());
    }

    #[test]
    fn critical_coupling_is_pi_sq_over_8() {
        let bc = critical_coupling();
        assert!((bc - BETA_CR).abs() < 1e-12);
        assert!(dispersion(&Coupling::new(bc).unwrap(), ck(0.0)).norm() < 1e-12);
        // subcritical value stays positive
        assert!(dispersion(&Coupling::new(1.0).unwrap(), ck(0.0)).re > 0.0);
    }

    #[test]
    fn ground_state_supercritical() {
        let c = Coupling::new(BETA_CR + 0.02).unwrap();
        let gs = ground_state(&c).unwrap();
        let lambda0 = gs.lambda0.unwrap();
        let leading = 0.5 * 0.02f64.powi(2);
        assert!((lambda0 - leading).abs() < 0.03 * leading);
        assert!(gs.gamma > 0.0);
        assert!((gs.gamma * gs.gamma - lambda0).abs() <= 1e-12 * lambda0);
        assert!(dispersion(&c, ck(gs.gamma)).norm() < 1e-12);
        // residues divide by d' — check it against the k-derivative
        let dl = gs.d_lambda_deriv.unwrap();
        assert!((dl - dispersion_dk(&c, ck(gs.gamma)).re / (2.0 * gs.gamma)).abs() < 1e-14);
    }

    #[test]
    fn ground_state_critical_and_subcritical() {
        let crit = Coupling::new(BETA_CR).unwrap();
        let gs = ground_state(&crit).unwrap();
        assert_eq!(gs.gamma, 0.0);
        assert_eq!(gs.lambda0, Some(0.0));

        let c = Coupling::new(BETA_CR - 0.02).unwrap();
        let gs = ground_state(&c).unwrap();
        assert!(gs.lambda0.is_none());
        let expect = -0.02 / std::f64::consts::SQRT_2;
        assert!((gs.gamma - expect).abs() < 0.03 * expect.abs());
    }

    #[test]
    fn ground_state_out_of_window() {
        let c = Coupling::new(BETA_CR + 1.0).unwrap();
        assert!(matches!(ground_state(&c), Err(Error::OutOfWindow { .. })));
    }

    #[test]
    fn no_spectrum_above_beta() {
        for beta in [0.5, 1.0, BETA_CR, 1.5, 1.8] {
            let c = Coupling::new(beta).unwrap();
            for i in 0..=100 {
                let lambda = beta + 5.0 * i as f64 / 100.0;
                let k = ck(lambda.sqrt());
                assert!(
                    dispersion(&c, k).re > 0.0,
                    "d vanished at beta={beta}, lambda={lambda}"
                );
            }
        }
    }

    #[test]
    fn subcritical_dispersion_positive() {
        for i in 0..25 {
            let beta = 0.1 + (BETA_CR - 1e-6 - 0.1) * i as f64 / 24.0;
            let c = Coupling::new(beta).unwrap();
            for j in 0..=300 {
                let k = ck(3.0 * j as f64 / 300.0);
                assert!(dispersion(&c, k).re > 0.0);
            }
        }
    }

    #[test]
    fn eigenvalue_asymptotic_constant() {
        let delta = 1e-3;
        let gs = ground_state(&Coupling::new(BETA_CR + delta).unwrap()).unwrap();
        let ratio = gs.lambda0.unwrap() / (delta * delta);
        assert!((0.495..=0.505).contains(&ratio), "ratio = {ratio}");
    }

    #[test]
    fn gamma_bracketing() {
        for delta in [0.01, 0.05, 0.1, -0.01, -0.05, -0.1] {
            let gs = ground_state(&Coupling::new(BETA_CR + delta).unwrap()).unwrap();
            let g = gs.gamma.abs();
            assert!(0.5 * delta.abs() < g && g < delta.abs(), "delta={delta}, gamma={g}");
        }
    }

    #[test]
    fn derivatives_match_finite_differences_on_random_points() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let h = 1e-6;
        for _ in 0..100 {
            let beta = rng.random_range(0.05..1.8);
            let k = Complex64::new(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5));
            let c = Coupling::new(beta).unwrap();

            let fd_k = (dispersion(&c, k + h) - dispersion(&c, k - h)) / (2.0 * h);
            let an_k = dispersion_dk(&c, k);
            assert!((an_k - fd_k).norm() <= 1e-7 * (1.0 + an_k.norm()));

            let fd_b = (dispersion(&Coupling::new(beta + h).unwrap(), k)
                - dispersion(&Coupling::new(beta - h).unwrap(), k))
                / (2.0 * h);
            let an_b = dispersion_dbeta(&c, k);
            assert!((an_b - fd_b).norm() <= 1e-7 * (1.0 + an_b.norm()));
        }
    }

    #[test]
    fn spectral_point_branch() {
        let p = SpectralPoint::new(Complex64::new(-1.0, 0.5)).unwrap();
        assert!(p.sqrt2lambda().re > 0.0);
        assert!((p.sqrt2lambda() * p.sqrt2lambda() - 2.0 * p.lambda()).norm() < 1e-14);
        assert!(SpectralPoint::real(-1.0).is_err());
        assert!(SpectralPoint::real(0.0).is_err());
    }

    proptest! {
        #[test]
        fn schwarz_reflection(beta in 0.0..2.0f64, re in -2.0..2.0f64, im in 0.01..2.0f64) {
            let c = Coupling::new(beta).unwrap();
            let k = Complex64::new(re, im);
            let refl = dispersion(&c, k.conj()) - dispersion(&c, k).conj();
            prop_assert!(refl.norm() < 1e-12 * (1.0 + dispersion(&c, k).norm()));
        }
    }
}
