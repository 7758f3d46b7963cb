//! Closed-form resolvent kernel of `½Δ + βv − λ` with a point source at the
//! origin, its matching coefficients on the sphere `r = 1`, and its spatial
//! moments in the λ-domain.
//!
//! With `s = √(2λ)`, `x = β − λ`, and the entire kernels `f`, `g` of
//! [`crate::special`], the spherically symmetric solution is
//!
//! ```text
//! u(λ, r) = [f(x(r−1)²) − s(r−1)·g(x(r−1)²)] / (2πr·d)   for r ≤ 1,
//! u(λ, r) = e^{−s(r−1)} / (2πr·d)                        for r ≥ 1,
//! ```
//!
//! where `d` is the dispersion function. Moments `U⁽ᵛ⁾(λ) = ∫ |x|ᵛ u dx`
//! reduce to `(2/d)·[∫₀¹ r^{ν+1} N(r) dr + ∫₁^∞ r^{ν+1} e^{−s(r−1)} dr]`;
//! the exterior integral is elementary and the interior integrand is entire,
//! so a fixed 32-node Gauss–Legendre rule is exact to machine precision.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::integrate_complex;
use crate::special::{cos_sqrt2x, sinc_sqrt2x};
use crate::spectral::{Coupling, SpectralPoint};

/// Relative threshold under which `d` counts as "at the pole".
const POLE_GUARD: f64 = 1e-13;

/// Number of Gauss–Legendre nodes for the interior moment integral.
pub const INTERIOR_QUAD_NODES: usize = 32;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Region {
    Interior,
    Exterior,
}

#[derive(Debug, Clone, Copy)]
pub struct ResolventValue {
    pub value: Complex64,
    pub region: Region,
}

/// Coefficients `A`, `B` of the general spherically symmetric solution.
#[derive(Debug, Clone, Copy)]
pub struct MatchingCoefficients {
    pub a: Complex64,
    pub b: Complex64,
}

#[derive(Debug, Clone, Copy)]
pub struct ResolventMoment {
    pub nu: u32,
    pub value: Complex64,
}

/// Dispersion value at `p` together with a conditioning scale (sum of the
/// magnitudes of its two terms), used for the pole guard.
fn dispersion_scaled(c: &Coupling, p: &SpectralPoint) -> (Complex64, f64) {
    let x = c.beta() - p.lambda();
    let term1 = p.sqrt2lambda() * sinc_sqrt2x(x);
    let term2 = cos_sqrt2x(x);
    (term1 + term2, term1.norm() + term2.norm())
}

fn checked_dispersion(c: &Coupling, p: &SpectralPoint) -> Result<Complex64> {
    let (d, scale) = dispersion_scaled(c, p);
    if d.norm() < POLE_GUARD * scale.max(1.0) {
        return Err(Error::AtPole {
            dispersion_abs: d.norm(),
        });
    }
    Ok(d)
}

/// Interior numerator `N(r) = f(x(r−1)²) − s(r−1)·g(x(r−1)²)`.
///
/// Entire in all arguments; `N(0) = d` and `N(1) = 1`.
fn interior_numerator(x: Complex64, s: Complex64, r: f64) -> Complex64 {
    let rm1 = r - 1.0;
    let z = x * (rm1 * rm1);
    cos_sqrt2x(z) - s * rm1 * sinc_sqrt2x(z)
}

/// Resolvent kernel `u(λ, r)`.
///
/// `r = 0` is excluded: `u` carries the `1/(2πr)` source singularity.
pub fn resolvent_u(c: &Coupling, p: &SpectralPoint, r: f64) -> Result<ResolventValue> {
    if !r.is_finite() || r < 0.0 {
        return Err(Error::InvalidParams(format!("radius must be >= 0, got {r}")));
    }
    if r == 0.0 {
        return Err(Error::OriginSingular);
    }
    let d = checked_dispersion(c, p)?;
    let s = p.sqrt2lambda();
    if r <= 1.0 {
        let x = c.beta() - p.lambda();
        let n = interior_numerator(x, s, r);
        Ok(ResolventValue {
            value: n / (TWO_PI * r * d),
            region: Region::Interior,
        })
    } else {
        let e = (-s * (r - 1.0)).exp();
        Ok(ResolventValue {
            value: e / (TWO_PI * r * d),
            region: Region::Exterior,
        })
    }
}

/// Solve the 2×2 continuity system on the sphere `r = 1` in closed form.
pub fn matching_coefficients(c: &Coupling, p: &SpectralPoint) -> Result<MatchingCoefficients> {
    let d = checked_dispersion(c, p)?;
    let s = p.sqrt2lambda();
    let x = c.beta() - p.lambda();
    let f1 = cos_sqrt2x(x);
    let g1 = sinc_sqrt2x(x);
    let exp_minus_s = (-s).exp();
    // Cramer on  A e^{-s} - B g1 = f1/2π,   A s e^{-s} + B f1 = 2x g1/2π
    let a = (f1 * f1 + 2.0 * x * g1 * g1) / (TWO_PI * exp_minus_s * d);
    let b = (2.0 * x * g1 - s * f1) / (TWO_PI * d);
    Ok(MatchingCoefficients { a, b })
}

/// Reconstruct `u(λ, r)` from matching coefficients via the general solution
/// (source term plus `B`-mode inside, decaying `A`-mode outside).
pub fn reconstruct_from_coefficients(
    c: &Coupling,
    p: &SpectralPoint,
    m: &MatchingCoefficients,
    r: f64,
) -> Result<Complex64> {
    if r <= 0.0 {
        return Err(Error::OriginSingular);
    }
    let s = p.sqrt2lambda();
    if r <= 1.0 {
        let x = c.beta() - p.lambda();
        let z = x * (r * r);
        Ok(cos_sqrt2x(z) / (TWO_PI * r) + m.b * sinc_sqrt2x(z))
    } else {
        Ok(m.a * (-s * r).exp() / r)
    }
}

/// Exterior moment integral `∫₁^∞ r^{ν+1} e^{−s(r−1)} dr` in closed form.
fn exterior_integral(s: Complex64, nu: u32) -> Complex64 {
    let inv = 1.0 / s;
    match nu {
        0 => inv + inv * inv,
        2 => {
            let inv2 = inv * inv;
            inv + 3.0 * inv2 + 6.0 * inv2 * inv + 6.0 * inv2 * inv2
        }
        _ => unreachable!("order validated by caller"),
    }
}

/// `d`-free numerator of `U⁽ᵛ⁾`: twice the sum of the interior and exterior
/// radial integrals. `U⁽ᵛ⁾ = numerator / d`, and the residue of `U⁽ᵛ⁾` at a
/// simple zero of `d` is `numerator / (∂d/∂λ)`.
pub(crate) fn moment_numerator(
    c: &Coupling,
    p: &SpectralPoint,
    nu: u32,
    interior_nodes: usize,
) -> Result<Complex64> {
    if nu != 0 && nu != 2 {
        return Err(Error::UnsupportedOrder(nu));
    }
    let s = p.sqrt2lambda();
    let x = c.beta() - p.lambda();
    let interior = integrate_complex(0.0, 1.0, interior_nodes, |r| {
        r.powi(nu as i32 + 1) * interior_numerator(x, s, r)
    });
    Ok(2.0 * (interior + exterior_integral(s, nu)))
}

/// Spatial moment `U⁽ᵛ⁾(λ) = ∫_{ℝ³} |x|ᵛ u(λ, |x|) dx` for `ν ∈ {0, 2}`.
pub fn resolvent_moment(c: &Coupling, p: &SpectralPoint, nu: u32) -> Result<ResolventMoment> {
    resolvent_moment_with_nodes(c, p, nu, INTERIOR_QUAD_NODES)
}

/// Same as [`resolvent_moment`] with an explicit interior quadrature order
/// (used by convergence checks).
pub fn resolvent_moment_with_nodes(
    c: &Coupling,
    p: &SpectralPoint,
    nu: u32,
    interior_nodes: usize,
) -> Result<ResolventMoment> {
    if nu != 0 && nu != 2 {
        return Err(Error::UnsupportedOrder(nu));
    }
    let d = checked_dispersion(c, p)?;
    let numerator = moment_numerator(c, p, nu, interior_nodes)?;
    Ok(ResolventMoment {
        nu,
        value: numerator / d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{dispersion, ground_state, BETA_CR};

    fn point(re: f64, im: f64) -> SpectralPoint {
        SpectralPoint::new(Complex64::new(re, im)).unwrap()
    }

    #[test]
    fn interior_and_exterior_agree_on_sphere() {
        for (beta, lam) in [(1.3, (0.2, 0.1)), (0.8, (0.5, 0.0)), (BETA_CR, (0.3, -0.4))] {
            let c = Coupling::new(beta).unwrap();
            let p = point(lam.0, lam.1);
            let inside = resolvent_u(&c, &p, 1.0).unwrap();
            assert_eq!(inside.region, Region::Interior);
            let d = dispersion(&c, p.lambda().sqrt());
            let expect = 1.0 / (TWO_PI * d);
            assert!((inside.value - expect).norm() < 1e-12 * expect.norm());
            // exterior formula evaluated a hair outside
            let outside = resolvent_u(&c, &p, 1.0 + 1e-12).unwrap();
            assert!((outside.value - expect).norm() < 1e-9 * expect.norm());
        }
    }

    #[test]
    fn free_limit_recovers_heat_resolvent() {
        let c = Coupling::new(1e-12).unwrap();
        let p = point(0.5, 0.0);
        let u = resolvent_u(&c, &p, 2.0).unwrap();
        let expect = (-2.0f64).exp() / (2.0 * TWO_PI); // e^{-2}/(4π) ≈ 0.010770
        assert!((u.value.re - expect).abs() < 1e-9 * expect);
        assert!(u.value.im.abs() < 1e-15);
    }

    #[test]
    fn free_limit_family_across_radii() {
        let c = Coupling::new(1e-12).unwrap();
        for lam in [(0.3, 0.0), (1.0, 0.5), (2.0, -1.0)] {
            let p = point(lam.0, lam.1);
            let s = p.sqrt2lambda();
            for i in 0..10 {
                let r = 1.0 + 9.0 * i as f64 / 9.0;
                let u = resolvent_u(&c, &p, r).unwrap().value;
                let expect = (-s * r).exp() / (TWO_PI * r);
                assert!((u - expect).norm() <= 1e-9 * expect.norm());
            }
        }
    }

    #[test]
    fn near_origin_limit_is_regular() {
        let c = Coupling::new(1.3).unwrap();
        let p = point(0.2, 0.1);
        let u = resolvent_u(&c, &p, 1e-8).unwrap().value;
        let limit = TWO_PI * 1e-8 * u; // ≈ N(0)/d = 1
        assert!((limit - Complex64::new(1.0, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn origin_and_negative_radius_rejected() {
        let c = Coupling::new(1.0).unwrap();
        let p = point(0.5, 0.0);
        assert!(matches!(resolvent_u(&c, &p, 0.0), Err(Error::OriginSingular)));
        assert!(resolvent_u(&c, &p, -1.0).is_err());
    }

    #[test]
    fn at_pole_detected() {
        let c = Coupling::new(BETA_CR + 0.1).unwrap();
        let gs = ground_state(&c).unwrap();
        let p = SpectralPoint::real(gs.lambda0.unwrap()).unwrap();
        assert!(matches!(
            resolvent_u(&c, &p, 0.5),
            Err(Error::AtPole { .. })
        ));
    }

    #[test]
    fn matching_system_residual_small() {
        let c = Coupling::new(1.3).unwrap();
        let p = point(0.2, 0.1);
        let m = matching_coefficients(&c, &p).unwrap();
        let s = p.sqrt2lambda();
        let x = c.beta() - p.lambda();
        let f1 = cos_sqrt2x(x);
        let g1 = sinc_sqrt2x(x);
        let e = (-s).exp();
        let r1 = m.a * e - m.b * g1 - f1 / TWO_PI;
        let r2 = -m.a * s * e - m.b * f1 + 2.0 * x * g1 / TWO_PI;
        let scale = 1.0 + m.a.norm() + m.b.norm();
        assert!(r1.norm() <= 1e-12 * scale);
        assert!(r2.norm() <= 1e-12 * scale);
    }

    #[test]
    fn reconstruction_matches_closed_form() {
        for (beta, lam) in [(1.3, (0.2, 0.1)), (1e-12, (0.5, 0.0))] {
            let c = Coupling::new(beta).unwrap();
            let p = point(lam.0, lam.1);
            let m = matching_coefficients(&c, &p).unwrap();
            for r in [0.3, 0.7, 1.0, 1.5, 3.0] {
                let direct = resolvent_u(&c, &p, r).unwrap().value;
                let rebuilt = reconstruct_from_coefficients(&c, &p, &m, r).unwrap();
                assert!(
                    (direct - rebuilt).norm() <= 1e-10 * direct.norm(),
                    "mismatch at beta={beta}, r={r}"
                );
            }
        }
    }

    #[test]
    fn free_limit_coefficient_reconstructs_exterior() {
        let c = Coupling::new(1e-12).unwrap();
        let p = point(0.5, 0.0);
        let m = matching_coefficients(&c, &p).unwrap();
        let u2 = reconstruct_from_coefficients(&c, &p, &m, 2.0).unwrap();
        let expect = (-2.0f64).exp() / (2.0 * TWO_PI);
        assert!((u2.re - expect).abs() < 1e-9 * expect);
    }

    #[test]
    fn free_moments_match_brownian_transforms() {
        let c = Coupling::new(1e-12).unwrap();
        let p = point(0.7, 0.0);
        let m0 = resolvent_moment(&c, &p, 0).unwrap().value;
        assert!((m0.re - 1.0 / 0.7).abs() <= 1e-8 * (1.0 / 0.7));
        assert!(m0.im.abs() < 1e-14);

        for lam in [0.3, 0.7, 1.9] {
            let p = point(lam, 0.0);
            let m2 = resolvent_moment(&c, &p, 2).unwrap().value;
            let expect = 3.0 / (lam * lam);
            assert!((m2.re - expect).abs() <= 1e-8 * expect);
        }
    }

    #[test]
    fn unsupported_order_rejected() {
        let c = Coupling::new(1.0).unwrap();
        let p = point(0.5, 0.0);
        assert!(matches!(
            resolvent_moment(&c, &p, 1),
            Err(Error::UnsupportedOrder(1))
        ));
    }

    #[test]
    fn interior_quadrature_converged_at_32_nodes() {
        let c = Coupling::new(1.3).unwrap();
        let p = point(0.2, 0.1);
        for nu in [0, 2] {
            let coarse = moment_numerator(&c, &p, nu, 32).unwrap();
            let fine = moment_numerator(&c, &p, nu, 64).unwrap();
            assert!((coarse - fine).norm() <= 1e-12 * fine.norm());
        }
    }

    #[test]
    fn c1_matching_at_sphere() {
        let h = 1e-6;
        for beta in [0.9, 1.3, BETA_CR + 0.2] {
            let c = Coupling::new(beta).unwrap();
            for lam in [(0.3, 0.0), (0.2, 0.4), (1.5, -0.7)] {
                let p = point(lam.0, lam.1);
                let u = |r: f64| resolvent_u(&c, &p, r).unwrap().value;
                let left = (u(1.0) - u(1.0 - h)) / h;
                let right = (u(1.0 + h) - u(1.0)) / h;
                assert!(
                    (left - right).norm() <= 1e-5 * left.norm().max(1.0),
                    "derivative jump at beta={beta}, lambda={lam:?}"
                );
            }
        }
    }

    #[test]
    fn schwarz_reflection() {
        let c = Coupling::new(1.3).unwrap();
        let p = point(0.2, 0.4);
        let pc = point(0.2, -0.4);
        for r in [0.4, 1.0, 2.5] {
            let u = resolvent_u(&c, &p, r).unwrap().value;
            let uc = resolvent_u(&c, &pc, r).unwrap().value;
            assert!((uc - u.conj()).norm() < 1e-13 * u.norm());
        }
    }

    #[test]
    fn eigenfunction_matching_at_pole() {
        // d = 0 is equivalent to √(2λ₀) = −√(2(β−λ₀))·cot √(2(β−λ₀))
        let c = Coupling::new(BETA_CR + 0.1).unwrap();
        let gs = ground_state(&c).unwrap();
        let lambda0 = gs.lambda0.unwrap();
        let w = (2.0 * (c.beta() - lambda0)).sqrt();
        let lhs = (2.0 * lambda0).sqrt();
        let rhs = -w * w.cos() / w.sin();
        assert!((lhs - rhs).abs() < 1e-10);
    }
}
