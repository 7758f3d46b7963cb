//! Entire-function kernels shared by the dispersion relation and the resolvent.
//!
//! The closed-form solution of the matching problem is written in terms of
//! `cos √(2x)` and `sin √(2x) / √(2x)`. Both are entire functions of `x`
//! (their power series contain only integer powers of `x`), so evaluating
//! them as functions of `x = β − λ` removes the apparent branch point at
//! `λ = β`. Near `x = 0` the closed forms are replaced by truncated Taylor
//! series to avoid 0/0 and cancellation.

use num_complex::Complex64;

/// Switch radius between the Taylor series and the trigonometric closed form.
const SERIES_RADIUS: f64 = 1e-4;

/// `f(x) = cos √(2x)`, entire in `x`.
///
/// `f(x) = Σ (−1)ⁿ (2x)ⁿ / (2n)! = 1 − x + x²/6 − x³/90 + …`
pub fn cos_sqrt2x(x: Complex64) -> Complex64 {
    if x.norm() < SERIES_RADIUS {
        // 1 - x + x^2/6 - x^3/90 + x^4/2520 - x^5/113400
        let mut acc = Complex64::new(-1.0 / 113_400.0, 0.0);
        for c in [1.0 / 2520.0, -1.0 / 90.0, 1.0 / 6.0, -1.0, 1.0] {
            acc = acc * x + c;
        }
        acc
    } else {
        (2.0 * x).sqrt().cos()
    }
}

/// `g(x) = sin √(2x) / √(2x)`, entire in `x`.
///
/// `g(x) = Σ (−1)ⁿ (2x)ⁿ / (2n+1)! = 1 − x/3 + x²/30 − x³/630 + …`
pub fn sinc_sqrt2x(x: Complex64) -> Complex64 {
    if x.norm() < SERIES_RADIUS {
        // 1 - x/3 + x^2/30 - x^3/630 + x^4/22680 - x^5/1247400
        let mut acc = Complex64::new(-1.0 / 1_247_400.0, 0.0);
        for c in [
            1.0 / 22_680.0,
            -1.0 / 630.0,
            1.0 / 30.0,
            -1.0 / 3.0,
            1.0,
        ] {
            acc = acc * x + c;
        }
        acc
    } else {
        let y = (2.0 * x).sqrt();
        y.sin() / y
    }
}

/// `g′(x)`, the `x`-derivative of [`sinc_sqrt2x`].
///
/// Identity used away from the origin: `g′ = (f − g) / (2x)`; the series
/// `−1/3 + x/15 − x²/210 + …` takes over inside the switch radius where the
/// subtraction would cancel.
pub fn sinc_sqrt2x_prime(x: Complex64) -> Complex64 {
    if x.norm() < SERIES_RADIUS {
        // -1/3 + x/15 - x^2/210 + x^3/5670 - x^4/249480
        let mut acc = Complex64::new(-1.0 / 249_480.0, 0.0);
        for c in [1.0 / 5670.0, -1.0 / 210.0, 1.0 / 15.0, -1.0 / 3.0] {
            acc = acc * x + c;
        }
        acc
    } else {
        (cos_sqrt2x(x) - sinc_sqrt2x(x)) / (2.0 * x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn matches_trig_forms_on_real_axis() {
        for x in [0.3, 1.0, 2.5, 7.0] {
            let y = (2.0 * x as f64).sqrt();
            assert!((cos_sqrt2x(c(x, 0.0)).re - y.cos()).abs() < 1e-15);
            assert!((sinc_sqrt2x(c(x, 0.0)).re - y.sin() / y).abs() < 1e-15);
        }
        // negative x: hyperbolic branch
        for x in [-0.5f64, -2.0, -9.0] {
            let y = (-2.0 * x).sqrt();
            assert!((cos_sqrt2x(c(x, 0.0)).re - y.cosh()).abs() < 1e-13 * y.cosh());
            assert!((sinc_sqrt2x(c(x, 0.0)).re - y.sinh() / y).abs() < 1e-13 * y.cosh());
        }
    }

    #[test]
    fn series_and_closed_form_agree_at_switch_radius() {
        // straddle the switch on a ring of complex points
        for k in 0..16 {
            let phi = 2.0 * std::f64::consts::PI * k as f64 / 16.0;
            for scale in [0.5e-4, 0.99e-4, 1.01e-4, 2.0e-4] {
                let x = Complex64::from_polar(scale, phi);
                let y = (2.0 * x).sqrt();
                assert!((cos_sqrt2x(x) - y.cos()).norm() < 1e-15);
                assert!((sinc_sqrt2x(x) - y.sin() / y).norm() < 1e-15);
                let fd = (sinc_sqrt2x(x + 1e-6) - sinc_sqrt2x(x - 1e-6)) / 2e-6;
                assert!((sinc_sqrt2x_prime(x) - fd).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn values_at_origin() {
        let z = c(0.0, 0.0);
        assert_eq!(cos_sqrt2x(z), c(1.0, 0.0));
        assert_eq!(sinc_sqrt2x(z), c(1.0, 0.0));
        assert!((sinc_sqrt2x_prime(z) - c(-1.0 / 3.0, 0.0)).norm() < 1e-16);
    }

    proptest! {
        #[test]
        fn derivative_matches_finite_differences(re in -5.0..5.0f64, im in -5.0..5.0f64) {
            let x = c(re, im);
            let h = 1e-6;
            let fd = (sinc_sqrt2x(x + h) - sinc_sqrt2x(x - h)) / (2.0 * h);
            let exact = sinc_sqrt2x_prime(x);
            prop_assert!((exact - fd).norm() <= 1e-7 * (1.0 + exact.norm()));
        }

        #[test]
        fn schwarz_reflection(re in -5.0..5.0f64, im in 0.01..5.0f64) {
            let x = c(re, im);
            prop_assert!((cos_sqrt2x(x.conj()) - cos_sqrt2x(x).conj()).norm() < 1e-12);
            prop_assert!((sinc_sqrt2x(x.conj()) - sinc_sqrt2x(x).conj()).norm() < 1e-12);
        }
    }
}
