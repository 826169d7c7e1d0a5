//! Complex log-Gamma on the right half plane.

use std::f64::consts::PI;

use num_complex::Complex64;

// Lanczos approximation, g = 7, n = 9
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `log Γ(z)` for `Re z ≥ 1/2`.
///
/// The result is the branch continuous in `z` from the positive real axis
/// (the imaginary part is *not* reduced to `(−π, π]`), so `Im` is the
/// continuous phase of `Γ`.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    debug_assert!(z.re >= 0.5, "ln_gamma: Re z = {} below 1/2", z.re);
    let zm1 = z - 1.0;
    let mut series = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        series += c / (zm1 + i as f64);
    }
    let t = zm1 + LANCZOS_G + 0.5;
    // Re t > 0 and the series stays near the positive real axis, so the
    // principal logs are already continuous here.
    0.5 * (2.0 * PI).ln() + (zm1 + 0.5) * t.ln() - t + series.ln()
}

/// `arg Γ(1/2 + iω)`, continuous in `ω` and odd.
pub fn arg_gamma_half(omega: f64) -> f64 {
    if omega < 0.0 {
        return -arg_gamma_half(-omega);
    }
    ln_gamma(Complex64::new(0.5, omega)).im
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn real_axis_values() {
        assert_abs_diff_eq!(
            ln_gamma(Complex64::new(0.5, 0.0)).re,
            0.5 * PI.ln(),
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            ln_gamma(Complex64::new(5.0, 0.0)).re,
            24f64.ln(),
            epsilon = 1e-13
        );
        assert_eq!(arg_gamma_half(0.0), 0.0);
    }

    #[test]
    fn modulus_on_the_critical_line() {
        // |Γ(1/2 + iω)|² = π / cosh(πω)
        for omega in [0.3, 1.0, 2.0, 5.0] {
            let lhs = 2.0 * ln_gamma(Complex64::new(0.5, omega)).re;
            let rhs = PI.ln() - (PI * omega).cosh().ln();
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-12);
        }
    }

    #[test]
    fn phase_matches_high_precision_reference() {
        // reference values from an arbitrary-precision log-Gamma
        let reference: [(f64, f64); 8] = [
            (0.1, -0.193_608_718_339_453),
            (0.5, -0.750_729_202_122_050_7),
            (1.0, -0.955_007_724_342_569_1),
            (2.5, -0.192_441_734_037_238_6),
            (7.0, 6.627_330_556_992_139),
            (20.0, 39.916_729_108_473_33),
            (60.0, 185.661_368_189_024_05),
            (110.0, 407.053_219_026_870_73),
        ];
        for (omega, expected) in reference {
            let tol = 1e-12 * expected.abs().max(1.0);
            assert_abs_diff_eq!(arg_gamma_half(omega), expected, epsilon = tol);
            assert_abs_diff_eq!(arg_gamma_half(-omega), -expected, epsilon = tol);
        }
    }

    #[test]
    fn recurrence_keeps_the_branch_continuous() {
        // log Γ(z + 1) = log Γ(z) + log z, with no 2π jumps along the line
        for k in 0..200 {
            let z = Complex64::new(0.5, 0.25 * k as f64);
            let lhs = ln_gamma(z + 1.0);
            let rhs = ln_gamma(z) + z.ln();
            assert_abs_diff_eq!(lhs.re, rhs.re, epsilon = 1e-11);
            assert_abs_diff_eq!(lhs.im, rhs.im, epsilon = 1e-11);
        }
    }
}
