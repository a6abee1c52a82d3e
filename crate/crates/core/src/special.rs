//! Gamma function via the Lanczos approximation (g = 7, nine terms).
//!
//! Real and complex arguments share the same coefficients. Arguments with
//! real part below 1/2 go through the reflection formula, which covers the
//! negative non-integer arguments needed by the scale-factor equation.

use num_complex::Complex64;
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_P: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// ln(2π)/2
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// Γ(x) for real x. Returns ±∞ or NaN at the poles x = 0, −1, −2, ….
pub fn gamma(x: f64) -> f64 {
    if is_gamma_pole(x) {
        return f64::NAN;
    }
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_P[0];
    for (i, &p) in LANCZOS_P.iter().enumerate().skip(1) {
        acc += p / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
}

/// True when x is a pole of Γ (zero or a negative integer).
pub fn is_gamma_pole(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// Principal-branch-insensitive ln Γ(z). The real part is exact to the
/// approximation's accuracy; the imaginary part may differ from the
/// principal branch by a multiple of 2π after reflection.
pub fn ln_gamma_complex(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Γ(z) = π / (sin(πz) Γ(1−z))
        let sin_pz = ln_sin_pi(z);
        return Complex64::new(PI.ln(), 0.0) - sin_pz - ln_gamma_complex(1.0 - z);
    }
    let zm1 = z - 1.0;
    let mut acc = Complex64::new(LANCZOS_P[0], 0.0);
    for (i, &p) in LANCZOS_P.iter().enumerate().skip(1) {
        acc += p / (zm1 + i as f64);
    }
    let t = zm1 + LANCZOS_G + 0.5;
    HALF_LN_2PI + (zm1 + 0.5) * t.ln() - t + acc.ln()
}

/// ln sin(πz) with the real part computed without overflow for large |Im z|.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    let (x, y) = (PI * z.re, PI * z.im);
    // |sin(x+iy)|² = sin²x + sinh²y
    let re = if y.abs() > 20.0 {
        // sinh²y dominates; ln sinh|y| = |y| − ln 2 + ln(1 − e^{−2|y|})
        let ly = y.abs() - std::f64::consts::LN_2 + (-(-2.0 * y.abs()).exp()).ln_1p();
        0.5 * ((x.sin() / ly.exp()).powi(2)).ln_1p() + ly
    } else {
        0.5 * (x.sin().powi(2) + y.sinh().powi(2)).ln()
    };
    let im = (x.cos() * y.sinh()).atan2(x.sin() * y.cosh());
    Complex64::new(re, im)
}
