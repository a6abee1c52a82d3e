//! Zero-energy scaling solution of the resonant single-channel problem.
//!
//! At E = 0 the magnon–dimer equation is scale invariant and is solved by
//! φ(k) = |k|^{s₁ + i s₀} with s₁ = (1 − z)/2. Real s₀ > 0 exists when
//! |Γ((z − 1 − 2is₀)/(2z))|² = Γ(1 + 1/z) Γ(−2/z) has a root, and then the
//! three-body energies form a geometric series with ratio exp(−zπ/s₀).

use crate::error::{Error, Result};
use crate::quad::integrate_breakpoints;
use crate::roots::bisect;
use crate::special::{gamma, is_gamma_pole, ln_gamma_complex};
use crate::two_body::b_coefficient;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::{LN_10, PI};

/// Upper end of the s₀ bracket. Physical roots are O(1).
pub const S0_MAX: f64 = 20.0;
const S0_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScaleSolution {
    pub z: f64,
    pub s1: f64,
    pub s0: f64,
    /// Ratio E⁽ⁿ⁺¹⁾/E⁽ⁿ⁾ = exp(−zπ/s₀).
    pub energy_step: f64,
}

impl ScaleSolution {
    /// Level spacing in φₙ = −ln(|Eₙ|/uΛᶻ)/π.
    pub fn z_over_s0(&self) -> f64 {
        self.z / self.s0
    }

    /// α = z + 1.
    pub fn alpha(&self) -> f64 {
        self.z + 1.0
    }
}

/// |Γ(x + iy)|².
pub fn abs_gamma_sq(x: f64, y: f64) -> Result<f64> {
    if y == 0.0 && is_gamma_pole(x) {
        return Err(Error::domain(format!("Gamma has a pole at {x}")));
    }
    Ok((2.0 * ln_gamma_complex(Complex64::new(x, y)).re).exp())
}

/// Γ(1 + 1/z) Γ(−2/z); positive for z ∈ (1, 2).
pub fn scale_equation_rhs(z: f64) -> f64 {
    gamma(1.0 + 1.0 / z) * gamma(-2.0 / z)
}

fn check_z(z: f64) -> Result<()> {
    if !(z > 1.0 && z < 2.0) {
        return Err(Error::domain(format!("scale equation needs z in (1, 2), got {z}")));
    }
    Ok(())
}

/// ln|Γ((z−1)/(2z) − i s₀/z)|² − ln[Γ(1+1/z)Γ(−2/z)]; decreasing in s₀.
fn scale_mismatch(z: f64, s0: f64) -> f64 {
    let arg = Complex64::new((z - 1.0) / (2.0 * z), -s0 / z);
    2.0 * ln_gamma_complex(arg).re - scale_equation_rhs(z).ln()
}

/// Root s₀ ∈ (0, 20] of the scale equation, or `None` outside the Efimov
/// window.
pub fn s0_solve(z: f64) -> Result<Option<ScaleSolution>> {
    check_z(z)?;
    let f = |s: f64| scale_mismatch(z, s);
    if f(0.0) <= 0.0 || f(S0_MAX) >= 0.0 {
        return Ok(None);
    }
    let s0 = bisect(f, 0.0, S0_MAX, S0_TOL)?;
    Ok(Some(ScaleSolution {
        z,
        s1: 0.5 * (1.0 - z),
        s0,
        energy_step: (-z * PI / s0).exp(),
    }))
}

/// Largest z with a real s₀: the root of Γ((z−1)/(2z))² = Γ(1+1/z)Γ(−2/z).
pub fn efimov_window_edge() -> Result<f64> {
    bisect(|z| scale_mismatch(z, 0.0), 1.5, 1.99, 1e-12)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepPoint {
    pub alpha: f64,
    pub z: f64,
    pub solution: Option<ScaleSolution>,
}

/// s₀ on an even α grid inside (2, 3). Points without a root are gaps.
pub fn s0_sweep(alpha_min: f64, alpha_max: f64, n_points: usize) -> Result<Vec<SweepPoint>> {
    if !(alpha_min > 2.0 && alpha_max < 3.0 && alpha_min <= alpha_max) {
        return Err(Error::domain(format!(
            "sweep range must lie inside (2, 3), got [{alpha_min}, {alpha_max}]"
        )));
    }
    if n_points == 0 || (n_points == 1 && alpha_min != alpha_max) {
        return Err(Error::domain("sweep needs at least two points for a non-empty range"));
    }
    (0..n_points)
        .map(|i| {
            let alpha = if n_points == 1 {
                alpha_min
            } else {
                alpha_min + (alpha_max - alpha_min) * i as f64 / (n_points - 1) as f64
            };
            let z = alpha - 1.0;
            Ok(SweepPoint { alpha, z, solution: s0_solve(z)? })
        })
        .collect()
}

/// Decades of q integrated numerically on each side of k.
const ANSATZ_HALF_DECADES: f64 = 15.0;

/// Relative residual |Kφ − φ|/|φ| of the zero-energy kernel applied to
/// φ(q) = q^{s₁ + i s₀}, evaluated at momentum k.
///
/// The kernel is csc(π/z)/(zB(z)) · q^{z−2} (k^z + q^z)^{1/z − 1} with the
/// full-line measure folded onto q > 0. The integral runs in ln q over 30
/// decades around k with the leading two power-law terms of each tail added
/// in closed form.
pub fn ansatz_residual_at(z: f64, s0: f64, k: f64) -> Result<f64> {
    check_z(z)?;
    if !(k > 0.0) {
        return Err(Error::domain(format!("reference momentum must be positive, got {k}")));
    }
    let b = b_coefficient(z)?;
    let prefactor = 1.0 / ((PI / z).sin() * z * b * PI);
    let c = Complex64::new(0.5 * (1.0 - z), s0);
    let ln_k = k.ln();
    let half = ANSATZ_HALF_DECADES * LN_10;
    let expo = 1.0 / z - 1.0;
    // q^{z−1+c} (k^z + q^z)^{1/z−1} in t = ln q
    let integrand = |t: f64| {
        let (a, b) = (z * ln_k, z * t);
        let ln_sum = a.max(b) + (-(a - b).abs()).exp().ln_1p();
        ((z - 1.0 + c) * t + expo * ln_sum).exp()
    };
    let (t_lo, t_hi) = (ln_k - half, ln_k + half);
    let n_seg = (2.0 * half).ceil() as usize;
    let bps: Vec<f64> = (0..=n_seg)
        .map(|i| t_lo + (t_hi - t_lo) * i as f64 / n_seg as f64)
        .collect();
    let scale = (c * ln_k).exp().norm();
    let body = integrate_breakpoints(integrand, &bps, 1e-15 * scale, 1e-13, 100_000)?;

    // q ≪ k: k^{1−z} q^{p}(1 + (1/z−1)(q/k)^z), p = (z−1)/2 + i s₀
    let p_lo = Complex64::new(0.5 * (z - 1.0), s0);
    let k_pow = ((1.0 - z) * ln_k).exp();
    let lower = k_pow
        * ((p_lo * t_lo).exp() / p_lo
            + expo * (-z * ln_k).exp() * ((p_lo + z) * t_lo).exp() / (p_lo + z));
    // q ≫ k: q^{c}(1 + (1/z−1)(k/q)^z)
    let upper = -((c * t_hi).exp() / c)
        - expo * (z * ln_k).exp() * ((c - z) * t_hi).exp() / (c - z);

    let applied = prefactor * (body.value + lower + upper);
    let phi = (c * ln_k).exp();
    Ok((applied - phi).norm() / phi.norm())
}

/// [`ansatz_residual_at`] at k = 1.
pub fn ansatz_residual(z: f64, s0: f64) -> Result<f64> {
    ansatz_residual_at(z, s0, 1.0)
}
