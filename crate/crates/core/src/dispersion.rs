//! Lattice magnon dispersion ε_k = −Σ_{r≥1} (4J/r^α) cos(kr) and the
//! continuum parameters (z, u, ε₀) of its small-k form ε_k ≈ ε₀ + u|k|^z.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use serde::Serialize;

/// Largest number of lattice terms a truncated sum may use.
const MAX_TERMS: u64 = 400_000_000;
/// Smallest relative tolerance accepted for a truncated lattice sum.
const MIN_TOL: f64 = 1e-14;

/// Parameters of the microscopic chain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChainParams {
    /// XY coupling J > 0.
    pub j: f64,
    /// Decay power α > 1 of the couplings J/r^α.
    pub alpha: f64,
    /// Impurity strength J_z ≥ 0 on the bond (0, 1).
    pub jz: f64,
    /// Ring length N ≥ 4 used by exact diagonalization.
    pub n_sites: usize,
}

impl ChainParams {
    pub fn new(j: f64, alpha: f64, jz: f64, n_sites: usize) -> Result<Self> {
        if !(j > 0.0 && j.is_finite()) {
            return Err(Error::domain(format!("coupling J must be positive, got {j}")));
        }
        if !(alpha > 1.0 && alpha.is_finite()) {
            return Err(Error::domain(format!("decay power alpha must exceed 1, got {alpha}")));
        }
        if !(jz >= 0.0 && jz.is_finite()) {
            return Err(Error::domain(format!("impurity strength Jz must be >= 0, got {jz}")));
        }
        if n_sites < 4 {
            return Err(Error::domain(format!("ring length N must be >= 4, got {n_sites}")));
        }
        Ok(Self { j, alpha, jz, n_sites })
    }

    /// Same chain with a different impurity strength.
    pub fn with_jz(self, jz: f64) -> Result<Self> {
        Self::new(self.j, self.alpha, jz, self.n_sites)
    }
}

/// Low-energy continuum description ε_k ≈ ε₀ + u|k|^z.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ContinuumParams {
    pub z: f64,
    pub u: f64,
    pub eps0: f64,
}

/// z = min(2, α − 1).
pub fn dynamical_exponent(alpha: f64) -> Result<f64> {
    if !(alpha > 1.0) {
        return Err(Error::domain(format!("dynamical exponent needs alpha > 1, got {alpha}")));
    }
    Ok((alpha - 1.0).min(2.0))
}

/// Σ_{r>R} r^{−α} by Euler–Maclaurin; accurate to O(R^{−α−5}).
fn power_tail(alpha: f64, r: f64) -> f64 {
    r.powf(1.0 - alpha) / (alpha - 1.0) - 0.5 * r.powf(-alpha) + alpha / 12.0 * r.powf(-alpha - 1.0)
        - alpha * (alpha + 1.0) * (alpha + 2.0) / 720.0 * r.powf(-alpha - 3.0)
}

/// Riemann ζ(α) for α > 1.
pub fn zeta(alpha: f64) -> f64 {
    const HEAD: usize = 1000;
    let head: f64 = (1..=HEAD).rev().map(|r| (r as f64).powf(-alpha)).sum();
    head + power_tail(alpha, HEAD as f64)
}

/// Band bottom ε₀ = −4J ζ(α).
pub fn band_bottom(params: &ChainParams) -> f64 {
    -4.0 * params.j * zeta(params.alpha)
}

fn partial_cos_sum(k: f64, alpha: f64, r_max: u64) -> f64 {
    (1..=r_max).rev().map(|r| (k * r as f64).cos() * (r as f64).powf(-alpha)).sum()
}

/// ε_k by direct truncation of the lattice sum. The cut r_max is chosen so
/// that the tail bound 4J/((α−1) r_max^{α−1}) is below tol·|ε_k|.
pub fn lattice_dispersion(k: f64, params: &ChainParams, tol: f64) -> Result<f64> {
    let (j, alpha) = (params.j, params.alpha);
    if !(alpha > 1.0) {
        return Err(Error::domain(format!("dispersion needs alpha > 1, got {alpha}")));
    }
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    if tol < MIN_TOL {
        return Err(Error::NoConvergence(format!(
            "tolerance {tol:e} is below the attainable floating-point accuracy {MIN_TOL:e}"
        )));
    }
    let tail_bound = |r: f64| 4.0 * j / ((alpha - 1.0) * r.powf(alpha - 1.0));
    // Resolve |ε_k| well enough to size the cut.
    let mut probe: u64 = 1024;
    let magnitude = loop {
        let s = 4.0 * j * partial_cos_sum(k, alpha, probe).abs();
        let b = tail_bound(probe as f64);
        if s > 2.0 * b {
            break s - b;
        }
        probe *= 8;
        if probe > MAX_TERMS {
            return Err(Error::NoConvergence(format!(
                "dispersion at k={k} is too close to zero to reach relative tolerance {tol:e}"
            )));
        }
    };
    let r_max = (4.0 * j / ((alpha - 1.0) * tol * magnitude)).powf(1.0 / (alpha - 1.0)).ceil();
    if r_max > MAX_TERMS as f64 {
        return Err(Error::NoConvergence(format!(
            "relative tolerance {tol:e} needs {r_max:.3e} lattice terms (cap {MAX_TERMS})"
        )));
    }
    Ok(-4.0 * j * partial_cos_sum(k, alpha, r_max.max(1.0) as u64))
}

/// ε_k − ε₀ = 4J Σ (1 − cos kr)/r^α.
///
/// The non-oscillating part of the tail is summed by Euler–Maclaurin; the
/// oscillating remainder is bounded by Abel summation,
/// |Σ_{r>R} cos(kr) r^{−α}| ≤ (R+1)^{−α}/|sin(k/2)|, and R is grown until that
/// bound is below tol times the gap.
pub fn dispersion_gap(k: f64, params: &ChainParams, tol: f64) -> Result<f64> {
    let (j, alpha) = (params.j, params.alpha);
    if !(alpha > 1.0) {
        return Err(Error::domain(format!("dispersion needs alpha > 1, got {alpha}")));
    }
    if !(tol >= MIN_TOL) {
        return Err(Error::NoConvergence(format!("tolerance {tol:e} out of range")));
    }
    let k = k.abs();
    if k == 0.0 {
        return Ok(0.0);
    }
    let sin_half = (0.5 * k).sin().abs();
    if sin_half == 0.0 {
        return Err(Error::domain("k is a multiple of 2π; use k = 0"));
    }
    let gap_sum = |r_max: u64| -> f64 {
        let head: f64 = (1..=r_max)
            .rev()
            .map(|r| {
                let x = k * r as f64;
                // 1 − cos x = 2 sin²(x/2), no cancellation at small x
                2.0 * (0.5 * x).sin().powi(2) * (r as f64).powf(-alpha)
            })
            .sum();
        4.0 * j * (head + power_tail(alpha, r_max as f64))
    };
    let osc = |r: f64| 4.0 * j * (r + 1.0).powf(-alpha) / sin_half;
    // Coarse pass for a lower bound on the gap.
    let mut probe: u64 = 1024;
    let lower = loop {
        let g = gap_sum(probe);
        let e = osc(probe as f64);
        if g - e > 0.5 * g {
            break g - e;
        }
        probe *= 8;
        if probe > MAX_TERMS {
            return Err(Error::NoConvergence(format!("gap at k={k:e} could not be resolved")));
        }
    };
    let r_need = ((4.0 * j / (sin_half * tol * lower)).powf(1.0 / alpha)).ceil().max(64.0);
    if r_need > MAX_TERMS as f64 {
        return Err(Error::NoConvergence(format!(
            "gap at k={k:e} needs {r_need:.3e} lattice terms for tolerance {tol:e}"
        )));
    }
    Ok(gap_sum(r_need as u64))
}

/// Momentum window for the power-law fit of ε_k − ε₀.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KWindow {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl Default for KWindow {
    fn default() -> Self {
        Self { lo: 1e-4, hi: 1e-2, points: 25 }
    }
}

impl KWindow {
    pub fn momenta(&self) -> Vec<f64> {
        let (a, b) = (self.lo.ln(), self.hi.ln());
        (0..self.points)
            .map(|i| (a + (b - a) * i as f64 / (self.points - 1) as f64).exp())
            .collect()
    }
}

/// Outcome of the small-k power-law fit.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DispersionFit {
    pub z: f64,
    pub u: f64,
    pub eps0: f64,
    /// Free slope of ln(ε_k − ε₀ − c k²) against ln k.
    pub slope: f64,
    /// |slope − z|
    pub slope_deviation: f64,
    /// RMS relative residual of the two-term fit.
    pub rms_residual: f64,
}

impl DispersionFit {
    pub fn continuum(&self) -> ContinuumParams {
        ContinuumParams { z: self.z, u: self.u, eps0: self.eps0 }
    }
}

/// Largest accepted deviation of the fitted slope from z.
pub const SLOPE_TOLERANCE: f64 = 1e-3;

fn least_squares(design: DMatrix<f64>, rhs: &DVector<f64>) -> Result<DVector<f64>> {
    let svd = design.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smin > 1e-12 * smax) {
        return Err(Error::domain("power-law fit is degenerate (singular design matrix)"));
    }
    svd.solve(rhs, 0.0).map_err(|e| Error::domain(format!("least squares failed: {e}")))
}

/// Fits ε_k − ε₀ = u k^z + c k² over the window by least squares in
/// relative error. The k² term is the first analytic correction of the
/// lattice sum and is dropped when z = 2. The exponent is then checked by the
/// free slope of ln(ε_k − ε₀ − c k²) against ln k.
pub fn fit_u(params: &ChainParams, window: KWindow) -> Result<DispersionFit> {
    let alpha = params.alpha;
    if !(alpha > 2.0 && alpha <= 3.0) {
        return Err(Error::domain(format!("u fit requires alpha in (2, 3], got {alpha}")));
    }
    if window.points < 4 || !(window.lo > 0.0 && window.hi > window.lo && window.hi <= 0.05) {
        return Err(Error::domain(format!(
            "fit window needs 0 < lo < hi <= 0.05 and at least 4 points, got [{}, {}] with {}",
            window.lo, window.hi, window.points
        )));
    }
    let z = dynamical_exponent(alpha)?;
    let ks = window.momenta();
    let mut gaps = Vec::with_capacity(ks.len());
    for &k in &ks {
        gaps.push(dispersion_gap(k, params, 1e-7)?);
    }
    let n = ks.len();
    let with_correction = z < 2.0;
    let cols = if with_correction { 2 } else { 1 };
    let design = DMatrix::from_fn(n, cols, |i, c| match c {
        0 => ks[i].powf(z) / gaps[i],
        _ => ks[i].powi(2) / gaps[i],
    });
    let ones = DVector::from_element(n, 1.0);
    let coef = least_squares(design.clone(), &ones)?;
    let u = coef[0];
    let c = if with_correction { coef[1] } else { 0.0 };
    let resid = &ones - &design * &coef;
    let rms_residual = (resid.norm_squared() / n as f64).sqrt();

    let xs: Vec<f64> = ks.iter().map(|k| k.ln()).collect();
    let mut ys = Vec::with_capacity(n);
    for i in 0..n {
        let y = gaps[i] - c * ks[i].powi(2);
        if !(y > 0.0) {
            return Err(Error::NoConvergence(format!(
                "k² correction exceeds the gap at k={:e}; shrink the window",
                ks[i]
            )));
        }
        ys.push(y.ln());
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (mx, my) = (mean(&xs), mean(&ys));
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;

    let fit = DispersionFit {
        z,
        u,
        eps0: band_bottom(params),
        slope,
        slope_deviation: (slope - z).abs(),
        rms_residual,
    };
    if !(u > 0.0) || fit.slope_deviation >= SLOPE_TOLERANCE {
        return Err(Error::NoConvergence(format!(
            "fitted slope {slope:.6} deviates from z = {z} by {:.3e} (limit {SLOPE_TOLERANCE:e}), \
             u = {u:.6e}; shrink the window [{}, {}]",
            fit.slope_deviation, window.lo, window.hi
        )));
    }
    Ok(fit)
}

/// Continuum parameters from the default fit window.
pub fn continuum_params(params: &ChainParams) -> Result<ContinuumParams> {
    fit_u(params, KWindow::default()).map(|f| f.continuum())
}
