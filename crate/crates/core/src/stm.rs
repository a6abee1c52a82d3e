//! Three-body bound states from the discretized magnon-dimer integral
//! equation.
//!
//! The kernel depends on |k| and |q| only, so the even sector is solved on
//! q > 0 with the folding factor 2 absorbed into the weights. Bound states
//! sit where an eigenvalue of the kernel crosses 1; each eigenvalue grows
//! as |E| decreases, so the count of eigenvalues ≥ 1 steps up once per
//! state while scanning toward threshold.

use crate::error::{Error, Result};
use crate::quad::gauss_legendre;
use crate::roots::bisect_predicate;
use crate::two_body::{Channel, EftParams, loop_integral, loop_integral_large_cutoff, t_inverse};
use nalgebra::{DMatrix, SymmetricEigen};
use puruspe::{Jn, Yn};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_4, LN_10, PI};

const PANEL: usize = 8;
const MIN_POINTS_PER_DECADE: f64 = 8.0;

pub const DEFAULT_POINTS: usize = 400;
pub const DEFAULT_DECADES: f64 = 14.0;
/// The two-channel tower is log-squared in energy: six states reach
/// |E| ~ 1e−26 uΛ, beyond a 14-decade grid.
pub const DEFAULT_DECADES_TWO_CHANNEL: f64 = 36.0;
pub const SCAN_POINTS_PER_DECADE: f64 = 10.0;
pub const BISECTION_TOL: f64 = 1e-3;

/// Gauss–Legendre rule in t = ln q on [q_min, Λ].
#[derive(Clone, Debug, Serialize)]
pub struct KernelGrid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub lambda: f64,
    pub q_min: f64,
    pub decades: f64,
}

impl KernelGrid {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrate f(q) dq over [q_min, Λ].
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&q, &w)| w * f(q)).sum()
    }

    /// Same grid with every momentum multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            nodes: self.nodes.iter().map(|q| q * s).collect(),
            weights: self.weights.iter().map(|w| w * s).collect(),
            lambda: self.lambda * s,
            q_min: self.q_min * s,
            decades: self.decades,
        }
    }
}

/// Composite rule of 8-point panels, equal width in ln q. When `n_points`
/// is not a multiple of 8 the leading panels take one extra node each.
pub fn build_grid(lambda: f64, decades: f64, n_points: usize) -> Result<KernelGrid> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::domain(format!("cutoff Lambda must be positive, got {lambda}")));
    }
    if !(decades >= 4.0 && decades.is_finite()) {
        return Err(Error::domain(format!("grid needs at least 4 decades, got {decades}")));
    }
    if n_points < 100 {
        return Err(Error::domain(format!("grid needs at least 100 points, got {n_points}")));
    }
    if (n_points as f64) < MIN_POINTS_PER_DECADE * decades {
        return Err(Error::domain(format!(
            "{n_points} points over {decades} decades is below {MIN_POINTS_PER_DECADE} per decade"
        )));
    }
    let panels = n_points / PANEL;
    let extra = n_points % PANEL;
    let t1 = lambda.ln();
    let t0 = t1 - decades * LN_10;
    let h = (t1 - t0) / panels as f64;
    let rule = gauss_legendre(PANEL);
    let rule_extra = gauss_legendre(PANEL + 1);

    let mut nodes = Vec::with_capacity(n_points);
    let mut weights = Vec::with_capacity(n_points);
    for p in 0..panels {
        let (x, w) = if p < extra { &rule_extra } else { &rule };
        let a = t0 + h * p as f64;
        let mid = a + 0.5 * h;
        for (xi, wi) in x.iter().zip(w) {
            let q = (mid + 0.5 * h * xi).exp();
            nodes.push(q);
            weights.push(0.5 * h * wi * q);
        }
    }
    Ok(KernelGrid { nodes, weights, lambda, q_min: t0.exp(), decades })
}

/// Discretized kernel K[i][j] at fixed total energy.
#[derive(Clone, Debug)]
pub struct KernelMatrix {
    pub energy: f64,
    pub channel: Channel,
    pub entries: DMatrix<f64>,
    /// √(−w_j T(E − ε_j)/π); conjugating K by these makes it symmetric.
    pub sym_factors: Vec<f64>,
}

fn check_resonant(eft: &EftParams) -> Result<()> {
    if !eft.channel.is_resonant() {
        return Err(Error::domain(format!(
            "three-body kernel is built on resonance only; {} coupling is detuned",
            eft.channel.name()
        )));
    }
    Ok(())
}

/// Largest |E| the two-channel kernel accepts, from (|E| + uΛ)R/u < 1.
fn two_channel_energy_cap(eft: &EftParams) -> Option<f64> {
    match eft.channel {
        Channel::TwoChannel { range_r, .. } => Some(eft.u / range_r - eft.u * eft.lambda),
        Channel::SingleChannel { .. } => None,
    }
}

pub fn build_kernel(energy: f64, grid: &KernelGrid, eft: &EftParams) -> Result<KernelMatrix> {
    if !(energy < 0.0 && energy.is_finite()) {
        return Err(Error::domain(format!("kernel energy must be negative, got {energy}")));
    }
    check_resonant(eft)?;
    if (grid.lambda - eft.lambda).abs() > 1e-12 * eft.lambda {
        return Err(Error::domain(format!(
            "grid cutoff {} differs from theory cutoff {}",
            grid.lambda, eft.lambda
        )));
    }
    if let (Channel::TwoChannel { range_r, .. }, Some(cap)) = (eft.channel, two_channel_energy_cap(eft)) {
        if !(-energy < cap) {
            return Err(Error::guard(format!(
                "(|E| + u*Lambda)*R/u < 1 violated: {}",
                (-energy + eft.u * eft.lambda) * range_r / eft.u
            )));
        }
    }

    let n = grid.len();
    let eps: Vec<f64> = grid.nodes.iter().map(|&q| eft.energy(q)).collect();
    let mut c = Vec::with_capacity(n);
    for (&e, &w) in eps.iter().zip(&grid.weights) {
        let t = 1.0 / t_inverse(energy - e, eft)?;
        let cj = -w * t / PI;
        if !(cj > 0.0 && cj.is_finite()) {
            return Err(Error::guard(format!("T(E - eps_q) must be negative, got {t}")));
        }
        c.push(cj);
    }
    let lp = |a: f64| match eft.channel {
        Channel::SingleChannel { .. } => loop_integral(a, eft),
        Channel::TwoChannel { .. } => loop_integral_large_cutoff(a, eft),
    };
    let mut k = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            k[(i, j)] = -c[j] * lp(energy - eps[i] - eps[j])?;
        }
    }
    Ok(KernelMatrix {
        energy,
        channel: eft.channel,
        entries: k,
        sym_factors: c.into_iter().map(f64::sqrt).collect(),
    })
}

impl KernelMatrix {
    /// D K D⁻¹ with D = diag(sym_factors), averaged with its transpose to
    /// remove rounding asymmetry.
    pub fn symmetrized(&self) -> Result<DMatrix<f64>> {
        let d = &self.sym_factors;
        if let Some(bad) = d.iter().find(|x| !(**x > 0.0 && x.is_finite())) {
            return Err(Error::domain(format!("kernel is not symmetrizable: factor {bad}")));
        }
        let n = d.len();
        let mut s = DMatrix::from_fn(n, n, |i, j| self.entries[(i, j)] * d[i] / d[j]);
        for i in 0..n {
            for j in 0..i {
                let m = 0.5 * (s[(i, j)] + s[(j, i)]);
                s[(i, j)] = m;
                s[(j, i)] = m;
            }
        }
        Ok(s)
    }

    /// Eigenvalue closest to 1 and its wavefunction φ(q_i), normalized to
    /// unit maximum modulus with a positive value at the top of the grid.
    pub fn eigenvector_near_one(&self) -> Result<(f64, Vec<f64>)> {
        let eig = SymmetricEigen::new(self.symmetrized()?);
        let (idx, &lam) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - 1.0).abs().total_cmp(&(b.1 - 1.0).abs()))
            .ok_or_else(|| Error::domain("empty kernel"))?;
        let v = eig.eigenvectors.column(idx);
        let mut phi: Vec<f64> = v.iter().zip(&self.sym_factors).map(|(x, d)| x / d).collect();
        let top = *phi.last().unwrap_or(&1.0);
        let norm = phi.iter().fold(0.0f64, |m, x| m.max(x.abs())) * top.signum();
        phi.iter_mut().for_each(|x| *x /= norm);
        Ok((lam, phi))
    }
}

#[derive(Clone, Debug)]
pub struct EigenCount {
    /// Descending.
    pub eigenvalues: Vec<f64>,
    pub n_ge_one: usize,
}

pub fn eigen_count(kernel: &KernelMatrix) -> Result<EigenCount> {
    let s = kernel.symmetrized()?;
    let mut ev: Vec<f64> = s.symmetric_eigenvalues().iter().copied().collect();
    if ev.iter().any(|x| !x.is_finite()) {
        return Err(Error::NoConvergence("kernel eigenvalues are not finite".into()));
    }
    ev.sort_by(|a, b| b.total_cmp(a));
    let n_ge_one = ev.iter().take_while(|&&x| x >= 1.0).count();
    Ok(EigenCount { eigenvalues: ev, n_ge_one })
}

/// Energy scale of the φ parametrization, uΛ^z.
pub fn energy_scale(eft: &EftParams) -> f64 {
    eft.u * eft.lambda.powf(eft.z)
}

/// φ from ln(|E|/uΛ^z): single channel −x/π, two channel √(−8x)/π.
pub fn phi_of(channel: &Channel, ln_rel: f64) -> f64 {
    match channel {
        Channel::SingleChannel { .. } => -ln_rel / PI,
        Channel::TwoChannel { .. } => (-8.0 * ln_rel).max(0.0).sqrt() / PI,
    }
}

/// Inverse of [`phi_of`].
pub fn ln_rel_of(channel: &Channel, phi: f64) -> f64 {
    match channel {
        Channel::SingleChannel { .. } => -PI * phi,
        Channel::TwoChannel { .. } => -(PI * phi).powi(2) / 8.0,
    }
}

/// Scan window in ln|E|, absolute units. `ln_deep` > `ln_shallow`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnergyWindow {
    pub ln_deep: f64,
    pub ln_shallow: f64,
}

/// Margin, in decades of momentum, kept between the shallowest scanned
/// energy and the bottom of the grid.
const GRID_FLOOR_MARGIN: f64 = 3.0;

fn grid_floor(grid: &KernelGrid, eft: &EftParams) -> f64 {
    eft.u.ln() + eft.z * (grid.q_min.ln() + GRID_FLOOR_MARGIN * LN_10)
}

impl EnergyWindow {
    /// From |E| = uΛ^z (or the two-channel guard, if tighter) down to three
    /// momentum decades above the bottom of the grid.
    pub fn for_grid(grid: &KernelGrid, eft: &EftParams) -> Self {
        let mut deep = energy_scale(eft);
        if let Some(cap) = two_channel_energy_cap(eft) {
            deep = deep.min(cap * (1.0 - 1e-3));
        }
        Self { ln_deep: deep.ln(), ln_shallow: grid_floor(grid, eft) }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundStateSpectrum {
    pub channel: Channel,
    pub z: f64,
    /// E⁽ⁿ⁾ < 0, deepest first.
    pub energies: Vec<f64>,
    pub ln_abs_e: Vec<f64>,
    pub phi: Vec<f64>,
    /// φₙ − φₙ₋₁ for n ≥ 2.
    pub diffs: Vec<f64>,
    /// Eigenvalues ≥ 1 already present at the deep end of the window.
    pub baseline_count: usize,
}

impl BoundStateSpectrum {
    fn from_roots(eft: &EftParams, ln_abs: Vec<f64>, baseline_count: usize) -> Self {
        let ln_scale = energy_scale(eft).ln();
        let phi: Vec<f64> = ln_abs.iter().map(|x| phi_of(&eft.channel, x - ln_scale)).collect();
        let diffs = phi.windows(2).map(|p| p[1] - p[0]).collect();
        Self {
            channel: eft.channel,
            z: eft.z,
            energies: ln_abs.iter().map(|x| -x.exp()).collect(),
            ln_abs_e: ln_abs,
            phi,
            diffs,
            baseline_count,
        }
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }
}

fn count_at(ln_abs: f64, grid: &KernelGrid, eft: &EftParams) -> Result<usize> {
    Ok(eigen_count(&build_kernel(-ln_abs.exp(), grid, eft)?)?.n_ge_one)
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::domain(format!("cannot start {workers} workers: {e}")))
}

/// Counts of eigenvalues ≥ 1 at every scan point from deep to shallow.
pub fn scan_counts(
    grid: &KernelGrid,
    eft: &EftParams,
    window: EnergyWindow,
    workers: usize,
) -> Result<Vec<(f64, usize)>> {
    let xs = scan_points(window)?;
    let pool = pool(workers)?;
    pool.install(|| {
        xs.par_iter().map(|&x| count_at(x, grid, eft).map(|c| (x, c))).collect()
    })
}

fn scan_points(window: EnergyWindow) -> Result<Vec<f64>> {
    let span = window.ln_deep - window.ln_shallow;
    if !(span > 0.0 && span.is_finite()) {
        return Err(Error::domain(format!(
            "energy window needs ln_deep > ln_shallow, got {} and {}",
            window.ln_deep, window.ln_shallow
        )));
    }
    let n = (span / LN_10 * SCAN_POINTS_PER_DECADE).ceil() as usize + 1;
    let step = span / (n - 1) as f64;
    Ok((0..n).map(|i| window.ln_deep - step * i as f64).collect())
}

/// Locate up to `n_states` bound states below the eigenvalues already ≥ 1
/// at the deep end of `window`. The scan runs in chunks of `workers`
/// energies and stops once enough states are bracketed; chunking does not
/// change which energies are evaluated before a root is accepted, so the
/// result is independent of `workers`.
pub fn find_spectrum(
    grid: &KernelGrid,
    eft: &EftParams,
    window: EnergyWindow,
    n_states: usize,
    workers: usize,
) -> Result<BoundStateSpectrum> {
    check_resonant(eft)?;
    if n_states == 0 {
        return Err(Error::domain("requested zero states"));
    }
    let floor = grid_floor(grid, eft);
    if window.ln_shallow < floor - 1e-9 {
        return Err(Error::domain(format!(
            "scan reaches ln|E| = {:.3} but the grid is only reliable above {floor:.3}; \
             increase decades",
            window.ln_shallow
        )));
    }
    let xs = scan_points(window)?;
    let pool = pool(workers)?;
    let chunk = workers.max(1);

    let mut roots = Vec::with_capacity(n_states);
    let mut baseline = None;
    let mut prev: Option<(f64, usize)> = None;
    'scan: for block in xs.chunks(chunk) {
        let counts: Vec<usize> = pool.install(|| {
            block.par_iter().map(|&x| count_at(x, grid, eft)).collect::<Result<_>>()
        })?;
        for (&x, &c) in block.iter().zip(&counts) {
            let base = *baseline.get_or_insert(c);
            if let Some((x_prev, c_prev)) = prev {
                // Levels are counted above the baseline; a drop would be
                // numerical noise and is ignored.
                let reached = c_prev.max(base);
                for level in reached + 1..=c {
                    let root = bisect_predicate(
                        |y| count_at(y, grid, eft).map(|n| n < level),
                        x_prev,
                        x,
                        BISECTION_TOL,
                    )?;
                    roots.push(root);
                    if roots.len() == n_states {
                        break 'scan;
                    }
                }
            }
            prev = Some((x, prev.map_or(c, |(_, p)| p.max(c))));
        }
    }
    if roots.len() < n_states {
        return Err(Error::NoConvergence(format!(
            "found {} of {n_states} states above ln|E| = {:.3}; increase decades",
            roots.len(),
            window.ln_shallow
        )));
    }
    Ok(BoundStateSpectrum::from_roots(eft, roots, baseline.unwrap_or(0)))
}

/// Spectrum on the default window of `grid`.
pub fn find_spectrum_default(
    grid: &KernelGrid,
    eft: &EftParams,
    n_states: usize,
    workers: usize,
) -> Result<BoundStateSpectrum> {
    find_spectrum(grid, eft, EnergyWindow::for_grid(grid, eft), n_states, workers)
}

/// Fit of φₙ = s·n + b + c/n. The phase is θ = −πb reduced to [0, π).
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PhaseFit {
    pub theta: f64,
    /// Extrapolated spacing s.
    pub spacing: f64,
    pub c: f64,
}

impl PhaseFit {
    pub fn spacing_within(&self, rel: f64) -> bool {
        (self.spacing - 1.0).abs() <= rel
    }
}

/// Least-squares phase fit to φ₁, φ₂, … (index n starts at 1).
pub fn fit_semisuper_phase(phi: &[f64]) -> Result<PhaseFit> {
    if phi.len() < 4 {
        return Err(Error::domain(format!("phase fit needs at least 4 states, got {}", phi.len())));
    }
    let a = DMatrix::from_fn(phi.len(), 3, |i, j| {
        let n = (i + 1) as f64;
        [n, 1.0, 1.0 / n][j]
    });
    let b = nalgebra::DVector::from_column_slice(phi);
    let sol = a
        .svd(true, true)
        .solve(&b, 1e-14)
        .map_err(|e| Error::NoConvergence(format!("phase fit: {e}")))?;
    let theta = (-PI * sol[1]).rem_euclid(PI);
    Ok(PhaseFit { theta, spacing: sol[0], c: sol[2] })
}

pub fn semisuper_phase_fit(spectrum: &BoundStateSpectrum) -> Result<PhaseFit> {
    if !matches!(spectrum.channel, Channel::TwoChannel { .. }) {
        return Err(Error::domain("phase fit applies to the two-channel tower"));
    }
    fit_semisuper_phase(&spectrum.phi)
}

/// √w [c₁ J₁(2√(2w)) + c₂ Y₁(2√(2w))] with (c₁, c₂) = (cos β, sin β),
/// where w = −ln(kR).
#[derive(Clone, Copy, Debug)]
pub struct LeadingLog {
    pub beta: f64,
}

impl LeadingLog {
    pub fn regular() -> Self {
        Self { beta: 0.0 }
    }

    pub fn coefficients(&self) -> (f64, f64) {
        (self.beta.cos(), self.beta.sin())
    }

    pub fn x_of(w: f64) -> f64 {
        2.0 * (2.0 * w).sqrt()
    }

    pub fn value(&self, w: f64) -> f64 {
        let x = Self::x_of(w);
        let (c1, c2) = self.coefficients();
        let y = if c2 == 0.0 { 0.0 } else { c2 * Yn(1, x) };
        w.sqrt() * (c1 * Jn(1, x) + y)
    }

    /// Amplitude A of the large-w form A w^{1/4} sin(2√(2w) + θ).
    pub fn envelope_amplitude() -> f64 {
        1.0 / (PI * std::f64::consts::SQRT_2).sqrt()
    }

    /// θ of the large-w form.
    pub fn phase(&self) -> f64 {
        -FRAC_PI_4 - self.beta
    }

    pub fn asymptote(&self, w: f64) -> f64 {
        Self::envelope_amplitude() * w.powf(0.25) * (Self::x_of(w) + self.phase()).sin()
    }

    /// √w·√(J₁² + Y₁²) at x = 2√(2w); the modulus of the oscillation.
    pub fn envelope(w: f64) -> f64 {
        let x = Self::x_of(w);
        w.sqrt() * Jn(1, x).hypot(Yn(1, x))
    }

    /// Nodes in x = 2√(2w) for w in (0, w_max].
    pub fn nodes(&self, w_max: f64) -> Result<Vec<f64>> {
        if !(w_max > 0.0) {
            return Err(Error::domain(format!("w_max must be positive, got {w_max}")));
        }
        let x_max = Self::x_of(w_max);
        let f = |x: f64| self.value(x * x / 8.0);
        let step = 0.05;
        let mut out = Vec::new();
        let mut a = 1e-6;
        let mut fa = f(a);
        while a < x_max {
            let b = (a + step).min(x_max);
            let fb = f(b);
            if fa == 0.0 {
                out.push(a);
            } else if fa * fb < 0.0 {
                out.push(crate::roots::bisect(f, a, b, 1e-13)?);
            }
            a = b;
            fa = fb;
        }
        Ok(out)
    }
}

/// Tabulate the leading-log solution on `ws`.
pub fn leading_log_reference(ws: &[f64], solution: LeadingLog) -> Result<Vec<(f64, f64)>> {
    ws.iter()
        .map(|&w| {
            if !(w > 0.0) {
                Err(Error::domain(format!("w must be positive, got {w}")))
            } else {
                Ok((w, solution.value(w)))
            }
        })
        .collect()
}

/// Nodes, in x = 2√(2w) with w = −ln(qR), of a two-channel eigenvector on
/// the window |E|/u ≪ q < 1/R where the leading-log equation holds.
pub fn eigenvector_nodes(
    grid: &KernelGrid,
    eft: &EftParams,
    phi: &[f64],
    energy: f64,
) -> Result<Vec<f64>> {
    let Channel::TwoChannel { range_r, .. } = eft.channel else {
        return Err(Error::domain("leading-log nodes are defined for the two-channel kernel"));
    };
    let q_lo = 100.0 * energy.abs() / eft.u;
    let mut pts: Vec<(f64, f64)> = grid
        .nodes
        .iter()
        .zip(phi)
        .filter(|(q, _)| **q > q_lo && **q * range_r < 1.0)
        .map(|(&q, &f)| (LeadingLog::x_of(-(q * range_r).ln()), f))
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(pts
        .windows(2)
        .filter(|p| p[0].1 * p[1].1 < 0.0)
        .map(|p| p[0].0 - p[0].1 * (p[1].0 - p[0].0) / (p[1].1 - p[0].1))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::efimov_scale::s0_solve;
    use crate::two_body::b_coefficient;

    fn single(z: f64) -> EftParams {
        EftParams::resonant_single(z, 1.0, 1.0).unwrap()
    }

    #[test]
    fn grid_integrates_logs_and_powers() {
        let g = build_grid(1.0, 14.0, 400).unwrap();
        assert!((g.integrate(|q| 1.0 / q) - 14.0 * LN_10).abs() < 1e-12);
        let exact = (1.0 - g.q_min.powf(1.3)) / 1.3;
        assert!((g.integrate(|q| q.powf(0.3)) - exact).abs() < 1e-10);
        assert!(g.nodes.windows(2).all(|p| p[0] < p[1]));
        assert!(g.nodes.iter().all(|&q| q >= g.q_min && q <= g.lambda));
        assert!(g.weights.iter().all(|&w| w > 0.0));

        let odd = build_grid(2.0, 5.0, 103).unwrap();
        assert_eq!(odd.len(), 103);
        assert!((odd.integrate(|q| 1.0 / q) - 5.0 * LN_10).abs() < 1e-12);
    }

    #[test]
    fn grid_rejects_sparse_or_short() {
        assert!(build_grid(1.0, 3.0, 400).is_err());
        assert!(build_grid(1.0, 14.0, 99).is_err());
        assert!(build_grid(1.0, 20.0, 150).is_err());
    }

    #[test]
    fn near_zero_energy_kernel_matches_closed_form() {
        let z = 1.2;
        let eft = single(z);
        let g = build_grid(1.0, 14.0, 400).unwrap();
        let e = -1e-12;
        let k = build_kernel(e, &g, &eft).unwrap();
        let pref = 1.0 / ((PI / z).sin() * z * b_coefficient(z).unwrap());
        let mut checked = 0;
        for (i, &ki) in g.nodes.iter().enumerate() {
            for (j, &qj) in g.nodes.iter().enumerate() {
                if ki.powf(z) < 1e8 * -e || qj.powf(z) < 1e8 * -e {
                    continue;
                }
                let closed = pref * qj.powf(z - 2.0) * (ki.powf(z) + qj.powf(z)).powf(1.0 / z - 1.0);
                let got = k.entries[(i, j)] * (2.0 * PI / g.weights[j]) / 2.0;
                assert!((got / closed - 1.0).abs() < 1e-8, "{i} {j}: {got} vs {closed}");
                checked += 1;
            }
        }
        assert!(checked > 5_000);
    }

    #[test]
    fn single_channel_entries_positive() {
        let g = build_grid(1.0, 14.0, 200).unwrap();
        let k = build_kernel(-1e-6, &g, &single(1.2)).unwrap();
        assert!(k.entries.iter().all(|&x| x > 0.0));
    }

    #[test]
    fn kernel_is_scale_covariant() {
        let z = 1.5;
        let eft = single(z);
        let g = build_grid(1.0, 8.0, 128).unwrap();
        let s = 7.0;
        let eft_s = EftParams::resonant_single(z, 1.0, s).unwrap();
        let a = eigen_count(&build_kernel(-1e-3, &g, &eft).unwrap()).unwrap();
        let b = eigen_count(&build_kernel(-1e-3 * s.powf(z), &g.scaled(s), &eft_s).unwrap()).unwrap();
        for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues).take(20) {
            assert!((x - y).abs() < 1e-10 * x.abs().max(1.0));
        }
    }

    #[test]
    fn symmetrized_spectrum_is_real() {
        let g = build_grid(1.0, 8.0, 104).unwrap();
        let k = build_kernel(-1e-4, &g, &single(1.2)).unwrap();
        let ev = k.entries.clone().complex_eigenvalues();
        let scale = ev.iter().fold(0.0f64, |m, c| m.max(c.norm()));
        assert!(ev.iter().all(|c| c.im.abs() < 1e-10 * scale));
        let mut re: Vec<f64> = ev.iter().map(|c| c.re).collect();
        re.sort_by(|a, b| b.total_cmp(a));
        let sym = eigen_count(&k).unwrap().eigenvalues;
        for (a, b) in re.iter().zip(&sym).take(10) {
            assert!((a - b).abs() < 1e-9 * scale);
        }
    }

    #[test]
    fn largest_eigenvalue_falls_with_depth() {
        let g = build_grid(1.0, 14.0, 200).unwrap();
        let eft = single(1.2);
        let mut last = f64::INFINITY;
        for i in 0..12 {
            let ln_e = -30.0 + 2.5 * i as f64;
            let l = eigen_count(&build_kernel(-ln_e.exp(), &g, &eft).unwrap()).unwrap().eigenvalues[0];
            assert!(l <= last * (1.0 + 1e-12));
            last = l;
        }
    }

    #[test]
    fn no_states_far_above_cutoff_energy() {
        let g = build_grid(1.0, 14.0, 200).unwrap();
        for z in [1.2, 1.5] {
            for ln_e in [2.5, 4.0, 8.0] {
                let k = build_kernel(-f64::exp(ln_e), &g, &single(z)).unwrap();
                assert_eq!(eigen_count(&k).unwrap().n_ge_one, 0, "z={z} ln|E|={ln_e}");
            }
        }
    }

    #[test]
    fn two_channel_guard() {
        let eft = EftParams::resonant_two_channel(1.0, 1.0, 0.5).unwrap();
        let g = build_grid(1.0, 10.0, 120).unwrap();
        assert!(build_kernel(-0.5, &g, &eft).is_ok());
        match build_kernel(-1.5, &g, &eft) {
            Err(Error::Guard(msg)) => assert!(msg.contains("(|E| + u*Lambda)*R/u < 1")),
            other => panic!("{other:?}"),
        }
        let detuned = EftParams::single_channel(1.2, 1.0, 1.0, 0.3).unwrap();
        assert!(build_kernel(-0.5, &g, &detuned).is_err());
        let other_cut = EftParams::resonant_single(1.2, 1.0, 2.0).unwrap();
        assert!(build_kernel(-0.5, &g, &other_cut).is_err());
    }

    #[test]
    fn tower_spacing_follows_scale_factor() {
        let z = 1.5;
        let eft = single(z);
        let g = build_grid(1.0, 14.0, 400).unwrap();
        let sp = find_spectrum_default(&g, &eft, 3, 1).unwrap();
        let s0 = s0_solve(z).unwrap().unwrap();
        for d in &sp.diffs {
            assert!((d / s0.z_over_s0() - 1.0).abs() < 0.02, "{d}");
        }
        assert!(sp.energies.windows(2).all(|e| e[0] < e[1]));
        assert!(sp.phi.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn spectrum_needs_enough_decades() {
        let eft = single(1.5);
        let g = build_grid(1.0, 6.0, 120).unwrap();
        match find_spectrum_default(&g, &eft, 4, 1) {
            Err(Error::NoConvergence(msg)) => assert!(msg.contains("increase decades")),
            other => panic!("{other:?}"),
        }
        let w = EnergyWindow { ln_deep: 0.0, ln_shallow: -40.0 };
        assert!(matches!(find_spectrum(&g, &eft, w, 1, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let eft = single(1.5);
        let g = build_grid(1.0, 8.0, 128).unwrap();
        let w = EnergyWindow { ln_deep: 0.0, ln_shallow: -8.0 };
        let a = find_spectrum(&g, &eft, w, 1, 1).unwrap();
        let b = find_spectrum(&g, &eft, w, 1, 3).unwrap();
        assert_eq!(a.ln_abs_e, b.ln_abs_e);
    }

    #[test]
    fn phase_fit_recovers_model() {
        let phi: Vec<f64> = (1..=6).map(|n| n as f64 - 0.2).collect();
        let f = fit_semisuper_phase(&phi).unwrap();
        assert!((f.theta / PI - 0.2).abs() < 1e-6);
        assert!((f.spacing - 1.0).abs() < 1e-9);
        assert!(fit_semisuper_phase(&phi[..3]).is_err());
    }

    #[test]
    fn phase_fit_on_reference_tower() {
        let phi = [1.166, 2.638, 3.796, 4.883, 5.938, 6.977];
        let d: Vec<f64> = phi.windows(2).map(|p| p[1] - p[0]).collect();
        assert!(d.windows(2).all(|p| p[1] < p[0]));
        let f = fit_semisuper_phase(&phi).unwrap();
        assert!(f.spacing_within(0.05), "{}", f.spacing);
        assert!((0.0..PI).contains(&f.theta));
    }

    #[test]
    fn leading_log_asymptotics() {
        for beta in [0.0, 0.7, 2.0] {
            let s = LeadingLog { beta };
            for w in [20.5f64, 40.0, 90.0, 300.0] {
                let env = LeadingLog::envelope_amplitude() * w.powf(0.25);
                assert!((LeadingLog::envelope(w) / env - 1.0).abs() < 0.01);
            }
            // Phase error of the asymptote shrinks like 1/x.
            let err = |w: f64| (s.value(w) - s.asymptote(w)).abs() / w.powf(0.25);
            let e1 = (0..50).map(|i| err(20.0 + i as f64 * 0.37)).fold(0.0, f64::max);
            let e2 = (0..50).map(|i| err(2000.0 + i as f64 * 3.7)).fold(0.0, f64::max);
            assert!(e2 < 0.2 * e1);
        }
    }

    #[test]
    fn leading_log_nodes_approach_pi() {
        let nodes = LeadingLog::regular().nodes(60.0).unwrap();
        assert!(nodes.len() >= 6);
        assert!((nodes[0] - 3.831705970207512).abs() < 1e-9);
        for p in nodes.windows(2).rev().take(3) {
            assert!(((p[1] - p[0]) / PI - 1.0).abs() < 0.02);
        }
    }

    #[test]
    fn regular_branch_vanishes_at_origin() {
        let j = LeadingLog::regular();
        let y = LeadingLog { beta: PI / 2.0 };
        for w in [1e-4, 1e-6] {
            assert!((j.value(w) / w - std::f64::consts::SQRT_2).abs() < 1e-3);
            assert!((y.value(w) + 1.0 / (PI * std::f64::consts::SQRT_2)).abs() < 1e-2);
        }
        let ws = [0.5, 1.0, 2.0];
        let tab = leading_log_reference(&ws, j).unwrap();
        assert_eq!(tab.len(), 3);
        assert!(leading_log_reference(&[0.0], j).is_err());
    }

    #[test]
    fn two_channel_eigenvector_nodes() {
        let eft = EftParams::resonant_two_channel(1.0, 1.0, 0.5).unwrap();
        let g = build_grid(1.0, DEFAULT_DECADES_TWO_CHANNEL, 400).unwrap();
        // Sixth state of the resonant tower; only its position matters here.
        let ln_e = ln_rel_of(&eft.channel, 6.9771);
        let k = build_kernel(-ln_e.exp(), &g, &eft).unwrap();
        let (lam, phi) = k.eigenvector_near_one().unwrap();
        assert!((lam - 1.0).abs() < 1e-3);
        let nodes = eigenvector_nodes(&g, &eft, &phi, -ln_e.exp()).unwrap();
        assert_eq!(nodes.len(), 6, "{nodes:?}");
        let gaps: Vec<f64> = nodes.windows(2).map(|p| p[1] - p[0]).collect();
        assert!(gaps.windows(2).all(|p| p[1] < p[0]), "{gaps:?}");
        assert!((gaps.last().unwrap() / PI - 1.0).abs() < 0.05, "{gaps:?}");
    }
}
