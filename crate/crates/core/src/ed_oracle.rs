//! Exact diagonalization of the chain on a periodic ring in sectors of
//! fixed magnon number.
//!
//! Magnons are hard-core bosons: a magnon at m hops to an empty site n with
//! amplitude −2J/d(m,n)^α, d the minimal-image distance, and the pair
//! occupying sites 0 and 1 gains −J_z. The three-magnon sector is available
//! but only qualitative; the rings that fit here are far too small for a
//! geometric tower.

use crate::dispersion::{ChainParams, band_bottom};
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;
use std::f64::consts::PI;

pub const MAX_MAGNONS: usize = 3;
pub const MAX_BASIS: usize = 200_000;
/// Sectors up to this dimension are stored and solved densely.
pub const DENSE_CAP: usize = 4000;
pub const EIG_TOL: f64 = 1e-10;
pub const MAX_EIGS: usize = 10;
pub const DEFAULT_BINDING_FLOOR: f64 = 1e-6;

/// Minimal-image distance on a ring of n sites.
pub fn ring_distance(a: usize, b: usize, n: usize) -> usize {
    let d = a.abs_diff(b);
    d.min(n - d)
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

#[derive(Clone, Debug)]
pub struct SectorBasis {
    pub n_sites: usize,
    pub n_magnons: usize,
    /// Occupied sites of each state, strictly increasing, in lexicographic
    /// order.
    pub states: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl SectorBasis {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, sites: &[usize]) -> Option<usize> {
        self.index.get(sites).copied()
    }
}

pub fn build_basis(n_sites: usize, n_magnons: usize) -> Result<SectorBasis> {
    if n_magnons == 0 || n_magnons > MAX_MAGNONS {
        return Err(Error::domain(format!("magnon number must be 1..={MAX_MAGNONS}, got {n_magnons}")));
    }
    if n_sites < n_magnons {
        return Err(Error::domain(format!("{n_magnons} magnons do not fit on {n_sites} sites")));
    }
    let size = binomial(n_sites, n_magnons);
    if size > MAX_BASIS {
        return Err(Error::domain(format!(
            "sector dimension C({n_sites}, {n_magnons}) = {size} exceeds the cap {MAX_BASIS}"
        )));
    }
    let mut states = Vec::with_capacity(size);
    let mut cur: Vec<usize> = (0..n_magnons).collect();
    loop {
        states.push(cur.clone());
        // Advance to the next combination in lexicographic order.
        let mut i = n_magnons;
        while i > 0 && cur[i - 1] == n_sites - n_magnons + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        cur[i - 1] += 1;
        for j in i..n_magnons {
            cur[j] = cur[j - 1] + 1;
        }
    }
    let index = states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    Ok(SectorBasis { n_sites, n_magnons, states, index })
}

/// Compressed sparse rows.
#[derive(Clone, Debug)]
pub struct CsrMatrix {
    pub dim: usize,
    pub row_ptr: Vec<usize>,
    pub cols: Vec<usize>,
    pub vals: Vec<f64>,
}

impl CsrMatrix {
    fn mul_into(&self, x: &[f64], y: &mut [f64]) {
        for (r, yr) in y.iter_mut().enumerate() {
            let (a, b) = (self.row_ptr[r], self.row_ptr[r + 1]);
            *yr = self.cols[a..b].iter().zip(&self.vals[a..b]).map(|(&c, v)| v * x[c]).sum();
        }
    }

    fn get(&self, r: usize, c: usize) -> f64 {
        let (a, b) = (self.row_ptr[r], self.row_ptr[r + 1]);
        match self.cols[a..b].binary_search(&c) {
            Ok(k) => self.vals[a + k],
            Err(_) => 0.0,
        }
    }
}

#[derive(Clone, Debug)]
pub enum SectorMatrix {
    Dense(DMatrix<f64>),
    Sparse(CsrMatrix),
}

impl SectorMatrix {
    pub fn dim(&self) -> usize {
        match self {
            SectorMatrix::Dense(m) => m.nrows(),
            SectorMatrix::Sparse(m) => m.dim,
        }
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        match self {
            SectorMatrix::Dense(m) => m[(r, c)],
            SectorMatrix::Sparse(m) => m.get(r, c),
        }
    }

    pub fn mul_into(&self, x: &[f64], y: &mut [f64]) {
        match self {
            SectorMatrix::Dense(m) => {
                let out = m * DVector::from_column_slice(x);
                y.copy_from_slice(out.as_slice());
            }
            SectorMatrix::Sparse(m) => m.mul_into(x, y),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        match self {
            SectorMatrix::Dense(m) => m == &m.transpose(),
            SectorMatrix::Sparse(m) => (0..n).all(|r| {
                (m.row_ptr[r]..m.row_ptr[r + 1]).all(|k| m.get(m.cols[k], r) == m.vals[k])
            }),
        }
    }
}

fn row_entries(basis: &SectorBasis, params: &ChainParams, row: usize) -> Vec<(usize, f64)> {
    let n = basis.n_sites;
    let state = &basis.states[row];
    let mut out = Vec::new();
    if state.len() >= 2 && state.contains(&0) && state.contains(&1) {
        out.push((row, -params.jz));
    }
    let mut moved = state.clone();
    for (slot, &from) in state.iter().enumerate() {
        for to in (0..n).filter(|t| !state.contains(t)) {
            moved.copy_from_slice(state);
            moved[slot] = to;
            moved.sort_unstable();
            let col = basis.index_of(&moved).expect("hop stays in sector");
            let d = ring_distance(from, to, n) as f64;
            out.push((col, -2.0 * params.j / d.powf(params.alpha)));
        }
    }
    out.sort_unstable_by_key(|e| e.0);
    out
}

pub fn build_hamiltonian(basis: &SectorBasis, params: &ChainParams) -> SectorMatrix {
    let dim = basis.len();
    let rows: Vec<Vec<(usize, f64)>> =
        (0..dim).into_par_iter().map(|r| row_entries(basis, params, r)).collect();
    if dim <= DENSE_CAP {
        let mut m = DMatrix::zeros(dim, dim);
        for (r, row) in rows.iter().enumerate() {
            for &(c, v) in row {
                m[(r, c)] += v;
            }
        }
        SectorMatrix::Dense(m)
    } else {
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for row in rows {
            for (c, v) in row {
                cols.push(c);
                vals.push(v);
            }
            row_ptr.push(cols.len());
        }
        SectorMatrix::Sparse(CsrMatrix { dim, row_ptr, cols, vals })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Solver {
    /// Dense up to [`DENSE_CAP`], Lanczos above.
    Auto,
    Dense,
    Lanczos,
}

#[derive(Clone, Debug)]
pub struct Eigenpairs {
    /// Ascending.
    pub values: Vec<f64>,
    /// Unit eigenvectors matching `values`, when requested.
    pub vectors: Option<Vec<DVector<f64>>>,
}

pub fn lowest_eigs(matrix: &SectorMatrix, k: usize, with_vectors: bool) -> Result<Eigenpairs> {
    lowest_eigs_with(matrix, k, with_vectors, Solver::Auto)
}

pub fn lowest_eigs_with(
    matrix: &SectorMatrix,
    k: usize,
    with_vectors: bool,
    solver: Solver,
) -> Result<Eigenpairs> {
    let dim = matrix.dim();
    if k == 0 || k > MAX_EIGS {
        return Err(Error::domain(format!("eigenvalue count must be 1..={MAX_EIGS}, got {k}")));
    }
    if k > dim {
        return Err(Error::domain(format!("asked for {k} eigenvalues of a {dim}-dim sector")));
    }
    let dense = match solver {
        Solver::Auto => dim <= DENSE_CAP,
        Solver::Dense => true,
        Solver::Lanczos => false,
    };
    if dense {
        dense_lowest(matrix, k, with_vectors)
    } else {
        lanczos_lowest(matrix, k, with_vectors)
    }
}

fn dense_lowest(matrix: &SectorMatrix, k: usize, with_vectors: bool) -> Result<Eigenpairs> {
    let m = match matrix {
        SectorMatrix::Dense(m) => m.clone(),
        SectorMatrix::Sparse(s) => {
            if s.dim > DENSE_CAP {
                return Err(Error::domain(format!(
                    "dense solve refused for dimension {} above {DENSE_CAP}",
                    s.dim
                )));
            }
            DMatrix::from_fn(s.dim, s.dim, |r, c| s.get(r, c))
        }
    };
    if !with_vectors {
        let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev.truncate(k);
        return Ok(Eigenpairs { values: ev, vectors: None });
    }
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    order.truncate(k);
    Ok(Eigenpairs {
        values: order.iter().map(|&i| eig.eigenvalues[i]).collect(),
        vectors: Some(order.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect()),
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
}

fn normalize(v: &mut [f64]) -> f64 {
    let n = dot(v, v).sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
    n
}

/// Two passes of Gram–Schmidt against `basis`.
fn orthogonalize(v: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for b in basis {
            let c = dot(v, b);
            axpy(-c, b, v);
        }
    }
}

const KRYLOV_MAX: usize = 120;
const MAX_RESTARTS: usize = 60;

/// Lanczos with full reorthogonalization. One eigenpair is converged per
/// pass (the lowest of the operator deflated by the pairs already locked),
/// so degenerate levels are found with their multiplicity. A pass that
/// exhausts its Krylov space restarts from its best Ritz vector.
fn lanczos_lowest(matrix: &SectorMatrix, k: usize, with_vectors: bool) -> Result<Eigenpairs> {
    let dim = matrix.dim();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut locked_vals: Vec<f64> = Vec::with_capacity(k);
    let mut locked: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut w = vec![0.0; dim];
    let mut start: Option<Vec<f64>> = None;
    let mut restarts = 0;

    while locked.len() < k {
        let mut v = start
            .take()
            .unwrap_or_else(|| (0..dim).map(|_| rng.random::<f64>() - 0.5).collect());
        orthogonalize(&mut v, &locked);
        if normalize(&mut v) == 0.0 {
            return Err(Error::NoConvergence("Lanczos start vector lies in the locked space".into()));
        }
        let m_max = KRYLOV_MAX.min(dim - locked.len());
        let mut q: Vec<Vec<f64>> = vec![v];
        let mut alpha: Vec<f64> = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        let (accepted, residual) = loop {
            let j = q.len() - 1;
            matrix.mul_into(&q[j], &mut w);
            let a = dot(&w, &q[j]);
            alpha.push(a);
            orthogonalize(&mut w, &locked);
            orthogonalize(&mut w, &q);
            let b = normalize(&mut w);

            let m = alpha.len();
            let check = m == m_max || b <= 1e-14 * a.abs().max(1.0) || m % 10 == 0;
            if check {
                let t = DMatrix::from_fn(m, m, |r, c| {
                    if r == c {
                        alpha[r]
                    } else if r + 1 == c {
                        beta[r]
                    } else if c + 1 == r {
                        beta[c]
                    } else {
                        0.0
                    }
                });
                let eig = SymmetricEigen::new(t);
                let i0 = (0..m)
                    .min_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]))
                    .unwrap();
                let theta = eig.eigenvalues[i0];
                let s = eig.eigenvectors.column(i0);
                let mut y = vec![0.0; dim];
                for (qi, si) in q.iter().zip(s.iter()) {
                    axpy(*si, qi, &mut y);
                }
                normalize(&mut y);
                let residual = (b * s[m - 1]).abs();
                if residual <= EIG_TOL * theta.abs().max(1.0) {
                    break (Some((theta, y)), residual);
                }
                if m == m_max || b <= 1e-14 * a.abs().max(1.0) {
                    start = Some(y);
                    break (None, residual);
                }
            }
            beta.push(b);
            q.push(w.clone());
        };
        match accepted {
            Some((theta, mut y)) => {
                // Polish against the locked space before storing.
                orthogonalize(&mut y, &locked);
                normalize(&mut y);
                locked_vals.push(theta);
                locked.push(y);
            }
            None => {
                restarts += 1;
                if restarts > MAX_RESTARTS {
                    return Err(Error::NoConvergence(format!(
                        "Lanczos stalled after {MAX_RESTARTS} restarts with {} of {k} pairs; \
                         last residual {residual:.3e}",
                        locked.len()
                    )));
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| locked_vals[a].total_cmp(&locked_vals[b]));
    Ok(Eigenpairs {
        values: order.iter().map(|&i| locked_vals[i]).collect(),
        vectors: with_vectors
            .then(|| order.iter().map(|&i| DVector::from_column_slice(&locked[i])).collect()),
    })
}

/// One-magnon ring energies −Σ_{r=1}^{N−1} 2J cos(p r)/d(r)^α at
/// p = 2πj/N, j = 0..N−1.
pub fn ring_dispersion(params: &ChainParams) -> Vec<f64> {
    let n = params.n_sites;
    (0..n)
        .map(|j| {
            let p = 2.0 * PI * j as f64 / n as f64;
            -(1..n)
                .map(|r| {
                    let d = ring_distance(0, r, n) as f64;
                    2.0 * params.j * (p * r as f64).cos() / d.powf(params.alpha)
                })
                .sum::<f64>()
        })
        .collect()
}

/// Lowest one-magnon energy on the ring.
pub fn ring_band_minimum(params: &ChainParams) -> f64 {
    ring_dispersion(params).into_iter().fold(f64::INFINITY, f64::min)
}

/// Distance of the ring band minimum from the infinite-chain value −4Jζ(α).
pub fn finite_size_offset(params: &ChainParams) -> f64 {
    (ring_band_minimum(params) - band_bottom(params)).abs()
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ResonanceRow {
    pub jz: f64,
    pub e0: f64,
    /// 2ε_min(N).
    pub threshold: f64,
    pub e_bind: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResonanceScan {
    pub rows: Vec<ResonanceRow>,
    /// First J_z with E_bind above `floor`, refined by bisection between
    /// grid points. Shifts with N.
    pub jz_star: Option<f64>,
    pub floor: f64,
    pub n_sites: usize,
}

/// Above this dimension the scan uses Lanczos even for dense storage; a
/// full dense solve per J_z point costs tens of seconds near the cap.
const SCAN_DENSE_LIMIT: usize = 1000;

/// Two-magnon ground energy at the given J_z.
pub fn two_magnon_ground(basis: &SectorBasis, params: &ChainParams) -> Result<f64> {
    let h = build_hamiltonian(basis, params);
    let solver = if h.dim() > SCAN_DENSE_LIMIT { Solver::Lanczos } else { Solver::Auto };
    Ok(lowest_eigs_with(&h, 1, false, solver)?.values[0])
}

/// E_bind(J_z) = max(0, 2ε_min − E₀(J_z)) on the two-magnon sector of the
/// ring given by `base.n_sites`.
pub fn resonance_scan(
    base: &ChainParams,
    jz_grid: &[f64],
    floor: f64,
    workers: usize,
) -> Result<ResonanceScan> {
    if jz_grid.is_empty() {
        return Err(Error::domain("J_z grid is empty"));
    }
    if !(floor > 0.0) {
        return Err(Error::domain(format!("binding floor must be positive, got {floor}")));
    }
    let params: Vec<ChainParams> = jz_grid.iter().map(|&jz| base.with_jz(jz)).collect::<Result<_>>()?;
    let basis = build_basis(base.n_sites, 2)?;
    let threshold = 2.0 * ring_band_minimum(base);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::domain(format!("cannot start {workers} workers: {e}")))?;
    let e0s: Vec<f64> = pool.install(|| {
        params.par_iter().map(|p| two_magnon_ground(&basis, p)).collect::<Result<_>>()
    })?;
    let bind = |e0: f64| (threshold - e0).max(0.0);
    let rows: Vec<ResonanceRow> = jz_grid
        .iter()
        .zip(&e0s)
        .map(|(&jz, &e0)| ResonanceRow { jz, e0, threshold, e_bind: bind(e0) })
        .collect();

    let mut jz_star = None;
    if let Some(i) = rows.iter().position(|r| r.e_bind > floor) {
        jz_star = Some(if i == 0 {
            rows[0].jz
        } else {
            let below = |jz: f64| -> Result<bool> {
                Ok(bind(two_magnon_ground(&basis, &base.with_jz(jz)?)?) <= floor)
            };
            let tol = 1e-4 * base.j;
            crate::roots::bisect_predicate(below, rows[i - 1].jz, rows[i].jz, tol)?
        });
    }
    Ok(ResonanceScan { rows, jz_star, floor, n_sites: base.n_sites })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(alpha: f64, jz: f64, n: usize) -> ChainParams {
        ChainParams::new(1.0, alpha, jz, n).unwrap()
    }

    #[test]
    fn basis_sizes_and_order() {
        assert_eq!(build_basis(6, 2).unwrap().len(), 15);
        assert_eq!(build_basis(10, 3).unwrap().len(), 120);
        let b = build_basis(4, 1).unwrap();
        for i in 0..4 {
            assert_eq!(b.index_of(&[i]), Some(i));
        }
        let b = build_basis(7, 3).unwrap();
        assert!(b.states.windows(2).all(|p| p[0] < p[1]));
        assert!(b.states.iter().all(|s| s.windows(2).all(|p| p[0] < p[1])));
        assert!(build_basis(2000, 2).is_err());
        assert!(build_basis(10, 4).is_err());
    }

    #[test]
    fn one_magnon_is_circulant() {
        let p = chain(2.5, 3.0, 64);
        let h = build_hamiltonian(&build_basis(64, 1).unwrap(), &p);
        let SectorMatrix::Dense(m) = &h else { panic!("expected dense storage") };
        let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        let mut exact = ring_dispersion(&p);
        exact.sort_by(f64::total_cmp);
        for (a, b) in ev.iter().zip(&exact) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn impurity_only_on_diagonal() {
        let p = ChainParams { j: 0.0, ..chain(2.5, 5.0, 4) };
        let b = build_basis(4, 2).unwrap();
        let h = build_hamiltonian(&b, &p);
        let e = lowest_eigs(&h, 1, true).unwrap();
        assert!((e.values[0] + 5.0).abs() < 1e-12);
        let v = &e.vectors.unwrap()[0];
        assert!((v[b.index_of(&[0, 1]).unwrap()].abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn free_pairs_do_not_bind() {
        let p = chain(2.5, 0.0, 20);
        let h = build_hamiltonian(&build_basis(20, 2).unwrap(), &p);
        let e0 = lowest_eigs(&h, 1, false).unwrap().values[0];
        assert!(e0 >= 2.0 * ring_band_minimum(&p) - 1e-9);
    }

    #[test]
    fn two_by_two() {
        let m = SectorMatrix::Dense(DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]));
        let e = lowest_eigs(&m, 2, false).unwrap();
        assert_eq!(e.values, vec![1.0, 3.0]);
        let l = lowest_eigs_with(&m, 2, false, Solver::Lanczos).unwrap();
        assert!((l.values[0] - 1.0).abs() < 1e-12 && (l.values[1] - 3.0).abs() < 1e-12);
        assert!(lowest_eigs(&m, 11, false).is_err());
    }

    #[test]
    fn lanczos_finds_degenerate_levels() {
        let p = chain(2.2, 0.0, 40);
        let h = build_hamiltonian(&build_basis(40, 1).unwrap(), &p);
        let d = lowest_eigs_with(&h, 5, false, Solver::Dense).unwrap();
        let l = lowest_eigs_with(&h, 5, true, Solver::Lanczos).unwrap();
        for (a, b) in d.values.iter().zip(&l.values) {
            assert!((a - b).abs() < 1e-9);
        }
        // ±p pairs are degenerate.
        assert!((d.values[1] - d.values[2]).abs() < 1e-12);
    }

    #[test]
    fn sparse_storage_above_cap() {
        let p = chain(2.5, 20.0, 100);
        let b = build_basis(100, 2).unwrap();
        let h = build_hamiltonian(&b, &p);
        assert!(matches!(h, SectorMatrix::Sparse(_)));
        assert!(h.is_symmetric());
        let e = lowest_eigs(&h, 2, false).unwrap();
        assert!(e.values[0] < e.values[1]);
        assert!(e.values[0] < 2.0 * ring_band_minimum(&p));
    }

    #[test]
    fn single_magnon_ignores_impurity() {
        let b = build_basis(16, 1).unwrap();
        let a = build_hamiltonian(&b, &chain(2.5, 0.0, 16));
        let c = build_hamiltonian(&b, &chain(2.5, 100.0, 16));
        let (SectorMatrix::Dense(a), SectorMatrix::Dense(c)) = (a, c) else { panic!() };
        assert_eq!(a, c);
    }

    #[test]
    fn binding_scan_properties() {
        let base = chain(2.5, 0.0, 24);
        let grid: Vec<f64> = (0..=12).map(|i| i as f64).collect();
        let scan = resonance_scan(&base, &grid, DEFAULT_BINDING_FLOOR, 1).unwrap();
        assert_eq!(scan.rows[0].e_bind, 0.0);
        assert!(scan.rows.windows(2).all(|r| r[1].e_bind >= r[0].e_bind));
        let star = scan.jz_star.unwrap();
        assert!(star > 0.0 && star < 12.0);
        let strong = resonance_scan(&base, &[200.0], DEFAULT_BINDING_FLOOR, 1).unwrap();
        let r = strong.rows[0];
        // E₀ → −J_z: the pair on the impurity bond only mixes in at O(J²/J_z).
        assert!((r.e0 + r.jz).abs() < 1.0, "{r:?}");
        assert!((r.e_bind - r.jz - r.threshold).abs() < 1.0);
    }

    #[test]
    fn ring_converges_to_chain() {
        let offs: Vec<f64> =
            [20, 40, 80].iter().map(|&n| finite_size_offset(&chain(2.5, 0.0, n))).collect();
        assert!(offs[0] > offs[1] && offs[1] > offs[2]);
    }
}
