//! Discretized Schrödinger operators −Δ + V on box grids and their low spectra.
//!
//! The operator is the finite-difference matrix whose quadratic form is
//! [`kinetic_energy`](crate::grid::kinetic_energy) plus `∫V|u|²`. Written in
//! the quadrature-weighted variables `v = W^{1/2} u` it becomes the symmetric
//! matrix `S = Σ_a L_a + diag(V)` with one tridiagonal `L` per axis, so
//! eigenvectors are orthonormal under trapezoid quadrature.
//!
//! Solvers: 1D operators use Sturm bisection on the tridiagonal matrix plus
//! inverse iteration; higher-dimensional operators up to
//! [`DENSE_LIMIT`] unknowns use a dense symmetric eigensolver, larger ones
//! shift-invert Lanczos with conjugate-gradient inner solves.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::RngExt;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::grid::{BoundaryCondition, BoxGrid, RealField, SampledField};
use crate::random;
use crate::report::InequalityReport;

pub const DENSE_LIMIT: usize = 800;

/// Seed of the Lanczos starting vector; fixed so iterative results reproduce.
const START_SEED: u64 = 0x5eed_1a2c;

#[derive(Debug, Clone, PartialEq)]
pub struct SchrodingerOperator {
    grid: BoxGrid,
    potential: Vec<f64>,
}

impl SchrodingerOperator {
    pub fn new(grid: BoxGrid, potential: Vec<f64>) -> Result<Self> {
        if potential.len() != grid.node_count() {
            return Err(Error::Shape(format!(
                "potential has {} values but grid has {} nodes",
                potential.len(),
                grid.node_count()
            )));
        }
        if potential.iter().any(|v| !v.is_finite()) {
            return Err(domain("potential must be finite on every node"));
        }
        Ok(SchrodingerOperator { grid, potential })
    }

    pub fn free(grid: BoxGrid) -> Self {
        let potential = vec![0.0; grid.node_count()];
        SchrodingerOperator { grid, potential }
    }

    pub fn from_fn(grid: &BoxGrid, v: impl Fn(&[f64]) -> f64) -> Result<Self> {
        Self::new(grid.clone(), grid.coordinates().map(|x| v(&x)).collect())
    }

    pub fn from_field(v: RealField) -> Result<Self> {
        Self::new(v.grid, v.values)
    }

    pub fn grid(&self) -> &BoxGrid {
        &self.grid
    }

    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    pub fn dim(&self) -> usize {
        self.potential.len()
    }

    /// Upper bound on the largest eigenvalue (Gershgorin).
    pub fn norm_bound(&self) -> f64 {
        let h = self.grid.spacing();
        let vmax = self.potential.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        self.grid.d as f64 * (2.0 + 2f64.sqrt()) / (h * h) + vmax
    }

    /// y = S x in weighted variables.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        let (diag, off) = axis_operator(&self.grid);
        let g = &self.grid;
        let len = g.axis_len();
        let strides = g.strides();
        for (i, yi) in y.iter_mut().enumerate() {
            let m = g.unravel(i);
            let mut acc = self.potential[i] * x[i];
            for a in 0..g.d {
                let k = m[a];
                acc += diag[k] * x[i];
                if k > 0 {
                    acc += off[k - 1] * x[i - strides[a]];
                }
                if k + 1 < len {
                    acc += off[k] * x[i + strides[a]];
                }
            }
            *yi = acc;
        }
    }

    /// ⟨u, (−Δ+V) u⟩ under trapezoid quadrature.
    pub fn quadratic_form(&self, u: &SampledField) -> Result<f64> {
        crate::grid::ensure_same_grid(&self.grid, u.grid())?;
        let w = self.grid.weights();
        let mut total = 0.0;
        for part in 0..2 {
            let x: Vec<f64> = u
                .values()
                .iter()
                .zip(&w)
                .map(|(c, w)| w.sqrt() * if part == 0 { c.re } else { c.im })
                .collect();
            let mut y = vec![0.0; x.len()];
            self.apply(&x, &mut y);
            total += x.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>();
        }
        Ok(total)
    }

    fn dense_matrix(&self) -> DMatrix<f64> {
        let n = self.dim();
        let (diag, off) = axis_operator(&self.grid);
        let g = &self.grid;
        let len = g.axis_len();
        let strides = g.strides();
        let mut a = DMatrix::zeros(n, n);
        for i in 0..n {
            let m = g.unravel(i);
            a[(i, i)] = self.potential[i];
            for ax in 0..g.d {
                let k = m[ax];
                a[(i, i)] += diag[k];
                if k + 1 < len {
                    let j = i + strides[ax];
                    a[(i, j)] = off[k];
                    a[(j, i)] = off[k];
                }
            }
        }
        a
    }

    fn tridiagonal(&self) -> (Vec<f64>, Vec<f64>) {
        let (diag, off) = axis_operator(&self.grid);
        let d = diag.iter().zip(&self.potential).map(|(a, v)| a + v).collect();
        (d, off)
    }

    fn to_field(&self, v: &[f64]) -> SampledField {
        let w = self.grid.weights();
        let values = v
            .iter()
            .zip(&w)
            .map(|(x, w)| Complex64::new(x / w.sqrt(), 0.0))
            .collect();
        SampledField::new(self.grid.clone(), values).expect("eigenvector matches grid")
    }
}

/// Diagonal and off-diagonal of the symmetric 1D operator `W^{-1/2} K W^{-1/2}`.
fn axis_operator(grid: &BoxGrid) -> (Vec<f64>, Vec<f64>) {
    let len = grid.axis_len();
    let h2 = grid.spacing().powi(2);
    let diag = vec![2.0 / h2; len];
    let mut off = vec![-1.0 / h2; len - 1];
    if grid.bc == BoundaryCondition::Neumann {
        off[0] = -(2f64.sqrt()) / h2;
        off[len - 2] = -(2f64.sqrt()) / h2;
    }
    (diag, off)
}

/// Ascending eigenvalues, optionally with quadrature-orthonormal eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Option<Vec<SampledField>>,
    pub solver_tol: f64,
    pub grid: Option<BoxGrid>,
}

#[derive(Serialize, Deserialize)]
struct SpectrumJson {
    eigenvalues: Vec<f64>,
    solver_tol: f64,
    grid: Option<BoxGrid>,
}

impl Spectrum {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(SpectrumJson {
            eigenvalues: self.eigenvalues.clone(),
            solver_tol: self.solver_tol,
            grid: self.grid.clone(),
        })
        .expect("spectrum serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let s: SpectrumJson = serde_json::from_value(v.clone())?;
        Ok(Spectrum {
            eigenvalues: s.eigenvalues,
            eigenvectors: None,
            solver_tol: s.solver_tol,
            grid: s.grid,
        })
    }
}

pub fn lowest_eigenvalues(op: &SchrodingerOperator, k: usize) -> Result<Spectrum> {
    solve(op, k, false)
}

pub fn lowest_eigenpairs(op: &SchrodingerOperator, k: usize) -> Result<Spectrum> {
    solve(op, k, true)
}

fn solve(op: &SchrodingerOperator, k: usize, vectors: bool) -> Result<Spectrum> {
    let n = op.dim();
    if k == 0 || k > n {
        return Err(domain(format!("requested {k} eigenvalues of a {n}-dimensional operator")));
    }
    let scale = op.norm_bound();
    let (values, vecs, tol) = if op.grid.d == 1 {
        let (d, e) = op.tridiagonal();
        let values = tridiagonal_lowest(&d, &e, k);
        let vecs = vectors.then(|| tridiagonal_vectors(&d, &e, &values));
        (values, vecs, 1e-13 * scale)
    } else if n <= DENSE_LIMIT && !vectors {
        let mut values: Vec<f64> = op.dense_matrix().symmetric_eigenvalues().iter().copied().collect();
        values.sort_by(f64::total_cmp);
        values.truncate(k);
        (values, None, 1e-10 * scale)
    } else if n <= DENSE_LIMIT {
        let eig = SymmetricEigen::new(op.dense_matrix());
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order[..k].iter().map(|&i| eig.eigenvalues[i]).collect();
        let vecs = vectors.then(|| {
            order[..k]
                .iter()
                .map(|&i| eig.eigenvectors.column(i).iter().copied().collect())
                .collect()
        });
        (values, vecs, 1e-10 * scale)
    } else {
        let tol = 1e-8 * scale;
        let (values, v) = lanczos_lowest(op, k, tol)?;
        (values, vectors.then_some(v), tol)
    };
    Ok(Spectrum {
        eigenvalues: values,
        eigenvectors: vecs.map(|vs: Vec<Vec<f64>>| vs.iter().map(|v| op.to_field(v)).collect()),
        solver_tol: tol,
        grid: Some(op.grid.clone()),
    })
}

/// Number of eigenvalues of the symmetric tridiagonal (d, e) strictly below x.
fn sturm_count(d: &[f64], e: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = d[0] - x;
    let tiny = f64::MIN_POSITIVE.sqrt();
    if q < 0.0 {
        count += 1;
    }
    for i in 1..d.len() {
        let qq = if q.abs() < tiny { -tiny } else { q };
        q = d[i] - x - e[i - 1] * e[i - 1] / qq;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn gershgorin(d: &[f64], e: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..d.len() {
        let r = if i > 0 { e[i - 1].abs() } else { 0.0 } + e.get(i).map_or(0.0, |v| v.abs());
        lo = lo.min(d[i] - r);
        hi = hi.max(d[i] + r);
    }
    (lo, hi)
}

/// The j-th smallest eigenvalue (0-based) by bisection.
fn tridiagonal_eigenvalue(d: &[f64], e: &[f64], j: usize, lo: f64, hi: f64) -> f64 {
    let (mut a, mut b) = (lo, hi);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if sturm_count(d, e, mid) > j {
            b = mid;
        } else {
            a = mid;
        }
    }
    0.5 * (a + b)
}

fn tridiagonal_lowest(d: &[f64], e: &[f64], k: usize) -> Vec<f64> {
    let (lo, hi) = gershgorin(d, e);
    let pad = 1e-12 * (hi - lo).max(1.0);
    (0..k)
        .map(|j| tridiagonal_eigenvalue(d, e, j, lo - pad, hi + pad))
        .collect()
}

/// All eigenvalues strictly below `x`.
fn tridiagonal_below(d: &[f64], e: &[f64], x: f64) -> Vec<f64> {
    let m = sturm_count(d, e, x);
    if m == 0 {
        return Vec::new();
    }
    tridiagonal_lowest(d, e, m)
}

/// Solves (T − s) x = b for symmetric tridiagonal T by LU with partial pivoting.
fn tridiagonal_solve(d: &[f64], e: &[f64], s: f64, b: &mut [f64]) {
    let n = d.len();
    if n == 1 {
        let p = d[0] - s;
        b[0] /= if p == 0.0 { f64::EPSILON } else { p };
        return;
    }
    // rows stored as (diag, super, super2) after elimination
    let mut dl: Vec<f64> = e.to_vec();
    let mut dd: Vec<f64> = d.iter().map(|v| v - s).collect();
    let mut du: Vec<f64> = e.to_vec();
    let mut du2 = vec![0.0; n.saturating_sub(2)];
    let mut swapped = vec![false; n - 1];
    let eps = f64::EPSILON * gershgorin(d, e).1.abs().max(1.0);
    for i in 0..n - 1 {
        if dd[i].abs() >= dl[i].abs() {
            if dd[i] == 0.0 {
                dd[i] = eps;
            }
            let f = dl[i] / dd[i];
            dl[i] = f;
            dd[i + 1] -= f * du[i];
        } else {
            let f = dd[i] / dl[i];
            dd[i] = dl[i];
            dl[i] = f;
            let t = du[i];
            du[i] = dd[i + 1];
            dd[i + 1] = t - f * dd[i + 1];
            if i + 1 < n - 1 {
                du2[i] = du[i + 1];
                du[i + 1] *= -f;
            }
            swapped[i] = true;
        }
    }
    if dd[n - 1] == 0.0 {
        dd[n - 1] = eps;
    }
    for i in 0..n - 1 {
        if swapped[i] {
            b.swap(i, i + 1);
            b[i + 1] -= dl[i] * b[i];
        } else {
            b[i + 1] -= dl[i] * b[i];
        }
    }
    b[n - 1] /= dd[n - 1];
    if n >= 2 {
        b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / dd[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / dd[i];
    }
}

fn normalize(v: &mut [f64]) {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn orthogonalize(v: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for q in basis {
            let c = dot(q, v);
            v.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
        }
    }
}

/// Inverse iteration, orthogonalizing within clusters of close eigenvalues.
fn tridiagonal_vectors(d: &[f64], e: &[f64], values: &[f64]) -> Vec<Vec<f64>> {
    let n = d.len();
    let scale = gershgorin(d, e).1.abs().max(1.0);
    let mut rng = random::rng(START_SEED);
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(values.len());
    for (j, &lambda) in values.iter().enumerate() {
        let cluster_start = (0..j)
            .rev()
            .take_while(|&i| (values[i + 1] - values[i]).abs() < 1e-7 * scale)
            .last()
            .unwrap_or(j);
        let mut v: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
        for _ in 0..4 {
            tridiagonal_solve(d, e, lambda, &mut v);
            orthogonalize(&mut v, &out[cluster_start..j]);
            normalize(&mut v);
        }
        out.push(v);
    }
    out
}

/// Solves (S − σ) x = b by conjugate gradients; S − σ must be positive definite.
fn cg_solve(op: &SchrodingerOperator, sigma: f64, b: &[f64], rel_tol: f64) -> Vec<f64> {
    let n = b.len();
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut ap = vec![0.0; n];
    let b_norm = dot(b, b).sqrt();
    let mut rr = dot(&r, &r);
    for _ in 0..20 * n {
        if rr.sqrt() <= rel_tol * b_norm {
            break;
        }
        op.apply(&p, &mut ap);
        ap.iter_mut().zip(&p).for_each(|(a, pi)| *a -= sigma * pi);
        let alpha = rr / dot(&p, &ap);
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rr_new = dot(&r, &r);
        let beta = rr_new / rr;
        rr = rr_new;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
    }
    x
}

/// Shift-invert Lanczos with full reorthogonalisation. The Krylov space is
/// enlarged until every requested Ritz pair has residual ‖Sv − λv‖ ≤ tol.
fn lanczos_lowest(op: &SchrodingerOperator, k: usize, tol: f64) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = op.dim();
    let sigma = op.potential.iter().fold(f64::INFINITY, |m, &v| m.min(v)) - 1.0;
    let mut rng = random::rng(START_SEED);
    let mut q0: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
    normalize(&mut q0);
    let mut basis = vec![q0];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut target = (2 * k + 20).min(n);
    let mut worst;
    loop {
        while alphas.len() < target {
            let j = alphas.len();
            let mut w = cg_solve(op, sigma, &basis[j], 1e-13);
            let a = dot(&w, &basis[j]);
            alphas.push(a);
            orthogonalize(&mut w, &basis);
            let b = dot(&w, &w).sqrt();
            if b < 1e-14 || basis.len() == n {
                break;
            }
            betas.push(b);
            w.iter_mut().for_each(|x| *x /= b);
            basis.push(w);
        }
        let m = alphas.len();
        let mut t = DMatrix::zeros(m, m);
        for i in 0..m {
            t[(i, i)] = alphas[i];
            if i + 1 < m {
                t[(i, i + 1)] = betas[i];
                t[(i + 1, i)] = betas[i];
            }
        }
        let eig = SymmetricEigen::new(t);
        let mut order: Vec<usize> = (0..m).collect();
        // largest θ of the inverse ↔ smallest λ of S
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let take = k.min(m);
        let mut values = Vec::with_capacity(take);
        let mut vectors = Vec::with_capacity(take);
        worst = 0.0f64;
        for &i in &order[..take] {
            let theta = eig.eigenvalues[i];
            let y = eig.eigenvectors.column(i);
            let mut v = vec![0.0; n];
            for (c, q) in y.iter().zip(&basis) {
                v.iter_mut().zip(q).for_each(|(a, b)| *a += c * b);
            }
            normalize(&mut v);
            let lambda = sigma + 1.0 / theta;
            let mut sv = vec![0.0; n];
            op.apply(&v, &mut sv);
            let res = sv
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - lambda * b).powi(2))
                .sum::<f64>()
                .sqrt();
            worst = worst.max(res);
            values.push(dot(&v, &sv));
            vectors.push(v);
        }
        if take == k && worst <= tol {
            let mut idx: Vec<usize> = (0..k).collect();
            idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
            return Ok((
                idx.iter().map(|&i| values[i]).collect(),
                idx.iter().map(|&i| vectors[i].clone()).collect(),
            ));
        }
        if m >= n || target >= n || m < target {
            break;
        }
        target = (target * 2).min(n);
    }
    Err(Error::Solver {
        residual: worst,
        tolerance: tol,
    })
}

/// Exact Laplacian eigenvalues π²|𝐤|²/|Q|^{2/d} of a cube, lowest `count` with
/// multiplicity; ties ordered by lexicographic 𝐤.
pub fn cube_spectrum_exact(d: usize, volume: f64, count: usize, bc: BoundaryCondition) -> Result<Spectrum> {
    check_cube(d, volume)?;
    if count == 0 {
        return Err(domain("cube spectrum needs count >= 1"));
    }
    let mut radius = 1usize;
    let mut indices = loop {
        let cap = radius * radius;
        let ks = lattice_points(d, bc, cap, radius);
        if ks.len() >= count {
            break ks;
        }
        radius *= 2;
    };
    indices.sort_by(|a, b| norm2(a).cmp(&norm2(b)).then_with(|| a.cmp(b)));
    let unit = PI * PI / volume.powf(2.0 / d as f64);
    Ok(Spectrum {
        eigenvalues: indices[..count].iter().map(|k| unit * norm2(k) as f64).collect(),
        eigenvectors: None,
        solver_tol: 0.0,
        grid: None,
    })
}

fn check_cube(d: usize, volume: f64) -> Result<()> {
    if d == 0 || d > 3 {
        return Err(domain(format!("cube dimension must be 1..=3, got {d}")));
    }
    if !(volume > 0.0) || !volume.is_finite() {
        return Err(domain(format!("cube volume must be positive, got {volume}")));
    }
    Ok(())
}

fn norm2(k: &[usize]) -> usize {
    k.iter().map(|x| x * x).sum()
}

/// Multi-indices with |𝐤|² ≤ cap and every component ≤ max.
fn lattice_points(d: usize, bc: BoundaryCondition, cap: usize, max: usize) -> Vec<Vec<usize>> {
    let start = match bc {
        BoundaryCondition::Neumann => 0,
        BoundaryCondition::Dirichlet => 1,
    };
    let mut out = Vec::new();
    let mut k = vec![start; d];
    fn rec(a: usize, k: &mut Vec<usize>, start: usize, cap: usize, max: usize, out: &mut Vec<Vec<usize>>) {
        if a == k.len() {
            if norm2(k) <= cap {
                out.push(k.clone());
            }
            return;
        }
        for v in start..=max {
            k[a] = v;
            let partial: usize = k[..=a].iter().map(|x| x * x).sum::<usize>()
                + (k.len() - a - 1) * start * start;
            if partial > cap {
                break;
            }
            rec(a + 1, k, start, cap, max, out);
        }
        k[a] = start;
    }
    rec(0, &mut k, start, cap, max, &mut out);
    out
}

/// N(E) = #{𝐤 : π²|𝐤|²/|Q|^{2/d} < E} for the Neumann cube.
pub fn neumann_counting_function(e: f64, volume: f64, d: usize) -> Result<usize> {
    check_cube(d, volume)?;
    let unit = PI * PI / volume.powf(2.0 / d as f64);
    if e <= 0.0 {
        return Ok(0);
    }
    let r2 = e / unit;
    let cap = if r2.fract() == 0.0 { r2 as usize - 1 } else { r2.floor() as usize };
    let max = (cap as f64).sqrt().floor() as usize;
    Ok(lattice_points(d, BoundaryCondition::Neumann, cap, max).len())
}

/// N(E) ≤ 1 + 2^d |Q| π^{−d} E^{d/2} for the Neumann Laplacian on a cube.
pub fn counting_bound_report(e: f64, volume: f64, d: usize) -> Result<InequalityReport> {
    if !(e > 0.0) {
        return Err(domain(format!("counting bound needs E > 0, got {e}")));
    }
    let count = neumann_counting_function(e, volume, d)? as f64;
    let df = d as f64;
    let constant = 2f64.powi(d as i32) / PI.powf(df);
    let rhs = 1.0 + constant * volume * e.powf(df / 2.0);
    Ok(InequalityReport::le("counting_bound", count, rhs, constant, 0.0))
}

/// Sum of all negative eigenvalues of the operator (≤ 0).
pub fn negative_eigenvalue_sum(op: &SchrodingerOperator) -> Result<f64> {
    Ok(negative_eigenvalues(op)?.iter().sum())
}

/// All eigenvalues strictly below zero.
pub fn negative_eigenvalues(op: &SchrodingerOperator) -> Result<Vec<f64>> {
    if op.potential.iter().all(|&v| v >= 0.0) {
        return Ok(Vec::new());
    }
    let n = op.dim();
    if op.grid.d == 1 {
        let (d, e) = op.tridiagonal();
        return Ok(tridiagonal_below(&d, &e, 0.0));
    }
    if n <= DENSE_LIMIT {
        let mut neg: Vec<f64> = op.dense_matrix().symmetric_eigenvalues().iter().copied().filter(|&v| v < 0.0).collect();
        neg.sort_by(f64::total_cmp);
        return Ok(neg);
    }
    let mut k = 8.min(n);
    loop {
        let s = lowest_eigenvalues(op, k)?;
        if s.eigenvalues.last().is_some_and(|&v| v >= 0.0) || k == n {
            return Ok(s.eigenvalues.into_iter().filter(|&v| v < 0.0).collect());
        }
        k = (2 * k).min(n);
    }
}

/// Negative-eigenvalue sum on a box together with its value on the box of
/// twice the side (same spacing), and whether the two agree within 1%.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergedSum {
    pub sum: f64,
    pub doubled_box_sum: f64,
    pub converged: bool,
}

/// Evaluates the negative-eigenvalue sum of −Δ + V on the centred cube of the
/// given side and on the cube of twice that side at the same spacing.
pub fn negative_eigenvalue_sum_converged(
    potential: impl Fn(&[f64]) -> f64,
    d: usize,
    n: usize,
    side: f64,
    bc: BoundaryCondition,
) -> Result<ConvergedSum> {
    let small = SchrodingerOperator::from_fn(&BoxGrid::centered(d, n, side, bc)?, &potential)?;
    let large = SchrodingerOperator::from_fn(&BoxGrid::centered(d, 2 * n, 2.0 * side, bc)?, &potential)?;
    let sum = negative_eigenvalue_sum(&small)?;
    let doubled_box_sum = negative_eigenvalue_sum(&large)?;
    let scale = sum.abs().max(doubled_box_sum.abs());
    Ok(ConvergedSum {
        sum,
        doubled_box_sum,
        converged: scale == 0.0 || (sum - doubled_box_sum).abs() <= 0.01 * scale,
    })
}

/// Tridiagonal s-wave radial Coulomb operator −u″ − (Z/r)u on (0, rmax) with
/// u(0) = u(rmax) = 0 on the half-offset nodes r_i = (i − 1/2)h.
fn radial_coulomb(z: f64, rmax: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let h = rmax / n as f64;
    let h2 = h * h;
    let mut d: Vec<f64> = (1..=n)
        .map(|i| 2.0 / h2 - z / ((i as f64 - 0.5) * h))
        .collect();
    // antisymmetric ghosts at r = −h/2 and r = rmax + h/2
    d[0] += 1.0 / h2;
    d[n - 1] += 1.0 / h2;
    (d, vec![-1.0 / h2; n - 1])
}

/// The `k` lowest s-wave radial Coulomb eigenvalues; they approach −Z²/(4(j+1)²).
pub fn radial_coulomb_eigenvalues(z: f64, rmax: f64, n: usize, k: usize) -> Result<Vec<f64>> {
    if !(z >= 0.0) || !(rmax > 0.0) || n < 2 {
        return Err(domain(format!(
            "radial operator needs Z >= 0, rmax > 0, n >= 2 (got Z={z}, rmax={rmax}, n={n})"
        )));
    }
    if k == 0 || k > n {
        return Err(domain(format!("requested {k} of {n} radial eigenvalues")));
    }
    let (d, e) = radial_coulomb(z, rmax, n);
    Ok(tridiagonal_lowest(&d, &e, k))
}

/// Lowest eigenvalue of the s-wave hydrogen radial operator (exact: −Z²/4).
pub fn radial_hydrogen_ground(z: f64, rmax: f64, n: usize) -> Result<f64> {
    if !(z > 0.0) {
        return Err(domain(format!("nuclear charge must be positive, got {z}")));
    }
    Ok(radial_coulomb_eigenvalues(z, rmax, n, 1)?[0])
}
