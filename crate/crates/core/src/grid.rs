//! Uniform tensor grids on d-cubes, sampled fields and their quadratures.
//!
//! Nodes are ordered row-major with the last axis fastest. Neumann grids
//! carry all `(n+1)^d` nodes with trapezoid weights; Dirichlet grids carry
//! only the `(n−1)^d` interior nodes (boundary values are zero) with weight
//! `h^d`.
//!
//! The kinetic energy is the edge form
//! `Σ_axes Σ_edges w_⊥ |u_{i+1} − u_i|² / h`, i.e. central differences at edge
//! midpoints with trapezoid weights transverse to the edge. It is exactly the
//! quadratic form of the finite-difference operator in [`crate::spectral`]
//! (reflected ghost nodes for Neumann, zero ghosts for Dirichlet).

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

pub const MAX_DIM: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
}

impl std::str::FromStr for BoundaryCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dirichlet" => Ok(BoundaryCondition::Dirichlet),
            "neumann" => Ok(BoundaryCondition::Neumann),
            _ => Err(domain(format!("unknown boundary condition `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxGrid {
    pub d: usize,
    pub n: usize,
    pub side: f64,
    /// Coordinate of the lower corner along every axis.
    #[serde(default)]
    pub lower: f64,
    pub bc: BoundaryCondition,
}

impl BoxGrid {
    pub fn new(d: usize, n: usize, side: f64, bc: BoundaryCondition) -> Result<Self> {
        Self::with_lower(d, n, side, 0.0, bc)
    }

    /// Grid on the cube `[-side/2, side/2]^d`.
    pub fn centered(d: usize, n: usize, side: f64, bc: BoundaryCondition) -> Result<Self> {
        Self::with_lower(d, n, side, -side / 2.0, bc)
    }

    pub fn with_lower(d: usize, n: usize, side: f64, lower: f64, bc: BoundaryCondition) -> Result<Self> {
        if d == 0 || d > MAX_DIM {
            return Err(domain(format!("grid dimension must be 1..=3, got {d}")));
        }
        if n < 2 {
            return Err(domain(format!("grid needs at least 2 cells per side, got {n}")));
        }
        if !(side > 0.0) || !side.is_finite() {
            return Err(domain(format!("grid side must be positive, got {side}")));
        }
        Ok(BoxGrid { d, n, side, lower, bc })
    }

    pub fn spacing(&self) -> f64 {
        self.side / self.n as f64
    }

    pub fn volume(&self) -> f64 {
        self.side.powi(self.d as i32)
    }

    /// Nodes per axis.
    pub fn axis_len(&self) -> usize {
        match self.bc {
            BoundaryCondition::Neumann => self.n + 1,
            BoundaryCondition::Dirichlet => self.n - 1,
        }
    }

    pub fn node_count(&self) -> usize {
        self.axis_len().pow(self.d as u32)
    }

    pub fn axis_coord(&self, i: usize) -> f64 {
        let h = self.spacing();
        match self.bc {
            BoundaryCondition::Neumann => self.lower + i as f64 * h,
            BoundaryCondition::Dirichlet => self.lower + (i + 1) as f64 * h,
        }
    }

    pub fn axis_weight(&self, i: usize) -> f64 {
        let h = self.spacing();
        match self.bc {
            BoundaryCondition::Neumann if i == 0 || i == self.n => 0.5 * h,
            _ => h,
        }
    }

    pub fn axis_weights(&self) -> Vec<f64> {
        (0..self.axis_len()).map(|i| self.axis_weight(i)).collect()
    }

    pub fn center(&self) -> Vec<f64> {
        vec![self.lower + self.side / 2.0; self.d]
    }

    pub fn strides(&self) -> [usize; MAX_DIM] {
        let len = self.axis_len();
        let mut s = [0; MAX_DIM];
        let mut acc = 1;
        for a in (0..self.d).rev() {
            s[a] = acc;
            acc *= len;
        }
        s
    }

    pub fn unravel(&self, mut index: usize) -> [usize; MAX_DIM] {
        let len = self.axis_len();
        let mut out = [0; MAX_DIM];
        for a in (0..self.d).rev() {
            out[a] = index % len;
            index /= len;
        }
        out
    }

    pub fn coordinate(&self, index: usize) -> Vec<f64> {
        let m = self.unravel(index);
        (0..self.d).map(|a| self.axis_coord(m[a])).collect()
    }

    pub fn coordinates(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        (0..self.node_count()).map(move |i| self.coordinate(i))
    }

    /// Trapezoid quadrature weights for every node.
    pub fn weights(&self) -> Vec<f64> {
        let w = self.axis_weights();
        (0..self.node_count())
            .map(|i| {
                let m = self.unravel(i);
                (0..self.d).map(|a| w[m[a]]).product()
            })
            .collect()
    }

    /// Distance of every node from the box centre.
    pub fn radii(&self) -> Vec<f64> {
        let c = self.center();
        self.coordinates()
            .map(|x| x.iter().zip(&c).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt())
            .collect()
    }

    /// Whether a node sits on the boundary of the cube (never for Dirichlet grids,
    /// whose boundary nodes are not stored).
    pub fn is_boundary(&self, index: usize) -> bool {
        if self.bc == BoundaryCondition::Dirichlet {
            return false;
        }
        let m = self.unravel(index);
        (0..self.d).any(|a| m[a] == 0 || m[a] == self.n)
    }

    /// Index of the node mirrored through the box centre, x ↦ 2c − x.
    pub fn mirror(&self, index: usize) -> usize {
        let m = self.unravel(index);
        let s = self.strides();
        let last = self.axis_len() - 1;
        (0..self.d).map(|a| (last - m[a]) * s[a]).sum()
    }

    pub fn same_shape(&self, other: &BoxGrid) -> bool {
        self.d == other.d
            && self.n == other.n
            && self.bc == other.bc
            && (self.side - other.side).abs() <= 1e-12 * self.side
            && (self.lower - other.lower).abs() <= 1e-12 * self.side.max(self.lower.abs())
    }
}

/// Complex node values on a [`BoxGrid`]; the discrete stand-in for u ∈ H¹.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    grid: BoxGrid,
    values: Vec<Complex64>,
}

impl SampledField {
    pub fn new(grid: BoxGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.node_count() {
            return Err(Error::Shape(format!(
                "field has {} values but grid has {} nodes",
                values.len(),
                grid.node_count()
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(domain("field values must be finite"));
        }
        Ok(SampledField { grid, values })
    }

    pub fn from_real(grid: BoxGrid, values: Vec<f64>) -> Result<Self> {
        Self::new(grid, values.into_iter().map(|v| Complex64::new(v, 0.0)).collect())
    }

    pub fn from_fn(grid: &BoxGrid, f: impl Fn(&[f64]) -> Complex64) -> Self {
        let values = grid.coordinates().map(|x| f(&x)).collect();
        SampledField {
            grid: grid.clone(),
            values,
        }
    }

    pub fn from_real_fn(grid: &BoxGrid, f: impl Fn(&[f64]) -> f64) -> Self {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    pub fn grid(&self) -> &BoxGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> SampledField {
        SampledField {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn scaled(&self, c: Complex64) -> SampledField {
        self.map(|v| v * c)
    }

    /// Pointwise modulus |u|.
    pub fn modulus(&self) -> SampledField {
        self.map(|v| Complex64::new(v.norm(), 0.0))
    }

    pub fn norm_sqr(&self) -> f64 {
        let w = self.grid.weights();
        self.values.iter().zip(&w).map(|(v, w)| w * v.norm_sqr()).sum()
    }

    pub fn max_modulus(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Quadrature inner product ⟨self, other⟩ (antilinear in self).
    pub fn inner(&self, other: &SampledField) -> Result<Complex64> {
        ensure_same_grid(&self.grid, &other.grid)?;
        let w = self.grid.weights();
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .zip(&w)
            .map(|((a, b), w)| a.conj() * b * *w)
            .sum())
    }

    /// First node on the box boundary where |u| exceeds `rel_tol · max|u|`.
    pub fn boundary_violation(&self, rel_tol: f64) -> Option<usize> {
        let bound = rel_tol * self.max_modulus();
        (0..self.values.len()).find(|&i| self.grid.is_boundary(i) && self.values[i].norm() > bound)
    }

    /// Writes the values as little-endian f64 to `path` and a JSON sidecar to
    /// `path.json`. Complex fields are interleaved (re, im).
    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let complex = !self.is_real();
        let mut bytes = Vec::with_capacity(self.values.len() * if complex { 16 } else { 8 });
        for v in &self.values {
            bytes.extend_from_slice(&v.re.to_le_bytes());
            if complex {
                bytes.extend_from_slice(&v.im.to_le_bytes());
            }
        }
        fs::File::create(path)?.write_all(&bytes)?;
        let meta = FieldMeta {
            d: self.grid.d,
            n: self.grid.n,
            side: self.grid.side,
            bc: self.grid.bc,
            complex,
            lower: self.grid.lower,
        };
        fs::write(sidecar_path(path), serde_json::to_string_pretty(&meta)?)?;
        Ok(())
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let meta: FieldMeta = serde_json::from_str(&fs::read_to_string(sidecar_path(path))?)?;
        let grid = BoxGrid::with_lower(meta.d, meta.n, meta.side, meta.lower, meta.bc)?;
        let mut bytes = Vec::new();
        fs::File::open(path)?.read_to_end(&mut bytes)?;
        let per = if meta.complex { 16 } else { 8 };
        if bytes.len() != grid.node_count() * per {
            return Err(Error::Shape(format!(
                "{} holds {} bytes, expected {}",
                path.display(),
                bytes.len(),
                grid.node_count() * per
            )));
        }
        let f = |c: &[u8]| f64::from_le_bytes(c.try_into().expect("8-byte chunk"));
        let values = bytes
            .chunks_exact(per)
            .map(|c| {
                if meta.complex {
                    Complex64::new(f(&c[..8]), f(&c[8..]))
                } else {
                    Complex64::new(f(c), 0.0)
                }
            })
            .collect();
        SampledField::new(grid, values)
    }
}

/// JSON sidecar of a binary field file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldMeta {
    pub d: usize,
    pub n: usize,
    pub side: f64,
    pub bc: BoundaryCondition,
    pub complex: bool,
    #[serde(default)]
    pub lower: f64,
}

fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

pub(crate) fn ensure_same_grid(a: &BoxGrid, b: &BoxGrid) -> Result<()> {
    if a.same_shape(b) {
        Ok(())
    } else {
        Err(Error::Shape(format!("grid mismatch: {a:?} vs {b:?}")))
    }
}

/// Real node values (potentials, weights); may be negative.
#[derive(Debug, Clone, PartialEq)]
pub struct RealField {
    pub grid: BoxGrid,
    pub values: Vec<f64>,
}

impl RealField {
    pub fn new(grid: BoxGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.node_count() {
            return Err(Error::Shape(format!(
                "field has {} values but grid has {} nodes",
                values.len(),
                grid.node_count()
            )));
        }
        Ok(RealField { grid, values })
    }

    pub fn from_fn(grid: &BoxGrid, f: impl Fn(&[f64]) -> f64) -> Self {
        RealField {
            grid: grid.clone(),
            values: grid.coordinates().map(|x| f(&x)).collect(),
        }
    }

    pub fn integrate(&self) -> f64 {
        self.grid.weights().iter().zip(&self.values).map(|(w, v)| w * v).sum()
    }
}

/// Non-negative density on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityField {
    grid: BoxGrid,
    values: Vec<f64>,
}

impl DensityField {
    pub fn new(grid: BoxGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.node_count() {
            return Err(Error::Shape(format!(
                "density has {} values but grid has {} nodes",
                values.len(),
                grid.node_count()
            )));
        }
        if let Some(i) = values.iter().position(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(domain(format!("density must be finite and non-negative (node {i})")));
        }
        Ok(DensityField { grid, values })
    }

    pub fn from_fn(grid: &BoxGrid, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        Self::new(grid.clone(), grid.coordinates().map(|x| f(&x)).collect())
    }

    pub fn grid(&self) -> &BoxGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mass(&self) -> f64 {
        self.integral_of(|r| r)
    }

    /// ∫ g(ρ) by trapezoid quadrature.
    pub fn integral_of(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.grid
            .weights()
            .iter()
            .zip(&self.values)
            .map(|(w, &r)| w * g(r))
            .sum()
    }
}

/// ∫|∇u|² by the edge form (see module docs). Always ≥ 0.
pub fn kinetic_energy(field: &SampledField) -> f64 {
    let g = &field.grid;
    tensor_edge_energy(
        &field.values,
        g.d,
        &g.axis_weights(),
        g.spacing(),
        g.bc == BoundaryCondition::Dirichlet,
    )
}

/// Edge-form Dirichlet energy of values on a `dims`-dimensional tensor grid
/// with identical axes (row-major, last axis fastest).
pub(crate) fn tensor_edge_energy(
    u: &[Complex64],
    dims: usize,
    w: &[f64],
    h: f64,
    dirichlet: bool,
) -> f64 {
    let len = w.len();
    let mut strides = vec![1usize; dims];
    for a in (0..dims.saturating_sub(1)).rev() {
        strides[a] = strides[a + 1] * len;
    }
    let mut m = vec![0usize; dims];
    let mut total = 0.0;
    for idx in 0..u.len() {
        let node_w: f64 = m.iter().map(|&k| w[k]).product();
        for a in 0..dims {
            let transverse = node_w / w[m[a]] / h;
            if m[a] + 1 < len {
                total += transverse * (u[idx + strides[a]] - u[idx]).norm_sqr();
            } else if dirichlet {
                total += transverse * u[idx].norm_sqr();
            }
            if dirichlet && m[a] == 0 {
                total += transverse * u[idx].norm_sqr();
            }
        }
        for a in (0..dims).rev() {
            m[a] += 1;
            if m[a] < len {
                break;
            }
            m[a] = 0;
        }
    }
    total
}

/// Quadrature L^p norm; `p = f64::INFINITY` gives the maximum modulus.
pub fn lp_norm(field: &SampledField, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(domain(format!("L^p norm needs p >= 1, got {p}")));
    }
    if p.is_infinite() {
        return Ok(field.max_modulus());
    }
    let w = field.grid.weights();
    let s: f64 = field
        .values
        .iter()
        .zip(&w)
        .map(|(v, w)| w * v.norm().powf(p))
        .sum();
    Ok(s.powf(1.0 / p))
}

/// λ_f(t) = |{x : |f(x)| > t}| under the quadrature measure.
pub fn distribution_function(field: &SampledField, t: f64) -> f64 {
    let w = field.grid.weights();
    field
        .values
        .iter()
        .zip(&w)
        .filter(|(v, _)| v.norm() > t)
        .map(|(_, w)| w)
        .sum()
}

/// ∫₀^∞ λ_f(t) d(t^p), integrating the step function λ_f exactly between the
/// sorted node moduli. Equals `lp_norm(f, p)^p` under the same quadrature.
pub fn layer_cake_norm(field: &SampledField, p: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(domain(format!("layer-cake norm needs finite p >= 1, got {p}")));
    }
    let w = field.grid.weights();
    let mut pairs: Vec<(f64, f64)> = field.values.iter().map(|v| v.norm()).zip(w).collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    // λ(t) = W_k on [v_{k+1}, v_k) where W_k is the weight of the k largest values
    let mut level_weight = 0.0;
    let mut total = 0.0;
    for k in 0..pairs.len() {
        level_weight += pairs[k].1;
        let top = pairs[k].0;
        let bottom = pairs.get(k + 1).map_or(0.0, |x| x.0);
        if top > bottom {
            total += level_weight * (top.powf(p) - bottom.powf(p));
        }
    }
    Ok(total)
}

/// ρ(x) = Σ_j |u_j(x)|².
pub fn density_from_orbitals(orbitals: &[SampledField]) -> Result<DensityField> {
    let first = orbitals
        .first()
        .ok_or_else(|| Error::Shape("no orbitals given".into()))?;
    let mut rho = vec![0.0; first.values.len()];
    for u in orbitals {
        ensure_same_grid(&first.grid, &u.grid)?;
        for (r, v) in rho.iter_mut().zip(&u.values) {
            *r += v.norm_sqr();
        }
    }
    DensityField::new(first.grid.clone(), rho)
}
