//! One-body and few-body uncertainty inequalities evaluated on sampled fields.
//!
//! Every checker normalizes its input to unit L² norm first, so reports are
//! exactly invariant under u ↦ c·u. Inequalities posed on all of ℝ^d require
//! the field to vanish on the box boundary (the zero extension is then an
//! admissible whole-space function); singular weights require the field to
//! vanish within two grid cells of the singular set.
//!
//! Unless a tolerance is passed explicitly, checks allow the relative slack
//! `2h²T`, with `T` the kinetic energy of the normalized field. The edge-form
//! kinetic energy underestimates ∫|∇u|² by about `h²⟨|∇²u|²⟩/12`, which is of
//! order `h²T/4` for smooth bumps; the slack covers that with margin and
//! scales with how well the grid resolves the field.

use std::f64::consts::PI;

use num_complex::Complex64;
use quadrature::double_exponential;
use serde::{Deserialize, Serialize};

use crate::constants::{self, ConstantKind};
use crate::error::{domain, precondition, Error, Result};
use crate::grid::{self, BoundaryCondition, BoxGrid, RealField, SampledField};
use crate::report::InequalityReport;

/// Relative size below which a value counts as vanishing.
pub const VANISH_TOL: f64 = 1e-10;

/// Cells around a singular set where a field must vanish.
pub const EXCLUSION_CELLS: f64 = 2.0;

/// Slack for a field on `grid` whose normalized kinetic energy is `t`.
pub fn default_tolerance(grid: &BoxGrid, t: f64) -> f64 {
    2.0 * grid.spacing().powi(2) * t + 1e-12
}

fn normalized(field: &SampledField) -> Result<SampledField> {
    let norm = field.norm_sqr().sqrt();
    if !(norm > 0.0) {
        return Err(domain("field is identically zero"));
    }
    Ok(field.scaled(Complex64::new(1.0 / norm, 0.0)))
}

fn require_boundary_vanishing(field: &SampledField) -> Result<()> {
    if let Some(i) = field.boundary_violation(VANISH_TOL) {
        return Err(precondition(format!(
            "field does not vanish on the box boundary (node {i} at {:?})",
            field.grid().coordinate(i)
        )));
    }
    Ok(())
}

/// Errors if |u| is non-negligible on a node where `excluded` holds.
fn require_vanishing_where(field: &SampledField, what: &str, excluded: impl Fn(&[f64]) -> bool) -> Result<()> {
    let bound = VANISH_TOL * field.max_modulus();
    let g = field.grid();
    for (i, v) in field.values().iter().enumerate() {
        if v.norm() > bound {
            let x = g.coordinate(i);
            if excluded(&x) {
                return Err(precondition(format!("field does not vanish {what} (node {i} at {x:?})")));
            }
        }
    }
    Ok(())
}

fn radius(grid: &BoxGrid, x: &[f64]) -> f64 {
    let c = grid.lower + grid.side / 2.0;
    x.iter().map(|xi| (xi - c).powi(2)).sum::<f64>().sqrt()
}

/// ∫ |u|² w(x) over nodes where the weight is finite.
fn weighted_mass(field: &SampledField, weight: impl Fn(&[f64]) -> f64) -> f64 {
    let g = field.grid();
    g.weights()
        .iter()
        .zip(field.values())
        .enumerate()
        .filter(|(_, (_, v))| v.norm_sqr() > 0.0)
        .map(|(i, (w, v))| w * v.norm_sqr() * weight(&g.coordinate(i)))
        .sum()
}

/// ⟨p²⟩⟨x²⟩ ≥ d²/4, second moment about the box centre.
pub fn check_heisenberg(field: &SampledField, tol: Option<f64>) -> Result<InequalityReport> {
    let u = normalized(field)?;
    require_boundary_vanishing(&u)?;
    let g = u.grid();
    let t = grid::kinetic_energy(&u);
    let x2 = weighted_mass(&u, |x| radius(g, x).powi(2));
    let d = g.d as f64;
    let c = d * d / 4.0;
    Ok(InequalityReport::ge("heisenberg", t * x2, c, c, tol.unwrap_or(default_tolerance(g, t))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HardyVariant {
    /// ∫|∇u|² ≥ (d−2)²/4 ∫|u|²/|x|² (d = 3, or d = 1 with u(0) = 0).
    Standard,
    /// ∫|∇u|² ≥ 1/4 ∫|u|²/(|x|² ln²|x|) in d = 2.
    Log2d,
    /// ∫|∇u|² ≥ d²/4 ∫|u|²/|x|² for u(−x) = −u(x).
    Antipodal,
}

impl std::str::FromStr for HardyVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(HardyVariant::Standard),
            "log2d" => Ok(HardyVariant::Log2d),
            "antipodal" => Ok(HardyVariant::Antipodal),
            _ => Err(domain(format!("unknown Hardy variant `{s}`"))),
        }
    }
}

pub fn check_hardy(field: &SampledField, variant: HardyVariant, tol: Option<f64>) -> Result<InequalityReport> {
    let u = normalized(field)?;
    require_boundary_vanishing(&u)?;
    let g = u.grid().clone();
    let h = g.spacing();
    let zone = EXCLUSION_CELLS * h;
    let d = g.d as f64;
    let (name, c) = match variant {
        HardyVariant::Standard => {
            if g.d == 2 {
                return Err(domain("standard Hardy inequality is trivial in d = 2; use log2d or antipodal"));
            }
            require_vanishing_where(&u, "near the centre", |x| radius(&g, x) <= zone)?;
            ("hardy_standard", (d - 2.0).powi(2) / 4.0)
        }
        HardyVariant::Log2d => {
            if g.d != 2 {
                return Err(domain(format!("log2d Hardy inequality needs d = 2, got {}", g.d)));
            }
            require_vanishing_where(&u, "near the centre or the unit circle", |x| {
                let r = radius(&g, x);
                r <= zone || (r - 1.0).abs() <= zone
            })?;
            ("hardy_log2d", 0.25)
        }
        HardyVariant::Antipodal => {
            let bound = 1e-12 * u.max_modulus();
            let vals = u.values();
            for i in 0..vals.len() {
                let j = g.mirror(i);
                if (vals[i] + vals[j]).norm() > bound {
                    return Err(precondition(format!(
                        "field is not antisymmetric under x -> -x (node {i} at {:?})",
                        g.coordinate(i)
                    )));
                }
            }
            ("hardy_antipodal", d * d / 4.0)
        }
    };
    let t = grid::kinetic_energy(&u);
    let integral = weighted_mass(&u, |x| {
        let r = radius(&g, x);
        match variant {
            HardyVariant::Log2d => 1.0 / (r * r * r.ln().powi(2)),
            _ if r == 0.0 => 0.0,
            _ => 1.0 / (r * r),
        }
    });
    Ok(InequalityReport::ge(name, t, c * integral, c, tol.unwrap_or(default_tolerance(&g, t))))
}

fn central_derivatives(f: &[f64], grid: &BoxGrid, i: usize) -> Option<(f64, f64)> {
    let m = grid.unravel(i);
    let s = grid.strides();
    let h = grid.spacing();
    let last = grid.axis_len() - 1;
    let mut grad2 = 0.0;
    let mut lap = 0.0;
    for a in 0..grid.d {
        if m[a] == 0 || m[a] == last {
            return None;
        }
        let (fm, fp) = (f[i - s[a]], f[i + s[a]]);
        grad2 += ((fp - fm) / (2.0 * h)).powi(2);
        lap += (fp - 2.0 * f[i] + fm) / (h * h);
    }
    Some((grad2, lap))
}

/// W = α(1−α)|∇f|²/f² + α(−Δf)/f by central differences; zero on boundary
/// nodes and wherever f ≤ 0.
pub fn gsr_potential(f: &SampledField, alpha: f64) -> RealField {
    let g = f.grid();
    let fv: Vec<f64> = f.values().iter().map(|c| c.re).collect();
    let values = (0..fv.len())
        .map(|i| match central_derivatives(&fv, g, i) {
            Some((grad2, lap)) if fv[i] > 0.0 => {
                alpha * (1.0 - alpha) * grad2 / (fv[i] * fv[i]) - alpha * lap / fv[i]
            }
            _ => 0.0,
        })
        .collect();
    RealField {
        grid: g.clone(),
        values,
    }
}

/// ∫|∇u|² = ∫W|u|² + ∫|∇(f^{−α}u)|² f^{2α} for positive f.
pub fn gsr_identity_check(
    f: &SampledField,
    u: &SampledField,
    alpha: f64,
    tol: Option<f64>,
) -> Result<InequalityReport> {
    grid::ensure_same_grid(f.grid(), u.grid())?;
    let u = normalized(u)?;
    let g = u.grid().clone();
    let last = g.axis_len() - 1;
    let s = g.strides();
    let vals = u.values();
    let fv: Vec<f64> = f.values().iter().map(|c| c.re).collect();
    let bound = VANISH_TOL * u.max_modulus();
    let support: Vec<bool> = vals.iter().map(|v| v.norm() > bound).collect();
    for (i, _) in support.iter().enumerate().filter(|(_, s)| **s) {
        let m = g.unravel(i);
        if (0..g.d).any(|a| m[a] < 2 || m[a] + 2 > last) {
            return Err(precondition(format!(
                "u does not vanish in the two-cell boundary layer (node {i} at {:?})",
                g.coordinate(i)
            )));
        }
        let neighbours = (0..g.d).flat_map(|a| [i - s[a], i + s[a]]);
        if std::iter::once(i).chain(neighbours).any(|j| !(fv[j] > 0.0)) {
            return Err(domain(format!("f must be positive on the support of u (node {i})")));
        }
    }
    let w_gsr = gsr_potential(f, alpha);
    let potential_term: f64 = g
        .weights()
        .iter()
        .zip(vals)
        .zip(&w_gsr.values)
        .zip(&support)
        .filter(|(_, &s)| s)
        .map(|(((w, v), wg), _)| w * wg * v.norm_sqr())
        .sum();
    // ∫|∇g|² f^{2α} in edge form, geometric mean of f^α at the edge ends
    let phi: Vec<f64> = fv.iter().map(|&x| if x > 0.0 { x.powf(alpha) } else { 0.0 }).collect();
    let gv: Vec<Complex64> = vals
        .iter()
        .zip(&phi)
        .zip(&support)
        .map(|((v, p), &s)| if s { v / p } else { Complex64::new(0.0, 0.0) })
        .collect();
    let aw = g.axis_weights();
    let h = g.spacing();
    let mut reduced = 0.0;
    for i in 0..vals.len() {
        let m = g.unravel(i);
        let node_w: f64 = (0..g.d).map(|a| aw[m[a]]).product();
        for a in 0..g.d {
            if m[a] < last {
                let j = i + s[a];
                if support[i] || support[j] {
                    reduced += node_w / aw[m[a]] / h * (gv[j] - gv[i]).norm_sqr() * phi[i] * phi[j];
                }
            }
        }
    }
    let lhs = grid::kinetic_energy(&u);
    let rhs = potential_term + reduced;
    let tol = tol.unwrap_or(1.0 / g.n as f64);
    Ok(InequalityReport::eq("gsr_identity", lhs, rhs, alpha, tol))
}

/// Which GNS constant to test against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GnsConstant {
    /// The proven lower bound G_d′.
    Proven,
    /// Best known optimal value (π²/4 in d = 1, numerical in d = 3).
    OptimalKnown,
}

/// ∫|∇u|² ‖u‖₂^{4/d} ≥ G ∫|u|^{2+4/d}.
pub fn check_gns(field: &SampledField, which: GnsConstant, tol: Option<f64>) -> Result<InequalityReport> {
    let u = normalized(field)?;
    require_boundary_vanishing(&u)?;
    let g = u.grid();
    let kind = match which {
        GnsConstant::Proven => ConstantKind::GnsLower,
        GnsConstant::OptimalKnown => ConstantKind::GnsOptimalKnown,
    };
    let c = constants::constant_info(kind, g.d)?;
    let p = 2.0 + 4.0 / g.d as f64;
    let integral = grid::lp_norm(&u, p)?.powf(p);
    let t = grid::kinetic_energy(&u);
    Ok(InequalityReport::ge("gns", t, c.value * integral, c.value, tol.unwrap_or(default_tolerance(g, t)))
        .with_rigorous(c.rigorous))
}

/// d = 3: ∫|∇u|² ≥ S₃‖u‖₆²; d = 1: ∫|u′|² ≥ ‖u‖∞⁴/‖u‖₂².
pub fn check_sobolev(field: &SampledField, tol: Option<f64>) -> Result<InequalityReport> {
    let u = normalized(field)?;
    let g = u.grid();
    let t = grid::kinetic_energy(&u);
    let (rhs, c) = match g.d {
        1 => {
            require_boundary_vanishing(&u)?;
            (u.max_modulus().powi(4), 1.0)
        }
        3 => {
            require_boundary_vanishing(&u)?;
            let s3 = constants::constant(ConstantKind::Sobolev, 3)?;
            (s3 * grid::lp_norm(&u, 6.0)?.powi(2), s3)
        }
        d => return Err(domain(format!("Sobolev check supports d = 1 or 3, got {d}"))),
    };
    Ok(InequalityReport::ge("sobolev", t, rhs, c, tol.unwrap_or(default_tolerance(g, t))))
}

/// ∫|u′|² ≥ (π²/ℓ²) ∫|u − ū|² on an interval of length ℓ.
pub fn check_poincare(field: &SampledField, tol: Option<f64>) -> Result<InequalityReport> {
    let g = field.grid();
    if g.d != 1 {
        return Err(domain(format!("Poincaré check is one-dimensional, got d = {}", g.d)));
    }
    let scale = field.norm_sqr().sqrt();
    let u = if scale > 0.0 {
        field.scaled(Complex64::new(1.0 / scale, 0.0))
    } else {
        field.clone()
    };
    let w = g.weights();
    let total: f64 = w.iter().sum();
    let mean: Complex64 = u.values().iter().zip(&w).map(|(v, w)| v * *w).sum::<Complex64>() / total;
    let var: f64 = u.values().iter().zip(&w).map(|(v, w)| w * (v - mean).norm_sqr()).sum();
    let c = PI * PI / (g.side * g.side);
    let t = grid::kinetic_energy(&u);
    let slack = default_tolerance(g, t.max(c));
    Ok(InequalityReport::ge("poincare", t, c * var, c, tol.unwrap_or(slack)))
}

/// ∫₀^∞ [A − B t^{d/4}]₊² dt against d²A^{2+4/d}B^{−4/d}/((d+2)(d+4)).
pub fn gns_integral_identity(a: f64, b: f64, d: usize) -> Result<InequalityReport> {
    if !(b > 0.0) || !(a >= 0.0) || d == 0 {
        return Err(domain(format!("integral identity needs A >= 0, B > 0, d >= 1 (got {a}, {b}, {d})")));
    }
    let df = d as f64;
    let closed = df * df * a.powf(2.0 + 4.0 / df) * b.powf(-4.0 / df) / ((df + 2.0) * (df + 4.0));
    let numeric = if a == 0.0 {
        0.0
    } else {
        let upper = (a / b).powf(4.0 / df);
        let f = |t: f64| (a - b * t.powf(df / 4.0)).max(0.0).powi(2);
        double_exponential::integrate(f, 0.0, upper, 1e-14 * closed).integral
    };
    Ok(InequalityReport::eq("gns_integral_identity", numeric, closed, 1.0, 1e-8))
}

/// Exchange symmetry of a many-body wave function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetry {
    None,
    Symmetric,
    Antisymmetric,
}

pub const MAX_MANYBODY_DIM: usize = 6;
pub const MAX_MANYBODY_CELLS: usize = 24;

/// Ψ(x₁,…,x_N) on the N-fold product of a one-body grid. Values are stored
/// row-major in the particle index, each particle's block in grid order.
#[derive(Debug, Clone, PartialEq)]
pub struct ManyBodyField {
    grid: BoxGrid,
    particles: usize,
    values: Vec<Complex64>,
    symmetry: Symmetry,
}

impl ManyBodyField {
    pub fn new(grid: BoxGrid, particles: usize, values: Vec<Complex64>, symmetry: Symmetry) -> Result<Self> {
        if !(2..=3).contains(&particles) {
            return Err(domain(format!("many-body fields support N = 2 or 3, got {particles}")));
        }
        if grid.d * particles > MAX_MANYBODY_DIM {
            return Err(domain(format!(
                "configuration dimension {} exceeds {MAX_MANYBODY_DIM}",
                grid.d * particles
            )));
        }
        if grid.n > MAX_MANYBODY_CELLS {
            return Err(domain(format!(
                "many-body grids allow at most {MAX_MANYBODY_CELLS} cells per axis, got {}",
                grid.n
            )));
        }
        let expected = grid.node_count().pow(particles as u32);
        if values.len() != expected {
            return Err(Error::Shape(format!(
                "many-body field has {} values, expected {expected}",
                values.len()
            )));
        }
        let field = ManyBodyField {
            grid,
            particles,
            values,
            symmetry,
        };
        field.verify_symmetry()?;
        Ok(field)
    }

    /// Product, Slater determinant or permanent of one orbital per particle.
    pub fn from_orbitals(orbitals: &[SampledField], symmetry: Symmetry) -> Result<Self> {
        let n = orbitals.len();
        let grid = orbitals
            .first()
            .ok_or_else(|| Error::Shape("no orbitals given".into()))?
            .grid()
            .clone();
        for o in orbitals {
            grid::ensure_same_grid(&grid, o.grid())?;
        }
        let k = grid.node_count();
        let total = k.checked_pow(n as u32).ok_or_else(|| domain("many-body grid too large"))?;
        let perms = permutations(n);
        let values = (0..total)
            .map(|flat| {
                let idx = split_index(flat, k, n);
                let term = |p: &[usize]| -> Complex64 {
                    (0..n).map(|j| orbitals[p[j]].values()[idx[j]]).product()
                };
                match symmetry {
                    Symmetry::None => term(&(0..n).collect::<Vec<_>>()),
                    Symmetry::Symmetric => perms.iter().map(|(p, _)| term(p)).sum(),
                    Symmetry::Antisymmetric => perms.iter().map(|(p, sign)| term(p) * *sign).sum(),
                }
            })
            .collect();
        Self::new(grid, n, values, symmetry)
    }

    /// Multiplies Ψ pointwise by f(x₁, …, x_N).
    pub fn with_factor(&self, f: impl Fn(&[Vec<f64>]) -> f64) -> Result<Self> {
        let k = self.grid.node_count();
        let coords: Vec<Vec<f64>> = self.grid.coordinates().collect();
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(flat, v)| {
                let xs: Vec<Vec<f64>> = split_index(flat, k, self.particles)
                    .into_iter()
                    .map(|i| coords[i].clone())
                    .collect();
                v * f(&xs)
            })
            .collect();
        Self::new(self.grid.clone(), self.particles, values, self.symmetry)
    }

    pub fn grid(&self) -> &BoxGrid {
        &self.grid
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    fn max_modulus(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    fn verify_symmetry(&self) -> Result<()> {
        let sign = match self.symmetry {
            Symmetry::None => return Ok(()),
            Symmetry::Symmetric => 1.0,
            Symmetry::Antisymmetric => -1.0,
        };
        let bound = 1e-12 * self.max_modulus();
        let k = self.grid.node_count();
        let n = self.particles;
        for a in 0..n {
            for b in a + 1..n {
                for flat in 0..self.values.len() {
                    let mut idx = split_index(flat, k, n);
                    idx.swap(a, b);
                    let other = join_index(&idx, k);
                    if (self.values[other] - self.values[flat] * sign).norm() > bound {
                        return Err(precondition(format!(
                            "declared {:?} symmetry fails under exchanging particles {a} and {b} (entry {flat})",
                            self.symmetry
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn weights(&self) -> Vec<f64> {
        let w = self.grid.weights();
        let k = w.len();
        (0..self.values.len())
            .map(|flat| split_index(flat, k, self.particles).iter().map(|&i| w[i]).product())
            .collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.weights().iter().zip(&self.values).map(|(w, v)| w * v.norm_sqr()).sum()
    }

    /// Σ_j ∫|∇_j Ψ|² in edge form on the product grid.
    pub fn kinetic_energy(&self) -> f64 {
        grid::tensor_edge_energy(
            &self.values,
            self.grid.d * self.particles,
            &self.grid.axis_weights(),
            self.grid.spacing(),
            self.grid.bc == BoundaryCondition::Dirichlet,
        )
    }
}

fn split_index(mut flat: usize, k: usize, n: usize) -> Vec<usize> {
    let mut idx = vec![0; n];
    for j in (0..n).rev() {
        idx[j] = flat % k;
        flat /= k;
    }
    idx
}

fn join_index(idx: &[usize], k: usize) -> usize {
    idx.iter().fold(0, |acc, &i| acc * k + i)
}

/// All permutations of 0..n with their signs.
fn permutations(n: usize) -> Vec<(Vec<usize>, f64)> {
    fn rec(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<(Vec<usize>, f64)>) {
        if prefix.len() == n {
            let mut inversions = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if prefix[i] > prefix[j] {
                        inversions += 1;
                    }
                }
            }
            out.push((prefix.clone(), if inversions % 2 == 0 { 1.0 } else { -1.0 }));
            return;
        }
        for v in 0..n {
            if !prefix.contains(&v) {
                prefix.push(v);
                rec(prefix, n, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), n, &mut out);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ManyBodyHardyVariant {
    /// d = 1: Σ_j∫|∂_jΨ|² ≥ ½ Σ_{j<k} ∫|Ψ|²/|x_j − x_k|².
    Onedim,
    /// Antisymmetric Ψ: Σ_j∫|∇_jΨ|² ≥ (d²/N) Σ_{j<k} ∫|Ψ|²/|x_j − x_k|².
    Fermionic,
}

impl std::str::FromStr for ManyBodyHardyVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "onedim" => Ok(ManyBodyHardyVariant::Onedim),
            "fermionic" => Ok(ManyBodyHardyVariant::Fermionic),
            _ => Err(domain(format!("unknown many-body Hardy variant `{s}`"))),
        }
    }
}

pub fn check_manybody_hardy(
    psi: &ManyBodyField,
    variant: ManyBodyHardyVariant,
    tol: Option<f64>,
) -> Result<InequalityReport> {
    let g = &psi.grid;
    let n = psi.particles;
    let k = g.node_count();
    let norm = psi.norm_sqr().sqrt();
    if !(norm > 0.0) {
        return Err(domain("many-body field is identically zero"));
    }
    let coords: Vec<Vec<f64>> = g.coordinates().collect();
    let boundary: Vec<bool> = (0..k).map(|i| g.is_boundary(i)).collect();
    let bound = VANISH_TOL * psi.max_modulus();
    let zone = EXCLUSION_CELLS * g.spacing();
    let dist = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let (name, c) = match variant {
        ManyBodyHardyVariant::Onedim => {
            if g.d != 1 {
                return Err(domain(format!("one-dimensional many-body Hardy needs d = 1, got {}", g.d)));
            }
            ("manybody_hardy_onedim", 0.5)
        }
        ManyBodyHardyVariant::Fermionic => {
            if psi.symmetry != Symmetry::Antisymmetric {
                return Err(precondition("fermionic Hardy inequality needs an antisymmetric field"));
            }
            (
                "manybody_hardy_fermionic",
                (g.d * g.d) as f64 / n as f64,
            )
        }
    };
    let weights = psi.weights();
    let mut pair_integral = 0.0;
    for (flat, v) in psi.values.iter().enumerate() {
        if v.norm() <= bound {
            continue;
        }
        let idx = split_index(flat, k, n);
        if idx.iter().any(|&i| boundary[i]) {
            return Err(precondition(format!("field does not vanish on the box boundary (entry {flat})")));
        }
        let mut s = 0.0;
        for a in 0..n {
            for b in a + 1..n {
                let r = dist(&coords[idx[a]], &coords[idx[b]]);
                if variant == ManyBodyHardyVariant::Onedim && r <= zone {
                    return Err(precondition(format!(
                        "field does not vanish near the diagonal x_{a} = x_{b} (entry {flat})"
                    )));
                }
                if r > 0.0 {
                    s += 1.0 / (r * r);
                }
            }
        }
        pair_integral += weights[flat] * v.norm_sqr() * s;
    }
    let n2 = norm * norm;
    let lhs = psi.kinetic_energy() / n2;
    let rhs = c * pair_integral / n2;
    Ok(InequalityReport::ge(name, lhs, rhs, c, tol.unwrap_or(default_tolerance(g, lhs))))
}
