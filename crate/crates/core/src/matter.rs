//! Coulomb systems: the many-body potential, Baxter's reduction, hydrogenic
//! bounds, free Fermi gas energetics and the stability constant chain.
//!
//! Kinetic energy is −Δ throughout except in the stability bounds, which
//! follow the physical convention −Δ/(2m) with the mass carried explicitly.
//! A bound for −Δ + V is obtained from one for −Δ/(2m) + V with m = 1/2.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::erf::erf;

use crate::constants::{self, ConstantKind, DualDirection, GNS_OPTIMAL_3D};
use crate::error::{domain, Result};
use crate::grid::BoundaryCondition;
use crate::report::{EnergyBoundReport, InequalityReport};
use crate::spectral;

pub type Point = [f64; 3];

/// Electrons at `x`, nuclei of charge Z at `r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatterConfig {
    #[serde(rename = "Z")]
    pub z: f64,
    #[serde(default = "one_usize")]
    pub q: usize,
    #[serde(default = "one_f64")]
    pub m: f64,
    pub x: Vec<Point>,
    #[serde(rename = "R")]
    pub r: Vec<Point>,
}

fn one_usize() -> usize {
    1
}

fn one_f64() -> f64 {
    1.0
}

impl MatterConfig {
    pub fn new(z: f64, x: Vec<Point>, r: Vec<Point>) -> Result<Self> {
        let cfg = MatterConfig { z, q: 1, m: 1.0, x, r };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.z > 0.0) || !self.z.is_finite() {
            return Err(domain(format!("nuclear charge must be positive, got {}", self.z)));
        }
        if self.q == 0 {
            return Err(domain("spin multiplicity q must be at least 1"));
        }
        if !(self.m > 0.0) {
            return Err(domain(format!("mass must be positive, got {}", self.m)));
        }
        if self.x.iter().chain(&self.r).flatten().any(|c| !c.is_finite()) {
            return Err(domain("positions must be finite"));
        }
        Ok(())
    }

    /// Electron count N.
    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// Nucleus count M.
    pub fn nuclei(&self) -> usize {
        self.r.len()
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let cfg: MatterConfig = serde_json::from_str(s)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn dist(a: &Point, b: &Point) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

fn separation(a: &Point, b: &Point, what: impl FnOnce() -> String) -> Result<f64> {
    let r = dist(a, b);
    if r > 0.0 {
        Ok(r)
    } else {
        Err(domain(format!("{} coincide", what())))
    }
}

/// Σ_{i<j} 1/|x_i−x_j| − Z Σ_{j,k} 1/|x_j−R_k| + Z² Σ_{k<l} 1/|R_k−R_l|.
pub fn coulomb_energy(cfg: &MatterConfig) -> Result<f64> {
    let (x, r, z) = (&cfg.x, &cfg.r, cfg.z);
    let mut e = 0.0;
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            e += 1.0 / separation(&x[i], &x[j], || format!("electrons {i} and {j}"))?;
        }
        for (k, rk) in r.iter().enumerate() {
            e -= z / separation(&x[i], rk, || format!("electron {i} and nucleus {k}"))?;
        }
    }
    for k in 0..r.len() {
        for l in k + 1..r.len() {
            e += z * z / separation(&r[k], &r[l], || format!("nuclei {k} and {l}"))?;
        }
    }
    Ok(e)
}

/// W_C ≥ −(2Z+1) Σ_j 1/dist(x_j, R) + (Z²/4) Σ_k 1/dist(R_k, R∖k). Empty
/// nearest-neighbour sets (M = 0 for electrons, M = 1 for nuclei) drop out.
pub fn baxter_check(cfg: &MatterConfig) -> Result<InequalityReport> {
    let lhs = coulomb_energy(cfg)?;
    let z = cfg.z;
    let nearest = |p: &Point, skip: Option<usize>| {
        cfg.r
            .iter()
            .enumerate()
            .filter(|(k, _)| Some(*k) != skip)
            .map(|(_, rk)| dist(p, rk))
            .fold(f64::INFINITY, f64::min)
    };
    let electrons: f64 = cfg.x.iter().map(|xj| 1.0 / nearest(xj, None)).sum();
    let nuclei: f64 = cfg.r.iter().enumerate().map(|(k, rk)| 1.0 / nearest(rk, Some(k))).sum();
    let rhs = -(2.0 * z + 1.0) * electrons + z * z / 4.0 * nuclei;
    Ok(InequalityReport::ge("baxter", lhs, rhs, 2.0 * z + 1.0, 1e-9))
}

/// Ground-state energy of −Δ − Z/|x| and two lower bounds for it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HydrogenBounds {
    pub exact: f64,
    pub hardy: f64,
    /// From the density minimization with the numerical optimal G₃.
    pub gns: f64,
    /// Same minimization with the proven G₃ ≥ S₃.
    pub gns_rigorous: f64,
}

pub fn hydrogen_bounds(z: f64) -> Result<HydrogenBounds> {
    if !(z > 0.0) {
        return Err(domain(format!("nuclear charge must be positive, got {z}")));
    }
    let z2 = z * z;
    let gns = |g3: f64| -9.0 * (PI / 2.0).powf(4.0 / 3.0) * z2 / (5.0 * g3);
    Ok(HydrogenBounds {
        exact: -z2 / 4.0,
        hardy: -z2,
        gns: gns(GNS_OPTIMAL_3D),
        gns_rigorous: gns(constants::constant(ConstantKind::Sobolev, 3)?),
    })
}

/// L₃ from the best proven kinetic LT constant.
pub fn best_known_l3() -> f64 {
    let k = constants::constant(ConstantKind::LtBestKnown, 3).expect("d = 3 is supported");
    constants::lt_dual(k, 3, DualDirection::KToL).expect("positive constant")
}

fn stability_chain(
    label: &str,
    n: usize,
    nuclei: usize,
    z: f64,
    m: f64,
    ql3: f64,
    inputs: &[(&str, f64)],
) -> Result<EnergyBoundReport> {
    if n == 0 || nuclei == 0 {
        return Err(domain("stability bound needs N, M >= 1"));
    }
    if !(z > 0.0) || !(m > 0.0) || !(ql3 > 0.0) {
        return Err(domain(format!("Z, m and L3 must be positive (got Z={z}, m={m}, L3={ql3})")));
    }
    let (nf, mf) = (n as f64, nuclei as f64);
    let core = (5.0 * PI * PI * ql3).powf(2.0 / 3.0) * m * (2.0 * z + 1.0).powi(2);
    let sharp = -1.5 * core * mf.powf(2.0 / 3.0) * nf.powf(1.0 / 3.0);
    // M^{2/3}N^{1/3} ≤ N + M
    let linear = -1.5 * core * (nf + mf);
    let coefficient = 1.5 * (5.0 * PI * PI * ql3).powf(2.0 / 3.0);
    Ok(EnergyBoundReport::new(label, linear, nf + mf, inputs)
        .detail("sharp", sharp)
        .detail("linear", linear)
        .detail("coefficient", coefficient)
        // M^{2/3}N^{1/3} ≤ (2M + N)/3 gives the smaller factor
        .detail("young_coefficient", coefficient * 2.0 / 3.0))
}

/// −(3/2)(5π²qL₃)^{2/3} m(2Z+1)² M^{2/3}N^{1/3} (detail `sharp`) and its
/// linear relaxation in N + M (the reported value). `coefficient` is
/// (3/2)(5π²qL₃)^{2/3}/q^{2/3}, independent of N, M, Z, m.
pub fn stability_bound(n: usize, nuclei: usize, z: f64, q: usize, m: f64, l3: f64) -> Result<EnergyBoundReport> {
    if q == 0 {
        return Err(domain("q must be at least 1"));
    }
    let qf = q as f64;
    let mut r = stability_chain(
        "stability",
        n,
        nuclei,
        z,
        m,
        qf * l3,
        &[("N", n as f64), ("M", nuclei as f64), ("Z", z), ("q", qf), ("m", m), ("L3", l3)],
    )?;
    let c = r.details["coefficient"] / qf.powf(2.0 / 3.0);
    r = r.detail("coefficient", c);
    Ok(r)
}

/// The same chain with qL₃ replaced by L₃(β) for inverse-square repelling bosons.
pub fn inverse_square_stability_bound(
    n: usize,
    nuclei: usize,
    z: f64,
    m: f64,
    beta: f64,
    l3_beta: f64,
) -> Result<EnergyBoundReport> {
    if !(beta > 0.0) {
        return Err(domain(format!("beta must be positive, got {beta}")));
    }
    stability_chain(
        "inverse_square_stability",
        n,
        nuclei,
        z,
        m,
        l3_beta,
        &[("N", n as f64), ("M", nuclei as f64), ("Z", z), ("m", m), ("beta", beta), ("L3beta", l3_beta)],
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FermiMode {
    ExactFill,
    Weyl,
    LocalLower,
}

impl std::str::FromStr for FermiMode {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact_fill" => Ok(FermiMode::ExactFill),
            "weyl" => Ok(FermiMode::Weyl),
            "local_lower" => Ok(FermiMode::LocalLower),
            _ => Err(domain(format!("unknown Fermi gas mode `{s}`"))),
        }
    }
}

/// Ground-state energy of N free fermions with q spin states in a Neumann cube.
pub fn fermi_gas_energy(n: usize, volume: f64, d: usize, q: usize, mode: FermiMode) -> Result<EnergyBoundReport> {
    if n == 0 || q == 0 {
        return Err(domain("need N >= 1 and q >= 1"));
    }
    if d == 0 || d > 3 {
        return Err(domain(format!("dimension must be 1..=3, got {d}")));
    }
    if !(volume > 0.0) {
        return Err(domain(format!("volume must be positive, got {volume}")));
    }
    let (nf, qf, df) = (n as f64, q as f64, d as f64);
    let scale = volume.powf(2.0 / df);
    let inputs = [("N", nf), ("volume", volume), ("d", df), ("q", qf)];
    let report = match mode {
        FermiMode::ExactFill => {
            let levels = n.div_ceil(q);
            let spec = spectral::cube_spectrum_exact(d, volume, levels, BoundaryCondition::Neumann)?;
            let mut left = n;
            let mut e = 0.0;
            for level in &spec.eigenvalues {
                let take = left.min(q);
                e += take as f64 * level;
                left -= take;
            }
            EnergyBoundReport::new("fermi_exact_fill", e, nf, &inputs)
        }
        FermiMode::Weyl => {
            let e = qf.powf(-2.0 / df) * constants::semiclassical(d) * nf.powf(1.0 + 2.0 / df) / scale;
            EnergyBoundReport::new("fermi_weyl", e, nf, &inputs)
        }
        FermiMode::LocalLower => {
            let centre = (2.0 * nf / ((df + 2.0) * qf)).powf(1.0 / df).round() as i64;
            let (mut best, mut best_m) = (f64::NEG_INFINITY, 1);
            for m in (centre - 2).max(1)..=centre + 2 {
                let mf = m as f64;
                let e = PI * PI / scale * (nf * mf * mf - qf * mf.powf(df + 2.0));
                if e > best {
                    best = e;
                    best_m = m;
                }
            }
            EnergyBoundReport::new("fermi_local_lower", best.max(0.0), nf, &inputs).detail("M_side", best_m as f64)
        }
    };
    Ok(report)
}

/// Ground-state energy of N spinless fermions in the oscillator ω²|x|²/4
/// (levels ω(k + d/2)); d = 2 needs a closed shell N = n(n+1)/2.
pub fn harmonic_fermion_energy(n: usize, d: usize, omega: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(domain(format!("omega must be positive, got {omega}")));
    }
    let nf = n as f64;
    match d {
        1 => Ok(omega * nf * nf / 2.0),
        2 => {
            let shell = ((((8 * n + 1) as f64).sqrt() - 1.0) / 2.0).round() as usize;
            if shell * (shell + 1) / 2 != n {
                let below = (1..).map(|s| s * (s + 1) / 2).take_while(|&t| t < n).last().unwrap_or(0);
                let above = (1..).map(|s| s * (s + 1) / 2).find(|&t| t > n).expect("unbounded");
                return Err(domain(format!(
                    "N = {n} is not a closed shell in d = 2; nearest magic numbers are {below} and {above}"
                )));
            }
            Ok(omega * nf * (8.0 * nf + 1.0).sqrt() / 3.0)
        }
        _ => Err(domain(format!("harmonic fermion energy is available for d = 1, 2, got {d}"))),
    }
}

/// (4c/K₃)^{3/5} ε^{2/5} N.
pub fn extensivity_max_particles(c: f64, k3: f64, eps: f64, n: usize) -> Result<f64> {
    if !(c > 0.0 && k3 > 0.0 && eps > 0.0) {
        return Err(domain(format!("c, K3 and eps must be positive (got {c}, {k3}, {eps})")));
    }
    Ok((4.0 * c / k3).powf(0.6) * eps.powf(0.4) * n as f64)
}

/// ⟨1/|X − Y|⟩ for independent X, Y with isotropic Gaussian densities of
/// exponents a, b (ρ ∝ e^{−a|x|²}) whose centres are `r` apart; b = ∞ is a point.
fn gaussian_coulomb(a: f64, b: f64, r: f64) -> f64 {
    let g = if b.is_infinite() { a } else { a * b / (a + b) };
    if r < 1e-12 {
        2.0 * (g / PI).sqrt()
    } else {
        erf(g.sqrt() * r) / r
    }
}

/// Energy of the product of Gaussian orbitals |φ_j|² ∝ e^{−a_j|x − x_j|²}
/// under Σ −Δ_j/(2m) + W_C, against −(1/2)mZ²NM².
pub fn first_kind_check(cfg: &MatterConfig, exponents: &[f64]) -> Result<InequalityReport> {
    cfg.validate()?;
    if exponents.len() != cfg.n() {
        return Err(domain(format!("need {} exponents, got {}", cfg.n(), exponents.len())));
    }
    if exponents.iter().any(|a| !(*a > 0.0) || !a.is_finite()) {
        return Err(domain("Gaussian exponents must be positive"));
    }
    let (x, r, z, m) = (&cfg.x, &cfg.r, cfg.z, cfg.m);
    // ⟨−Δ⟩ = 3a/2 for |φ|² ∝ e^{−a r²}
    let mut e: f64 = exponents.iter().map(|a| 1.5 * a / (2.0 * m)).sum();
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            e += gaussian_coulomb(exponents[i], exponents[j], dist(&x[i], &x[j]));
        }
        for rk in r {
            e -= z * gaussian_coulomb(exponents[i], f64::INFINITY, dist(&x[i], rk));
        }
    }
    for k in 0..r.len() {
        for l in k + 1..r.len() {
            e += z * z / separation(&r[k], &r[l], || format!("nuclei {k} and {l}"))?;
        }
    }
    let (nf, mf) = (cfg.n() as f64, cfg.nuclei() as f64);
    let bound = -0.5 * m * z * z * nf * mf * mf;
    Ok(InequalityReport::ge("first_kind_stability", e, bound, 0.5 * m * z * z, 1e-12))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{self, uniform};

    fn cfg(z: f64, x: Vec<Point>, r: Vec<Point>) -> MatterConfig {
        MatterConfig::new(z, x, r).unwrap()
    }

    #[test]
    fn coulomb_examples() {
        let c = cfg(1.0, vec![[1.0, 0.0, 0.0]], vec![[0.0; 3]]);
        assert_eq!(coulomb_energy(&c).unwrap(), -1.0);
        let c = cfg(1.0, vec![[0.0; 3], [2.0, 0.0, 0.0]], vec![]);
        assert_eq!(coulomb_energy(&c).unwrap(), 0.5);
        // unit square, alternating charges: 4 unlike edges, 2 like diagonals
        let c = cfg(
            1.0,
            vec![[0.0, 0.0, 0.0], [1.0, 1.0, 0.0]],
            vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
        );
        let expect = 2.0 / 2f64.sqrt() - 4.0;
        assert!((coulomb_energy(&c).unwrap() - expect).abs() < 1e-14);
        let bad = cfg(1.0, vec![[0.0; 3]], vec![[0.0; 3]]);
        let err = coulomb_energy(&bad).unwrap_err().to_string();
        assert!(err.contains("electron 0 and nucleus 0"), "{err}");
    }

    #[test]
    fn baxter_examples() {
        let r = baxter_check(&cfg(1.0, vec![[1.0, 0.0, 0.0]], vec![[0.0; 3]])).unwrap();
        assert_eq!((r.lhs, r.rhs), (-1.0, -3.0));
        assert!(r.passed);
        let r = baxter_check(&cfg(2.0, vec![], vec![[0.0; 3], [1.0, 0.0, 0.0]])).unwrap();
        assert!(r.passed && r.rhs == 2.0);
        let mut rng = random::rng(5);
        for _ in 0..500 {
            let n = random::below(&mut rng, 9);
            let m = random::below(&mut rng, 9);
            let pts = |k: usize, rng: &mut random::Rng| -> Vec<Point> {
                (0..k).map(|_| [0; 3].map(|_: i32| uniform(rng, -2.0, 2.0))).collect()
            };
            let x = pts(n, &mut rng);
            let r = pts(m, &mut rng);
            let z = [1.0, 2.0, 17.0][random::below(&mut rng, 3)];
            assert!(baxter_check(&cfg(z, x, r)).unwrap().passed);
        }
    }

    #[test]
    fn hydrogen() {
        let h = hydrogen_bounds(1.0).unwrap();
        assert_eq!((h.exact, h.hardy), (-0.25, -1.0));
        assert!((h.gns + 0.3432).abs() < 5e-5, "{}", h.gns);
        assert!((h.gns_rigorous + 0.6).abs() < 1e-3);
        assert!(h.hardy <= h.gns_rigorous && h.gns_rigorous <= h.gns && h.gns <= h.exact);
        let h3 = hydrogen_bounds(3.0).unwrap();
        assert!((h3.gns - 9.0 * h.gns).abs() < 1e-12);
    }

    #[test]
    fn stability_chain_values() {
        let l3 = best_known_l3();
        assert!((l3 - 0.0122518).abs() < 1e-6, "{l3}");
        let r = stability_bound(10, 10, 1.0, 1, 1.0, l3).unwrap();
        assert!((r.details["coefficient"] - 1.073).abs() < 0.005 * 1.073);
        assert!((r.value + r.details["coefficient"] * 9.0 * 20.0).abs() < 1e-10);
        let r2 = stability_bound(10, 10, 1.0, 2, 1.0, l3).unwrap();
        assert!((r2.value / r.value - 2f64.powf(2.0 / 3.0)).abs() < 1e-12);
        assert!((r2.details["coefficient"] - r.details["coefficient"]).abs() < 1e-12);
        let b = inverse_square_stability_bound(10, 10, 1.0, 1.0, 0.5, 2.0 * l3).unwrap();
        assert_eq!(b.value, r2.value);
        assert!(r.details["sharp"] >= r.value);
    }

    #[test]
    fn fermi_gas() {
        let e = fermi_gas_energy(3, 1.0, 1, 1, FermiMode::ExactFill).unwrap();
        assert!((e.value - 5.0 * PI * PI).abs() < 1e-12);
        let exact = fermi_gas_energy(100, 1.0, 1, 1, FermiMode::ExactFill).unwrap().value;
        let weyl = fermi_gas_energy(100, 1.0, 1, 1, FermiMode::Weyl).unwrap().value;
        assert!((exact / weyl - 99.0 * 199.0 / 20000.0).abs() < 1e-12);
        for (n, d, q) in [(7, 1, 1), (40, 2, 2), (200, 3, 1), (1000, 3, 2), (55, 2, 1)] {
            let lo = fermi_gas_energy(n, 2.0, d, q, FermiMode::LocalLower).unwrap().value;
            let ex = fermi_gas_energy(n, 2.0, d, q, FermiMode::ExactFill).unwrap().value;
            assert!(lo > 0.0 && lo <= ex, "{n} {d} {q}: {lo} vs {ex}");
        }
        // each level holds q particles
        let e = fermi_gas_energy(4, 1.0, 1, 2, FermiMode::ExactFill).unwrap();
        assert!((e.value - 2.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn harmonic() {
        assert_eq!(harmonic_fermion_energy(3, 2, 1.0).unwrap(), 5.0);
        assert_eq!(harmonic_fermion_energy(1, 2, 2.0).unwrap(), 2.0);
        assert_eq!(harmonic_fermion_energy(4, 1, 1.0).unwrap(), 8.0);
        let err = harmonic_fermion_energy(4, 2, 1.0).unwrap_err().to_string();
        assert!(err.contains("3 and 6"), "{err}");
        // shell sum 1 + 2² + … + n²
        for s in 1..10usize {
            let n = s * (s + 1) / 2;
            let sum: usize = (1..=s).map(|k| k * k).sum();
            assert!((harmonic_fermion_energy(n, 2, 1.0).unwrap() - sum as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn extensivity() {
        assert_eq!(extensivity_max_particles(0.25, 1.0, 1.0, 12).unwrap(), 12.0);
        assert!(extensivity_max_particles(1.0, 1.0, 1e-30, 12).unwrap() < 1e-10);
        assert!(extensivity_max_particles(0.0, 1.0, 1.0, 1).is_err());
    }

    #[test]
    fn first_kind() {
        let mut rng = random::rng(9);
        for _ in 0..300 {
            let n = 1 + random::below(&mut rng, 2);
            let m = 1 + random::below(&mut rng, 2);
            let pts = |k: usize, rng: &mut random::Rng| -> Vec<Point> {
                (0..k).map(|_| [0; 3].map(|_: i32| uniform(rng, -1.0, 1.0))).collect()
            };
            let mut c = cfg(uniform(&mut rng, 0.5, 5.0), pts(n, &mut rng), pts(m, &mut rng));
            c.m = uniform(&mut rng, 0.2, 3.0);
            let a: Vec<f64> = (0..n).map(|_| uniform(&mut rng, 0.01, 100.0)).collect();
            assert!(first_kind_check(&c, &a).unwrap().passed);
        }
        // optimal single Gaussian: −4mZ²/(3π)
        let c = cfg(1.0, vec![[0.0; 3]], vec![[0.0; 3]]);
        let s = 4.0 / (3.0 * PI.sqrt());
        let r = first_kind_check(&c, &[s * s]).unwrap();
        assert!((r.lhs + 4.0 / (3.0 * PI)).abs() < 1e-12);
    }

    #[test]
    fn config_json() {
        let c = MatterConfig::from_json(r#"{"Z": 2, "x": [[0,0,1]], "R": [[0,0,0]]}"#).unwrap();
        assert_eq!((c.n(), c.nuclei(), c.q, c.m), (1, 1, 1, 1.0));
        assert!(MatterConfig::from_json(r#"{"Z": -1, "x": [], "R": []}"#).is_err());
    }
}
