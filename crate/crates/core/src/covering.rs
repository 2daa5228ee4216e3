//! Adaptive dyadic partition of a cube into sub-cubes of bounded mass, and the
//! weighted power sums that the covering lemma bounds from below.

use serde::{Deserialize, Serialize};
use statrs::function::erf::{erf, erfc};

use crate::constants;
use crate::error::{domain, precondition, Error, Result};
use crate::grid::{BoundaryCondition, DensityField};
use crate::report::InequalityReport;

pub const MAX_DEPTH: usize = 40;

/// Axis-aligned cube `corner + [0, side]^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cube {
    pub corner: Vec<f64>,
    pub side: f64,
}

impl Cube {
    pub fn new(corner: Vec<f64>, side: f64) -> Result<Self> {
        if corner.is_empty() || corner.len() > 3 {
            return Err(domain(format!("cube dimension must be 1..=3, got {}", corner.len())));
        }
        if !(side > 0.0) || !side.is_finite() {
            return Err(domain(format!("cube side must be positive, got {side}")));
        }
        Ok(Cube { corner, side })
    }

    pub fn d(&self) -> usize {
        self.corner.len()
    }

    pub fn volume(&self) -> f64 {
        self.side.powi(self.d() as i32)
    }

    /// The 2^d half-size children, ordered lexicographically by corner.
    pub fn children(&self) -> Vec<Cube> {
        let d = self.d();
        let half = self.side / 2.0;
        (0..1usize << d)
            .map(|b| Cube {
                corner: (0..d)
                    .map(|a| self.corner[a] + half * ((b >> (d - 1 - a)) & 1) as f64)
                    .collect(),
                side: half,
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Leaf {
    pub corner: Vec<f64>,
    pub side: f64,
    pub mass: f64,
    pub depth: usize,
}

impl Leaf {
    pub fn cube(&self) -> Cube {
        Cube {
            corner: self.corner.clone(),
            side: self.side,
        }
    }

    pub fn volume(&self) -> f64 {
        self.side.powi(self.corner.len() as i32)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassPartition {
    pub d: usize,
    pub root: Cube,
    pub lambda: f64,
    pub leaves: Vec<Leaf>,
}

impl MassPartition {
    pub fn total_volume(&self) -> f64 {
        self.leaves.iter().map(Leaf::volume).sum()
    }

    pub fn total_mass(&self) -> f64 {
        self.leaves.iter().map(|l| l.mass).sum()
    }

    pub fn max_leaf_mass(&self) -> f64 {
        self.leaves.iter().map(|l| l.mass).fold(0.0, f64::max)
    }

    pub fn max_depth(&self) -> usize {
        self.leaves.iter().map(|l| l.depth).max().unwrap_or(0)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("partition serializes")
    }
}

/// Splits every cube of mass > λ into its 2^d children until all leaves hold
/// at most λ. A cube of mass exactly λ is kept. The oracle must be finitely
/// additive; every split is checked against it to 10⁻⁹ relative.
pub fn partition(oracle: &dyn Fn(&Cube) -> f64, root: &Cube, lambda: f64) -> Result<MassPartition> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(domain(format!("lambda must be positive, got {lambda}")));
    }
    let eval = |c: &Cube| -> Result<f64> {
        let m = oracle(c);
        if !m.is_finite() {
            return Err(domain(format!("mass oracle returned {m} on {c:?}")));
        }
        if m < 0.0 {
            return Err(domain(format!("mass oracle returned negative mass {m} on {c:?}")));
        }
        Ok(m)
    };
    let root_mass = eval(root)?;
    let floor = 1e-14 * root_mass;
    let mut leaves = Vec::new();
    // depth-first, children pushed in reverse so leaves come out in order
    let mut stack = vec![(root.clone(), root_mass, 0usize)];
    while let Some((cube, mass, depth)) = stack.pop() {
        if mass <= lambda {
            leaves.push(Leaf {
                corner: cube.corner,
                side: cube.side,
                mass,
                depth,
            });
            continue;
        }
        if depth >= MAX_DEPTH {
            return Err(Error::Refinement { depth: depth + 1 });
        }
        let children = cube.children();
        let masses = children.iter().map(&eval).collect::<Result<Vec<f64>>>()?;
        let sum: f64 = masses.iter().sum();
        if (sum - mass).abs() > 1e-9 * sum.max(mass) + floor {
            return Err(precondition(format!(
                "mass oracle is not additive: children sum to {sum} but the parent holds {mass} ({cube:?})"
            )));
        }
        for (c, m) in children.into_iter().zip(masses).rev() {
            stack.push((c, m, depth + 1));
        }
    }
    Ok(MassPartition {
        d: root.d(),
        root: root.clone(),
        lambda,
        leaves,
    })
}

/// (Σ_Q |Q|^{−α} m_Q^β, Σ_Q |Q|^{−α} Λ^{β−γ} m_Q^γ / C_{d,α,β}); the first
/// dominates when the root mass is at least Λ.
pub fn aggregate_sides(p: &MassPartition, alpha: f64, beta: f64, gamma: f64) -> Result<(f64, f64)> {
    if !(gamma >= 0.0) {
        return Err(domain(format!("gamma must be non-negative, got {gamma}")));
    }
    let c = constants::covering_constant(p.d, alpha, beta)?;
    let coeff = p.lambda.powf(beta - gamma) / c;
    Ok(p.leaves.iter().fold((0.0, 0.0), |(a, b), l| {
        let w = l.volume().powf(-alpha);
        (a + w * l.mass.powf(beta), b + w * coeff * l.mass.powf(gamma))
    }))
}

/// Σ_Q |Q|^{−α}[m_Q^β − Λ^{β−γ} m_Q^γ / C_{d,α,β}].
pub fn aggregate_bound(p: &MassPartition, alpha: f64, beta: f64, gamma: f64) -> Result<f64> {
    aggregate_sides(p, alpha, beta, gamma).map(|(a, b)| a - b)
}

/// (Σ_Q |Q|^{−α}[m_Q − q]₊, b Σ_Q |Q|^{−α} m_Q) with b from [`constants::weak_b`].
pub fn aggregate_weak_sides(p: &MassPartition, alpha: f64, q: f64) -> Result<(f64, f64)> {
    let b = constants::weak_b(p.d, alpha, q, p.lambda)?;
    Ok(p.leaves.iter().fold((0.0, 0.0), |(x, y), l| {
        let w = l.volume().powf(-alpha);
        (x + w * (l.mass - q).max(0.0), y + w * b * l.mass)
    }))
}

/// Σ_Q |Q|^{−α}([m_Q − q]₊ − b m_Q).
pub fn aggregate_bound_weak(p: &MassPartition, alpha: f64, q: f64) -> Result<f64> {
    aggregate_weak_sides(p, alpha, q).map(|(a, b)| a - b)
}

/// The four guarantees of a partition as reports: leaf mass cap, exact
/// tiling of the root, and the strong and weak aggregate bounds.
pub fn covering_reports(
    p: &MassPartition,
    alpha: f64,
    beta: f64,
    gamma: f64,
    q: f64,
    tol: f64,
) -> Result<Vec<InequalityReport>> {
    let lambda = p.lambda;
    let (a, b) = aggregate_sides(p, alpha, beta, gamma)?;
    let (wa, wb) = aggregate_weak_sides(p, alpha, q)?;
    Ok(vec![
        InequalityReport::le("covering_leaf_mass", p.max_leaf_mass() / lambda, 1.0, lambda, tol),
        InequalityReport::eq("covering_tiling", p.total_volume(), p.root.volume(), 1.0, tol),
        InequalityReport::ge("covering_aggregate", a, b, constants::covering_constant(p.d, alpha, beta)?, tol),
        InequalityReport::ge("covering_aggregate_weak", wa, wb, constants::weak_b(p.d, alpha, q, lambda)?, tol),
    ])
}

/// Constant density `c` on all of space.
pub fn uniform_oracle(c: f64) -> impl Fn(&Cube) -> f64 {
    move |q: &Cube| c * q.volume()
}

/// One isotropic Gaussian bump of total mass `mass` (over ℝ^d).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianBump {
    pub center: Vec<f64>,
    pub width: f64,
    pub mass: f64,
}

/// ∫_a^b of the standard normal density, accurate in the tails.
fn normal_interval(a: f64, b: f64) -> f64 {
    let s = std::f64::consts::SQRT_2;
    if a >= 0.0 {
        0.5 * (erfc(a / s) - erfc(b / s))
    } else if b <= 0.0 {
        0.5 * (erfc(-b / s) - erfc(-a / s))
    } else {
        0.5 * (erf(b / s) - erf(a / s))
    }
}

/// Exact mass of a sum of Gaussian bumps inside a cube.
pub fn gaussian_oracle(bumps: Vec<GaussianBump>) -> impl Fn(&Cube) -> f64 {
    move |q: &Cube| {
        bumps
            .iter()
            .map(|g| {
                g.mass
                    * (0..q.d())
                        .map(|a| {
                            let lo = (q.corner[a] - g.center[a]) / g.width;
                            normal_interval(lo, lo + q.side / g.width)
                        })
                        .product::<f64>()
            })
            .sum::<f64>()
            .max(0.0)
    }
}

/// ∫ over [lo, hi] of the hat function centred at x[i] on the node set x.
fn hat_integral(x: &[f64], i: usize, lo: f64, hi: f64) -> f64 {
    let mut total = 0.0;
    if i > 0 {
        let (a, b) = (x[i - 1], x[i]);
        let (s, e) = (lo.max(a), hi.min(b));
        if e > s {
            // φ = (t − a)/(b − a)
            total += ((e - a).powi(2) - (s - a).powi(2)) / (2.0 * (b - a));
        }
    }
    if i + 1 < x.len() {
        let (a, b) = (x[i], x[i + 1]);
        let (s, e) = (lo.max(a), hi.min(b));
        if e > s {
            // φ = (b − t)/(b − a)
            total += ((b - s).powi(2) - (b - e).powi(2)) / (2.0 * (b - a));
        }
    }
    total
}

/// Mass of the multilinear interpolant of a grid density inside a cube
/// (zero outside the grid box). Exactly additive under subdivision.
pub fn grid_oracle(rho: &DensityField) -> impl Fn(&Cube) -> f64 + '_ {
    let g = rho.grid();
    // full node line including the zero boundary nodes of Dirichlet grids
    let nodes: Vec<f64> = (0..=g.n).map(|i| g.lower + i as f64 * g.spacing()).collect();
    let offset = match g.bc {
        BoundaryCondition::Neumann => 0,
        BoundaryCondition::Dirichlet => 1,
    };
    let len = g.axis_len();
    move |q: &Cube| {
        let per_axis: Vec<Vec<(usize, f64)>> = (0..g.d)
            .map(|a| {
                let (lo, hi) = (q.corner[a], q.corner[a] + q.side);
                (0..len)
                    .filter_map(|i| {
                        let w = hat_integral(&nodes, i + offset, lo, hi);
                        (w > 0.0).then_some((i, w))
                    })
                    .collect()
            })
            .collect();
        let strides = g.strides();
        let vals = rho.values();
        let mut total = 0.0;
        let mut pick = vec![0usize; g.d];
        if per_axis.iter().any(Vec::is_empty) {
            return 0.0;
        }
        loop {
            let mut w = 1.0;
            let mut idx = 0;
            for a in 0..g.d {
                let (i, wa) = per_axis[a][pick[a]];
                w *= wa;
                idx += i * strides[a];
            }
            total += w * vals[idx];
            let mut a = g.d;
            loop {
                if a == 0 {
                    return total;
                }
                a -= 1;
                pick[a] += 1;
                if pick[a] < per_axis[a].len() {
                    break;
                }
                pick[a] = 0;
            }
        }
    }
}

/// Partitions the grid box of a density.
pub fn partition_density(rho: &DensityField, lambda: f64) -> Result<MassPartition> {
    let g = rho.grid();
    let root = Cube::new(vec![g.lower; g.d], g.side)?;
    partition(&grid_oracle(rho), &root, lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::BoxGrid;
    use crate::random;

    fn unit(d: usize) -> Cube {
        Cube::new(vec![0.0; d], 1.0).unwrap()
    }

    #[test]
    fn uniform_examples() {
        let p = partition(&uniform_oracle(2.0), &unit(2), 2.0).unwrap();
        assert_eq!(p.leaves.len(), 1);
        let p = partition(&uniform_oracle(4.0), &unit(2), 1.0).unwrap();
        assert_eq!(p.leaves.len(), 4);
        assert!(p.leaves.iter().all(|l| (l.mass - 1.0).abs() < 1e-15 && l.depth == 1));
        assert_eq!(p.leaves[0].corner, vec![0.0, 0.0]);
        assert_eq!(p.leaves[1].corner, vec![0.0, 0.5]);
        assert_eq!(p.leaves[3].corner, vec![0.5, 0.5]);
    }

    #[test]
    fn gaussian_spike() {
        let bump = GaussianBump {
            center: vec![0.3, 0.61],
            width: 0.01,
            mass: 100.0,
        };
        let p = partition(&gaussian_oracle(vec![bump]), &unit(2), 1.0).unwrap();
        assert!(p.max_leaf_mass() <= 1.0 * (1.0 + 1e-12));
        assert!((p.total_volume() - 1.0).abs() < 1e-12);
        assert!((p.total_mass() - gaussian_oracle(vec![GaussianBump {
            center: vec![0.3, 0.61],
            width: 0.01,
            mass: 100.0,
        }])(&unit(2)))
        .abs()
            < 1e-9);
        assert!(aggregate_bound(&p, 1.0, 1.0, 0.0).unwrap() >= 0.0);
    }

    #[test]
    fn single_leaf_bound() {
        let p = partition(&uniform_oracle(3.0), &unit(3), 3.0).unwrap();
        let c = constants::covering_constant(3, 0.7, 1.3).unwrap();
        let b = aggregate_bound(&p, 0.7, 1.3, 0.4).unwrap();
        assert!((b - 3f64.powf(1.3) * (1.0 - 1.0 / c)).abs() < 1e-12);
        assert!(b > 0.0);
        let p = partition(&uniform_oracle(5.0), &unit(1), 5.0).unwrap();
        assert_eq!(aggregate_bound_weak(&p, 1.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn errors() {
        let bad = |_: &Cube| -1.0;
        assert!(matches!(partition(&bad, &unit(1), 1.0), Err(Error::Domain(_))));
        let point = |q: &Cube| if q.corner[0] <= 0.2 && 0.2 < q.corner[0] + q.side { 5.0 } else { 0.0 };
        assert!(matches!(partition(&point, &unit(1), 1.0), Err(Error::Refinement { .. })));
        let non_additive = |q: &Cube| q.side.sqrt() * 4.0;
        assert!(matches!(partition(&non_additive, &unit(1), 1.0), Err(Error::Precondition(_))));
        assert!(partition(&uniform_oracle(1.0), &unit(1), 0.0).is_err());
    }

    #[test]
    fn halving_lambda_refines() {
        let mut rng = random::rng(1);
        for _ in 0..30 {
            let bumps: Vec<_> = (0..3)
                .map(|_| GaussianBump {
                    center: vec![random::uniform(&mut rng, 0.0, 1.0), random::uniform(&mut rng, 0.0, 1.0)],
                    width: random::uniform(&mut rng, 0.01, 0.3),
                    mass: random::uniform(&mut rng, 1.0, 50.0),
                })
                .collect();
            let oracle = gaussian_oracle(bumps);
            let lambda = random::uniform(&mut rng, 0.5, 10.0);
            let a = partition(&oracle, &unit(2), lambda).unwrap();
            let b = partition(&oracle, &unit(2), lambda / 2.0).unwrap();
            assert!(b.leaves.len() >= a.leaves.len());
            assert_eq!(a, partition(&oracle, &unit(2), lambda).unwrap());
        }
    }

    #[test]
    fn grid_adapter_is_additive_and_matches_trapezoid() {
        let g = BoxGrid::new(2, 16, 2.0, crate::grid::BoundaryCondition::Neumann).unwrap();
        let rho = DensityField::from_fn(&g, |x| 1.0 + x[0] * x[1] + (3.0 * x[0]).sin().powi(2)).unwrap();
        let oracle = grid_oracle(&rho);
        let root = Cube::new(vec![0.0, 0.0], 2.0).unwrap();
        assert!((oracle(&root) - rho.mass()).abs() < 1e-12 * rho.mass());
        let p = partition(&oracle, &root, rho.mass() / 50.0).unwrap();
        assert!((p.total_mass() - rho.mass()).abs() < 1e-10 * rho.mass());
        for bc in [crate::grid::BoundaryCondition::Dirichlet, crate::grid::BoundaryCondition::Neumann] {
            let g = BoxGrid::new(1, 10, 1.0, bc).unwrap();
            let rho = DensityField::from_fn(&g, |_| 1.0).unwrap();
            let full = grid_oracle(&rho)(&Cube::new(vec![0.0], 1.0).unwrap());
            assert!((full - rho.mass()).abs() < 1e-14, "{bc:?}: {full} vs {}", rho.mass());
        }
    }

    #[test]
    fn json_export() {
        let p = partition(&uniform_oracle(8.0), &unit(3), 1.0).unwrap();
        let j = p.to_json();
        assert_eq!(j["d"], 3);
        assert_eq!(j["leaves"].as_array().unwrap().len(), 8);
        assert_eq!(j["root"]["side"], 1.0);
        assert!(j["leaves"][0]["depth"].is_u64());
    }
}
