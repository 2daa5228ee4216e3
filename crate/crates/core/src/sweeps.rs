//! Randomized property sweeps over the checkers. A sweep is a pure function
//! of its kind and [`SweepSpec`]: trial `i` draws from its own stream seeded
//! by `(seed, i)`, trials run in parallel, and the reports come back ordered
//! by trial index.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::covering::{self, Cube, GaussianBump};
use crate::error::{domain, Result};
use crate::grid::{BoundaryCondition, BoxGrid, SampledField};
use crate::inequalities::{
    self, GnsConstant, HardyVariant, ManyBodyField, ManyBodyHardyVariant, Symmetry, EXCLUSION_CELLS,
};
use crate::lieb_thirring::{self, OrbitalSet};
use crate::matter::{self, MatterConfig, Point};
use crate::random::{self, below, uniform, Rng, Support};
use crate::report::InequalityReport;
use crate::spectral::SchrodingerOperator;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SweepKind {
    Heisenberg,
    Hardy { variant: HardyVariant },
    Sobolev,
    Gns { constant: GnsConstant },
    Poincare,
    /// Orthonormal sets of 1 to 6 orbitals; `None` tests the proven G_d′.
    KineticForm { constant: Option<f64> },
    ManyBodyHardy { particles: usize, variant: ManyBodyHardyVariant },
    /// A, B and d ∈ {1, 2, 3} are drawn per trial.
    GnsIdentity,
    /// One-dimensional multi-well potentials on a Dirichlet box.
    EigenvalueSum { l: Option<f64> },
    /// Random point charges in a cube of the given side, N, M ≤ 8.
    Baxter,
    /// Gaussian-mixture densities partitioned at random Λ; four reports per trial.
    Covering,
}

impl SweepKind {
    pub fn name(&self) -> &'static str {
        match self {
            SweepKind::Heisenberg => "heisenberg",
            SweepKind::Hardy { .. } => "hardy",
            SweepKind::Sobolev => "sobolev",
            SweepKind::Gns { .. } => "gns",
            SweepKind::Poincare => "poincare",
            SweepKind::KineticForm { .. } => "kinetic_form",
            SweepKind::ManyBodyHardy { .. } => "manybody_hardy",
            SweepKind::GnsIdentity => "gns_identity",
            SweepKind::EigenvalueSum { .. } => "eigenvalue_sum",
            SweepKind::Baxter => "baxter",
            SweepKind::Covering => "covering",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub d: usize,
    pub n: usize,
    pub side: f64,
    pub trials: usize,
    pub seed: u64,
    /// Overrides each checker's default tolerance.
    pub tol: Option<f64>,
    /// Overrides the box boundary condition where the checker allows it.
    #[serde(default)]
    pub bc: Option<BoundaryCondition>,
}

impl SweepSpec {
    pub fn new(d: usize, n: usize, side: f64, trials: usize, seed: u64) -> Self {
        SweepSpec {
            d,
            n,
            side,
            trials,
            seed,
            tol: None,
            bc: None,
        }
    }

    fn grid(&self, default: BoundaryCondition) -> Result<BoxGrid> {
        BoxGrid::centered(self.d, self.n, self.side, self.bc.unwrap_or(default))
    }
}

pub fn run_sweep(kind: SweepKind, spec: &SweepSpec) -> Result<Vec<InequalityReport>> {
    validate(kind, spec)?;
    let per_trial: Vec<Vec<InequalityReport>> = (0..spec.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = random::trial_rng(spec.seed, i as u64);
            trial(kind, spec, &mut rng)
        })
        .collect::<Result<_>>()?;
    Ok(per_trial.into_iter().flatten().collect())
}

fn need_dims(kind: SweepKind, d: usize, allowed: &[usize]) -> Result<()> {
    if allowed.contains(&d) {
        Ok(())
    } else {
        Err(domain(format!("{} sweep supports d in {allowed:?}, got {d}", kind.name())))
    }
}

fn validate(kind: SweepKind, spec: &SweepSpec) -> Result<()> {
    if !(spec.side > 0.0) || !spec.side.is_finite() {
        return Err(domain(format!("side must be positive, got {}", spec.side)));
    }
    let d = spec.d;
    let forced = match kind {
        SweepKind::Poincare => Some(BoundaryCondition::Neumann),
        SweepKind::EigenvalueSum { .. } => Some(BoundaryCondition::Dirichlet),
        _ => None,
    };
    if let (Some(need), Some(bc)) = (forced, spec.bc) {
        if need != bc {
            return Err(domain(format!("{} sweep needs a {need:?} box, got {bc:?}", kind.name())));
        }
    }
    match kind {
        SweepKind::Hardy { variant } => match variant {
            HardyVariant::Standard => need_dims(kind, d, &[1, 3])?,
            HardyVariant::Log2d => {
                need_dims(kind, d, &[2])?;
                if spec.side <= 2.4 {
                    return Err(domain("log2d sweep needs side > 2.4 so the unit circle lies inside the box"));
                }
            }
            HardyVariant::Antipodal => need_dims(kind, d, &[1, 2, 3])?,
        },
        SweepKind::Sobolev => need_dims(kind, d, &[1, 3])?,
        SweepKind::Poincare | SweepKind::EigenvalueSum { .. } => need_dims(kind, d, &[1])?,
        SweepKind::ManyBodyHardy { particles, variant } => {
            if variant == ManyBodyHardyVariant::Onedim {
                need_dims(kind, d, &[1])?;
            }
            if !(2..=3).contains(&particles) || particles * d > inequalities::MAX_MANYBODY_DIM {
                return Err(domain(format!(
                    "many-body sweep needs N in 2..=3 with N*d <= {}, got N = {particles}, d = {d}",
                    inequalities::MAX_MANYBODY_DIM
                )));
            }
        }
        SweepKind::GnsIdentity | SweepKind::Baxter => {}
        _ => need_dims(kind, d, &[1, 2, 3])?,
    }
    match kind {
        SweepKind::GnsIdentity | SweepKind::Baxter => Ok(()),
        SweepKind::Covering => Cube::new(vec![0.0; d], spec.side).map(|_| ()),
        SweepKind::EigenvalueSum { .. } => spec.grid(BoundaryCondition::Dirichlet).map(|_| ()),
        SweepKind::ManyBodyHardy { .. } => {
            if spec.n > inequalities::MAX_MANYBODY_CELLS {
                return Err(domain(format!(
                    "many-body grids allow at most {} cells, got {}",
                    inequalities::MAX_MANYBODY_CELLS,
                    spec.n
                )));
            }
            spec.grid(BoundaryCondition::Neumann).map(|_| ())
        }
        _ => spec.grid(BoundaryCondition::Neumann).map(|_| ()),
    }
}

fn coin(rng: &mut Rng) -> bool {
    below(rng, 2) == 1
}

fn trial(kind: SweepKind, spec: &SweepSpec, rng: &mut Rng) -> Result<Vec<InequalityReport>> {
    let tol = spec.tol;
    let one = |r: InequalityReport| Ok(vec![r]);
    match kind {
        SweepKind::Heisenberg => {
            let g = spec.grid(BoundaryCondition::Neumann)?;
            let complex = coin(rng);
            one(inequalities::check_heisenberg(&random::smooth_field(&g, rng, Support::Interior, complex), tol)?)
        }
        SweepKind::Hardy { variant } => {
            let g = spec.grid(BoundaryCondition::Neumann)?;
            let complex = coin(rng);
            let u = match variant {
                HardyVariant::Standard => {
                    random::smooth_field(&g, rng, Support::Annulus { inner: 0.05 * g.side }, complex)
                }
                HardyVariant::Log2d => {
                    random::smooth_field(&g, rng, Support::AvoidUnitSphere { gap: 0.02 * g.side }, complex)
                }
                HardyVariant::Antipodal => {
                    let f = random::smooth_field(&g, rng, Support::Interior, complex);
                    let v = f.values();
                    let odd = (0..v.len()).map(|i| v[i] - v[g.mirror(i)]).collect();
                    SampledField::new(g.clone(), odd)?
                }
            };
            one(inequalities::check_hardy(&u, variant, tol)?)
        }
        SweepKind::Sobolev => {
            let g = spec.grid(BoundaryCondition::Neumann)?;
            let complex = coin(rng);
            one(inequalities::check_sobolev(&random::smooth_field(&g, rng, Support::Interior, complex), tol)?)
        }
        SweepKind::Gns { constant } => {
            let g = spec.grid(BoundaryCondition::Neumann)?;
            let complex = coin(rng);
            one(inequalities::check_gns(&random::smooth_field(&g, rng, Support::Interior, complex), constant, tol)?)
        }
        SweepKind::Poincare => {
            let g = spec.grid(BoundaryCondition::Neumann)?;
            one(inequalities::check_poincare(&trig_polynomial(&g, rng), tol)?)
        }
        SweepKind::KineticForm { constant } => {
            let g = spec.grid(BoundaryCondition::Neumann)?;
            let count = 1 + below(rng, 6);
            let complex = coin(rng);
            let fields = (0..count)
                .map(|_| random::smooth_field(&g, rng, Support::Interior, complex))
                .collect();
            let set = OrbitalSet::orthonormalize(fields)?;
            one(lieb_thirring::kinetic_form_check(&set, constant, tol)?)
        }
        SweepKind::ManyBodyHardy { particles, variant } => {
            let g = spec.grid(BoundaryCondition::Neumann)?;
            let complex = coin(rng);
            let orbitals: Vec<SampledField> = (0..particles)
                .map(|_| random::smooth_field(&g, rng, Support::Interior, complex))
                .collect();
            let psi = match variant {
                ManyBodyHardyVariant::Fermionic => ManyBodyField::from_orbitals(&orbitals, Symmetry::Antisymmetric)?,
                ManyBodyHardyVariant::Onedim => {
                    let symmetry = [Symmetry::None, Symmetry::Symmetric, Symmetry::Antisymmetric][below(rng, 3)];
                    let gap = (EXCLUSION_CELLS + 1.0) * g.spacing();
                    let ramp = 0.1 * g.side;
                    ManyBodyField::from_orbitals(&orbitals, symmetry)?.with_factor(|xs| {
                        let mut f = 1.0;
                        for a in 0..xs.len() {
                            for b in a + 1..xs.len() {
                                f *= smooth_step((xs[a][0] - xs[b][0]).abs() - gap, ramp);
                            }
                        }
                        f
                    })?
                }
            };
            one(inequalities::check_manybody_hardy(&psi, variant, tol)?)
        }
        SweepKind::GnsIdentity => {
            let d = 1 + below(rng, 3);
            let a = uniform(rng, 0.1, 10.0);
            let b = uniform(rng, 0.1, 10.0);
            one(inequalities::gns_integral_identity(a, b, d)?)
        }
        SweepKind::EigenvalueSum { l } => {
            let g = spec.grid(BoundaryCondition::Dirichlet)?;
            let op = SchrodingerOperator::from_fn(&g, multi_well(rng, g.side))?;
            one(lieb_thirring::eigenvalue_sum_check(&op, l, tol)?)
        }
        SweepKind::Baxter => {
            let n = below(rng, 9);
            let m = below(rng, 9);
            let z = [1.0, 2.0, 17.0][below(rng, 3)];
            let half = spec.side / 2.0;
            let mut pts = |k: usize| -> Vec<Point> {
                (0..k)
                    .map(|_| [uniform(rng, -half, half), uniform(rng, -half, half), uniform(rng, -half, half)])
                    .collect()
            };
            let x = pts(n);
            let r = pts(m);
            let mut report = matter::baxter_check(&MatterConfig::new(z, x, r)?)?;
            if let Some(t) = tol {
                report = InequalityReport::ge("baxter", report.lhs, report.rhs, report.constant_used, t);
            }
            one(report)
        }
        SweepKind::Covering => covering_trial(spec, rng),
    }
}

/// 0 below 0, 1 above `width`, C^∞ in between.
fn smooth_step(t: f64, width: f64) -> f64 {
    let s = t / width;
    if s <= 0.0 {
        0.0
    } else if s >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / s).exp();
        let b = (-1.0 / (1.0 - s)).exp();
        a / (a + b)
    }
}

/// Σ_k a_k cos(kπt) + b_k sin(kπt) in the reduced coordinate t ∈ [0, 1].
fn trig_polynomial(g: &BoxGrid, rng: &mut Rng) -> SampledField {
    let terms = 1 + below(rng, 8);
    let coeffs: Vec<(f64, Complex64, Complex64)> = (0..=terms)
        .map(|k| {
            let mut c = || Complex64::new(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0));
            (k as f64, c(), c())
        })
        .collect();
    let (lo, side) = (g.lower, g.side);
    SampledField::from_fn(g, |x| {
        let t = std::f64::consts::PI * (x[0] - lo) / side;
        coeffs
            .iter()
            .map(|(k, a, b)| a * (k * t).cos() + b * (k * t).sin())
            .sum()
    })
}

/// Sum of one to four square or Gaussian wells inside the middle of the box.
fn multi_well(rng: &mut Rng, side: f64) -> impl Fn(&[f64]) -> f64 {
    let wells: Vec<(bool, f64, f64, f64)> = (0..1 + below(rng, 4))
        .map(|_| {
            (
                coin(rng),
                uniform(rng, 1.0, 20.0),
                uniform(rng, 0.2, 1.5),
                uniform(rng, -0.3, 0.3) * side,
            )
        })
        .collect();
    move |x: &[f64]| {
        -wells
            .iter()
            .map(|&(square, depth, width, centre)| {
                let r = (x[0] - centre).abs();
                if square {
                    if r <= width { depth } else { 0.0 }
                } else {
                    depth * (-(r / width).powi(2)).exp()
                }
            })
            .sum::<f64>()
    }
}

fn covering_trial(spec: &SweepSpec, rng: &mut Rng) -> Result<Vec<InequalityReport>> {
    let d = spec.d;
    let side = spec.side;
    let root = Cube::new(vec![0.0; d], side)?;
    let bumps: Vec<GaussianBump> = (0..1 + below(rng, 4))
        .map(|_| GaussianBump {
            center: (0..d).map(|_| uniform(rng, 0.0, side)).collect(),
            width: uniform(rng, 0.03, 0.3) * side,
            mass: uniform(rng, 1.0, 50.0),
        })
        .collect();
    let oracle = covering::gaussian_oracle(bumps);
    let total = oracle(&root);
    let lambda = if below(rng, 10) == 0 {
        total
    } else {
        total * uniform(rng, 0.005, 1.0)
    };
    let alpha = uniform(rng, 0.05, 2.0);
    let beta = uniform(rng, 0.1, 3.0);
    let gamma = uniform(rng, 0.0, 3.0);
    let q = uniform(rng, 0.0, lambda);
    let p = covering::partition(&oracle, &root, lambda)?;
    covering::covering_reports(&p, alpha, beta, gamma, q, spec.tol.unwrap_or(1e-12))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_ordered() {
        let spec = SweepSpec::new(1, 200, 4.0, 16, 42);
        let a = run_sweep(SweepKind::Heisenberg, &spec).unwrap();
        let b = run_sweep(SweepKind::Heisenberg, &spec).unwrap();
        assert_eq!(a, b);
        let mut other = spec.clone();
        other.seed = 43;
        assert_ne!(a, run_sweep(SweepKind::Heisenberg, &other).unwrap());
        // trial i depends only on (seed, i)
        let mut shorter = spec.clone();
        shorter.trials = 5;
        assert_eq!(run_sweep(SweepKind::Heisenberg, &shorter).unwrap()[..], a[..5]);
    }

    #[test]
    fn rejects_bad_dimensions() {
        let spec = SweepSpec::new(2, 40, 4.0, 1, 0);
        assert!(run_sweep(SweepKind::Sobolev, &spec).is_err());
        assert!(run_sweep(SweepKind::Poincare, &spec).is_err());
        let small = SweepSpec::new(2, 40, 2.0, 1, 0);
        assert!(run_sweep(SweepKind::Hardy { variant: HardyVariant::Log2d }, &small).is_err());
    }

    #[test]
    fn small_sweeps_pass() {
        let cases = [
            (SweepKind::Hardy { variant: HardyVariant::Standard }, SweepSpec::new(1, 400, 4.0, 10, 1)),
            (SweepKind::Hardy { variant: HardyVariant::Log2d }, SweepSpec::new(2, 64, 4.0, 5, 1)),
            (SweepKind::Hardy { variant: HardyVariant::Antipodal }, SweepSpec::new(2, 64, 4.0, 5, 1)),
            (SweepKind::Poincare, SweepSpec::new(1, 400, 3.0, 10, 1)),
            (SweepKind::KineticForm { constant: None }, SweepSpec::new(2, 48, 4.0, 5, 1)),
            (SweepKind::Baxter, SweepSpec::new(3, 1, 4.0, 50, 1)),
            (SweepKind::Covering, SweepSpec::new(2, 1, 1.0, 20, 1)),
            (SweepKind::GnsIdentity, SweepSpec::new(1, 1, 1.0, 5, 1)),
            (SweepKind::EigenvalueSum { l: None }, SweepSpec::new(1, 1600, 16.0, 4, 1)),
            (
                SweepKind::ManyBodyHardy { particles: 2, variant: ManyBodyHardyVariant::Onedim },
                SweepSpec::new(1, 24, 4.0, 4, 1),
            ),
            (
                SweepKind::ManyBodyHardy { particles: 2, variant: ManyBodyHardyVariant::Fermionic },
                SweepSpec::new(2, 12, 4.0, 2, 1),
            ),
        ];
        for (kind, spec) in cases {
            let reports = run_sweep(kind, &spec).unwrap();
            assert!(!reports.is_empty());
            for r in &reports {
                assert!(r.passed, "{kind:?}: {r:?}");
            }
        }
    }
}
