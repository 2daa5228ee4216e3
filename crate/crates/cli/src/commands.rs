use qbounds::constants::{self, ConstantKind, DualDirection};
use qbounds::covering::{self, Cube, GaussianBump};
use qbounds::inequalities::{HardyVariant, ManyBodyHardyVariant};
use qbounds::lieb_thirring::{self, LtSynthesis};
use qbounds::matter::{self, FermiMode, MatterConfig};
use qbounds::random;
use qbounds::spectral;
use qbounds::sweeps::{run_sweep, SweepKind, SweepSpec};
use qbounds::{EnergyBoundReport, InequalityReport};
use serde::Serialize;
use serde_json::{Map, Value};

use crate::report::{Entry, PartitionSummary, Report, RunManifest};
use crate::{
    AllArgs, CheckArgs, CliError, Command, ConstantsArgs, CoverArgs, FermiArgs, GnsArg, LtArgs, MatterArgs, Output,
    SweepArgs,
};

const DEFAULT_TRIALS: usize = 100;

pub fn run(cmd: &Command) -> Result<Report, CliError> {
    let (entries, params, seed, output) = match cmd {
        Command::Constants(a) => (constants_entries(a)?, manifest_params(a)?, 0, &a.output),
        Command::Check(a) => (check_entries(a)?, manifest_params(a)?, a.sweep.seed, &a.output),
        Command::Cover(a) => (cover_entries(a)?, manifest_params(a)?, a.sweep.seed, &a.output),
        Command::Lt(a) => (lt_entries(a)?, manifest_params(a)?, a.sweep.seed, &a.output),
        Command::Fermi(a) => (fermi_entries(a)?, manifest_params(a)?, 0, &a.output),
        Command::Matter(a) => (matter_entries(a)?, manifest_params(a)?, a.sweep.seed, &a.output),
        Command::All(a) => (all_entries(a)?, manifest_params(a)?, a.seed, &a.output),
    };
    let manifest = RunManifest {
        command: cmd.name().to_string(),
        parameters: params,
        seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
    };
    let report = Report::new(manifest, entries);
    emit(&report, output)?;
    Ok(report)
}

fn emit(report: &Report, output: &Output) -> Result<(), CliError> {
    report.write_json(output.out.as_deref())?;
    if let Some(path) = &output.csv {
        report.write_csv(path)?;
    }
    Ok(())
}

/// The parsed flags minus unset options.
fn manifest_params(args: &impl Serialize) -> Result<Map<String, Value>, CliError> {
    let mut out = Map::new();
    if let Value::Object(map) = serde_json::to_value(args)? {
        for (k, v) in map {
            match v {
                Value::Null | Value::Bool(false) => {}
                Value::Object(inner) => out.extend(inner.into_iter().filter(|(_, v)| !v.is_null())),
                v => {
                    out.insert(k, v);
                }
            }
        }
    }
    Ok(out)
}

fn inequalities(reports: Vec<InequalityReport>) -> impl Iterator<Item = Entry> {
    reports.into_iter().map(Entry::Inequality)
}

fn dims(d: Option<usize>) -> Vec<usize> {
    d.map_or_else(|| vec![1, 2, 3], |d| vec![d])
}

fn constants_entries(a: &ConstantsArgs) -> Result<Vec<Entry>, CliError> {
    let energy = |label: &str, value: f64, inputs: &[(&str, f64)]| Entry::Energy(EnergyBoundReport::new(label, value, 1.0, inputs));
    let mut out = Vec::new();
    match a.kind.as_deref() {
        Some("alpha_statistics") => {
            let alpha = a.alpha.ok_or_else(|| CliError::Usage("alpha_statistics needs --alpha".into()))?;
            let n = a.particles.unwrap_or(1000);
            out.push(energy(
                "alpha_statistics",
                constants::alpha_statistics(alpha, n)?,
                &[("alpha", alpha), ("N", n as f64)],
            ));
        }
        Some("covering") => {
            let (alpha, beta) = (a.alpha.unwrap_or(1.0), a.beta.unwrap_or(1.0));
            for d in dims(a.d) {
                let c = constants::covering_constant(d, alpha, beta)?;
                out.push(energy("covering", c, &[("d", d as f64), ("alpha", alpha), ("beta", beta)]));
            }
        }
        Some("weak_b") => {
            let (alpha, q) = (a.alpha.unwrap_or(1.0), a.q.unwrap_or(1.0));
            for d in dims(a.d) {
                let lambda = a.lambda.unwrap_or(8.0 / 3.0 * 4f64.powi(d as i32) * q);
                let b = constants::weak_b(d, alpha, q, lambda)?;
                out.push(energy("weak_b", b, &[("d", d as f64), ("alpha", alpha), ("q", q), ("lambda", lambda)]));
            }
        }
        _ => {
            let kinds = match a.named_kind()? {
                Some(k) => vec![k],
                None => ConstantKind::ALL.to_vec(),
            };
            let explicit = a.kind.is_some();
            for kind in kinds {
                for d in dims(a.d) {
                    match constants::constant_info(kind, d) {
                        Ok(c) => out.push(Entry::Energy(
                            EnergyBoundReport::new(kind.name(), c.value, 1.0, &[("d", d as f64)])
                                .detail("rigorous", if c.rigorous { 1.0 } else { 0.0 }),
                        )),
                        // Listing everything skips pairs that are undefined.
                        Err(e) if explicit => return Err(e.into()),
                        Err(_) => {}
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Grid defaults sized so each trial stays cheap at the given dimension.
fn sweep_spec(kind: SweepKind, a: &SweepArgs, d: usize) -> SweepSpec {
    let side = a.side.unwrap_or(match kind {
        SweepKind::EigenvalueSum { .. } => 16.0,
        SweepKind::Covering => 1.0,
        _ => 4.0,
    });
    let n = a.n.unwrap_or(match (kind, d) {
        (SweepKind::ManyBodyHardy { particles: 2, .. }, 1) => 24,
        (SweepKind::ManyBodyHardy { .. }, 1) => 16,
        (SweepKind::ManyBodyHardy { particles: 2, .. }, 2) => 12,
        (SweepKind::ManyBodyHardy { .. }, _) => 7,
        (SweepKind::EigenvalueSum { .. }, _) => 800,
        (_, 1) => 400,
        (_, 2) => 64,
        _ => 24,
    });
    let mut spec = SweepSpec::new(d, n, side, a.trials.unwrap_or(DEFAULT_TRIALS), a.seed);
    spec.tol = a.tol;
    spec.bc = a.bc;
    spec
}

fn check_kinds(a: &CheckArgs, d: usize) -> Vec<SweepKind> {
    let mut kinds = Vec::new();
    if a.heisenberg {
        kinds.push(SweepKind::Heisenberg);
    }
    if let Some(v) = a.hardy {
        let variant = v.unwrap_or(if d == 2 { HardyVariant::Log2d } else { HardyVariant::Standard });
        kinds.push(SweepKind::Hardy { variant });
    }
    if a.sobolev {
        kinds.push(SweepKind::Sobolev);
    }
    if let Some(g) = a.gns {
        kinds.push(SweepKind::Gns { constant: g.unwrap_or(GnsArg::Proven).into() });
    }
    if a.poincare {
        kinds.push(SweepKind::Poincare);
    }
    if a.kinetic {
        kinds.push(SweepKind::KineticForm { constant: None });
    }
    if let Some(v) = a.manybody {
        let variant = v.unwrap_or(if d == 1 { ManyBodyHardyVariant::Onedim } else { ManyBodyHardyVariant::Fermionic });
        kinds.push(SweepKind::ManyBodyHardy { particles: a.particles.unwrap_or(2), variant });
    }
    if a.identity {
        kinds.push(SweepKind::GnsIdentity);
    }
    if a.eigenvalue_sum {
        kinds.push(SweepKind::EigenvalueSum { l: None });
    }
    if a.baxter {
        kinds.push(SweepKind::Baxter);
    }
    if a.covering {
        kinds.push(SweepKind::Covering);
    }
    kinds
}

fn check_entries(a: &CheckArgs) -> Result<Vec<Entry>, CliError> {
    let d = a.sweep.d.unwrap_or(1);
    let kinds = check_kinds(a, d);
    if kinds.is_empty() {
        return Err(CliError::Usage(
            "select at least one check (--heisenberg, --hardy, --sobolev, --gns, --poincare, --kinetic, \
             --manybody, --identity, --eigenvalue-sum, --baxter, --covering)"
                .into(),
        ));
    }
    let mut out = Vec::new();
    for kind in kinds {
        out.extend(inequalities(run_sweep(kind, &sweep_spec(kind, &a.sweep, d))?));
    }
    Ok(out)
}

fn random_bumps(seed: u64, d: usize, side: f64) -> Vec<GaussianBump> {
    let mut rng = random::rng(seed);
    (0..3)
        .map(|_| GaussianBump {
            center: (0..d).map(|_| random::uniform(&mut rng, 0.0, side)).collect(),
            width: random::uniform(&mut rng, 0.03, 0.3) * side,
            mass: random::uniform(&mut rng, 1.0, 50.0),
        })
        .collect()
}

fn cover_entries(a: &CoverArgs) -> Result<Vec<Entry>, CliError> {
    let d = a.sweep.d.unwrap_or(2);
    if a.sweep.trials.is_some() {
        let spec = sweep_spec(SweepKind::Covering, &a.sweep, d);
        return Ok(inequalities(run_sweep(SweepKind::Covering, &spec)?).collect());
    }
    let side = a.sweep.side.unwrap_or(1.0);
    let root = Cube::new(vec![0.0; d], side)?;
    let oracle = covering::gaussian_oracle(random_bumps(a.sweep.seed, d, side));
    let lambda = a.lambda.unwrap_or_else(|| oracle(&root) / 20.0);
    let p = covering::partition(&oracle, &root, lambda)?;
    let q = a.q.unwrap_or(lambda / 2.0);
    let reports = covering::covering_reports(&p, a.alpha, a.beta, a.gamma, q, a.sweep.tol.unwrap_or(1e-12))?;
    let mut out = vec![Entry::Partition(PartitionSummary::of(&p))];
    out.extend(inequalities(reports));
    Ok(out)
}

fn synthesis_entry(label: &str, s: &LtSynthesis, extra: &[(&str, f64)]) -> Result<Entry, CliError> {
    let mut inputs = vec![("d", s.d as f64), ("q", s.q as f64)];
    inputs.extend_from_slice(extra);
    let r = EnergyBoundReport::new(label, s.k, 1.0, &inputs)
        .detail("L", constants::lt_dual(s.k, s.d, DualDirection::KToL)?)
        .detail("lambda", s.lambda)
        .detail("eps_outer", s.eps_outer)
        .detail("eps_inner", s.eps_inner)
        .detail("c1", s.c1)
        .detail("c2", s.c2)
        .detail("exclusion_coefficient", s.exclusion_coefficient)
        .detail("heuristic", if s.heuristic { 1.0 } else { 0.0 });
    Ok(Entry::Energy(r))
}

fn lt_entries(a: &LtArgs) -> Result<Vec<Entry>, CliError> {
    let mut out = Vec::new();
    for d in dims(a.sweep.d) {
        if let Some(beta) = a.beta {
            let plain = lieb_thirring::synthesize_blt_constant(d, beta)?;
            let improved = lieb_thirring::synthesize_blt_constant_improved(d, beta)?;
            out.push(synthesis_entry("blt_constant", &plain, &[("beta", beta)])?);
            out.push(synthesis_entry("blt_constant_improved", &improved, &[("beta", beta)])?);
            continue;
        }
        let s = lieb_thirring::synthesize_lt_constant(d, a.q)?;
        out.push(synthesis_entry("lt_constant", &s, &[])?);
        // With --trials, test the synthesized constant on random orbital sets.
        if a.sweep.trials.is_some_and(|t| t > 0) {
            let kinetic = SweepKind::KineticForm { constant: Some(s.k) };
            out.extend(inequalities(run_sweep(kinetic, &sweep_spec(kinetic, &a.sweep, d))?));
            if d == 1 {
                let l = constants::lt_dual(s.k, d, DualDirection::KToL)?;
                let sums = SweepKind::EigenvalueSum { l: Some(l) };
                out.extend(inequalities(run_sweep(sums, &sweep_spec(sums, &a.sweep, d))?));
            }
        }
    }
    Ok(out)
}

fn fermi_entries(a: &FermiArgs) -> Result<Vec<Entry>, CliError> {
    let volume = a.side.powi(a.d as i32);
    let modes = match a.mode {
        Some(m) => vec![m],
        None => vec![FermiMode::ExactFill, FermiMode::Weyl, FermiMode::LocalLower],
    };
    let mut out = Vec::new();
    let (mut exact, mut lower) = (None, None);
    for mode in modes {
        let r = matter::fermi_gas_energy(a.particles, volume, a.d, a.q, mode)?;
        match mode {
            FermiMode::ExactFill => exact = Some(r.value),
            FermiMode::LocalLower => lower = Some(r.value),
            FermiMode::Weyl => {}
        }
        out.push(Entry::Energy(r));
    }
    if let (Some(e), Some(l)) = (exact, lower) {
        out.push(Entry::Inequality(InequalityReport::le("fermi_local_lower", l, e, 1.0, 1e-12)));
    }
    Ok(out)
}

fn first_kind_entries(a: &MatterArgs) -> Result<Vec<Entry>, CliError> {
    let trials = a.sweep.trials.unwrap_or(DEFAULT_TRIALS);
    let mut out = Vec::with_capacity(trials);
    for i in 0..trials {
        let mut rng = random::trial_rng(a.sweep.seed, i as u64);
        let point = |rng: &mut random::Rng| [0, 1, 2].map(|_| random::uniform(rng, -1.5, 1.5));
        let n = 1 + random::below(&mut rng, 2);
        let m = 1 + random::below(&mut rng, 2);
        let x = (0..n).map(|_| point(&mut rng)).collect();
        let r = (0..m).map(|_| point(&mut rng)).collect();
        let mut cfg = MatterConfig::new(a.z, x, r)?;
        cfg.q = a.q;
        cfg.m = a.m;
        let exponents: Vec<f64> = (0..n).map(|_| random::uniform(&mut rng, 0.1, 8.0)).collect();
        out.push(Entry::Inequality(matter::first_kind_check(&cfg, &exponents)?));
    }
    Ok(out)
}

fn matter_entries(a: &MatterArgs) -> Result<Vec<Entry>, CliError> {
    let stability = a.stability || !(a.hydrogen || a.baxter || a.first_kind);
    let mut out = Vec::new();
    if stability {
        let l3 = matter::best_known_l3();
        out.push(Entry::Energy(matter::stability_bound(a.particles, a.nuclei, a.z, a.q, a.m, l3)?));
        if let Some(beta) = a.beta {
            let k = lieb_thirring::synthesize_blt_constant(3, beta)?.k;
            let l3_beta = constants::lt_dual(k, 3, DualDirection::KToL)?;
            out.push(Entry::Energy(matter::inverse_square_stability_bound(
                a.particles, a.nuclei, a.z, a.m, beta, l3_beta,
            )?));
        }
    }
    if a.hydrogen {
        let h = matter::hydrogen_bounds(a.z)?;
        out.push(Entry::Energy(
            EnergyBoundReport::new("hydrogen", h.exact, 1.0, &[("Z", a.z)])
                .detail("hardy", h.hardy)
                .detail("gns", h.gns)
                .detail("gns_rigorous", h.gns_rigorous),
        ));
        out.push(Entry::Inequality(InequalityReport::ge("hydrogen_hardy", h.exact, h.hardy, 1.0, 1e-12)));
        out.push(Entry::Inequality(InequalityReport::ge(
            "hydrogen_gns",
            h.exact,
            h.gns_rigorous,
            1.0,
            1e-12,
        )));
        let rmax = a.sweep.side.unwrap_or(40.0 / a.z);
        let numeric = spectral::radial_hydrogen_ground(a.z, rmax, a.sweep.n.unwrap_or(4000))?;
        out.push(Entry::Inequality(InequalityReport::eq("hydrogen_numeric", numeric, h.exact, 1.0, 1e-2)));
    }
    if a.baxter {
        let spec = sweep_spec(SweepKind::Baxter, &a.sweep, 3);
        out.extend(inequalities(run_sweep(SweepKind::Baxter, &spec)?));
    }
    if a.first_kind {
        out.extend(first_kind_entries(a)?);
    }
    Ok(out)
}

fn all_entries(a: &AllArgs) -> Result<Vec<Entry>, CliError> {
    let sweep = SweepArgs {
        trials: Some(a.trials),
        seed: a.seed,
        ..SweepArgs::default()
    };
    let mut out = constants_entries(&ConstantsArgs {
        kind: None,
        d: None,
        alpha: None,
        beta: None,
        particles: None,
        q: None,
        lambda: None,
        output: Output::default(),
    })?;
    let plan: Vec<(SweepKind, Vec<usize>)> = vec![
        (SweepKind::Heisenberg, vec![1, 2, 3]),
        (SweepKind::Hardy { variant: HardyVariant::Standard }, vec![1, 3]),
        (SweepKind::Hardy { variant: HardyVariant::Log2d }, vec![2]),
        (SweepKind::Hardy { variant: HardyVariant::Antipodal }, vec![1, 2, 3]),
        (SweepKind::Sobolev, vec![1, 3]),
        (SweepKind::Gns { constant: GnsArg::Proven.into() }, vec![1, 2, 3]),
        (SweepKind::Poincare, vec![1]),
        (SweepKind::KineticForm { constant: None }, vec![1, 2, 3]),
        (
            SweepKind::ManyBodyHardy { particles: 2, variant: ManyBodyHardyVariant::Onedim },
            vec![1],
        ),
        (
            SweepKind::ManyBodyHardy { particles: 2, variant: ManyBodyHardyVariant::Fermionic },
            vec![1, 2],
        ),
        (SweepKind::GnsIdentity, vec![1]),
        (SweepKind::EigenvalueSum { l: None }, vec![1]),
        (SweepKind::Baxter, vec![3]),
        (SweepKind::Covering, vec![1, 2, 3]),
    ];
    for (kind, ds) in plan {
        for d in ds {
            out.extend(inequalities(run_sweep(kind, &sweep_spec(kind, &sweep, d))?));
        }
    }
    out.extend(lt_entries(&LtArgs {
        sweep: SweepArgs { trials: None, ..sweep.clone() },
        q: 1,
        beta: None,
        output: Output::default(),
    })?);
    out.extend(fermi_entries(&FermiArgs {
        particles: 100,
        d: 3,
        q: 2,
        side: 1.0,
        mode: None,
        output: Output::default(),
    })?);
    out.extend(matter_entries(&MatterArgs {
        sweep: SweepArgs { trials: Some(a.trials), ..sweep },
        stability: true,
        hydrogen: true,
        baxter: false,
        first_kind: true,
        z: 1.0,
        particles: 10,
        nuclei: 10,
        q: 2,
        m: 1.0,
        beta: Some(1.0),
        output: Output::default(),
    })?);
    Ok(out)
}
