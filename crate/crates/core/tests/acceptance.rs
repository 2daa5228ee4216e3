//! Acceptance suite: twelve end-to-end criteria, one status line each.
//! Runs as a plain binary so the lines are always printed; exits non-zero if
//! any criterion fails.

use std::f64::consts::PI;
use std::time::Instant;

use qbounds::constants::{self, DualDirection};
use qbounds::grid::{BoundaryCondition, BoxGrid, SampledField};
use qbounds::inequalities::{self, GnsConstant, HardyVariant, ManyBodyHardyVariant};
use qbounds::lieb_thirring;
use qbounds::matter::{self, FermiMode};
use qbounds::random;
use qbounds::spectral::{self, SchrodingerOperator};
use qbounds::sweeps::{run_sweep, SweepKind, SweepSpec};
use qbounds::{InequalityReport, Result};

type Criterion = (&'static str, fn() -> Result<Outcome>);

struct Outcome {
    passed: bool,
    summary: String,
}

fn outcome(passed: bool, summary: String) -> Result<Outcome> {
    Ok(Outcome { passed, summary })
}

fn failures(reports: &[InequalityReport]) -> Vec<&InequalityReport> {
    reports.iter().filter(|r| !r.passed).collect()
}

fn hydrogen() -> Result<Outcome> {
    let start = Instant::now();
    let e = spectral::radial_hydrogen_ground(1.0, 40.0, 4000)?;
    let secs = start.elapsed().as_secs_f64();
    let rel = (e + 0.25).abs() / 0.25;
    outcome(
        rel < 0.01 && secs < 5.0,
        format!("E0 = {e:.6} vs -0.25 (rel. error {rel:.2e}), {secs:.2} s"),
    )
}

fn weyl() -> Result<Outcome> {
    let start = Instant::now();
    let ratio = |n: usize, d: usize| -> Result<f64> {
        let exact = matter::fermi_gas_energy(n, 1.0, d, 1, FermiMode::ExactFill)?.value;
        let weyl = matter::fermi_gas_energy(n, 1.0, d, 1, FermiMode::Weyl)?.value;
        Ok(exact / weyl)
    };
    let r1 = ratio(100, 1)?;
    // Σ_{k<N} k²π² against (π²/3)N³
    let n = 100.0;
    let closed = (n - 1.0) * (2.0 * n - 1.0) / (2.0 * n * n);
    let r2 = ratio(10_000, 2)?;
    let secs = start.elapsed().as_secs_f64();
    let ok1 = (r1 - 0.98505).abs() <= 1e-6 && (r1 - closed).abs() <= 1e-12;
    let ok2 = (0.95..=1.02).contains(&r2);
    outcome(
        ok1 && ok2 && secs < 10.0,
        format!("d=1 N=100: {r1:.8} (closed form {closed:.8}); d=2 N=1e4: {r2:.5}; {secs:.2} s"),
    )
}

fn poincare() -> Result<Outcome> {
    let sizes = [125usize, 250, 500, 1000];
    let mut errs = Vec::new();
    for &n in &sizes {
        let g = BoxGrid::new(1, n, 1.0, BoundaryCondition::Neumann)?;
        let ev = spectral::lowest_eigenvalues(&SchrodingerOperator::free(g), 2)?.eigenvalues;
        errs.push((ev[1] - PI * PI).abs() / (PI * PI));
    }
    let orders: Vec<f64> = errs.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    let ok = errs[3] < 1e-3 && orders.iter().all(|p| (p - 2.0).abs() < 0.1);
    outcome(
        ok,
        format!(
            "rel. error at n=1000: {:.2e}; observed orders {}",
            errs[3],
            orders.iter().map(|p| format!("{p:.3}")).collect::<Vec<_>>().join(", ")
        ),
    )
}

fn eigenvalue_sums() -> Result<Outcome> {
    let l = constants::lt_dual(1.0, 1, DualDirection::KToL)?;
    let spec = SweepSpec::new(1, 1600, 16.0, 20, 4);
    let reports = run_sweep(SweepKind::EigenvalueSum { l: Some(l) }, &spec)?;
    let worst = reports.iter().filter_map(|r| r.ratio).fold(0.0, f64::max);
    let bad = failures(&reports).len();
    outcome(
        bad == 0 && reports.len() == 20,
        format!("{} potentials, L = {l:.6}, {bad} violations, max sum/bound = {worst:.3}", reports.len()),
    )
}

fn covering() -> Result<Outcome> {
    let start = Instant::now();
    let mut reports = Vec::new();
    for d in 1..=3 {
        let spec = SweepSpec::new(d, 1, 1.0, 500, 50 + d as u64);
        reports.extend(run_sweep(SweepKind::Covering, &spec)?);
    }
    let secs = start.elapsed().as_secs_f64();
    let trials = reports.len() / 4;
    let bad = failures(&reports);
    outcome(
        bad.is_empty() && trials == 1500 && secs < 30.0,
        format!(
            "{trials} trials (leaf mass, tiling, aggregate, weak aggregate), {} violations, {secs:.2} s{}",
            bad.len(),
            bad.first().map(|r| format!("; first: {}", r.name)).unwrap_or_default()
        ),
    )
}

fn baxter() -> Result<Outcome> {
    let reports = run_sweep(SweepKind::Baxter, &SweepSpec::new(3, 1, 4.0, 10_000, 6))?;
    let bad = failures(&reports).len();
    outcome(bad == 0, format!("{} configurations, {bad} violations", reports.len()))
}

fn stability() -> Result<Outcome> {
    let l3 = matter::best_known_l3();
    let r = matter::stability_bound(10, 10, 1.0, 1, 1.0, l3)?;
    let c = r.details["coefficient"];
    let rel = (c - 1.073).abs() / 1.073;
    outcome(rel < 0.005, format!("L3 = {l3:.7}, linear coefficient {c:.5} (rel. deviation {rel:.1e})"))
}

fn gns_identity() -> Result<Outcome> {
    let reports = run_sweep(SweepKind::GnsIdentity, &SweepSpec::new(1, 1, 1.0, 50, 8))?;
    let worst = reports
        .iter()
        .map(|r| (r.lhs - r.rhs).abs() / r.rhs.abs())
        .fold(0.0, f64::max);
    outcome(
        failures(&reports).is_empty() && worst < 1e-8,
        format!("{} (A, B, d) triples, worst rel. error {worst:.2e}", reports.len()),
    )
}

fn property_suites() -> Result<Outcome> {
    let hardy = |variant| SweepKind::Hardy { variant };
    let gns = |constant| SweepKind::Gns { constant };
    let mb = |particles, variant| SweepKind::ManyBodyHardy { particles, variant };
    let kinetic = SweepKind::KineticForm { constant: None };
    let plan: Vec<(SweepKind, usize, usize, f64, usize)> = vec![
        (SweepKind::Heisenberg, 1, 400, 4.0, 1200),
        (SweepKind::Heisenberg, 2, 64, 4.0, 400),
        (SweepKind::Heisenberg, 3, 24, 4.0, 200),
        (hardy(HardyVariant::Standard), 1, 400, 4.0, 1000),
        (hardy(HardyVariant::Standard), 3, 24, 4.0, 200),
        (hardy(HardyVariant::Log2d), 2, 64, 4.0, 500),
        (hardy(HardyVariant::Antipodal), 1, 400, 4.0, 500),
        (hardy(HardyVariant::Antipodal), 2, 64, 4.0, 300),
        (hardy(HardyVariant::Antipodal), 3, 24, 4.0, 200),
        (SweepKind::Sobolev, 1, 400, 4.0, 1000),
        (SweepKind::Sobolev, 3, 24, 4.0, 200),
        (gns(GnsConstant::Proven), 1, 400, 4.0, 800),
        (gns(GnsConstant::Proven), 2, 64, 4.0, 300),
        (gns(GnsConstant::Proven), 3, 24, 4.0, 200),
        (gns(GnsConstant::OptimalKnown), 1, 400, 4.0, 500),
        (SweepKind::Poincare, 1, 400, 3.0, 1200),
        (kinetic, 1, 400, 4.0, 600),
        (kinetic, 2, 48, 4.0, 200),
        (kinetic, 3, 20, 4.0, 100),
        (mb(2, ManyBodyHardyVariant::Onedim), 1, 24, 4.0, 200),
        (mb(3, ManyBodyHardyVariant::Onedim), 1, 16, 4.0, 60),
        (mb(2, ManyBodyHardyVariant::Fermionic), 1, 24, 4.0, 150),
        (mb(3, ManyBodyHardyVariant::Fermionic), 1, 16, 4.0, 60),
        (mb(2, ManyBodyHardyVariant::Fermionic), 2, 12, 4.0, 40),
        (mb(3, ManyBodyHardyVariant::Fermionic), 2, 7, 4.0, 10),
        (mb(2, ManyBodyHardyVariant::Fermionic), 3, 7, 4.0, 10),
    ];
    let mut total = 0;
    let mut bad: Vec<String> = Vec::new();
    for (i, (kind, d, n, side, trials)) in plan.into_iter().enumerate() {
        let reports = run_sweep(kind, &SweepSpec::new(d, n, side, trials, 900 + i as u64))?;
        total += reports.len();
        for r in failures(&reports) {
            bad.push(format!("{} d={d}: lhs {} rhs {}", r.name, r.lhs, r.rhs));
        }
    }
    let g = BoxGrid::centered(1, 2000, 20.0, BoundaryCondition::Neumann)?;
    let gauss = SampledField::from_real_fn(&g, |x| (-x[0] * x[0] / 2.0).exp());
    let heis = inequalities::check_heisenberg(&gauss, None)?;
    let eq_ok = (heis.lhs - 0.25).abs() < 1e-3;
    outcome(
        bad.is_empty() && total >= 10_000 && eq_ok,
        format!(
            "{total} trials, {} violations; Gaussian Heisenberg product {:.6}{}",
            bad.len(),
            heis.lhs,
            bad.first().map(|s| format!("; first: {s}")).unwrap_or_default()
        ),
    )
}

fn exclusion_oracle() -> Result<Outcome> {
    let mut lines = Vec::new();
    let mut ok = true;
    for (particles, cells, sides) in [(2usize, 40usize, [0.5, 1.0, 2.0]), (3, 12, [0.5, 1.0, 2.0])] {
        for side in sides {
            let r = lieb_thirring::fermion_box_ground_energy(particles, side, cells)?;
            let bound = lieb_thirring::local_exclusion_bound(particles as f64, side, 1, 1)?.bound;
            let matches = (r.energy - r.one_body_sum).abs() <= 1e-9 * r.one_body_sum;
            let dominates = r.energy >= bound;
            ok &= matches && dominates;
            lines.push(format!("N={particles} L={side}: E={:.5} bound={bound:.5}", r.energy));
        }
    }
    outcome(ok, lines.join("; "))
}

fn alpha_statistics() -> Result<Outcome> {
    let mut worst = 0.0f64;
    let mut count = 0;
    for nu in 1..=20i64 {
        for mu in (-nu + 1)..=nu {
            if num_gcd(mu, nu) != 1 {
                continue;
            }
            let a = constants::alpha_statistics(mu as f64 / nu as f64, 1000)?;
            worst = worst.max((a - constants::alpha_star(mu, nu)?).abs());
            count += 1;
        }
    }
    let mut rng = random::rng(11);
    let mut sym = 0.0f64;
    for _ in 0..1000 {
        let a = random::uniform(&mut rng, -3.0, 3.0);
        let base = constants::alpha_statistics(a, 1000)?;
        sym = sym
            .max((constants::alpha_statistics(a + 2.0, 1000)? - base).abs())
            .max((constants::alpha_statistics(-a, 1000)? - base).abs());
    }
    outcome(
        worst <= 1e-12 && sym <= 1e-10,
        format!("{count} fractions, max |alpha_N - alpha*| = {worst:.1e}; periodicity/evenness deviation {sym:.1e}"),
    )
}

fn num_gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn synthesized_constant() -> Result<Outcome> {
    let mut scaling = 0.0f64;
    let mut positive = true;
    let mut base = Vec::new();
    for d in 1..=3usize {
        let k1 = lieb_thirring::synthesize_lt_constant(d, 1)?.k;
        base.push(k1);
        for q in [1usize, 2, 4] {
            let k = lieb_thirring::synthesize_lt_constant(d, q)?.k;
            positive &= k > 0.0;
            let expected = k1 * (q as f64).powf(-2.0 / d as f64);
            scaling = scaling.max((k - expected).abs() / expected);
        }
    }
    let mut reports = Vec::new();
    for (d, n, trials) in [(1usize, 400usize, 250usize), (2, 48, 170), (3, 20, 80)] {
        let kind = SweepKind::KineticForm { constant: Some(base[d - 1]) };
        reports.extend(run_sweep(kind, &SweepSpec::new(d, n, 4.0, trials, 1200 + d as u64))?);
    }
    let bad = failures(&reports).len();
    outcome(
        positive && scaling <= 1e-14 && bad == 0 && reports.len() == 500,
        format!(
            "K(d,1) = {:.3e}, {:.3e}, {:.3e}; max q-scaling deviation {scaling:.1e}; {} orbital sets, {bad} violations",
            base[0],
            base[1],
            base[2],
            reports.len()
        ),
    )
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("hydrogen ground state", hydrogen),
        ("Weyl asymptotics", weyl),
        ("Poincare convergence", poincare),
        ("LT eigenvalue sums", eigenvalue_sums),
        ("covering lemma", covering),
        ("Baxter inequality", baxter),
        ("stability coefficient", stability),
        ("GNS integral identity", gns_identity),
        ("inequality property suites", property_suites),
        ("exclusion oracle", exclusion_oracle),
        ("alpha statistics", alpha_statistics),
        ("synthesized LT constant", synthesized_constant),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (passed, summary) = match run() {
            Ok(o) => (o.passed, o.summary),
            Err(e) => (false, format!("error: {e}")),
        };
        if !passed {
            failed += 1;
        }
        println!(
            "criterion {:>2} [{}] {name}: {summary} ({:.2} s)",
            i + 1,
            if passed { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
