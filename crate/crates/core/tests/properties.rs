use num_complex::Complex64;
use proptest::prelude::*;

use qbounds::constants::{self, DualDirection};
use qbounds::covering::{self, Cube, GaussianBump};
use qbounds::grid::{self, BoundaryCondition, BoxGrid, SampledField};
use qbounds::inequalities;
use qbounds::matter::{self, FermiMode, MatterConfig};
use qbounds::random::{self, Support};
use qbounds::spectral::{self, SchrodingerOperator};
use qbounds::{InequalityReport, Relation};

fn config() -> ProptestConfig {
    ProptestConfig { cases: 100, failure_persistence: None, ..ProptestConfig::default() }
}

fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs())
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn lt_dual_round_trip(k in 1e-6f64..1e3, d in 1usize..=3) {
        let l = constants::lt_dual(k, d, DualDirection::KToL).unwrap();
        let back = constants::lt_dual(l, d, DualDirection::LToK).unwrap();
        prop_assert!(rel_close(back, k, 1e-12));
    }

    #[test]
    fn alpha_statistics_even_and_two_periodic(alpha in -1.0f64..1.0, n in 2usize..200) {
        let base = constants::alpha_statistics(alpha, n).unwrap();
        prop_assert!((0.0..=1.0).contains(&base));
        prop_assert!((constants::alpha_statistics(alpha + 2.0, n).unwrap() - base).abs() < 1e-11);
        prop_assert!((constants::alpha_statistics(-alpha, n).unwrap() - base).abs() < 1e-11);
    }

    #[test]
    fn alpha_statistics_non_increasing(alpha in -3.0f64..3.0, n in 2usize..150) {
        let a = constants::alpha_statistics(alpha, n).unwrap();
        let b = constants::alpha_statistics(alpha, n + 1).unwrap();
        prop_assert!(b <= a);
    }

    #[test]
    fn report_rules_match_definition(lhs in -1e3f64..1e3, rhs in -1e3f64..1e3, tol in 0.0f64..0.1) {
        let scale = lhs.abs().max(rhs.abs()).max(1.0);
        prop_assert_eq!(InequalityReport::ge("t", lhs, rhs, 1.0, tol).passed, lhs >= rhs - tol * scale);
        prop_assert_eq!(InequalityReport::le("t", lhs, rhs, 1.0, tol).passed, lhs <= rhs + tol * scale);
        let eq = InequalityReport::eq("t", lhs, rhs, 1.0, tol);
        prop_assert_eq!(eq.passed, (lhs - rhs).abs() <= tol * lhs.abs().max(rhs.abs()));
        prop_assert_eq!(eq.relation, Relation::Eq);
    }

    #[test]
    fn report_json_round_trip(lhs in -1e3f64..1e3, rhs in 0.1f64..1e3) {
        let r = InequalityReport::ge("roundtrip", lhs, rhs, 0.5, 1e-9).with_rigorous(false);
        let back: InequalityReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        prop_assert_eq!(back, r);
    }

    #[test]
    fn diamagnetic_inequality(seed in any::<u64>(), d in 1usize..=2) {
        let g = BoxGrid::centered(d, if d == 1 { 200 } else { 40 }, 4.0, BoundaryCondition::Dirichlet).unwrap();
        let u = random::smooth_field(&g, &mut random::rng(seed), Support::Interior, true);
        prop_assert!(grid::kinetic_energy(&u) + 1e-10 >= grid::kinetic_energy(&u.modulus()));
    }

    #[test]
    fn density_mass_is_sum_of_norms(seed in any::<u64>(), count in 1usize..4) {
        let g = BoxGrid::centered(2, 30, 4.0, BoundaryCondition::Dirichlet).unwrap();
        let mut rng = random::rng(seed);
        let fields: Vec<SampledField> =
            (0..count).map(|_| random::smooth_field(&g, &mut rng, Support::Interior, true)).collect();
        let rho = grid::density_from_orbitals(&fields).unwrap();
        let norms: f64 = fields.iter().map(|f| f.norm_sqr()).sum();
        prop_assert!(rel_close(rho.mass(), norms, 1e-10));
    }

    #[test]
    fn checkers_are_scale_invariant(seed in any::<u64>(), c in 0.01f64..100.0) {
        let g = BoxGrid::centered(1, 300, 4.0, BoundaryCondition::Dirichlet).unwrap();
        let u = random::smooth_field(&g, &mut random::rng(seed), Support::Interior, false);
        let cu = u.scaled(Complex64::new(c, 0.0));
        for (a, b) in [
            (inequalities::check_heisenberg(&u, None).unwrap(), inequalities::check_heisenberg(&cu, None).unwrap()),
            (inequalities::check_sobolev(&u, None).unwrap(), inequalities::check_sobolev(&cu, None).unwrap()),
        ] {
            prop_assert!(rel_close(a.ratio.unwrap(), b.ratio.unwrap(), 1e-9));
            prop_assert_eq!(a.passed, b.passed);
        }
    }

    #[test]
    fn larger_potential_raises_levels(seed in any::<u64>()) {
        let g = BoxGrid::centered(1, 120, 6.0, BoundaryCondition::Dirichlet).unwrap();
        let mut rng = random::rng(seed);
        let v: Vec<f64> = (0..g.node_count()).map(|_| random::uniform(&mut rng, -10.0, 5.0)).collect();
        let w: Vec<f64> = v.iter().map(|x| x + random::uniform(&mut rng, 0.0, 3.0)).collect();
        let lo = spectral::lowest_eigenvalues(&SchrodingerOperator::new(g.clone(), v).unwrap(), 4).unwrap();
        let hi = spectral::lowest_eigenvalues(&SchrodingerOperator::new(g, w).unwrap(), 4).unwrap();
        for (a, b) in lo.eigenvalues.iter().zip(&hi.eigenvalues) {
            prop_assert!(*b >= a - 1e-9 * a.abs().max(1.0));
        }
    }

    #[test]
    fn partition_is_deterministic_and_refines(seed in any::<u64>(), d in 1usize..=3, frac in 0.01f64..0.5) {
        let mut rng = random::rng(seed);
        let bumps: Vec<GaussianBump> = (0..3)
            .map(|_| GaussianBump {
                center: (0..d).map(|_| random::uniform(&mut rng, 0.1, 0.9)).collect(),
                width: random::uniform(&mut rng, 0.02, 0.3),
                mass: random::uniform(&mut rng, 0.5, 2.0),
            })
            .collect();
        let oracle = covering::gaussian_oracle(bumps);
        let root = Cube::new(vec![0.0; d], 1.0).unwrap();
        let lambda = frac * oracle(&root);
        let a = covering::partition(&oracle, &root, lambda).unwrap();
        let b = covering::partition(&oracle, &root, lambda).unwrap();
        prop_assert_eq!(&a.leaves, &b.leaves);
        let finer = covering::partition(&oracle, &root, lambda / 2.0).unwrap();
        prop_assert!(finer.leaves.len() >= a.leaves.len());
        prop_assert!(a.max_leaf_mass() <= lambda);
        prop_assert!(rel_close(a.total_volume(), 1.0, 1e-12));
    }

    #[test]
    fn local_lower_below_exact_fill(n in 2usize..2000, d in 1usize..=3, q in 1usize..=4, vol in 0.1f64..10.0) {
        prop_assume!(n > q);
        let lower = matter::fermi_gas_energy(n, vol, d, q, FermiMode::LocalLower).unwrap();
        let exact = matter::fermi_gas_energy(n, vol, d, q, FermiMode::ExactFill).unwrap();
        let ratio = lower.value / exact.value;
        prop_assert!(ratio > 0.0 && ratio <= 1.0 + 1e-12, "ratio {}", ratio);
    }

    #[test]
    fn per_particle_times_count_is_value(n in 1usize..500, m in 1usize..20, q in 1usize..=4, z in 0.5f64..10.0) {
        for mode in [FermiMode::ExactFill, FermiMode::Weyl, FermiMode::LocalLower] {
            let r = matter::fermi_gas_energy(n, 2.0, 3, q, mode).unwrap();
            prop_assert!((r.per_particle * n as f64 - r.value).abs() <= 1e-12 * r.value.abs());
        }
        let s = matter::stability_bound(n, m, z, q, 1.0, matter::best_known_l3()).unwrap();
        prop_assert!((s.per_particle * (n + m) as f64 - s.value).abs() <= 1e-12 * s.value.abs());
    }

    #[test]
    fn matter_config_json_round_trip(seed in any::<u64>(), n in 1usize..5, m in 1usize..4) {
        let mut rng = random::rng(seed);
        let mut point = || [0, 1, 2].map(|_| random::uniform(&mut rng, -2.0, 2.0));
        let x: Vec<_> = (0..n).map(|_| point()).collect();
        let r: Vec<_> = (0..m).map(|_| point()).collect();
        let cfg = MatterConfig::new(1.5, x, r).unwrap();
        let back = MatterConfig::from_json(&serde_json::to_string(&cfg).unwrap()).unwrap();
        prop_assert_eq!(back, cfg);
    }
}

#[test]
fn exact_over_weyl_increases_to_one_in_1d() {
    let ratio = |n| {
        let e = matter::fermi_gas_energy(n, 1.0, 1, 1, FermiMode::ExactFill).unwrap().value;
        e / matter::fermi_gas_energy(n, 1.0, 1, 1, FermiMode::Weyl).unwrap().value
    };
    let mut prev = ratio(11);
    for n in 12..=400 {
        let r = ratio(n);
        assert!(r > prev && r < 1.0, "N = {n}: {r} after {prev}");
        prev = r;
    }
}

#[test]
fn dirichlet_dominates_neumann() {
    for n in [40, 80, 160] {
        let levels = |bc| {
            let g = BoxGrid::new(1, n, 2.0, bc).unwrap();
            let op = SchrodingerOperator::from_fn(&g, |x| (3.0 * x[0]).sin()).unwrap();
            spectral::lowest_eigenvalues(&op, 5).unwrap().eigenvalues
        };
        let (dir, neu) = (levels(BoundaryCondition::Dirichlet), levels(BoundaryCondition::Neumann));
        assert!(dir.iter().zip(&neu).all(|(a, b)| a >= b), "n = {n}");
    }
}
