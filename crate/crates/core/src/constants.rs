//! Closed-form constants of the functional inequalities and the anyon
//! statistics functions.
//!
//! Every value here is a pure function of its arguments. Constants whose
//! optimal value is only known numerically (e.g. the three-dimensional GNS
//! constant) are returned with `rigorous = false`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{domain, Error, Result};

/// First non-trivial zero of J₁′ (Neumann ground gap on the unit disk).
///
/// Defining equation: J₁′(ξ) = 0, ξ > 0.
pub const XI_DISK: f64 = 1.841184;

/// Smallest positive root of d²/dx² (sin x / x) = 0 (unit ball, d = 3).
pub const XI_BALL: f64 = 2.081576;

/// Numerically determined optimal GNS constant in three dimensions (non-rigorous).
pub const GNS_OPTIMAL_3D: f64 = 9.578;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstantKind {
    /// |𝕊^{d−1}|, the surface measure of the unit sphere in ℝ^d.
    SphereMeasure,
    /// Sharp Sobolev constant S_d (d ≥ 3), S₁ = 1.
    Sobolev,
    /// Proven lower bound G_d′ for the GNS constant.
    GnsLower,
    /// Best known value of the optimal GNS constant G_d.
    GnsOptimalKnown,
    /// Semiclassical (Weyl) constant K_d^cl.
    Semiclassical,
    /// Constant C_d of the local GNS / local uncertainty bound.
    LocalUncertainty,
    /// ξ in the Pauli bound on a disk (d = 2) or ball (d = 3).
    BallExclusionXi,
    /// Best proven lower bound (π/√3)^{−2/d} K_d^cl on the LT kinetic constant.
    LtBestKnown,
}

impl ConstantKind {
    pub const ALL: [ConstantKind; 8] = [
        ConstantKind::SphereMeasure,
        ConstantKind::Sobolev,
        ConstantKind::GnsLower,
        ConstantKind::GnsOptimalKnown,
        ConstantKind::Semiclassical,
        ConstantKind::LocalUncertainty,
        ConstantKind::BallExclusionXi,
        ConstantKind::LtBestKnown,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConstantKind::SphereMeasure => "sphere_measure",
            ConstantKind::Sobolev => "sobolev",
            ConstantKind::GnsLower => "gns_lower",
            ConstantKind::GnsOptimalKnown => "gns_optimal_known",
            ConstantKind::Semiclassical => "semiclassical",
            ConstantKind::LocalUncertainty => "local_uncertainty",
            ConstantKind::BallExclusionXi => "ball_exclusion_xi",
            ConstantKind::LtBestKnown => "lt_best_known",
        }
    }
}

impl fmt::Display for ConstantKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConstantKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ConstantKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| domain(format!("unknown constant kind `{s}`")))
    }
}

/// A constant together with whether its value is mathematically proven.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantValue {
    pub kind: ConstantKind,
    pub d: usize,
    pub value: f64,
    pub rigorous: bool,
}

/// |𝕊^{d−1}| = 2π^{d/2}/Γ(d/2).
pub fn sphere_measure(d: usize) -> f64 {
    let h = d as f64 / 2.0;
    2.0 * PI.powf(h) / gamma(h)
}

pub fn constant(kind: ConstantKind, d: usize) -> Result<f64> {
    constant_info(kind, d).map(|c| c.value)
}

pub fn constant_info(kind: ConstantKind, d: usize) -> Result<ConstantValue> {
    let unsupported = || domain(format!("constant `{kind}` is not available for d = {d}"));
    if d == 0 {
        return Err(unsupported());
    }
    let df = d as f64;
    let (value, rigorous) = match kind {
        ConstantKind::SphereMeasure => (sphere_measure(d), true),
        ConstantKind::Sobolev => match d {
            1 => (1.0, true),
            2 => return Err(unsupported()),
            _ => (df * (df - 2.0) * sphere_measure(d + 1).powf(2.0 / df) / 4.0, true),
        },
        ConstantKind::GnsLower => (
            (2.0 * PI).powi(2) * df.powf(2.0 + 2.0 / df) * sphere_measure(d).powf(-2.0 / df)
                / ((df + 2.0) * (df + 4.0)),
            true,
        ),
        ConstantKind::GnsOptimalKnown => match d {
            1 => (PI * PI / 4.0, true),
            3 => (GNS_OPTIMAL_3D, false),
            _ => return Err(unsupported()),
        },
        ConstantKind::Semiclassical => (semiclassical(d), true),
        ConstantKind::LocalUncertainty => (
            df * df * PI * PI / (16.0 * (df + 2.0) * (df + 4.0)),
            true,
        ),
        ConstantKind::BallExclusionXi => match d {
            2 => (XI_DISK, true),
            3 => (XI_BALL, true),
            _ => return Err(unsupported()),
        },
        ConstantKind::LtBestKnown => (
            (PI / 3f64.sqrt()).powf(-2.0 / df) * semiclassical(d),
            true,
        ),
    };
    Ok(ConstantValue {
        kind,
        d,
        value,
        rigorous,
    })
}

/// K_d^cl = 4π d/(d+2) (2/(d+2))^{2/d} Γ(2 + d/2)^{2/d}.
pub fn semiclassical(d: usize) -> f64 {
    let df = d as f64;
    4.0 * PI * df / (df + 2.0)
        * (2.0 / (df + 2.0)).powf(2.0 / df)
        * gamma(2.0 + df / 2.0).powf(2.0 / df)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DualDirection {
    KToL,
    LToK,
}

/// Converts between the kinetic (K) and Schrödinger-operator (L) forms of a
/// Lieb–Thirring constant: L = 2/(d+2) · (d/(d+2))^{d/2} · K^{−d/2}.
pub fn lt_dual(value: f64, d: usize, direction: DualDirection) -> Result<f64> {
    if !(value > 0.0) || !value.is_finite() {
        return Err(domain(format!("LT constant must be positive and finite, got {value}")));
    }
    if d == 0 {
        return Err(domain("dimension must be at least 1"));
    }
    let df = d as f64;
    let prefactor = 2.0 / (df + 2.0) * (df / (df + 2.0)).powf(df / 2.0);
    Ok(match direction {
        DualDirection::KToL => prefactor * value.powf(-df / 2.0),
        DualDirection::LToK => (prefactor / value).powf(2.0 / df),
    })
}

/// α_N = min_{p ∈ {0..N−2}} min_{q ∈ ℤ} |(2p+1)α − 2q|.
///
/// The inner minimum is a brute force over |q| ≤ ⌈|(2p+1)α|/2⌉ + 1; outside
/// that window |(2p+1)α − 2q| only grows with |q|.
pub fn alpha_statistics(alpha: f64, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(domain(format!("alpha_N needs N >= 2, got {n}")));
    }
    if !alpha.is_finite() {
        return Err(domain("statistics parameter must be finite"));
    }
    let mut best = f64::INFINITY;
    for p in 0..=(n - 2) {
        let x = (2 * p + 1) as f64 * alpha;
        let window = (x.abs() / 2.0).ceil() as i64 + 1;
        for q in -window..=window {
            best = best.min((x - 2.0 * q as f64).abs());
        }
        if best == 0.0 {
            break;
        }
    }
    Ok(best)
}

/// The N → ∞ limit of α_N at a rational α = μ/ν: 1/ν if μ is odd (in lowest
/// terms), 0 otherwise.
pub fn alpha_star(numerator: i64, denominator: i64) -> Result<f64> {
    if denominator == 0 {
        return Err(domain("alpha_star: zero denominator"));
    }
    let g = numerator.gcd(&denominator);
    let mu = (numerator / g).abs();
    let nu = (denominator / g).abs();
    Ok(if mu % 2 == 1 { 1.0 / nu as f64 } else { 0.0 })
}

/// C_{d,α,β} = 2^{d(α+β+1)} / (2^{dα} − 1) of the covering lemma.
pub fn covering_constant(d: usize, alpha: f64, beta: f64) -> Result<f64> {
    if !(alpha > 0.0) || !(beta > 0.0) {
        return Err(domain(format!(
            "covering constant needs alpha, beta > 0 (got alpha={alpha}, beta={beta})"
        )));
    }
    let df = d as f64;
    Ok(2f64.powf(df * (alpha + beta + 1.0)) / (2f64.powf(df * alpha) - 1.0))
}

/// b = 1 − (q/Λ)·2^{d(α+2)}/(2^{dα} − 1). May be ≤ 0, in which case the weak
/// covering bound holds trivially.
pub fn weak_b(d: usize, alpha: f64, q: f64, lambda: f64) -> Result<f64> {
    if !(alpha > 0.0) || !(lambda > 0.0) {
        return Err(domain(format!(
            "weak covering constant needs alpha, lambda > 0 (got alpha={alpha}, lambda={lambda})"
        )));
    }
    if q < 0.0 {
        return Err(domain(format!("q must be non-negative, got {q}")));
    }
    let df = d as f64;
    Ok(1.0 - q / lambda * 2f64.powf(df * (alpha + 2.0)) / (2f64.powf(df * alpha) - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn sphere_measures() {
        assert!(close(sphere_measure(1), 2.0, 1e-14));
        assert!(close(sphere_measure(2), 2.0 * PI, 1e-14));
        assert!(close(sphere_measure(3), 4.0 * PI, 1e-14));
        assert!(close(sphere_measure(4), 2.0 * PI * PI, 1e-14));
    }

    #[test]
    fn quoted_constants() {
        let s3 = constant(ConstantKind::Sobolev, 3).unwrap();
        assert!(close(s3, 3.0 * (PI / 2.0).powf(4.0 / 3.0), 1e-13));
        assert!((s3 - 5.478).abs() < 5e-4);
        assert_eq!(constant(ConstantKind::Sobolev, 1).unwrap(), 1.0);
        assert!((constant(ConstantKind::GnsLower, 3).unwrap() - 3.907).abs() < 5e-4);
        assert!(close(
            constant(ConstantKind::GnsOptimalKnown, 1).unwrap(),
            PI * PI / 4.0,
            1e-15
        ));
        let g3 = constant_info(ConstantKind::GnsOptimalKnown, 3).unwrap();
        assert!(!g3.rigorous);
        assert!(close(constant(ConstantKind::Semiclassical, 1).unwrap(), PI * PI / 3.0, 1e-13));
        assert!(close(constant(ConstantKind::Semiclassical, 2).unwrap(), 2.0 * PI, 1e-13));
        assert!(close(
            constant(ConstantKind::Semiclassical, 3).unwrap(),
            0.6 * (6.0 * PI * PI).powf(2.0 / 3.0),
            1e-13
        ));
        assert!((constant(ConstantKind::Semiclassical, 3).unwrap() - 9.116).abs() < 5e-4);
        assert!(close(
            constant(ConstantKind::LocalUncertainty, 2).unwrap(),
            PI * PI / 96.0,
            1e-14
        ));
        assert!(close(constant(ConstantKind::LtBestKnown, 1).unwrap(), 1.0, 1e-13));
    }

    #[test]
    fn unsupported_pairs_name_the_pair() {
        let err = constant(ConstantKind::Sobolev, 2).unwrap_err().to_string();
        assert!(err.contains("sobolev") && err.contains("d = 2"), "{err}");
        assert!(constant(ConstantKind::BallExclusionXi, 1).is_err());
        assert!(constant(ConstantKind::GnsOptimalKnown, 2).is_err());
        assert!(constant(ConstantKind::SphereMeasure, 0).is_err());
    }

    #[test]
    fn ball_xi_solves_its_defining_equation() {
        // d²/dx² (sin x / x) = −sin x/x − 2cos x/x² + 2 sin x/x³
        let f = |x: f64| -x.sin() / x - 2.0 * x.cos() / (x * x) + 2.0 * x.sin() / x.powi(3);
        let (mut a, mut b) = (1.5, 2.5);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if f(a) * f(m) <= 0.0 {
                b = m
            } else {
                a = m
            }
        }
        assert!((0.5 * (a + b) - XI_BALL).abs() < 1e-6);
        assert!((XI_DISK - 1.841).abs() < 1e-3);
    }

    #[test]
    fn lt_dual_values() {
        let kcl = semiclassical(3);
        let l = lt_dual(kcl, 3, DualDirection::KToL).unwrap();
        assert!((l - 0.006754).abs() < 1e-6, "{l}");
        assert!(lt_dual(0.0, 3, DualDirection::KToL).is_err());
        assert!(lt_dual(-1.0, 1, DualDirection::LToK).is_err());
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha_statistics(1.0, 10).unwrap(), 1.0);
        assert_eq!(alpha_statistics(0.0, 5).unwrap(), 0.0);
        assert!((alpha_statistics(0.4, 2).unwrap() - 0.4).abs() < 1e-15);
        assert!(alpha_statistics(0.4, 1).is_err());
        assert!((alpha_star(1, 3).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(alpha_star(2, 3).unwrap(), 0.0);
        assert!((alpha_star(2, 6).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((alpha_star(-3, 9).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(alpha_star(1, 0).is_err());
        assert!((alpha_statistics(1.0 / 3.0, 1000).unwrap() - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn covering_constant_values() {
        assert!(close(covering_constant(2, 1.0, 1.0).unwrap(), 64.0 / 3.0, 1e-14));
        assert!(covering_constant(2, 0.0, 1.0).is_err());
        let b = weak_b(2, 1.0, 1.0, 8.0 / 3.0 * 16.0).unwrap();
        assert!((b - 0.5).abs() < 1e-14);
        assert_eq!(weak_b(3, 0.5, 0.0, 2.0).unwrap(), 1.0);
        assert!(weak_b(2, 0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn kind_round_trips_through_its_name() {
        for k in ConstantKind::ALL {
            assert_eq!(k.name().parse::<ConstantKind>().unwrap(), k);
        }
        assert!("nope".parse::<ConstantKind>().is_err());
    }
}
