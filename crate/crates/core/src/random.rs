//! Seeded pseudo-randomness and random test-field generators for the
//! property sweeps.
//!
//! All streams come from SplitMix64 (Steele, Lea & Flood), whose output is a
//! fixed function of the 64-bit seed on every platform. Trial `i` of a sweep
//! with seed `s` draws from its own stream, so sweeps can run in parallel and
//! still be reproduced one trial at a time.

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::grid::{BoxGrid, SampledField};

pub type Rng = SplitMix64;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

pub fn rng(seed: u64) -> Rng {
    SplitMix64::seed_from_u64(seed)
}

/// Independent stream for trial `index` of a sweep seeded with `seed`.
pub fn trial_rng(seed: u64, index: u64) -> Rng {
    SplitMix64::seed_from_u64(seed ^ index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA))
}

pub fn uniform(rng: &mut Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

pub fn below(rng: &mut Rng, n: usize) -> usize {
    rng.random_range(0..n)
}

/// Which region a random field must avoid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Support {
    /// Anywhere strictly inside the box.
    Interior,
    /// Inside the box and at least `inner` away from the box centre.
    Annulus { inner: f64 },
    /// Inside the box, away from the centre and from the unit sphere.
    AvoidUnitSphere { gap: f64 },
}

/// A smooth random field: a sum of a few Gaussian bumps with random centres,
/// widths, amplitudes (complex if `complex`), multiplied by a smooth cutoff
/// that vanishes on the box boundary and outside the admissible support.
pub fn smooth_field(grid: &BoxGrid, rng: &mut Rng, support: Support, complex: bool) -> SampledField {
    let d = grid.d;
    let half = grid.side / 2.0;
    let centre = grid.center();
    let bumps = 1 + below(rng, 4);
    let mut params = Vec::with_capacity(bumps);
    for _ in 0..bumps {
        let c: Vec<f64> = (0..d)
            .map(|a| centre[a] + uniform(rng, -0.6, 0.6) * half)
            .collect();
        let width = uniform(rng, 0.08, 0.4) * grid.side;
        let amp = Complex64::new(
            uniform(rng, -1.0, 1.0),
            if complex { uniform(rng, -1.0, 1.0) } else { 0.0 },
        );
        let k: Vec<f64> = (0..d)
            .map(|_| if complex { uniform(rng, -6.0, 6.0) / grid.side } else { 0.0 })
            .collect();
        params.push((c, width, amp, k));
    }
    let h = grid.spacing();
    let values = grid
        .coordinates()
        .map(|x| {
            let cut = cutoff(grid, &x, support, h);
            if cut == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let mut v = Complex64::new(0.0, 0.0);
            for (c, w, amp, k) in &params {
                let r2: f64 = x.iter().zip(c).map(|(xi, ci)| (xi - ci).powi(2)).sum();
                let phase: f64 = x.iter().zip(k).map(|(xi, ki)| xi * ki).sum();
                v += amp * Complex64::from_polar((-r2 / (2.0 * w * w)).exp(), phase);
            }
            v * cut
        })
        .collect();
    SampledField::new(grid.clone(), values).expect("generated field matches grid")
}

fn bump(t: f64) -> f64 {
    // smooth 0 → 1 transition on [0, 1]
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / t).exp();
        let b = (-1.0 / (1.0 - t)).exp();
        a / (a + b)
    }
}

fn cutoff(grid: &BoxGrid, x: &[f64], support: Support, h: f64) -> f64 {
    let lo = grid.lower;
    let hi = grid.lower + grid.side;
    let margin = 0.15 * grid.side;
    let mut c = 1.0;
    for &xi in x {
        let dist = (xi - lo).min(hi - xi) - 2.0 * h;
        c *= bump(dist / margin);
    }
    if c == 0.0 {
        return 0.0;
    }
    let centre = grid.center();
    let r = x
        .iter()
        .zip(&centre)
        .map(|(a, b)| (a - b).powi(2))
        .sum::<f64>()
        .sqrt();
    match support {
        Support::Interior => c,
        Support::Annulus { inner } => {
            let gap = inner + 2.0 * h;
            c * bump((r - gap) / (0.1 * grid.side + gap))
        }
        Support::AvoidUnitSphere { gap } => {
            let g = gap + 2.0 * h;
            let ramp = 0.08 * grid.side;
            c * bump((r - g) / ramp) * bump(((r - 1.0).abs() - g) / ramp)
        }
    }
}
