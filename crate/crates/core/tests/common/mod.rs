#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use tfnorm::grid::{GridSpec, SampledFunction, SampledSymbol, C64};

/// Sum of three random Gabor atoms.
pub fn smooth_fn(grid: GridSpec, seed: u64) -> SampledFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms: Vec<(f64, f64, C64)> = (0..3)
        .map(|_| {
            (
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            )
        })
        .collect();
    SampledFunction::from_fn(grid, |x| {
        terms
            .iter()
            .map(|(c, w, a)| a * (-PI * (x - c) * (x - c)).exp() * C64::from_polar(1.0, 2.0 * PI * w * x))
            .sum()
    })
}

/// Sum of three random phase-space Gaussians with linear phases.
pub fn smooth_symbol(grid: GridSpec, seed: u64) -> SampledSymbol {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms: Vec<[f64; 4]> = (0..3).map(|_| [0; 4].map(|_| rng.gen_range(-1.5..1.5))).collect();
    let amps: Vec<C64> = (0..3)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    SampledSymbol::from_fn(grid, grid.dual(), |x, w| {
        terms
            .iter()
            .zip(&amps)
            .map(|(t, a)| {
                let e = -PI * ((x - t[0]).powi(2) + (w - t[1]).powi(2)) / 2.0;
                a * e.exp() * C64::from_polar(1.0, PI * (t[2] * x + t[3] * w))
            })
            .sum()
    })
}

/// Independent uniform samples in the unit square of the complex plane.
pub fn noise_fn(grid: GridSpec, seed: u64) -> SampledFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..grid.samples)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    SampledFunction::new(grid, values).unwrap()
}

pub fn noise_symbol(x: GridSpec, w: GridSpec, seed: u64) -> SampledSymbol {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..x.samples * w.samples)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    SampledSymbol::dense(x, w, values).unwrap()
}

/// Noise multiplied by a bump on `[-r, r]`.
pub fn compact_noise(grid: GridSpec, r: f64, seed: u64) -> SampledFunction {
    let n = noise_fn(grid, seed);
    n.map_indexed(|x, v| {
        let t = x / r;
        if t.abs() >= 1.0 {
            C64::new(0.0, 0.0)
        } else {
            v * (1.0 - 1.0 / (1.0 - t * t)).exp()
        }
    })
}

pub fn rel_err(a: &SampledFunction, b: &SampledFunction) -> f64 {
    let d = a.add(&b.scale(C64::new(-1.0, 0.0))).unwrap();
    d.l2_norm() / b.l2_norm()
}
