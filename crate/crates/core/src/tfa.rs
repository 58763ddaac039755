//! Short-time Fourier transform, its discrete inversion, and the cross-Wigner
//! distribution.

use rayon::prelude::*;

use crate::error::{Result, TfError};
use crate::fft;
use crate::grid::{GridSpec, SampledFunction, SampledSymbol, SymbolRepr, C64, ZERO};

/// Sampling lattice of an STFT, as strides on the sample grid and its dual.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lattice {
    pub xstride: usize,
    pub wstride: usize,
}

impl Lattice {
    /// Lattice with both steps close to `1/(2·oversample)` physical units.
    pub fn for_grid(grid: GridSpec, oversample: usize) -> Lattice {
        let target = 1.0 / (2.0 * oversample.max(1) as f64);
        Lattice {
            xstride: stride_for(grid.samples, grid.step(), target),
            wstride: stride_for(grid.samples, grid.freq_step(), target),
        }
    }

    /// Full resolution on both axes.
    pub fn full() -> Lattice {
        Lattice {
            xstride: 1,
            wstride: 1,
        }
    }

    fn check(&self, grid: GridSpec) -> Result<()> {
        let half = grid.samples / 2;
        for s in [self.xstride, self.wstride] {
            if s == 0 || half % s != 0 {
                return Err(TfError::Misaligned(format!(
                    "lattice stride {s} does not divide M/2 = {half}"
                )));
            }
        }
        Ok(())
    }
}

/// Largest divisor `s` of `m/2` with `s·step <= target` (at least 1).
pub(crate) fn stride_for(m: usize, step: f64, target: f64) -> usize {
    let half = m / 2;
    let limit = (target / step * (1.0 + 1e-9)).floor().max(1.0) as usize;
    (1..=limit.min(half)).rev().find(|s| half % s == 0).unwrap_or(1)
}

/// Samples of `V_g f` on a lattice, row-major with `x` outer.
#[derive(Debug, Clone, PartialEq)]
pub struct StftArray {
    pub grid: GridSpec,
    pub lattice: Lattice,
    pub values: Vec<C64>,
}

impl StftArray {
    pub fn nx(&self) -> usize {
        self.grid.samples / self.lattice.xstride
    }

    pub fn nw(&self) -> usize {
        self.grid.samples / self.lattice.wstride
    }

    pub fn xstep(&self) -> f64 {
        self.grid.step() * self.lattice.xstride as f64
    }

    pub fn wstep(&self) -> f64 {
        self.grid.freq_step() * self.lattice.wstride as f64
    }

    pub fn x(&self, n: usize) -> f64 {
        self.grid.point(n * self.lattice.xstride)
    }

    pub fn omega(&self, k: usize) -> f64 {
        self.grid.dual().point(k * self.lattice.wstride)
    }

    pub fn get(&self, n: usize, k: usize) -> C64 {
        self.values[n * self.nw() + k]
    }

    pub fn abs_values(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    /// Quadrature-weighted `L^2` norm of the array.
    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.xstep() * self.wstep()).sqrt()
    }
}

/// `V_g f` on the default lattice for `oversample`.
pub fn stft(f: &SampledFunction, g: &SampledFunction, oversample: usize) -> Result<StftArray> {
    stft_on(f, g, Lattice::for_grid(f.grid, oversample))
}

/// `V_g f(x_n, ·) = (f · T_{x_n} conj(g))^`, subsampled on the lattice.
pub fn stft_on(f: &SampledFunction, g: &SampledFunction, lattice: Lattice) -> Result<StftArray> {
    f.grid.ensure_same(&g.grid, "stft window")?;
    if g.max_abs() == 0.0 {
        return Err(TfError::Window("window is zero".into()));
    }
    lattice.check(f.grid)?;
    let m = f.grid.samples;
    let step = f.grid.step();
    let gc = g.conj();
    let nx = m / lattice.xstride;
    let nw = m / lattice.wstride;
    let rows: Vec<Vec<C64>> = (0..nx)
        .into_par_iter()
        .map(|n| {
            let shift = (n * lattice.xstride) as isize - (m / 2) as isize;
            let tg = gc.shift_by(shift);
            let mut prod: Vec<C64> = f.values.iter().zip(&tg.values).map(|(a, b)| a * b).collect();
            fft::centered_in_place(&mut prod, step, false);
            prod.into_iter().step_by(lattice.wstride).collect()
        })
        .collect();
    let mut values = Vec::with_capacity(nx * nw);
    rows.into_iter().for_each(|r| values.extend(r));
    Ok(StftArray {
        grid: f.grid,
        lattice,
        values,
    })
}

/// `V_g f(x, ω)` at a single point by direct summation; `x` must be on the grid.
pub fn stft_point(f: &SampledFunction, g: &SampledFunction, x: f64, omega: f64) -> Result<C64> {
    f.grid.ensure_same(&g.grid, "stft window")?;
    let tg = g.translate(x)?;
    let tau = 2.0 * std::f64::consts::PI;
    let s: C64 = f
        .grid
        .points()
        .zip(f.values.iter().zip(&tg.values))
        .map(|(t, (a, b))| a * b.conj() * C64::from_polar(1.0, -tau * omega * t))
        .sum();
    Ok(s * f.step())
}

/// `max_t |Σ_n |g(t - x_n)|² · xstep - 1|`, the deviation of the lattice
/// frame operator from the identity (ignoring frequency aliasing).
pub fn frame_deviation(g: &SampledFunction, lattice: Lattice) -> f64 {
    let m = g.grid.samples;
    let xstep = g.grid.step() * lattice.xstride as f64;
    let sq: Vec<f64> = g.values.iter().map(|v| v.norm_sqr()).collect();
    (0..m)
        .map(|t| {
            let s: f64 = (0..m / lattice.xstride)
                .map(|n| sq[(t + m - n * lattice.xstride) % m])
                .sum();
            (s * xstep - 1.0).abs()
        })
        .fold(0.0, f64::max)
}

/// Discrete synthesis `Σ_n Σ_k V(x_n, ω_k) M_{ω_k} T_{x_n} g · xstep · ωstep`.
///
/// Fails with [`TfError::UnderspreadLattice`] if the lattice frame operator
/// deviates from the identity by more than `1e-3`.
pub fn istft(v: &StftArray, g: &SampledFunction) -> Result<SampledFunction> {
    v.grid.ensure_same(&g.grid, "istft window")?;
    let residual = frame_deviation(g, v.lattice);
    if residual > 1e-3 {
        return Err(TfError::UnderspreadLattice { residual });
    }
    let m = v.grid.samples;
    let (nx, nw) = (v.nx(), v.nw());
    let freq_step = v.grid.freq_step();
    let xstep = v.xstep();
    let ws = v.lattice.wstride as f64;
    let partial: Vec<Vec<C64>> = (0..nx)
        .into_par_iter()
        .map(|n| {
            let mut spec = vec![ZERO; m];
            for k in 0..nw {
                spec[k * v.lattice.wstride] = v.values[n * nw + k];
            }
            fft::centered_in_place(&mut spec, freq_step, true);
            let shift = (n * v.lattice.xstride) as isize - (m / 2) as isize;
            let tg = g.shift_by(shift);
            spec.iter()
                .zip(&tg.values)
                .map(|(a, b)| a * b * (ws * xstep))
                .collect()
        })
        .collect();
    let mut out = vec![ZERO; m];
    for row in partial {
        for (o, r) in out.iter_mut().zip(row) {
            *o += r;
        }
    }
    Ok(SampledFunction {
        grid: v.grid,
        values: out,
    })
}

/// Band-limited resampling onto the grid of doubled resolution.
pub fn upsample2(f: &SampledFunction) -> SampledFunction {
    f.upsample(2)
}

/// `W(f,g)(x,ω) = Σ_t f(x + t/2) conj(g(x - t/2)) e^{-2πiωt} Δt`, on the
/// sample grid times its dual. Half-sample shifts come from the doubled grid.
pub fn cross_wigner(f: &SampledFunction, g: &SampledFunction) -> Result<SampledSymbol> {
    f.grid.ensure_same(&g.grid, "cross_wigner")?;
    let m = f.grid.samples;
    let step = f.grid.step();
    let fu = upsample2(f).values;
    let gu = upsample2(g).values;
    let m2 = 2 * m;
    let rows: Vec<Vec<C64>> = (0..m)
        .into_par_iter()
        .map(|j| {
            let mut row: Vec<C64> = (0..m)
                .map(|idx| {
                    let mm = idx as isize - (m / 2) as isize;
                    let a = fu[(2 * j as isize + mm).rem_euclid(m2 as isize) as usize];
                    let b = gu[(2 * j as isize - mm).rem_euclid(m2 as isize) as usize];
                    a * b.conj()
                })
                .collect();
            fft::centered_in_place(&mut row, step, false);
            row
        })
        .collect();
    let mut values = Vec::with_capacity(m * m);
    rows.into_iter().for_each(|r| values.extend(r));
    Ok(SampledSymbol {
        xgrid: f.grid,
        wgrid: f.grid.dual(),
        repr: SymbolRepr::Dense(values),
    })
}
