//! Kohn–Nirenberg and Weyl quantization, integral kernels, and the
//! symbol conversion `U`.
//!
//! Kernels are stored as [`SampledSymbol`]s whose second grid is the
//! `y`-grid (equal to the function grid), so `K.value(i, j) = K(x_i, y_j)`.

use rayon::prelude::*;

use crate::error::{Result, TfError};
use crate::fft;
use crate::grid::{dft2, partial_dft2, GridSpec, SampledFunction, SampledSymbol, SymbolRepr, C64, ZERO};

/// Which quantization turns a symbol into an operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantization {
    KohnNirenberg,
    Weyl,
}

impl Quantization {
    pub fn apply(self, a: &SampledSymbol, f: &SampledFunction) -> Result<SampledFunction> {
        match self {
            Quantization::KohnNirenberg => kn_apply(a, f),
            Quantization::Weyl => weyl_apply(a, f),
        }
    }

    /// Integral kernel on the function grid.
    pub fn kernel(self, a: &SampledSymbol) -> Result<SampledSymbol> {
        match self {
            Quantization::KohnNirenberg => kn_kernel(a),
            Quantization::Weyl => weyl_kernel(a),
        }
    }
}

impl std::fmt::Display for Quantization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Quantization::KohnNirenberg => "kn",
            Quantization::Weyl => "weyl",
        })
    }
}

impl std::str::FromStr for Quantization {
    type Err = TfError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "kn" | "kohn-nirenberg" => Ok(Quantization::KohnNirenberg),
            "weyl" => Ok(Quantization::Weyl),
            _ => Err(TfError::Parse(format!("unknown quantization `{s}`"))),
        }
    }
}

fn check_symbol_grid(a: &SampledSymbol, grid: GridSpec) -> Result<()> {
    a.xgrid.ensure_same(&grid, "symbol x-grid vs function grid")?;
    a.wgrid.ensure_same(&grid.dual(), "symbol ω-grid vs dual of function grid")
}

/// `a(x,D)f(x) = Σ_ω a(x,ω) f̂(ω) e^{2πixω} Δω`.
pub fn kn_apply(a: &SampledSymbol, f: &SampledFunction) -> Result<SampledFunction> {
    check_symbol_grid(a, f.grid)?;
    let fh = f.dft();
    match &a.repr {
        SymbolRepr::Separable(terms) => {
            let mut out = vec![ZERO; f.len()];
            for (u, v) in terms {
                let prod: Vec<C64> = v.iter().zip(&fh.values).map(|(x, y)| x * y).collect();
                let back = fft::centered(&prod, fh.grid.step(), true);
                for ((o, ui), b) in out.iter_mut().zip(u).zip(back) {
                    *o += ui * b;
                }
            }
            Ok(SampledFunction { grid: f.grid, values: out })
        }
        SymbolRepr::Dense(vals) => {
            let m = f.len();
            let h = m / 2;
            let tw = fft::twiddles(m, 1.0);
            let dw = fh.grid.step();
            let values = (0..m)
                .into_par_iter()
                .map(|i| {
                    let xi = (i + m - h) % m;
                    let row = &vals[i * m..(i + 1) * m];
                    let s: C64 = (0..m)
                        .map(|k| {
                            let r = (xi * ((k + m - h) % m)) % m;
                            row[k] * fh.values[k] * tw[r]
                        })
                        .sum();
                    s * dw
                })
                .collect();
            Ok(SampledFunction { grid: f.grid, values })
        }
    }
}

/// `K(x,y) = (F₂⁻¹a)(x, x - y)` with periodic wrap in `x - y`.
pub fn kn_kernel(a: &SampledSymbol) -> Result<SampledSymbol> {
    a.wgrid.ensure_same(&a.xgrid.dual(), "symbol ω-grid vs dual of x-grid")?;
    let s = partial_dft2(a, true).to_dense();
    let m = a.xgrid.samples;
    let mut vals = vec![ZERO; m * m];
    vals.par_chunks_mut(m).enumerate().for_each(|(i, row)| {
        for (j, r) in row.iter_mut().enumerate() {
            *r = s.value(i, (i + m + m / 2 - j) % m);
        }
    });
    Ok(SampledSymbol {
        xgrid: a.xgrid,
        wgrid: a.xgrid,
        repr: SymbolRepr::Dense(vals),
    })
}

/// `(Tf)(x_i) = Σ_j K(x_i, y_j) f(y_j) Δy`.
pub fn kernel_apply(k: &SampledSymbol, f: &SampledFunction) -> Result<SampledFunction> {
    k.xgrid.ensure_same(&f.grid, "kernel x-grid")?;
    k.wgrid.ensure_same(&f.grid, "kernel y-grid")?;
    let m = f.len();
    let vals = k.values();
    let dy = f.step();
    let values = vals
        .par_chunks(m)
        .map(|row| row.iter().zip(&f.values).map(|(a, b)| a * b).sum::<C64>() * dy)
        .collect();
    Ok(SampledFunction { grid: f.grid, values })
}

/// Wrapped offset `i - j ∈ [-M/2, M/2)`.
#[inline]
fn wrapped(i: usize, j: usize, m: usize) -> isize {
    let d = (i as isize - j as isize).rem_euclid(m as isize);
    if d >= (m / 2) as isize {
        d - m as isize
    } else {
        d
    }
}

/// `F₂⁻¹σ` prepared for evaluation at midpoints: columns with odd offset
/// are stored half-shifted, so every lookup is an exact table read.
enum WeylTable {
    /// `cols[t]` holds `S(·, t)` (or its half-shift), `t = d + M/2`.
    Dense(Vec<Vec<C64>>),
    /// Per term: `u`, `u` at half-integer points, `F⁻¹v`.
    Separable(Vec<(Vec<C64>, Vec<C64>, Vec<C64>)>),
}

impl WeylTable {
    fn new(sigma: &SampledSymbol) -> Self {
        let m = sigma.xgrid.samples;
        let s = partial_dft2(sigma, true);
        match &s.repr {
            SymbolRepr::Dense(vals) => {
                let cols = (0..m)
                    .into_par_iter()
                    .map(|t| {
                        let col: Vec<C64> = (0..m).map(|i| vals[i * m + t]).collect();
                        let d = t as isize - (m / 2) as isize;
                        if d % 2 == 0 {
                            col
                        } else {
                            fft::half_shift(&col, 1.0)
                        }
                    })
                    .collect();
                WeylTable::Dense(cols)
            }
            SymbolRepr::Separable(terms) => WeylTable::Separable(
                terms
                    .iter()
                    .map(|(u, v)| (u.clone(), fft::half_shift(u, 1.0), v.clone()))
                    .collect(),
            ),
        }
    }

    /// `K(x_i, y_j)` for wrapped offset `d = i - j`.
    #[inline]
    fn entry(&self, j: usize, d: isize, m: usize) -> C64 {
        let mid = (j as isize + d.div_euclid(2)).rem_euclid(m as isize) as usize;
        let t = (d + (m / 2) as isize) as usize;
        let odd = d % 2 != 0;
        match self {
            WeylTable::Dense(cols) => cols[t][mid],
            WeylTable::Separable(terms) => terms
                .iter()
                .map(|(u, hu, v)| if odd { hu[mid] * v[t] } else { u[mid] * v[t] })
                .sum(),
        }
    }
}

/// Weyl quantization `L_σ f(x) = Σ_y F₂⁻¹σ((x+y)/2, x-y) f(y) Δy`.
///
/// Midpoints between grid points are read from half-shifted columns of
/// `F₂⁻¹σ`; zero samples of `f` are skipped, so the cost is `O(M · nnz(f))`.
pub fn weyl_apply(sigma: &SampledSymbol, f: &SampledFunction) -> Result<SampledFunction> {
    check_symbol_grid(sigma, f.grid)?;
    let m = f.len();
    let table = WeylTable::new(sigma);
    let support: Vec<(usize, C64)> = f
        .values
        .iter()
        .copied()
        .enumerate()
        .filter(|(_, v)| *v != ZERO)
        .collect();
    let dy = f.step();
    let values = (0..m)
        .into_par_iter()
        .map(|i| {
            support
                .iter()
                .map(|&(j, fj)| table.entry(j, wrapped(i, j, m), m) * fj)
                .sum::<C64>()
                * dy
        })
        .collect();
    Ok(SampledFunction { grid: f.grid, values })
}

/// Reference Weyl quantization by direct quadrature, `O(M³)`:
/// `K(x,y) = Σ_ω σ((x+y)/2, ω) e^{2πi(x-y)ω} Δω` with half-sample
/// midpoints interpolated along `x` before the sum over `ω`.
pub fn weyl_apply_direct(sigma: &SampledSymbol, f: &SampledFunction) -> Result<SampledFunction> {
    check_symbol_grid(sigma, f.grid)?;
    let m = f.len();
    let dense = sigma.values();
    let column = |k: usize| -> Vec<C64> { (0..m).map(|i| dense[i * m + k]).collect() };
    let shifted: Vec<Vec<C64>> = (0..m).map(|k| fft::half_shift(&column(k), 1.0)).collect();
    let (dx, dw) = (f.step(), sigma.wgrid.step());
    let omegas: Vec<f64> = sigma.wgrid.points().collect();
    let tau = 2.0 * std::f64::consts::PI;
    let values = (0..m)
        .into_par_iter()
        .map(|i| {
            let mut acc = ZERO;
            for (j, &fj) in f.values.iter().enumerate() {
                if fj == ZERO {
                    continue;
                }
                let d = wrapped(i, j, m);
                let mid = (j as isize + d.div_euclid(2)).rem_euclid(m as isize) as usize;
                let k_ij: C64 = (0..m)
                    .map(|k| {
                        let s = if d % 2 == 0 { dense[mid * m + k] } else { shifted[k][mid] };
                        s * C64::from_polar(1.0, tau * d as f64 * dx * omegas[k])
                    })
                    .sum();
                acc += k_ij * fj;
            }
            acc * dw * dx
        })
        .collect();
    Ok(SampledFunction { grid: f.grid, values })
}

/// The Weyl kernel `K(x,y) = F₂⁻¹σ((x+y)/2, x-y)` as a dense matrix.
pub fn weyl_kernel(sigma: &SampledSymbol) -> Result<SampledSymbol> {
    sigma.wgrid.ensure_same(&sigma.xgrid.dual(), "symbol ω-grid vs dual of x-grid")?;
    let m = sigma.xgrid.samples;
    let table = WeylTable::new(sigma);
    let mut vals = vec![ZERO; m * m];
    vals.par_chunks_mut(m).enumerate().for_each(|(i, row)| {
        for (j, r) in row.iter_mut().enumerate() {
            *r = table.entry(j, wrapped(i, j, m), m);
        }
    });
    Ok(SampledSymbol {
        xgrid: sigma.xgrid,
        wgrid: sigma.xgrid,
        repr: SymbolRepr::Dense(vals),
    })
}

/// `σ = F₂(τ_s K)` with `τ_s K(x,t) = K(x + t/2, x - t/2)`: the Weyl symbol
/// of the operator with kernel `K`.
pub fn kernel_to_weyl(k: &SampledSymbol) -> Result<SampledSymbol> {
    if !k.xgrid.same_as(&k.wgrid) {
        return Err(TfError::Resolution(
            "kernel x- and y-grids differ; half-sample shifts are undefined".into(),
        ));
    }
    let m = k.xgrid.samples;
    let vals = k.values();
    let h = (m / 2) as isize;
    let at = |i: isize, j: isize| vals[i.rem_euclid(m as isize) as usize * m + j.rem_euclid(m as isize) as usize];
    // cols[t][i] = τ_s K(x_i, t)
    let cols: Vec<Vec<C64>> = (0..m)
        .into_par_iter()
        .map(|t| {
            let d = t as isize - h;
            if d % 2 == 0 {
                (0..m as isize).map(|i| at(i + d / 2, i - d / 2)).collect()
            } else {
                // values at x_i + Δx/2, moved back by half a sample
                let w: Vec<C64> = (0..m as isize)
                    .map(|i| at(i + (d + 1).div_euclid(2), i - (d - 1).div_euclid(2)))
                    .collect();
                fft::half_shift(&w, -1.0)
            }
        })
        .collect();
    let step = k.xgrid.step();
    let mut out = vec![ZERO; m * m];
    out.par_chunks_mut(m).enumerate().for_each(|(i, row)| {
        for (t, r) in row.iter_mut().enumerate() {
            *r = cols[t][i];
        }
        fft::centered_in_place(row, step, false);
    });
    Ok(SampledSymbol {
        xgrid: k.xgrid,
        wgrid: k.xgrid.dual(),
        repr: SymbolRepr::Dense(out),
    })
}

/// `(Uσ)^(ζ₁,ζ₂) = e^{πiζ₁ζ₂} σ̂(ζ₁,ζ₂)`; `inverse` uses the conjugate phase.
///
/// `Uσ` is the Kohn–Nirenberg symbol of the operator with Weyl symbol `σ`.
pub fn u_transform(sigma: &SampledSymbol, inverse: bool) -> SampledSymbol {
    let spec = dft2(sigma, false);
    let sign = if inverse { -1.0 } else { 1.0 };
    let (z1, z2) = (spec.xgrid, spec.wgrid);
    let mw = z2.samples;
    let mut vals = spec.values();
    vals.par_chunks_mut(mw).enumerate().for_each(|(i, row)| {
        let a = z1.point(i);
        for (k, v) in row.iter_mut().enumerate() {
            *v *= C64::from_polar(1.0, sign * std::f64::consts::PI * a * z2.point(k));
        }
    });
    let phased = SampledSymbol {
        xgrid: z1,
        wgrid: z2,
        repr: SymbolRepr::Dense(vals),
    };
    dft2(&phased, true)
}

/// `σ∘χ` with `χ(x,ω) = (ω,-x)`, so that `F⁻¹ L_σ F = L_{σ∘χ}`.
pub fn fourier_conjugate_symbol(sigma: &SampledSymbol) -> Result<SampledSymbol> {
    if !sigma.xgrid.same_as(&sigma.wgrid) {
        return Err(TfError::NonSquareGrid(format!(
            "x-grid ({}) and ω-grid ({}) must coincide",
            sigma.xgrid, sigma.wgrid
        )));
    }
    let m = sigma.xgrid.samples;
    let refl = |v: &Vec<C64>| (0..m).map(|i| v[(m - i) % m]).collect::<Vec<_>>();
    let repr = match &sigma.repr {
        SymbolRepr::Separable(terms) => {
            SymbolRepr::Separable(terms.iter().map(|(u, v)| (refl(v), u.clone())).collect())
        }
        SymbolRepr::Dense(vals) => {
            let mut out = vec![ZERO; m * m];
            for i in 0..m {
                for k in 0..m {
                    out[i * m + k] = vals[k * m + (m - i) % m];
                }
            }
            SymbolRepr::Dense(out)
        }
    };
    Ok(SampledSymbol { repr, ..*sigma })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tfa::cross_wigner;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn grid() -> GridSpec {
        GridSpec::new(16.0, 256).unwrap()
    }

    fn smooth_fn(grid: GridSpec, seed: u64) -> SampledFunction {
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

    fn smooth_symbol(grid: GridSpec, seed: u64) -> SampledSymbol {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let terms: Vec<[f64; 4]> = (0..3)
            .map(|_| [0; 4].map(|_| rng.gen_range(-1.5..1.5)))
            .collect();
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

    fn rel_err(a: &SampledFunction, b: &SampledFunction) -> f64 {
        let d = a.add(&b.scale(C64::new(-1.0, 0.0))).unwrap();
        d.l2_norm() / b.l2_norm()
    }

    #[test]
    fn identity_symbols() {
        let g = grid();
        let f = smooth_fn(g, 1);
        let one = SampledSymbol::from_fn(g, g.dual(), |_, _| C64::new(1.0, 0.0));
        assert!(rel_err(&kn_apply(&one, &f).unwrap(), &f) < 1e-10);
        assert!(rel_err(&weyl_apply(&one, &f).unwrap(), &f) < 1e-10);
        let k = kn_kernel(&one).unwrap();
        for i in 0..g.samples {
            for j in 0..g.samples {
                let expected = if i == j { 1.0 / g.step() } else { 0.0 };
                assert!((k.value(i, j) - expected).norm() < 1e-9);
            }
        }
        let sigma = kernel_to_weyl(&k).unwrap();
        assert!(sigma.max_abs_diff(&one) < 1e-12);
    }

    #[test]
    fn pure_multiplier_is_translation() {
        let g = grid();
        let f = smooth_fn(g, 2);
        let y0 = 0.75;
        let a = SampledSymbol::from_fn(g, g.dual(), |_, w| C64::from_polar(1.0, -2.0 * PI * y0 * w));
        let out = kn_apply(&a, &f).unwrap();
        assert!(rel_err(&out, &f.translate(y0).unwrap()) < 1e-10);
    }

    #[test]
    fn multiplication_symbol() {
        let g = grid();
        let f = smooth_fn(g, 3);
        let s1 = |x: f64| C64::new((-PI * x * x / 4.0).exp(), 0.3 * (x / 2.0).sin());
        let sigma = SampledSymbol::from_fn(g, g.dual(), |x, _| s1(x));
        let expected = SampledFunction::from_fn(g, s1).mul(&f).unwrap();
        assert!(rel_err(&weyl_apply(&sigma, &f).unwrap(), &expected) < 1e-9);
    }

    #[test]
    fn kn_paths_agree() {
        let g = grid();
        for seed in 0..3 {
            let a = smooth_symbol(g, seed);
            let f = smooth_fn(g, seed + 10);
            let fast = kn_apply(&a, &f).unwrap();
            let kernel = kernel_apply(&kn_kernel(&a).unwrap(), &f).unwrap();
            assert!(rel_err(&fast, &kernel) < 1e-9);
        }
        // random (non-smooth) symbol too
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = GridSpec::new(8.0, 64).unwrap();
        let vals = (0..64 * 64)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let a = SampledSymbol::dense(g, g.dual(), vals).unwrap();
        let f = smooth_fn(g, 5);
        let fast = kn_apply(&a, &f).unwrap();
        let kernel = kernel_apply(&kn_kernel(&a).unwrap(), &f).unwrap();
        assert!(rel_err(&fast, &kernel) < 1e-9);
    }

    #[test]
    fn separable_kn_matches_dense() {
        let g = grid();
        let u = smooth_fn(g, 6);
        let v = smooth_fn(g.dual(), 7);
        let f = smooth_fn(g, 8);
        let sep = SampledSymbol::tensor(&u, &v);
        let a = kn_apply(&sep, &f).unwrap();
        let b = kn_apply(&sep.to_dense(), &f).unwrap();
        assert!(rel_err(&a, &b) < 1e-10);
        // a₁ · F⁻¹(a₂ f̂)
        let c = u.mul(&v.mul(&f.dft()).unwrap().idft()).unwrap();
        assert!(rel_err(&b, &c) < 1e-10);
    }

    #[test]
    fn kn_kernel_of_tensor() {
        let g = GridSpec::new(8.0, 64).unwrap();
        let u = smooth_fn(g, 1);
        let v = smooth_fn(g.dual(), 2);
        let k = kn_kernel(&SampledSymbol::tensor(&u, &v)).unwrap();
        let vc = v.idft();
        for i in 0..64 {
            for j in 0..64 {
                let t = (i + 64 + 32 - j) % 64;
                assert!((k.value(i, j) - u.values[i] * vc.values[t]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn weyl_paths_agree() {
        let g = grid();
        let sigma = smooth_symbol(g, 11);
        let f = smooth_fn(g, 12);
        let direct = weyl_apply(&sigma, &f).unwrap();
        let kernel = kernel_apply(&weyl_kernel(&sigma).unwrap(), &f).unwrap();
        assert!(rel_err(&direct, &kernel) < 1e-12);
        let u = smooth_fn(g, 13);
        let v = smooth_fn(g.dual(), 14);
        let sep = SampledSymbol::tensor(&u, &v);
        let a = weyl_apply(&sep, &f).unwrap();
        let b = weyl_apply(&sep.to_dense(), &f).unwrap();
        assert!(rel_err(&a, &b) < 1e-10);
    }

    #[test]
    fn weyl_direct_quadrature_matches() {
        let g = GridSpec::new(8.0, 64).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let vals: Vec<C64> = (0..64 * 64)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let sigma = SampledSymbol::dense(g, g.dual(), vals).unwrap();
        let f = smooth_fn(g, 22);
        let a = weyl_apply(&sigma, &f).unwrap();
        let b = weyl_apply_direct(&sigma, &f).unwrap();
        assert!(rel_err(&a, &b) < 1e-10);

        let sep = SampledSymbol::tensor(&smooth_fn(g, 23), &smooth_fn(g.dual(), 24));
        let a = weyl_apply(&sep, &f).unwrap();
        let b = weyl_apply_direct(&sep, &f).unwrap();
        assert!(rel_err(&a, &b) < 1e-10);
    }

    #[test]
    fn kernel_round_trips() {
        let g = GridSpec::new(8.0, 64).unwrap();
        let sigma = smooth_symbol(g, 3);
        let back = kernel_to_weyl(&weyl_kernel(&sigma).unwrap()).unwrap();
        assert!(back.max_abs_diff(&sigma) < 1e-9 * sigma.max_abs());

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let vals: Vec<C64> = (0..64 * 64)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let k = SampledSymbol::dense(g, g, vals).unwrap();
        let sigma = kernel_to_weyl(&k).unwrap();
        let f = smooth_fn(g, 6);
        let h = smooth_fn(g, 7);
        let lhs = kernel_apply(&k, &f).unwrap().inner(&h).unwrap();
        let rhs = weyl_apply(&sigma, &f).unwrap().inner(&h).unwrap();
        assert!((lhs - rhs).norm() / lhs.norm() < 1e-8);
    }

    #[test]
    fn weyl_matches_wigner_pairing() {
        let g = grid();
        for seed in 0..3 {
            let sigma = smooth_symbol(g, 20 + seed);
            let f = smooth_fn(g, 30 + seed);
            let h = smooth_fn(g, 40 + seed);
            let lhs = weyl_apply(&sigma, &f).unwrap().inner(&h).unwrap();
            let rhs = sigma.inner(&cross_wigner(&h, &f).unwrap()).unwrap();
            assert!((lhs - rhs).norm() / lhs.norm() < 1e-8, "{lhs} {rhs}");
        }
    }

    #[test]
    fn u_transform_relates_quantizations() {
        let g = grid();
        let sigma = smooth_symbol(g, 50);
        let back = u_transform(&u_transform(&sigma, false), true);
        assert!(back.max_abs_diff(&sigma) < 1e-10);
        let a = smooth_symbol(g, 51);
        let f = smooth_fn(g, 52);
        let kn = kn_apply(&a, &f).unwrap();
        let weyl = weyl_apply(&u_transform(&a, true), &f).unwrap();
        assert!(rel_err(&weyl, &kn) < 1e-8, "{}", rel_err(&weyl, &kn));

        let mut delta = SampledSymbol::from_fn(g, g.dual(), |_, _| ZERO).values();
        delta[128 * 256 + 128] = C64::new(1.0, 0.0);
        let delta = SampledSymbol::dense(g, g.dual(), delta).unwrap();
        let ud = u_transform(&delta, false);
        assert!((ud.l2_norm() - delta.l2_norm()).abs() < 1e-10 * delta.l2_norm());
    }

    #[test]
    fn adjoint() {
        let g = grid();
        let sigma = smooth_symbol(g, 60);
        let f = smooth_fn(g, 61);
        let h = smooth_fn(g, 62);
        let lhs = weyl_apply(&sigma, &f).unwrap().inner(&h).unwrap();
        let rhs = f.inner(&weyl_apply(&sigma.conj(), &h).unwrap()).unwrap();
        assert!((lhs - rhs).norm() / lhs.norm() < 1e-9);
    }

    #[test]
    fn fourier_conjugation() {
        let g = grid();
        let sigma = smooth_symbol(g, 70);
        let mut s = sigma.clone();
        for _ in 0..4 {
            s = fourier_conjugate_symbol(&s).unwrap();
        }
        assert_eq!(s, sigma);
        let f = smooth_fn(g, 71);
        let lhs = weyl_apply(&sigma, &f.dft()).unwrap().idft();
        let rhs = weyl_apply(&fourier_conjugate_symbol(&sigma).unwrap(), &f).unwrap();
        assert!(rel_err(&lhs, &rhs) < 1e-8, "{}", rel_err(&lhs, &rhs));
        let radial = SampledSymbol::from_fn(g, g, |x, w| C64::new((-PI * (x * x + w * w)).exp(), 0.0));
        assert!(fourier_conjugate_symbol(&radial).unwrap().max_abs_diff(&radial) < 1e-15);
        let u = smooth_fn(g, 72);
        let v = smooth_fn(g, 73);
        let sep = SampledSymbol::tensor(&u, &v);
        let a = fourier_conjugate_symbol(&sep).unwrap();
        let b = fourier_conjugate_symbol(&sep.to_dense()).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-15);
        let rect = SampledSymbol::from_fn(g, GridSpec::new(8.0, 256).unwrap(), |_, _| ZERO);
        assert!(matches!(fourier_conjugate_symbol(&rect), Err(TfError::NonSquareGrid(_))));
    }

    #[test]
    fn grid_mismatch_is_reported() {
        let g = grid();
        let a = smooth_symbol(GridSpec::new(8.0, 256).unwrap(), 1);
        let f = smooth_fn(g, 2);
        assert!(matches!(kn_apply(&a, &f), Err(TfError::GridMismatch(_))));
        assert!(matches!(weyl_apply(&a, &f), Err(TfError::GridMismatch(_))));
    }
}
