//! Lebesgue, mixed, amalgam, Fourier-Lebesgue and modulation norms of sampled
//! functions and symbols.
//!
//! All integrals are Riemann sums with the grid (or lattice) cell as weight.
//! `p = ∞` is always an exact maximum.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Result, TfError};
use crate::exponent::Exponent;
use crate::grid::{GridSpec, SampledFunction, SampledSymbol, SymbolRepr, C64};
use crate::tfa::{self, Lattice};

/// A computed norm together with the grid it was computed on.
#[derive(Debug, Clone, PartialEq)]
pub struct NormValue {
    pub value: f64,
    pub note: String,
}

impl NormValue {
    fn new(value: f64, note: impl Into<String>) -> Self {
        NormValue {
            value,
            note: note.into(),
        }
    }
}

impl fmt::Display for NormValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.12e} ({})", self.value, self.note)
    }
}

/// `(Σ |v|^p w)^{1/p}`, or `max |v|` for `p = ∞`.
pub fn weighted_lp(abs: impl IntoIterator<Item = f64>, p: Exponent, weight: f64) -> f64 {
    if p.is_infinite() {
        return abs.into_iter().fold(0.0, f64::max);
    }
    let pv = p.value();
    if pv == 1.0 {
        return abs.into_iter().sum::<f64>() * weight;
    }
    if pv == 2.0 {
        return (abs.into_iter().map(|a| a * a).sum::<f64>() * weight).sqrt();
    }
    (abs.into_iter().map(|a| a.powf(pv)).sum::<f64>() * weight).powf(1.0 / pv)
}

/// Same reduction applied to values that already are local norms
/// (used for the outer stage of mixed norms).
fn outer(norms: &[f64], q: Exponent, weight: f64) -> f64 {
    weighted_lp(norms.iter().copied(), q, weight)
}

pub fn lp_norm(f: &SampledFunction, p: Exponent) -> NormValue {
    NormValue::new(
        weighted_lp(f.values.iter().map(|v| v.norm()), p, f.step()),
        format!("L^{p} on {}", f.grid),
    )
}

/// Order of integration in a mixed norm on phase space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MixedOrder {
    /// `L^{p,q}`: `L^p` in `x` first, then `L^q` in `ω`.
    InnerXOuterOmega,
    /// `L^p L^q`: `L^q` in `ω` first, then `L^p` in `x`.
    InnerOmegaOuterX,
}

/// Mixed norm of a sampled symbol.
///
/// For `InnerXOuterOmega` this is `(∫ (∫ |F|^p dx)^{q/p} dω)^{1/q}`; for
/// `InnerOmegaOuterX` it is `(∫ (∫ |F|^q dω)^{p/q} dx)^{1/p}`.
pub fn mixed_norm(a: &SampledSymbol, p: Exponent, q: Exponent, order: MixedOrder) -> NormValue {
    let (mx, mw) = a.shape();
    let vals = a.values();
    let (dx, dw) = (a.xgrid.step(), a.wgrid.step());
    let value = match order {
        MixedOrder::InnerXOuterOmega => {
            let cols: Vec<f64> = (0..mw)
                .map(|k| weighted_lp((0..mx).map(|i| vals[i * mw + k].norm()), p, dx))
                .collect();
            outer(&cols, q, dw)
        }
        MixedOrder::InnerOmegaOuterX => {
            let rows: Vec<f64> = vals
                .chunks(mw)
                .map(|r| weighted_lp(r.iter().map(|v| v.norm()), q, dw))
                .collect();
            outer(&rows, p, dx)
        }
    };
    let tag = match order {
        MixedOrder::InnerXOuterOmega => format!("L^{{{p},{q}}}"),
        MixedOrder::InnerOmegaOuterX => format!("L^{p}L^{q}"),
    };
    NormValue::new(value, format!("{tag} on x:{} w:{}", a.xgrid, a.wgrid))
}

/// Samples per unit length, if the grid resolves unit cubes aligned with `x = 0`.
fn unit_blocks(grid: GridSpec) -> Result<usize> {
    let b = 1.0 / grid.step();
    let br = b.round();
    if br < 1.0 || (b - br).abs() > 1e-9 * b {
        return Err(TfError::Misaligned(format!(
            "step {} does not divide 1",
            grid.step()
        )));
    }
    let b = br as usize;
    if (grid.samples / 2) % b != 0 {
        return Err(TfError::Misaligned(format!(
            "unit blocks of {b} samples do not tile M/2 = {}",
            grid.samples / 2
        )));
    }
    Ok(b)
}

/// `W(L^p, L^q)`: local `L^p` norms on the unit cubes `[n, n+1)`, then `ℓ^q` over `n`.
pub fn amalgam_norm(f: &SampledFunction, p: Exponent, q: Exponent) -> Result<NormValue> {
    let b = unit_blocks(f.grid)?;
    let local: Vec<f64> = f
        .values
        .chunks(b)
        .map(|blk| weighted_lp(blk.iter().map(|v| v.norm()), p, f.step()))
        .collect();
    Ok(NormValue::new(
        outer(&local, q, 1.0),
        format!("W(L^{p},L^{q}) on {}", f.grid),
    ))
}

/// `‖f‖_{FL^p} = ‖h‖_p` with `ĥ = f`.
pub fn flp_norm(f: &SampledFunction, p: Exponent) -> NormValue {
    let h = f.idft();
    NormValue::new(
        lp_norm(&h, p).value,
        format!("FL^{p} on {}", f.grid),
    )
}

/// The default amalgam window: `(1 + cos πx)/2` on `[-1, 1]`, `L^2`-normalized.
///
/// Its integer translates sum to one.
pub fn bump_window(grid: GridSpec) -> SampledFunction {
    let c = (4.0f64 / 3.0).sqrt();
    SampledFunction::from_real_fn(grid, |x| c * raised_cosine(x))
}

/// `(1 + cos πx)/2` on `[-1, 1]`, zero outside.
pub fn raised_cosine(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        0.0
    } else {
        0.5 * (1.0 + (std::f64::consts::PI * x).cos())
    }
}

/// The default modulation window: the `L^2`-normalized Gaussian.
pub fn gaussian_window(grid: GridSpec) -> SampledFunction {
    crate::grid::gaussian(grid)
}

/// Window with an exactly band-limited spectrum: `ĝ` is the triangle on
/// `[-1/2, 1/2]` (a Fejér kernel), `L^2`-normalized.
pub fn bandlimited_window(grid: GridSpec) -> SampledFunction {
    let dual = grid.dual();
    let tri = SampledFunction::from_real_fn(dual, |w| (1.0 - 2.0 * w.abs()).max(0.0));
    let g = tri.idft();
    let n = g.l2_norm();
    g.scale(C64::new(1.0 / n, 0.0))
}

fn check_window(g: &SampledFunction, grid: GridSpec) -> Result<()> {
    g.grid.ensure_same(&grid, "window")?;
    let n = g.l2_norm();
    if n == 0.0 {
        return Err(TfError::Window("window is zero".into()));
    }
    if (n - 1.0).abs() > 1e-6 {
        return Err(TfError::Window(format!("window is not L2-normalized (norm {n})")));
    }
    Ok(())
}

/// Width of the smallest centered interval containing the support of `g`.
fn support_width(g: &SampledFunction) -> f64 {
    let peak = g.max_abs();
    let r = g
        .grid
        .points()
        .zip(&g.values)
        .filter(|(_, v)| v.norm() > 1e-14 * peak)
        .map(|(x, _)| x.abs())
        .fold(0.0, f64::max);
    2.0 * r
}

/// `W(FL^p, L^q)` with window `g` (default [`bump_window`]): the
/// `FL^p` norms of `f · T_n conj(g)` over the integer lattice, then `ℓ^q`.
pub fn amalgam_flp_norm(
    f: &SampledFunction,
    p: Exponent,
    q: Exponent,
    g: Option<&SampledFunction>,
) -> Result<NormValue> {
    let default;
    let g = match g {
        Some(g) => g,
        None => {
            default = bump_window(f.grid);
            &default
        }
    };
    check_window(g, f.grid)?;
    if support_width(g) >= f.grid.period {
        return Err(TfError::Window(format!(
            "window support {} not smaller than period {}",
            support_width(g),
            f.grid.period
        )));
    }
    let b = unit_blocks(f.grid)?;
    let m = f.grid.samples;
    let gc = g.conj();
    let local: Vec<f64> = (0..m / b)
        .into_par_iter()
        .map(|n| {
            let shift = (n * b) as isize - (m / 2) as isize;
            let prod = f.mul(&gc.shift_by(shift)).expect("same grid");
            flp_norm(&prod, p).value
        })
        .collect();
    Ok(NormValue::new(
        outer(&local, q, 1.0),
        format!("W(FL^{p},L^{q}) on {}", f.grid),
    ))
}

/// `M^{p,q}`: the `L^{p,q}` norm (inner `x`, outer `ω`) of `V_g f` on the
/// default STFT lattice, window `g` defaulting to the Gaussian.
pub fn modulation_norm(
    f: &SampledFunction,
    p: Exponent,
    q: Exponent,
    g: Option<&SampledFunction>,
) -> Result<NormValue> {
    modulation_norm_with(f, p, q, g, Lattice::for_grid(f.grid, 2))
}

pub fn modulation_norm_with(
    f: &SampledFunction,
    p: Exponent,
    q: Exponent,
    g: Option<&SampledFunction>,
    lattice: Lattice,
) -> Result<NormValue> {
    let default;
    let g = match g {
        Some(g) => g,
        None => {
            default = gaussian_window(f.grid);
            &default
        }
    };
    check_window(g, f.grid)?;
    let v = tfa::stft_on(f, g, lattice)?;
    let (nx, nw) = (v.nx(), v.nw());
    let cols: Vec<f64> = (0..nw)
        .map(|k| weighted_lp((0..nx).map(|n| v.values[n * nw + k].norm()), p, v.xstep()))
        .collect();
    Ok(NormValue::new(
        outer(&cols, q, v.wstep()),
        format!(
            "M^{{{p},{q}}} on {} lattice {}x{}",
            f.grid,
            v.xstep(),
            v.wstep()
        ),
    ))
}

/// Choice of one-dimensional window for phase-space (symbol) norms; the
/// two-dimensional window is the tensor square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum WindowKind {
    #[default]
    Gaussian,
    /// Exactly band-limited (see [`bandlimited_window`]).
    BandLimited,
    /// Compactly supported raised cosine (see [`bump_window`]).
    Bump,
}

impl WindowKind {
    pub fn build(self, grid: GridSpec) -> SampledFunction {
        match self {
            WindowKind::Gaussian => gaussian_window(grid),
            WindowKind::BandLimited => bandlimited_window(grid),
            WindowKind::Bump => bump_window(grid),
        }
    }
}

/// One factor of a separable symbol after a one-dimensional STFT, stored
/// as `outer × inner`. Rows that vanish to rounding are dropped.
struct Factor {
    rows: Vec<Option<Vec<C64>>>,
    inner: usize,
    inner_w: f64,
    outer_w: f64,
}

const ROW_TOL: f64 = 1e-13;

impl Factor {
    fn build(outer: usize, inner: usize, at: impl Fn(usize, usize) -> C64, inner_w: f64, outer_w: f64) -> Factor {
        let rows: Vec<Vec<C64>> = (0..outer).map(|o| (0..inner).map(|i| at(o, i)).collect()).collect();
        let peak = rows.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
        let rows = rows
            .into_iter()
            .map(|r| {
                let m = r.iter().map(|v| v.norm()).fold(0.0, f64::max);
                (m > ROW_TOL * peak).then_some(r)
            })
            .collect();
        Factor {
            rows,
            inner,
            inner_w,
            outer_w,
        }
    }

    fn outer(&self) -> usize {
        self.rows.len()
    }
}

/// Outer index = frequency, inner = position (modulation-type norms).
fn factor_modulation(values: &[C64], grid: GridSpec, g: &SampledFunction, lattice: Lattice) -> Result<Factor> {
    let f = SampledFunction::new(grid, values.to_vec())?;
    let v = tfa::stft_on(&f, g, lattice)?;
    let (nx, nw) = (v.nx(), v.nw());
    Ok(Factor::build(nw, nx, |k, n| v.values[n * nw + k], v.xstep(), v.wstep()))
}

/// Outer index = integer position, inner = every frequency (amalgam-type norms).
fn factor_amalgam(values: &[C64], grid: GridSpec, g: &SampledFunction) -> Result<Factor> {
    let b = unit_blocks(grid)?;
    let f = SampledFunction::new(grid, values.to_vec())?;
    let v = tfa::stft_on(&f, g, Lattice { xstride: b, wstride: 1 })?;
    let nw = v.nw();
    Ok(Factor::build(v.nx(), nw, |n, k| v.values[n * nw + k], grid.freq_step(), 1.0))
}

/// `‖ ‖Σ_n A_n(o₁, ·) ⊗ B_n(o₂, ·)‖_{L^p(inner)} ‖_{L^q(outer)}` for a separable sum.
///
/// When a single term is active on an outer cell the inner norm factorizes;
/// otherwise the inner sum is evaluated directly.
fn separable_mixed(a: &[Factor], b: &[Factor], p: Exponent, q: Exponent) -> f64 {
    let terms = a.len();
    let (oa, ob) = (a[0].outer(), b[0].outer());
    let norms = |fs: &[Factor]| -> Vec<Vec<f64>> {
        fs.iter()
            .map(|f| {
                f.rows
                    .iter()
                    .map(|r| r.as_ref().map_or(0.0, |r| weighted_lp(r.iter().map(|v| v.norm()), p, f.inner_w)))
                    .collect()
            })
            .collect()
    };
    let (alp, blp) = (norms(a), norms(b));
    let inner_w = a[0].inner_w * b[0].inner_w;
    let local: Vec<f64> = (0..oa)
        .into_par_iter()
        .flat_map_iter(|i| {
            let active_a: Vec<usize> = (0..terms).filter(|&n| a[n].rows[i].is_some()).collect();
            let (alp, blp) = (&alp, &blp);
            (0..ob).map(move |j| {
                let active: Vec<usize> = active_a.iter().copied().filter(|&n| b[n].rows[j].is_some()).collect();
                match active.len() {
                    0 => 0.0,
                    1 => {
                        let n = active[0];
                        alp[n][i] * blp[n][j]
                    }
                    _ => {
                        let rows: Vec<(&[C64], &[C64])> = active
                            .iter()
                            .map(|&n| (a[n].rows[i].as_deref().unwrap_or(&[]), b[n].rows[j].as_deref().unwrap_or(&[])))
                            .collect();
                        let (ni, nj) = (a[0].inner, b[0].inner);
                        let vals = (0..ni).flat_map(|x| {
                            let rows = &rows;
                            (0..nj).map(move |y| rows.iter().map(|(ra, rb)| ra[x] * rb[y]).sum::<C64>().norm())
                        });
                        weighted_lp(vals, p, inner_w)
                    }
                }
            })
        })
        .collect();
    outer(&local, q, a[0].outer_w * b[0].outer_w)
}

/// Precomputed one-dimensional STFT factors of a separable symbol, so the
/// same symbol can be measured in several exponent pairs.
pub struct SymbolNormPlan {
    a: Vec<Factor>,
    b: Vec<Factor>,
    amalgam: bool,
    window: WindowKind,
}

impl SymbolNormPlan {
    /// Factors for `M^{p,q}` norms.
    pub fn modulation(a: &SampledSymbol, window: WindowKind) -> Result<Self> {
        let terms = separable_terms(a)
            .ok_or_else(|| TfError::Domain("norm plans need a separable symbol".into()))?;
        let gx = window.build(a.xgrid);
        let gw = window.build(a.wgrid);
        let lx = Lattice::for_grid(a.xgrid, 2);
        let lw = Lattice::for_grid(a.wgrid, 2);
        let fa = terms
            .par_iter()
            .map(|(u, _)| factor_modulation(u, a.xgrid, &gx, lx))
            .collect::<Result<_>>()?;
        let fb = terms
            .par_iter()
            .map(|(_, v)| factor_modulation(v, a.wgrid, &gw, lw))
            .collect::<Result<_>>()?;
        Ok(SymbolNormPlan {
            a: fa,
            b: fb,
            amalgam: false,
            window,
        })
    }

    /// Factors for `W(FL^p, L^q)` norms.
    pub fn amalgam_flp(a: &SampledSymbol, window: WindowKind) -> Result<Self> {
        let terms = separable_terms(a)
            .ok_or_else(|| TfError::Domain("norm plans need a separable symbol".into()))?;
        let gx = window.build(a.xgrid);
        let gw = window.build(a.wgrid);
        for g in [&gx, &gw] {
            if support_width(g) >= g.grid.period {
                return Err(TfError::Window("window support not smaller than period".into()));
            }
        }
        let fa = terms
            .par_iter()
            .map(|(u, _)| factor_amalgam(u, a.xgrid, &gx))
            .collect::<Result<_>>()?;
        let fb = terms
            .par_iter()
            .map(|(_, v)| factor_amalgam(v, a.wgrid, &gw))
            .collect::<Result<_>>()?;
        Ok(SymbolNormPlan {
            a: fa,
            b: fb,
            amalgam: true,
            window,
        })
    }

    pub fn eval(&self, p: Exponent, q: Exponent) -> f64 {
        separable_mixed(&self.a, &self.b, p, q)
    }

    pub fn is_amalgam(&self) -> bool {
        self.amalgam
    }

    pub fn window(&self) -> WindowKind {
        self.window
    }
}

fn separable_terms(a: &SampledSymbol) -> Option<&Vec<(Vec<C64>, Vec<C64>)>> {
    match &a.repr {
        SymbolRepr::Separable(t) => Some(t),
        SymbolRepr::Dense(_) => None,
    }
}

/// Largest dense symbol (samples per axis) accepted by the direct
/// four-dimensional norm evaluations.
pub const DENSE_SYMBOL_LIMIT: usize = 128;

fn dense_guard(a: &SampledSymbol) -> Result<()> {
    let (mx, mw) = a.shape();
    if mx.max(mw) > DENSE_SYMBOL_LIMIT {
        return Err(TfError::Resolution(format!(
            "dense symbol {mx}x{mw} too large for a direct phase-space norm; use a separable representation"
        )));
    }
    Ok(())
}

/// Two-dimensional STFT of a dense symbol at one lattice point, full frequency resolution.
fn dense_local_spectrum(
    vals: &[C64],
    a: &SampledSymbol,
    gx: &[C64],
    gw: &[C64],
    sx: isize,
    sw: isize,
) -> Vec<C64> {
    let (mx, mw) = a.shape();
    let mut buf = vec![C64::new(0.0, 0.0); mx * mw];
    for i in 0..mx {
        let wx = gx[(i as isize - sx).rem_euclid(mx as isize) as usize].conj();
        for k in 0..mw {
            let ww = gw[(k as isize - sw).rem_euclid(mw as isize) as usize].conj();
            buf[i * mw + k] = vals[i * mw + k] * wx * ww;
        }
    }
    for row in buf.chunks_mut(mw) {
        crate::fft::centered_in_place(row, a.wgrid.step(), false);
    }
    let mut col = vec![C64::new(0.0, 0.0); mx];
    for k in 0..mw {
        for i in 0..mx {
            col[i] = buf[i * mw + k];
        }
        crate::fft::centered_in_place(&mut col, a.xgrid.step(), false);
        for i in 0..mx {
            buf[i * mw + k] = col[i];
        }
    }
    buf
}

/// `M^{p,q}` norm of a symbol with window `φ ⊗ φ`: inner `L^p` over
/// `(x, ω)`, outer `L^q` over the dual variables.
pub fn symbol_modulation_norm(
    a: &SampledSymbol,
    p: Exponent,
    q: Exponent,
    window: WindowKind,
) -> Result<NormValue> {
    let gx = window.build(a.xgrid);
    let gw = window.build(a.wgrid);
    let lx = Lattice::for_grid(a.xgrid, 2);
    let lw = Lattice::for_grid(a.wgrid, 2);
    let value = match separable_terms(a) {
        Some(_) => SymbolNormPlan::modulation(a, window)?.eval(p, q),
        None => {
            dense_guard(a)?;
            let vals = a.values();
            let (mx, mw) = a.shape();
            let (nx, nw) = (mx / lx.xstride, mw / lw.xstride);
            let (fx, fw) = (mx / lx.wstride, mw / lw.wstride);
            // spectra[(n, m)] holds the subsampled 2D spectrum at lattice point (n, m)
            let spectra: Vec<Vec<C64>> = (0..nx * nw)
                .into_par_iter()
                .map(|c| {
                    let (n, m) = (c / nw, c % nw);
                    let sx = (n * lx.xstride) as isize - (mx / 2) as isize;
                    let sw = (m * lw.xstride) as isize - (mw / 2) as isize;
                    let full = dense_local_spectrum(&vals, a, &gx.values, &gw.values, sx, sw);
                    let mut out = Vec::with_capacity(fx * fw);
                    for i in 0..fx {
                        for k in 0..fw {
                            out.push(full[i * lx.wstride * mw + k * lw.wstride]);
                        }
                    }
                    out
                })
                .collect();
            let inner_w = a.xgrid.step() * lx.xstride as f64 * a.wgrid.step() * lw.xstride as f64;
            let outer_w = a.xgrid.freq_step() * lx.wstride as f64 * a.wgrid.freq_step() * lw.wstride as f64;
            let local: Vec<f64> = (0..fx * fw)
                .map(|o| weighted_lp(spectra.iter().map(|s| s[o].norm()), p, inner_w))
                .collect();
            outer(&local, q, outer_w)
        }
    };
    Ok(NormValue::new(
        value,
        format!("M^{{{p},{q}}} symbol norm on x:{} w:{} ({window:?} window)", a.xgrid, a.wgrid),
    ))
}

/// `W(FL^p, L^q)` norm of a symbol with window `φ ⊗ φ` on the integer lattice.
pub fn symbol_amalgam_flp_norm(
    a: &SampledSymbol,
    p: Exponent,
    q: Exponent,
    window: WindowKind,
) -> Result<NormValue> {
    let gx = window.build(a.xgrid);
    let gw = window.build(a.wgrid);
    for g in [&gx, &gw] {
        if support_width(g) >= g.grid.period {
            return Err(TfError::Window("window support not smaller than period".into()));
        }
    }
    let value = match separable_terms(a) {
        Some(_) => SymbolNormPlan::amalgam_flp(a, window)?.eval(p, q),
        None => {
            dense_guard(a)?;
            let bx = unit_blocks(a.xgrid)?;
            let bw = unit_blocks(a.wgrid)?;
            let vals = a.values();
            let (mx, mw) = a.shape();
            let (nx, nw) = (mx / bx, mw / bw);
            let inner_w = a.xgrid.freq_step() * a.wgrid.freq_step();
            let local: Vec<f64> = (0..nx * nw)
                .into_par_iter()
                .map(|c| {
                    let (n, m) = (c / nw, c % nw);
                    let sx = (n * bx) as isize - (mx / 2) as isize;
                    let sw = (m * bw) as isize - (mw / 2) as isize;
                    let full = dense_local_spectrum(&vals, a, &gx.values, &gw.values, sx, sw);
                    weighted_lp(full.iter().map(|v| v.norm()), p, inner_w)
                })
                .collect();
            outer(&local, q, 1.0)
        }
    };
    Ok(NormValue::new(
        value,
        format!("W(FL^{p},L^{q}) symbol norm on x:{} w:{} ({window:?} window)", a.xgrid, a.wgrid),
    ))
}

/// Flattened `L^p` norm of a symbol over phase space.
pub fn symbol_lp_norm(a: &SampledSymbol, p: Exponent) -> NormValue {
    NormValue::new(
        weighted_lp(a.values().iter().map(|v| v.norm()), p, a.cell()),
        format!("L^{p} on x:{} w:{}", a.xgrid, a.wgrid),
    )
}

/// `FL^p` norm of a symbol (two-dimensional transform).
pub fn symbol_flp_norm(a: &SampledSymbol, p: Exponent) -> NormValue {
    let h = crate::grid::dft2(a, true);
    NormValue::new(
        symbol_lp_norm(&h, p).value,
        format!("FL^{p} on x:{} w:{}", a.xgrid, a.wgrid),
    )
}

/// `W(L^p, L^q)` of a symbol over unit squares of phase space.
pub fn symbol_amalgam_norm(a: &SampledSymbol, p: Exponent, q: Exponent) -> Result<NormValue> {
    let bx = unit_blocks(a.xgrid)?;
    let bw = unit_blocks(a.wgrid)?;
    let (mx, mw) = a.shape();
    let vals = a.values();
    let mut local = Vec::with_capacity((mx / bx) * (mw / bw));
    for n in 0..mx / bx {
        for m in 0..mw / bw {
            let block = (n * bx..(n + 1) * bx)
                .flat_map(|i| (m * bw..(m + 1) * bw).map(move |k| (i, k)))
                .map(|(i, k)| vals[i * mw + k].norm());
            local.push(weighted_lp(block, p, a.cell()));
        }
    }
    Ok(NormValue::new(
        outer(&local, q, 1.0),
        format!("W(L^{p},L^{q}) on x:{} w:{}", a.xgrid, a.wgrid),
    ))
}

/// The kinds of norm a [`SpaceSpec`] can describe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceKind {
    Lp,
    MixedLpq,
    LpLq,
    AmalgamLpLq,
    FLp,
    AmalgamFLpLq,
    ModulationMpq,
}

impl FromStr for SpaceKind {
    type Err = TfError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "Lp" => SpaceKind::Lp,
            "Lpq" => SpaceKind::MixedLpq,
            "LpLq" => SpaceKind::LpLq,
            "WLpLq" => SpaceKind::AmalgamLpLq,
            "FLp" => SpaceKind::FLp,
            "WFLpLq" => SpaceKind::AmalgamFLpLq,
            "M" | "Mpq" => SpaceKind::ModulationMpq,
            other => return Err(TfError::Domain(format!("unknown space `{other}`"))),
        })
    }
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SpaceKind::Lp => "Lp",
            SpaceKind::MixedLpq => "Lpq",
            SpaceKind::LpLq => "LpLq",
            SpaceKind::AmalgamLpLq => "WLpLq",
            SpaceKind::FLp => "FLp",
            SpaceKind::AmalgamFLpLq => "WFLpLq",
            SpaceKind::ModulationMpq => "M",
        };
        f.write_str(s)
    }
}

/// A norm: kind, exponents and (for windowed kinds) an optional window.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceSpec {
    pub kind: SpaceKind,
    pub p: Exponent,
    pub q: Exponent,
    /// Window for function norms; defaults per kind when absent.
    pub window: Option<SampledFunction>,
    /// Window family for symbol norms.
    pub symbol_window: WindowKind,
}

impl SpaceSpec {
    pub fn new(kind: SpaceKind, p: Exponent, q: Exponent) -> Self {
        let symbol_window = match kind {
            SpaceKind::AmalgamFLpLq => WindowKind::Bump,
            _ => WindowKind::Gaussian,
        };
        SpaceSpec {
            kind,
            p,
            q,
            window: None,
            symbol_window,
        }
    }

    pub fn lp(p: Exponent) -> Self {
        Self::new(SpaceKind::Lp, p, p)
    }

    pub fn amalgam(p: Exponent, q: Exponent) -> Self {
        Self::new(SpaceKind::AmalgamLpLq, p, q)
    }

    pub fn flp(p: Exponent) -> Self {
        Self::new(SpaceKind::FLp, p, p)
    }

    pub fn amalgam_flp(p: Exponent, q: Exponent) -> Self {
        Self::new(SpaceKind::AmalgamFLpLq, p, q)
    }

    pub fn modulation(p: Exponent, q: Exponent) -> Self {
        Self::new(SpaceKind::ModulationMpq, p, q)
    }

    pub fn with_window(mut self, g: SampledFunction) -> Self {
        self.window = Some(g);
        self
    }

    pub fn with_symbol_window(mut self, w: WindowKind) -> Self {
        self.symbol_window = w;
        self
    }

    /// Norm of a function. Mixed kinds need two variables and are rejected.
    pub fn function_norm(&self, f: &SampledFunction) -> Result<NormValue> {
        match self.kind {
            SpaceKind::Lp => Ok(lp_norm(f, self.p)),
            SpaceKind::FLp => Ok(flp_norm(f, self.p)),
            SpaceKind::AmalgamLpLq => amalgam_norm(f, self.p, self.q),
            SpaceKind::AmalgamFLpLq => amalgam_flp_norm(f, self.p, self.q, self.window.as_ref()),
            SpaceKind::ModulationMpq => modulation_norm(f, self.p, self.q, self.window.as_ref()),
            SpaceKind::MixedLpq | SpaceKind::LpLq => Err(TfError::Domain(format!(
                "{} is a phase-space norm; it needs a symbol",
                self.kind
            ))),
        }
    }

    pub fn symbol_norm(&self, a: &SampledSymbol) -> Result<NormValue> {
        match self.kind {
            SpaceKind::Lp => Ok(symbol_lp_norm(a, self.p)),
            SpaceKind::MixedLpq => Ok(mixed_norm(a, self.p, self.q, MixedOrder::InnerXOuterOmega)),
            SpaceKind::LpLq => Ok(mixed_norm(a, self.p, self.q, MixedOrder::InnerOmegaOuterX)),
            SpaceKind::AmalgamLpLq => symbol_amalgam_norm(a, self.p, self.q),
            SpaceKind::FLp => Ok(symbol_flp_norm(a, self.p)),
            SpaceKind::AmalgamFLpLq => symbol_amalgam_flp_norm(a, self.p, self.q, self.symbol_window),
            SpaceKind::ModulationMpq => symbol_modulation_norm(a, self.p, self.q, self.symbol_window),
        }
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(p={}, q={})", self.kind, self.p, self.q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::exp;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_fn(grid: GridSpec, seed: u64) -> SampledFunction {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..grid.samples)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        SampledFunction::new(grid, values).unwrap()
    }

    fn random_symbol(x: GridSpec, w: GridSpec, seed: u64) -> SampledSymbol {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..x.samples * w.samples)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        SampledSymbol::dense(x, w, values).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn lp_examples() {
        let g = GridSpec::new(8.0, 1024).unwrap();
        let ind = SampledFunction::from_real_fn(g, |x| if (0.0..1.0).contains(&x) { 1.0 } else { 0.0 });
        for p in ["1", "3/2", "2", "5", "inf"] {
            assert!(rel(lp_norm(&ind, exp(p)).value, 1.0) < 1e-12);
        }
        let gauss = gaussian_window(GridSpec::new(16.0, 256).unwrap());
        assert!(rel(lp_norm(&gauss, exp("2")).value, 1.0) < 1e-8);

        let f = random_fn(GridSpec::new(6.0, 96).unwrap(), 2);
        let mut s = 0.0;
        for v in &f.values {
            s += v.norm().powi(3) * f.step();
        }
        assert!(rel(lp_norm(&f, exp("3")).value, s.cbrt()) < 1e-12);
    }

    #[test]
    fn mixed_examples() {
        let unit = GridSpec::new(1.0, 16).unwrap();
        let one = SampledSymbol::from_fn(unit, unit, |_, _| C64::new(1.0, 0.0));
        let v = mixed_norm(&one, exp("2"), exp("2"), MixedOrder::InnerXOuterOmega).value;
        assert!(rel(v, 1.0) < 1e-12);

        let (xg, wg) = (GridSpec::new(4.0, 16).unwrap(), GridSpec::new(3.0, 12).unwrap());
        let a = random_symbol(xg, wg, 5);
        for p in ["1", "2", "3", "inf"] {
            let flat = symbol_lp_norm(&a, exp(p)).value;
            for order in [MixedOrder::InnerXOuterOmega, MixedOrder::InnerOmegaOuterX] {
                assert!(rel(mixed_norm(&a, exp(p), exp(p), order).value, flat) < 1e-10);
            }
        }

        // p = 1, q = ∞ two-stage oracle
        let vals = a.values();
        let mut best: f64 = 0.0;
        for k in 0..12 {
            let mut s = 0.0;
            for i in 0..16 {
                s += vals[i * 12 + k].norm() * xg.step();
            }
            best = best.max(s);
        }
        let got = mixed_norm(&a, exp("1"), exp("inf"), MixedOrder::InnerXOuterOmega).value;
        assert!(rel(got, best) < 1e-12);
        // reversed order: sup over x of ∫|F| dω ... as L^∞_x L^1_ω
        let mut best: f64 = 0.0;
        for i in 0..16 {
            let s: f64 = (0..12).map(|k| vals[i * 12 + k].norm() * wg.step()).sum();
            best = best.max(s);
        }
        let got = mixed_norm(&a, exp("inf"), exp("1"), MixedOrder::InnerOmegaOuterX).value;
        assert!(rel(got, best) < 1e-12);
    }

    #[test]
    fn amalgam_examples() {
        let g = GridSpec::new(8.0, 256).unwrap();
        let ind = SampledFunction::from_real_fn(g, |x| if (0.0..1.0).contains(&x) { 1.0 } else { 0.0 });
        for (p, q) in [("1", "1"), ("2", "inf"), ("inf", "1"), ("3", "3/2")] {
            assert!(rel(amalgam_norm(&ind, exp(p), exp(q)).unwrap().value, 1.0) < 1e-12);
        }
        let f = random_fn(g, 3);
        for p in ["1", "2", "4", "inf"] {
            let a = amalgam_norm(&f, exp(p), exp(p)).unwrap().value;
            assert!(rel(a, lp_norm(&f, exp(p)).value) < 1e-10);
        }
        let bad = GridSpec::new(8.0, 100).unwrap();
        assert!(matches!(
            amalgam_norm(&random_fn(bad, 1), exp("1"), exp("1")),
            Err(TfError::Misaligned(_))
        ));
    }

    #[test]
    fn flp_examples() {
        let g = GridSpec::new(16.0, 256).unwrap();
        let gauss = gaussian_window(g);
        for p in ["1", "2", "inf"] {
            assert!(rel(flp_norm(&gauss, exp(p)).value, lp_norm(&gauss, exp(p)).value) < 1e-9);
        }
        let f = random_fn(GridSpec::new(6.0, 96).unwrap(), 8);
        assert!(rel(flp_norm(&f, exp("2")).value, f.l2_norm()) < 1e-10);
        // oracle: direct inverse sum then ℓ¹
        let dual = f.grid.dual();
        let mut s = 0.0;
        for t in dual.points() {
            let h: C64 = f
                .grid
                .points()
                .zip(&f.values)
                .map(|(w, v)| v * C64::from_polar(1.0, 2.0 * std::f64::consts::PI * w * t))
                .sum::<C64>()
                * f.step();
            s += h.norm() * dual.step();
        }
        assert!(rel(flp_norm(&f, exp("1")).value, s) < 1e-10);
    }

    #[test]
    fn windows() {
        let g = GridSpec::new(16.0, 512).unwrap();
        for w in [bump_window(g), gaussian_window(g), bandlimited_window(g)] {
            assert!(rel(w.l2_norm(), 1.0) < 1e-8);
        }
        // integer translates of the raised cosine sum to one
        let b = bump_window(g);
        let c = (3.0f64 / 4.0).sqrt();
        for j in 0..g.samples {
            let s: f64 = (0..16).map(|n| b.values[(j + n * 32) % 512].re * c).sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
        // band-limited window: spectrum vanishes outside [-1/2, 1/2]
        let bl = bandlimited_window(g).dft();
        for (w, v) in bl.grid.points().zip(&bl.values) {
            if w.abs() >= 0.5 {
                assert!(v.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn delta_amalgam() {
        for m in [256, 512, 1024] {
            let g = GridSpec::new(16.0, m).unwrap();
            let mut delta = SampledFunction::zeros(g);
            delta.values[m / 2] = C64::new(1.0 / g.step(), 0.0);
            let v = amalgam_flp_norm(&delta, Exponent::INF, Exponent::ONE, None).unwrap().value;
            let g1 = lp_norm(&bump_window(g), Exponent::ONE).value;
            assert!((v - g1).abs() < 1e-4, "{v} vs {g1}");
        }
    }

    #[test]
    fn amalgam_flp_matches_modulation_on_unit_lattice() {
        let g = GridSpec::new(16.0, 256).unwrap();
        let w = bump_window(g);
        let a = amalgam_flp_norm(&w, exp("2"), exp("2"), Some(&w)).unwrap().value;
        let lattice = Lattice { xstride: 16, wstride: 1 };
        let m = modulation_norm_with(&w, exp("2"), exp("2"), Some(&w), lattice).unwrap().value;
        assert!(rel(a, m) < 1e-6);
    }

    #[test]
    fn gaussian_in_m22() {
        let g = GridSpec::new(16.0, 256).unwrap();
        let f = gaussian_window(g);
        let v = modulation_norm(&f, exp("2"), exp("2"), None).unwrap().value;
        assert!(rel(v, 1.0) < 1e-6);
    }

    #[test]
    fn window_errors() {
        let g = GridSpec::new(16.0, 256).unwrap();
        let f = gaussian_window(g);
        let unnormalized = f.scale(C64::new(2.0, 0.0));
        assert!(matches!(
            modulation_norm(&f, exp("2"), exp("2"), Some(&unnormalized)),
            Err(TfError::Window(_))
        ));
        let small = GridSpec::new(2.0, 64).unwrap();
        let wide = SampledFunction::from_real_fn(small, |_| 1.0 / 2f64.sqrt());
        assert!(matches!(
            amalgam_flp_norm(&wide, exp("1"), exp("1"), Some(&wide)),
            Err(TfError::Window(_))
        ));
    }

    #[test]
    fn separable_symbol_norm_matches_dense() {
        let g = GridSpec::new(8.0, 64).unwrap();
        let u = gaussian_window(g).modulate(0.5).unwrap();
        let v = SampledFunction::from_real_fn(g, |x| (-std::f64::consts::PI * 2.0 * x * x).exp());
        let sep = SampledSymbol::tensor(&u, &v);
        let dense = sep.to_dense();
        for (p, q) in [("1", "1"), ("2", "2"), ("inf", "1"), ("1", "inf")] {
            let a = symbol_modulation_norm(&sep, exp(p), exp(q), WindowKind::Gaussian).unwrap().value;
            let b = symbol_modulation_norm(&dense, exp(p), exp(q), WindowKind::Gaussian).unwrap().value;
            assert!(rel(a, b) < 1e-10, "{p} {q}: {a} vs {b}");
            let c = modulation_norm(&u, exp(p), exp(q), None).unwrap().value
                * modulation_norm(&v, exp(p), exp(q), None).unwrap().value;
            assert!(rel(a, c) < 1e-10);
            let a = symbol_amalgam_flp_norm(&sep, exp(p), exp(q), WindowKind::Bump).unwrap().value;
            let b = symbol_amalgam_flp_norm(&dense, exp(p), exp(q), WindowKind::Bump).unwrap().value;
            assert!(rel(a, b) < 1e-10, "{p} {q}: {a} vs {b}");
        }
        // two overlapping terms exercise the direct path
        let sum = sep.add(&SampledSymbol::tensor(&v, &u)).unwrap();
        let a = symbol_modulation_norm(&sum, exp("2"), exp("1"), WindowKind::Gaussian).unwrap().value;
        let b = symbol_modulation_norm(&sum.to_dense(), exp("2"), exp("1"), WindowKind::Gaussian).unwrap().value;
        assert!(rel(a, b) < 1e-10, "{a} vs {b}");
    }

    #[test]
    fn space_kind_round_trip() {
        for s in ["Lp", "Lpq", "LpLq", "WLpLq", "FLp", "WFLpLq", "M"] {
            let k: SpaceKind = s.parse().unwrap();
            assert_eq!(k.to_string(), s);
        }
        assert!("Hp".parse::<SpaceKind>().is_err());
    }
}
