//! Uniform periodic grids, sampled functions and symbols, Fourier transforms
//! and time-frequency shifts.
//!
//! Conventions used everywhere in the crate:
//!
//! | object | convention |
//! |---|---|
//! | sample points | `x_j = (j - M/2)·Δx`, `Δx = L/M` |
//! | dual grid | period `M/L`, points `ω_k = (k - M/2)/L` |
//! | forward transform | `f̂(ω) = Σ_x f(x) e^{-2πixω} Δx` |
//! | inverse transform | `f(x) = Σ_ω f̂(ω) e^{2πixω} Δω` |
//! | translation | `(T_y f)(x) = f(x - y)`, periodic |
//! | modulation | `(M_ξ f)(x) = e^{2πiξx} f(x)` |
//! | STFT | `V_g f(x,ω) = Σ_t f(t) conj(g(t-x)) e^{-2πiωt} Δt` |
//!
//! The dual of the dual grid is the original grid, so `idft(dft(f)) = f`
//! exactly (up to rounding).

use num_complex::Complex64;

use crate::error::{Result, TfError};
use crate::fft;

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Geometry of a uniform periodic grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub dim: usize,
    pub period: f64,
    pub samples: usize,
}

impl GridSpec {
    /// One-dimensional grid of `samples` points on a torus of length `period`.
    pub fn new(period: f64, samples: usize) -> Result<Self> {
        Self::with_dim(1, period, samples)
    }

    pub fn with_dim(dim: usize, period: f64, samples: usize) -> Result<Self> {
        if dim != 1 {
            return Err(TfError::UnsupportedDimension(dim));
        }
        if samples < 4 || samples % 2 != 0 {
            return Err(TfError::InvalidGrid(format!(
                "samples must be even and >= 4, got {samples}"
            )));
        }
        if !(period.is_finite() && period > 0.0) {
            return Err(TfError::InvalidGrid(format!("period must be positive, got {period}")));
        }
        Ok(GridSpec {
            dim,
            period,
            samples,
        })
    }

    pub fn step(&self) -> f64 {
        self.period / self.samples as f64
    }

    /// Step of the dual (frequency) grid, `1/L`.
    pub fn freq_step(&self) -> f64 {
        1.0 / self.period
    }

    pub fn nyquist(&self) -> f64 {
        self.samples as f64 / (2.0 * self.period)
    }

    pub fn dual(&self) -> GridSpec {
        GridSpec {
            dim: self.dim,
            period: self.samples as f64 / self.period,
            samples: self.samples,
        }
    }

    pub fn point(&self, j: usize) -> f64 {
        (j as f64 - (self.samples / 2) as f64) * self.step()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.samples).map(move |j| self.point(j))
    }

    /// Number of samples a shift by `y` corresponds to, if `y` is on the lattice.
    pub fn shift_samples(&self, y: f64) -> Result<isize> {
        let s = y / self.step();
        let r = s.round();
        if (s - r).abs() > 1e-9 * s.abs().max(1.0) {
            return Err(TfError::OffGrid {
                value: y,
                step: self.step(),
            });
        }
        Ok(r as isize)
    }

    /// Index of the grid point at `x` (periodically wrapped).
    pub fn index_of(&self, x: f64) -> Result<usize> {
        let s = self.shift_samples(x)?;
        let m = self.samples as isize;
        Ok((s + m / 2).rem_euclid(m) as usize)
    }

    pub fn same_as(&self, other: &GridSpec) -> bool {
        self.dim == other.dim
            && self.samples == other.samples
            && (self.period - other.period).abs() <= 1e-12 * self.period.max(other.period)
    }

    pub fn ensure_same(&self, other: &GridSpec, what: &str) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(TfError::GridMismatch(format!(
                "{what}: (L={}, M={}) vs (L={}, M={})",
                self.period, self.samples, other.period, other.samples
            )))
        }
    }

    /// Grid with the same period and twice the resolution.
    pub fn refined(&self, factor: usize) -> GridSpec {
        GridSpec {
            samples: self.samples * factor,
            ..*self
        }
    }
}

impl std::fmt::Display for GridSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "dim={} period={} samples={}",
            self.dim, self.period, self.samples
        )
    }
}

fn check_finite(values: &[C64]) -> Result<()> {
    match values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
        Some(i) => Err(TfError::NonFinite(i)),
        None => Ok(()),
    }
}

/// Samples of a complex function on a periodic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    pub grid: GridSpec,
    pub values: Vec<C64>,
}

impl SampledFunction {
    pub fn new(grid: GridSpec, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.samples {
            return Err(TfError::LengthMismatch {
                expected: grid.samples,
                got: values.len(),
            });
        }
        check_finite(&values)?;
        Ok(SampledFunction { grid, values })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        SampledFunction {
            grid,
            values: vec![ZERO; grid.samples],
        }
    }

    pub fn from_fn(grid: GridSpec, f: impl Fn(f64) -> C64) -> Self {
        let values = grid.points().map(f).collect();
        SampledFunction { grid, values }
    }

    pub fn from_real_fn(grid: GridSpec, f: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(grid, |x| C64::new(f(x), 0.0))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn step(&self) -> f64 {
        self.grid.step()
    }

    /// Samples of `f̂` on the dual grid.
    pub fn dft(&self) -> SampledFunction {
        SampledFunction {
            grid: self.grid.dual(),
            values: fft::centered(&self.values, self.grid.step(), false),
        }
    }

    /// Treats `self` as samples of a transform and returns the function on the dual grid.
    pub fn idft(&self) -> SampledFunction {
        SampledFunction {
            grid: self.grid.dual(),
            values: fft::centered(&self.values, self.grid.step(), true),
        }
    }

    /// Periodic translation `(T_y f)(x) = f(x - y)`; `y` must be a multiple of the step.
    pub fn translate(&self, y: f64) -> Result<SampledFunction> {
        let s = self.grid.shift_samples(y)?;
        Ok(self.shift_by(s))
    }

    pub(crate) fn shift_by(&self, s: isize) -> SampledFunction {
        let m = self.len() as isize;
        let values = (0..m)
            .map(|j| self.values[(j - s).rem_euclid(m) as usize])
            .collect();
        SampledFunction {
            grid: self.grid,
            values,
        }
    }

    /// Modulation `(M_ξ f)(x) = e^{2πiξx} f(x)`; `ξ` must lie on the dual lattice.
    pub fn modulate(&self, xi: f64) -> Result<SampledFunction> {
        self.grid.dual().shift_samples(xi)?;
        Ok(self.modulate_unchecked(xi))
    }

    pub(crate) fn modulate_unchecked(&self, xi: f64) -> SampledFunction {
        let tau = 2.0 * std::f64::consts::PI;
        let values = self
            .grid
            .points()
            .zip(&self.values)
            .map(|(x, v)| v * C64::from_polar(1.0, tau * xi * x))
            .collect();
        SampledFunction {
            grid: self.grid,
            values,
        }
    }

    pub fn conj(&self) -> SampledFunction {
        self.map(|v| v.conj())
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> SampledFunction {
        SampledFunction {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise map that also sees the sample position.
    pub fn map_indexed(&self, f: impl Fn(f64, C64) -> C64) -> SampledFunction {
        SampledFunction {
            grid: self.grid,
            values: self.grid.points().zip(&self.values).map(|(x, &v)| f(x, v)).collect(),
        }
    }

    pub fn scale(&self, c: C64) -> SampledFunction {
        self.map(|v| v * c)
    }

    pub fn add(&self, other: &SampledFunction) -> Result<SampledFunction> {
        self.grid.ensure_same(&other.grid, "add")?;
        Ok(SampledFunction {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn mul(&self, other: &SampledFunction) -> Result<SampledFunction> {
        self.grid.ensure_same(&other.grid, "mul")?;
        Ok(SampledFunction {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
        })
    }

    /// `⟨f, g⟩ = Σ f conj(g) Δx`.
    pub fn inner(&self, other: &SampledFunction) -> Result<C64> {
        self.grid.ensure_same(&other.grid, "inner product")?;
        let s: C64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b.conj())
            .sum();
        Ok(s * self.step())
    }

    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.step()).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `f^*(x) = f(-x)` (periodic reflection).
    pub fn reflect(&self) -> SampledFunction {
        let m = self.len();
        let values = (0..m).map(|j| self.values[(m - j) % m]).collect();
        SampledFunction {
            grid: self.grid,
            values,
        }
    }

    /// Band-limited interpolation onto a grid with the same period and
    /// `factor` times as many samples.
    pub fn upsample(&self, factor: usize) -> SampledFunction {
        let fine = self.grid.refined(factor);
        let spec = self.dft();
        let m = self.len();
        let mf = fine.samples;
        let mut padded = vec![ZERO; mf];
        let offset = (mf - m) / 2;
        for (k, v) in spec.values.iter().enumerate() {
            if k == 0 && factor > 1 {
                // split the Nyquist bin between ±Nyquist
                padded[offset] += v * 0.5;
                padded[offset + m] += v * 0.5;
            } else {
                padded[offset + k] += v;
            }
        }
        let fine_spec = SampledFunction {
            grid: fine.dual(),
            values: padded,
        };
        fine_spec.idft()
    }

    /// Largest sample magnitude within `margin` of the torus boundary, relative to the peak.
    pub fn boundary_ratio(&self, margin: f64) -> f64 {
        let peak = self.max_abs();
        if peak == 0.0 {
            return 0.0;
        }
        let half = self.grid.period / 2.0;
        self.grid
            .points()
            .zip(&self.values)
            .filter(|(x, _)| x.abs() >= half - margin)
            .map(|(_, v)| v.norm())
            .fold(0.0, f64::max)
            / peak
    }
}

/// Storage for a phase-space symbol.
#[derive(Debug, Clone, PartialEq)]
pub enum SymbolRepr {
    /// Row-major samples, `x` outer and `ω` inner.
    Dense(Vec<C64>),
    /// `Σ_n u_n(x) v_n(ω)` with factors sampled on the x- and ω-grids.
    Separable(Vec<(Vec<C64>, Vec<C64>)>),
}

/// Samples of a symbol `a(x, ω)` on a product grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSymbol {
    pub xgrid: GridSpec,
    pub wgrid: GridSpec,
    pub repr: SymbolRepr,
}

impl SampledSymbol {
    pub fn dense(xgrid: GridSpec, wgrid: GridSpec, values: Vec<C64>) -> Result<Self> {
        if xgrid.dim != wgrid.dim {
            return Err(TfError::GridMismatch("x and ω grids differ in dimension".into()));
        }
        let expected = xgrid.samples * wgrid.samples;
        if values.len() != expected {
            return Err(TfError::LengthMismatch {
                expected,
                got: values.len(),
            });
        }
        check_finite(&values)?;
        Ok(SampledSymbol {
            xgrid,
            wgrid,
            repr: SymbolRepr::Dense(values),
        })
    }

    pub fn from_fn(xgrid: GridSpec, wgrid: GridSpec, f: impl Fn(f64, f64) -> C64) -> Self {
        let mut values = Vec::with_capacity(xgrid.samples * wgrid.samples);
        for x in xgrid.points() {
            for w in wgrid.points() {
                values.push(f(x, w));
            }
        }
        SampledSymbol {
            xgrid,
            wgrid,
            repr: SymbolRepr::Dense(values),
        }
    }

    /// Tensor product `u(x) v(ω)`.
    pub fn tensor(u: &SampledFunction, v: &SampledFunction) -> Self {
        SampledSymbol {
            xgrid: u.grid,
            wgrid: v.grid,
            repr: SymbolRepr::Separable(vec![(u.values.clone(), v.values.clone())]),
        }
    }

    /// `Σ_n u_n ⊗ v_n`; all factors must share grids.
    pub fn separable_sum(terms: &[(SampledFunction, SampledFunction)]) -> Result<Self> {
        let (u0, v0) = terms
            .first()
            .ok_or_else(|| TfError::Domain("empty separable sum".into()))?;
        for (u, v) in terms {
            u.grid.ensure_same(&u0.grid, "separable factor (x)")?;
            v.grid.ensure_same(&v0.grid, "separable factor (ω)")?;
        }
        Ok(SampledSymbol {
            xgrid: u0.grid,
            wgrid: v0.grid,
            repr: SymbolRepr::Separable(
                terms
                    .iter()
                    .map(|(u, v)| (u.values.clone(), v.values.clone()))
                    .collect(),
            ),
        })
    }

    pub fn constant(xgrid: GridSpec, wgrid: GridSpec, c: C64) -> Self {
        SampledSymbol {
            xgrid,
            wgrid,
            repr: SymbolRepr::Separable(vec![(vec![c; xgrid.samples], vec![C64::new(1.0, 0.0); wgrid.samples])]),
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.xgrid.samples, self.wgrid.samples)
    }

    pub fn value(&self, i: usize, k: usize) -> C64 {
        match &self.repr {
            SymbolRepr::Dense(v) => v[i * self.wgrid.samples + k],
            SymbolRepr::Separable(terms) => terms.iter().map(|(u, v)| u[i] * v[k]).sum(),
        }
    }

    pub fn to_dense(&self) -> SampledSymbol {
        let values = match &self.repr {
            SymbolRepr::Dense(v) => v.clone(),
            SymbolRepr::Separable(_) => {
                let (mx, mw) = self.shape();
                let mut out = Vec::with_capacity(mx * mw);
                for i in 0..mx {
                    for k in 0..mw {
                        out.push(self.value(i, k));
                    }
                }
                out
            }
        };
        SampledSymbol {
            xgrid: self.xgrid,
            wgrid: self.wgrid,
            repr: SymbolRepr::Dense(values),
        }
    }

    /// Dense row-major values (materialized if separable).
    pub fn values(&self) -> Vec<C64> {
        match self.to_dense().repr {
            SymbolRepr::Dense(v) => v,
            SymbolRepr::Separable(_) => unreachable!(),
        }
    }

    pub fn row(&self, i: usize) -> Vec<C64> {
        (0..self.wgrid.samples).map(|k| self.value(i, k)).collect()
    }

    pub fn conj(&self) -> SampledSymbol {
        let repr = match &self.repr {
            SymbolRepr::Dense(v) => SymbolRepr::Dense(v.iter().map(|z| z.conj()).collect()),
            SymbolRepr::Separable(t) => SymbolRepr::Separable(
                t.iter()
                    .map(|(u, v)| {
                        (
                            u.iter().map(|z| z.conj()).collect(),
                            v.iter().map(|z| z.conj()).collect(),
                        )
                    })
                    .collect(),
            ),
        };
        SampledSymbol { repr, ..*self }
    }

    /// Phase-space cell area `Δx·Δω`.
    pub fn cell(&self) -> f64 {
        self.xgrid.step() * self.wgrid.step()
    }

    /// Flattened `L^2` norm with quadrature weight `Δx·Δω`.
    pub fn l2_norm(&self) -> f64 {
        (self.values().iter().map(|v| v.norm_sqr()).sum::<f64>() * self.cell()).sqrt()
    }

    /// `⟨a, b⟩ = Σ a conj(b) Δx Δω`.
    pub fn inner(&self, other: &SampledSymbol) -> Result<C64> {
        self.xgrid.ensure_same(&other.xgrid, "symbol inner (x)")?;
        self.wgrid.ensure_same(&other.wgrid, "symbol inner (ω)")?;
        let a = self.values();
        let b = other.values();
        let s: C64 = a.iter().zip(&b).map(|(x, y)| x * y.conj()).sum();
        Ok(s * self.cell())
    }

    pub fn max_abs_diff(&self, other: &SampledSymbol) -> f64 {
        self.values()
            .iter()
            .zip(other.values().iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values().iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: C64) -> SampledSymbol {
        let repr = match &self.repr {
            SymbolRepr::Dense(v) => SymbolRepr::Dense(v.iter().map(|z| z * c).collect()),
            SymbolRepr::Separable(t) => SymbolRepr::Separable(
                t.iter()
                    .map(|(u, v)| (u.iter().map(|z| z * c).collect(), v.clone()))
                    .collect(),
            ),
        };
        SampledSymbol { repr, ..*self }
    }

    pub fn add(&self, other: &SampledSymbol) -> Result<SampledSymbol> {
        self.xgrid.ensure_same(&other.xgrid, "symbol add (x)")?;
        self.wgrid.ensure_same(&other.wgrid, "symbol add (ω)")?;
        if let (SymbolRepr::Separable(a), SymbolRepr::Separable(b)) = (&self.repr, &other.repr) {
            let mut t = a.clone();
            t.extend(b.iter().cloned());
            return Ok(SampledSymbol {
                repr: SymbolRepr::Separable(t),
                ..*self
            });
        }
        let values = self
            .values()
            .iter()
            .zip(other.values().iter())
            .map(|(a, b)| a + b)
            .collect();
        Ok(SampledSymbol {
            repr: SymbolRepr::Dense(values),
            ..*self
        })
    }
}

/// Applies the centered transform along the ω axis of a symbol.
///
/// The forward direction maps the ω-grid to its dual; `inverse` applies
/// the inverse transform (also landing on the dual grid).
pub fn partial_dft2(a: &SampledSymbol, inverse: bool) -> SampledSymbol {
    let step = a.wgrid.step();
    let wgrid = a.wgrid.dual();
    let repr = match &a.repr {
        SymbolRepr::Dense(v) => {
            let mw = a.wgrid.samples;
            let mut out = v.clone();
            for row in out.chunks_mut(mw) {
                fft::centered_in_place(row, step, inverse);
            }
            SymbolRepr::Dense(out)
        }
        SymbolRepr::Separable(t) => SymbolRepr::Separable(
            t.iter()
                .map(|(u, v)| (u.clone(), fft::centered(v, step, inverse)))
                .collect(),
        ),
    };
    SampledSymbol {
        xgrid: a.xgrid,
        wgrid,
        repr,
    }
}

/// Full two-dimensional centered transform of a symbol (dense result).
///
/// Both axes map to their dual grids.
pub fn dft2(a: &SampledSymbol, inverse: bool) -> SampledSymbol {
    let half = partial_dft2(&a.to_dense(), inverse);
    let (mx, mw) = half.shape();
    let mut vals = half.values();
    let mut col = vec![ZERO; mx];
    for k in 0..mw {
        for i in 0..mx {
            col[i] = vals[i * mw + k];
        }
        fft::centered_in_place(&mut col, a.xgrid.step(), inverse);
        for i in 0..mx {
            vals[i * mw + k] = col[i];
        }
    }
    SampledSymbol {
        xgrid: a.xgrid.dual(),
        wgrid: half.wgrid,
        repr: SymbolRepr::Dense(vals),
    }
}

/// Normalized Gaussian `2^{1/4} e^{-πx²}` sampled on `grid`.
pub fn gaussian(grid: GridSpec) -> SampledFunction {
    SampledFunction::from_real_fn(grid, |x| 2f64.powf(0.25) * (-std::f64::consts::PI * x * x).exp())
}
