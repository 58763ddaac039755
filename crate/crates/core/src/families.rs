//! Explicit symbol/function families used as boundedness witnesses.

use crate::error::{Result, TfError};
use crate::grid::{GridSpec, SampledFunction, SampledSymbol, C64};
use crate::quantize::Quantization;

/// Default support radius of shrinking bumps.
pub const DEFAULT_EPSILON: f64 = 1.0 / 48.0;

/// Largest admissible support radius for lattice families (d = 1).
pub const MAX_EPSILON: f64 = 1.0 / 24.0;

/// Relative size allowed for samples near the torus boundary.
pub const TRUNCATION_TOL: f64 = 1e-9;

/// Reference envelopes. Every envelope is real, nonnegative and equals 1 at 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Envelope {
    /// `(1 + cos πx)/2` on `[-1, 1]`.
    RaisedCosine,
    /// `exp(1 - 1/(1 - x²))` on `(-1, 1)`, infinitely smooth.
    #[default]
    SmoothBump,
    /// Discrete Fejér kernel: the spectrum is the triangle `(1 - |ω|)_+`.
    Fejer,
    /// `e^{-πx²}`.
    Gaussian,
}

impl Envelope {
    /// Support radius, `None` when not compactly supported.
    pub fn radius(self) -> Option<f64> {
        match self {
            Envelope::RaisedCosine | Envelope::SmoothBump => Some(1.0),
            Envelope::Fejer | Envelope::Gaussian => None,
        }
    }

    fn pointwise(self, x: f64) -> f64 {
        match self {
            Envelope::RaisedCosine => crate::norms::raised_cosine(x),
            Envelope::SmoothBump => {
                if x.abs() >= 1.0 {
                    0.0
                } else {
                    (1.0 - 1.0 / (1.0 - x * x)).exp()
                }
            }
            Envelope::Gaussian => (-std::f64::consts::PI * x * x).exp(),
            Envelope::Fejer => unreachable!("Fejér envelope is grid-defined"),
        }
    }

    pub fn sample(self, grid: GridSpec) -> Result<SampledFunction> {
        self.sample_scaled(grid, 1.0)
    }

    /// Samples `h(x / width)`.
    pub fn sample_scaled(self, grid: GridSpec, width: f64) -> Result<SampledFunction> {
        if !(width > 0.0) {
            return Err(TfError::Domain(format!("envelope width {width}")));
        }
        if self != Envelope::Fejer {
            return Ok(SampledFunction::from_real_fn(grid, |x| self.pointwise(x / width)));
        }
        let dual = grid.dual();
        if dual.period / 2.0 <= 1.0 / width {
            return Err(TfError::PeriodTooSmall(format!(
                "Fejér spectrum of half-width {} does not fit in {dual}",
                1.0 / width
            )));
        }
        let tri = SampledFunction::from_real_fn(dual, |w| width * (1.0 - (w * width).abs()).max(0.0));
        let mut h = tri.idft();
        // the envelope is real and even; clear rounding residue
        for v in &mut h.values {
            *v = C64::new(v.re, 0.0);
        }
        Ok(h)
    }
}

/// The parameter families the harness can instantiate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    ChirpH,
    GaussianDilate,
    GaussianChirpSymbol,
    LatticeSymbolKN,
    LatticeSymbolWeyl,
    TensorSymbol,
    DeltaSpike,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyParams {
    pub kind: FamilyKind,
    pub envelope: Envelope,
    pub epsilon: f64,
}

impl FamilyParams {
    pub fn new(kind: FamilyKind) -> Self {
        let envelope = match kind {
            FamilyKind::LatticeSymbolKN => Envelope::Fejer,
            FamilyKind::GaussianDilate | FamilyKind::GaussianChirpSymbol => Envelope::Gaussian,
            _ => Envelope::SmoothBump,
        };
        FamilyParams {
            kind,
            envelope,
            epsilon: DEFAULT_EPSILON,
        }
    }

    pub fn with_envelope(mut self, envelope: Envelope) -> Self {
        self.envelope = envelope;
        self
    }

    pub fn validate(&self, scale: f64) -> Result<()> {
        if !(scale >= 1.0) {
            return Err(TfError::Domain(format!("family scale {scale} < 1")));
        }
        let lattice = matches!(self.kind, FamilyKind::LatticeSymbolKN | FamilyKind::LatticeSymbolWeyl);
        if lattice && !(self.epsilon > 0.0 && self.epsilon <= MAX_EPSILON) {
            return Err(TfError::Domain(format!("epsilon {} outside (0, 1/24]", self.epsilon)));
        }
        Ok(())
    }
}

/// Fails when `f` carries more than [`TRUNCATION_TOL`] of its peak within
/// `period/32` of the torus boundary.
pub fn check_truncation(f: &SampledFunction, what: &str) -> Result<()> {
    let r = f.boundary_ratio(f.grid.period / 32.0);
    if r > TRUNCATION_TOL {
        return Err(TfError::Truncation(format!("{what} reaches the boundary of {} (ratio {r:.2e})", f.grid)));
    }
    Ok(())
}

fn reach(env: Envelope, grid: GridSpec) -> f64 {
    env.radius().unwrap_or(grid.period / 2.0)
}

/// `h(x) e^{-πiλx²}`.
pub fn chirp_h(lambda: f64, env: Envelope, grid: GridSpec) -> Result<SampledFunction> {
    let local = lambda.abs() * reach(env, grid);
    if local >= grid.nyquist() / 2.0 {
        return Err(TfError::Aliasing(format!(
            "chirp frequency {local} not below half the Nyquist frequency {} of {grid}",
            grid.nyquist()
        )));
    }
    let h = env.sample(grid)?;
    Ok(h.map_indexed(|x, v| v * C64::from_polar(1.0, -std::f64::consts::PI * lambda * x * x)))
}

/// `e^{-πλ²x²}`.
pub fn dilated_gaussian(lambda: f64, grid: GridSpec) -> Result<SampledFunction> {
    if 3.0 * lambda >= grid.nyquist() {
        return Err(TfError::Resolution(format!("Gaussian of width 1/{lambda} under-resolved on {grid}")));
    }
    if 3.0 / lambda >= grid.period / 2.0 {
        return Err(TfError::PeriodTooSmall(format!("Gaussian of width 1/{lambda} wraps on {grid}")));
    }
    Ok(SampledFunction::from_real_fn(grid, |x| {
        (-std::f64::consts::PI * (lambda * x).powi(2)).exp()
    }))
}

/// Discrete delta at the origin, `1/Δx` at `x = 0`.
pub fn delta_spike(grid: GridSpec) -> SampledFunction {
    let mut f = SampledFunction::zeros(grid);
    f.values[grid.samples / 2] = C64::new(1.0 / grid.step(), 0.0);
    f
}

/// `e^{πix²} ⊗ e^{πiω²}`, exact on grids with `L² ≤ M`.
pub fn chirp_tensor_symbol(grid: GridSpec) -> Result<SampledSymbol> {
    if grid.period * grid.period > grid.samples as f64 + 1e-9 {
        return Err(TfError::Aliasing(format!("unit chirp aliases on {grid}; need L² ≤ M")));
    }
    let chirp = |g: GridSpec| SampledFunction::from_fn(g, |x| C64::from_polar(1.0, std::f64::consts::PI * x * x));
    Ok(SampledSymbol::tensor(&chirp(grid), &chirp(grid.dual())))
}

/// Which variant of the chirp pair to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChirpVariant {
    /// `a = h(x) h_λ(ω)`, `f = F⁻¹(conj h_λ)`.
    First,
    /// `a = e^{-πλ²x²} ĥ_λ(ω)`, `f = conj h_λ`.
    Second,
}

/// Chirp symbol/function pair on `grid` (symbol ω-axis on the dual grid).
pub fn t41_pair(
    lambda: f64,
    env: Envelope,
    grid: GridSpec,
    variant: ChirpVariant,
) -> Result<(SampledSymbol, SampledFunction)> {
    match variant {
        ChirpVariant::First => {
            let hx = env.sample(grid)?;
            let hw = chirp_h(lambda, env, grid.dual())?;
            let f = hw.conj().idft();
            Ok((SampledSymbol::tensor(&hx, &hw), f))
        }
        ChirpVariant::Second => {
            let h = chirp_h(lambda, env, grid)?;
            let gauss = dilated_gaussian(lambda, grid)?;
            let spec = h.dft();
            check_truncation(&spec, "chirp spectrum")?;
            Ok((SampledSymbol::tensor(&gauss, &spec), h.conj()))
        }
    }
}

/// `Λ_N = {0, 4, …, 4(N-1)}`.
pub fn lattice(n: usize) -> Vec<i64> {
    (0..n as i64).map(|k| 4 * k).collect()
}

/// Where the envelopes of a lattice symbol are localized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupportSide {
    /// `ĥ₁` and `ĥ₂` supported in `[-1, 1]` (Fejér envelopes).
    Frequency,
    /// `h₁` and `h₂` supported in `[-1, 1]` (smooth bumps).
    Space,
}

impl SupportSide {
    fn envelopes(self, xgrid: GridSpec, wgrid: GridSpec) -> Result<(SampledFunction, SampledFunction)> {
        match self {
            SupportSide::Frequency => Ok((Envelope::Fejer.sample(xgrid)?, Envelope::Fejer.sample(wgrid)?)),
            SupportSide::Space => {
                let h1 = Envelope::SmoothBump.sample(xgrid)?;
                let h2 = Envelope::SmoothBump.sample(wgrid)?;
                // ĥ₂(0) = 1
                let mass: f64 = h2.values.iter().map(|v| v.re).sum::<f64>() * wgrid.step();
                Ok((h1, h2.scale(C64::new(1.0 / mass, 0.0))))
            }
        }
    }

    /// Room each envelope needs beyond its nominal radius.
    fn margin(self) -> f64 {
        match self {
            SupportSide::Frequency => 4.0,
            SupportSide::Space => 1.0,
        }
    }
}

/// `a_N = Σ_{n∈Λ_N} (M_{-kn} h₁)(x) (T_n h₂)(ω)` with `k = 1` (Kohn–Nirenberg)
/// or `k = 2` (Weyl), on `grid × grid.dual()`.
pub fn lattice_symbol(n: usize, grid: GridSpec, quant: Quantization, side: SupportSide) -> Result<SampledSymbol> {
    lattice_symbol_on(n, grid, grid.dual(), quant, side)
}

/// Same symbol sampled on an arbitrary pair of grids, e.g. coarser grids
/// used only for measuring its norm.
pub fn lattice_symbol_on(
    n: usize,
    grid: GridSpec,
    wgrid: GridSpec,
    quant: Quantization,
    side: SupportSide,
) -> Result<SampledSymbol> {
    if n == 0 {
        return Err(TfError::Domain("lattice size N = 0".into()));
    }
    let k = match quant {
        Quantization::KohnNirenberg => 1.0,
        Quantization::Weyl => 2.0,
    };
    let top = 4.0 * (n as f64 - 1.0);
    let need = k * top + 1.0 + side.margin();
    if need >= grid.nyquist() {
        return Err(TfError::PeriodTooSmall(format!(
            "modulations up to {} need Nyquist above {need} on {grid}",
            k * top
        )));
    }
    if top + 1.0 + side.margin() >= wgrid.period / 2.0 {
        return Err(TfError::PeriodTooSmall(format!("translates up to {top} wrap on {wgrid}")));
    }
    let (h1, h2) = side.envelopes(grid, wgrid)?;
    let terms = lattice(n)
        .into_iter()
        .map(|m| {
            let u = h1.modulate_unchecked(-k * m as f64);
            let v = h2.translate(m as f64)?;
            Ok((u, v))
        })
        .collect::<Result<Vec<_>>>()?;
    SampledSymbol::separable_sum(&terms)
}

/// `f_N(x) = h(Nx/ε)`, supported in `|x| ≤ ε/N`.
pub fn shrinking_bump(n: usize, epsilon: f64, env: Envelope, grid: GridSpec) -> Result<SampledFunction> {
    if n == 0 || !(epsilon > 0.0) {
        return Err(TfError::Domain(format!("N = {n}, epsilon = {epsilon}")));
    }
    let r = env.radius().ok_or_else(|| TfError::Domain("shrinking bump needs a compact envelope".into()))?;
    let width = epsilon / n as f64;
    if 2.0 * r * width < 16.0 * grid.step() * (1.0 - 1e-9) {
        return Err(TfError::Resolution(format!(
            "bump of width {} has fewer than 16 samples on {grid}",
            2.0 * r * width
        )));
    }
    env.sample_scaled(grid, width)
}

/// `a'_λ = φ(λx) φ(ω/λ)` and `f'_λ = φ(λx)` with `φ(t) = e^{-πt²}`.
pub fn gaussian_pair_12(lambda: f64, grid: GridSpec) -> Result<(SampledSymbol, SampledFunction)> {
    let f = dilated_gaussian(lambda, grid)?;
    let wide = dilated_gaussian(1.0 / lambda, grid.dual())?;
    Ok((SampledSymbol::tensor(&f, &wide), f))
}
