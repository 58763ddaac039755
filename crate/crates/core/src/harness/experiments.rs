//! The experiment registry and the family set-ups behind it.

use num_rational::Rational64;

use super::report::{Report, Row, Summary, Verdict};
use super::{Claim, Experiment, ExperimentSpec, Instance, Part};
use crate::error::{Result, TfError};
use crate::exponent::{exp, Exponent};
use crate::families::{
    self, chirp_h, chirp_tensor_symbol, check_truncation, delta_spike, dilated_gaussian, gaussian_pair_12,
    lattice_symbol, lattice_symbol_on, shrinking_bump, t41_pair, ChirpVariant, Envelope, FamilyKind, FamilyParams,
    SupportSide,
};
use crate::grid::{GridSpec, SampledFunction};
use crate::norms::{SpaceSpec, WindowKind};
use crate::quantize::{fourier_conjugate_symbol, kn_apply, u_transform, weyl_apply, Quantization};
use crate::region::{interior_samples, truth_table, ExponentTuple, Target};

/// How each schedule point is turned into a symbol, an input and an output.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Setup {
    /// Output `ĥ_λ`.
    ChirpSpectrum { grid: GridSpec, env: Envelope },
    /// First chirp pair, optionally multiplied by the cutoff `χ = h`.
    ChirpFirst { grid: GridSpec, env: Envelope, cutoff: bool },
    /// Second chirp pair with cutoff.
    ChirpSecond { grid: GridSpec, env: Envelope },
    /// Lattice symbol applied to a shrinking bump. The symbol norm is
    /// measured on the (coarser) grids `norm_x × norm_w`.
    Lattice {
        grid: GridSpec,
        norm_x: GridSpec,
        norm_w: GridSpec,
        quant: Quantization,
        side: SupportSide,
        epsilon: f64,
    },
    GaussianPair { grid: GridSpec },
    /// First chirp pair conjugated by the Fourier transform and run through
    /// the Weyl quantization; `grid` must be self-dual.
    FourierConjugate { grid: GridSpec, env: Envelope },
    /// `e^{πix²} ⊗ e^{πiω²}` applied to dilated Gaussians; `grid` self-dual.
    Tensor { grid: GridSpec },
    /// Discrete delta on a grid with `scale` samples per unit length.
    Delta { period: f64 },
}

fn refine(g: GridSpec, k: usize) -> GridSpec {
    if k == 1 {
        g
    } else {
        g.refined(k)
    }
}

/// Self-dual grids stay self-dual: the period grows by `k`, the sample count by `k²`.
fn refine_self_dual(g: GridSpec, k: usize) -> Result<GridSpec> {
    if k == 1 {
        Ok(g)
    } else {
        GridSpec::new(g.period * k as f64, g.samples * k * k)
    }
}

fn cutoff(f: &SampledFunction, env: Envelope) -> Result<SampledFunction> {
    f.mul(&env.sample(f.grid)?)
}

impl Setup {
    pub(crate) fn instance(&self, scale: f64, k: usize) -> Result<Instance> {
        match *self {
            Setup::ChirpSpectrum { grid, env } => {
                let spec = chirp_h(scale, env, refine(grid, k))?.dft();
                check_truncation(&spec, "chirp spectrum")?;
                Ok(Instance::new(None, None, spec))
            }
            Setup::ChirpFirst { grid, env, cutoff: cut } => {
                let (a, f) = t41_pair(scale, env, refine(grid, k), ChirpVariant::First)?;
                check_truncation(&f, "chirp input")?;
                let mut out = kn_apply(&a, &f)?;
                if cut {
                    out = cutoff(&out, env)?;
                }
                Ok(Instance::new(Some(a), Some(f), out))
            }
            Setup::ChirpSecond { grid, env } => {
                let (a, f) = t41_pair(scale, env, refine(grid, k), ChirpVariant::Second)?;
                let out = cutoff(&kn_apply(&a, &f)?, env)?;
                Ok(Instance::new(Some(a), Some(f), out))
            }
            Setup::Lattice {
                grid,
                norm_x,
                norm_w,
                quant,
                side,
                epsilon,
            } => {
                let n = scale.round() as usize;
                let grid = refine(grid, k);
                let a = lattice_symbol(n, grid, quant, side)?;
                let f = shrinking_bump(n, epsilon, Envelope::SmoothBump, grid)?;
                let out = quant.apply(&a, &f)?;
                drop(a);
                let norm_sym = lattice_symbol_on(n, refine(norm_x, k), refine(norm_w, k), quant, side)?;
                Ok(Instance::new(Some(norm_sym), Some(f), out))
            }
            Setup::GaussianPair { grid } => {
                let (a, f) = gaussian_pair_12(scale, refine(grid, k))?;
                let out = kn_apply(&a, &f)?;
                Ok(Instance::new(Some(a), Some(f), out))
            }
            Setup::FourierConjugate { grid, env } => {
                let grid = refine_self_dual(grid, k)?;
                let (a, f) = t41_pair(scale, env, grid, ChirpVariant::First)?;
                // τ = (U⁻¹a)∘χ⁻¹ and χ⁻¹ = χ³
                let mut tau = u_transform(&a.to_dense(), true);
                for _ in 0..3 {
                    tau = fourier_conjugate_symbol(&tau)?;
                }
                let g = f.dft();
                let out = weyl_apply(&tau, &g)?;
                Ok(Instance::new(Some(tau), Some(g), out))
            }
            Setup::Tensor { grid } => {
                let grid = refine_self_dual(grid, k)?;
                let a = chirp_tensor_symbol(grid)?;
                let f = dilated_gaussian(scale, grid)?;
                let out = kn_apply(&a, &f)?;
                Ok(Instance::new(Some(a), Some(f), out))
            }
            Setup::Delta { period } => {
                let per_unit = scale.round() as usize;
                let grid = GridSpec::new(period, (period as usize) * per_unit * k)?;
                // ‖g‖₁ of the default amalgam window in closed form: √(4/3) · ∫(1 + cos πx)/2 dx
                let g_l1 = 2.0 / 3f64.sqrt();
                Ok(Instance::new(None, None, delta_spike(grid)).with_reference(g_l1))
            }
        }
    }
}

pub const EXPERIMENT_NAMES: [&str; 13] = [
    "chirp-l1",
    "chirp-l2-amalgam",
    "t41-qr2",
    "t41-p",
    "t27-necessity",
    "t27bis-kn",
    "t27bis-weyl",
    "mod-necessity-qr",
    "mod-necessity-fourier",
    "mod-necessity-pq",
    "tensor-bounded",
    "delta-amalgam",
    "region-truth-table",
];

pub const SMOKE_NAME: &str = "sufficiency-smoke";

fn grid(period: f64, samples: usize) -> GridSpec {
    GridSpec::new(period, samples).expect("registry grid")
}

fn chirp_grid() -> GridSpec {
    grid(8.0, 4096)
}

fn wide_grid() -> GridSpec {
    grid(512.0, 8192)
}

fn gaussian_grid() -> GridSpec {
    grid(16.0, 8192)
}

fn self_dual_grid() -> GridSpec {
    grid(32.0, 1024)
}

fn lattice_setup(quant: Quantization, side: SupportSide) -> Setup {
    Setup::Lattice {
        grid: grid(8.0, 98304),
        norm_x: grid(8.0, 8192),
        norm_w: grid(512.0, 2048),
        quant,
        side,
        epsilon: families::DEFAULT_EPSILON,
    }
}

fn powers_of_two(max: u32) -> Vec<f64> {
    (0..=max).map(|k| (1u64 << k) as f64).collect()
}

fn geometric(start: f64, ratio: f64, count: usize) -> Vec<f64> {
    (0..count).map(|k| start * ratio.powi(k as i32)).collect()
}

fn half() -> Rational64 {
    Rational64::new(1, 2)
}

fn m(p: Exponent, q: Exponent) -> SpaceSpec {
    SpaceSpec::modulation(p, q)
}

/// Input/output space of a target region for a tuple.
fn target_space(target: Target, t: &ExponentTuple) -> SpaceSpec {
    let s = t.s.unwrap_or(t.r);
    match target {
        Target::Lebesgue => SpaceSpec::lp(t.r),
        Target::Amalgam => SpaceSpec::amalgam(t.r, s),
        Target::Modulation => m(t.r, s),
    }
}

fn label(name: &str, t: &ExponentTuple) -> String {
    format!("{name}{}", t.to_string().replace(", ", ";"))
}

struct SpecBuilder {
    family: FamilyParams,
    schedule: Vec<f64>,
    quantization: Option<Quantization>,
}

impl SpecBuilder {
    #[allow(clippy::too_many_arguments)]
    fn spec(
        &self,
        name: String,
        symbol: Option<SpaceSpec>,
        input: Option<SpaceSpec>,
        output: SpaceSpec,
        predicted: Rational64,
        tolerance: f64,
        claim: Claim,
    ) -> ExperimentSpec {
        ExperimentSpec {
            name,
            family: self.family,
            schedule: self.schedule.clone(),
            symbol_space: symbol,
            input_space: input,
            output_space: output,
            quantization: self.quantization,
            predicted_slope: predicted,
            tolerance,
            claim,
        }
    }
}

fn chirp_l1() -> Experiment {
    let b = SpecBuilder {
        family: FamilyParams::new(FamilyKind::ChirpH),
        schedule: powers_of_two(6),
        quantization: None,
    };
    let specs = ["1", "2", "4", "inf"]
        .iter()
        .map(|q| {
            let q = exp(q);
            let tol = if q == exp("2") { 0.01 } else { 0.1 };
            b.spec(
                format!("chirp-l1[q={q}]"),
                None,
                None,
                SpaceSpec::lp(q),
                q.recip() - half(),
                tol,
                Claim::Asymptotic,
            )
        })
        .collect();
    Experiment {
        name: "chirp-l1",
        summary: "Lebesgue norms of the spectrum of h(x)e^{-πiλx²}",
        parts: vec![Part {
            setup: Setup::ChirpSpectrum {
                grid: chirp_grid(),
                env: Envelope::SmoothBump,
            },
            specs,
        }],
    }
}

fn chirp_l2_amalgam() -> Experiment {
    let b = SpecBuilder {
        family: FamilyParams::new(FamilyKind::ChirpH),
        schedule: powers_of_two(6),
        quantization: None,
    };
    let pairs = [("1", "1"), ("2", "1"), ("inf", "1"), ("1", "2"), ("2", "4"), ("1", "inf")];
    let specs = pairs
        .iter()
        .map(|(p, q)| {
            let (p, q) = (exp(p), exp(q));
            b.spec(
                format!("chirp-l2-amalgam[p={p};q={q}]"),
                None,
                None,
                SpaceSpec::amalgam(p, q),
                q.recip() - half(),
                0.1,
                Claim::AtMost,
            )
        })
        .collect();
    Experiment {
        name: "chirp-l2-amalgam",
        summary: "Wiener amalgam norms of the chirp spectrum",
        parts: vec![Part {
            setup: Setup::ChirpSpectrum {
                grid: chirp_grid(),
                env: Envelope::SmoothBump,
            },
            specs,
        }],
    }
}

fn one() -> Rational64 {
    Rational64::new(1, 1)
}

/// A single growth witness.
fn necessity(
    name: &'static str,
    summary: &'static str,
    family: FamilyParams,
    schedule: Vec<f64>,
    quantization: Quantization,
    setup: Setup,
    tuple: &str,
    predicted: impl Fn(&ExponentTuple) -> Rational64,
    spaces: impl Fn(&ExponentTuple) -> (SpaceSpec, SpaceSpec, SpaceSpec),
) -> Experiment {
    let t = ExponentTuple::parse(tuple).expect("registry tuple");
    let b = SpecBuilder {
        family,
        schedule,
        quantization: Some(quantization),
    };
    let (sym, input, output) = spaces(&t);
    let spec = b.spec(label(name, &t), Some(sym), Some(input), output, predicted(&t), 0.1, Claim::AtLeast);
    Experiment {
        name,
        summary,
        parts: vec![Part { setup, specs: vec![spec] }],
    }
}

fn s_of(t: &ExponentTuple) -> Exponent {
    t.s.unwrap_or(t.r)
}

fn t41_qr2() -> Experiment {
    necessity(
        "t41-qr2",
        "first chirp pair: symbols in M^{p,q} need q ≤ r₂'",
        FamilyParams::new(FamilyKind::ChirpH),
        powers_of_two(6),
        Quantization::KohnNirenberg,
        Setup::ChirpFirst {
            grid: wide_grid(),
            env: Envelope::SmoothBump,
            cutoff: true,
        },
        "2,2,2,inf",
        |t| one() - t.q.recip() - s_of(t).recip(),
        |t| (m(t.p, t.q), SpaceSpec::amalgam(t.r, s_of(t)), SpaceSpec::lp(t.r)),
    )
}

fn t41_p() -> Experiment {
    necessity(
        "t41-p",
        "second chirp pair: 1/p ≥ 1/2 - 1/r + 1/q'",
        FamilyParams::new(FamilyKind::ChirpH),
        powers_of_two(6),
        Quantization::KohnNirenberg,
        Setup::ChirpSecond {
            grid: chirp_grid(),
            env: Envelope::SmoothBump,
        },
        "inf,1,inf,2",
        |t| half() - t.r.recip() - t.p.recip() + t.q.conjugate().recip(),
        |t| (m(t.p, t.q), SpaceSpec::amalgam(t.r, s_of(t)), SpaceSpec::lp(t.r)),
    )
}

fn lattice_spaces(window: WindowKind, amalgam_symbol: bool) -> impl Fn(&ExponentTuple) -> (SpaceSpec, SpaceSpec, SpaceSpec) {
    move |t| {
        let sym = if amalgam_symbol {
            SpaceSpec::amalgam_flp(t.p, t.q)
        } else {
            m(t.p, t.q)
        }
        .with_symbol_window(window);
        let space = match t.s {
            Some(s) => SpaceSpec::amalgam(t.r, s),
            None => SpaceSpec::lp(t.r),
        };
        (sym, space.clone(), space)
    }
}

fn t27_necessity() -> Experiment {
    necessity(
        "t27-necessity",
        "Kohn-Nirenberg lattice symbols in M^{p,q}: q ≤ r",
        FamilyParams::new(FamilyKind::LatticeSymbolKN),
        powers_of_two(5),
        Quantization::KohnNirenberg,
        lattice_setup(Quantization::KohnNirenberg, SupportSide::Frequency),
        "1,2,1",
        |t| t.r.recip() - t.q.recip(),
        lattice_spaces(WindowKind::BandLimited, false),
    )
}

fn t27bis(name: &'static str, quant: Quantization) -> Experiment {
    let kind = match quant {
        Quantization::KohnNirenberg => FamilyKind::LatticeSymbolKN,
        Quantization::Weyl => FamilyKind::LatticeSymbolWeyl,
    };
    necessity(
        name,
        "lattice symbols in W(FL^p,L^q): q ≤ r",
        FamilyParams::new(kind).with_envelope(Envelope::SmoothBump),
        powers_of_two(5),
        quant,
        lattice_setup(quant, SupportSide::Space),
        "1,inf,2,2",
        |t| t.r.recip() - t.q.recip(),
        lattice_spaces(WindowKind::Bump, true),
    )
}

fn mod_necessity_qr() -> Experiment {
    necessity(
        "mod-necessity-qr",
        "first chirp pair on modulation spaces: q ≤ r'",
        FamilyParams::new(FamilyKind::ChirpH),
        powers_of_two(6),
        Quantization::KohnNirenberg,
        Setup::ChirpFirst {
            grid: wide_grid(),
            env: Envelope::SmoothBump,
            cutoff: false,
        },
        "2,2,inf,2",
        |t| one() - t.q.recip() - t.r.recip(),
        |t| (m(t.p, t.q), m(t.r, s_of(t)), m(t.r, s_of(t))),
    )
}

fn mod_necessity_fourier() -> Experiment {
    // M^{2,2} = L² lets the dense conjugated symbol be measured directly.
    necessity(
        "mod-necessity-fourier",
        "Fourier-conjugated chirp pair, Weyl quantization: q ≤ s'",
        FamilyParams::new(FamilyKind::ChirpH),
        geometric(1.0, 2f64.sqrt(), 6),
        Quantization::Weyl,
        Setup::FourierConjugate {
            grid: self_dual_grid(),
            env: Envelope::SmoothBump,
        },
        "2,2,2,inf",
        |t| one() - t.q.recip() - s_of(t).recip(),
        |t| (SpaceSpec::lp(exp("2")), m(t.r, s_of(t)), m(t.r, s_of(t))),
    )
}

fn mod_necessity_pq() -> Experiment {
    necessity(
        "mod-necessity-pq",
        "anisotropic Gaussian pair: p ≤ q'",
        FamilyParams::new(FamilyKind::GaussianDilate),
        geometric(4.0, 2f64.sqrt(), 7),
        Quantization::KohnNirenberg,
        Setup::GaussianPair { grid: gaussian_grid() },
        "inf,2,2,2",
        |t| t.q.conjugate().recip() - t.p.recip(),
        |t| (m(t.p, t.q), m(t.r, s_of(t)), m(t.r, s_of(t))),
    )
}

fn tensor_bounded() -> Experiment {
    let b = SpecBuilder {
        family: FamilyParams::new(FamilyKind::TensorSymbol),
        schedule: geometric(1.0, 2f64.powf(0.25), 9),
        quantization: Some(Quantization::KohnNirenberg),
    };
    let specs = ["1", "2"]
        .iter()
        .map(|p| {
            let p = exp(p);
            b.spec(
                format!("tensor-bounded[p={p}]"),
                Some(SpaceSpec::amalgam_flp(Exponent::ONE, Exponent::INF).with_symbol_window(WindowKind::Bump)),
                Some(m(p, p)),
                m(p, p),
                Rational64::new(0, 1),
                0.1,
                Claim::Bounded,
            )
        })
        .collect();
    Experiment {
        name: "tensor-bounded",
        summary: "chirp tensor symbol in W(FL^1,L^∞) acting on M^p",
        parts: vec![Part {
            setup: Setup::Tensor { grid: self_dual_grid() },
            specs,
        }],
    }
}

fn delta_amalgam() -> Experiment {
    let b = SpecBuilder {
        family: FamilyParams::new(FamilyKind::DeltaSpike),
        schedule: powers_of_two(9)[4..].to_vec(),
        quantization: None,
    };
    let spec = b.spec(
        "delta-amalgam".into(),
        None,
        None,
        SpaceSpec::amalgam_flp(Exponent::INF, Exponent::ONE),
        Rational64::new(0, 1),
        1e-4,
        Claim::Exact,
    );
    Experiment {
        name: "delta-amalgam",
        summary: "W(FL^∞,L^1) norm of the delta equals ‖g‖₁",
        parts: vec![Part {
            setup: Setup::Delta { period: 8.0 },
            specs: vec![spec],
        }],
    }
}

fn region_truth_table() -> Experiment {
    Experiment {
        name: "region-truth-table",
        summary: "region predicates against hand-checked tuples",
        parts: Vec::new(),
    }
}

pub(crate) fn truth_table_report(name: &str) -> Result<Report> {
    let mut rows = Vec::new();
    let mut all = true;
    for (k, (target, t, expected)) in truth_table().into_iter().enumerate() {
        let got = t.contains(target);
        all &= got == expected;
        let flag = |b: bool| if b { 1.0 } else { 0.0 };
        rows.push(Row {
            experiment: label(&format!("{name}[{}]", format!("{target:?}").to_lowercase()), &t),
            scale: (k + 1) as f64,
            symbol_norm: flag(expected),
            input_norm: 1.0,
            output_norm: flag(got),
            ratio: flag(got == expected),
        });
    }
    Ok(Report {
        experiment: name.to_string(),
        rows,
        summaries: vec![Summary {
            experiment: name.to_string(),
            predicted_slope: "exact".into(),
            fitted_slope: None,
            residual: None,
            convergence_drift: None,
            verdict: if all { Verdict::Pass } else { Verdict::Fail },
        }],
    })
}

/// Interior tuples of every region on the lattice and Gaussian families;
/// ratios must not grow.
pub fn sufficiency_smoke() -> Experiment {
    let targets = [Target::Lebesgue, Target::Amalgam, Target::Modulation];
    let lattice = SpecBuilder {
        family: FamilyParams::new(FamilyKind::LatticeSymbolKN),
        schedule: powers_of_two(5),
        quantization: Some(Quantization::KohnNirenberg),
    };
    let gauss = SpecBuilder {
        family: FamilyParams::new(FamilyKind::GaussianDilate),
        schedule: geometric(4.0, 2f64.sqrt(), 7),
        quantization: Some(Quantization::KohnNirenberg),
    };
    let specs = |b: &SpecBuilder, family: &str, window: WindowKind| -> Vec<ExperimentSpec> {
        targets
            .iter()
            .flat_map(|&target| {
                interior_samples(target).into_iter().map(move |t| {
                    let space = target_space(target, &t);
                    b.spec(
                        label(&format!("{SMOKE_NAME}[{family} {}]", format!("{target:?}").to_lowercase()), &t),
                        Some(m(t.p, t.q).with_symbol_window(window)),
                        Some(space.clone()),
                        space,
                        Rational64::new(0, 1),
                        0.1,
                        Claim::AtMost,
                    )
                })
            })
            .collect()
    };
    Experiment {
        name: SMOKE_NAME,
        summary: "no growth for tuples strictly inside the regions",
        parts: vec![
            Part {
                setup: lattice_setup(Quantization::KohnNirenberg, SupportSide::Frequency),
                specs: specs(&lattice, "lattice", WindowKind::BandLimited),
            },
            Part {
                setup: Setup::GaussianPair { grid: gaussian_grid() },
                specs: specs(&gauss, "gaussian", WindowKind::Gaussian),
            },
        ],
    }
}

/// The thirteen registered experiments, in a fixed order.
pub fn registry() -> Vec<Experiment> {
    EXPERIMENT_NAMES.iter().map(|n| find(n).expect("registered")).collect()
}

/// Looks up a registered experiment (or the sufficiency smoke run) by name.
pub fn find(name: &str) -> Result<Experiment> {
    Ok(match name {
        "chirp-l1" => chirp_l1(),
        "chirp-l2-amalgam" => chirp_l2_amalgam(),
        "t41-qr2" => t41_qr2(),
        "t41-p" => t41_p(),
        "t27-necessity" => t27_necessity(),
        "t27bis-kn" => t27bis("t27bis-kn", Quantization::KohnNirenberg),
        "t27bis-weyl" => t27bis("t27bis-weyl", Quantization::Weyl),
        "mod-necessity-qr" => mod_necessity_qr(),
        "mod-necessity-fourier" => mod_necessity_fourier(),
        "mod-necessity-pq" => mod_necessity_pq(),
        "tensor-bounded" => tensor_bounded(),
        "delta-amalgam" => delta_amalgam(),
        "region-truth-table" => region_truth_table(),
        SMOKE_NAME => sufficiency_smoke(),
        other => return Err(TfError::UnknownExperiment(other.to_string())),
    })
}
