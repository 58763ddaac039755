//! Scaling experiments: build a family across a schedule, apply the
//! operator, measure three norms and fit the log-log slope of
//!
//! `ρ(scale) = ‖Op f‖_out / (‖a‖_sym · ‖f‖_in)`.

mod experiments;
pub mod fit;
pub mod report;

use std::cell::RefCell;
use std::collections::HashMap;

use num_rational::Rational64;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Result, TfError};
use crate::families::FamilyParams;
use crate::grid::{SampledFunction, SampledSymbol, SymbolRepr};
use crate::norms::{symbol_lp_norm, SpaceKind, SpaceSpec, SymbolNormPlan, WindowKind};
use crate::quantize::Quantization;

pub use experiments::{find, registry, sufficiency_smoke, EXPERIMENT_NAMES, SMOKE_NAME};
pub use fit::{fit_log_slope, ScalingFit};
pub use report::{Report, Row, Summary, Verdict};

/// How a fitted slope is compared with its prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Claim {
    /// `|slope - predicted| ≤ tol`.
    Asymptotic,
    /// `slope ≥ predicted - tol` (growth witnesses).
    AtLeast,
    /// `slope ≤ predicted + tol`.
    AtMost,
    /// `slope ≤ tol` and `max ρ / min ρ ≤ 4`.
    Bounded,
    /// Every ratio within `tol` of 1.
    Exact,
}

/// Largest slope drift tolerated between a grid and its refinement.
pub const CONVERGENCE_TOL: f64 = 0.02;

/// Largest `max ρ / min ρ` for bounded experiments.
pub const BOUNDED_SPREAD: f64 = 4.0;

/// One fitted quantity.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub name: String,
    pub family: FamilyParams,
    pub schedule: Vec<f64>,
    /// `None` means the factor is 1 (pure norm-scaling experiments).
    pub symbol_space: Option<SpaceSpec>,
    pub input_space: Option<SpaceSpec>,
    pub output_space: SpaceSpec,
    pub quantization: Option<Quantization>,
    pub predicted_slope: Rational64,
    pub tolerance: f64,
    pub claim: Claim,
}

impl ExperimentSpec {
    fn validate(&self) -> Result<()> {
        if self.schedule.len() < 4 || self.schedule.windows(2).any(|w| w[1] <= w[0]) {
            return Err(TfError::Domain(format!("{}: schedule must be increasing with ≥ 4 points", self.name)));
        }
        if !(self.tolerance > 0.0) {
            return Err(TfError::Domain(format!("{}: tolerance must be positive", self.name)));
        }
        self.schedule.iter().try_for_each(|&s| self.family.validate(s))
    }
}

/// Specs sharing one family instance per schedule point.
pub struct Part {
    pub(crate) setup: experiments::Setup,
    pub specs: Vec<ExperimentSpec>,
}

/// A named entry of the registry.
pub struct Experiment {
    pub name: &'static str,
    pub summary: &'static str,
    pub parts: Vec<Part>,
}

/// Objects built for one schedule point.
pub(crate) struct Instance {
    pub symbol: Option<SampledSymbol>,
    pub input: Option<SampledFunction>,
    pub output: SampledFunction,
    /// Stands in for the input norm when the spec has no input space.
    pub reference: f64,
    plans: RefCell<HashMap<(bool, WindowKind), SymbolNormPlan>>,
}

impl Instance {
    pub fn new(symbol: Option<SampledSymbol>, input: Option<SampledFunction>, output: SampledFunction) -> Self {
        Instance {
            symbol,
            input,
            output,
            reference: 1.0,
            plans: RefCell::new(HashMap::new()),
        }
    }

    pub fn with_reference(mut self, r: f64) -> Self {
        self.reference = r;
        self
    }

    fn symbol_norm(&self, space: &SpaceSpec) -> Result<f64> {
        let a = self
            .symbol
            .as_ref()
            .ok_or_else(|| TfError::Domain("experiment has no symbol".into()))?;
        let separable = matches!(a.repr, SymbolRepr::Separable(_));
        let amalgam = match space.kind {
            SpaceKind::ModulationMpq => false,
            SpaceKind::AmalgamFLpLq => true,
            SpaceKind::Lp => return Ok(symbol_lp_norm(a, space.p).value),
            _ => return Ok(space.symbol_norm(a)?.value),
        };
        if !separable {
            return Ok(space.symbol_norm(a)?.value);
        }
        let key = (amalgam, space.symbol_window);
        let mut plans = self.plans.borrow_mut();
        if !plans.contains_key(&key) {
            let plan = if amalgam {
                SymbolNormPlan::amalgam_flp(a, space.symbol_window)?
            } else {
                SymbolNormPlan::modulation(a, space.symbol_window)?
            };
            plans.insert(key, plan);
        }
        Ok(plans[&key].eval(space.p, space.q))
    }

    fn measure(&self, spec: &ExperimentSpec, scale: f64) -> Result<Row> {
        let symbol_norm = match &spec.symbol_space {
            Some(s) => self.symbol_norm(s)?,
            None => 1.0,
        };
        let input_norm = match (&spec.input_space, &self.input) {
            (Some(s), Some(f)) => s.function_norm(f)?.value,
            (Some(_), None) => return Err(TfError::Domain("experiment has no input".into())),
            (None, _) => self.reference,
        };
        let output_norm = spec.output_space.function_norm(&self.output)?.value;
        Ok(Row {
            experiment: spec.name.clone(),
            scale,
            symbol_norm,
            input_norm,
            output_norm,
            ratio: output_norm / (symbol_norm * input_norm),
        })
    }
}

fn evaluate(part: &Part, scale: f64, refine: usize) -> Result<Vec<Row>> {
    let inst = part.setup.instance(scale, refine)?;
    part.specs.iter().map(|s| inst.measure(s, scale)).collect()
}

fn verdict(spec: &ExperimentSpec, fit: Option<&ScalingFit>, ratios: &[f64], drift: Option<f64>) -> Verdict {
    let pred = spec.predicted_slope.to_f64().unwrap_or(f64::NAN);
    let tol = spec.tolerance;
    let slope_ok = |f: &ScalingFit| match spec.claim {
        Claim::Asymptotic => (f.slope - pred).abs() <= tol,
        Claim::AtLeast => f.slope >= pred - tol,
        Claim::AtMost => f.slope <= pred + tol,
        Claim::Bounded => {
            let hi = ratios.iter().cloned().fold(f64::MIN, f64::max);
            let lo = ratios.iter().cloned().fold(f64::MAX, f64::min);
            f.slope <= pred + tol && hi / lo <= BOUNDED_SPREAD
        }
        Claim::Exact => true,
    };
    let ok = match spec.claim {
        Claim::Exact => ratios.iter().all(|r| (r - 1.0).abs() <= tol),
        _ => fit.is_some_and(slope_ok) && drift.map_or(true, |d| d < CONVERGENCE_TOL),
    };
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

/// Runs every part of an experiment; schedule points are evaluated in
/// parallel and collected in schedule order.
pub fn run_experiment(exp: &Experiment) -> Result<Report> {
    if exp.parts.is_empty() {
        return experiments::truth_table_report(exp.name);
    }
    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    for part in &exp.parts {
        part.specs.iter().try_for_each(|s| s.validate())?;
        let schedule = &part.specs[0].schedule;
        let per_scale: Vec<Vec<Row>> = schedule
            .par_iter()
            .map(|&s| evaluate(part, s, 1))
            .collect::<Result<_>>()?;
        let needs_check = part.specs.iter().any(|s| s.claim != Claim::Exact);
        let (first, last) = (schedule[0], schedule[schedule.len() - 1]);
        let refined: Option<(Vec<Row>, Vec<Row>)> = if needs_check {
            Some((evaluate(part, first, 2)?, evaluate(part, last, 2)?))
        } else {
            None
        };
        for (k, spec) in part.specs.iter().enumerate() {
            let spec_rows: Vec<Row> = per_scale.iter().map(|r| r[k].clone()).collect();
            let ratios: Vec<f64> = spec_rows.iter().map(|r| r.ratio).collect();
            let fit = fit_log_slope(&spec_rows.iter().map(|r| (r.scale, r.ratio)).collect::<Vec<_>>());
            let drift = refined.as_ref().map(|(a, b)| {
                let d0 = (a[k].ratio / ratios[0]).ln();
                let d1 = (b[k].ratio / ratios[ratios.len() - 1]).ln();
                (d1 - d0).abs() / (last / first).ln()
            });
            let fit = match (fit, spec.claim) {
                (Ok(f), _) => Some(f),
                (Err(_), Claim::Exact) => None,
                (Err(e), _) => return Err(e),
            };
            let v = verdict(spec, fit.as_ref(), &ratios, drift);
            summaries.push(Summary {
                experiment: spec.name.clone(),
                predicted_slope: spec.predicted_slope.to_string(),
                fitted_slope: fit.as_ref().map(|f| f.slope),
                residual: fit.as_ref().map(|f| f.max_residual),
                convergence_drift: drift,
                verdict: v,
            });
            rows.extend(spec_rows);
        }
    }
    Ok(Report {
        experiment: exp.name.to_string(),
        rows,
        summaries,
    })
}
