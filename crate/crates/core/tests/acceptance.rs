//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

mod common;

use common::{compact_noise, noise_fn, noise_symbol, rel_err, smooth_fn, smooth_symbol};
use num_rational::Rational64;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::time::Instant;
use tfnorm::exponent::{exp, Exponent};
use tfnorm::grid::{GridSpec, C64};
use tfnorm::harness::{self, Report, Verdict};
use tfnorm::norms::{self, SpaceSpec};
use tfnorm::quantize::{kernel_apply, kn_apply, kn_kernel, u_transform, weyl_apply, weyl_apply_direct, weyl_kernel};
use tfnorm::region;
use tfnorm::tfa::{cross_wigner, stft, stft_point};

type Outcome = (bool, String);

const NECESSITY: [&str; 8] = [
    "t41-qr2",
    "t41-p",
    "t27-necessity",
    "t27bis-kn",
    "t27bis-weyl",
    "mod-necessity-qr",
    "mod-necessity-fourier",
    "mod-necessity-pq",
];

fn identity_grid() -> GridSpec {
    GridSpec::new(16.0, 256).unwrap()
}

fn transform_identities() -> Outcome {
    let grid = identity_grid();
    let g = norms::gaussian_window(grid);
    let mut worst = [0.0f64; 3];
    for seed in 0..4 {
        let f = smooth_fn(grid, seed);
        let v = stft(&f, &g, 2).unwrap();
        let scale = v.abs_values().into_iter().fold(0.0, f64::max);

        // V_g f(x, .) is the Fourier transform of f · T_x conj(g)
        for n in (0..v.nx()).step_by(7) {
            let local = f.mul(&g.translate(v.x(n)).unwrap().conj()).unwrap().dft();
            for k in (0..v.nw()).step_by(5) {
                let j = grid.dual().index_of(v.omega(k)).unwrap();
                let e = (local.values[j] - v.get(n, k)).norm() / scale;
                worst[0] = worst[0].max(e);
            }
        }

        // covariance under M_ξ T_y
        let (y, xi) = (0.75, -0.5);
        let shifted = f.translate(y).unwrap().modulate(xi).unwrap();
        for (x, w) in [(0.0, 0.0), (1.25, 0.3), (-2.5, -1.1), (3.0, 0.85)] {
            let lhs = stft_point(&shifted, &g, x, w).unwrap();
            let rhs = C64::from_polar(1.0, -2.0 * PI * (w - xi) * y) * stft_point(&f, &g, x - y, w - xi).unwrap();
            worst[1] = worst[1].max((lhs - rhs).norm() / scale);
        }

        // STFT of a cross-Wigner distribution with window W(φ, φ)
        let h = smooth_fn(grid, seed + 100);
        let wig = cross_wigner(&h, &f).unwrap();
        let phi = |x: f64, w: f64| 2.0 * (-2.0 * PI * (x * x + w * w)).exp();
        for (z1, z2, s1, s2) in [(0.0, 0.0, 0.0, 0.0), (0.5, 0.2, 0.4, -0.25), (-1.0, -0.7, -0.3, 1.0), (1.5, 1.1, 0.9, 0.5)] {
            let mut lhs = C64::new(0.0, 0.0);
            for (i, x) in wig.xgrid.points().enumerate() {
                for (k, w) in wig.wgrid.points().enumerate() {
                    let win = phi(x - z1, w - z2);
                    if win > 1e-18 {
                        lhs += wig.value(i, k) * win * C64::from_polar(1.0, -2.0 * PI * (s1 * x + s2 * w));
                    }
                }
            }
            lhs *= wig.cell();
            let vf = stft_point(&f, &g, z1 + s2 / 2.0, z2 - s1 / 2.0).unwrap();
            let vh = stft_point(&h, &g, z1 - s2 / 2.0, z2 + s1 / 2.0).unwrap();
            let rhs = C64::from_polar(1.0, -2.0 * PI * z2 * s2) * vf.conj() * vh;
            worst[2] = worst[2].max((lhs - rhs).norm() / (scale * scale));
        }
    }
    let ok = worst.iter().all(|&e| e < 1e-6);
    (
        ok,
        format!(
            "fourier-of-product {:.1e}, covariance {:.1e}, wigner-stft {:.1e}",
            worst[0], worst[1], worst[2]
        ),
    )
}

fn quantization_consistency() -> Outcome {
    let grid = identity_grid();
    let mut worst = [0.0f64; 4];
    for t in 0..20u64 {
        let a = smooth_symbol(grid, 1000 + t);
        let f = smooth_fn(grid, 2000 + t);
        let h = smooth_fn(grid, 3000 + t);
        let rough = noise_symbol(grid, grid.dual(), 4000 + t);

        for sym in [&a, &rough] {
            let fast = kn_apply(sym, &f).unwrap();
            let slow = kernel_apply(&kn_kernel(sym).unwrap(), &f).unwrap();
            worst[0] = worst[0].max(rel_err(&fast, &slow));
            let fast = weyl_apply(sym, &f).unwrap();
            let slow = kernel_apply(&weyl_kernel(sym).unwrap(), &f).unwrap();
            let direct = weyl_apply_direct(sym, &f).unwrap();
            worst[1] = worst[1].max(rel_err(&fast, &slow)).max(rel_err(&fast, &direct));
        }

        let kn = kn_apply(&a, &f).unwrap();
        let via_weyl = weyl_apply(&u_transform(&a, true), &f).unwrap();
        worst[2] = worst[2].max(rel_err(&via_weyl, &kn));

        let lhs = weyl_apply(&a, &f).unwrap().inner(&h).unwrap();
        let rhs = a.inner(&cross_wigner(&h, &f).unwrap()).unwrap();
        worst[3] = worst[3].max((lhs - rhs).norm() / lhs.norm());
    }
    let ok = worst.iter().all(|&e| e < 1e-8);
    (
        ok,
        format!(
            "kn/kernel {:.1e}, weyl/kernel {:.1e}, kn/U {:.1e}, wigner pairing {:.1e}",
            worst[0], worst[1], worst[2], worst[3]
        ),
    )
}

const EXPONENTS: [&str; 5] = ["1", "3/2", "2", "4", "inf"];

fn pick(rng: &mut rand_chacha::ChaCha8Rng) -> Exponent {
    use rand::Rng;
    exp(EXPONENTS[rng.gen_range(0..EXPONENTS.len())])
}

/// Largest `max/min` of `‖u‖_{M^{p,q}} / ‖u‖_{FL^q}` over bumps supported in `[-1, 1]`.
const LLOC_SPREAD: f64 = 4.0;

fn norm_properties() -> Outcome {
    use rand::{Rng, SeedableRng};
    let grid = GridSpec::new(8.0, 128).unwrap();
    let kinds = ["Lp", "WLpLq", "FLp", "WFLpLq", "M"];
    let mut failures = Vec::new();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
    for kind in kinds {
        let (mut homog, mut tri) = (0.0f64, f64::NEG_INFINITY);
        for s in 0..100u64 {
            let (p, q) = (pick(&mut rng), pick(&mut rng));
            let spec = SpaceSpec::new(kind.parse().unwrap(), p, q);
            let f = noise_fn(grid, 10_000 + s);
            let g = smooth_fn(grid, 20_000 + s);
            let c = C64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let nf = spec.function_norm(&f).unwrap().value;
            let ncf = spec.function_norm(&f.scale(c)).unwrap().value;
            homog = homog.max((ncf - c.norm() * nf).abs() / (c.norm() * nf));
            let ng = spec.function_norm(&g).unwrap().value;
            let nsum = spec.function_norm(&f.add(&g).unwrap()).unwrap().value;
            tri = tri.max((nsum - nf - ng) / (nf + ng));
        }
        if homog > 1e-10 || tri > 1e-10 {
            failures.push(format!("{kind}: homogeneity {homog:.1e} triangle {tri:.1e}"));
        }
    }

    let (mut collapse, mut moyal, mut mixed) = (0.0f64, 0.0f64, 0.0f64);
    for s in 0..100u64 {
        let p = pick(&mut rng);
        let f = noise_fn(grid, 30_000 + s);
        let lp = norms::lp_norm(&f, p).value;
        collapse = collapse.max((norms::amalgam_norm(&f, p, p).unwrap().value - lp).abs() / lp);
        let h = smooth_fn(grid, 30_500 + s);
        let m22 = norms::modulation_norm(&h, exp("2"), exp("2"), None).unwrap().value;
        moyal = moyal.max((m22 - h.l2_norm()).abs() / h.l2_norm());
        let a = noise_symbol(GridSpec::new(4.0, 16).unwrap(), GridSpec::new(4.0, 32).unwrap(), 40_000 + s);
        let pp = norms::mixed_norm(&a, p, p, norms::MixedOrder::InnerXOuterOmega).value;
        let lp = norms::symbol_lp_norm(&a, p).value;
        mixed = mixed.max((pp - lp).abs() / lp);
    }
    if collapse > 1e-12 || moyal > 1e-8 || mixed > 1e-12 {
        failures.push(format!("p=q: amalgam {collapse:.1e} M22 {moyal:.1e} mixed {mixed:.1e}"));
    }

    let mut spread = 0.0f64;
    for q in ["1", "2", "inf"] {
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for s in 0..100u64 {
            let u = compact_noise(grid, 1.0, 50_000 + s);
            let flq = norms::flp_norm(&u, exp(q)).value;
            for p in ["1", "2", "inf"] {
                let r = norms::modulation_norm(&u, exp(p), exp(q), None).unwrap().value / flq;
                lo = lo.min(r);
                hi = hi.max(r);
            }
        }
        spread = spread.max(hi / lo);
    }
    if spread > LLOC_SPREAD {
        failures.push(format!("local ratio spread {spread:.2}"));
    }
    let detail = if failures.is_empty() {
        format!("5 kinds x 100 inputs, local ratio spread {spread:.2}")
    } else {
        failures.join("; ")
    };
    (failures.is_empty(), detail)
}

fn rational(s: &str) -> f64 {
    let r: Rational64 = s.parse().expect("rational slope");
    *r.numer() as f64 / *r.denom() as f64
}

fn summaries(report: &Report) -> impl Iterator<Item = (f64, f64, &harness::Summary)> {
    report.summaries.iter().map(|s| {
        let fitted = s.fitted_slope.unwrap_or(f64::NAN);
        (rational(&s.predicted_slope), fitted, s)
    })
}

fn chirp_slopes(reports: &HashMap<String, Report>) -> Outcome {
    let r = &reports["chirp-l1"];
    let mut ok = r.passed() && !r.summaries.is_empty();
    let mut parts = Vec::new();
    for (pred, fit, _) in summaries(r) {
        let tol = if pred == 0.0 { 0.01 } else { 0.1 };
        ok &= (fit - pred).abs() <= tol;
        parts.push(format!("{pred:+.3}->{fit:+.4}"));
    }
    (ok, parts.join(" "))
}

fn necessity(reports: &HashMap<String, Report>) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for name in NECESSITY {
        let r = &reports[name];
        for (pred, fit, s) in summaries(r) {
            let good = s.verdict == Verdict::Pass && pred - 0.1 > 0.0 && fit >= pred - 0.1;
            ok &= good;
            parts.push(format!("{name} {fit:.3}>={:.3}", pred - 0.1));
        }
    }
    (ok, parts.join(", "))
}

fn sufficiency(report: &Report) -> Outcome {
    let worst = report
        .summaries
        .iter()
        .filter_map(|s| s.fitted_slope)
        .fold(f64::NEG_INFINITY, f64::max);
    let n = report.summaries.len();
    let ok = report.passed() && n == 30 && worst <= 0.1;
    (ok, format!("{n} tuples, largest slope {worst:+.4}"))
}

fn truth_table(reports: &HashMap<String, Report>) -> Outcome {
    let rows = region::truth_table();
    let ok = reports["region-truth-table"].passed() && rows.len() == 64;
    (ok, format!("{} rows", rows.len()))
}

fn delta(reports: &HashMap<String, Report>) -> Outcome {
    let r = &reports["delta-amalgam"];
    let worst = r.rows.iter().map(|row| (row.ratio - 1.0).abs()).fold(0.0, f64::max);
    (r.passed() && worst <= 1e-4, format!("max |ratio - 1| {worst:.1e}"))
}

fn run_all(dir: &Path) -> i32 {
    let args = ["tfnorm", "experiment", "--all", "--out", dir.to_str().unwrap()];
    let (mut out, mut err) = (Vec::new(), Vec::new());
    tfnorm::cli::run(args, &mut out, &mut err)
}

fn reproducibility(a: &Path, b: &Path) -> Outcome {
    let mut names: Vec<_> = fs::read_dir(a)
        .unwrap()
        .filter_map(|e| e.ok())
        .map(|e| e.file_name())
        .filter(|n| n.to_string_lossy().ends_with(".csv"))
        .collect();
    names.sort();
    let differing: Vec<String> = names
        .iter()
        .filter(|n| fs::read(a.join(n)).ok() != fs::read(b.join(n)).ok())
        .map(|n| n.to_string_lossy().into_owned())
        .collect();
    let ok = names.len() == harness::EXPERIMENT_NAMES.len() && differing.is_empty();
    (ok, format!("{} csv files, {} differ {:?}", names.len(), differing.len(), differing))
}

fn line(name: &'static str, o: Outcome, results: &mut Vec<(&'static str, Outcome)>) {
    println!("{} {name}: {}", if o.0 { "PASS" } else { "FAIL" }, o.1);
    results.push((name, o));
}

fn main() {
    let start = Instant::now();
    let mut results: Vec<(&'static str, Outcome)> = Vec::new();
    line("1 transform identities", transform_identities(), &mut results);
    line("2 quantization consistency", quantization_consistency(), &mut results);

    let first = tempfile::tempdir().unwrap();
    let second = tempfile::tempdir().unwrap();
    let code = run_all(first.path());
    let reports: HashMap<String, Report> = harness::EXPERIMENT_NAMES
        .iter()
        .map(|n| (n.to_string(), harness::run_experiment(&harness::find(n).unwrap()).unwrap()))
        .collect();
    line("3 chirp slopes", chirp_slopes(&reports), &mut results);
    line("4 necessity witnesses", necessity(&reports), &mut results);
    let smoke = harness::run_experiment(&harness::sufficiency_smoke()).unwrap();
    line("5 sufficiency smoke", sufficiency(&smoke), &mut results);
    line("6 region truth table", truth_table(&reports), &mut results);
    line("7 delta amalgam", delta(&reports), &mut results);
    line("8 norm properties", norm_properties(), &mut results);
    let code2 = run_all(second.path());
    let (ok, detail) = reproducibility(first.path(), second.path());
    line(
        "9 reproducibility",
        (ok, format!("{detail}, exit codes {code}/{code2}")),
        &mut results,
    );

    let failed = results.iter().filter(|(_, o)| !o.0).count();
    println!("{} of {} criteria pass ({:.0}s)", results.len() - failed, results.len(), start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
