//! Lq norms of the Fourier transform of the chirp h(x)e^{-πiλx²}, with
//! fitted log-log slopes.

use tfnorm::exponent::exp;
use tfnorm::families::{chirp_h, Envelope};
use tfnorm::grid::GridSpec;
use tfnorm::harness::fit_log_slope;
use tfnorm::norms::lp_norm;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = GridSpec::new(8.0, 4096)?;
    let lambdas: Vec<f64> = (0..7).map(|k| (1u64 << k) as f64).collect();
    let spectra = lambdas
        .iter()
        .map(|&l| Ok(chirp_h(l, Envelope::SmoothBump, grid)?.dft()))
        .collect::<tfnorm::error::Result<Vec<_>>>()?;
    for q in ["1", "2", "4", "inf"] {
        let pts: Vec<(f64, f64)> = lambdas.iter().zip(&spectra).map(|(l, s)| (*l, lp_norm(s, exp(q)).value)).collect();
        let fit = fit_log_slope(&pts)?;
        println!("q = {q:<3}  slope {:+.4}  (1/q - 1/2 = {:+.4})", fit.slope, exp(q).recip_f64() - 0.5);
    }
    Ok(())
}
