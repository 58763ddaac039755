//! Short-time Fourier transform of a two-atom signal, its spectrogram peak
//! and reconstruction from the sampled transform.

use tfnorm::grid::{gaussian, GridSpec, SampledFunction, C64};
use tfnorm::tfa::{istft, stft};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = GridSpec::new(16.0, 256)?;
    let g = gaussian(grid);
    let f = g.translate(-2.0)?.modulate(1.5)?.add(&g.translate(3.0)?.modulate(-0.5)?)?;

    let v = stft(&f, &g, 4)?;
    println!("lattice {} x {} (steps {} and {})", v.nx(), v.nw(), v.xstep(), v.wstep());
    println!("‖V_g f‖₂ = {:.10}   ‖f‖₂ = {:.10}", v.l2_norm(), f.l2_norm());

    let (mut best, mut at) = (0.0, (0.0, 0.0));
    for n in 0..v.nx() {
        for k in 0..v.nw() {
            let a = v.get(n, k).norm();
            if a > best {
                best = a;
                at = (v.x(n), v.omega(k));
            }
        }
    }
    println!("spectrogram peak {best:.4} at x = {}, ω = {}", at.0, at.1);

    let back: SampledFunction = istft(&v, &g)?;
    let err = back.add(&f.scale(C64::new(-1.0, 0.0)))?.l2_norm() / f.l2_norm();
    println!("reconstruction error {err:.2e}");
    Ok(())
}
