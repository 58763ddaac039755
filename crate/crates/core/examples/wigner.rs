//! Cross-Wigner distribution: the Gaussian closed form and the marginal.

use std::f64::consts::PI;

use tfnorm::grid::{gaussian, GridSpec};
use tfnorm::tfa::cross_wigner;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = GridSpec::new(16.0, 256)?;
    let g = gaussian(grid);
    let w = cross_wigner(&g, &g)?;

    let mut err: f64 = 0.0;
    for (i, x) in grid.points().enumerate() {
        for (k, om) in w.wgrid.points().enumerate() {
            let exact = 2.0 * (-2.0 * PI * (x * x + om * om)).exp();
            err = err.max((w.value(i, k) - exact).norm());
        }
    }
    println!("max |W g - 2e^(-2π(x²+ω²))| = {err:.2e}");

    let f = g.translate(1.0)?.modulate(0.75)?;
    let wf = cross_wigner(&f, &f)?;
    let imag = wf.values().iter().map(|v| v.im.abs()).fold(0.0, f64::max);
    println!("max |Im W f| = {imag:.2e}");
    let i = grid.index_of(1.0)?;
    let marginal: f64 = wf.row(i).iter().map(|v| v.re).sum::<f64>() * wf.wgrid.step();
    println!("∫ W f(1, ω) dω = {marginal:.10}   |f(1)|² = {:.10}", f.values[i].norm_sqr());
    Ok(())
}
