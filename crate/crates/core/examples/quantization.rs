//! Kohn-Nirenberg and Weyl quantization of one symbol, the chirp
//! multiplier that converts between them, and the Wigner pairing.

use std::f64::consts::PI;

use tfnorm::grid::{gaussian, GridSpec, SampledFunction, SampledSymbol, C64};
use tfnorm::quantize::{kernel_apply, kn_apply, kn_kernel, u_transform, weyl_apply, weyl_apply_direct};
use tfnorm::tfa::cross_wigner;

fn rel(a: &SampledFunction, b: &SampledFunction) -> f64 {
    a.add(&b.scale(C64::new(-1.0, 0.0))).unwrap().l2_norm() / b.l2_norm()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = GridSpec::new(16.0, 256)?;
    let a = SampledSymbol::from_fn(grid, grid.dual(), |x, w| {
        let env = (-PI * ((x - 0.5).powi(2) + w * w) / 2.0).exp();
        C64::from_polar(env, PI * x * w / 3.0)
    });
    let f = gaussian(grid).translate(0.25)?.modulate(-0.5)?;

    let kn = kn_apply(&a, &f)?;
    let kn_k = kernel_apply(&kn_kernel(&a)?, &f)?;
    println!("Kohn-Nirenberg: fast vs kernel {:.2e}", rel(&kn, &kn_k));

    let weyl = weyl_apply(&a, &f)?;
    println!("Weyl: fast vs midpoint quadrature {:.2e}", rel(&weyl, &weyl_apply_direct(&a, &f)?));

    let sigma = u_transform(&a, true);
    println!("a(x,D) vs Weyl operator of U⁻¹a {:.2e}", rel(&weyl_apply(&sigma, &f)?, &kn));

    let h = gaussian(grid).translate(-0.5)?;
    let lhs = weyl.inner(&h)?;
    let rhs = a.inner(&cross_wigner(&h, &f)?)?;
    println!("⟨L_a f, h⟩ = {lhs:.8}   ⟨a, W(h,f)⟩ = {rhs:.8}");
    Ok(())
}
