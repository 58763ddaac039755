//! The lattice counterexample: a sum of N modulated bumps applied to a bump
//! of width ε/N. The symbol norm grows like N^{1/q} and the input shrinks
//! like N^{-1/r} while the output stays of size one near the origin.

use tfnorm::exponent::exp;
use tfnorm::families::{lattice, lattice_symbol, lattice_symbol_on, shrinking_bump, Envelope, SupportSide, DEFAULT_EPSILON};
use tfnorm::grid::GridSpec;
use tfnorm::norms::{lp_norm, SymbolNormPlan, WindowKind};
use tfnorm::quantize::Quantization;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = GridSpec::new(8.0, 98304)?;
    let (nx, nw) = (GridSpec::new(8.0, 8192)?, GridSpec::new(512.0, 2048)?);
    let quant = Quantization::KohnNirenberg;
    println!("lattice(4) = {:?}", lattice(4));
    println!("{:>3} {:>12} {:>12} {:>12}", "N", "‖a‖_M^{1,2}", "‖f‖_1", "|Af(0)|");
    for n in [1, 2, 4, 8, 16] {
        let a = lattice_symbol(n, grid, quant, SupportSide::Frequency)?;
        let f = shrinking_bump(n, DEFAULT_EPSILON, Envelope::SmoothBump, grid)?;
        let out = quant.apply(&a, &f)?;
        let plan = SymbolNormPlan::modulation(
            &lattice_symbol_on(n, nx, nw, quant, SupportSide::Frequency)?,
            WindowKind::BandLimited,
        )?;
        let at0 = out.values[grid.index_of(0.0)?].norm();
        println!(
            "{n:>3} {:>12.5} {:>12.6} {:>12.6}",
            plan.eval(exp("1"), exp("2")),
            lp_norm(&f, exp("1")).value,
            at0
        );
    }
    Ok(())
}
