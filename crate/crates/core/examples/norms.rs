//! Every norm kind on a single box function, plus a symbol.

use tfnorm::exponent::exp;
use tfnorm::grid::{GridSpec, SampledFunction, SampledSymbol};
use tfnorm::norms::{SpaceKind, SpaceSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = GridSpec::new(8.0, 512)?;
    let boxf = SampledFunction::from_real_fn(grid, |x| if (-0.5..0.5).contains(&x) { 1.0 } else { 0.0 });
    let pairs = [("1", "1"), ("2", "2"), ("1", "inf"), ("inf", "1")];
    for kind in [SpaceKind::Lp, SpaceKind::AmalgamLpLq, SpaceKind::FLp, SpaceKind::AmalgamFLpLq, SpaceKind::ModulationMpq] {
        for (p, q) in pairs {
            let spec = SpaceSpec::new(kind, exp(p), exp(q));
            println!("{spec:<24} {:.8}", spec.function_norm(&boxf)?.value);
        }
    }

    let g = GridSpec::new(8.0, 128)?;
    let u = SampledFunction::from_real_fn(g, |x| (-std::f64::consts::PI * x * x).exp());
    let a = SampledSymbol::tensor(&u, &u);
    for kind in [SpaceKind::Lp, SpaceKind::MixedLpq, SpaceKind::ModulationMpq] {
        let spec = SpaceSpec::new(kind, exp("1"), exp("2"));
        println!("symbol {spec:<17} {:.8}", spec.symbol_norm(&a)?.value);
    }
    Ok(())
}
