//! Boundedness regions: query a tuple, or print the truth table.
//!
//! `cargo run --example region -- 2,1,4,4`

use tfnorm::region::{truth_table, ExponentTuple, Target};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.is_empty() {
        for (target, t, bounded) in truth_table() {
            println!("{target:?} {t}: {}", if bounded { "bounded" } else { "unbounded" });
        }
        return Ok(());
    }
    for a in args {
        let t = ExponentTuple::parse(&a)?;
        for target in [Target::Lebesgue, Target::Amalgam, Target::Modulation] {
            if target == Target::Lebesgue && t.s.is_some() {
                continue;
            }
            println!("{t} on {target:?}: {}", t.contains(target));
        }
    }
    Ok(())
}
