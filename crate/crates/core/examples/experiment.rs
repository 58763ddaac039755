//! Runs registered scaling experiments and prints their verdicts.
//!
//! `cargo run --release --example experiment -- t27-necessity chirp-l1`

use std::time::Instant;

use tfnorm::harness::{find, run_experiment, EXPERIMENT_NAMES};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let names: Vec<String> = if args.is_empty() {
        EXPERIMENT_NAMES.iter().map(|s| s.to_string()).collect()
    } else {
        args
    };
    for name in names {
        let t = Instant::now();
        let report = run_experiment(&find(&name)?)?;
        print!("{}", report.text());
        if std::env::var_os("SHOW_ROWS").is_some() {
            print!("{}", report.to_csv());
        }
        println!("  ({name}: {:.1}s)", t.elapsed().as_secs_f64());
    }
    Ok(())
}
