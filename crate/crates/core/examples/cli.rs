//! Drives the `tfnorm` command line in-process: writes a sample file, takes
//! a norm and applies a symbol.

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("tfnorm-cli-example");
    std::fs::create_dir_all(&dir)?;
    let path = |name: &str| dir.join(name).to_string_lossy().into_owned();
    let (g, a) = (path("gauss.txt"), path("symbol.txt"));
    let runs: Vec<Vec<String>> = vec![
        vec!["sample".into(), "gaussian".into(), "--out".into(), g.clone()],
        vec!["sample".into(), "tensor-symbol".into(), "--out".into(), a.clone()],
        vec!["norm".into(), "--space".into(), "M".into(), "--p".into(), "2".into(), g.clone()],
        vec!["norm".into(), "--space".into(), "WLpLq".into(), "--p".into(), "1".into(), "--q".into(), "inf".into(), g.clone()],
        vec![
            "apply".into(), "--symbol".into(), a, "--function".into(), g,
            "--quantization".into(), "weyl".into(), "--check-dual-path".into(), "--out".into(), path("out.txt"),
        ],
    ];
    for args in runs {
        println!("$ tfnorm {}", args.join(" "));
        let mut out = Vec::new();
        let code = tfnorm::cli::run(
            std::iter::once("tfnorm".to_string()).chain(args),
            &mut out,
            &mut std::io::stderr(),
        );
        print!("{}", String::from_utf8_lossy(&out));
        println!("exit {code}");
    }
    Ok(())
}
