//! Programmatic equivalent of `wormhole-lab run teleport-symmetric ...`.
use wormhole_lab::experiments::{self, emit_plots, ExperimentConfig};

fn main() -> wormhole_lab::Result<()> {
    let out = std::env::temp_dir().join("wormhole-lab-example");
    let overrides = [
        ("model", "model1"),
        ("pairs", "trained"),
        ("syk_seeds", "2"),
        ("out", out.to_str().expect("utf-8 temp path")),
    ]
    .map(|(k, v)| (k.to_string(), v.to_string()));
    let cfg = ExperimentConfig::resolve("teleport-symmetric", None, &overrides)?;
    print!("{}", cfg.to_kv());
    let bundle = experiments::run(&cfg)?;
    println!(
        "status {}, {} files in {}",
        bundle.manifest.status,
        bundle.manifest.files.len(),
        bundle.dir.display()
    );
    for p in emit_plots(&bundle.dir)? {
        println!("plot script {}", p.display());
    }
    Ok(())
}
