//! Finite-size trend of `r̄` in random all-to-all Ising models.
use wormhole_lab::experiments::{ising_scaling_rows, scaling_medians};

fn main() -> wormhole_lab::Result<()> {
    let sizes = [4, 5, 6, 7, 8];
    let rows = ising_scaling_rows(&sizes, &[0, 1, 2], 0.17, 4.0)?;
    for (n, m, per_seed) in scaling_medians(&rows, &sizes) {
        let per: Vec<String> = per_seed.iter().map(|v| format!("{v:.3}")).collect();
        println!("N = {n}: median r̄ {m:.3} (per seed {})", per.join(", "));
    }
    Ok(())
}
