//! `r̄` and `χ` across the learned, randomized, Ising and SYK families.
use wormhole_lab::experiments::{ensemble_rows, median};

fn main() -> wormhole_lab::Result<()> {
    let rows = ensemble_rows(4.0, &[0, 1, 2], &[0, 1, 2, 3, 4], 10, 1.25, 0.17)?;
    let mut families: Vec<&str> = Vec::new();
    for r in &rows {
        if !families.contains(&r.family.as_str()) {
            families.push(&r.family);
        }
    }
    for f in families {
        let sel: Vec<_> = rows.iter().filter(|r| r.family == f).collect();
        let rb = median(sel.iter().filter_map(|r| r.r_bar)).unwrap_or(f64::NAN);
        let chi = median(sel.iter().map(|r| r.chi)).unwrap_or(f64::NAN);
        println!(
            "{f:<9} {:>3} operators  median r̄ {rb:.3}  median χ {chi:.3}",
            sel.len()
        );
    }
    Ok(())
}
