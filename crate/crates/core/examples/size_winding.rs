//! Size-winding report for ψ1 of Model 1 and of an SYK sample.
use wormhole_lab::models::{model1, sample_syk};
use wormhole_lab::sizewinding::{extract_coefficients, winding_report};
use wormhole_lab::spectra::ThermalContext;

fn main() -> wormhole_lab::Result<()> {
    for spec in [model1(), sample_syk(10, 1.25, 0)?] {
        let ctx = ThermalContext::from_spec(&spec, 4.0)?;
        let cs = extract_coefficients(&ctx, 1, 2.8)?;
        let rep = winding_report(&cs)?;
        println!(
            "{}: {} coefficients, W = {:.4}, r = {:.4}, r̄ = {:?}, χ = {:.4}",
            spec.label(),
            rep.n_coefficients,
            rep.w,
            rep.r,
            rep.r_bar,
            rep.fit.chi
        );
        print!("{}", rep.sizes_csv());
    }
    Ok(())
}
