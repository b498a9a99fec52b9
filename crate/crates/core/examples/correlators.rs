//! Two- and four-point functions of Model 1 against an SYK sample.
use wormhole_lab::models::{model1, sample_syk};
use wormhole_lab::spectra::{
    averaged_traces, four_point_same, time_grid, two_point, Family, ThermalContext,
};

fn main() -> wormhole_lab::Result<()> {
    let times = time_grid(0.0, 40.0, 0.05)?;
    let m1 = ThermalContext::from_spec(&model1(), 4.0)?;
    let syk = ThermalContext::from_spec(&sample_syk(10, 1.125, 0)?, 4.0)?;
    println!(
        "⟨H⟩_β: Model 1 {:.4}, SYK {:.4}",
        m1.mean_energy(),
        syk.mean_energy()
    );

    for i in 1..=7 {
        let g = two_point(&m1, i, &times)?;
        println!(
            "Model 1 G_{i}: min {:+.3}, revival after dropping below 0.1: {:?}",
            g.min_on(0.0, 40.0),
            g.revival_after_drop(0.1)
                .map(|v| (v * 1000.0).round() / 1000.0)
        );
    }
    let ops: Vec<usize> = (1..=10).collect();
    let g = averaged_traces(&syk, Family::TwoPoint, &ops, &times)?;
    println!(
        "SYK G_avg: max |G| on [20,40] = {:.3}",
        g.max_abs_on(20.0, 40.0)
    );
    let f = four_point_same(&syk, 1, &times)?;
    println!(
        "SYK F_1: max {:.3}, value at t=40 {:.3}",
        f.max_on(0.0, 40.0),
        f.at(40.0)
    );
    Ok(())
}
