//! The learned Hamiltonians and the random ensembles.
use wormhole_lab::models::{
    model1, model2, model2_commuting_reduction, model3, randomize_coefficients, sample_ising,
    sample_random_commuting, sample_syk,
};

fn main() -> wormhole_lab::Result<()> {
    for spec in [model1(), model2(), model3(), model2_commuting_reduction()] {
        println!(
            "{:<22} {} terms, commuting: {}, RMS coefficient {:.4}",
            spec.label(),
            spec.terms().len(),
            spec.is_fully_commuting(),
            spec.rms_coefficient()
        );
        for t in spec.terms() {
            println!("    {:+.4} {}", t.coefficient, t.support);
        }
    }
    let syk = sample_syk(10, 1.25, 0)?;
    println!(
        "SYK N=10 seed 0: {} terms, RMS {:.4}",
        syk.terms().len(),
        syk.rms_coefficient()
    );
    let rc = randomize_coefficients(&model1(), 1)?;
    println!(
        "randomized coefficients: {:?}",
        rc.terms().iter().map(|t| t.coefficient).collect::<Vec<_>>()
    );
    let rt = sample_random_commuting(7, 5, 1)?;
    println!(
        "random commuting model: {:?}",
        rt.terms()
            .iter()
            .map(|t| t.support.to_string())
            .collect::<Vec<_>>()
    );
    let ising = sample_ising(4, 0.17, 0)?;
    println!(
        "Ising 4 spins: {} couplings, energies {:?}",
        ising.couplings.len(),
        &ising.energies()[..4]
    );
    println!("{}", model1().to_json()?);
    Ok(())
}
