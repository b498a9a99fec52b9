//! Majorana strings, their products and Jordan–Wigner images.
use wormhole_lab::pauli_algebra::{
    jordan_wigner, majorana_word, realize_string, string_product, strings_commute, MajoranaString,
};

fn main() -> wormhole_lab::Result<()> {
    let n = 8;
    let a = MajoranaString::from_indices(n, &[1, 2, 3, 4])?;
    let b = MajoranaString::from_indices(n, &[3, 4, 5, 6])?;
    let c = MajoranaString::from_indices(n, &[1, 5, 7, 8])?;
    let p = string_product(&a, &b)?;
    println!("{a} · {b} = {} {}", p.prefactor, p.string);
    println!("[{a}, {b}] = 0: {}", strings_commute(&a, &b)?);
    println!("[{a}, {c}] = 0: {}", strings_commute(&a, &c)?);

    for i in 1..=n {
        let w = majorana_word(i, n / 2)?;
        println!("ψ{i} -> phase {} x={:04b} z={:04b}", w.phase, w.x, w.z);
    }
    let psi = jordan_wigner(1, 4)?;
    let sq = psi.matrix() * psi.matrix();
    println!("(ψ1)² = {} · 1", sq[(0, 0)]);
    let d = realize_string(&a, 4)?;
    println!(
        "‖ψ^{{1234}}‖_F = {:.6}, hermitian deviation {:.1e}",
        d.frobenius_norm(),
        d.hermiticity_deviation()
    );
    Ok(())
}
