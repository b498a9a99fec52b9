//! Majorana-string algebra on bit masks and its Jordan–Wigner realization.
//!
//! Majoranas are realized on `n_q` qubits as
//! `ψ^{2k-1} = 2^{-1/2} Z_1⋯Z_{k-1} X_k` and `ψ^{2k} = 2^{-1/2} Z_1⋯Z_{k-1} Y_k`.
//! Odd Majorana counts are embedded in `⌈N/2⌉` qubits; the highest register
//! Majorana is then simply absent from the Hamiltonian.

mod dense;
mod majorana;
mod pauli;

pub use dense::{DenseOperator, HERMITIAN_TOL};
pub use majorana::{string_product, strings_commute, MajoranaString, ScaledString, MAX_SITES};
pub use pauli::{Pauli, PauliWord};

use crate::error::{Error, Result};
use crate::models::HamiltonianSpec;
use crate::C64;

/// Qubit count needed to host `n_maj` Majoranas.
pub fn qubits_for(n_maj: usize) -> usize {
    n_maj.div_ceil(2)
}

/// Pauli word of the single Majorana `ψ^i` on `n_q` qubits.
pub fn majorana_word(i: usize, n_q: usize) -> Result<PauliWord> {
    if i == 0 || i > 2 * n_q {
        return Err(Error::IndexOutOfRange(format!(
            "Majorana index {i} outside 1..={} for {n_q} qubits",
            2 * n_q
        )));
    }
    let k = (i - 1) / 2; // 0-based qubit carrying X or Y
    let mut w = PauliWord::identity(n_q);
    for q in 0..k {
        w = w.mul(&PauliWord::single(n_q, q, Pauli::Z)?);
    }
    let head = if i % 2 == 1 { Pauli::X } else { Pauli::Y };
    // the Z string sits on different qubits, so the order is immaterial
    w = w.mul(&PauliWord::single(n_q, k, head)?);
    Ok(w.scaled(C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0)))
}

/// All register Majoranas `ψ^1 … ψ^{2 n_q}` as Pauli words.
pub fn majorana_table(n_q: usize) -> Vec<PauliWord> {
    (1..=2 * n_q)
        .map(|i| majorana_word(i, n_q).expect("index in range"))
        .collect()
}

/// Pauli word of the ascending product `ψ^P` on `n_q` qubits.
pub fn string_word(s: &MajoranaString, n_q: usize) -> Result<PauliWord> {
    if s.indices().last().is_some_and(|&i| i > 2 * n_q) {
        return Err(Error::IndexOutOfRange(format!(
            "string {s} does not fit on {n_q} qubits"
        )));
    }
    let mut w = PauliWord::identity(n_q);
    for i in s.indices() {
        w = w.mul(&majorana_word(i, n_q)?);
    }
    Ok(w)
}

/// Unit-normalized Hermitian representative of `ψ^P`:
/// `2^{|P|/2} i^{|P|(|P|-1)/2} ψ^P`, a Pauli string up to sign with
/// `Tr(Ŵ^2)/d = 1`.
pub fn hermitian_string_word(s: &MajoranaString, n_q: usize) -> Result<PauliWord> {
    let k = s.size();
    let rot = match (k * k.saturating_sub(1) / 2) % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    };
    Ok(string_word(s, n_q)?.scaled(rot * 2f64.powf(k as f64 / 2.0)))
}

/// Dense matrix of `ψ^i` on `n_q` qubits.
pub fn jordan_wigner(i: usize, n_q: usize) -> Result<DenseOperator> {
    DenseOperator::hermitian(majorana_word(i, n_q)?.to_dense(), "Majorana operator")
}

/// Dense matrix of the Majorana string `ψ^P`.
pub fn realize_string(s: &MajoranaString, n_q: usize) -> Result<DenseOperator> {
    DenseOperator::from_matrix(string_word(s, n_q)?.to_dense())
}

/// `exp(-θ ψ^a ψ^b) = cos(θ/2) - sin(θ/2)·2ψ^aψ^b`, which conjugates
/// `ψ^a → cos θ ψ^a + sin θ ψ^b` and `ψ^b → cos θ ψ^b − sin θ ψ^a`.
pub fn plane_rotation(a: usize, b: usize, theta: f64, n_q: usize) -> Result<DenseOperator> {
    if a == b {
        return Err(Error::InvalidArgument(format!("rotation plane ({a},{a})")));
    }
    let gen = majorana_word(a, n_q)?
        .mul(&majorana_word(b, n_q)?)
        .scaled(C64::new(-2.0 * (theta / 2.0).sin(), 0.0));
    let mut m = gen.to_dense();
    for k in 0..m.nrows() {
        m[(k, k)] += C64::new((theta / 2.0).cos(), 0.0);
    }
    DenseOperator::from_matrix(m)
}

/// `H = Σ_k c_k ψ^{P_k}` as a dense Hermitian matrix.
pub fn realize(spec: &HamiltonianSpec, n_q: usize) -> Result<DenseOperator> {
    if spec.n_maj() > 2 * n_q {
        return Err(Error::Dimension(format!(
            "{} Majoranas do not fit on {n_q} qubits",
            spec.n_maj()
        )));
    }
    let d = 1usize << n_q;
    let mut m = nalgebra::DMatrix::<C64>::zeros(d, d);
    for term in spec.terms() {
        let w = string_word(&term.support, n_q)?.scaled(C64::new(term.coefficient, 0.0));
        for b in 0..d as u64 {
            let sign = if (w.z & b).count_ones() % 2 == 0 {
                1.0
            } else {
                -1.0
            };
            m[((b ^ w.x) as usize, b as usize)] += w.phase * sign;
        }
    }
    DenseOperator::hermitian(m, &format!("Hamiltonian '{}'", spec.label()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_majorana_on_one_qubit_is_x_over_root_two() {
        let m = jordan_wigner(1, 1).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((m.matrix()[(0, 1)] - C64::new(r, 0.0)).norm() < 1e-15);
        assert!((m.matrix()[(1, 0)] - C64::new(r, 0.0)).norm() < 1e-15);
        assert!(m.matrix()[(0, 0)].norm() < 1e-15);
    }

    #[test]
    fn majorana_index_bounds() {
        assert!(jordan_wigner(0, 2).is_err());
        assert!(jordan_wigner(5, 2).is_err());
        assert!(jordan_wigner(4, 2).is_ok());
    }

    #[test]
    fn anticommutators_on_four_qubits() {
        let ops: Vec<_> = (1..=8).map(|i| jordan_wigner(i, 4).unwrap()).collect();
        let id = DenseOperator::identity(4);
        for (a, oa) in ops.iter().enumerate() {
            for (b, ob) in ops.iter().enumerate() {
                let ac = oa.anticommutator(ob);
                let expect = if a == b {
                    id.clone()
                } else {
                    DenseOperator::zeros(4)
                };
                assert!((&ac - &expect).frobenius_norm() < 1e-12);
            }
        }
    }

    #[test]
    fn trace_orthogonality() {
        let n_q = 3;
        for i in 1..=6 {
            for j in 1..=6 {
                let t = (&jordan_wigner(i, n_q).unwrap() * &jordan_wigner(j, n_q).unwrap()).trace();
                let expect = if i == j { (1 << n_q) as f64 / 2.0 } else { 0.0 };
                assert!(
                    (t - C64::new(expect, 0.0)).norm() < 1e-12,
                    "({i},{j}) -> {t}"
                );
            }
        }
    }

    #[test]
    fn hermitian_representatives_square_to_identity() {
        let n_q = 3;
        for mask in 0u64..64 {
            let s = MajoranaString::from_mask(6, mask).unwrap();
            let w = hermitian_string_word(&s, n_q).unwrap();
            let d = w.to_dense();
            assert!((&d - d.adjoint()).norm() < 1e-12, "{s} not Hermitian");
            let sq = &d * &d;
            assert!((sq - nalgebra::DMatrix::<C64>::identity(8, 8)).norm() < 1e-12);
        }
    }

    #[test]
    fn empty_spec_realizes_to_zero() {
        let spec = HamiltonianSpec::new("empty", 4, vec![]).unwrap();
        assert!(realize(&spec, 2).unwrap().frobenius_norm() == 0.0);
    }

    #[test]
    fn plane_rotation_conjugates_majoranas() {
        let (n_q, th) = (3, 0.7);
        let u = plane_rotation(2, 5, th, n_q).unwrap();
        let ud = u.adjoint();
        let p2 = jordan_wigner(2, n_q).unwrap();
        let p5 = jordan_wigner(5, n_q).unwrap();
        let p1 = jordan_wigner(1, n_q).unwrap();
        let img2 = &(&u * &p2) * &ud;
        let img5 = &(&u * &p5) * &ud;
        let want2 = p2.scale(C64::new(th.cos(), 0.0)) + p5.scale(C64::new(th.sin(), 0.0));
        let want5 = p5.scale(C64::new(th.cos(), 0.0)) - p2.scale(C64::new(th.sin(), 0.0));
        assert!(img2.max_abs_diff(&want2) < 1e-12);
        assert!(img5.max_abs_diff(&want5) < 1e-12);
        assert!((&(&u * &p1) * &ud).max_abs_diff(&p1) < 1e-12);
        assert!((&u * &ud).max_abs_diff(&DenseOperator::identity(n_q)) < 1e-12);
    }
}
