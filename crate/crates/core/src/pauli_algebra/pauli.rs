use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::C64;

/// Single-qubit Pauli label.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

/// Scaled Pauli word `phase · X^x Z^z` on `n_qubits` qubits.
///
/// Masks live in basis-index bit space: qubit 0 (the leftmost tensor factor)
/// is the most significant bit, so `X^x Z^z |b⟩ = (-1)^{|z ∧ b|} |b ⊕ x⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PauliWord {
    pub x: u64,
    pub z: u64,
    pub phase: C64,
    pub n_qubits: usize,
}

#[inline]
fn parity(v: u64) -> f64 {
    if v.count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

impl PauliWord {
    pub fn identity(n_qubits: usize) -> Self {
        PauliWord {
            x: 0,
            z: 0,
            phase: C64::new(1.0, 0.0),
            n_qubits,
        }
    }

    fn bit(&self, qubit: usize) -> u64 {
        1u64 << (self.n_qubits - 1 - qubit)
    }

    /// Word with a single non-identity factor on `qubit` (0-based from the left).
    pub fn single(n_qubits: usize, qubit: usize, p: Pauli) -> Result<Self> {
        if qubit >= n_qubits {
            return Err(Error::IndexOutOfRange(format!(
                "qubit {qubit} on a {n_qubits}-qubit register"
            )));
        }
        let mut w = Self::identity(n_qubits);
        let b = w.bit(qubit);
        match p {
            Pauli::I => {}
            Pauli::X => w.x = b,
            Pauli::Z => w.z = b,
            Pauli::Y => {
                // Y = i X Z
                w.x = b;
                w.z = b;
                w.phase = C64::new(0.0, 1.0);
            }
        }
        Ok(w)
    }

    /// Builds a word from per-qubit labels, leftmost factor first.
    pub fn from_labels(labels: &[Pauli]) -> Self {
        let n = labels.len();
        let mut w = Self::identity(n);
        for (q, &p) in labels.iter().enumerate() {
            let f = Self::single(n, q, p).expect("qubit in range");
            w = w.mul(&f);
        }
        w
    }

    pub fn scaled(mut self, s: C64) -> Self {
        self.phase *= s;
        self
    }

    /// Operator product `self · other`.
    pub fn mul(&self, other: &PauliWord) -> PauliWord {
        debug_assert_eq!(self.n_qubits, other.n_qubits);
        // Z^{z1} X^{x2} = (-1)^{|z1 ∧ x2|} X^{x2} Z^{z1}
        let sign = parity(self.z & other.x);
        PauliWord {
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            phase: self.phase * other.phase * sign,
            n_qubits: self.n_qubits,
        }
    }

    pub fn commutes_with(&self, other: &PauliWord) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()).is_multiple_of(2)
    }

    pub fn adjoint(&self) -> PauliWord {
        PauliWord {
            phase: self.phase.conj() * parity(self.x & self.z),
            ..*self
        }
    }

    /// Matrix transpose in the computational basis; X and Z are symmetric so
    /// only the reordering `Z^z X^x → X^x Z^z` contributes a sign.
    pub fn transpose(&self) -> PauliWord {
        PauliWord {
            phase: self.phase * parity(self.x & self.z),
            ..*self
        }
    }

    /// Number of qubits carrying a non-identity factor.
    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    pub fn dim(&self) -> usize {
        1usize << self.n_qubits
    }

    /// Embeds the word into a register of `total` qubits starting at qubit `offset`.
    pub fn embed(&self, offset: usize, total: usize) -> Result<PauliWord> {
        if offset + self.n_qubits > total {
            return Err(Error::Dimension(format!(
                "{}-qubit word at offset {offset} does not fit {total} qubits",
                self.n_qubits
            )));
        }
        let shift = total - offset - self.n_qubits;
        Ok(PauliWord {
            x: self.x << shift,
            z: self.z << shift,
            phase: self.phase,
            n_qubits: total,
        })
    }

    /// Tensor product `self ⊗ other` (self on the left factors).
    pub fn kron(&self, other: &PauliWord) -> PauliWord {
        let shift = other.n_qubits;
        PauliWord {
            x: self.x << shift | other.x,
            z: self.z << shift | other.z,
            phase: self.phase * other.phase,
            n_qubits: self.n_qubits + other.n_qubits,
        }
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let d = self.dim();
        let mut m = DMatrix::<C64>::zeros(d, d);
        for b in 0..d as u64 {
            m[((b ^ self.x) as usize, b as usize)] = self.phase * parity(self.z & b);
        }
        m
    }

    /// `Tr(W† O)` in O(dim) operations.
    pub fn overlap(&self, op: &DMatrix<C64>) -> C64 {
        let d = self.dim();
        let mut acc = C64::new(0.0, 0.0);
        for b in 0..d as u64 {
            acc += op[((b ^ self.x) as usize, b as usize)] * parity(self.z & b);
        }
        acc * self.phase.conj()
    }

    /// `out = W · state` for a state vector on exactly `n_qubits` qubits.
    pub fn apply(&self, state: &[C64], out: &mut [C64]) {
        debug_assert_eq!(state.len(), self.dim());
        for (b, amp) in state.iter().enumerate() {
            let b = b as u64;
            out[(b ^ self.x) as usize] = *amp * self.phase * parity(self.z & b);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &DMatrix<C64>, b: &DMatrix<C64>) -> bool {
        (a - b).norm() < 1e-14
    }

    fn pauli_matrix(p: Pauli) -> DMatrix<C64> {
        let o = C64::new(0.0, 0.0);
        let l = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        match p {
            Pauli::I => DMatrix::from_row_slice(2, 2, &[l, o, o, l]),
            Pauli::X => DMatrix::from_row_slice(2, 2, &[o, l, l, o]),
            Pauli::Y => DMatrix::from_row_slice(2, 2, &[o, -i, i, o]),
            Pauli::Z => DMatrix::from_row_slice(2, 2, &[l, o, o, -l]),
        }
    }

    #[test]
    fn single_qubit_words_match_textbook_matrices() {
        for p in [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z] {
            assert!(close(
                &PauliWord::single(1, 0, p).unwrap().to_dense(),
                &pauli_matrix(p)
            ));
        }
    }

    #[test]
    fn labels_follow_kronecker_order() {
        let w = PauliWord::from_labels(&[Pauli::X, Pauli::I, Pauli::Y]);
        let dense = pauli_matrix(Pauli::X)
            .kronecker(&pauli_matrix(Pauli::I))
            .kronecker(&pauli_matrix(Pauli::Y));
        assert!(close(&w.to_dense(), &dense));
    }

    #[test]
    fn product_adjoint_transpose_against_dense() {
        let labels = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
        for a in 0..16 {
            for b in 0..16 {
                let wa = PauliWord::from_labels(&[labels[a % 4], labels[a / 4]]);
                let wb = PauliWord::from_labels(&[labels[b % 4], labels[b / 4]]);
                let (da, db) = (wa.to_dense(), wb.to_dense());
                assert!(close(&wa.mul(&wb).to_dense(), &(&da * &db)));
                let comm = &da * &db - &db * &da;
                assert_eq!(wa.commutes_with(&wb), comm.norm() < 1e-14);
            }
            let wa =
                PauliWord::from_labels(&[labels[a % 4], labels[a / 4]]).scaled(C64::new(0.3, 0.7));
            assert!(close(&wa.adjoint().to_dense(), &wa.to_dense().adjoint()));
            assert!(close(
                &wa.transpose().to_dense(),
                &wa.to_dense().transpose()
            ));
        }
    }

    #[test]
    fn overlap_and_apply() {
        let w = PauliWord::from_labels(&[Pauli::Y, Pauli::Z]);
        let v = PauliWord::from_labels(&[Pauli::X, Pauli::Z]);
        let dw = w.to_dense();
        assert!((w.overlap(&dw) - C64::new(4.0, 0.0)).norm() < 1e-14);
        assert!(v.overlap(&dw).norm() < 1e-14);
        let state: Vec<C64> = (0..4).map(|k| C64::new(k as f64, 1.0)).collect();
        let mut out = vec![C64::new(0.0, 0.0); 4];
        w.apply(&state, &mut out);
        let dense = &dw * nalgebra::DVector::from_vec(state.clone());
        for k in 0..4 {
            assert!((out[k] - dense[k]).norm() < 1e-14);
        }
    }

    #[test]
    fn embed_and_kron_agree() {
        let a = PauliWord::from_labels(&[Pauli::Y]);
        let b = PauliWord::from_labels(&[Pauli::X, Pauli::Z]);
        let k = a.kron(&b);
        let e = a.embed(0, 3).unwrap().mul(&b.embed(1, 3).unwrap());
        assert!(close(&k.to_dense(), &e.to_dense()));
        assert!(a.embed(3, 3).is_err());
        assert_eq!(k.weight(), 3);
    }
}
