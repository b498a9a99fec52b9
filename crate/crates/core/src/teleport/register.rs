//! Dense state-vector operations on a qubit register (qubit 0 is the most
//! significant bit of the basis index).

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::pauli_algebra::PauliWord;
use crate::C64;

/// Tolerance below zero accepted for density-matrix eigenvalues.
pub const PSD_TOL: f64 = 1e-9;

/// Applies `op` (acting on `width` qubits starting at `offset`) in place.
pub fn apply_block(state: &mut [C64], op: &DMatrix<C64>, offset: usize, width: usize, n: usize) {
    let d = 1usize << width;
    debug_assert_eq!(op.nrows(), d);
    debug_assert_eq!(state.len(), 1usize << n);
    let inner = 1usize << (n - offset - width);
    let outer = 1usize << offset;
    let mut buf = vec![C64::new(0.0, 0.0); d];
    for o in 0..outer {
        let base = o * d * inner;
        for i in 0..inner {
            for (a, slot) in buf.iter_mut().enumerate() {
                *slot = state[base + a * inner + i];
            }
            for a in 0..d {
                let mut acc = C64::new(0.0, 0.0);
                for (b, v) in buf.iter().enumerate() {
                    acc += op[(a, b)] * v;
                }
                state[base + a * inner + i] = acc;
            }
        }
    }
}

/// `state ← W · state` for a word on the full register.
pub fn apply_word(state: &mut [C64], w: &PauliWord) {
    let src = state.to_vec();
    w.apply(&src, state);
}

/// `state ← (α + β W) · state`.
pub fn apply_affine_word(state: &mut [C64], alpha: C64, beta: C64, w: &PauliWord) {
    let src = state.to_vec();
    w.apply(&src, state);
    for (s, o) in state.iter_mut().zip(&src) {
        *s = alpha * o + beta * *s;
    }
}

/// Exchanges qubits `a` and `b`.
pub fn swap_qubits(state: &mut [C64], a: usize, b: usize, n: usize) {
    if a == b {
        return;
    }
    let ma = 1usize << (n - 1 - a);
    let mb = 1usize << (n - 1 - b);
    for k in 0..state.len() {
        if k & ma != 0 && k & mb == 0 {
            state.swap(k, k ^ ma ^ mb);
        }
    }
}

pub fn norm(state: &[C64]) -> f64 {
    state.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Reduced density matrix on the listed qubits, in the listed order.
pub fn reduced_density(state: &[C64], keep: &[usize], n: usize) -> DMatrix<C64> {
    let k = keep.len();
    let dk = 1usize << k;
    let keep_mask: usize = keep.iter().map(|&q| 1usize << (n - 1 - q)).sum();
    let sub = |idx: usize| -> usize {
        keep.iter()
            .fold(0, |acc, &q| (acc << 1) | ((idx >> (n - 1 - q)) & 1))
    };
    let mut rho = DMatrix::<C64>::zeros(dk, dk);
    // group basis states by their traced-out bits
    let mut groups: std::collections::BTreeMap<usize, Vec<(usize, C64)>> =
        std::collections::BTreeMap::new();
    for (idx, amp) in state.iter().enumerate() {
        if amp.norm_sqr() == 0.0 {
            continue;
        }
        groups
            .entry(idx & !keep_mask)
            .or_default()
            .push((sub(idx), *amp));
    }
    for members in groups.values() {
        for &(a, va) in members {
            for &(b, vb) in members {
                rho[(a, b)] += va * vb.conj();
            }
        }
    }
    rho
}

/// Von Neumann entropy `−Tr ρ ln ρ` in nats.
pub fn entropy(rho: &DMatrix<C64>) -> Result<f64> {
    let eig = SymmetricEigen::new(rho.clone());
    let mut s = 0.0;
    for &w in eig.eigenvalues.iter() {
        if w < -PSD_TOL {
            return Err(Error::Numerical(format!(
                "density matrix eigenvalue {w:.3e} below zero"
            )));
        }
        if w > 1e-15 {
            s -= w * w.ln();
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli_algebra::Pauli;

    fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
        a.kronecker(b)
    }

    fn random_state(n: usize, seed: u64) -> Vec<C64> {
        let mut x = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
        let mut v: Vec<C64> = (0..1usize << n)
            .map(|_| {
                x = x
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                let a = (x >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
                x = x
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                let b = (x >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
                C64::new(a, b)
            })
            .collect();
        let nr = norm(&v);
        v.iter_mut().for_each(|c| *c /= nr);
        v
    }

    #[test]
    fn block_application_matches_kronecker() {
        let n = 4;
        let st = random_state(n, 3);
        let op = PauliWord::single(2, 0, Pauli::Y)
            .unwrap()
            .mul(&PauliWord::single(2, 1, Pauli::X).unwrap())
            .to_dense()
            + DMatrix::<C64>::identity(4, 4) * C64::new(0.3, 0.1);
        let full = kron(
            &kron(&DMatrix::identity(2, 2), &op),
            &DMatrix::identity(2, 2),
        );
        let want = &full * nalgebra::DVector::from_vec(st.clone());
        let mut got = st.clone();
        apply_block(&mut got, &op, 1, 2, n);
        for (a, b) in got.iter().zip(want.iter()) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn swap_matches_permutation() {
        let n = 3;
        let st = random_state(n, 9);
        let mut got = st.clone();
        swap_qubits(&mut got, 0, 2, n);
        for (b, g) in got.iter().enumerate() {
            let (b0, b1, b2) = ((b >> 2) & 1, (b >> 1) & 1, b & 1);
            let src = (b2 << 2) | (b1 << 1) | b0;
            assert_eq!(*g, st[src]);
        }
    }

    #[test]
    fn reduced_density_and_entropy() {
        // Bell pair on qubits 0,2 with qubit 1 in |+⟩
        let n = 3;
        let mut st = vec![C64::new(0.0, 0.0); 8];
        for (idx, amp) in [(0b000, 0.5), (0b010, 0.5), (0b101, 0.5), (0b111, 0.5)] {
            st[idx] = C64::new(amp, 0.0);
        }
        let rho02 = reduced_density(&st, &[0, 2], n);
        assert!((rho02[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!((rho02[(0, 3)].re - 0.5).abs() < 1e-15);
        assert!(entropy(&rho02).unwrap().abs() < 1e-12);
        let rho0 = reduced_density(&st, &[0], n);
        assert!((entropy(&rho0).unwrap() - 2f64.ln()).abs() < 1e-12);
        let rho1 = reduced_density(&st, &[1], n);
        assert!((rho1[(0, 1)].re - 0.5).abs() < 1e-15);
        let bad = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            C64::new(1.1, 0.0),
            C64::new(-0.1, 0.0),
        ]));
        assert!(entropy(&bad).is_err());
    }

    #[test]
    fn affine_word() {
        let n = 2;
        let st = random_state(n, 1);
        let w = PauliWord::single(n, 1, Pauli::Z).unwrap();
        let mut got = st.clone();
        apply_affine_word(&mut got, C64::new(0.5, 0.0), C64::new(0.0, 2.0), &w);
        let m =
            DMatrix::<C64>::identity(4, 4) * C64::new(0.5, 0.0) + w.to_dense() * C64::new(0.0, 2.0);
        let want = m * nalgebra::DVector::from_vec(st);
        for (a, b) in got.iter().zip(want.iter()) {
            assert!((a - b).norm() < 1e-14);
        }
    }
}
