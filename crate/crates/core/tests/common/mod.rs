//! Independent dense-matrix oracles shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use wormhole_lab::models::HamiltonianSpec;
use wormhole_lab::pauli_algebra::jordan_wigner;
use wormhole_lab::teleport::injection_rotation;
use wormhole_lab::C64;

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn expm(m: &DMatrix<C64>, s: C64) -> DMatrix<C64> {
    (m * s).exp()
}

/// Thermal state `e^{−βH}/Z` by direct exponentiation.
pub fn thermal(h: &DMatrix<C64>, beta: f64) -> DMatrix<C64> {
    let r = expm(h, c(-beta));
    let z = r.trace();
    r / z
}

fn heis(h: &DMatrix<C64>, op: &DMatrix<C64>, t: f64) -> DMatrix<C64> {
    expm(h, C64::new(0.0, t)) * op * expm(h, C64::new(0.0, -t))
}

/// `Re Tr(ρ ψ_i(t) ψ_i)`.
pub fn two_point(spec: &HamiltonianSpec, beta: f64, i: usize, t: f64) -> f64 {
    let h = spec.realize().unwrap().into_matrix();
    let nq = spec.n_qubits();
    let psi = jordan_wigner(i, nq).unwrap().into_matrix();
    (thermal(&h, beta) * heis(&h, &psi, t) * psi).trace().re
}

/// `−Re Tr(ρ [ψ_i(t), ψ_j]²)`.
pub fn four_point(spec: &HamiltonianSpec, beta: f64, i: usize, j: usize, t: f64) -> f64 {
    let h = spec.realize().unwrap().into_matrix();
    let nq = spec.n_qubits();
    let a = heis(&h, &jordan_wigner(i, nq).unwrap().into_matrix(), t);
    let b = jordan_wigner(j, nq).unwrap().into_matrix();
    let comm = &a * &b - &b * &a;
    -(thermal(&h, beta) * &comm * &comm).trace().re
}

/// `W = Tr(√ρ ψ(t) √ρ ψ(t)) / Tr(ρ ψ(t)²)`.
pub fn winding_w(spec: &HamiltonianSpec, beta: f64, i: usize, t: f64) -> f64 {
    let h = spec.realize().unwrap().into_matrix();
    let nq = spec.n_qubits();
    let p = heis(&h, &jordan_wigner(i, nq).unwrap().into_matrix(), t);
    let rho = thermal(&h, beta);
    let half = expm(&h, c(-beta / 2.0)) / expm(&h, c(-beta)).trace().sqrt();
    let num = (&p * &half * &p * &half).trace();
    let den = (&p * &rho * &p).trace();
    num.re / den.re
}

fn entropy_bits(rho: &DMatrix<C64>) -> f64 {
    rho.clone()
        .symmetric_eigenvalues()
        .iter()
        .filter(|&&l| l > 1e-14)
        .map(|&l| -l * l.log2())
        .sum()
}

/// Full density-matrix teleportation: register `P Q T L R`, explicit
/// `2^n × 2^n` unitaries and swaps, partial trace to `P T`.
#[allow(clippy::too_many_arguments)]
pub fn teleport_mi(
    spec: &HamiltonianSpec,
    beta: f64,
    mu: f64,
    n_norm: usize,
    q: usize,
    pair: (usize, usize),
    t0: f64,
    t1: f64,
) -> f64 {
    let h = spec.realize().unwrap();
    let nq = h.n_qubits();
    let d = 1usize << nq;
    let n = 3 + 2 * nq;
    let dim = 1usize << n;
    let id = |k: usize| DMatrix::<C64>::identity(1 << k, 1 << k);
    let hm = h.matrix().clone();
    let mut omega = DVector::<C64>::zeros(d * d);
    for k in 0..d {
        omega[k * d + k] = c(1.0);
    }
    let mut tfd = expm(&hm, c(-beta / 2.0)).kronecker(&id(nq)) * omega;
    tfd /= c(tfd.norm());
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let bell = DVector::from_vec(vec![c(r), c(0.0), c(0.0), c(r)]);
    let zero = DVector::from_vec(vec![c(1.0), c(0.0)]);
    let psi = bell.kronecker(&zero).kronecker(&tfd);
    let mut rho = &psi * psi.adjoint();
    let on_l = |u: &DMatrix<C64>| id(3).kronecker(u).kronecker(&id(nq));
    let on_r = |u: &DMatrix<C64>| id(3 + nq).kronecker(u);
    let swap = |a: usize, b: usize| {
        let mut m = DMatrix::<C64>::zeros(dim, dim);
        for k in 0..dim {
            let (ba, bb) = ((k >> (n - 1 - a)) & 1, (k >> (n - 1 - b)) & 1);
            let mut j = k & !(1 << (n - 1 - a)) & !(1 << (n - 1 - b));
            j |= bb << (n - 1 - a) | ba << (n - 1 - b);
            m[(j, k)] = c(1.0);
        }
        m
    };
    let conj = |rho: &DMatrix<C64>, u: &DMatrix<C64>| u * rho * u.adjoint();
    let ul = |t: f64| expm(&hm, C64::new(0.0, -t));
    let rinj = injection_rotation(pair.0, pair.1, nq)
        .unwrap()
        .into_matrix();
    rho = conj(&rho, &on_l(&ul(-t0)));
    rho = conj(&rho, &on_l(&rinj.adjoint()));
    rho = conj(&rho, &swap(1, 3));
    rho = conj(&rho, &on_l(&rinj));
    rho = conj(&rho, &on_l(&ul(t0)));
    let mut v = DMatrix::<C64>::zeros(d * d, d * d);
    for i in 1..=2 * nq {
        let m = jordan_wigner(i, nq).unwrap().into_matrix();
        v += m.kronecker(&m.transpose());
    }
    v /= c((q * n_norm) as f64);
    rho = conj(&rho, &id(3).kronecker(&expm(&v, C64::new(0.0, mu))));
    rho = conj(&rho, &on_r(&ul(t1).transpose()));
    rho = conj(&rho, &on_r(&rinj.conjugate().adjoint()));
    rho = conj(&rho, &swap(2, 3 + nq));
    let mut rpt = DMatrix::<C64>::zeros(4, 4);
    let (bp, bt) = (1usize << (n - 1), 1usize << (n - 3));
    for a in 0..dim {
        for b in 0..dim {
            if a & !(bp | bt) != b & !(bp | bt) {
                continue;
            }
            let ia = usize::from(a & bp != 0) * 2 + usize::from(a & bt != 0);
            let ib = usize::from(b & bp != 0) * 2 + usize::from(b & bt != 0);
            rpt[(ia, ib)] += rho[(a, b)];
        }
    }
    let mut rp = DMatrix::<C64>::zeros(2, 2);
    let mut rt = DMatrix::<C64>::zeros(2, 2);
    for a in 0..4 {
        for b in 0..4 {
            if a % 2 == b % 2 {
                rp[(a / 2, b / 2)] += rpt[(a, b)];
            }
            if a / 2 == b / 2 {
                rt[(a % 2, b % 2)] += rpt[(a, b)];
            }
        }
    }
    entropy_bits(&rp) + entropy_bits(&rt) - entropy_bits(&rpt)
}
