//! Two-sided teleportation on a thermofield double and its mutual-information
//! signal `I_PT`.
//!
//! Register layout for the protocol is `[P, Q, T, L_1..L_n, R_1..R_n]`. The
//! right side is the plain tensor-product copy with Majoranas
//! `ψ_R^i = I ⊗ (ψ^i)ᵀ` and generator `H_R = Hᵀ`, so that
//! `ψ_L^i ψ_R^i |Ω⟩ = ½|Ω⟩` and every coupling term is Hermitian.

pub mod register;

use std::path::Path;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::HamiltonianSpec;
use crate::output::{atomic_write, csv_text, write_json};
use crate::pauli_algebra::{majorana_table, DenseOperator, PauliWord, HERMITIAN_TOL};
use crate::spectra::{time_grid, ThermalContext};
use crate::C64;

use register::{apply_affine_word, apply_block, entropy, norm, reduced_density, swap_qubits};

pub const DEFAULT_MU: f64 = -12.0;
pub const DEFAULT_N_NORM: usize = 10;
pub const DEFAULT_Q: usize = 4;
/// Injection time of the fixed-injection sweep.
pub const DEFAULT_FIXED_T0: f64 = 2.8;
/// Coupling times of the three-step Trotterized variant.
pub const DEFAULT_TROTTER_TIMES: [f64; 3] = [-1.6, 0.0, 1.6];

const NORM_TOL: f64 = 1e-10;

const P: usize = 0;
const Q: usize = 1;
const T: usize = 2;
const L0: usize = 3;

/// Hamiltonian, thermofield double and Majorana tables of the two copies.
#[derive(Clone, Debug)]
pub struct DoubledSystem {
    n_q: usize,
    h: DenseOperator,
    ctx: ThermalContext,
    tfd: Vec<C64>,
    left: Vec<PauliWord>,
    right: Vec<PauliWord>,
}

/// Builds the doubled system for `spec` at inverse temperature `beta`.
pub fn build_doubled(spec: &HamiltonianSpec, beta: f64) -> Result<DoubledSystem> {
    DoubledSystem::new(spec.realize()?, beta)
}

impl DoubledSystem {
    pub fn new(h: DenseOperator, beta: f64) -> Result<Self> {
        let ctx = ThermalContext::new(&h, beta)?;
        let n_q = h.n_qubits();
        let d = h.dim();
        let sr = ctx.sqrt_rho();
        let mut tfd: Vec<C64> = (0..d * d).map(|idx| sr[(idx / d, idx % d)]).collect();
        let nr = norm(&tfd);
        tfd.iter_mut().for_each(|c| *c /= nr);
        let left = majorana_table(n_q);
        let right = left.iter().map(PauliWord::transpose).collect();
        Ok(DoubledSystem {
            n_q,
            h,
            ctx,
            tfd,
            left,
            right,
        })
    }

    /// Qubits per side.
    pub fn n_qubits(&self) -> usize {
        self.n_q
    }

    pub fn hamiltonian(&self) -> &DenseOperator {
        &self.h
    }

    pub fn context(&self) -> &ThermalContext {
        &self.ctx
    }

    pub fn beta(&self) -> f64 {
        self.ctx.beta()
    }

    /// TFD amplitudes with the left copy on the high bits.
    pub fn tfd(&self) -> &[C64] {
        &self.tfd
    }

    /// Right-side generator `Hᵀ`.
    pub fn right_hamiltonian(&self) -> DenseOperator {
        self.h.transpose()
    }

    pub fn left_propagator(&self, t: f64) -> DMatrix<C64> {
        self.ctx.propagator(t)
    }

    /// `e^{−iH_R t} = (e^{−iHt})ᵀ`.
    pub fn right_propagator(&self, t: f64) -> DMatrix<C64> {
        self.ctx.propagator(t).transpose()
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > 2 * self.n_q {
            return Err(Error::IndexOutOfRange(format!(
                "Majorana {i} on {} qubits per side",
                self.n_q
            )));
        }
        Ok(())
    }

    /// `ψ_L^i` as a word on the `2 n_q`-qubit L⊗R register.
    pub fn left_majorana(&self, i: usize) -> Result<PauliWord> {
        self.check_index(i)?;
        Ok(self.left[i - 1].kron(&PauliWord::identity(self.n_q)))
    }

    /// `ψ_R^i = I ⊗ (ψ^i)ᵀ` on the L⊗R register.
    pub fn right_majorana(&self, i: usize) -> Result<PauliWord> {
        self.check_index(i)?;
        Ok(PauliWord::identity(self.n_q).kron(&self.right[i - 1]))
    }
}

fn rotation_from_words(wa: &PauliWord, wb: &PauliWord, theta: f64) -> DMatrix<C64> {
    let mut m = wa
        .mul(wb)
        .scaled(C64::new(-2.0 * (theta / 2.0).sin(), 0.0))
        .to_dense();
    for k in 0..m.nrows() {
        m[(k, k)] += C64::new((theta / 2.0).cos(), 0.0);
    }
    m
}

/// Unitary `R` with `R ψ¹ R† = ψ^a` and `R ψ² R† = ψ^b` for the Majorana
/// realization in `table`; a product of at most two plane rotations.
fn pair_rotation(table: &[PauliWord], a: usize, b: usize) -> Result<DMatrix<C64>> {
    let n = table.len();
    if a == b {
        return Err(Error::InvalidArgument(format!("injection pair ({a},{a})")));
    }
    if a == 0 || b == 0 || a > n || b > n {
        return Err(Error::IndexOutOfRange(format!(
            "injection pair ({a},{b}) with {n} register Majoranas"
        )));
    }
    let w = |k: usize| &table[k - 1];
    let quarter = std::f64::consts::FRAC_PI_2;
    let d = w(1).dim();
    // first rotation sends ψ¹ to ψ^a; track where ψ² lands as s·ψ^m
    let (r1, m, s) = if a == 1 {
        (DMatrix::<C64>::identity(d, d), 2, 1.0)
    } else if a == 2 {
        (rotation_from_words(w(1), w(2), quarter), 1, -1.0)
    } else {
        (rotation_from_words(w(1), w(a), quarter), 2, 1.0)
    };
    let r2 = if m == b {
        if s > 0.0 {
            return Ok(r1);
        }
        let c = (1..=n).find(|&c| c != a && c != b).ok_or_else(|| {
            Error::InvalidArgument(format!("pair ({a},{b}) needs a third register Majorana"))
        })?;
        rotation_from_words(w(m), w(c), std::f64::consts::PI)
    } else if s > 0.0 {
        rotation_from_words(w(m), w(b), quarter)
    } else {
        rotation_from_words(w(b), w(m), quarter)
    };
    Ok(r2 * r1)
}

/// Encoding rotation mapping `(ψ¹, ψ²)` onto `(ψ^i, ψ^j)`.
pub fn injection_rotation(i: usize, j: usize, n_q: usize) -> Result<DenseOperator> {
    DenseOperator::from_matrix(pair_rotation(&majorana_table(n_q), i, j)?)
}

/// `V = (q N_norm)^{-1} Σ_{i ∈ coupled} ψ_L^i ψ_R^i` on the L⊗R register.
pub fn coupling_operator(
    dsys: &DoubledSystem,
    n_norm: usize,
    q: usize,
    coupled: &[usize],
) -> Result<DenseOperator> {
    let scale = normalization(n_norm, q)?;
    let dim = 1usize << (2 * dsys.n_q);
    let mut m = DMatrix::<C64>::zeros(dim, dim);
    for &i in coupled {
        let w = dsys.left_majorana(i)?.mul(&dsys.right_majorana(i)?);
        m += w.to_dense() * C64::new(scale, 0.0);
    }
    let op = DenseOperator::from_matrix(m)?;
    let dev = op.hermiticity_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian {
            context: "coupling operator".into(),
            deviation: dev,
        });
    }
    Ok(op)
}

fn normalization(n_norm: usize, q: usize) -> Result<f64> {
    if n_norm == 0 || q == 0 {
        return Err(Error::InvalidArgument(format!(
            "coupling normalization N = {n_norm}, q = {q}"
        )));
    }
    Ok(1.0 / (q as f64 * n_norm as f64))
}

/// How the left–right coupling is applied.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CouplingMode {
    Instantaneous,
    /// `μ` split evenly over couplings inserted at the listed times.
    Trotterized {
        times: Vec<f64>,
    },
}

impl CouplingMode {
    pub fn trotterized_default() -> Self {
        CouplingMode::Trotterized {
            times: DEFAULT_TROTTER_TIMES.to_vec(),
        }
    }

    fn steps(&self, mu: f64) -> Result<Vec<(f64, f64)>> {
        match self {
            CouplingMode::Instantaneous => Ok(vec![(0.0, mu)]),
            CouplingMode::Trotterized { times } => {
                if times.is_empty() || times.iter().any(|t| !t.is_finite()) {
                    return Err(Error::InvalidArgument(format!(
                        "Trotter coupling times {times:?}"
                    )));
                }
                let share = mu / times.len() as f64;
                Ok(times.iter().map(|&t| (t, share)).collect())
            }
        }
    }
}

/// One coupling unitary `e^{iμ_k V}` and the time at which it acts.
#[derive(Clone, Debug)]
pub struct CouplingStep {
    pub time: f64,
    pub mu: f64,
    pub unitary: DenseOperator,
}

/// Coupling unitaries on the L⊗R register, in application order.
pub fn coupling_unitary(
    dsys: &DoubledSystem,
    mu: f64,
    n_norm: usize,
    q: usize,
    mode: &CouplingMode,
    coupled: &[usize],
) -> Result<Vec<CouplingStep>> {
    if !mu.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "coupling strength μ = {mu}"
        )));
    }
    let v = coupling_operator(dsys, n_norm, q, coupled)?;
    mode.steps(mu)?
        .into_iter()
        .map(|(time, mu_k)| {
            let u = (v.matrix() * C64::new(0.0, mu_k)).exp();
            Ok(CouplingStep {
                time,
                mu: mu_k,
                unitary: DenseOperator::from_matrix(u)?,
            })
        })
        .collect()
}

/// Full coupling map on L⊗R: `Π_k U(τ_k)† e^{iμ_k V} U(τ_k)` with
/// `U(τ) = e^{−iH_L τ} ⊗ e^{−iH_R τ}`.
pub fn coupling_map(
    dsys: &DoubledSystem,
    mu: f64,
    n_norm: usize,
    q: usize,
    mode: &CouplingMode,
    coupled: &[usize],
) -> Result<DenseOperator> {
    let dim = 1usize << (2 * dsys.n_q);
    let mut total = DMatrix::<C64>::identity(dim, dim);
    for step in coupling_unitary(dsys, mu, n_norm, q, mode, coupled)? {
        let u = dsys
            .left_propagator(step.time)
            .kronecker(&dsys.right_propagator(step.time));
        total = u.adjoint() * step.unitary.matrix() * u * total;
    }
    DenseOperator::from_matrix(total)
}

/// Sweep geometry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SweepMode {
    /// `t0 = t1 = t`.
    Symmetric,
    /// Fixed injection time, readout time swept.
    FixedInjection { t0: f64 },
}

/// Configuration of one teleportation sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct TeleportConfig {
    pub spec: HamiltonianSpec,
    pub beta: f64,
    pub mu: f64,
    pub n_norm: usize,
    pub q: usize,
    pub pair: (usize, usize),
    pub mode: SweepMode,
    pub coupling: CouplingMode,
    pub times: Vec<f64>,
    /// Majoranas entering the coupling sum; `None` couples every register Majorana.
    pub coupled: Option<Vec<usize>>,
}

impl TeleportConfig {
    /// Defaults: β = 4, μ = −12, N_norm = 10, q = 4, pair (1,2), symmetric
    /// sweep over `t ∈ [0, 6]` in steps of 0.1, instantaneous coupling.
    pub fn new(spec: HamiltonianSpec) -> Self {
        TeleportConfig {
            spec,
            beta: crate::spectra::DEFAULT_BETA,
            mu: DEFAULT_MU,
            n_norm: DEFAULT_N_NORM,
            q: DEFAULT_Q,
            pair: (1, 2),
            mode: SweepMode::Symmetric,
            coupling: CouplingMode::Instantaneous,
            times: time_grid(0.0, 6.0, 0.1).expect("static grid"),
            coupled: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (i, j) = self.pair;
        if i >= j {
            return Err(Error::InvalidArgument(format!(
                "injection pair ({i},{j}) needs i < j"
            )));
        }
        if !self.mu.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "coupling strength μ = {}",
                self.mu
            )));
        }
        if self.n_norm == 0 || self.q == 0 {
            return Err(Error::InvalidArgument(
                "N_norm and q must be positive".into(),
            ));
        }
        if self.times.is_empty() {
            return Err(Error::InvalidArgument("empty time grid".into()));
        }
        if let SweepMode::FixedInjection { t0 } = self.mode {
            if !t0.is_finite() {
                return Err(Error::InvalidArgument(format!("injection time {t0}")));
            }
        }
        Ok(())
    }

    fn coupled_set(&self, dsys: &DoubledSystem) -> Vec<usize> {
        self.coupled
            .clone()
            .unwrap_or_else(|| (1..=2 * dsys.n_q).collect())
    }

    fn echo(&self) -> TeleportEcho {
        TeleportEcho {
            model: self.spec.label().to_string(),
            seed: self.spec.seed(),
            mu: self.mu,
            beta: self.beta,
            n_norm: self.n_norm,
            q: self.q,
            pair: self.pair,
            mode: self.mode.clone(),
            coupling: self.coupling.clone(),
            coupled: self.coupled.clone(),
        }
    }
}

/// Parameters echoed next to every mutual-information trace.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TeleportEcho {
    pub model: String,
    pub seed: Option<u64>,
    pub mu: f64,
    pub beta: f64,
    pub n_norm: usize,
    pub q: usize,
    pub pair: (usize, usize),
    pub mode: SweepMode,
    pub coupling: CouplingMode,
    pub coupled: Option<Vec<usize>>,
}

/// `I_PT(t)` in bits, with the configuration that produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MutualInfoTrace {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub config: TeleportEcho,
}

impl MutualInfoTrace {
    /// Grid time and value of the largest `I_PT`.
    pub fn peak(&self) -> (f64, f64) {
        let k = self
            .values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(k, _)| k)
            .unwrap_or(0);
        (self.times[k], self.values[k])
    }

    /// Interior strict local maxima whose height exceeds `prominence` above
    /// the lower of the neighbouring minima on each side.
    pub fn local_maxima(&self, prominence: f64) -> Vec<(f64, f64)> {
        let v = &self.values;
        let mut out = Vec::new();
        for k in 1..v.len().saturating_sub(1) {
            if v[k] > v[k - 1] && v[k] >= v[k + 1] {
                let left = v[..k]
                    .iter()
                    .rev()
                    .scan(v[k], |hi, &x| {
                        if x > v[k] {
                            None
                        } else {
                            *hi = x;
                            Some(x)
                        }
                    })
                    .fold(v[k], f64::min);
                let right = v[k + 1..]
                    .iter()
                    .scan(v[k], |hi, &x| {
                        if x > v[k] {
                            None
                        } else {
                            *hi = x;
                            Some(x)
                        }
                    })
                    .fold(v[k], f64::min);
                if v[k] - left.max(right) > prominence {
                    out.push((self.times[k], v[k]));
                }
            }
        }
        out
    }

    pub fn to_csv(&self) -> String {
        csv_text(
            &["t".into(), "I_PT".into()],
            self.times
                .iter()
                .zip(&self.values)
                .map(|(t, v)| vec![*t, *v]),
        )
    }

    /// Writes `<stem>.csv` and the `<stem>.json` sidecar.
    pub fn write(&self, dir: &Path, stem: &str) -> Result<()> {
        atomic_write(&dir.join(format!("{stem}.csv")), self.to_csv().as_bytes())?;
        write_json(&dir.join(format!("{stem}.json")), &self.config)
    }
}

/// Precomputed pieces shared by every grid point of a sweep.
pub struct Protocol<'a> {
    dsys: &'a DoubledSystem,
    inject: DMatrix<C64>,
    readout_dag: DMatrix<C64>,
    steps: Vec<(f64, f64)>,
    terms: Vec<PauliWord>,
    scale: f64,
    uncoupled: bool,
}

impl<'a> Protocol<'a> {
    /// `injection` and `readout` are ordered Majorana pairs; any distinct
    /// indices are accepted.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        dsys: &'a DoubledSystem,
        injection: (usize, usize),
        readout: (usize, usize),
        mu: f64,
        n_norm: usize,
        q: usize,
        coupling: &CouplingMode,
        coupled: &[usize],
    ) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "coupling strength μ = {mu}"
            )));
        }
        let n = 3 + 2 * dsys.n_q;
        let terms = coupled
            .iter()
            .map(|&i| {
                dsys.left_majorana(i)?
                    .mul(&dsys.right_majorana(i)?)
                    .scaled(C64::new(2.0, 0.0))
                    .embed(L0, n)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Protocol {
            dsys,
            inject: pair_rotation(&dsys.left, injection.0, injection.1)?,
            readout_dag: pair_rotation(&dsys.right, readout.0, readout.1)?.adjoint(),
            steps: coupling.steps(mu)?,
            terms,
            scale: normalization(n_norm, q)?,
            uncoupled: mu == 0.0,
        })
    }

    fn apply_coupling(&self, st: &mut [C64], n: usize) {
        if self.uncoupled {
            return;
        }
        let nq = self.dsys.n_q;
        for &(tau, mu_k) in &self.steps {
            let shifted = tau != 0.0;
            if shifted {
                apply_block(st, &self.dsys.left_propagator(tau), L0, nq, n);
                apply_block(st, &self.dsys.right_propagator(tau), L0 + nq, nq, n);
            }
            // each 2ψ_Lψ_R squares to one and the terms commute
            let half = mu_k * self.scale / 2.0;
            let (c, s) = (C64::new(half.cos(), 0.0), C64::new(0.0, half.sin()));
            for w in &self.terms {
                apply_affine_word(st, c, s, w);
            }
            if shifted {
                apply_block(st, &self.dsys.left_propagator(-tau), L0, nq, n);
                apply_block(st, &self.dsys.right_propagator(-tau), L0 + nq, nq, n);
            }
        }
    }

    /// Final protocol state for injection time `t0` and readout time `t1`.
    pub fn final_state(&self, t0: f64, t1: f64) -> Result<Vec<C64>> {
        let nq = self.dsys.n_q;
        let n = 3 + 2 * nq;
        let dlr = 1usize << (2 * nq);
        let mut st = vec![C64::new(0.0, 0.0); 1usize << n];
        let r = std::f64::consts::FRAC_1_SQRT_2;
        for (k, a) in self.dsys.tfd.iter().enumerate() {
            // |00⟩_PQ and |11⟩_PQ with T in |0⟩
            st[k] = a * r;
            st[(0b110 << (2 * nq)) | k] = a * r;
        }
        debug_assert_eq!(st.len(), 8 * dlr);
        apply_block(&mut st, &self.dsys.left_propagator(-t0), L0, nq, n);
        apply_block(&mut st, &self.inject.adjoint(), L0, nq, n);
        swap_qubits(&mut st, Q, L0, n);
        apply_block(&mut st, &self.inject, L0, nq, n);
        apply_block(&mut st, &self.dsys.left_propagator(t0), L0, nq, n);
        self.apply_coupling(&mut st, n);
        apply_block(&mut st, &self.dsys.right_propagator(t1), L0 + nq, nq, n);
        apply_block(&mut st, &self.readout_dag, L0 + nq, nq, n);
        swap_qubits(&mut st, T, L0 + nq, n);
        let nr = norm(&st);
        if (nr - 1.0).abs() > NORM_TOL {
            return Err(Error::Numerical(format!("state norm drifted to {nr}")));
        }
        Ok(st)
    }

    /// `I_PT` in bits at `(t0, t1)`.
    pub fn mutual_information(&self, t0: f64, t1: f64) -> Result<f64> {
        let n = 3 + 2 * self.dsys.n_q;
        let st = self.final_state(t0, t1)?;
        let rho = reduced_density(&st, &[P, T], n);
        mutual_information_bits(&rho)
    }
}

/// `(S_A + S_B − S_AB)/ln 2` for a two-qubit density matrix.
pub fn mutual_information_bits(rho_ab: &DMatrix<C64>) -> Result<f64> {
    let rho_a = DMatrix::from_fn(2, 2, |a, c| {
        rho_ab[(2 * a, 2 * c)] + rho_ab[(2 * a + 1, 2 * c + 1)]
    });
    let rho_b = DMatrix::from_fn(2, 2, |b, d| rho_ab[(b, d)] + rho_ab[(2 + b, 2 + d)]);
    Ok((entropy(&rho_a)? + entropy(&rho_b)? - entropy(rho_ab)?) / std::f64::consts::LN_2)
}

/// Runs the sweep on an already built doubled system.
pub fn run_on(dsys: &DoubledSystem, config: &TeleportConfig) -> Result<MutualInfoTrace> {
    config.validate()?;
    let coupled = config.coupled_set(dsys);
    let proto = Protocol::new(
        dsys,
        config.pair,
        config.pair,
        config.mu,
        config.n_norm,
        config.q,
        &config.coupling,
        &coupled,
    )?;
    let values = config
        .times
        .par_iter()
        .map(|&t| match config.mode {
            SweepMode::Symmetric => proto.mutual_information(t, t),
            SweepMode::FixedInjection { t0 } => proto.mutual_information(t0, t),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MutualInfoTrace {
        times: config.times.clone(),
        values,
        config: config.echo(),
    })
}

/// Builds the doubled system and runs the configured sweep.
pub fn run_teleport(config: &TeleportConfig) -> Result<MutualInfoTrace> {
    config.validate()?;
    let dsys = build_doubled(&config.spec, config.beta)?;
    run_on(&dsys, config)
}
