//! Exact diagonalization, thermal states, Heisenberg evolution and the
//! two- and four-point Majorana correlators.

use std::path::Path;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::HamiltonianSpec;
use crate::output::{atomic_write, csv_text};
use crate::pauli_algebra::{jordan_wigner, DenseOperator};
use crate::C64;

/// Default inverse temperature.
pub const DEFAULT_BETA: f64 = 4.0;

/// Maximum tolerated `‖V D V† − H‖_F`.
pub const RECONSTRUCTION_TOL: f64 = 1e-10;

/// Uniform grid `start, start+step, …` up to and including `stop`.
pub fn time_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if step.is_nan() || step <= 0.0 || !start.is_finite() || !stop.is_finite() || stop < start {
        return Err(Error::InvalidArgument(format!(
            "time grid [{start}, {stop}] step {step}"
        )));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| start + k as f64 * step).collect())
}

/// Default correlator grid `t ∈ [0, 100]`, step 0.1.
pub fn default_correlator_grid() -> Vec<f64> {
    time_grid(0.0, 100.0, 0.1).expect("static grid")
}

/// Eigendecomposition of `H` with the Gibbs state at inverse temperature β.
#[derive(Clone, Debug)]
pub struct ThermalContext {
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<C64>,
    beta: f64,
    weights: DVector<f64>,
    rho: DMatrix<C64>,
    sqrt_rho: DMatrix<C64>,
    n_qubits: usize,
}

impl ThermalContext {
    pub fn new(h: &DenseOperator, beta: f64) -> Result<Self> {
        if !beta.is_finite() || beta < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "inverse temperature {beta}"
            )));
        }
        let dev = h.hermiticity_deviation();
        if dev > crate::pauli_algebra::HERMITIAN_TOL * h.frobenius_norm().max(1.0) {
            return Err(Error::NotHermitian {
                context: "thermal context".into(),
                deviation: dev,
            });
        }
        let eig = SymmetricEigen::new(h.matrix().clone());
        let (eigenvalues, eigenvectors) = (eig.eigenvalues, eig.eigenvectors);
        let recon = &eigenvectors
            * DMatrix::from_diagonal(&eigenvalues.map(|e| C64::new(e, 0.0)))
            * eigenvectors.adjoint();
        let err = (recon - h.matrix()).norm();
        if err > RECONSTRUCTION_TOL * h.frobenius_norm().max(1.0) {
            return Err(Error::Numerical(format!(
                "eigendecomposition residual {err:.3e}"
            )));
        }
        let e0 = eigenvalues.min();
        let boltz = eigenvalues.map(|e| (-beta * (e - e0)).exp());
        let z = boltz.sum();
        let weights = boltz / z;
        let rho = spectral(&eigenvectors, &weights.map(|w| C64::new(w, 0.0)));
        let sqrt_rho = spectral(&eigenvectors, &weights.map(|w| C64::new(w.sqrt(), 0.0)));
        Ok(ThermalContext {
            eigenvalues,
            eigenvectors,
            beta,
            weights,
            rho,
            sqrt_rho,
            n_qubits: h.n_qubits(),
        })
    }

    pub fn from_spec(spec: &HamiltonianSpec, beta: f64) -> Result<Self> {
        Self::new(&spec.realize()?, beta)
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<C64> {
        &self.eigenvectors
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Boltzmann weights `e^{−βE_n}/Z` in the eigenbasis order.
    pub fn weights(&self) -> &DVector<f64> {
        &self.weights
    }

    pub fn rho(&self) -> &DMatrix<C64> {
        &self.rho
    }

    pub fn sqrt_rho(&self) -> &DMatrix<C64> {
        &self.sqrt_rho
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `Tr(ρ_β O)`.
    pub fn expectation(&self, op: &DMatrix<C64>) -> C64 {
        (&self.rho * op).trace()
    }

    /// `Σ_n E_n e^{−βE_n} / Z`.
    pub fn mean_energy(&self) -> f64 {
        self.eigenvalues.dot(&self.weights)
    }

    /// `e^{−iHt}`.
    pub fn propagator(&self, t: f64) -> DMatrix<C64> {
        spectral(
            &self.eigenvectors,
            &self.eigenvalues.map(|e| C64::from_polar(1.0, -e * t)),
        )
    }

    /// Expresses `op` in the energy eigenbasis.
    pub fn to_eigenbasis(&self, op: &DMatrix<C64>) -> DMatrix<C64> {
        self.eigenvectors.adjoint() * op * &self.eigenvectors
    }

    fn check_dim(&self, op: &DenseOperator) -> Result<()> {
        if op.dim() != self.dim() {
            return Err(Error::Dimension(format!(
                "operator of dimension {} against Hamiltonian of dimension {}",
                op.dim(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// `A(t)_{mn} = A_{mn} e^{i(E_m − E_n)t}` for `A` already in the eigenbasis.
    fn evolve_eigen(&self, a: &DMatrix<C64>, t: f64) -> DMatrix<C64> {
        let e = &self.eigenvalues;
        DMatrix::from_fn(a.nrows(), a.ncols(), |m, n| {
            a[(m, n)] * C64::from_polar(1.0, (e[m] - e[n]) * t)
        })
    }

    /// `Tr(ρ X)` for `X` in the eigenbasis.
    fn thermal_trace_eigen(&self, x: &DMatrix<C64>) -> C64 {
        (0..self.dim()).map(|m| x[(m, m)] * self.weights[m]).sum()
    }
}

fn spectral(v: &DMatrix<C64>, d: &DVector<C64>) -> DMatrix<C64> {
    let mut vd = v.clone();
    for (k, mut col) in vd.column_iter_mut().enumerate() {
        col *= d[k];
    }
    vd * v.adjoint()
}

/// `e^{iHt} op e^{−iHt}`.
pub fn heisenberg(ctx: &ThermalContext, op: &DenseOperator, t: f64) -> Result<DenseOperator> {
    ctx.check_dim(op)?;
    let a = ctx.to_eigenbasis(op.matrix());
    let at = ctx.evolve_eigen(&a, t);
    DenseOperator::from_matrix(&ctx.eigenvectors * at * ctx.eigenvectors.adjoint())
}

/// Which correlator a trace holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CorrelatorKind {
    #[serde(rename = "G_i")]
    TwoPoint,
    #[serde(rename = "G_avg")]
    TwoPointAvg,
    #[serde(rename = "F_i")]
    FourPoint,
    #[serde(rename = "F_avg")]
    FourPointAvg,
    #[serde(rename = "F_ij")]
    FourPointCross,
}

impl CorrelatorKind {
    pub fn column_name(&self, indices: &[usize]) -> String {
        let join = |v: &[usize]| v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("");
        match self {
            CorrelatorKind::TwoPoint => format!("G_{}", join(indices)),
            CorrelatorKind::TwoPointAvg => "G_avg".into(),
            CorrelatorKind::FourPoint => format!("F_{}", join(indices)),
            CorrelatorKind::FourPointAvg => "F_avg".into(),
            CorrelatorKind::FourPointCross => {
                let parts: Vec<String> = indices.iter().map(|i| i.to_string()).collect();
                format!("F_{}", parts.join("_"))
            }
        }
    }
}

/// A correlator sampled on a time grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelatorTrace {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub kind: CorrelatorKind,
    pub indices: Vec<usize>,
}

impl CorrelatorTrace {
    pub fn column_name(&self) -> String {
        self.kind.column_name(&self.indices)
    }

    /// Value at the grid point nearest to `t`.
    pub fn at(&self, t: f64) -> f64 {
        let k = self
            .times
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - t).abs().total_cmp(&(b.1 - t).abs()))
            .map(|(k, _)| k)
            .unwrap_or(0);
        self.values[k]
    }

    /// Largest `|value|` over grid points with `t ∈ [lo, hi]`.
    pub fn max_abs_on(&self, lo: f64, hi: f64) -> f64 {
        self.window(lo, hi).map(|v| v.abs()).fold(0.0, f64::max)
    }

    pub fn max_on(&self, lo: f64, hi: f64) -> f64 {
        self.window(lo, hi).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_on(&self, lo: f64, hi: f64) -> f64 {
        self.window(lo, hi).fold(f64::INFINITY, f64::min)
    }

    fn window(&self, lo: f64, hi: f64) -> impl Iterator<Item = f64> + '_ {
        self.times
            .iter()
            .zip(&self.values)
            .filter(move |(t, _)| **t >= lo - 1e-12 && **t <= hi + 1e-12)
            .map(|(_, v)| *v)
    }

    /// Largest value reached after the trace first drops below `floor`.
    pub fn revival_after_drop(&self, floor: f64) -> Option<f64> {
        let first = self.values.iter().position(|v| *v < floor)?;
        self.values[first..].iter().copied().reduce(f64::max)
    }

    /// CSV with header `t,value`.
    pub fn to_csv(&self) -> String {
        csv_text(
            &["t".into(), "value".into()],
            self.times
                .iter()
                .zip(&self.values)
                .map(|(t, v)| vec![*t, *v]),
        )
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        atomic_write(path, self.to_csv().as_bytes())
    }
}

/// Several traces on a shared grid as one CSV: `t,<col_1>,…`.
pub fn batch_csv(traces: &[CorrelatorTrace]) -> Result<String> {
    let first = traces
        .first()
        .ok_or_else(|| Error::InvalidArgument("no traces to write".into()))?;
    if traces.iter().any(|t| t.times != first.times) {
        return Err(Error::Dimension("traces use different time grids".into()));
    }
    let mut header = vec!["t".to_string()];
    header.extend(traces.iter().map(|t| t.column_name()));
    let rows = (0..first.times.len()).map(|k| {
        let mut row = vec![first.times[k]];
        row.extend(traces.iter().map(|t| t.values[k]));
        row
    });
    Ok(csv_text(&header, rows))
}

fn majorana_eigen(ctx: &ThermalContext, i: usize) -> Result<DMatrix<C64>> {
    if i == 0 || i > 2 * ctx.n_qubits {
        return Err(Error::IndexOutOfRange(format!(
            "Majorana {i} on {} qubits",
            ctx.n_qubits
        )));
    }
    Ok(ctx.to_eigenbasis(jordan_wigner(i, ctx.n_qubits)?.matrix()))
}

/// `G(t) = Re Tr(ρ A(t) B)` for eigenbasis operators, Hermitian `A`, `B`.
fn two_point_eigen(ctx: &ThermalContext, a: &DMatrix<C64>, b: &DMatrix<C64>, t: f64) -> f64 {
    let e = &ctx.eigenvalues;
    let d = ctx.dim();
    let mut acc = C64::new(0.0, 0.0);
    for m in 0..d {
        let w = ctx.weights[m];
        if w == 0.0 {
            continue;
        }
        for n in 0..d {
            acc += w * a[(m, n)] * b[(n, m)] * C64::from_polar(1.0, (e[m] - e[n]) * t);
        }
    }
    acc.re
}

/// `−Re Tr(ρ [A(t), B]²)` for eigenbasis operators.
fn four_point_eigen(ctx: &ThermalContext, a: &DMatrix<C64>, b: &DMatrix<C64>, t: f64) -> f64 {
    let at = ctx.evolve_eigen(a, t);
    let c = &at * b - b * &at;
    let c2 = &c * &c;
    -ctx.thermal_trace_eigen(&c2).re
}

fn sample(times: &[f64], f: impl Fn(f64) -> f64 + Sync) -> Result<Vec<f64>> {
    let values: Vec<f64> = times.par_iter().map(|&t| f(t)).collect();
    if let Some(k) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::Numerical(format!(
            "non-finite correlator at t = {}",
            times[k]
        )));
    }
    Ok(values)
}

/// `G_i(t) = Re⟨ψ^i(t) ψ^i(0)⟩_β`.
pub fn two_point(ctx: &ThermalContext, i: usize, times: &[f64]) -> Result<CorrelatorTrace> {
    let a = majorana_eigen(ctx, i)?;
    Ok(CorrelatorTrace {
        times: times.to_vec(),
        values: sample(times, |t| two_point_eigen(ctx, &a, &a, t))?,
        kind: CorrelatorKind::TwoPoint,
        indices: vec![i],
    })
}

/// `F_i(t) = −Re⟨[ψ^i(t), ψ^i(0)]²⟩_β`.
pub fn four_point_same(ctx: &ThermalContext, i: usize, times: &[f64]) -> Result<CorrelatorTrace> {
    let a = majorana_eigen(ctx, i)?;
    Ok(CorrelatorTrace {
        times: times.to_vec(),
        values: sample(times, |t| four_point_eigen(ctx, &a, &a, t))?,
        kind: CorrelatorKind::FourPoint,
        indices: vec![i],
    })
}

/// `F_ij(t) = −Re⟨[ψ^i(t), ψ^j(0)]²⟩_β`; `i = j` gives [`four_point_same`].
pub fn four_point_cross(
    ctx: &ThermalContext,
    i: usize,
    j: usize,
    times: &[f64],
) -> Result<CorrelatorTrace> {
    if i == j {
        return four_point_same(ctx, i, times);
    }
    let a = majorana_eigen(ctx, i)?;
    let b = majorana_eigen(ctx, j)?;
    Ok(CorrelatorTrace {
        times: times.to_vec(),
        values: sample(times, |t| four_point_eigen(ctx, &a, &b, t))?,
        kind: CorrelatorKind::FourPointCross,
        indices: vec![i, j],
    })
}

/// Correlator family averaged by [`averaged_traces`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    TwoPoint,
    FourPoint,
}

/// Arithmetic mean of `G_i` (or `F_i`) over `op_set`.
pub fn averaged_traces(
    ctx: &ThermalContext,
    family: Family,
    op_set: &[usize],
    times: &[f64],
) -> Result<CorrelatorTrace> {
    let traces = op_set
        .iter()
        .map(|&i| match family {
            Family::TwoPoint => two_point(ctx, i, times),
            Family::FourPoint => four_point_same(ctx, i, times),
        })
        .collect::<Result<Vec<_>>>()?;
    let mut avg = mean_trace(&traces)?;
    avg.kind = match family {
        Family::TwoPoint => CorrelatorKind::TwoPointAvg,
        Family::FourPoint => CorrelatorKind::FourPointAvg,
    };
    Ok(avg)
}

/// Pointwise mean of traces sharing one grid; keeps the first trace's kind.
pub fn mean_trace(traces: &[CorrelatorTrace]) -> Result<CorrelatorTrace> {
    let first = traces
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty operator set".into()))?;
    if traces.iter().any(|t| t.times != first.times) {
        return Err(Error::Dimension("traces use different time grids".into()));
    }
    let n = traces.len() as f64;
    let values = (0..first.times.len())
        .map(|k| traces.iter().map(|t| t.values[k]).sum::<f64>() / n)
        .collect();
    Ok(CorrelatorTrace {
        times: first.times.clone(),
        values,
        kind: first.kind,
        indices: traces.iter().flat_map(|t| t.indices.clone()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{model1, sample_syk};

    fn expm_oracle(h: &DMatrix<C64>, t: f64) -> DMatrix<C64> {
        (h * C64::new(0.0, -t)).exp()
    }

    #[test]
    fn grid_shape() {
        let g = default_correlator_grid();
        assert_eq!(g.len(), 1001);
        assert!((g[1000] - 100.0).abs() < 1e-12);
        assert!(time_grid(1.0, 0.0, 0.1).is_err());
        assert!(time_grid(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn thermal_state_invariants() {
        let ctx = ThermalContext::from_spec(&model1(), 4.0).unwrap();
        assert!((ctx.rho().trace().re - 1.0).abs() < 1e-12);
        assert!((ctx.sqrt_rho() * ctx.sqrt_rho() - ctx.rho()).norm() < 1e-12);
        let h = model1().realize().unwrap();
        let e_direct = ctx.expectation(h.matrix()).re;
        assert!((e_direct - ctx.mean_energy()).abs() < 1e-10);
    }

    #[test]
    fn infinite_temperature_is_maximally_mixed() {
        let ctx = ThermalContext::from_spec(&model1(), 0.0).unwrap();
        let id = DMatrix::<C64>::identity(16, 16) / C64::new(16.0, 0.0);
        assert!((ctx.rho() - id).norm() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        let h = model1().realize().unwrap();
        assert!(ThermalContext::new(&h, -1.0).is_err());
        let mut m = h.matrix().clone();
        m[(0, 1)] += C64::new(0.3, 0.0);
        let bad = DenseOperator::from_matrix(m).unwrap();
        assert!(ThermalContext::new(&bad, 1.0).is_err());
        let ctx = ThermalContext::new(&h, 1.0).unwrap();
        assert!(heisenberg(&ctx, &DenseOperator::identity(3), 1.0).is_err());
        assert!(two_point(&ctx, 9, &[0.0]).is_err());
    }

    #[test]
    fn heisenberg_properties() {
        let spec = sample_syk(6, 1.0, 2).unwrap();
        let h = spec.realize().unwrap();
        let ctx = ThermalContext::new(&h, 1.0).unwrap();
        let op = jordan_wigner(2, 3).unwrap();
        assert!(heisenberg(&ctx, &op, 0.0).unwrap().max_abs_diff(&op) < 1e-12);
        for t in [0.3, 2.0, 17.0] {
            let ot = heisenberg(&ctx, &op, t).unwrap();
            assert!((ot.frobenius_norm() - op.frobenius_norm()).abs() < 1e-12);
            let u = expm_oracle(h.matrix(), t);
            let direct = u.adjoint() * op.matrix() * &u;
            assert!((direct - ot.matrix()).norm() < 1e-9);
        }
        let hstep = 1e-5;
        let fd = (heisenberg(&ctx, &op, hstep).unwrap() - heisenberg(&ctx, &op, -hstep).unwrap())
            .scale(C64::new(1.0 / (2.0 * hstep), 0.0));
        let deriv = h.commutator(&op).scale(C64::new(0.0, 1.0));
        assert!(fd.max_abs_diff(&deriv) < 1e-6);
    }

    #[test]
    fn correlators_match_brute_force() {
        let spec = sample_syk(6, 1.4, 5).unwrap();
        let h = spec.realize().unwrap();
        let ctx = ThermalContext::new(&h, 2.0).unwrap();
        let times = [0.0, 0.7, 3.1, 12.0];
        let g = two_point(&ctx, 3, &times).unwrap();
        let f = four_point_same(&ctx, 3, &times).unwrap();
        let fx = four_point_cross(&ctx, 3, 5, &times).unwrap();
        let p3 = jordan_wigner(3, 3).unwrap().into_matrix();
        let p5 = jordan_wigner(5, 3).unwrap().into_matrix();
        let rho = ctx.rho();
        for (k, &t) in times.iter().enumerate() {
            let u = expm_oracle(h.matrix(), t);
            let p3t = u.adjoint() * &p3 * &u;
            let gb = (rho * &p3t * &p3).trace().re;
            let c = &p3t * &p3 - &p3 * &p3t;
            let fb = -(rho * &c * &c).trace().re;
            let cx = &p3t * &p5 - &p5 * &p3t;
            let fxb = -(rho * &cx * &cx).trace().re;
            assert!((g.values[k] - gb).abs() < 1e-9);
            assert!((f.values[k] - fb).abs() < 1e-9);
            assert!((fx.values[k] - fxb).abs() < 1e-9);
        }
    }

    #[test]
    fn initial_values() {
        let ctx = ThermalContext::from_spec(&model1(), 4.0).unwrap();
        for i in 1..=8 {
            assert!((two_point(&ctx, i, &[0.0]).unwrap().values[0] - 0.5).abs() < 1e-12);
            assert!(four_point_same(&ctx, i, &[0.0]).unwrap().values[0].abs() < 1e-12);
            for j in 1..=8 {
                if i != j {
                    let v = four_point_cross(&ctx, i, j, &[0.0]).unwrap().values[0];
                    assert!((v - 1.0).abs() < 1e-12);
                }
            }
        }
        let same = four_point_cross(&ctx, 2, 2, &[0.5]).unwrap();
        assert_eq!(same.kind, CorrelatorKind::FourPoint);
    }

    #[test]
    fn averages() {
        let ctx = ThermalContext::from_spec(&model1(), 4.0).unwrap();
        let times = [0.0, 1.0, 2.0];
        let avg =
            averaged_traces(&ctx, Family::TwoPoint, &[1, 2, 3, 4, 5, 6, 7, 8], &times).unwrap();
        assert!((avg.values[0] - 0.5).abs() < 1e-12);
        assert_eq!(avg.column_name(), "G_avg");
        let g = two_point(&ctx, 3, &times).unwrap();
        let same = mean_trace(&vec![g.clone(); 8]).unwrap();
        for k in 0..3 {
            assert!((same.values[k] - g.values[k]).abs() < 1e-15);
        }
        assert!(averaged_traces(&ctx, Family::FourPoint, &[], &times).is_err());
    }

    #[test]
    fn uncoupled_majorana_is_frozen() {
        let ctx = ThermalContext::from_spec(&model1(), 4.0).unwrap();
        let g8 = two_point(&ctx, 8, &[0.0, 5.0, 50.0]).unwrap();
        assert!(g8.values.iter().all(|v| (v - 0.5).abs() < 1e-12));
    }

    #[test]
    fn csv_output() {
        let tr = CorrelatorTrace {
            times: vec![0.0, 0.1],
            values: vec![0.5, 0.25],
            kind: CorrelatorKind::TwoPoint,
            indices: vec![3],
        };
        assert_eq!(tr.to_csv(), "t,value\n0,0.5\n0.1,0.25\n");
        let mut avg = tr.clone();
        avg.kind = CorrelatorKind::TwoPointAvg;
        assert_eq!(
            batch_csv(&[tr, avg]).unwrap(),
            "t,G_3,G_avg\n0,0.5,0.5\n0.1,0.25,0.25\n"
        );
    }
}
