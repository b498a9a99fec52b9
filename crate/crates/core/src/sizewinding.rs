//! Operator-coefficient extraction `ρ_β^{1/2} O(t) = Σ_P c_P Ŝ_P` and the
//! size-winding metrics built from it.
//!
//! `Ŝ_P` is the Hermitian, unit-normalized representative of each string
//! (`Tr Ŝ_P² / d = 1`): `2^{|P|/2} i^{|P|(|P|−1)/2} ψ^P` for Majorana strings
//! and the plain Pauli string for spin models. With this basis
//! `Σ_P c_P² = Tr(ρ^{1/2}O ρ^{1/2}O) / Tr(O ρ O)` is real for Hermitian `O`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::output::csv_text;
use crate::pauli_algebra::{
    hermitian_string_word, jordan_wigner, DenseOperator, MajoranaString, PauliWord,
};
use crate::spectra::{heisenberg, ThermalContext};
use crate::C64;

/// Coefficients at or below this magnitude (after normalization) are dropped.
pub const COEFFICIENT_CUTOFF: f64 = 1e-12;
/// Grid size of the slope search over `μ ∈ [0, 2π)`.
pub const SLOPE_GRID: usize = 4096;
/// Width at which the golden-section refinement stops.
pub const SLOPE_TOL: f64 = 1e-10;
/// Below this `r − L` the slope metric is degenerate.
pub const DEGENERACY_TOL: f64 = 1e-12;
/// Largest tolerated `|Im W|`.
pub const W_IMAG_TOL: f64 = 1e-9;

/// Operator basis used for the expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    /// Majorana strings; size = number of Majoranas.
    Majorana,
    /// Pauli strings; size = Pauli weight.
    Pauli,
}

/// One retained expansion coefficient.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coefficient {
    pub label: String,
    pub size: usize,
    pub value: C64,
}

/// Normalized expansion of `ρ^{1/2} O(t)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSet {
    pub basis: Basis,
    pub operator: String,
    pub t: f64,
    pub beta: f64,
    /// `‖ρ^{1/2} O(t)‖_F / √d` before normalization.
    pub raw_norm: f64,
    pub coefficients: Vec<Coefficient>,
}

impl CoefficientSet {
    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// `W = Σ_P c_P²`.
    pub fn w_complex(&self) -> C64 {
        self.coefficients.iter().map(|c| c.value * c.value).sum()
    }

    /// The same set multiplied by a global phase.
    pub fn with_global_phase(&self, phi: f64) -> Self {
        let mut out = self.clone();
        let g = C64::from_polar(1.0, phi);
        out.coefficients.iter_mut().for_each(|c| c.value *= g);
        out
    }
}

fn project(
    ctx: &ThermalContext,
    op_t: &DenseOperator,
    basis_words: impl Iterator<Item = (String, usize, PauliWord)>,
) -> (f64, Vec<Coefficient>) {
    let o = ctx.sqrt_rho() * op_t.matrix();
    let d = ctx.dim() as f64;
    let raw: Vec<(String, usize, C64)> = basis_words
        .map(|(label, size, w)| {
            // Ŝ is Hermitian, so Tr(Ŝ† O) = Tr(Ŝ O)
            let c = w.overlap(&o) / d;
            (label, size, c)
        })
        .collect();
    let norm = raw.iter().map(|(_, _, c)| c.norm_sqr()).sum::<f64>().sqrt();
    let coefficients = raw
        .into_iter()
        .filter_map(|(label, size, c)| {
            let v = c / norm;
            (v.norm() > COEFFICIENT_CUTOFF).then_some(Coefficient {
                label,
                size,
                value: v,
            })
        })
        .collect();
    (norm, coefficients)
}

fn check_real_w(coefficients: &[Coefficient]) -> Result<()> {
    let w: C64 = coefficients.iter().map(|c| c.value * c.value).sum();
    if w.im.abs() > W_IMAG_TOL {
        return Err(Error::Numerical(format!("W = {w} is not real")));
    }
    Ok(())
}

/// Expansion of `ρ^{1/2} ψ^i(t)` in the Majorana-string basis of the register.
pub fn extract_coefficients(ctx: &ThermalContext, i: usize, t: f64) -> Result<CoefficientSet> {
    let n_q = ctx.n_qubits();
    let n = 2 * n_q;
    let psi = jordan_wigner(i, n_q)?;
    let op_t = heisenberg(ctx, &psi, t)?;
    let words = (0u64..1 << n).map(|mask| {
        let s = MajoranaString::from_mask(n, mask).expect("mask within register");
        let w = hermitian_string_word(&s, n_q).expect("string fits register");
        (s.to_string(), s.size(), w)
    });
    let (raw_norm, coefficients) = project(ctx, &op_t, words);
    check_real_w(&coefficients)?;
    Ok(CoefficientSet {
        basis: Basis::Majorana,
        operator: format!("ψ{i}"),
        t,
        beta: ctx.beta(),
        raw_norm,
        coefficients,
    })
}

fn pauli_label(w: &PauliWord) -> String {
    (0..w.n_qubits)
        .map(|q| {
            let b = 1u64 << (w.n_qubits - 1 - q);
            match (w.x & b != 0, w.z & b != 0) {
                (false, false) => 'I',
                (true, false) => 'X',
                (true, true) => 'Y',
                (false, true) => 'Z',
            }
        })
        .collect()
}

/// Hermitian Pauli string with masks `(x, z)`: `i^{|x∧z|} X^x Z^z`.
fn hermitian_pauli(x: u64, z: u64, n: usize) -> PauliWord {
    let y = (x & z).count_ones() % 4;
    let phase = [
        C64::new(1.0, 0.0),
        C64::new(0.0, 1.0),
        C64::new(-1.0, 0.0),
        C64::new(0.0, -1.0),
    ][y as usize];
    PauliWord {
        x,
        z,
        phase,
        n_qubits: n,
    }
}

/// Expansion of `ρ^{1/2} W(t)` in the Pauli-string basis for a Hermitian
/// seed word `W` (e.g. a single-site `X`).
pub fn extract_pauli_coefficients(
    ctx: &ThermalContext,
    seed: &PauliWord,
    t: f64,
) -> Result<CoefficientSet> {
    let n = ctx.n_qubits();
    if seed.n_qubits != n {
        return Err(Error::Dimension(format!(
            "{}-qubit seed for a {n}-qubit model",
            seed.n_qubits
        )));
    }
    let seed_op = DenseOperator::hermitian(seed.to_dense(), "seed operator")?;
    let op_t = heisenberg(ctx, &seed_op, t)?;
    let words = (0u64..1 << n).flat_map(|x| {
        (0u64..1 << n).map(move |z| {
            let w = hermitian_pauli(x, z, n);
            (pauli_label(&w), w.weight(), w)
        })
    });
    let (raw_norm, coefficients) = project(ctx, &op_t, words);
    check_real_w(&coefficients)?;
    Ok(CoefficientSet {
        basis: Basis::Pauli,
        operator: pauli_label(seed),
        t,
        beta: ctx.beta(),
        raw_norm,
        coefficients,
    })
}

/// Per-size winding data.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SizeRow {
    pub size: usize,
    /// `q(l) = Σ_{|P|=l} c_P²`.
    pub q: C64,
    /// `p(l) = Σ_{|P|=l} |c_P|²`.
    pub p: f64,
    /// `|q(l)| / p(l)`.
    pub r_l: f64,
}

/// Size-resolved profile with `r = Σ_l |q(l)|` and `W = Σ_P c_P²`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindingProfile {
    pub rows: Vec<SizeRow>,
    pub r: f64,
    pub w: f64,
}

impl WindingProfile {
    pub fn row(&self, size: usize) -> Option<&SizeRow> {
        self.rows.iter().find(|r| r.size == size)
    }

    /// `C(μ) = |Σ_l q(l) e^{−iμl}|`.
    pub fn c_of_mu(&self, mu: f64) -> f64 {
        self.rows
            .iter()
            .map(|r| r.q * C64::from_polar(1.0, -mu * r.size as f64))
            .sum::<C64>()
            .norm()
    }

    /// Builds a profile directly from `q(l)` and `p(l)`; used for synthetic
    /// inputs.
    pub fn from_sizes(rows: &[(usize, C64, f64)]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidArgument("empty size profile".into()));
        }
        // a global phase e^{iφ} on the coefficients rotates every q(l) by
        // e^{2iφ}; undo it so that W is real and non-negative
        let wc: C64 = rows.iter().map(|r| r.1).sum();
        let gauge = if wc.norm() > DEGENERACY_TOL {
            wc.conj() / wc.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let rows: Vec<SizeRow> = rows
            .iter()
            .filter(|(_, _, p)| *p > 0.0)
            .map(|&(size, q, p)| SizeRow {
                size,
                q: q * gauge,
                p,
                r_l: q.norm() / p,
            })
            .collect();
        let r = rows.iter().map(|r| r.q.norm()).sum();
        Ok(WindingProfile {
            rows,
            r,
            w: wc.norm(),
        })
    }
}

/// `q(l)`, `p(l)` and `r_l` for every occupied size.
pub fn winding_profile(cs: &CoefficientSet) -> Result<WindingProfile> {
    if cs.is_empty() {
        return Err(Error::InvalidArgument("empty coefficient set".into()));
    }
    let mut acc: BTreeMap<usize, (C64, f64)> = BTreeMap::new();
    for c in &cs.coefficients {
        let e = acc.entry(c.size).or_insert((C64::new(0.0, 0.0), 0.0));
        e.0 += c.value * c.value;
        e.1 += c.value.norm_sqr();
    }
    let rows: Vec<(usize, C64, f64)> = acc.into_iter().map(|(l, (q, p))| (l, q, p)).collect();
    WindingProfile::from_sizes(&rows)
}

/// `r̄ = (r − W)/(1 − W)`; a frozen operator (`W → 1`) is degenerate.
pub fn phase_alignment(profile: &WindingProfile) -> Result<f64> {
    if profile.w > 1.0 - 1e-12 {
        return Err(Error::Degenerate(format!(
            "W = {} leaves no room for winding",
            profile.w
        )));
    }
    Ok((profile.r - profile.w) / (1.0 - profile.w))
}

/// Best linear-slope fit and the normalized metric `χ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub c_star: f64,
    pub mu_star: f64,
    /// `M = 2|q(l₁)| + 2|q(l₂)| − r` for the two largest `|q(l)|`.
    pub m_bound: f64,
    /// `L = max(W, M)`.
    pub l_bound: f64,
    pub chi: f64,
    pub degenerate: bool,
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > SLOPE_TOL {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    (a + b) / 2.0
}

/// `C* = max_μ C(μ)` by a 4096-point grid on `[0, 2π)` plus golden-section
/// refinement; `χ = (C* − L)/(r − L)` clamped to `[0, 1]`.
pub fn linear_slope_chi(profile: &WindingProfile) -> SlopeFit {
    let step = 2.0 * PI / SLOPE_GRID as f64;
    let (k, c_grid) = (0..SLOPE_GRID)
        .map(|k| (k, profile.c_of_mu(k as f64 * step)))
        .fold((0, f64::NEG_INFINITY), |best, cur| {
            if cur.1 > best.1 {
                cur
            } else {
                best
            }
        });
    let mu0 = k as f64 * step;
    let mu_ref = golden_max(|m| profile.c_of_mu(m), mu0 - step, mu0 + step);
    let c_ref = profile.c_of_mu(mu_ref);
    let (c_star, mu_star) = if c_ref >= c_grid {
        (c_ref, mu_ref)
    } else {
        (c_grid, mu0)
    };
    let mu_star = mu_star.rem_euclid(2.0 * PI);

    let mut mags: Vec<f64> = profile.rows.iter().map(|r| r.q.norm()).collect();
    mags.sort_by(|a, b| b.total_cmp(a));
    let top = |k: usize| mags.get(k).copied().unwrap_or(0.0);
    let m_bound = 2.0 * top(0) + 2.0 * top(1) - profile.r;
    let l_bound = profile.w.max(m_bound);
    let denom = profile.r - l_bound;
    let (chi, degenerate) = if denom < DEGENERACY_TOL {
        (0.0, true)
    } else {
        (((c_star - l_bound) / denom).clamp(0.0, 1.0), false)
    };
    SlopeFit {
        c_star,
        mu_star,
        m_bound,
        l_bound,
        chi,
        degenerate,
    }
}

/// Phase of `q(l)` relative to `q(1)` with its marker weight `|q(l)|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseRow {
    pub size: usize,
    pub phase: f64,
    pub abs_q: f64,
}

/// Per-string weight `|c_P|²` and phase `φ_P = arg c_P² − arg q(1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StringRow {
    pub label: String,
    pub size: usize,
    pub weight: f64,
    pub phase: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseFigure {
    pub sizes: Vec<PhaseRow>,
    pub strings: Vec<StringRow>,
}

fn wrap(phi: f64) -> f64 {
    let w = (phi + PI).rem_euclid(2.0 * PI) - PI;
    if w <= -PI {
        w + 2.0 * PI
    } else {
        w
    }
}

/// Plot-ready phase tables, referenced to the size-1 phase.
pub fn winding_phase_figure(cs: &CoefficientSet) -> Result<PhaseFigure> {
    let profile = winding_profile(cs)?;
    let q1 = profile
        .row(1)
        .map(|r| r.q)
        .filter(|q| q.norm() > 0.0)
        .ok_or_else(|| Error::Degenerate("q(1) vanishes; no phase reference".into()))?;
    let ref_phase = q1.arg();
    let raw_ref = cs
        .coefficients
        .iter()
        .filter(|c| c.size == 1)
        .map(|c| c.value * c.value)
        .sum::<C64>()
        .arg();
    let sizes = profile
        .rows
        .iter()
        .map(|r| PhaseRow {
            size: r.size,
            phase: if r.size == 1 {
                0.0
            } else {
                wrap(r.q.arg() - ref_phase)
            },
            abs_q: r.q.norm(),
        })
        .collect();
    let strings = cs
        .coefficients
        .iter()
        .map(|c| StringRow {
            label: c.label.clone(),
            size: c.size,
            weight: c.value.norm_sqr(),
            phase: wrap((c.value * c.value).arg() - raw_ref),
        })
        .collect();
    Ok(PhaseFigure { sizes, strings })
}

/// Every size-winding quantity for one operator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindingReport {
    pub basis: Basis,
    pub operator: String,
    pub t: f64,
    pub beta: f64,
    pub n_coefficients: usize,
    pub rows: Vec<SizeRow>,
    pub r: f64,
    pub w: f64,
    /// `None` when `W → 1`.
    pub r_bar: Option<f64>,
    pub fit: SlopeFit,
    pub phases: Option<PhaseFigure>,
}

/// Runs every metric on a coefficient set.
pub fn winding_report(cs: &CoefficientSet) -> Result<WindingReport> {
    let profile = winding_profile(cs)?;
    let r_bar = match phase_alignment(&profile) {
        Ok(v) => Some(v),
        Err(Error::Degenerate(_)) => None,
        Err(e) => return Err(e),
    };
    let fit = linear_slope_chi(&profile);
    let phases = match winding_phase_figure(cs) {
        Ok(f) => Some(f),
        Err(Error::Degenerate(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(WindingReport {
        basis: cs.basis,
        operator: cs.operator.clone(),
        t: cs.t,
        beta: cs.beta,
        n_coefficients: cs.len(),
        rows: profile.rows.clone(),
        r: profile.r,
        w: profile.w,
        r_bar,
        fit,
        phases,
    })
}

impl WindingReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Per-size table `l,re_q,im_q,abs_q,p,r_l,phase`.
    pub fn sizes_csv(&self) -> String {
        let phase_of = |l: usize| {
            self.phases
                .as_ref()
                .and_then(|f| f.sizes.iter().find(|r| r.size == l))
                .map(|r| r.phase)
                .unwrap_or(f64::NAN)
        };
        csv_text(
            &["l", "re_q", "im_q", "abs_q", "p", "r_l", "phase"].map(String::from),
            self.rows.iter().map(|r| {
                vec![
                    r.size as f64,
                    r.q.re,
                    r.q.im,
                    r.q.norm(),
                    r.p,
                    r.r_l,
                    phase_of(r.size),
                ]
            }),
        )
    }

    /// Per-string table `size,weight,phase` (labels are kept in the JSON).
    pub fn strings_csv(&self) -> String {
        let rows: Vec<Vec<f64>> = self
            .phases
            .as_ref()
            .map(|f| {
                f.strings
                    .iter()
                    .map(|s| vec![s.size as f64, s.weight, s.phase])
                    .collect()
            })
            .unwrap_or_default();
        csv_text(&["size", "weight", "phase"].map(String::from), rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{model1, sample_ising, sample_syk};
    use crate::pauli_algebra::Pauli;

    fn w_oracle(ctx: &ThermalContext, i: usize, t: f64) -> f64 {
        let psi = heisenberg(ctx, &jordan_wigner(i, ctx.n_qubits()).unwrap(), t).unwrap();
        let p = psi.matrix();
        let num = (p * ctx.sqrt_rho() * p * ctx.sqrt_rho()).trace();
        let den = (p * ctx.rho() * p).trace();
        assert!(num.im.abs() < 1e-12);
        num.re / den.re
    }

    #[test]
    fn infinite_temperature_seed_is_a_single_string() {
        let ctx = ThermalContext::from_spec(&model1(), 0.0).unwrap();
        let cs = extract_coefficients(&ctx, 3, 0.0).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs.coefficients[0].label, "ψ3");
        assert!((cs.coefficients[0].value.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn model1_coefficients() {
        let ctx = ThermalContext::from_spec(&model1(), 4.0).unwrap();
        let cs = extract_coefficients(&ctx, 1, 2.8).unwrap();
        assert_eq!(cs.len(), 8);
        assert!(cs.coefficients.iter().all(|c| c.size % 2 == 1));
        let norm: f64 = cs.coefficients.iter().map(|c| c.value.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        let prof = winding_profile(&cs).unwrap();
        assert!((prof.w - w_oracle(&ctx, 1, 2.8)).abs() < 1e-9);
        let weighted: f64 = prof.rows.iter().map(|r| r.p * r.r_l).sum();
        assert!((weighted - prof.r).abs() < 1e-12);
        assert!(prof.rows.iter().all(|r| r.r_l >= 0.95));
        assert!(prof.w <= prof.r + 1e-9 && prof.r <= 1.0 + 1e-9);
    }

    #[test]
    fn w_is_time_invariant() {
        let ctx = ThermalContext::from_spec(&sample_syk(8, 1.0, 4).unwrap(), 4.0).unwrap();
        let a = winding_profile(&extract_coefficients(&ctx, 2, 0.9).unwrap()).unwrap();
        let b = winding_profile(&extract_coefficients(&ctx, 2, 3.3).unwrap()).unwrap();
        assert!((a.w - b.w).abs() < 1e-9);
        assert!((a.w - w_oracle(&ctx, 2, 0.0)).abs() < 1e-9);
    }

    #[test]
    fn syk_parity_and_count_bound() {
        let ctx = ThermalContext::from_spec(&sample_syk(8, 1.0, 1).unwrap(), 4.0).unwrap();
        let cs = extract_coefficients(&ctx, 1, 1.7).unwrap();
        assert!(cs.coefficients.iter().all(|c| c.size % 2 == 1));
        assert!(cs.len() <= 1 << 7);
    }

    #[test]
    fn exact_linear_winding_has_unit_chi() {
        let mu0 = 0.83;
        let ps = [(1usize, 0.3), (3, 0.4), (5, 0.2), (7, 0.1)];
        let rows: Vec<_> = ps
            .iter()
            .map(|&(l, p)| (l, C64::from_polar(p, mu0 * l as f64), p))
            .collect();
        let prof = WindingProfile::from_sizes(&rows).unwrap();
        let fit = linear_slope_chi(&prof);
        assert!((fit.c_star - 1.0).abs() < 1e-12);
        assert!((fit.chi - 1.0).abs() < 1e-9);
        // odd sizes give period π in μ
        let d = (fit.mu_star - mu0).rem_euclid(PI);
        assert!(d.min(PI - d) < 1e-8, "μ* = {}", fit.mu_star);
    }

    #[test]
    fn two_sizes_are_degenerate() {
        let prof = WindingProfile::from_sizes(&[
            (1, C64::new(0.5, 0.0), 0.6),
            (3, C64::new(0.1, 0.0), 0.4),
        ])
        .unwrap();
        let fit = linear_slope_chi(&prof);
        assert!(fit.degenerate);
        assert_eq!(fit.chi, 0.0);
    }

    #[test]
    fn refined_search_matches_fine_grid() {
        let ctx = ThermalContext::from_spec(&sample_syk(8, 1.2, 9).unwrap(), 4.0).unwrap();
        let prof = winding_profile(&extract_coefficients(&ctx, 3, 2.0).unwrap()).unwrap();
        let fit = linear_slope_chi(&prof);
        let n = 1_000_000;
        let brute = (0..n)
            .map(|k| prof.c_of_mu(2.0 * PI * k as f64 / n as f64))
            .fold(f64::NEG_INFINITY, f64::max);
        assert!((fit.c_star - brute).abs() < 1e-8);
        assert!((prof.c_of_mu(0.0) - prof.w.abs()).abs() < 1e-12);
        assert!(fit.c_star >= prof.w.abs());
    }

    #[test]
    fn perfect_alignment_gives_unit_r_bar() {
        let prof = WindingProfile::from_sizes(&[
            (1, C64::new(0.5, 0.0), 0.5),
            (3, C64::new(-0.5, 0.0), 0.5),
        ])
        .unwrap();
        assert!((prof.r - 1.0).abs() < 1e-15);
        assert!((phase_alignment(&prof).unwrap() - 1.0).abs() < 1e-15);
        let frozen = WindingProfile::from_sizes(&[(1, C64::new(1.0, 0.0), 1.0)]).unwrap();
        assert!(matches!(
            phase_alignment(&frozen),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn global_phase_invariance() {
        let ctx = ThermalContext::from_spec(&sample_syk(6, 1.0, 2).unwrap(), 4.0).unwrap();
        let cs = extract_coefficients(&ctx, 2, 1.1).unwrap();
        let a = winding_report(&cs).unwrap();
        let b = winding_report(&cs.with_global_phase(0.9)).unwrap();
        assert!((a.r - b.r).abs() < 1e-12);
        assert!((a.w - b.w).abs() < 1e-12);
        assert!((a.fit.chi - b.fit.chi).abs() < 1e-9);
        assert!((a.r_bar.unwrap() - b.r_bar.unwrap()).abs() < 1e-12);
        assert!((a.fit.c_star - b.fit.c_star).abs() < 1e-9);
        for (x, y) in a.rows.iter().zip(&b.rows) {
            assert!((x.r_l - y.r_l).abs() < 1e-12);
        }
    }

    #[test]
    fn phase_figure_reference() {
        let ctx = ThermalContext::from_spec(&model1(), 4.0).unwrap();
        let cs = extract_coefficients(&ctx, 1, 2.8).unwrap();
        let fig = winding_phase_figure(&cs).unwrap();
        assert_eq!(fig.sizes[0].size, 1);
        assert_eq!(fig.sizes[0].phase, 0.0);
        assert_eq!(fig.strings.len(), 8);
        let rep = winding_report(&cs).unwrap();
        assert!(rep
            .sizes_csv()
            .starts_with("l,re_q,im_q,abs_q,p,r_l,phase\n1,"));
        let v: serde_json::Value = serde_json::from_str(&rep.to_json().unwrap()).unwrap();
        assert_eq!(v["n_coefficients"], 8);
    }

    #[test]
    fn ising_pauli_expansion() {
        let spec = sample_ising(4, 0.17, 0).unwrap();
        let ctx = ThermalContext::new(&spec.realize().unwrap(), 4.0).unwrap();
        let seed = PauliWord::single(4, 1, Pauli::X).unwrap();
        let cs = extract_pauli_coefficients(&ctx, &seed, 2.8).unwrap();
        let norm: f64 = cs.coefficients.iter().map(|c| c.value.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        // X on site 1 dressed by Z's on the other sites only
        assert!(cs.coefficients.iter().all(|c| c
            .label
            .chars()
            .nth(1)
            .is_some_and(|p| p == 'X' || p == 'Y')));
        let rep = winding_report(&cs).unwrap();
        assert!(rep.r <= 1.0 + 1e-9 && rep.w <= rep.r + 1e-9);
        let bad = PauliWord::single(3, 0, Pauli::X).unwrap();
        assert!(extract_pauli_coefficients(&ctx, &bad, 1.0).is_err());
    }
}
