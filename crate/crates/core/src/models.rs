//! Hamiltonian families: the learned Models 1–3, SYK samples, randomized
//! variants of Model 1 and all-to-all Ising models.

use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli_algebra::{
    qubits_for, realize, strings_commute, DenseOperator, MajoranaString, Pauli, PauliWord,
    ScaledString,
};
use crate::C64;

/// Consecutive rejections after which the commuting-term sampler restarts.
pub const MAX_CONSECUTIVE_REJECTIONS: usize = 10_000;

/// Fresh streams tried by the commuting-term sampler before giving up.
pub const MAX_RESTARTS: u64 = 64;

/// One Hamiltonian term `coefficient · ψ^support`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Term {
    pub coefficient: f64,
    pub support: MajoranaString,
}

/// A Majorana Hamiltonian `Σ_k c_k ψ^{P_k}` on `n_maj` Majoranas.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianSpec {
    label: String,
    n_maj: usize,
    terms: Vec<Term>,
    seed: Option<u64>,
}

impl HamiltonianSpec {
    pub fn new(label: impl Into<String>, n_maj: usize, terms: Vec<Term>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for t in &terms {
            if !t.coefficient.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "non-finite coefficient on {}",
                    t.support
                )));
            }
            if t.support.n_sites() != n_maj {
                return Err(Error::Dimension(format!(
                    "term {} built on {} sites, spec has {n_maj}",
                    t.support,
                    t.support.n_sites()
                )));
            }
            if !seen.insert(t.support.support()) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate support {}",
                    t.support
                )));
            }
        }
        Ok(HamiltonianSpec {
            label: label.into(),
            n_maj,
            terms,
            seed: None,
        })
    }

    /// Convenience constructor from `(coefficient, 1-based indices)` pairs.
    pub fn from_pairs(label: &str, n_maj: usize, pairs: &[(f64, &[usize])]) -> Result<Self> {
        let terms = pairs
            .iter()
            .map(|(c, idx)| {
                Ok(Term {
                    coefficient: *c,
                    support: MajoranaString::from_indices(n_maj, idx)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(label, n_maj, terms)
    }

    pub fn with_seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn n_maj(&self) -> usize {
        self.n_maj
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Qubits of the smallest register holding every Majorana.
    pub fn n_qubits(&self) -> usize {
        qubits_for(self.n_maj)
    }

    /// True when every pair of terms commutes.
    pub fn is_fully_commuting(&self) -> bool {
        self.terms.iter().enumerate().all(|(k, a)| {
            self.terms[k + 1..]
                .iter()
                .all(|b| strings_commute(&a.support, &b.support).unwrap_or(false))
        })
    }

    /// Pairs of term indices that fail to commute.
    pub fn non_commuting_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, ta) in self.terms.iter().enumerate() {
            for (b, tb) in self.terms.iter().enumerate().skip(a + 1) {
                if !strings_commute(&ta.support, &tb.support).unwrap_or(false) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn rms_coefficient(&self) -> f64 {
        if self.terms.is_empty() {
            return 0.0;
        }
        let ss: f64 = self
            .terms
            .iter()
            .map(|t| t.coefficient * t.coefficient)
            .sum();
        (ss / self.terms.len() as f64).sqrt()
    }

    /// Dense Hamiltonian on the minimal register.
    pub fn realize(&self) -> Result<DenseOperator> {
        realize(self, self.n_qubits())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&SpecFile::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SpecFile = serde_json::from_str(text)?;
        file.try_into()
    }
}

/// On-disk layout: `{label, n_maj, terms: [[coefficient, [indices…]], …], seed}`.
#[derive(Serialize, Deserialize)]
struct SpecFile {
    label: String,
    n_maj: usize,
    terms: Vec<(f64, Vec<usize>)>,
    seed: Option<u64>,
}

impl From<&HamiltonianSpec> for SpecFile {
    fn from(s: &HamiltonianSpec) -> Self {
        SpecFile {
            label: s.label.clone(),
            n_maj: s.n_maj,
            terms: s
                .terms
                .iter()
                .map(|t| (t.coefficient, t.support.indices()))
                .collect(),
            seed: s.seed,
        }
    }
}

impl TryFrom<SpecFile> for HamiltonianSpec {
    type Error = Error;
    fn try_from(f: SpecFile) -> Result<Self> {
        let terms = f
            .terms
            .iter()
            .map(|(c, idx)| {
                Ok(Term {
                    coefficient: *c,
                    support: MajoranaString::from_indices(f.n_maj, idx)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(HamiltonianSpec::new(f.label, f.n_maj, terms)?.with_seed(f.seed))
    }
}

impl Serialize for HamiltonianSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SpecFile::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for HamiltonianSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        SpecFile::deserialize(d)?
            .try_into()
            .map_err(serde::de::Error::custom)
    }
}

/// The five-term fully-commuting learned Hamiltonian on 7 Majoranas.
pub fn model1() -> HamiltonianSpec {
    HamiltonianSpec::from_pairs(
        "model1",
        7,
        &[
            (-0.36, &[1, 2, 4, 5]),
            (0.19, &[1, 3, 4, 7]),
            (-0.71, &[1, 3, 5, 6]),
            (0.22, &[2, 3, 4, 6]),
            (0.49, &[2, 3, 5, 7]),
        ],
    )
    .expect("valid literal")
}

/// Six-term learned Hamiltonian on 8 Majoranas (nearly commuting).
pub fn model2() -> HamiltonianSpec {
    HamiltonianSpec::from_pairs(
        "model2",
        8,
        &[
            (-0.35, &[1, 2, 3, 6]),
            (0.11, &[1, 2, 3, 8]),
            (-0.17, &[1, 2, 4, 7]),
            (-0.67, &[1, 3, 5, 7]),
            (0.38, &[2, 3, 6, 7]),
            (-0.05, &[2, 5, 6, 7]),
        ],
    )
    .expect("valid literal")
}

/// Eight-term learned Hamiltonian on 10 Majoranas (non-commuting).
pub fn model3() -> HamiltonianSpec {
    HamiltonianSpec::from_pairs(
        "model3",
        10,
        &[
            (0.60, &[1, 3, 4, 5]),
            (0.72, &[1, 3, 5, 6]),
            (0.49, &[1, 5, 6, 9]),
            (0.49, &[1, 5, 7, 8]),
            (0.64, &[2, 4, 8, 10]),
            (-0.75, &[2, 5, 7, 8]),
            (0.58, &[2, 5, 7, 10]),
            (-0.53, &[2, 7, 8, 10]),
        ],
    )
    .expect("valid literal")
}

/// Rotation angle of the ψ¹/ψ⁷ plane that makes truncated Model 2 commute.
pub fn model2_rotation_angle() -> f64 {
    (-0.35f64 / 0.38).atan()
}

/// Applies `ψ^a → cos θ ψ^a + sin θ ψ^b`, `ψ^b → cos θ ψ^b − sin θ ψ^a` to every
/// term and re-expands into canonical strings. Coefficients below `1e-14`
/// are dropped.
pub fn rotate_plane(
    spec: &HamiltonianSpec,
    a: usize,
    b: usize,
    theta: f64,
) -> Result<HamiltonianSpec> {
    let n = spec.n_maj();
    if a == b || a == 0 || b == 0 || a > n || b > n {
        return Err(Error::InvalidArgument(format!(
            "rotation plane ({a},{b}) invalid for {n} Majoranas"
        )));
    }
    let (c, s) = (theta.cos(), theta.sin());
    let image = |i: usize| -> Result<Vec<ScaledString>> {
        let one = |k: usize, w: f64| -> Result<ScaledString> {
            Ok(ScaledString::new(
                C64::new(w, 0.0),
                MajoranaString::single(n, k)?,
            ))
        };
        Ok(if i == a {
            vec![one(a, c)?, one(b, s)?]
        } else if i == b {
            vec![one(b, c)?, one(a, -s)?]
        } else {
            vec![one(i, 1.0)?]
        })
    };
    let mut acc: BTreeMap<u64, C64> = BTreeMap::new();
    for term in spec.terms() {
        let mut partial = vec![ScaledString::new(
            C64::new(term.coefficient, 0.0),
            MajoranaString::identity(n)?,
        )];
        for i in term.support.indices() {
            let img = image(i)?;
            let mut next = Vec::with_capacity(partial.len() * img.len());
            for p in &partial {
                for q in &img {
                    next.push(p.times(q)?);
                }
            }
            partial = next;
        }
        for p in partial {
            *acc.entry(p.string.support()).or_insert(C64::new(0.0, 0.0)) += p.prefactor;
        }
    }
    let mut terms = Vec::new();
    for (mask, coef) in acc {
        if coef.norm() < 1e-14 {
            continue;
        }
        if coef.im.abs() > 1e-12 {
            return Err(Error::Numerical(format!(
                "rotation produced complex coefficient {coef} on mask {mask:#b}"
            )));
        }
        terms.push(Term {
            coefficient: coef.re,
            support: MajoranaString::from_mask(n, mask)?,
        });
    }
    HamiltonianSpec::new(format!("{}-rot{a}{b}", spec.label()), n, terms)
}

/// Model 2 without its two smallest-magnitude terms.
pub fn model2_truncated() -> HamiltonianSpec {
    let mut terms = model2().terms().to_vec();
    terms.sort_by(|x, y| y.coefficient.abs().total_cmp(&x.coefficient.abs()));
    terms.truncate(terms.len() - 2);
    // restore the printed order
    let order: Vec<u64> = model2()
        .terms()
        .iter()
        .map(|t| t.support.support())
        .collect();
    terms.sort_by_key(|t| order.iter().position(|&m| m == t.support.support()));
    HamiltonianSpec::new("model2-truncated", 8, terms).expect("subset of a valid spec")
}

/// Truncated Model 2 rewritten in the rotated Majoranas
/// `χ^1 = cos θ ψ^1 + sin θ ψ^7`, `χ^7 = cos θ ψ^7 − sin θ ψ^1`; fully commuting.
///
/// Expressing `ψ` through `χ` is the substitution [`rotate_plane`] with `−θ`.
pub fn model2_commuting_reduction() -> HamiltonianSpec {
    rotate_plane(&model2_truncated(), 1, 7, -model2_rotation_angle())
        .expect("valid rotation")
        .with_label("model2-reduced")
}

fn rng_for(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn four_subsets(n: usize) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                for l in k + 1..=n {
                    out.push([i, j, k, l]);
                }
            }
        }
    }
    out
}

/// Dense SYK sample: one term per 4-subset, coefficients `N(0, 6J²/N³)`.
pub fn sample_syk(n_maj: usize, j: f64, seed: u64) -> Result<HamiltonianSpec> {
    if n_maj < 4 {
        return Err(Error::InvalidArgument(format!(
            "SYK needs at least 4 Majoranas, got {n_maj}"
        )));
    }
    if !(j > 0.0 && j.is_finite()) {
        return Err(Error::InvalidArgument(format!("coupling scale J = {j}")));
    }
    let var = 6.0 * j * j / (n_maj as f64).powi(3);
    let normal = Normal::new(0.0, var.sqrt()).expect("positive variance");
    let mut rng = rng_for(seed, 0);
    let terms = four_subsets(n_maj)
        .into_iter()
        .map(|idx| {
            Ok(Term {
                coefficient: normal.sample(&mut rng),
                support: MajoranaString::from_indices(n_maj, &idx)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(
        HamiltonianSpec::new(format!("syk{n_maj}-J{j}-s{seed}"), n_maj, terms)?
            .with_seed(Some(seed)),
    )
}

/// Keeps the supports of `base` and draws fresh coefficients from
/// `N(0, RMS(base)²)`.
pub fn randomize_coefficients(base: &HamiltonianSpec, seed: u64) -> Result<HamiltonianSpec> {
    if base.terms().is_empty() {
        return Err(Error::InvalidArgument("base spec has no terms".into()));
    }
    let normal = Normal::new(0.0, base.rms_coefficient())
        .map_err(|e| Error::InvalidArgument(format!("RMS of base: {e}")))?;
    let mut rng = rng_for(seed, 0);
    let terms = base
        .terms()
        .iter()
        .map(|t| Term {
            coefficient: normal.sample(&mut rng),
            support: t.support,
        })
        .collect();
    Ok(HamiltonianSpec::new(
        format!("{}-randcoef-s{seed}", base.label()),
        base.n_maj(),
        terms,
    )?
    .with_seed(Some(seed)))
}

/// Random fully-commuting model: uniformly drawn 4-Majorana supports are kept
/// only when they commute with every term kept so far. After
/// [`MAX_CONSECUTIVE_REJECTIONS`] rejections in a row the draw restarts on
/// the next ChaCha stream of the same seed.
pub fn sample_random_commuting(n_maj: usize, n_terms: usize, seed: u64) -> Result<HamiltonianSpec> {
    if n_maj < 4 {
        return Err(Error::InvalidArgument(format!(
            "need at least 4 Majoranas, got {n_maj}"
        )));
    }
    let rms = model1().rms_coefficient();
    let normal = Normal::new(0.0, rms).expect("positive RMS");
    for stream in 0..MAX_RESTARTS {
        let mut rng = rng_for(seed, stream);
        let mut kept: Vec<MajoranaString> = Vec::with_capacity(n_terms);
        let mut rejections = 0usize;
        while kept.len() < n_terms && rejections < MAX_CONSECUTIVE_REJECTIONS {
            let picks: Vec<usize> = sample(&mut rng, n_maj, 4)
                .into_iter()
                .map(|k| k + 1)
                .collect();
            let cand = MajoranaString::from_indices(n_maj, &picks)?;
            let ok = kept
                .iter()
                .all(|k| *k != cand && strings_commute(k, &cand).unwrap_or(false));
            if ok {
                kept.push(cand);
                rejections = 0;
            } else {
                rejections += 1;
            }
        }
        if kept.len() == n_terms {
            let terms = kept
                .into_iter()
                .map(|support| Term {
                    coefficient: normal.sample(&mut rng),
                    support,
                })
                .collect();
            return Ok(HamiltonianSpec::new(
                format!("randcomm{n_maj}x{n_terms}-s{seed}"),
                n_maj,
                terms,
            )?
            .with_seed(Some(seed)));
        }
    }
    Err(Error::Numerical(format!(
        "no set of {n_terms} commuting 4-Majorana terms found on {n_maj} sites \
         after {MAX_RESTARTS} restarts"
    )))
}

/// Coupling `J_ij Z^i Z^j` of an Ising model (0-based sites, `i < j`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsingCoupling {
    pub i: usize,
    pub j: usize,
    pub value: f64,
}

/// All-to-all Ising model `H = N^{-1/2} Σ_{i<j} J_ij Z^i Z^j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsingSpec {
    pub label: String,
    pub n_spins: usize,
    pub couplings: Vec<IsingCoupling>,
    pub seed: Option<u64>,
}

impl IsingSpec {
    /// Diagonal energies `E(b)` over computational basis states.
    pub fn energies(&self) -> Vec<f64> {
        let n = self.n_spins;
        let norm = 1.0 / (n as f64).sqrt();
        (0..1u64 << n)
            .map(|b| {
                self.couplings
                    .iter()
                    .map(|c| {
                        let zi = 1 - 2 * ((b >> (n - 1 - c.i)) & 1) as i64;
                        let zj = 1 - 2 * ((b >> (n - 1 - c.j)) & 1) as i64;
                        c.value * (zi * zj) as f64
                    })
                    .sum::<f64>()
                    * norm
            })
            .collect()
    }

    pub fn realize(&self) -> Result<DenseOperator> {
        let e = self.energies();
        let m = nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            e.len(),
            e.iter().map(|&x| C64::new(x, 0.0)),
        ));
        DenseOperator::hermitian(m, "Ising Hamiltonian")
    }

    /// Each coupling as a scaled Pauli word `J_ij N^{-1/2} Z^i Z^j`.
    pub fn term_words(&self) -> Vec<PauliWord> {
        let n = self.n_spins;
        let norm = 1.0 / (n as f64).sqrt();
        self.couplings
            .iter()
            .map(|c| {
                PauliWord::single(n, c.i, Pauli::Z)
                    .expect("site in range")
                    .mul(&PauliWord::single(n, c.j, Pauli::Z).expect("site in range"))
                    .scaled(C64::new(c.value * norm, 0.0))
            })
            .collect()
    }
}

/// Ising sample with `J_ij ~ N(0, J²)`.
pub fn sample_ising(n_spins: usize, j: f64, seed: u64) -> Result<IsingSpec> {
    if n_spins < 2 {
        return Err(Error::InvalidArgument(format!(
            "Ising model needs at least 2 spins, got {n_spins}"
        )));
    }
    let normal =
        Normal::new(0.0, j).map_err(|e| Error::InvalidArgument(format!("J = {j}: {e}")))?;
    let mut rng = rng_for(seed, 0);
    let mut couplings = Vec::new();
    for i in 0..n_spins {
        for k in i + 1..n_spins {
            couplings.push(IsingCoupling {
                i,
                j: k,
                value: normal.sample(&mut rng),
            });
        }
    }
    Ok(IsingSpec {
        label: format!("ising{n_spins}-J{j}-s{seed}"),
        n_spins,
        couplings,
        seed: Some(seed),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model1_shape() {
        let m = model1();
        assert_eq!(m.terms().len(), 5);
        assert!(m.terms().iter().all(|t| t.support.size() == 4));
        assert!(m.is_fully_commuting());
        let expect = ((0.36f64.powi(2)
            + 0.19f64.powi(2)
            + 0.71f64.powi(2)
            + 0.22f64.powi(2)
            + 0.49f64.powi(2))
            / 5.0)
            .sqrt();
        assert!((m.rms_coefficient() - expect).abs() < 1e-15);
    }

    #[test]
    fn models_2_and_3_do_not_commute() {
        assert_eq!(model2().terms().len(), 6);
        assert_eq!(model3().terms().len(), 8);
        assert!(!model2().is_fully_commuting());
        assert!(!model3().is_fully_commuting());
    }

    #[test]
    fn model2_reduction_commutes() {
        assert!((model2_rotation_angle() - (-0.35f64 / 0.38).atan()).abs() < 1e-16);
        let t = model2_truncated();
        let kept: Vec<f64> = t.terms().iter().map(|t| t.coefficient).collect();
        assert_eq!(kept, vec![-0.35, -0.17, -0.67, 0.38]);
        let r = model2_commuting_reduction();
        assert!(
            r.is_fully_commuting(),
            "non-commuting pairs {:?}",
            r.non_commuting_pairs()
        );
        assert!(!t.is_fully_commuting());
    }

    #[test]
    fn rotation_matches_dense_conjugation() {
        let t = model2_truncated();
        for th in [model2_rotation_angle(), -model2_rotation_angle(), 0.4] {
            let u = crate::pauli_algebra::plane_rotation(1, 7, th, 4).unwrap();
            let conj = &(&u * &t.realize().unwrap()) * &u.adjoint();
            let rot = rotate_plane(&t, 1, 7, th).unwrap().realize().unwrap();
            assert!(conj.max_abs_diff(&rot) < 1e-12);
        }
        let r = model2_commuting_reduction();
        let u = crate::pauli_algebra::plane_rotation(1, 7, -model2_rotation_angle(), 4).unwrap();
        let conj = &(&u * &t.realize().unwrap()) * &u.adjoint();
        assert!(conj.max_abs_diff(&r.realize().unwrap()) < 1e-12);
        assert!(rotate_plane(&t, 1, 1, 0.1).is_err());
        assert!(rotate_plane(&t, 0, 1, 0.1).is_err());
    }

    #[test]
    fn syk_term_count_and_reproducibility() {
        let a = sample_syk(10, 1.0, 7).unwrap();
        assert_eq!(a.terms().len(), 210);
        assert_eq!(a, sample_syk(10, 1.0, 7).unwrap());
        assert_ne!(a, sample_syk(10, 1.0, 8).unwrap());
        assert!(sample_syk(3, 1.0, 0).is_err());
        assert!(sample_syk(8, 0.0, 0).is_err());
    }

    #[test]
    fn randomized_coefficients_keep_supports() {
        let r = randomize_coefficients(&model1(), 3).unwrap();
        let a: Vec<_> = r.terms().iter().map(|t| t.support).collect();
        let b: Vec<_> = model1().terms().iter().map(|t| t.support).collect();
        assert_eq!(a, b);
        assert!(r.is_fully_commuting());
        let empty = HamiltonianSpec::new("e", 4, vec![]).unwrap();
        assert!(randomize_coefficients(&empty, 0).is_err());
    }

    #[test]
    fn random_commuting_terms() {
        let r = sample_random_commuting(7, 5, 11).unwrap();
        assert_eq!(r.terms().len(), 5);
        assert!(r.terms().iter().all(|t| t.support.size() == 4));
        assert!(r.is_fully_commuting());
        assert_eq!(r, sample_random_commuting(7, 5, 11).unwrap());
    }

    #[test]
    fn commuting_sampler_terminates_across_seeds() {
        for seed in 0..100 {
            let r = sample_random_commuting(7, 5, seed).unwrap();
            assert!(r.is_fully_commuting());
        }
    }

    #[test]
    fn syk_variance_statistics() {
        let (n, j) = (10usize, 1.3);
        let mut ss = 0.0;
        let mut count = 0usize;
        for seed in 0..10_000 {
            for t in sample_syk(n, j, seed).unwrap().terms() {
                ss += t.coefficient * t.coefficient;
                count += 1;
            }
        }
        let target = 6.0 * j * j / (n as f64).powi(3);
        assert!((ss / count as f64 / target - 1.0).abs() < 0.05);
    }

    #[test]
    fn randomized_std_statistics() {
        let base = model1();
        let mut ss = 0.0;
        let mut count = 0usize;
        for seed in 0..4_000 {
            for t in randomize_coefficients(&base, seed).unwrap().terms() {
                ss += t.coefficient * t.coefficient;
                count += 1;
            }
        }
        assert!(((ss / count as f64).sqrt() / base.rms_coefficient() - 1.0).abs() < 0.05);
    }

    #[test]
    fn impossible_commuting_request_errors() {
        // only one 4-subset exists on 4 sites
        assert!(sample_random_commuting(4, 2, 0).is_err());
    }

    #[test]
    fn ising_is_diagonal_and_commuting() {
        let s = sample_ising(5, 0.17, 1).unwrap();
        assert_eq!(s.couplings.len(), 10);
        let h = s.realize().unwrap();
        for r in 0..h.dim() {
            for c in 0..h.dim() {
                if r != c {
                    assert_eq!(h.matrix()[(r, c)], C64::new(0.0, 0.0));
                }
            }
        }
        let words = s.term_words();
        assert!(words
            .iter()
            .all(|a| words.iter().all(|b| a.commutes_with(b))));
        let sum = words
            .iter()
            .fold(nalgebra::DMatrix::<C64>::zeros(32, 32), |acc, w| {
                acc + w.to_dense()
            });
        assert!((sum - h.matrix()).norm() < 1e-12);
        assert!(sample_ising(1, 0.17, 0).is_err());
    }

    #[test]
    fn json_schema_roundtrip() {
        let m = model1().with_seed(Some(4));
        let text = m.to_json().unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["label"], "model1");
        assert_eq!(v["n_maj"], 7);
        assert_eq!(v["terms"][0][0], -0.36);
        assert_eq!(v["terms"][0][1], serde_json::json!([1, 2, 4, 5]));
        assert_eq!(v["seed"], 4);
        assert_eq!(HamiltonianSpec::from_json(&text).unwrap(), m);
    }

    #[test]
    fn spec_validation() {
        let s = MajoranaString::from_indices(4, &[1, 2, 3, 4]).unwrap();
        let t = Term {
            coefficient: 1.0,
            support: s,
        };
        assert!(HamiltonianSpec::new("dup", 4, vec![t, t]).is_err());
        let nan = Term {
            coefficient: f64::NAN,
            support: s,
        };
        assert!(HamiltonianSpec::new("nan", 4, vec![nan]).is_err());
        assert!(HamiltonianSpec::new("sites", 6, vec![t]).is_err());
    }
}
