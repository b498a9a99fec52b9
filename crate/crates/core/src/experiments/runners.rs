//! Sub-task construction for each experiment.

use serde::Serialize;

use super::config::{CoupledSet, ExperimentConfig, ExperimentKind, ModelSelector};
use super::{Artifact, Task};
use crate::error::{Error, Result};
use crate::models::{self, sample_ising, sample_syk, HamiltonianSpec};
use crate::output::{mixed_csv_text, Cell};
use crate::pauli_algebra::{Pauli, PauliWord};
use crate::sizewinding::{
    extract_coefficients, extract_pauli_coefficients, winding_report, WindingReport,
};
use crate::spectra::{
    averaged_traces, batch_csv, four_point_cross, four_point_same, time_grid, two_point, Family,
    ThermalContext,
};
use crate::teleport::{build_doubled, run_on, SweepMode, TeleportConfig};

/// Teleportation grid used inside `models23`.
const MODELS23_TELEPORT_STOP: f64 = 6.0;
const MODEL3_MU: f64 = -17.0;
const MODEL3_WINDING_T: f64 = 2.0;
const WINDING_T: f64 = 2.8;
const ISING_ENSEMBLE_SPINS: usize = 4;

pub(super) fn seeds_used(cfg: &ExperimentConfig) -> Vec<u64> {
    let mut s = match cfg.experiment {
        ExperimentKind::WindingEnsemble => {
            let mut v = cfg.syk_seed_list();
            v.extend(cfg.ensemble_seed_list());
            v
        }
        ExperimentKind::IsingScaling => cfg.ensemble_seed_list(),
        ExperimentKind::WindingReport => vec![],
        _ => cfg.syk_seed_list(),
    };
    if matches!(
        cfg.model,
        ModelSelector::Syk | ModelSelector::Randcoef | ModelSelector::Randcomm
    ) {
        s.push(cfg.seed);
    }
    s.sort_unstable();
    s.dedup();
    s
}

fn file_label(spec: &HamiltonianSpec) -> String {
    spec.label().replace(['/', ' '], "_")
}

fn default_ops(spec: &HamiltonianSpec, cfg: &ExperimentConfig) -> Vec<usize> {
    cfg.ops
        .clone()
        .unwrap_or_else(|| (1..=2 * spec.n_qubits()).collect())
}

pub(super) fn tasks(cfg: &ExperimentConfig) -> Result<Vec<Task>> {
    match cfg.experiment {
        ExperimentKind::Thermalization => thermalization(cfg),
        ExperimentKind::FourpointCross => fourpoint_cross(cfg),
        ExperimentKind::TeleportSymmetric => teleport(cfg, SweepMode::Symmetric),
        ExperimentKind::TeleportFixed => teleport(cfg, SweepMode::FixedInjection { t0: cfg.t0 }),
        ExperimentKind::WindingReport => winding_report_tasks(cfg),
        ExperimentKind::WindingEnsemble => winding_ensemble(cfg),
        ExperimentKind::Models23 => models23(cfg),
        ExperimentKind::IsingScaling => ising_scaling(cfg),
    }
}

fn model_and_overlays(cfg: &ExperimentConfig) -> Result<Vec<(String, HamiltonianSpec)>> {
    let spec = cfg.spec()?;
    let mut out = vec![(file_label(&spec), spec)];
    for s in cfg.syk_seed_list() {
        let syk = sample_syk(cfg.syk_n, cfg.syk_j, s)?;
        out.push((format!("syk_s{s}"), syk));
    }
    Ok(out)
}

fn correlator_files(
    label: &str,
    spec: &HamiltonianSpec,
    beta: f64,
    ops: &[usize],
    times: &[f64],
) -> Result<Vec<Artifact>> {
    let ctx = ThermalContext::from_spec(spec, beta)?;
    let mut g = ops
        .iter()
        .map(|&i| two_point(&ctx, i, times))
        .collect::<Result<Vec<_>>>()?;
    g.push(averaged_traces(&ctx, Family::TwoPoint, ops, times)?);
    let mut f = ops
        .iter()
        .map(|&i| four_point_same(&ctx, i, times))
        .collect::<Result<Vec<_>>>()?;
    f.push(averaged_traces(&ctx, Family::FourPoint, ops, times)?);
    Ok(vec![
        Artifact::text(format!("two_point_{label}.csv"), batch_csv(&g)?),
        Artifact::text(format!("four_point_{label}.csv"), batch_csv(&f)?),
    ])
}

fn thermalization(cfg: &ExperimentConfig) -> Result<Vec<Task>> {
    let times = cfg.times();
    let mut tasks = Vec::new();
    for (label, spec) in model_and_overlays(cfg)? {
        let ops = if label.starts_with("syk_") {
            (1..=spec.n_maj()).collect()
        } else {
            default_ops(&spec, cfg)
        };
        let (times, beta) = (times.clone(), cfg.beta);
        tasks.push(Task::new(label.clone(), move || {
            correlator_files(&label, &spec, beta, &ops, &times)
        }));
    }
    Ok(tasks)
}

fn fourpoint_cross(cfg: &ExperimentConfig) -> Result<Vec<Task>> {
    let times = cfg.times();
    let mut tasks = Vec::new();
    for (label, spec) in model_and_overlays(cfg)? {
        let ops: Vec<usize> = if label.starts_with("syk_") {
            (1..=spec.n_maj()).collect()
        } else {
            default_ops(&spec, cfg)
        };
        let (times, beta) = (times.clone(), cfg.beta);
        tasks.push(Task::new(label.clone(), move || {
            let ctx = ThermalContext::from_spec(&spec, beta)?;
            let mut traces = Vec::new();
            for (a, &i) in ops.iter().enumerate() {
                for &j in &ops[a + 1..] {
                    traces.push(four_point_cross(&ctx, i, j, &times)?);
                }
            }
            Ok(vec![Artifact::text(
                format!("four_point_cross_{label}.csv"),
                batch_csv(&traces)?,
            )])
        }));
    }
    Ok(tasks)
}

fn coupled_list(spec: &HamiltonianSpec, set: CoupledSet) -> Option<Vec<usize>> {
    match set {
        CoupledSet::All => None,
        CoupledSet::Hamiltonian => {
            let mut v: Vec<usize> = spec
                .terms()
                .iter()
                .flat_map(|t| t.support.indices())
                .collect();
            v.sort_unstable();
            v.dedup();
            Some(v)
        }
    }
}

/// Prominence used when counting local maxima; zero keeps every strict
/// interior maximum of the sampled curve.
pub const MAXIMA_PROMINENCE: f64 = 0.0;

fn sweep_task(
    label: String,
    spec: HamiltonianSpec,
    base: TeleportConfig,
    pairs: Vec<(usize, usize)>,
) -> Task {
    Task::new(label.clone(), move || {
        let dsys = build_doubled(&spec, base.beta)?;
        let mut files = Vec::new();
        let mut rows = Vec::new();
        for &(i, j) in &pairs {
            let mut c = base.clone();
            c.spec = spec.clone();
            c.pair = (i, j);
            let tr = run_on(&dsys, &c)?;
            let (pt, pv) = tr.peak();
            rows.push(vec![
                Cell::from(label.as_str()),
                Cell::from(format!("{i}-{j}")),
                Cell::from(pt),
                Cell::from(pv),
                Cell::from(tr.local_maxima(MAXIMA_PROMINENCE).len()),
            ]);
            let stem = format!("teleport_{label}_{i}-{j}");
            files.push(Artifact::text(format!("{stem}.csv"), tr.to_csv()));
            files.push(Artifact::json(format!("{stem}.json"), &tr.config)?);
        }
        files.push(Artifact::text(
            format!("teleport_peaks_{label}.csv"),
            mixed_csv_text(
                &["label", "pair", "peak_t", "peak_value", "n_local_maxima"],
                &rows,
            ),
        ));
        Ok(files)
    })
}

fn teleport_base(
    cfg: &ExperimentConfig,
    spec: &HamiltonianSpec,
    mode: SweepMode,
    times: Vec<f64>,
) -> TeleportConfig {
    let mut base = TeleportConfig::new(spec.clone());
    base.beta = cfg.beta;
    base.mu = cfg.mu;
    base.n_norm = cfg.n_norm;
    base.q = cfg.q;
    base.mode = mode;
    base.coupling = cfg.coupling.clone();
    base.times = times;
    base.coupled = coupled_list(spec, cfg.coupled);
    base
}

fn teleport(cfg: &ExperimentConfig, mode: SweepMode) -> Result<Vec<Task>> {
    let times = cfg.times();
    let mut tasks = Vec::new();
    for (label, spec) in model_and_overlays(cfg)? {
        let pairs = cfg.pairs.resolve(spec.n_maj());
        if let Some(&(i, j)) = pairs.iter().find(|(_, j)| *j > 2 * spec.n_qubits()) {
            return Err(Error::Config(format!("pair {i}-{j} outside {label}")));
        }
        let base = teleport_base(cfg, &spec, mode.clone(), times.clone());
        tasks.push(sweep_task(label, spec, base, pairs));
    }
    Ok(tasks)
}

fn report_artifacts(
    stem: &str,
    rep: &WindingReport,
    cs: &crate::sizewinding::CoefficientSet,
) -> Result<Vec<Artifact>> {
    #[derive(Serialize)]
    struct Full<'a> {
        report: &'a WindingReport,
        coefficients: &'a [crate::sizewinding::Coefficient],
    }
    Ok(vec![
        Artifact::json(
            format!("{stem}.json"),
            &Full {
                report: rep,
                coefficients: &cs.coefficients,
            },
        )?,
        Artifact::text(format!("{stem}_sizes.csv"), rep.sizes_csv()),
        Artifact::text(format!("{stem}_strings.csv"), rep.strings_csv()),
    ])
}

fn summary_cells(rep: &WindingReport) -> Vec<Cell> {
    vec![
        Cell::from(rep.operator.clone()),
        Cell::from(rep.n_coefficients),
        Cell::from(rep.w),
        Cell::from(rep.r),
        Cell::from(rep.r_bar.unwrap_or(f64::NAN)),
        Cell::from(rep.fit.c_star),
        Cell::from(rep.fit.mu_star),
        Cell::from(rep.fit.chi),
        Cell::from(if rep.fit.degenerate { 1.0 } else { 0.0 }),
    ]
}

const SUMMARY_HEADER: [&str; 9] = [
    "operator",
    "n_coefficients",
    "W",
    "r",
    "r_bar",
    "c_star",
    "mu_star",
    "chi",
    "degenerate",
];

fn winding_report_tasks(cfg: &ExperimentConfig) -> Result<Vec<Task>> {
    let spec = cfg.spec()?;
    let label = file_label(&spec);
    let ops = cfg
        .ops
        .clone()
        .unwrap_or_else(|| (1..=spec.n_maj()).collect());
    let (beta, t) = (cfg.beta, cfg.t);
    Ok(vec![Task::new(label.clone(), move || {
        let ctx = ThermalContext::from_spec(&spec, beta)?;
        let mut files = Vec::new();
        let mut rows = Vec::new();
        for &i in &ops {
            let cs = extract_coefficients(&ctx, i, t)?;
            let rep = winding_report(&cs)?;
            rows.push(summary_cells(&rep));
            files.extend(report_artifacts(
                &format!("winding_{label}_op{i}"),
                &rep,
                &cs,
            )?);
        }
        files.push(Artifact::text(
            format!("winding_{label}_summary.csv"),
            mixed_csv_text(&SUMMARY_HEADER, &rows),
        ));
        Ok(files)
    })])
}

/// One operator of the size-winding ensemble.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnsembleRow {
    pub family: String,
    pub label: String,
    pub seed: Option<u64>,
    pub operator: String,
    pub trained: bool,
    pub t: f64,
    pub n_coefficients: usize,
    pub w: f64,
    pub r: f64,
    pub r_bar: Option<f64>,
    pub chi: f64,
    pub degenerate: bool,
}

fn majorana_rows(
    family: &str,
    spec: &HamiltonianSpec,
    beta: f64,
    t: f64,
    trained: bool,
) -> Result<Vec<EnsembleRow>> {
    let ctx = ThermalContext::from_spec(spec, beta)?;
    (1..=spec.n_maj())
        .map(|i| {
            let rep = winding_report(&extract_coefficients(&ctx, i, t)?)?;
            Ok(EnsembleRow {
                family: family.into(),
                label: spec.label().into(),
                seed: spec.seed(),
                operator: rep.operator.clone(),
                trained: trained && i <= 2,
                t,
                n_coefficients: rep.n_coefficients,
                w: rep.w,
                r: rep.r,
                r_bar: rep.r_bar,
                chi: rep.fit.chi,
                degenerate: rep.fit.degenerate,
            })
        })
        .collect()
}

fn ising_rows(
    family: &str,
    n: usize,
    j: f64,
    seed: u64,
    beta: f64,
    t: f64,
) -> Result<Vec<EnsembleRow>> {
    let spec = sample_ising(n, j, seed)?;
    let ctx = ThermalContext::new(&spec.realize()?, beta)?;
    (0..n)
        .map(|site| {
            let w = PauliWord::single(n, site, Pauli::X)?;
            let rep = winding_report(&extract_pauli_coefficients(&ctx, &w, t)?)?;
            Ok(EnsembleRow {
                family: family.into(),
                label: spec.label.clone(),
                seed: Some(seed),
                operator: rep.operator.clone(),
                trained: false,
                t,
                n_coefficients: rep.n_coefficients,
                w: rep.w,
                r: rep.r,
                r_bar: rep.r_bar,
                chi: rep.fit.chi,
                degenerate: rep.fit.degenerate,
            })
        })
        .collect()
}

/// Families of the size-winding scatter: Models 1–3 (`t = 2.8`, Model 3 at
/// `t = 2`), randomized-coefficient and randomized-term variants of Model 1,
/// 4-spin Ising models and SYK seeds, all at inverse temperature `beta`.
pub fn ensemble_rows(
    beta: f64,
    ensemble_seeds: &[u64],
    syk_seeds: &[u64],
    syk_n: usize,
    syk_j: f64,
    ising_j: f64,
) -> Result<Vec<EnsembleRow>> {
    use rayon::prelude::*;
    type Job = Box<dyn Fn() -> Result<Vec<EnsembleRow>> + Send + Sync>;
    let mut jobs: Vec<Job> = vec![
        Box::new(move || majorana_rows("model1", &models::model1(), beta, WINDING_T, true)),
        Box::new(move || majorana_rows("model2", &models::model2(), beta, WINDING_T, true)),
        Box::new(move || majorana_rows("model3", &models::model3(), beta, MODEL3_WINDING_T, true)),
    ];
    for &s in ensemble_seeds {
        jobs.push(Box::new(move || {
            majorana_rows(
                "randcoef",
                &models::randomize_coefficients(&models::model1(), s)?,
                beta,
                WINDING_T,
                false,
            )
        }));
        jobs.push(Box::new(move || {
            majorana_rows(
                "randcomm",
                &models::sample_random_commuting(7, 5, s)?,
                beta,
                WINDING_T,
                false,
            )
        }));
        jobs.push(Box::new(move || {
            ising_rows("ising4", ISING_ENSEMBLE_SPINS, ising_j, s, beta, WINDING_T)
        }));
    }
    for &s in syk_seeds {
        jobs.push(Box::new(move || {
            majorana_rows("syk", &sample_syk(syk_n, syk_j, s)?, beta, WINDING_T, false)
        }));
    }
    let parts = jobs.par_iter().map(|j| j()).collect::<Result<Vec<_>>>()?;
    Ok(parts.into_iter().flatten().collect())
}

fn ensemble_csv(rows: &[EnsembleRow]) -> String {
    let cells: Vec<Vec<Cell>> = rows
        .iter()
        .map(|r| {
            vec![
                Cell::from(r.family.as_str()),
                Cell::from(r.label.as_str()),
                Cell::from(r.seed.map_or(f64::NAN, |s| s as f64)),
                Cell::from(r.operator.as_str()),
                Cell::from(if r.trained { 1.0 } else { 0.0 }),
                Cell::from(r.t),
                Cell::from(r.n_coefficients),
                Cell::from(r.w),
                Cell::from(r.r),
                Cell::from(r.r_bar.unwrap_or(f64::NAN)),
                Cell::from(r.chi),
                Cell::from(if r.degenerate { 1.0 } else { 0.0 }),
            ]
        })
        .collect();
    mixed_csv_text(
        &[
            "family",
            "label",
            "seed",
            "operator",
            "trained",
            "t",
            "n_coefficients",
            "W",
            "r",
            "r_bar",
            "chi",
            "degenerate",
        ],
        &cells,
    )
}

/// Median of finite values; `None` if there are none.
pub fn median(values: impl IntoIterator<Item = f64>) -> Option<f64> {
    let mut v: Vec<f64> = values.into_iter().filter(|x| x.is_finite()).collect();
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    })
}

#[derive(Serialize)]
struct FamilyStats {
    family: String,
    n: usize,
    min_r_bar: f64,
    median_r_bar: f64,
    max_r_bar: f64,
    median_chi: f64,
}

fn family_stats(rows: &[EnsembleRow]) -> Vec<FamilyStats> {
    let mut fams: Vec<String> = Vec::new();
    for r in rows {
        if !fams.contains(&r.family) {
            fams.push(r.family.clone());
        }
    }
    fams.into_iter()
        .map(|f| {
            let sel: Vec<&EnsembleRow> = rows.iter().filter(|r| r.family == f).collect();
            let rb: Vec<f64> = sel.iter().filter_map(|r| r.r_bar).collect();
            FamilyStats {
                family: f,
                n: sel.len(),
                min_r_bar: rb.iter().copied().fold(f64::INFINITY, f64::min),
                median_r_bar: median(rb.iter().copied()).unwrap_or(f64::NAN),
                max_r_bar: rb.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                median_chi: median(sel.iter().map(|r| r.chi)).unwrap_or(f64::NAN),
            }
        })
        .collect()
}

fn winding_ensemble(cfg: &ExperimentConfig) -> Result<Vec<Task>> {
    let c = cfg.clone();
    Ok(vec![Task::new("ensemble", move || {
        let rows = ensemble_rows(
            c.beta,
            &c.ensemble_seed_list(),
            &c.syk_seed_list(),
            c.syk_n,
            c.syk_j,
            c.ising_j,
        )?;
        Ok(vec![
            Artifact::text("winding_ensemble.csv", ensemble_csv(&rows)),
            Artifact::json("winding_ensemble_summary.json", &family_stats(&rows))?,
        ])
    })])
}

fn models23(cfg: &ExperimentConfig) -> Result<Vec<Task>> {
    let times = cfg.times();
    let tele_times = time_grid(0.0, MODELS23_TELEPORT_STOP, cfg.t_step)?;
    let mut tasks = Vec::new();
    for (spec, mu, t_wind) in [
        (models::model2(), cfg.mu, WINDING_T),
        (models::model3(), MODEL3_MU, MODEL3_WINDING_T),
    ] {
        let label = file_label(&spec);
        let ops: Vec<usize> = (1..=2 * spec.n_qubits()).collect();
        {
            let (label, spec, times, beta) = (label.clone(), spec.clone(), times.clone(), cfg.beta);
            tasks.push(Task::new(format!("{label}:correlators"), move || {
                correlator_files(&label, &spec, beta, &ops, &times)
            }));
        }
        let mut base = teleport_base(cfg, &spec, SweepMode::Symmetric, tele_times.clone());
        base.mu = mu;
        let pairs = cfg.pairs.resolve(spec.n_maj());
        tasks.push(sweep_task(label.clone(), spec.clone(), base, pairs));
        let beta = cfg.beta;
        tasks.push(Task::new(format!("{label}:winding"), move || {
            let ctx = ThermalContext::from_spec(&spec, beta)?;
            let mut rows = Vec::new();
            let mut files = Vec::new();
            for i in 1..=spec.n_maj() {
                let cs = extract_coefficients(&ctx, i, t_wind)?;
                let rep = winding_report(&cs)?;
                rows.push(summary_cells(&rep));
                files.extend(report_artifacts(
                    &format!("winding_{label}_op{i}"),
                    &rep,
                    &cs,
                )?);
            }
            files.push(Artifact::text(
                format!("winding_{label}_summary.csv"),
                mixed_csv_text(&SUMMARY_HEADER, &rows),
            ));
            Ok(files)
        }));
    }
    Ok(tasks)
}

/// One site of one Ising sample in the finite-size scan.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingRow {
    pub n: usize,
    pub seed: u64,
    pub site: usize,
    pub t: f64,
    pub r_bar: Option<f64>,
    pub chi: f64,
}

/// `r̄` of single-site `X` seeds for Ising models of each size at
/// `t = 2.8 √(N/4)`.
pub fn ising_scaling_rows(
    sizes: &[usize],
    seeds: &[u64],
    j: f64,
    beta: f64,
) -> Result<Vec<ScalingRow>> {
    use rayon::prelude::*;
    let jobs: Vec<(usize, u64)> = sizes
        .iter()
        .flat_map(|&n| seeds.iter().map(move |&s| (n, s)))
        .collect();
    let parts = jobs
        .par_iter()
        .map(|&(n, s)| {
            let t = WINDING_T * (n as f64 / 4.0).sqrt();
            Ok(ising_rows("ising", n, j, s, beta, t)?
                .into_iter()
                .enumerate()
                .map(|(site, r)| ScalingRow {
                    n,
                    seed: s,
                    site,
                    t,
                    r_bar: r.r_bar,
                    chi: r.chi,
                })
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(parts.into_iter().flatten().collect())
}

/// Median over seeds of each seed's median `r̄`, per size.
pub fn scaling_medians(rows: &[ScalingRow], sizes: &[usize]) -> Vec<(usize, f64, Vec<f64>)> {
    sizes
        .iter()
        .map(|&n| {
            let mut seeds: Vec<u64> = rows.iter().filter(|r| r.n == n).map(|r| r.seed).collect();
            seeds.sort_unstable();
            seeds.dedup();
            let per_seed: Vec<f64> = seeds
                .iter()
                .filter_map(|&s| {
                    median(
                        rows.iter()
                            .filter(|r| r.n == n && r.seed == s)
                            .filter_map(|r| r.r_bar),
                    )
                })
                .collect();
            (
                n,
                median(per_seed.iter().copied()).unwrap_or(f64::NAN),
                per_seed,
            )
        })
        .collect()
}

fn ising_scaling(cfg: &ExperimentConfig) -> Result<Vec<Task>> {
    let c = cfg.clone();
    Ok(vec![Task::new("scaling", move || {
        let seeds = c.ensemble_seed_list();
        let rows = ising_scaling_rows(&c.sizes, &seeds, c.ising_j, c.beta)?;
        let cells: Vec<Vec<Cell>> = rows
            .iter()
            .map(|r| {
                vec![
                    Cell::from(r.n),
                    Cell::from(r.seed as f64),
                    Cell::from(r.site),
                    Cell::from(r.t),
                    Cell::from(r.r_bar.unwrap_or(f64::NAN)),
                    Cell::from(r.chi),
                ]
            })
            .collect();
        let summary: Vec<Vec<Cell>> = scaling_medians(&rows, &c.sizes)
            .into_iter()
            .map(|(n, m, per)| {
                vec![
                    Cell::from(n),
                    Cell::from(m),
                    Cell::from(per.iter().copied().fold(f64::INFINITY, f64::min)),
                    Cell::from(per.iter().copied().fold(f64::NEG_INFINITY, f64::max)),
                ]
            })
            .collect();
        Ok(vec![
            Artifact::text(
                "ising_scaling.csv",
                mixed_csv_text(&["N", "seed", "site", "t", "r_bar", "chi"], &cells),
            ),
            Artifact::text(
                "ising_scaling_summary.csv",
                mixed_csv_text(
                    &["N", "median_r_bar", "min_seed_median", "max_seed_median"],
                    &summary,
                ),
            ),
        ])
    })])
}
