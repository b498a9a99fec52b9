//! Flat `key = value` experiment configuration.
//!
//! Lines are `key = value`; `#` starts a comment. CLI flags override file
//! entries key by key. Every key has a default that may depend on the
//! experiment, the model and the coupling mode; [`ExperimentConfig::to_kv`]
//! writes the fully resolved form, which parses back to the same config.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::models::{self, HamiltonianSpec};
use crate::spectra::time_grid;
use crate::teleport::{CouplingMode, DEFAULT_TROTTER_TIMES};

/// Published keys with a short description of each.
pub const SCHEMA: &[(&str, &str)] = &[
    ("experiment", "thermalization | fourpoint-cross | teleport-symmetric | teleport-fixed | winding-report | winding-ensemble | models23 | ising-scaling"),
    ("model", "model1 | model2 | model3 | model2-reduced | syk | randcoef | randcomm"),
    ("seed", "seed of sampled models (syk, randcoef, randcomm); default 0"),
    ("n_maj", "Majorana count of a sampled syk model; default 10"),
    ("j", "coupling scale of a sampled syk model; default 1.125 for correlators, 1.25 otherwise"),
    ("beta", "inverse temperature; default 4"),
    ("t_start", "first grid time; default 0"),
    ("t_stop", "last grid time; default 100 for correlators, 6 for teleportation"),
    ("t_step", "grid spacing; default 0.1"),
    ("mu", "coupling strength; default -12 (-17 for model3, -18 when trotterized)"),
    ("n_norm", "coupling normalization N; default 10 (8 when trotterized)"),
    ("q", "coupling normalization q; default 4"),
    ("pairs", "teleportation pairs: all | trained | list like 1-2,3-5; default all"),
    ("ops", "Majorana operators: all | list like 1,2,3; default all"),
    ("t", "size-winding time; default 2.8 (2 for model3)"),
    ("t0", "injection time of teleport-fixed; default 2.8"),
    ("coupling", "instantaneous | trotterized; default instantaneous"),
    ("trotter_times", "coupling times of the trotterized mode; default -1.6,0,1.6"),
    ("coupled", "all | hamiltonian: Majoranas entering the coupling sum; default all"),
    ("syk_seeds", "number of SYK overlay seeds; default 5"),
    ("syk_n", "Majorana count of SYK overlays; default 10"),
    ("syk_j", "J of SYK overlays; default 1.125 for correlators, 1.25 otherwise"),
    ("ensemble_seeds", "seeds per randomized family; default 3"),
    ("sizes", "Ising sizes of ising-scaling; default 4,6,8"),
    ("ising_j", "Ising coupling scale; default 0.17"),
    ("out", "output directory; default out/<experiment>"),
];

/// The figure-level experiments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Thermalization,
    FourpointCross,
    TeleportSymmetric,
    TeleportFixed,
    WindingReport,
    WindingEnsemble,
    Models23,
    IsingScaling,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 8] = [
        ExperimentKind::Thermalization,
        ExperimentKind::FourpointCross,
        ExperimentKind::TeleportSymmetric,
        ExperimentKind::TeleportFixed,
        ExperimentKind::WindingReport,
        ExperimentKind::WindingEnsemble,
        ExperimentKind::Models23,
        ExperimentKind::IsingScaling,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentKind::Thermalization => "thermalization",
            ExperimentKind::FourpointCross => "fourpoint-cross",
            ExperimentKind::TeleportSymmetric => "teleport-symmetric",
            ExperimentKind::TeleportFixed => "teleport-fixed",
            ExperimentKind::WindingReport => "winding-report",
            ExperimentKind::WindingEnsemble => "winding-ensemble",
            ExperimentKind::Models23 => "models23",
            ExperimentKind::IsingScaling => "ising-scaling",
        }
    }

    fn is_correlator(&self) -> bool {
        matches!(
            self,
            ExperimentKind::Thermalization | ExperimentKind::FourpointCross
        )
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment '{s}'")))
    }
}

/// Which Hamiltonian an experiment runs on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelSelector {
    Model1,
    Model2,
    Model3,
    Model2Reduced,
    Syk,
    Randcoef,
    Randcomm,
}

impl ModelSelector {
    const ALL: [ModelSelector; 7] = [
        ModelSelector::Model1,
        ModelSelector::Model2,
        ModelSelector::Model3,
        ModelSelector::Model2Reduced,
        ModelSelector::Syk,
        ModelSelector::Randcoef,
        ModelSelector::Randcomm,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ModelSelector::Model1 => "model1",
            ModelSelector::Model2 => "model2",
            ModelSelector::Model3 => "model3",
            ModelSelector::Model2Reduced => "model2-reduced",
            ModelSelector::Syk => "syk",
            ModelSelector::Randcoef => "randcoef",
            ModelSelector::Randcomm => "randcomm",
        }
    }
}

impl FromStr for ModelSelector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown model '{s}'")))
    }
}

/// Teleportation pair selection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairSelection {
    All,
    Trained,
    List(Vec<(usize, usize)>),
}

impl PairSelection {
    /// Concrete pairs `i < j` among `1..=n`.
    pub fn resolve(&self, n: usize) -> Vec<(usize, usize)> {
        match self {
            PairSelection::All => (1..=n)
                .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
                .collect(),
            PairSelection::Trained => vec![(1, 2)],
            PairSelection::List(v) => v.clone(),
        }
    }
}

/// Majorana set entering the coupling sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoupledSet {
    /// Every register Majorana.
    All,
    /// Only Majoranas that appear in the Hamiltonian.
    Hamiltonian,
}

/// Fully resolved experiment configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub model: ModelSelector,
    pub seed: u64,
    pub n_maj: usize,
    pub j: f64,
    pub beta: f64,
    pub t_start: f64,
    pub t_stop: f64,
    pub t_step: f64,
    pub mu: f64,
    pub n_norm: usize,
    pub q: usize,
    pub pairs: PairSelection,
    pub ops: Option<Vec<usize>>,
    pub t: f64,
    pub t0: f64,
    pub coupling: CouplingMode,
    pub coupled: CoupledSet,
    pub syk_seeds: usize,
    pub syk_n: usize,
    pub syk_j: f64,
    pub ensemble_seeds: usize,
    pub sizes: Vec<usize>,
    pub ising_j: f64,
    pub out: PathBuf,
}

/// Parses `key = value` lines.
pub fn parse_kv(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value", n + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse '{v}'")))
}

fn list<T: FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
    v.split(',')
        .map(|x| x.trim())
        .filter(|x| !x.is_empty())
        .map(|x| num(key, x))
        .collect()
}

fn join<T: fmt::Display>(v: &[T]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl ExperimentConfig {
    /// Resolves a config from an optional file body and ordered overrides.
    pub fn resolve(
        experiment: &str,
        file: Option<&str>,
        overrides: &[(String, String)],
    ) -> Result<Self> {
        let mut map: BTreeMap<String, String> = BTreeMap::new();
        if let Some(text) = file {
            for (k, v) in parse_kv(text)? {
                map.insert(k, v);
            }
        }
        for (k, v) in overrides {
            map.insert(k.clone(), v.clone());
        }
        let known: Vec<&str> = SCHEMA.iter().map(|(k, _)| *k).collect();
        if let Some(bad) = map.keys().find(|k| !known.contains(&k.as_str())) {
            return Err(Error::Config(format!("unknown key '{bad}'")));
        }
        let kind: ExperimentKind = experiment.parse()?;
        if let Some(fk) = map.get("experiment") {
            if fk != experiment {
                return Err(Error::Config(format!(
                    "config names experiment '{fk}' but '{experiment}' was requested"
                )));
            }
        }
        let get = |k: &str| map.get(k).map(String::as_str);
        let model: ModelSelector = get("model").unwrap_or("model1").parse()?;
        let coupling = match get("coupling").unwrap_or("instantaneous") {
            "instantaneous" => CouplingMode::Instantaneous,
            "trotterized" => CouplingMode::Trotterized {
                times: match get("trotter_times") {
                    Some(v) => list("trotter_times", v)?,
                    None => DEFAULT_TROTTER_TIMES.to_vec(),
                },
            },
            other => return Err(Error::Config(format!("unknown coupling mode '{other}'"))),
        };
        let trotter = matches!(coupling, CouplingMode::Trotterized { .. });
        let default_j = if kind.is_correlator() { 1.125 } else { 1.25 };
        let pairs = match get("pairs").unwrap_or("all") {
            "all" => PairSelection::All,
            "trained" => PairSelection::Trained,
            v => PairSelection::List(
                v.split(',')
                    .map(|p| {
                        let (a, b) = p.trim().split_once('-').ok_or_else(|| {
                            Error::Config(format!("pairs: '{p}' is not of the form i-j"))
                        })?;
                        let (a, b): (usize, usize) = (num("pairs", a)?, num("pairs", b)?);
                        if a >= b {
                            return Err(Error::Config(format!("pairs: need i < j in '{p}'")));
                        }
                        Ok((a, b))
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        let ops = match get("ops").unwrap_or("all") {
            "all" => None,
            v => Some(list("ops", v)?),
        };
        let coupled = match get("coupled").unwrap_or("all") {
            "all" => CoupledSet::All,
            "hamiltonian" => CoupledSet::Hamiltonian,
            other => return Err(Error::Config(format!("unknown coupled set '{other}'"))),
        };
        let cfg = ExperimentConfig {
            experiment: kind,
            model,
            seed: get("seed")
                .map(|v| num("seed", v))
                .transpose()?
                .unwrap_or(0),
            n_maj: get("n_maj")
                .map(|v| num("n_maj", v))
                .transpose()?
                .unwrap_or(10),
            j: get("j")
                .map(|v| num("j", v))
                .transpose()?
                .unwrap_or(default_j),
            beta: get("beta")
                .map(|v| num("beta", v))
                .transpose()?
                .unwrap_or(4.0),
            t_start: get("t_start")
                .map(|v| num("t_start", v))
                .transpose()?
                .unwrap_or(0.0),
            t_stop: get("t_stop")
                .map(|v| num("t_stop", v))
                .transpose()?
                .unwrap_or(
                    if kind.is_correlator() || kind == ExperimentKind::Models23 {
                        100.0
                    } else {
                        6.0
                    },
                ),
            t_step: get("t_step")
                .map(|v| num("t_step", v))
                .transpose()?
                .unwrap_or(0.1),
            mu: get("mu")
                .map(|v| num("mu", v))
                .transpose()?
                .unwrap_or(if trotter {
                    -18.0
                } else if model == ModelSelector::Model3 {
                    -17.0
                } else {
                    -12.0
                }),
            n_norm: get("n_norm")
                .map(|v| num("n_norm", v))
                .transpose()?
                .unwrap_or(if trotter { 8 } else { 10 }),
            q: get("q").map(|v| num("q", v)).transpose()?.unwrap_or(4),
            pairs,
            ops,
            t: get("t").map(|v| num("t", v)).transpose()?.unwrap_or(
                if model == ModelSelector::Model3 {
                    2.0
                } else {
                    2.8
                },
            ),
            t0: get("t0").map(|v| num("t0", v)).transpose()?.unwrap_or(2.8),
            coupling,
            coupled,
            syk_seeds: get("syk_seeds")
                .map(|v| num("syk_seeds", v))
                .transpose()?
                .unwrap_or(5),
            syk_n: get("syk_n")
                .map(|v| num("syk_n", v))
                .transpose()?
                .unwrap_or(10),
            syk_j: get("syk_j")
                .map(|v| num("syk_j", v))
                .transpose()?
                .unwrap_or(default_j),
            ensemble_seeds: get("ensemble_seeds")
                .map(|v| num("ensemble_seeds", v))
                .transpose()?
                .unwrap_or(3),
            sizes: match get("sizes") {
                Some(v) => list("sizes", v)?,
                None => vec![4, 6, 8],
            },
            ising_j: get("ising_j")
                .map(|v| num("ising_j", v))
                .transpose()?
                .unwrap_or(0.17),
            out: get("out")
                .map(PathBuf::from)
                .unwrap_or_else(|| PathBuf::from("out").join(kind.as_str())),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        time_grid(self.t_start, self.t_stop, self.t_step)?;
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(Error::Config(format!("beta = {}", self.beta)));
        }
        if !self.mu.is_finite() || self.n_norm == 0 || self.q == 0 {
            return Err(Error::Config("coupling parameters out of range".into()));
        }
        if self.sizes.iter().any(|&n| !(2..=12).contains(&n)) {
            return Err(Error::Config(format!(
                "Ising sizes {:?} outside 2..=12",
                self.sizes
            )));
        }
        if self.syk_n < 4 || self.syk_n > 14 || self.n_maj < 4 || self.n_maj > 14 {
            return Err(Error::Config("SYK sizes must lie in 4..=14".into()));
        }
        Ok(())
    }

    pub fn times(&self) -> Vec<f64> {
        time_grid(self.t_start, self.t_stop, self.t_step).expect("validated grid")
    }

    /// The configured Hamiltonian.
    pub fn spec(&self) -> Result<HamiltonianSpec> {
        Ok(match self.model {
            ModelSelector::Model1 => models::model1(),
            ModelSelector::Model2 => models::model2(),
            ModelSelector::Model3 => models::model3(),
            ModelSelector::Model2Reduced => models::model2_commuting_reduction(),
            ModelSelector::Syk => models::sample_syk(self.n_maj, self.j, self.seed)?,
            ModelSelector::Randcoef => {
                models::randomize_coefficients(&models::model1(), self.seed)?
            }
            ModelSelector::Randcomm => models::sample_random_commuting(7, 5, self.seed)?,
        })
    }

    /// Seeds `seed, seed+1, …` of the SYK overlay ensemble.
    pub fn syk_seed_list(&self) -> Vec<u64> {
        (0..self.syk_seeds as u64).map(|k| self.seed + k).collect()
    }

    pub fn ensemble_seed_list(&self) -> Vec<u64> {
        (0..self.ensemble_seeds as u64)
            .map(|k| self.seed + k)
            .collect()
    }

    /// Resolved `key = value` text; parses back to `self`.
    pub fn to_kv(&self) -> String {
        let mut lines = Vec::new();
        let mut put = |k: &str, v: String| lines.push(format!("{k} = {v}"));
        put("experiment", self.experiment.as_str().into());
        put("model", self.model.as_str().into());
        put("seed", self.seed.to_string());
        put("n_maj", self.n_maj.to_string());
        put("j", self.j.to_string());
        put("beta", self.beta.to_string());
        put("t_start", self.t_start.to_string());
        put("t_stop", self.t_stop.to_string());
        put("t_step", self.t_step.to_string());
        put("mu", self.mu.to_string());
        put("n_norm", self.n_norm.to_string());
        put("q", self.q.to_string());
        put(
            "pairs",
            match &self.pairs {
                PairSelection::All => "all".into(),
                PairSelection::Trained => "trained".into(),
                PairSelection::List(v) => v
                    .iter()
                    .map(|(a, b)| format!("{a}-{b}"))
                    .collect::<Vec<_>>()
                    .join(","),
            },
        );
        put("ops", self.ops.as_ref().map_or("all".into(), |v| join(v)));
        put("t", self.t.to_string());
        put("t0", self.t0.to_string());
        match &self.coupling {
            CouplingMode::Instantaneous => put("coupling", "instantaneous".into()),
            CouplingMode::Trotterized { times } => {
                put("coupling", "trotterized".into());
                put("trotter_times", join(times));
            }
        }
        put(
            "coupled",
            match self.coupled {
                CoupledSet::All => "all".into(),
                CoupledSet::Hamiltonian => "hamiltonian".into(),
            },
        );
        put("syk_seeds", self.syk_seeds.to_string());
        put("syk_n", self.syk_n.to_string());
        put("syk_j", self.syk_j.to_string());
        put("ensemble_seeds", self.ensemble_seeds.to_string());
        put("sizes", join(&self.sizes));
        put("ising_j", self.ising_j.to_string());
        put("out", self.out.display().to_string());
        lines.join("\n") + "\n"
    }

    /// Key/value map of the resolved config, for manifests.
    pub fn to_map(&self) -> BTreeMap<String, String> {
        parse_kv(&self.to_kv())
            .expect("own output parses")
            .into_iter()
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_follow_experiment_and_model() {
        let c = ExperimentConfig::resolve("thermalization", None, &[]).unwrap();
        assert_eq!(c.times().len(), 1001);
        assert_eq!(c.syk_j, 1.125);
        let t =
            ExperimentConfig::resolve("teleport-symmetric", Some("model = model3\n"), &[]).unwrap();
        assert_eq!(t.mu, -17.0);
        assert_eq!(t.t, 2.0);
        assert_eq!(t.syk_j, 1.25);
        let tr = ExperimentConfig::resolve(
            "teleport-symmetric",
            None,
            &[("coupling".into(), "trotterized".into())],
        )
        .unwrap();
        assert_eq!((tr.mu, tr.n_norm), (-18.0, 8));
        assert_eq!(tr.coupling, CouplingMode::trotterized_default());
    }

    #[test]
    fn overrides_win_and_unknowns_fail() {
        let c = ExperimentConfig::resolve(
            "winding-report",
            Some("# comment\nbeta = 2\nops = 1,3\n"),
            &[("beta".into(), "3".into())],
        )
        .unwrap();
        assert_eq!(c.beta, 3.0);
        assert_eq!(c.ops, Some(vec![1, 3]));
        assert!(ExperimentConfig::resolve("nope", None, &[]).is_err());
        assert!(ExperimentConfig::resolve("winding-report", Some("colour = red"), &[]).is_err());
        assert!(ExperimentConfig::resolve("winding-report", Some("beta"), &[]).is_err());
        assert!(
            ExperimentConfig::resolve("winding-report", Some("experiment = models23"), &[])
                .is_err()
        );
        assert!(ExperimentConfig::resolve("winding-report", Some("pairs = 3-1"), &[]).is_err());
        assert!(ExperimentConfig::resolve("winding-report", Some("model = model9"), &[]).is_err());
    }

    #[test]
    fn resolved_text_round_trips() {
        for kind in ExperimentKind::ALL {
            let c = ExperimentConfig::resolve(
                kind.as_str(),
                Some("pairs = 1-2,3-5\ncoupling = trotterized\ntrotter_times = -1,0.5\nseed = 7"),
                &[],
            )
            .unwrap();
            let back = ExperimentConfig::resolve(kind.as_str(), Some(&c.to_kv()), &[]).unwrap();
            assert_eq!(c, back);
        }
    }

    #[test]
    fn pair_resolution() {
        assert_eq!(PairSelection::All.resolve(4).len(), 6);
        assert_eq!(PairSelection::Trained.resolve(8), vec![(1, 2)]);
    }
}
