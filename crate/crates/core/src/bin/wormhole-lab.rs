use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wormhole_lab::experiments::{self, ErrorRecord, ExperimentConfig};
use wormhole_lab::Error;

#[derive(Parser)]
#[command(
    name = "wormhole-lab",
    version,
    about = "Run experiments and emit plot scripts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write its bundle.
    Run(Box<RunArgs>),
    /// Write matplotlib scripts for a finished bundle.
    Plots { dir: PathBuf },
}

#[derive(clap::Args)]
struct RunArgs {
    /// thermalization, fourpoint-cross, teleport-symmetric, teleport-fixed,
    /// winding-report, winding-ensemble, models23 or ising-scaling
    experiment: String,
    /// `key = value` file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    mu: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of ensemble seeds.
    #[arg(long)]
    seeds: Option<usize>,
    #[arg(long)]
    syk_seeds: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated Majorana indices, or `all`.
    #[arg(long)]
    op: Option<String>,
    #[arg(long)]
    t: Option<f64>,
    /// `all`, `trained`, or e.g. `1-2,3-4`.
    #[arg(long)]
    pairs: Option<String>,
    #[arg(long)]
    coupling_mode: Option<String>,
    #[arg(long)]
    n_norm: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    sizes: Option<String>,
    /// Any schema key, repeatable: `--set t_stop=20`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl RunArgs {
    fn overrides(&self) -> Result<Vec<(String, String)>, Error> {
        let mut o: Vec<(String, String)> = Vec::new();
        let mut put = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                o.push((k.into(), v));
            }
        };
        put("model", self.model.clone());
        put("beta", self.beta.map(|v| v.to_string()));
        put("mu", self.mu.map(|v| v.to_string()));
        put("seed", self.seed.map(|v| v.to_string()));
        put("ensemble_seeds", self.seeds.map(|v| v.to_string()));
        put("syk_seeds", self.syk_seeds.map(|v| v.to_string()));
        put("out", self.out.as_ref().map(|p| p.display().to_string()));
        put("ops", self.op.clone());
        put("t", self.t.map(|v| v.to_string()));
        put("pairs", self.pairs.clone());
        put("coupling", self.coupling_mode.clone());
        put("n_norm", self.n_norm.map(|v| v.to_string()));
        put("q", self.q.map(|v| v.to_string()));
        put("sizes", self.sizes.clone());
        for kv in &self.set {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("--set expects KEY=VALUE, got '{kv}'")))?;
            o.push((k.trim().into(), v.trim().into()));
        }
        Ok(o)
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Run(args) => {
            let file = match &args.config {
                Some(p) => Some(std::fs::read_to_string(p).map_err(|e| Error::Io {
                    path: p.display().to_string(),
                    source: e,
                })?),
                None => None,
            };
            let cfg =
                ExperimentConfig::resolve(&args.experiment, file.as_deref(), &args.overrides()?)?;
            let bundle = experiments::run(&cfg)?;
            println!("{}", bundle.dir.join(experiments::MANIFEST).display());
        }
        Command::Plots { dir } => {
            for p in experiments::emit_plots(&dir)? {
                println!("{}", p.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let rec = ErrorRecord::from(&e);
            eprintln!(
                "{}",
                serde_json::to_string(&rec).unwrap_or_else(|_| e.to_string())
            );
            ExitCode::FAILURE
        }
    }
}
