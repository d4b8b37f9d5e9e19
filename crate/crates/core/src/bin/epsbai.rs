use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use epsbai::harness::{
    algo_label, checkpoint_grid, monte_carlo, run_anytime_batch, run_fc_batch, summarize,
    write_anytime_csv, write_fc_csv, Anytime, CheckpointSpec, ExperimentConfig, FixedConfidence,
    DEFAULT_CAP,
};
use epsbai::oracle::{hardness_constants, solve_eps, solve_eps_multiplicative};
use epsbai::sampling::{AlgoName, AlgoSpec, ALGORITHM_NAMES};
use epsbai::thresholds::{Threshold, ThresholdKind};
use epsbai::{generate_instance, BanditInstance, Error, InstanceSpec, Result, RewardFamily};

fn after_help() -> String {
    format!("Algorithms: {}", ALGORITHM_NAMES.join(", "))
}

#[derive(Parser)]
#[command(name = "epsbai", version, about = "Epsilon-best-arm identification toolkit", after_help = after_help())]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Characteristic time and optimal allocation.
    Oracle {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        /// Fix the weight of the target arm.
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        multiplicative: bool,
    },
    /// Fixed-confidence runs.
    RunFc {
        #[command(flatten)]
        instance: InstanceArgs,
        #[command(flatten)]
        algo: AlgoArgs,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = ThresholdKind::Heuristic)]
        threshold: ThresholdKind,
        #[arg(long)]
        multiplicative: bool,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
        #[command(flatten)]
        batch: BatchArgs,
    },
    /// Anytime runs recording the recommendation at checkpoints.
    RunAnytime {
        #[command(flatten)]
        instance: InstanceArgs,
        #[command(flatten)]
        algo: AlgoArgs,
        /// Default challenger slack.
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        #[arg(long)]
        horizon: u64,
        /// "log", "linear" or a comma-separated list of rounds.
        #[arg(long, default_value = "log")]
        checkpoints: String,
        #[command(flatten)]
        batch: BatchArgs,
    },
    /// Batch experiment described by a JSON config file.
    Bench { config: PathBuf },
    /// Hardness constants of the anytime guarantees.
    Hardness {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        eps0: f64,
        #[arg(long, default_value_t = 0.0)]
        eps_tilde: f64,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct InstanceSelect {
    /// Comma-separated arm means.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    means: Option<Vec<f64>>,
    /// Instance description as JSON, e.g. '{"kind":"alpha","K":10,"alpha":0.3}'.
    #[arg(long)]
    instance: Option<String>,
}

#[derive(Args)]
struct InstanceArgs {
    #[command(flatten)]
    select: InstanceSelect,
    /// Reward family used with --means.
    #[arg(long, default_value = "gaussian")]
    family: String,
}

impl InstanceArgs {
    fn resolve(&self) -> Result<(BanditInstance, String)> {
        let spec = match (&self.select.means, &self.select.instance) {
            (Some(means), _) => {
                let family = match self.family.as_str() {
                    "gaussian" => RewardFamily::Gaussian,
                    "bernoulli" => RewardFamily::Bernoulli,
                    other => return Err(Error::Config(format!("unknown reward family {other:?}"))),
                };
                InstanceSpec::Explicit {
                    means: means.clone(),
                    family,
                }
            }
            (None, Some(text)) => serde_json::from_str(text)
                .map_err(|e| Error::Config(format!("bad --instance: {e}")))?,
            (None, None) => return Err(Error::Config("--means or --instance is required".into())),
        };
        Ok((generate_instance(&spec)?, spec.label()))
    }
}

#[derive(Args)]
struct AlgoArgs {
    #[arg(long)]
    algo: String,
    #[arg(long)]
    slack: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    ids: Option<bool>,
    #[arg(long)]
    budget: Option<u64>,
}

impl AlgoArgs {
    fn spec(&self) -> Result<AlgoSpec> {
        let mut spec = AlgoSpec::new(self.algo.parse::<AlgoName>()?);
        spec.slack = self.slack;
        spec.beta = self.beta;
        spec.alpha = self.alpha;
        spec.ids = self.ids;
        spec.budget = self.budget;
        Ok(spec)
    }
}

#[derive(Args)]
struct BatchArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    runs: usize,
    #[arg(long)]
    workers: Option<usize>,
    /// Per-run CSV output.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl BatchArgs {
    fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::Config("--runs must be at least 1".into()));
        }
        if self.workers == Some(0) {
            return Err(Error::Config("--workers must be at least 1".into()));
        }
        Ok(())
    }
}

/// Rounds to 12 significant digits.
fn sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn sig_all(xs: &[f64]) -> Vec<f64> {
    xs.iter().copied().map(sig).collect()
}

fn parse_checkpoints(text: &str, k: usize, horizon: u64) -> Result<Vec<u64>> {
    let spec = match text {
        "log" | "linear" => serde_json::from_value(json!(text)).expect("known grid name"),
        list => CheckpointSpec::Explicit(
            list.split(',')
                .map(|s| s.trim().parse::<u64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Config(format!("bad --checkpoints: {e}")))?,
        ),
    };
    Ok(checkpoint_grid(&spec, k, horizon))
}

fn run(command: Command) -> Result<Vec<Value>> {
    match command {
        Command::Oracle {
            instance,
            eps,
            beta,
            multiplicative,
        } => {
            let (inst, _) = instance.resolve()?;
            let alloc = if multiplicative {
                solve_eps_multiplicative(inst.means(), eps, beta)?
            } else {
                solve_eps(inst.means(), eps, beta, None)?
            };
            Ok(vec![json!({
                "time": sig(alloc.time),
                "weights": sig_all(&alloc.weights),
                "beta": alloc.beta.map(sig),
            })])
        }
        Command::Hardness {
            instance,
            eps0,
            eps_tilde,
        } => {
            let (inst, _) = instance.resolve()?;
            let h = hardness_constants(inst.means(), eps0, eps_tilde)?;
            Ok(vec![json!({
                "h_eps": sig(h.h_eps),
                "h_levels": sig_all(&h.h_levels),
            })])
        }
        Command::RunFc {
            instance,
            algo,
            eps,
            delta,
            threshold,
            multiplicative,
            cap,
            batch,
        } => {
            batch.validate()?;
            let (inst, id) = instance.resolve()?;
            let threshold = Threshold::new(threshold, inst.num_arms(), delta)?;
            let setup = FixedConfidence::new(algo.spec()?, inst, eps, threshold)
                .with_cap(cap)
                .multiplicative(multiplicative);
            setup.validate()?;
            let records = run_fc_batch(&setup, batch.runs, batch.seed, batch.workers)?;
            if let Some(path) = &batch.out {
                write_fc_csv(path, &setup, &id, &records, None)?;
            }
            let mut lines: Vec<Value> = records
                .iter()
                .map(|r| {
                    json!({
                        "run_id": r.run_id,
                        "seed": r.seed,
                        "tau": r.tau,
                        "truncated": r.truncated,
                        "recommended": r.recommended + 1,
                        "correct": r.correct,
                    })
                })
                .collect();
            if records.len() > 1 {
                let label = algo_label(&setup.algo);
                let tau: Vec<f64> = records.iter().map(|r| r.tau as f64).collect();
                lines.push(
                    serde_json::to_value(summarize(&label, "tau", &tau)).expect("plain data"),
                );
            }
            Ok(lines)
        }
        Command::RunAnytime {
            instance,
            algo,
            eps,
            horizon,
            checkpoints,
            batch,
        } => {
            batch.validate()?;
            let (inst, id) = instance.resolve()?;
            let cps = parse_checkpoints(&checkpoints, inst.num_arms(), horizon)?;
            let setup = Anytime::new(algo.spec()?, inst, eps, horizon).with_checkpoints(cps);
            setup.validate()?;
            let traces = run_anytime_batch(&setup, batch.runs, batch.seed, batch.workers)?;
            if let Some(path) = &batch.out {
                write_anytime_csv(path, &algo_label(&setup.algo), &id, &traces, None)?;
            }
            Ok(traces
                .iter()
                .map(|tr| {
                    json!({
                        "run_id": tr.run_id,
                        "seed": tr.seed,
                        "t": tr.checkpoints,
                        "recommended": tr.recommendations.iter().map(|a| a + 1).collect::<Vec<_>>(),
                        "regret": sig_all(&tr.regrets),
                        "cumulative_regret": sig(tr.cumulative_regret),
                    })
                })
                .collect())
        }
        Command::Bench { config } => {
            let cfg = ExperimentConfig::load(&config)?;
            let out = monte_carlo(&cfg)?;
            for f in &out.files {
                eprintln!("wrote {}", f.display());
            }
            Ok(out
                .summaries
                .iter()
                .map(|s| serde_json::to_value(s).expect("plain data"))
                .collect())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(lines) => {
            for line in lines {
                println!("{line}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 2 } else { 3 })
        }
    }
}
