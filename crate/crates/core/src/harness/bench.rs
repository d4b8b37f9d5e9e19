use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{error_curve, summarize, Anytime, AnytimeTrace, FixedConfidence, RunRecord, Summary};
use crate::error::{Error, Result};
use crate::instances::{generate_instance, InstanceSpec};
use crate::sampling::AlgoSpec;
use crate::thresholds::{Threshold, ThresholdKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    /// Fixed confidence: run until the stopping rule fires.
    Fc,
    /// Anytime: record recommendations up to a horizon.
    Anytime,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgoList {
    One(AlgoSpec),
    Many(Vec<AlgoSpec>),
}

impl AlgoList {
    pub fn specs(&self) -> Vec<AlgoSpec> {
        match self {
            AlgoList::One(a) => vec![a.clone()],
            AlgoList::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Grid {
    /// Geometric with ratio 1.2, rounded and deduplicated.
    #[default]
    Log,
    /// 100 evenly spaced rounds.
    Linear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CheckpointSpec {
    Grid(Grid),
    Explicit(Vec<u64>),
}

impl Default for CheckpointSpec {
    fn default() -> Self {
        CheckpointSpec::Grid(Grid::Log)
    }
}

/// Checkpoint rounds in `(K, horizon]`, always ending at `horizon`.
pub fn checkpoint_grid(spec: &CheckpointSpec, k: usize, horizon: u64) -> Vec<u64> {
    let first = k as u64 + 1;
    let mut points = match spec {
        CheckpointSpec::Explicit(v) => return v.clone(),
        CheckpointSpec::Grid(Grid::Log) => {
            let mut v = Vec::new();
            let mut x = first as f64;
            while x.round() < horizon as f64 {
                v.push(x.round() as u64);
                x *= 1.2;
            }
            v
        }
        CheckpointSpec::Grid(Grid::Linear) => {
            let span = horizon.saturating_sub(k as u64);
            (1..=100u64)
                .map(|i| k as u64 + (i * span).div_ceil(100))
                .collect()
        }
    };
    points.push(horizon);
    points.retain(|&p| p >= first && p <= horizon);
    points.dedup();
    points
}

/// Batch experiment description, read from a JSON file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub instance: InstanceSpec,
    pub algo: AlgoList,
    #[serde(default)]
    pub epsilon: f64,
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default)]
    pub threshold: ThresholdKind,
    #[serde(default)]
    pub multiplicative: bool,
    pub runs: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub cap: Option<u64>,
    #[serde(default)]
    pub horizon: Option<u64>,
    #[serde(default)]
    pub checkpoints: CheckpointSpec,
    /// Epsilon values for the anytime error curves; defaults to the distinct gaps.
    #[serde(default)]
    pub eps_grid: Option<Vec<f64>>,
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    fn fc_setups(&self) -> Result<Vec<FixedConfidence>> {
        let instance = generate_instance(&self.instance)?;
        let delta = self
            .delta
            .ok_or_else(|| Error::Config("fixed-confidence experiments need delta".into()))?;
        let threshold = Threshold::new(self.threshold, instance.num_arms(), delta)?;
        let setups: Vec<FixedConfidence> = self
            .algo
            .specs()
            .into_iter()
            .map(|a| {
                FixedConfidence::new(a, instance.clone(), self.epsilon, threshold)
                    .with_cap(self.cap.unwrap_or(super::DEFAULT_CAP))
                    .multiplicative(self.multiplicative)
            })
            .collect();
        for s in &setups {
            s.validate()?;
        }
        Ok(setups)
    }

    fn anytime_setups(&self) -> Result<Vec<Anytime>> {
        let instance = generate_instance(&self.instance)?;
        let horizon = self
            .horizon
            .ok_or_else(|| Error::Config("anytime experiments need a horizon".into()))?;
        let checkpoints = checkpoint_grid(&self.checkpoints, instance.num_arms(), horizon);
        let setups: Vec<Anytime> = self
            .algo
            .specs()
            .into_iter()
            .map(|a| {
                let setup = Anytime::new(a, instance.clone(), self.epsilon, horizon)
                    .with_checkpoints(checkpoints.clone());
                match &self.eps_grid {
                    Some(g) => setup.with_eps_grid(g.clone()),
                    None => setup,
                }
            })
            .collect();
        for s in &setups {
            s.validate()?;
        }
        Ok(setups)
    }

    /// Full validation without running anything.
    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::Config("runs must be at least 1".into()));
        }
        if self.workers == Some(0) {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        if self.algo.specs().is_empty() {
            return Err(Error::Config("at least one algorithm is required".into()));
        }
        match self.experiment {
            ExperimentKind::Fc => self.fc_setups().map(|_| ()),
            ExperimentKind::Anytime => self.anytime_setups().map(|_| ()),
        }
    }
}

/// Short label distinguishing parameterised variants of the same rule.
pub fn algo_label(spec: &AlgoSpec) -> String {
    let mut label = spec.name.to_string();
    let params = [
        ("slack", spec.slack),
        ("beta", spec.beta),
        ("alpha", spec.alpha),
        ("budget", spec.budget.map(|b| b as f64)),
    ];
    for (key, value) in params {
        if let Some(v) = value {
            label.push_str(&format!(":{key}={v}"));
        }
    }
    if let Some(ids) = spec.ids {
        label.push_str(&format!(":ids={ids}"));
    }
    label
}

fn pool(workers: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        builder = builder.num_threads(w);
    }
    builder
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))
}

/// Runs `runs` seeded fixed-confidence runs, run `i` using seed `base_seed + i`.
pub fn run_fc_batch(
    setup: &FixedConfidence,
    runs: usize,
    base_seed: u64,
    workers: Option<usize>,
) -> Result<Vec<RunRecord>> {
    setup.validate()?;
    pool(workers)?.install(|| {
        (0..runs as u64)
            .into_par_iter()
            .map(|i| setup.run(i, base_seed.wrapping_add(i)))
            .collect()
    })
}

pub fn run_anytime_batch(
    setup: &Anytime,
    runs: usize,
    base_seed: u64,
    workers: Option<usize>,
) -> Result<Vec<AnytimeTrace>> {
    setup.validate()?;
    pool(workers)?.install(|| {
        (0..runs as u64)
            .into_par_iter()
            .map(|i| setup.run(i, base_seed.wrapping_add(i)))
            .collect()
    })
}

#[derive(Serialize)]
struct FcRow<'a> {
    run_id: u64,
    seed: u64,
    algo: &'a str,
    instance_id: &'a str,
    #[serde(rename = "K")]
    k: usize,
    epsilon: f64,
    delta: f64,
    threshold: ThresholdKind,
    tau: u64,
    truncated: bool,
    recommended: usize,
    correct: bool,
    wall_ns: u64,
}

#[derive(Serialize)]
struct AnytimeRow<'a> {
    run_id: u64,
    seed: u64,
    algo: &'a str,
    instance_id: &'a str,
    t: u64,
    recommended: usize,
    regret: f64,
}

#[derive(Serialize)]
struct CurveRow<'a> {
    algo: &'a str,
    t: u64,
    epsilon: f64,
    error_rate: f64,
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).map_err(|source| Error::Csv {
        path: path.to_path_buf(),
        source,
    })
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    }
}

/// Per-run fixed-confidence rows; arms are written 1-based.
pub fn write_fc_csv(
    path: &Path,
    setup: &FixedConfidence,
    instance_id: &str,
    records: &[RunRecord],
    append_to: Option<&mut csv::Writer<fs::File>>,
) -> Result<()> {
    let mut own;
    let w = match append_to {
        Some(w) => w,
        None => {
            own = csv_writer(path)?;
            &mut own
        }
    };
    let label = algo_label(&setup.algo);
    for r in records {
        w.serialize(FcRow {
            run_id: r.run_id,
            seed: r.seed,
            algo: &label,
            instance_id,
            k: setup.instance.num_arms(),
            epsilon: setup.epsilon,
            delta: setup.threshold.delta(),
            threshold: setup.threshold.kind(),
            tau: r.tau,
            truncated: r.truncated,
            recommended: r.recommended + 1,
            correct: r.correct,
            wall_ns: r.wall_ns,
        })
        .map_err(csv_err(path))?;
    }
    w.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_anytime_csv(
    path: &Path,
    algo: &str,
    instance_id: &str,
    traces: &[AnytimeTrace],
    append_to: Option<&mut csv::Writer<fs::File>>,
) -> Result<()> {
    let mut own;
    let w = match append_to {
        Some(w) => w,
        None => {
            own = csv_writer(path)?;
            &mut own
        }
    };
    for tr in traces {
        for ((&t, &rec), &regret) in tr
            .checkpoints
            .iter()
            .zip(&tr.recommendations)
            .zip(&tr.regrets)
        {
            w.serialize(AnytimeRow {
                run_id: tr.run_id,
                seed: tr.seed,
                algo,
                instance_id,
                t,
                recommended: rec + 1,
                regret,
            })
            .map_err(csv_err(path))?;
        }
    }
    w.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Results of a batch experiment.
#[derive(Debug, Clone, Default)]
pub struct BenchOutput {
    pub summaries: Vec<Summary>,
    /// Per-algorithm fixed-confidence records, in configuration order.
    pub fc: Vec<(String, Vec<RunRecord>)>,
    pub anytime: Vec<(String, Vec<AnytimeTrace>)>,
    pub files: Vec<PathBuf>,
}

fn fc_summaries(label: &str, records: &[RunRecord]) -> Vec<Summary> {
    let tau: Vec<f64> = records.iter().map(|r| r.tau as f64).collect();
    let err: Vec<f64> = records
        .iter()
        .map(|r| f64::from(u8::from(!r.correct)))
        .collect();
    let trunc: Vec<f64> = records
        .iter()
        .map(|r| f64::from(u8::from(r.truncated)))
        .collect();
    vec![
        summarize(label, "tau", &tau),
        summarize(label, "error", &err),
        summarize(label, "truncated", &trunc),
    ]
}

fn anytime_summaries(label: &str, traces: &[AnytimeTrace]) -> Vec<Summary> {
    let last = traces[0].checkpoints.len() - 1;
    let t = traces[0].checkpoints[last];
    let regret: Vec<f64> = traces.iter().map(|tr| tr.regrets[last]).collect();
    let cumulative: Vec<f64> = traces.iter().map(|tr| tr.cumulative_regret).collect();
    vec![
        summarize(label, &format!("simple_regret@{t}"), &regret),
        summarize(label, "cumulative_regret", &cumulative),
    ]
}

/// Runs every configured algorithm and, when `out` is set, persists per-run CSV files,
/// error curves and a JSON summary into that directory.
pub fn monte_carlo(config: &ExperimentConfig) -> Result<BenchOutput> {
    config.validate()?;
    let instance_id = config.instance.label();
    let mut output = BenchOutput::default();
    if let Some(dir) = &config.out {
        fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.clone(),
            source,
        })?;
    }
    match config.experiment {
        ExperimentKind::Fc => {
            let setups = config.fc_setups()?;
            let mut writer = match &config.out {
                Some(dir) => {
                    let path = dir.join("runs.csv");
                    output.files.push(path.clone());
                    Some((csv_writer(&path)?, path))
                }
                None => None,
            };
            for setup in &setups {
                let label = algo_label(&setup.algo);
                let records = run_fc_batch(setup, config.runs, config.base_seed, config.workers)?;
                if let Some((w, path)) = writer.as_mut() {
                    write_fc_csv(path, setup, &instance_id, &records, Some(w))?;
                }
                output.summaries.extend(fc_summaries(&label, &records));
                output.fc.push((label, records));
            }
        }
        ExperimentKind::Anytime => {
            let setups = config.anytime_setups()?;
            let mut writers = match &config.out {
                Some(dir) => {
                    let trace = dir.join("trace.csv");
                    let curves = dir.join("error_curves.csv");
                    output.files.push(trace.clone());
                    output.files.push(curves.clone());
                    Some(((csv_writer(&trace)?, trace), (csv_writer(&curves)?, curves)))
                }
                None => None,
            };
            for setup in &setups {
                let label = algo_label(&setup.algo);
                let traces =
                    run_anytime_batch(setup, config.runs, config.base_seed, config.workers)?;
                if let Some(((tw, tpath), (cw, cpath))) = writers.as_mut() {
                    write_anytime_csv(tpath, &label, &instance_id, &traces, Some(tw))?;
                    for (c, &t) in setup.checkpoints.iter().enumerate() {
                        for (&epsilon, error_rate) in
                            setup.eps_grid.iter().zip(error_curve(&traces, c))
                        {
                            cw.serialize(CurveRow {
                                algo: &label,
                                t,
                                epsilon,
                                error_rate,
                            })
                            .map_err(csv_err(cpath))?;
                        }
                    }
                    cw.flush().map_err(|source| Error::Io {
                        path: cpath.clone(),
                        source,
                    })?;
                }
                output.summaries.extend(anytime_summaries(&label, &traces));
                output.anytime.push((label, traces));
            }
        }
    }
    if let Some(dir) = &config.out {
        let path = dir.join("summary.json");
        let text = serde_json::to_string_pretty(&output.summaries)
            .map_err(|e| Error::Config(e.to_string()))?;
        fs::write(&path, text + "\n").map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?;
        output.files.push(path);
    }
    Ok(output)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_grid() {
        let g = checkpoint_grid(&CheckpointSpec::default(), 4, 100);
        assert_eq!(g[0], 5);
        assert_eq!(*g.last().unwrap(), 100);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        let ratio = g[g.len() - 2] as f64 / g[g.len() - 3] as f64;
        assert!((ratio - 1.2).abs() < 0.05);
        let l = checkpoint_grid(&CheckpointSpec::Grid(Grid::Linear), 4, 1004);
        assert_eq!(l.len(), 100);
        assert_eq!((l[0], l[99]), (14, 1004));
    }

    #[test]
    fn config_parsing() {
        let text = r#"{
            "experiment": "fc",
            "instance": {"kind": "alpha", "K": 10, "alpha": 0.3},
            "algo": [{"name": "ebtc-ids"}, {"name": "uniform"}],
            "epsilon": 0.1, "delta": 0.01, "threshold": "heuristic",
            "runs": 3, "base_seed": 7, "cap": 100000, "workers": 2
        }"#;
        let cfg: ExperimentConfig = serde_json::from_str(text).unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.algo.specs().len(), 2);
        let bad = text.replace("\"runs\": 3", "\"runs\": 0");
        let cfg: ExperimentConfig = serde_json::from_str(&bad).unwrap();
        assert!(cfg.validate().is_err());
        assert!(
            serde_json::from_str::<ExperimentConfig>(&text.replace("\"cap\"", "\"kap\"")).is_err()
        );
        let cp: CheckpointSpec = serde_json::from_str("\"linear\"").unwrap();
        assert_eq!(cp, CheckpointSpec::Grid(Grid::Linear));
        let cp: CheckpointSpec = serde_json::from_str("[10, 20]").unwrap();
        assert_eq!(cp, CheckpointSpec::Explicit(vec![10, 20]));
    }

    #[test]
    fn labels() {
        use crate::sampling::AlgoName;
        assert_eq!(algo_label(&AlgoSpec::new(AlgoName::Uniform)), "uniform");
        assert_eq!(
            algo_label(&AlgoSpec::new(AlgoName::EbTcIds).with_slack(0.05)),
            "ebtc-ids:slack=0.05"
        );
    }
}
