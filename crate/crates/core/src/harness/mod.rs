//! Seeded Monte-Carlo engine: single fixed-confidence and anytime runs, batches,
//! aggregation and CSV/JSON persistence.

mod bench;
mod summary;

use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instances::{BanditInstance, RewardFamily};
use crate::rng::{stream, REWARD_STREAM};
use crate::sampling::{AlgoSpec, ArmStatistics, BuildContext, Sampler};
use crate::stopping::{glr_check, glr_check_multiplicative};
use crate::thresholds::Threshold;

pub use bench::{
    algo_label, checkpoint_grid, monte_carlo, run_anytime_batch, run_fc_batch, write_anytime_csv,
    write_fc_csv, AlgoList, BenchOutput, CheckpointSpec, ExperimentConfig, ExperimentKind,
};
pub use summary::{error_curve, regret_from_error_curve, summarize, Summary};

pub const DEFAULT_CAP: u64 = 10_000_000;

/// One reward from `arm`; advances `rng`.
pub fn sample_reward(instance: &BanditInstance, arm: usize, rng: &mut ChaCha8Rng) -> f64 {
    let mu = instance.means()[arm];
    match instance.family() {
        RewardFamily::Gaussian => {
            let z: f64 = StandardNormal.sample(rng);
            mu + z
        }
        RewardFamily::Bernoulli => {
            if rng.random::<f64>() < mu {
                1.0
            } else {
                0.0
            }
        }
    }
}

/// Outcome of one fixed-confidence run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub run_id: u64,
    pub seed: u64,
    /// Samples used at stopping, or the cap when truncated.
    pub tau: u64,
    pub truncated: bool,
    /// 0-based recommended arm.
    pub recommended: usize,
    pub correct: bool,
    pub wall_ns: u64,
}

/// Everything a fixed-confidence run needs besides the seed.
#[derive(Debug, Clone)]
pub struct FixedConfidence {
    pub algo: AlgoSpec,
    pub instance: BanditInstance,
    pub epsilon: f64,
    pub threshold: Threshold,
    /// Multiplicative notion of epsilon-good arms and the matching GLR rule.
    pub multiplicative: bool,
    pub cap: u64,
}

impl FixedConfidence {
    pub fn new(
        algo: AlgoSpec,
        instance: BanditInstance,
        epsilon: f64,
        threshold: Threshold,
    ) -> Self {
        Self {
            algo,
            instance,
            epsilon,
            threshold,
            multiplicative: false,
            cap: DEFAULT_CAP,
        }
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    pub fn multiplicative(mut self, on: bool) -> Self {
        self.multiplicative = on;
        self
    }

    fn context(&self) -> BuildContext {
        BuildContext {
            k: self.instance.num_arms(),
            epsilon: self.epsilon,
            threshold: self.threshold,
            budget: self.cap,
        }
    }

    /// Rejects inconsistent setups before any sampling.
    pub fn validate(&self) -> Result<()> {
        let k = self.instance.num_arms() as u64;
        if self.cap <= k {
            return Err(Error::Config(format!(
                "cap must exceed K = {k}, got {}",
                self.cap
            )));
        }
        if self.algo.is_multiplicative() != self.multiplicative {
            return Err(Error::Config(format!(
                "{} is {} but the stopping rule is {}",
                self.algo.name,
                if self.algo.is_multiplicative() {
                    "multiplicative"
                } else {
                    "additive"
                },
                if self.multiplicative {
                    "multiplicative"
                } else {
                    "additive"
                },
            )));
        }
        if self.multiplicative {
            if !(0.0..1.0).contains(&self.epsilon) {
                return Err(Error::Config(format!(
                    "multiplicative epsilon must lie in [0, 1), got {}",
                    self.epsilon
                )));
            }
            if let Some((arm, &mean)) = self
                .instance
                .means()
                .iter()
                .enumerate()
                .find(|(_, &m)| !(m > 0.0))
            {
                return Err(Error::NonPositiveMean { arm: arm + 1, mean });
            }
        } else if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(Error::Config(format!(
                "epsilon must be >= 0, got {}",
                self.epsilon
            )));
        }
        self.algo.validate(&self.context())
    }

    fn good_arms(&self) -> Vec<usize> {
        if self.multiplicative {
            self.instance.multiplicative_eps_good_set(self.epsilon)
        } else {
            crate::instances::eps_good_set(self.instance.means(), self.epsilon)
        }
    }

    pub fn run(&self, run_id: u64, seed: u64) -> Result<RunRecord> {
        self.validate()?;
        let start = Instant::now();
        let mut sampler = self.algo.build(&self.context(), seed)?;
        let mut rng = stream(seed, REWARD_STREAM);
        let mut stats = ArmStatistics::new(self.instance.num_arms());
        let mut leader = None;
        while stats.total() < self.cap {
            play_round(sampler.as_mut(), &self.instance, &mut stats, &mut rng);
            if !stats.all_pulled() {
                continue;
            }
            let decision = if self.multiplicative {
                glr_check_multiplicative(&stats, self.epsilon, &self.threshold)?
            } else {
                glr_check(&stats, self.epsilon, &self.threshold)?
            };
            let stop = sampler.stop_signal(&stats).unwrap_or(decision.stop);
            if stop {
                leader = Some(decision.leader);
                break;
            }
        }
        let truncated = leader.is_none();
        let recommended = leader.unwrap_or_else(|| crate::sampling::argmax(stats.means()));
        Ok(RunRecord {
            run_id,
            seed,
            tau: stats.total(),
            truncated,
            recommended,
            correct: self.good_arms().contains(&recommended),
            wall_ns: start.elapsed().as_nanos() as u64,
        })
    }
}

fn play_round(
    sampler: &mut dyn Sampler,
    instance: &BanditInstance,
    stats: &mut ArmStatistics,
    rng: &mut ChaCha8Rng,
) -> usize {
    let arm = sampler.select(stats);
    let reward = sample_reward(instance, arm, rng);
    sampler.update(arm, reward, stats);
    stats.record(arm, reward);
    arm
}

/// Convenience wrapper around [`FixedConfidence::run`].
pub fn run_fixed_confidence(
    algo: &AlgoSpec,
    instance: &BanditInstance,
    epsilon: f64,
    threshold: Threshold,
    seed: u64,
    cap: u64,
) -> Result<RunRecord> {
    FixedConfidence::new(algo.clone(), instance.clone(), epsilon, threshold)
        .with_cap(cap)
        .run(0, seed)
}

/// Recommendations of one anytime run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnytimeTrace {
    pub run_id: u64,
    pub seed: u64,
    /// Round indices `n`; the recommendation at `n` uses the first `n - 1` samples.
    pub checkpoints: Vec<u64>,
    pub recommendations: Vec<usize>,
    pub regrets: Vec<f64>,
    /// `errors[c][e]`: the recommendation at checkpoint `c` is not `eps_grid[e]`-good.
    pub errors: Vec<Vec<bool>>,
    /// `sum_{n = K+1}^{horizon} (mu_star - mu_{rec_n})`.
    pub cumulative_regret: f64,
}

#[derive(Debug, Clone)]
pub struct Anytime {
    pub algo: AlgoSpec,
    pub instance: BanditInstance,
    /// Default challenger slack.
    pub epsilon: f64,
    pub horizon: u64,
    pub checkpoints: Vec<u64>,
    pub eps_grid: Vec<f64>,
}

impl Anytime {
    /// Checkpoints on the log grid and the instance's distinct gaps as the epsilon grid.
    pub fn new(algo: AlgoSpec, instance: BanditInstance, epsilon: f64, horizon: u64) -> Self {
        let k = instance.num_arms();
        let eps_grid = instance.gaps().distinct_gaps().to_vec();
        Self {
            algo,
            instance,
            epsilon,
            horizon,
            checkpoints: checkpoint_grid(&CheckpointSpec::default(), k, horizon),
            eps_grid,
        }
    }

    pub fn with_checkpoints(mut self, checkpoints: Vec<u64>) -> Self {
        self.checkpoints = checkpoints;
        self
    }

    pub fn with_eps_grid(mut self, eps_grid: Vec<f64>) -> Self {
        self.eps_grid = eps_grid;
        self
    }

    fn context(&self) -> BuildContext {
        BuildContext {
            k: self.instance.num_arms(),
            epsilon: self.epsilon,
            // only LUCB reads it, and LUCB is a fixed-confidence rule
            threshold: Threshold::Heuristic { delta: 0.1 },
            budget: self.horizon,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.instance.num_arms() as u64;
        if self.horizon <= k {
            return Err(Error::Config(format!(
                "horizon must exceed K = {k}, got {}",
                self.horizon
            )));
        }
        if self.checkpoints.is_empty() {
            return Err(Error::Config("at least one checkpoint is required".into()));
        }
        if self.checkpoints.windows(2).any(|w| w[1] <= w[0])
            || self.checkpoints[0] <= k
            || *self.checkpoints.last().unwrap() > self.horizon
        {
            return Err(Error::Config(format!(
                "checkpoints must be strictly increasing within ({k}, {}]",
                self.horizon
            )));
        }
        if self.eps_grid.iter().any(|e| !(*e >= 0.0)) {
            return Err(Error::Config("epsilon grid values must be >= 0".into()));
        }
        self.algo.validate(&self.context())
    }

    pub fn run(&self, run_id: u64, seed: u64) -> Result<AnytimeTrace> {
        self.validate()?;
        let k = self.instance.num_arms() as u64;
        let best = self.instance.best_mean();
        // gaps computed as in the gap structure so that grid points at gaps are exact
        let gaps: Vec<f64> = self.instance.means().iter().map(|m| best - m).collect();
        let mut sampler = self.algo.build(&self.context(), seed)?;
        let mut rng = stream(seed, REWARD_STREAM);
        let mut stats = ArmStatistics::new(self.instance.num_arms());

        let n_cp = self.checkpoints.len();
        let mut trace = AnytimeTrace {
            run_id,
            seed,
            checkpoints: self.checkpoints.clone(),
            recommendations: Vec::with_capacity(n_cp),
            regrets: Vec::with_capacity(n_cp),
            errors: Vec::with_capacity(n_cp),
            cumulative_regret: 0.0,
        };
        let mut next = 0;
        for n in 1..=self.horizon {
            if n > k {
                let rec = sampler.recommend(&stats);
                trace.cumulative_regret += gaps[rec];
                if next < n_cp && self.checkpoints[next] == n {
                    trace.recommendations.push(rec);
                    trace.regrets.push(gaps[rec]);
                    trace
                        .errors
                        .push(self.eps_grid.iter().map(|&e| gaps[rec] > e).collect());
                    next += 1;
                }
            }
            if n < self.horizon {
                play_round(sampler.as_mut(), &self.instance, &mut stats, &mut rng);
            }
        }
        Ok(trace)
    }
}

/// Convenience wrapper around [`Anytime::run`].
pub fn run_anytime(
    algo: &AlgoSpec,
    instance: &BanditInstance,
    epsilon: f64,
    horizon: u64,
    checkpoints: &[u64],
    seed: u64,
) -> Result<AnytimeTrace> {
    Anytime::new(algo.clone(), instance.clone(), epsilon, horizon)
        .with_checkpoints(checkpoints.to_vec())
        .run(0, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::AlgoName;

    #[test]
    fn rewards_are_seeded() {
        let inst = BanditInstance::gaussian(vec![0.3, 0.0]).unwrap();
        let mut a = stream(5, REWARD_STREAM);
        let mut b = stream(5, REWARD_STREAM);
        for _ in 0..10 {
            assert_eq!(
                sample_reward(&inst, 0, &mut a),
                sample_reward(&inst, 0, &mut b)
            );
        }
        let mut c = stream(5, 1);
        assert_ne!(
            sample_reward(&inst, 0, &mut a),
            sample_reward(&inst, 0, &mut c)
        );
    }

    #[test]
    fn gaussian_moments() {
        let inst = BanditInstance::gaussian(vec![0.3, 0.0]).unwrap();
        let mut rng = stream(11, REWARD_STREAM);
        let n = 1_000_000;
        let draws: Vec<f64> = (0..n).map(|_| sample_reward(&inst, 0, &mut rng)).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((mean - 0.3).abs() < 0.004);
        assert!((var - 1.0).abs() < 0.01);
    }

    #[test]
    fn bernoulli_rewards() {
        let inst = BanditInstance::new(vec![0.25, 1.0], RewardFamily::Bernoulli).unwrap();
        let mut rng = stream(3, REWARD_STREAM);
        let ones = (0..100_000)
            .filter(|_| sample_reward(&inst, 0, &mut rng) == 1.0)
            .count();
        assert!((ones as f64 / 1e5 - 0.25).abs() < 0.005);
        assert_eq!(sample_reward(&inst, 1, &mut rng), 1.0);
    }

    fn heuristic() -> Threshold {
        Threshold::heuristic(0.01).unwrap()
    }

    #[test]
    fn cap_truncates() {
        let inst = BanditInstance::gaussian(vec![1.0, 1.0]).unwrap();
        let r = run_fixed_confidence(
            &AlgoSpec::new(AlgoName::Uniform),
            &inst,
            0.0,
            heuristic(),
            1,
            3,
        )
        .unwrap();
        assert!(r.truncated);
        assert_eq!(r.tau, 3);
        assert!(run_fixed_confidence(
            &AlgoSpec::new(AlgoName::Uniform),
            &inst,
            0.0,
            heuristic(),
            1,
            2
        )
        .is_err());
    }

    #[test]
    fn fixed_confidence_is_deterministic() {
        let inst = BanditInstance::gaussian(vec![1.0, 0.6, 0.2]).unwrap();
        for name in AlgoName::ALL {
            if name == AlgoName::EbTcmIds {
                continue;
            }
            let spec = AlgoSpec::new(name).with_slack(0.1);
            let a = run_fixed_confidence(&spec, &inst, 0.1, heuristic(), 9, 100_000).unwrap();
            let b = run_fixed_confidence(&spec, &inst, 0.1, heuristic(), 9, 100_000).unwrap();
            assert_eq!(
                RunRecord { wall_ns: 0, ..a },
                RunRecord { wall_ns: 0, ..b },
                "{name}"
            );
        }
    }

    #[test]
    fn mismatched_stopper_is_rejected() {
        let inst = BanditInstance::gaussian(vec![1.0, 0.5]).unwrap();
        let fc = FixedConfidence::new(
            AlgoSpec::new(AlgoName::EbTcmIds).with_slack(0.1),
            inst.clone(),
            0.1,
            heuristic(),
        );
        assert!(matches!(fc.run(0, 0), Err(Error::Config(_))));
        let fc = FixedConfidence::new(
            AlgoSpec::new(AlgoName::EbTcIds),
            inst.clone(),
            0.1,
            heuristic(),
        )
        .multiplicative(true);
        assert!(matches!(fc.run(0, 0), Err(Error::Config(_))));
        let fc = FixedConfidence::new(
            AlgoSpec::new(AlgoName::EbTcmIds).with_slack(0.1),
            inst,
            0.1,
            heuristic(),
        )
        .multiplicative(true);
        let r = fc.run(0, 0).unwrap();
        assert!(!r.truncated);
    }

    #[test]
    fn anytime_boundary_and_validation() {
        let inst = BanditInstance::gaussian(vec![1.0, 0.0]).unwrap();
        let spec = AlgoSpec::new(AlgoName::Uniform);
        let t = run_anytime(&spec, &inst, 0.0, 3, &[3], 1).unwrap();
        assert_eq!(t.recommendations.len(), 1);
        assert!(t.regrets[0] == 0.0 || t.regrets[0] == 1.0);
        assert!(run_anytime(&spec, &inst, 0.0, 2, &[2], 1).is_err());
        assert!(run_anytime(&spec, &inst, 0.0, 10, &[5, 5], 1).is_err());
        assert!(run_anytime(&spec, &inst, 0.0, 10, &[11], 1).is_err());
    }

    #[test]
    fn dsh_trace_is_piecewise_constant() {
        let inst = BanditInstance::gaussian(vec![0.6, 0.6, 0.55, 0.45, 0.3, 0.2]).unwrap();
        let horizon = 2000;
        let cps: Vec<u64> = (7..=horizon).collect();
        let t = run_anytime(&AlgoSpec::new(AlgoName::Dsh), &inst, 0.1, horizon, &cps, 4).unwrap();
        // T_1 = 2 * 6 * 3 = 36 samples, then 72, 144, ...
        let mut boundaries = vec![];
        let mut b = 0;
        let mut budget = 36;
        while b + budget < horizon {
            b += budget;
            boundaries.push(b + 1);
            budget *= 2;
        }
        for (i, w) in t.recommendations.windows(2).enumerate() {
            if w[0] != w[1] {
                assert!(boundaries.contains(&cps[i + 1]), "change at {}", cps[i + 1]);
            }
        }
    }
}
