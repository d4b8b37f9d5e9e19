//! Sequential sampling rules. Every rule is a step state machine: `select` the arm for
//! the next round, `update` with the observed reward, `recommend` an arm at any time.
//! Ties are broken by the lowest arm index throughout.

mod baselines;
mod budget;
mod top_two;
mod tracking;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::thresholds::Threshold;

pub use baselines::{CTracker, EbTci, Lucb, T3c, Tas, Ttucb, Uniform};
pub use budget::{sh_schedule, sr_schedule, Doubling, SequentialHalving, SuccessiveRejects};
pub use top_two::{Challenger, EbTc, SlackSchedule};
pub use tracking::{TrackingMode, TrackingTable};

/// Pull counts and empirical means.
#[derive(Debug, Clone, PartialEq)]
pub struct ArmStatistics {
    counts: Vec<u64>,
    sums: Vec<f64>,
    means: Vec<f64>,
    total: u64,
}

impl ArmStatistics {
    pub fn new(k: usize) -> Self {
        Self {
            counts: vec![0; k],
            sums: vec![0.0; k],
            means: vec![0.0; k],
            total: 0,
        }
    }

    /// Statistics with given counts and empirical means, mostly for tests and tools.
    pub fn from_means(means: &[f64], counts: &[u64]) -> Result<Self> {
        if means.len() != counts.len() || means.len() < 2 {
            return Err(Error::invalid(
                "means and counts must have the same length >= 2",
            ));
        }
        Ok(Self {
            counts: counts.to_vec(),
            sums: means
                .iter()
                .zip(counts)
                .map(|(m, &n)| m * n as f64)
                .collect(),
            means: means.to_vec(),
            total: counts.iter().sum(),
        })
    }

    pub fn record(&mut self, arm: usize, reward: f64) {
        self.counts[arm] += 1;
        self.sums[arm] += reward;
        self.means[arm] = self.sums[arm] / self.counts[arm] as f64;
        self.total += 1;
    }

    pub fn num_arms(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count(&self, arm: usize) -> u64 {
        self.counts[arm]
    }

    pub fn sums(&self) -> &[f64] {
        &self.sums
    }

    /// Empirical means; entries of unpulled arms are 0 and meaningless.
    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn mean(&self, arm: usize) -> Result<f64> {
        if self.counts[arm] == 0 {
            return Err(Error::UnpulledArm(arm + 1));
        }
        Ok(self.means[arm])
    }

    /// Number of samples collected so far.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// 1-based index of the round about to be played.
    pub fn step(&self) -> u64 {
        self.total + 1
    }

    pub fn first_unpulled(&self) -> Option<usize> {
        self.counts.iter().position(|&c| c == 0)
    }

    pub fn all_pulled(&self) -> bool {
        self.first_unpulled().is_none()
    }

    fn require_pulled(&self) -> Result<()> {
        match self.first_unpulled() {
            Some(a) => Err(Error::UnpulledArm(a + 1)),
            None => Ok(()),
        }
    }
}

pub(crate) fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

pub(crate) fn argmin_except(k: usize, skip: usize, cost: impl Fn(usize) -> f64) -> usize {
    let mut best = usize::MAX;
    let mut best_cost = f64::INFINITY;
    for i in (0..k).filter(|&i| i != skip) {
        let c = cost(i);
        if best == usize::MAX || c < best_cost {
            best = i;
            best_cost = c;
        }
    }
    best
}

/// Empirical best arm.
pub fn eb_leader(stats: &ArmStatistics) -> Result<usize> {
    stats.require_pulled()?;
    Ok(argmax(stats.means()))
}

pub(crate) fn tc_cost(stats: &ArmStatistics, leader: usize, i: usize, eps: f64) -> f64 {
    let (m, n) = (stats.means(), stats.counts());
    (m[leader] - m[i] + eps) / (1.0 / n[leader] as f64 + 1.0 / n[i] as f64).sqrt()
}

pub(crate) fn tcm_cost(stats: &ArmStatistics, leader: usize, i: usize, eps: f64) -> f64 {
    let (m, n) = (stats.means(), stats.counts());
    let s = 1.0 - eps;
    (m[leader] - s * m[i]) / (1.0 / n[leader] as f64 + s * s / n[i] as f64).sqrt()
}

/// Transportation-cost challenger with slack `eps`.
pub fn tc_challenger(stats: &ArmStatistics, leader: usize, eps: f64) -> Result<usize> {
    stats.require_pulled()?;
    Ok(argmin_except(stats.num_arms(), leader, |i| {
        tc_cost(stats, leader, i, eps)
    }))
}

/// Multiplicative transportation-cost challenger.
pub fn tcm_challenger(stats: &ArmStatistics, leader: usize, eps: f64) -> Result<usize> {
    stats.require_pulled()?;
    Ok(argmin_except(stats.num_arms(), leader, |i| {
        tcm_cost(stats, leader, i, eps)
    }))
}

pub trait Sampler: Send {
    /// Arm to pull in round `stats.step()`.
    fn select(&mut self, stats: &ArmStatistics) -> usize;

    /// Observation hook for samplers that keep private statistics.
    fn update(&mut self, _arm: usize, _reward: f64, _stats: &ArmStatistics) {}

    /// Current answer; empirical best arm unless the rule defines its own.
    fn recommend(&self, stats: &ArmStatistics) -> usize {
        argmax(stats.means())
    }

    /// Built-in stopping decision for rules that carry one (LUCB).
    fn stop_signal(&self, _stats: &ArmStatistics) -> Option<bool> {
        None
    }

    /// True for rules targeting the multiplicative notion of epsilon-good arms.
    fn is_multiplicative(&self) -> bool {
        false
    }

    fn tracking(&self) -> Option<&TrackingTable> {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AlgoName {
    #[serde(rename = "ebtc-ids")]
    EbTcIds,
    #[serde(rename = "ebtc-fixed")]
    EbTcFixed,
    #[serde(rename = "ebtcm-ids")]
    EbTcmIds,
    #[serde(rename = "ebtc-slack-poly")]
    EbTcSlackPoly,
    #[serde(rename = "ebtc-slack-log")]
    EbTcSlackLog,
    #[serde(rename = "uniform")]
    Uniform,
    #[serde(rename = "lucb")]
    Lucb,
    #[serde(rename = "t3c")]
    T3c,
    #[serde(rename = "ebtci")]
    EbTci,
    #[serde(rename = "ttucb")]
    Ttucb,
    #[serde(rename = "tas")]
    Tas,
    #[serde(rename = "sr")]
    Sr,
    #[serde(rename = "sh")]
    Sh,
    #[serde(rename = "dsr")]
    Dsr,
    #[serde(rename = "dsh")]
    Dsh,
}

pub const ALGORITHM_NAMES: [&str; 15] = [
    "ebtc-ids",
    "ebtc-fixed",
    "ebtcm-ids",
    "ebtc-slack-poly",
    "ebtc-slack-log",
    "uniform",
    "lucb",
    "t3c",
    "ebtci",
    "ttucb",
    "tas",
    "sr",
    "sh",
    "dsr",
    "dsh",
];

impl AlgoName {
    pub const ALL: [AlgoName; 15] = [
        AlgoName::EbTcIds,
        AlgoName::EbTcFixed,
        AlgoName::EbTcmIds,
        AlgoName::EbTcSlackPoly,
        AlgoName::EbTcSlackLog,
        AlgoName::Uniform,
        AlgoName::Lucb,
        AlgoName::T3c,
        AlgoName::EbTci,
        AlgoName::Ttucb,
        AlgoName::Tas,
        AlgoName::Sr,
        AlgoName::Sh,
        AlgoName::Dsr,
        AlgoName::Dsh,
    ];

    pub fn as_str(&self) -> &'static str {
        ALGORITHM_NAMES[Self::ALL.iter().position(|a| a == self).unwrap()]
    }
}

impl std::fmt::Display for AlgoName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for AlgoName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ALGORITHM_NAMES
            .iter()
            .position(|n| *n == s)
            .map(|i| Self::ALL[i])
            .ok_or_else(|| {
                Error::invalid(format!(
                    "unknown algorithm {s:?}, expected one of: {}",
                    ALGORITHM_NAMES.join(", ")
                ))
            })
    }
}

/// Algorithm name plus optional parameters; unset parameters take run-level defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgoSpec {
    pub name: AlgoName,
    /// Slack `eps0` of the challenger; defaults to the run's epsilon.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slack: Option<f64>,
    /// Leader proportion for fixed-beta rules, T3C and EB-TCI; defaults to 1/2.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    /// Exponent of the time-varying slack; defaults to 1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// IDS proportions for the time-varying slack rules; defaults to true.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ids: Option<bool>,
    /// Budget of SR and SH; defaults to the run's horizon or cap.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
}

impl AlgoSpec {
    pub fn new(name: AlgoName) -> Self {
        Self {
            name,
            slack: None,
            beta: None,
            alpha: None,
            ids: None,
            budget: None,
        }
    }

    pub fn with_slack(mut self, slack: f64) -> Self {
        self.slack = Some(slack);
        self
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = Some(beta);
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = Some(alpha);
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = Some(budget);
        self
    }

    pub fn is_multiplicative(&self) -> bool {
        self.name == AlgoName::EbTcmIds
    }

    /// Checks parameter ranges against the run context without building anything.
    pub fn validate(&self, ctx: &BuildContext) -> Result<()> {
        self.parameters(ctx).map(|_| ())
    }

    fn parameters(&self, ctx: &BuildContext) -> Result<(f64, f64, f64, u64)> {
        let slack = self.slack.unwrap_or(ctx.epsilon);
        let beta = self.beta.unwrap_or(0.5);
        let alpha = self.alpha.unwrap_or(1.0);
        let budget = self.budget.unwrap_or(ctx.budget);
        if ctx.k < 2 {
            return Err(Error::invalid(format!(
                "K must be at least 2, got {}",
                ctx.k
            )));
        }
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(Error::invalid(format!(
                "beta must lie in (0, 1], got {beta}"
            )));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::invalid(format!(
                "alpha must be positive, got {alpha}"
            )));
        }
        match self.name {
            AlgoName::EbTcIds | AlgoName::EbTcFixed => {
                if !(slack > 0.0 && slack.is_finite()) {
                    return Err(Error::invalid(format!(
                        "{} needs a positive slack, got {slack}",
                        self.name
                    )));
                }
            }
            AlgoName::EbTcmIds => {
                if !(slack > 0.0 && slack < 1.0) {
                    return Err(Error::invalid(format!(
                        "{} needs a slack in (0, 1), got {slack}",
                        self.name
                    )));
                }
            }
            AlgoName::Sr | AlgoName::Sh => {
                if budget <= ctx.k as u64 {
                    return Err(Error::invalid(format!(
                        "{} needs a budget larger than K, got {budget}",
                        self.name
                    )));
                }
            }
            _ => {
                if !(slack >= 0.0 && slack.is_finite()) {
                    return Err(Error::invalid(format!("slack must be >= 0, got {slack}")));
                }
            }
        }
        Ok((slack, beta, alpha, budget))
    }

    pub fn build(&self, ctx: &BuildContext, seed: u64) -> Result<Box<dyn Sampler>> {
        let (slack, beta, alpha, budget) = self.parameters(ctx)?;
        let k = ctx.k;
        let ids = self.ids.unwrap_or(true);
        let slack_mode = if ids {
            TrackingMode::Ids
        } else {
            TrackingMode::FixedBeta(beta)
        };
        Ok(match self.name {
            AlgoName::EbTcIds => {
                Box::new(EbTc::new(k, Challenger::Additive(slack), TrackingMode::Ids))
            }
            AlgoName::EbTcFixed => Box::new(EbTc::new(
                k,
                Challenger::Additive(slack),
                TrackingMode::FixedBeta(beta),
            )),
            AlgoName::EbTcmIds => Box::new(EbTc::new(
                k,
                Challenger::Multiplicative(slack),
                TrackingMode::IdsMultiplicative(slack),
            )),
            AlgoName::EbTcSlackPoly => Box::new(EbTc::new(
                k,
                Challenger::Varying(SlackSchedule::PolyHalf(alpha)),
                slack_mode,
            )),
            AlgoName::EbTcSlackLog => Box::new(EbTc::new(
                k,
                Challenger::Varying(SlackSchedule::LogHalf(alpha)),
                slack_mode,
            )),
            AlgoName::Uniform => Box::new(Uniform::new(k)),
            AlgoName::Lucb => Box::new(Lucb::new(k, slack, ctx.threshold)),
            AlgoName::T3c => Box::new(T3c::new(k, slack, beta, seed)),
            AlgoName::EbTci => Box::new(EbTci::new(k, slack, beta, seed)),
            AlgoName::Ttucb => Box::new(Ttucb::new(k, slack)),
            AlgoName::Tas => Box::new(Tas::new(k, slack)),
            AlgoName::Sr => Box::new(SuccessiveRejects::new(k, budget)),
            AlgoName::Sh => Box::new(SequentialHalving::new(k, budget)),
            AlgoName::Dsr => Box::new(Doubling::successive_rejects(k)),
            AlgoName::Dsh => Box::new(Doubling::sequential_halving(k)),
        })
    }
}

/// Run-level information a sampler may need at construction.
#[derive(Debug, Clone, Copy)]
pub struct BuildContext {
    pub k: usize,
    /// Target epsilon of the run, the default challenger slack.
    pub epsilon: f64,
    pub threshold: Threshold,
    /// Default budget for fixed-budget rules.
    pub budget: u64,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stats(means: &[f64], counts: &[u64]) -> ArmStatistics {
        ArmStatistics::from_means(means, counts).unwrap()
    }

    #[test]
    fn eb_leader_ties() {
        assert_eq!(eb_leader(&stats(&[0.2, 0.9, 0.9], &[1, 1, 1])).unwrap(), 1);
        assert_eq!(eb_leader(&stats(&[0.5, 0.4], &[1, 1])).unwrap(), 0);
        assert_eq!(eb_leader(&stats(&[0.3, 0.3, 0.3], &[1, 1, 1])).unwrap(), 0);
        assert!(matches!(
            eb_leader(&ArmStatistics::new(3)),
            Err(Error::UnpulledArm(1))
        ));
    }

    #[test]
    fn tc_challenger_examples() {
        let s = stats(&[0.6, 0.5, 0.1], &[10, 10, 10]);
        assert!((tc_cost(&s, 0, 1, 0.1) - 0.44721).abs() < 5e-6);
        assert!((tc_cost(&s, 0, 2, 0.1) - 1.34164).abs() < 5e-6);
        assert_eq!(tc_challenger(&s, 0, 0.1).unwrap(), 1);
        let s = stats(&[0.6, 0.5, 0.1], &[10, 1, 10]);
        assert!((tc_cost(&s, 0, 1, 0.1) - 0.19069).abs() < 5e-6);
        assert_eq!(tc_challenger(&s, 0, 0.1).unwrap(), 1);
        let s = stats(&[0.1, 0.9], &[3, 7]);
        assert_eq!(tc_challenger(&s, 1, 0.5).unwrap(), 0);
        assert_eq!(tc_challenger(&s, 0, 0.5).unwrap(), 1);
    }

    #[test]
    fn tcm_challenger_examples() {
        let s = stats(&[1.0, 0.5, 0.8], &[4, 4, 4]);
        assert!((tcm_cost(&s, 0, 1, 0.2) - 0.93704).abs() < 5e-6);
        assert!((tcm_cost(&s, 0, 2, 0.2) - 0.56223).abs() < 5e-6);
        assert_eq!(tcm_challenger(&s, 0, 0.2).unwrap(), 2);
        let s = stats(&[1.0, 0.5, 0.8], &[4, 9, 2]);
        for i in 1..3 {
            assert_eq!(tcm_cost(&s, 0, i, 0.0), tc_cost(&s, 0, i, 0.0));
        }
    }

    #[test]
    fn large_slack_picks_second_best() {
        let s = stats(&[0.9, 0.1, 0.7, 0.5], &[5, 5, 5, 5]);
        assert_eq!(tc_challenger(&s, 0, 1e6).unwrap(), 2);
    }

    #[test]
    fn names_round_trip() {
        for (name, s) in AlgoName::ALL.iter().zip(ALGORITHM_NAMES) {
            assert_eq!(name.as_str(), s);
            assert_eq!(s.parse::<AlgoName>().unwrap(), *name);
            let json = serde_json::to_string(name).unwrap();
            assert_eq!(json, format!("\"{s}\""));
        }
        assert!("ebtc".parse::<AlgoName>().is_err());
        let spec: AlgoSpec = serde_json::from_str(r#"{"name":"ebtc-fixed","beta":0.3}"#).unwrap();
        assert_eq!(spec, AlgoSpec::new(AlgoName::EbTcFixed).with_beta(0.3));
    }

    #[test]
    fn build_validates_parameters() {
        let ctx = BuildContext {
            k: 4,
            epsilon: 0.0,
            threshold: Threshold::heuristic(0.1).unwrap(),
            budget: 100,
        };
        assert!(AlgoSpec::new(AlgoName::EbTcIds).build(&ctx, 0).is_err());
        assert!(AlgoSpec::new(AlgoName::EbTcIds)
            .with_slack(0.1)
            .build(&ctx, 0)
            .is_ok());
        assert!(AlgoSpec::new(AlgoName::EbTcmIds)
            .with_slack(1.0)
            .build(&ctx, 0)
            .is_err());
        assert!(AlgoSpec::new(AlgoName::Sr)
            .with_budget(4)
            .build(&ctx, 0)
            .is_err());
        assert!(AlgoSpec::new(AlgoName::T3c)
            .with_beta(0.0)
            .build(&ctx, 0)
            .is_err());
        for name in AlgoName::ALL {
            let spec = AlgoSpec::new(name).with_slack(0.1);
            let s = spec.build(&ctx, 0).unwrap();
            assert_eq!(s.is_multiplicative(), spec.is_multiplicative());
        }
    }
}
