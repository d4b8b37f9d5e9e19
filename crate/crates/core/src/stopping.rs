//! GLR stopping rules for additive and multiplicative epsilon-best-arm identification.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sampling::{argmax, ArmStatistics};
use crate::thresholds::Threshold;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StopDecision {
    pub stop: bool,
    /// Smallest transportation cost against the empirical best arm.
    pub statistic: f64,
    /// `sqrt(2 c(n - 1, delta))`.
    pub threshold: f64,
    pub leader: usize,
}

impl StopDecision {
    fn new(leader: usize, statistic: f64, c: f64) -> Self {
        let threshold = (2.0 * c).sqrt();
        Self {
            stop: statistic >= threshold,
            statistic,
            threshold,
            leader,
        }
    }
}

fn check(stats: &ArmStatistics) -> Result<usize> {
    if let Some(a) = stats.first_unpulled() {
        return Err(Error::UnpulledArm(a + 1));
    }
    Ok(argmax(stats.means()))
}

fn min_cost(stats: &ArmStatistics, leader: usize, cost: impl Fn(f64, f64, f64) -> f64) -> f64 {
    let (m, n) = (stats.means(), stats.counts());
    let inv_leader = 1.0 / n[leader] as f64;
    (0..stats.num_arms())
        .filter(|&i| i != leader)
        .map(|i| cost(m[leader] - m[i], inv_leader, 1.0 / n[i] as f64))
        .fold(f64::INFINITY, f64::min)
}

/// Empirical best arm and `min_i (mu_B - mu_i + eps) / sqrt(1/N_B + 1/N_i)`.
pub fn glr_statistic(stats: &ArmStatistics, eps: f64) -> Result<(usize, f64)> {
    let leader = check(stats)?;
    Ok((
        leader,
        min_cost(stats, leader, |d, a, b| (d + eps) / (a + b).sqrt()),
    ))
}

/// Empirical best arm and `min_i (mu_B - (1-eps) mu_i) / sqrt(1/N_B + (1-eps)^2/N_i)`.
pub fn glr_statistic_multiplicative(stats: &ArmStatistics, eps: f64) -> Result<(usize, f64)> {
    let leader = check(stats)?;
    let s = 1.0 - eps;
    let m = stats.means();
    let ml = m[leader];
    let (counts, k) = (stats.counts(), stats.num_arms());
    let stat = (0..k)
        .filter(|&i| i != leader)
        .map(|i| (ml - s * m[i]) / (1.0 / counts[leader] as f64 + s * s / counts[i] as f64).sqrt())
        .fold(f64::INFINITY, f64::min);
    Ok((leader, stat))
}

/// Compares a statistic with `sqrt(2 c)` for an explicit value of `c`.
pub fn decide(leader: usize, statistic: f64, c: f64) -> StopDecision {
    StopDecision::new(leader, statistic, c)
}

fn threshold_at(stats: &ArmStatistics, threshold: &Threshold) -> Result<f64> {
    // c evaluated at n - 1, the number of samples collected before round n
    threshold.value(stats.total())
}

pub fn glr_check(stats: &ArmStatistics, eps: f64, threshold: &Threshold) -> Result<StopDecision> {
    if !(eps >= 0.0) {
        return Err(Error::Domain {
            what: "epsilon",
            value: eps,
        });
    }
    let (leader, stat) = glr_statistic(stats, eps)?;
    Ok(decide(leader, stat, threshold_at(stats, threshold)?))
}

pub fn glr_check_multiplicative(
    stats: &ArmStatistics,
    eps: f64,
    threshold: &Threshold,
) -> Result<StopDecision> {
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::Domain {
            what: "multiplicative epsilon",
            value: eps,
        });
    }
    let (leader, stat) = glr_statistic_multiplicative(stats, eps)?;
    Ok(decide(leader, stat, threshold_at(stats, threshold)?))
}
