use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{argmax, argmin_except, tc_cost, ArmStatistics, Sampler};
use crate::oracle::solve_eps;
use crate::rng::{stream, SAMPLER_STREAM};
use crate::thresholds::Threshold;

/// Round robin over the arms.
#[derive(Debug, Clone)]
pub struct Uniform {
    k: usize,
}

impl Uniform {
    pub fn new(k: usize) -> Self {
        Self { k }
    }
}

impl Sampler for Uniform {
    fn select(&mut self, stats: &ArmStatistics) -> usize {
        ((stats.step() - 1) % self.k as u64) as usize
    }
}

/// LUCB with bonus `sqrt(2 c(n-1, delta) / N_i)`; each logical round pulls the empirical
/// best arm and its most optimistic competitor.
#[derive(Debug, Clone)]
pub struct Lucb {
    eps: f64,
    threshold: Threshold,
    queue: Vec<usize>,
}

impl Lucb {
    pub fn new(_k: usize, eps: f64, threshold: Threshold) -> Self {
        Self {
            eps,
            threshold,
            queue: Vec::with_capacity(2),
        }
    }

    fn bonus(&self, stats: &ArmStatistics) -> f64 {
        // c(n - 1, delta) with n - 1 the number of samples so far
        2.0 * self
            .threshold
            .value(stats.total().max(2))
            .unwrap_or(f64::INFINITY)
    }

    /// Empirical best arm, most optimistic competitor, and whether the stopping rule fires.
    pub fn indices(&self, stats: &ArmStatistics) -> (usize, usize, bool) {
        let b = self.bonus(stats);
        let (m, n) = (stats.means(), stats.counts());
        let best = argmax(m);
        let ucb = |i: usize| m[i] + (b / n[i] as f64).sqrt();
        let competitor = argmin_except(stats.num_arms(), best, |i| -ucb(i));
        let lower = m[best] - (b / n[best] as f64).sqrt();
        (best, competitor, lower + self.eps >= ucb(competitor))
    }
}

impl Sampler for Lucb {
    fn select(&mut self, stats: &ArmStatistics) -> usize {
        if let Some(arm) = stats.first_unpulled() {
            return arm;
        }
        if self.queue.is_empty() {
            let (best, competitor, _) = self.indices(stats);
            self.queue.push(competitor);
            self.queue.push(best);
        }
        self.queue.pop().unwrap()
    }

    fn stop_signal(&self, stats: &ArmStatistics) -> Option<bool> {
        if !stats.all_pulled() || !self.queue.is_empty() {
            return Some(false);
        }
        Some(self.indices(stats).2)
    }
}

/// Thompson-sampling leader, TC challenger, leader kept with probability `beta`.
#[derive(Debug, Clone)]
pub struct T3c {
    eps: f64,
    beta: f64,
    rng: ChaCha8Rng,
}

impl T3c {
    pub fn new(_k: usize, eps: f64, beta: f64, seed: u64) -> Self {
        Self {
            eps,
            beta,
            rng: stream(seed, SAMPLER_STREAM),
        }
    }

    pub fn sample_leader(&mut self, stats: &ArmStatistics) -> usize {
        let theta: Vec<f64> = stats
            .means()
            .iter()
            .zip(stats.counts())
            .map(|(m, &n)| {
                let z: f64 = StandardNormal.sample(&mut self.rng);
                m + z / (n as f64).sqrt()
            })
            .collect();
        argmax(&theta)
    }
}

impl Sampler for T3c {
    fn select(&mut self, stats: &ArmStatistics) -> usize {
        if let Some(arm) = stats.first_unpulled() {
            return arm;
        }
        let leader = self.sample_leader(stats);
        let challenger = argmin_except(stats.num_arms(), leader, |i| {
            tc_cost(stats, leader, i, self.eps)
        });
        if self.rng.random::<f64>() < self.beta {
            leader
        } else {
            challenger
        }
    }
}

/// Empirical-best leader with the penalised transportation-cost-improved challenger.
#[derive(Debug, Clone)]
pub struct EbTci {
    eps: f64,
    beta: f64,
    rng: ChaCha8Rng,
}

impl EbTci {
    pub fn new(_k: usize, eps: f64, beta: f64, seed: u64) -> Self {
        Self {
            eps,
            beta,
            rng: stream(seed, SAMPLER_STREAM),
        }
    }

    pub fn challenger(&self, stats: &ArmStatistics, leader: usize) -> usize {
        let (m, n) = (stats.means(), stats.counts());
        argmin_except(stats.num_arms(), leader, |i| {
            let glr = if m[leader] > m[i] {
                (m[leader] - m[i] + self.eps).powi(2)
                    / (2.0 * (1.0 / n[leader] as f64 + 1.0 / n[i] as f64))
            } else {
                0.0
            };
            glr + (n[i] as f64).ln()
        })
    }
}

impl Sampler for EbTci {
    fn select(&mut self, stats: &ArmStatistics) -> usize {
        if let Some(arm) = stats.first_unpulled() {
            return arm;
        }
        let leader = argmax(stats.means());
        let challenger = self.challenger(stats, leader);
        if self.rng.random::<f64>() < self.beta {
            leader
        } else {
            challenger
        }
    }
}

/// UCB leader, TC challenger, one tracking procedure per leader at `beta = 1/2`.
#[derive(Debug, Clone)]
pub struct Ttucb {
    eps: f64,
    bonus: fn(u64) -> f64,
    leader_rounds: Vec<u64>,
    leader_pulls: Vec<u64>,
}

/// Default exploration function `g(n) = 2 ln(1 + n)`.
pub fn default_ucb_bonus(n: u64) -> f64 {
    2.0 * (1.0 + n as f64).ln()
}

impl Ttucb {
    pub fn new(k: usize, eps: f64) -> Self {
        Self::with_bonus(k, eps, default_ucb_bonus)
    }

    pub fn with_bonus(k: usize, eps: f64, bonus: fn(u64) -> f64) -> Self {
        Self {
            eps,
            bonus,
            leader_rounds: vec![0; k],
            leader_pulls: vec![0; k],
        }
    }

    pub fn ucb_leader(&self, stats: &ArmStatistics) -> usize {
        let g = (self.bonus)(stats.step());
        let idx: Vec<f64> = stats
            .means()
            .iter()
            .zip(stats.counts())
            .map(|(m, &n)| m + (g / n as f64).sqrt())
            .collect();
        argmax(&idx)
    }

    /// `N^B_B - (1/2) sum_i T(B, i)` for leader `b`.
    pub fn deviation(&self, b: usize) -> f64 {
        self.leader_pulls[b] as f64 - 0.5 * self.leader_rounds[b] as f64
    }
}

impl Sampler for Ttucb {
    fn select(&mut self, stats: &ArmStatistics) -> usize {
        if let Some(arm) = stats.first_unpulled() {
            return arm;
        }
        let leader = self.ucb_leader(stats);
        let challenger = argmin_except(stats.num_arms(), leader, |i| {
            tc_cost(stats, leader, i, self.eps)
        });
        self.leader_rounds[leader] += 1;
        if self.leader_pulls[leader] as f64 <= 0.5 * self.leader_rounds[leader] as f64 {
            self.leader_pulls[leader] += 1;
            leader
        } else {
            challenger
        }
    }
}

/// C-tracking of a stream of target allocations with `sqrt(n)` forced exploration.
#[derive(Debug, Clone)]
pub struct CTracker {
    cumulative: Vec<f64>,
}

impl CTracker {
    pub fn new(k: usize) -> Self {
        Self {
            cumulative: vec![0.0; k],
        }
    }

    /// Adds `weights` to the running sum and returns the arm for round `n`.
    pub fn step(&mut self, n: u64, counts: &[u64], weights: &[f64]) -> usize {
        for (c, w) in self.cumulative.iter_mut().zip(weights) {
            *c += w;
        }
        let k = counts.len();
        let (min_arm, &min_count) = counts
            .iter()
            .enumerate()
            .min_by_key(|&(i, c)| (*c, i))
            .unwrap();
        if (min_count as f64) < (n as f64).sqrt() - k as f64 / 2.0 {
            return min_arm;
        }
        let lag: Vec<f64> = self
            .cumulative
            .iter()
            .zip(counts)
            .map(|(c, &n)| c - n as f64)
            .collect();
        argmax(&lag)
    }
}

/// Track-and-Stop on the plug-in allocation for epsilon-best-arm identification.
#[derive(Debug, Clone)]
pub struct Tas {
    eps: f64,
    tracker: CTracker,
}

impl Tas {
    pub fn new(k: usize, eps: f64) -> Self {
        Self {
            eps,
            tracker: CTracker::new(k),
        }
    }
}

impl Sampler for Tas {
    fn select(&mut self, stats: &ArmStatistics) -> usize {
        if let Some(arm) = stats.first_unpulled() {
            return arm;
        }
        let k = stats.num_arms();
        let weights = match solve_eps(stats.means(), self.eps, None, None) {
            Ok(a) => a.weights,
            Err(_) => vec![1.0 / k as f64; k],
        };
        self.tracker.step(stats.step(), stats.counts(), &weights)
    }
}
