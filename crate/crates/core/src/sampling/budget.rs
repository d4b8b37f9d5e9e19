//! Fixed-budget elimination rules and their doubling-trick anytime versions.

use super::{argmax, ArmStatistics, Sampler};

fn log_bar(k: usize) -> f64 {
    0.5 + (2..=k).map(|i| 1.0 / i as f64).sum::<f64>()
}

fn ceil_log2(k: usize) -> usize {
    (usize::BITS - (k - 1).leading_zeros()) as usize
}

/// Cumulative per-arm pulls `n_1 <= ... <= n_{K-1}` at the end of each SR phase.
pub fn sr_schedule(k: usize, budget: u64) -> Vec<u64> {
    let spare = budget.saturating_sub(k as u64) as f64;
    let lb = log_bar(k);
    (1..k)
        .map(|phase| (spare / (lb * (k + 1 - phase) as f64)).ceil() as u64)
        .collect()
}

/// `(active arms, pulls per active arm)` for each SH phase.
pub fn sh_schedule(k: usize, budget: u64) -> Vec<(usize, u64)> {
    let rounds = ceil_log2(k).max(1);
    let mut size = k;
    let mut plan = Vec::with_capacity(rounds);
    for _ in 0..rounds {
        plan.push((size, budget / (size * rounds) as u64));
        size = size.div_ceil(2);
    }
    plan
}

/// A single fixed-budget run that proposes arms until its schedule is exhausted.
trait Schedule: Send {
    fn next_arm(&mut self) -> Option<usize>;
    fn observe(&mut self, arm: usize, reward: f64);
    fn answer(&self) -> Option<usize>;
    fn active(&self) -> &[usize];
}

/// Arm of `active` with the lowest count under `target`, lowest index on ties.
fn least_pulled_below(active: &[usize], stats: &ArmStatistics, target: u64) -> Option<usize> {
    active
        .iter()
        .copied()
        .filter(|&a| stats.count(a) < target)
        .min_by_key(|&a| (stats.count(a), a))
}

/// Active arms sorted by decreasing mean, lowest index first on ties; unpulled arms last.
fn ranked(active: &[usize], stats: &ArmStatistics) -> Vec<usize> {
    let key = |a: usize| {
        if stats.count(a) == 0 {
            f64::NEG_INFINITY
        } else {
            stats.means()[a]
        }
    };
    let mut order = active.to_vec();
    order.sort_by(|&a, &b| key(b).total_cmp(&key(a)).then(a.cmp(&b)));
    order
}

#[derive(Debug, Clone)]
struct SrRun {
    targets: Vec<u64>,
    phase: usize,
    active: Vec<usize>,
    stats: ArmStatistics,
}

impl SrRun {
    fn new(k: usize, budget: u64) -> Self {
        Self {
            targets: sr_schedule(k, budget),
            phase: 0,
            active: (0..k).collect(),
            stats: ArmStatistics::new(k),
        }
    }
}

impl Schedule for SrRun {
    fn next_arm(&mut self) -> Option<usize> {
        while self.active.len() > 1 {
            if let Some(a) = least_pulled_below(&self.active, &self.stats, self.targets[self.phase])
            {
                return Some(a);
            }
            let worst = *ranked(&self.active, &self.stats).last().unwrap();
            self.active.retain(|&a| a != worst);
            self.phase += 1;
        }
        None
    }

    fn observe(&mut self, arm: usize, reward: f64) {
        self.stats.record(arm, reward);
        // eliminate as soon as a phase is complete so that `answer` is final
        self.next_arm();
    }

    fn answer(&self) -> Option<usize> {
        (self.active.len() == 1).then(|| self.active[0])
    }

    fn active(&self) -> &[usize] {
        &self.active
    }
}

#[derive(Debug, Clone)]
struct ShRun {
    plan: Vec<(usize, u64)>,
    phase: usize,
    active: Vec<usize>,
    stats: ArmStatistics,
}

impl ShRun {
    fn new(k: usize, budget: u64) -> Self {
        Self {
            plan: sh_schedule(k, budget),
            phase: 0,
            active: (0..k).collect(),
            stats: ArmStatistics::new(k),
        }
    }
}

impl Schedule for ShRun {
    fn next_arm(&mut self) -> Option<usize> {
        while self.active.len() > 1 {
            if let Some(a) = least_pulled_below(&self.active, &self.stats, self.plan[self.phase].1)
            {
                return Some(a);
            }
            let keep = self.active.len().div_ceil(2);
            let mut survivors = ranked(&self.active, &self.stats);
            survivors.truncate(keep);
            survivors.sort_unstable();
            self.active = survivors;
            self.phase += 1;
            // observations are not carried over to the next phase
            self.stats = ArmStatistics::new(self.stats.num_arms());
        }
        None
    }

    fn observe(&mut self, arm: usize, reward: f64) {
        self.stats.record(arm, reward);
        // eliminate as soon as a phase is complete so that `answer` is final
        self.next_arm();
    }

    fn answer(&self) -> Option<usize> {
        (self.active.len() == 1).then(|| self.active[0])
    }

    fn active(&self) -> &[usize] {
        &self.active
    }
}

fn standalone_select(run: &mut dyn Schedule, stats: &ArmStatistics) -> usize {
    run.next_arm()
        .or_else(|| run.answer())
        .unwrap_or_else(|| argmax(stats.means()))
}

fn standalone_recommend(run: &dyn Schedule, stats: &ArmStatistics) -> usize {
    run.answer().unwrap_or_else(|| {
        let active = run.active();
        let m = stats.means();
        let mut best = active[0];
        for &a in &active[1..] {
            if m[a] > m[best] {
                best = a;
            }
        }
        best
    })
}

/// Successive Rejects with a fixed budget; after the budget it keeps pulling its answer.
pub struct SuccessiveRejects {
    run: SrRun,
}

impl SuccessiveRejects {
    pub fn new(k: usize, budget: u64) -> Self {
        Self {
            run: SrRun::new(k, budget),
        }
    }
}

impl Sampler for SuccessiveRejects {
    fn select(&mut self, stats: &ArmStatistics) -> usize {
        standalone_select(&mut self.run, stats)
    }

    fn update(&mut self, arm: usize, reward: f64, _stats: &ArmStatistics) {
        self.run.observe(arm, reward);
    }

    fn recommend(&self, stats: &ArmStatistics) -> usize {
        standalone_recommend(&self.run, stats)
    }
}

/// Sequential Halving with a fixed budget.
pub struct SequentialHalving {
    run: ShRun,
}

impl SequentialHalving {
    pub fn new(k: usize, budget: u64) -> Self {
        Self {
            run: ShRun::new(k, budget),
        }
    }
}

impl Sampler for SequentialHalving {
    fn select(&mut self, stats: &ArmStatistics) -> usize {
        standalone_select(&mut self.run, stats)
    }

    fn update(&mut self, arm: usize, reward: f64, _stats: &ArmStatistics) {
        self.run.observe(arm, reward);
    }

    fn recommend(&self, stats: &ArmStatistics) -> usize {
        standalone_recommend(&self.run, stats)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Inner {
    Sr,
    Sh,
}

/// Doubling trick: restart the inner rule with budgets `T_1 = 2K ceil(log2 K)`,
/// `T_{k+1} = 2 T_k`, dropping past observations, and recommend the answer of the
/// last completed run (arm 0 before the first completes).
pub struct Doubling {
    k: usize,
    inner: Inner,
    run: Box<dyn Schedule>,
    budget: u64,
    used: u64,
    answer: Option<usize>,
    boundaries: Vec<u64>,
    elapsed: u64,
}

impl Doubling {
    pub fn successive_rejects(k: usize) -> Self {
        Self::new(k, Inner::Sr)
    }

    pub fn sequential_halving(k: usize) -> Self {
        Self::new(k, Inner::Sh)
    }

    fn new(k: usize, inner: Inner) -> Self {
        let budget = Self::first_budget(k);
        Self {
            k,
            inner,
            run: Self::fresh(k, inner, budget),
            budget,
            used: 0,
            answer: None,
            boundaries: Vec::new(),
            elapsed: 0,
        }
    }

    pub fn first_budget(k: usize) -> u64 {
        (2 * k * ceil_log2(k).max(1)) as u64
    }

    fn fresh(k: usize, inner: Inner, budget: u64) -> Box<dyn Schedule> {
        match inner {
            Inner::Sr => Box::new(SrRun::new(k, budget)),
            Inner::Sh => Box::new(ShRun::new(k, budget)),
        }
    }

    /// Sample counts at which a run completed so far.
    pub fn boundaries(&self) -> &[u64] {
        &self.boundaries
    }

    pub fn current_budget(&self) -> u64 {
        self.budget
    }
}

impl Sampler for Doubling {
    fn select(&mut self, stats: &ArmStatistics) -> usize {
        self.run
            .next_arm()
            .or_else(|| self.run.answer())
            .unwrap_or_else(|| ((stats.step() - 1) % self.k as u64) as usize)
    }

    fn update(&mut self, arm: usize, reward: f64, _stats: &ArmStatistics) {
        self.run.observe(arm, reward);
        self.used += 1;
        self.elapsed += 1;
        if self.used == self.budget {
            let run = self.run.as_ref();
            self.answer = Some(run.answer().unwrap_or(run.active()[0]));
            self.boundaries.push(self.elapsed);
            self.budget *= 2;
            self.used = 0;
            self.run = Self::fresh(self.k, self.inner, self.budget);
        }
    }

    fn recommend(&self, _stats: &ArmStatistics) -> usize {
        self.answer.unwrap_or(0)
    }
}
