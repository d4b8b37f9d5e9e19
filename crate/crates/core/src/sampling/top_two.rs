use super::{
    argmax, argmin_except, tc_cost, tcm_cost, ArmStatistics, Sampler, TrackingMode, TrackingTable,
};

/// Time-varying slack `eps_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SlackSchedule {
    /// `n^(-alpha/2)`.
    PolyHalf(f64),
    /// `min(1, ln(n)^(-alpha/2))`.
    LogHalf(f64),
}

impl SlackSchedule {
    pub fn at(&self, n: u64) -> f64 {
        self.eval(n.max(1) as f64)
    }

    /// Schedule evaluated at a real time `n >= 1`.
    pub fn eval(&self, n: f64) -> f64 {
        match *self {
            SlackSchedule::PolyHalf(alpha) => n.powf(-alpha / 2.0),
            SlackSchedule::LogHalf(alpha) => {
                let l = n.ln();
                if l <= 1.0 {
                    1.0
                } else {
                    l.powf(-alpha / 2.0).min(1.0)
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Challenger {
    Additive(f64),
    Multiplicative(f64),
    Varying(SlackSchedule),
}

/// Empirical-best leader, transportation-cost challenger, pairwise tracking.
#[derive(Debug, Clone)]
pub struct EbTc {
    challenger: Challenger,
    mode: TrackingMode,
    table: TrackingTable,
}

impl EbTc {
    pub fn new(k: usize, challenger: Challenger, mode: TrackingMode) -> Self {
        Self {
            challenger,
            mode,
            table: TrackingTable::new(k),
        }
    }

    /// Leader and challenger for the coming round.
    pub fn pair(&self, stats: &ArmStatistics) -> (usize, usize) {
        let leader = argmax(stats.means());
        let k = stats.num_arms();
        let challenger = match self.challenger {
            Challenger::Additive(eps) => {
                argmin_except(k, leader, |i| tc_cost(stats, leader, i, eps))
            }
            Challenger::Multiplicative(eps) => {
                argmin_except(k, leader, |i| tcm_cost(stats, leader, i, eps))
            }
            Challenger::Varying(schedule) => {
                let eps = schedule.at(stats.step());
                argmin_except(k, leader, |i| tc_cost(stats, leader, i, eps))
            }
        };
        (leader, challenger)
    }
}

impl Sampler for EbTc {
    fn select(&mut self, stats: &ArmStatistics) -> usize {
        if let Some(arm) = stats.first_unpulled() {
            return arm;
        }
        let (leader, challenger) = self.pair(stats);
        let beta = self
            .mode
            .proportion(stats.count(leader), stats.count(challenger));
        self.table.select(leader, challenger, beta)
    }

    fn is_multiplicative(&self) -> bool {
        matches!(self.challenger, Challenger::Multiplicative(_))
    }

    fn tracking(&self) -> Option<&TrackingTable> {
        Some(&self.table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slack_schedules() {
        assert!((SlackSchedule::PolyHalf(0.5).at(16) - 0.5).abs() < 1e-15);
        let v = SlackSchedule::LogHalf(0.5).eval(4f64.exp());
        assert!((v - 0.70711).abs() < 5e-6);
        assert_eq!(SlackSchedule::LogHalf(0.5).at(1), 1.0);
        assert_eq!(SlackSchedule::LogHalf(0.5).at(2), 1.0);
        let mut prev = f64::INFINITY;
        for n in 1..10_000 {
            let e = SlackSchedule::PolyHalf(0.7).at(n);
            assert!(e > 0.0 && e <= prev);
            prev = e;
        }
    }

    /// Independent re-implementation of the two-arm rule for a short trace.
    #[test]
    fn two_arm_trace_matches_hand_rule() {
        let rewards = [
            0.3, -0.2, 1.1, 0.4, -0.5, 0.9, 0.2, 0.0, 1.4, -0.1, 0.6, 0.3,
        ];
        let mut stats = ArmStatistics::new(2);
        let mut sampler = EbTc::new(2, Challenger::Additive(0.1), TrackingMode::FixedBeta(0.5));

        let (mut n, mut s) = ([0u64; 2], [0f64; 2]);
        let (mut t, mut nc) = ([[0u64; 2]; 2], [[0u64; 2]; 2]);
        for (round, r) in rewards.iter().enumerate() {
            let expected = if round < 2 {
                round
            } else {
                let leader = if s[1] / n[1] as f64 > s[0] / n[0] as f64 {
                    1
                } else {
                    0
                };
                let ch = 1 - leader;
                t[leader][ch] += 1;
                if nc[leader][ch] as f64 <= 0.5 * t[leader][ch] as f64 {
                    nc[leader][ch] += 1;
                    ch
                } else {
                    leader
                }
            };
            let arm = sampler.select(&stats);
            assert_eq!(arm, expected, "round {}", round + 1);
            stats.record(arm, *r);
            n[arm] += 1;
            s[arm] += r;
        }
    }

    #[test]
    fn ids_equals_half_when_counts_match() {
        let stats = ArmStatistics::from_means(&[0.5, 0.2, 0.1], &[4, 4, 4]).unwrap();
        let mut a = EbTc::new(3, Challenger::Additive(0.1), TrackingMode::Ids);
        let mut b = EbTc::new(3, Challenger::Additive(0.1), TrackingMode::FixedBeta(0.5));
        assert_eq!(a.select(&stats), b.select(&stats));
        assert_eq!(a.table, b.table);
    }
}
