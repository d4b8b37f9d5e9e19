use serde::Serialize;

use crate::error::{Error, Result};
use crate::instances::{eps_good_set, GapStructure};

/// Complexity constants governing the anytime guarantees of EB-TCε with `beta = 1/2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HardnessConstants {
    /// `H_{mu, eps0}(eps_tilde)`.
    pub h_eps: f64,
    /// `H_i(mu, eps0)` for levels `i = 1, ..., C_mu - 1`, stored at index `i - 1`.
    pub h_levels: Vec<f64>,
}

impl HardnessConstants {
    /// Level constant `H_i`, 1-based.
    pub fn level(&self, i: usize) -> Option<f64> {
        i.checked_sub(1).and_then(|j| self.h_levels.get(j).copied())
    }
}

pub fn hardness_constants(means: &[f64], eps0: f64, eps_tilde: f64) -> Result<HardnessConstants> {
    if !(eps0 > 0.0) || !eps0.is_finite() {
        return Err(Error::Domain {
            what: "eps0",
            value: eps0,
        });
    }
    if !(eps_tilde >= 0.0) {
        return Err(Error::Domain {
            what: "eps_tilde",
            value: eps_tilde,
        });
    }
    if means.len() < 2 {
        return Err(Error::invalid(format!(
            "at least 2 arms are required, got {}",
            means.len()
        )));
    }
    let gaps = GapStructure::new(means);
    Ok(HardnessConstants {
        h_eps: leader_complexity(means, &gaps, eps0, eps_tilde),
        h_levels: (1..gaps.c_mu())
            .map(|i| level_constant(&gaps, eps0, i))
            .collect(),
    })
}

fn leader_complexity(means: &[f64], gaps: &GapStructure, eps0: f64, eps_tilde: f64) -> f64 {
    let star = crate::instances::max_mean(means);
    let n_best = gaps.classes()[0].len();
    let good = eps_good_set(means, eps_tilde);
    let bad_gaps: Vec<f64> = means
        .iter()
        .enumerate()
        .filter(|(j, _)| !good.contains(j))
        .map(|(_, m)| star - m)
        .collect();
    let delta = bad_gaps.iter().copied().fold(f64::INFINITY, f64::min);
    let c = (2.0 / delta - 1.0 / eps0).max(1.0 / eps0);
    2.0 * n_best as f64 / (delta * delta)
        + (good.len() - n_best) as f64 * c * c
        + bad_gaps
            .iter()
            .map(|d| c.max(2f64.sqrt() / d).powi(2))
            .sum::<f64>()
}

/// `H_i = min_{j <= i} max(Hbar_{i,j}, Htilde_{i,j})` with 1-based levels.
fn level_constant(gaps: &GapStructure, eps0: f64, i: usize) -> f64 {
    let d = |k: usize| gaps.distinct_gaps()[k - 1];
    let size = |k: usize| gaps.classes()[k - 1].len() as f64;
    let sizes = |from: usize, to: usize| (from..=to).map(size).sum::<f64>();
    let c_mu = gaps.c_mu();
    let n_best = size(1);
    let inv = 1.0 / eps0;
    let sqrt2 = 2f64.sqrt();
    let c_single = |k: usize| 2.0 / d(k) - inv;
    let c_pair = |a: usize, b: usize| 2.0 * (d(b) / eps0 + 1.0) / (d(a) - d(b)) + 3.0 * inv;

    (1..=i)
        .map(|j| {
            let cij = c_pair(i + 1, j);
            let cj = c_single(j + 1);
            let h_bar = n_best * (sqrt2 / d(j + 1)).max(cij).powi(2)
                + cj.max(cij).powi(2) * (sizes(2, j) + sizes(i + 1, c_mu))
                + (j + 1..=i)
                    .map(|k| size(k) * cj.max(cij).max(sqrt2 / d(k)).powi(2))
                    .sum::<f64>();
            let h_tilde = 2.0 * n_best / d(j + 1).powi(2)
                + cj.max(inv).powi(2) * sizes(2, j)
                + 2.0 * sizes(1, j) / (d(i + 1) - d(j)).powi(2)
                + (j + 1..=c_mu)
                    .map(|k| size(k) * cj.max(inv).max(sqrt2 / d(k)).powi(2))
                    .sum::<f64>();
            h_bar.max(h_tilde)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Bracket `[2K / gap_{i+1}^2, K min_j max(2/gap_{j+1}, C_{i+1,j})^2]` for level `i`.
pub fn level_bracket(means: &[f64], eps0: f64, i: usize) -> (f64, f64) {
    let gaps = GapStructure::new(means);
    let d = |k: usize| gaps.distinct_gaps()[k - 1];
    let k = means.len() as f64;
    let upper = (1..=i)
        .map(|j| {
            let cij = 2.0 * (d(j) / eps0 + 1.0) / (d(i + 1) - d(j)) + 3.0 / eps0;
            (2.0 / d(j + 1)).max(cij).powi(2)
        })
        .fold(f64::INFINITY, f64::min);
    (2.0 * k / d(i + 1).powi(2), k * upper)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_level_closed_form() {
        for k in [2, 5, 10] {
            let mut means = vec![0.4; k];
            means[0] = 0.6;
            means[1] = if k > 2 { 0.6 } else { 0.4 };
            let h = hardness_constants(&means, 0.1, 0.0).unwrap();
            let dmin: f64 = 0.6 - 0.4;
            assert_eq!(h.h_levels.len(), 1);
            let exact = k as f64 * (2.0 / dmin + 3.0 / 0.1).powi(2);
            assert!((h.h_levels[0] - exact).abs() <= 1e-12 * exact);
            assert!((h.h_levels[0] - 1600.0 * k as f64).abs() <= 1e-9 * 1600.0 * k as f64);
        }
    }

    #[test]
    fn levels_respect_brackets() {
        let cases: [&[f64]; 3] = [
            &[0.6, 0.6, 0.55, 0.45, 0.3, 0.2],
            &[1.0, 0.8, 0.8, 0.5, 0.5, 0.5],
            &[0.7, 0.55, 0.5, 0.4, 0.2],
        ];
        for means in cases {
            for eps0 in [0.05, 0.1, 0.3] {
                let h = hardness_constants(means, eps0, 0.1).unwrap();
                for i in 1..=h.h_levels.len() {
                    let (lo, hi) = level_bracket(means, eps0, i);
                    let v = h.level(i).unwrap();
                    assert!(
                        v >= lo * (1.0 - 1e-12) && v <= hi * (1.0 + 1e-12),
                        "{i}: {lo} {v} {hi}"
                    );
                }
            }
        }
    }

    #[test]
    fn three_groups_second_level_upper_bound() {
        let means = [1.0, 0.8, 0.8, 0.5];
        let h = hardness_constants(&means, 0.1, 0.0).unwrap();
        let (_, hi) = level_bracket(&means, 0.1, 2);
        // the j = 1 term gives 34^2, tighter than the j = 2 term 50^2
        assert!((hi - 4.0 * 34.0f64.powi(2)).abs() < 1e-6);
        assert!(h.level(2).unwrap() <= hi * (1.0 + 1e-12));
        assert!(h.level(2).unwrap() <= 4.0 * 50.0f64.powi(2));
    }

    #[test]
    fn leader_complexity_with_empty_sets() {
        // every arm is good: only the (|I| - |i*|) C^2 term with C = 1/eps0 survives
        let h = hardness_constants(&[1.0, 0.9, 0.8], 0.1, 0.5).unwrap();
        assert!((h.h_eps - 2.0 * 100.0).abs() < 1e-9);
        // only the best arm is good
        let h = hardness_constants(&[1.0, 0.5], 0.1, 0.0).unwrap();
        let c: f64 = 10.0f64.max(4.0 - 10.0);
        assert!((h.h_eps - (2.0 / 0.25 + c.max(2f64.sqrt() / 0.5).powi(2))).abs() < 1e-9);
        assert!(hardness_constants(&[1.0, 0.5], 0.0, 0.0).is_err());
    }
}
