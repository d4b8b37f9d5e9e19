use serde::Serialize;

use super::AnytimeTrace;
use crate::instances::GapStructure;

/// Mean, spread and quartiles of one metric over a batch of runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub algo: String,
    pub metric: String,
    pub mean: f64,
    pub std: f64,
    pub q25: f64,
    pub q50: f64,
    pub q75: f64,
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Sample statistics with linear-interpolation quartiles; `values` must be non-empty.
pub fn summarize(algo: &str, metric: &str, values: &[f64]) -> Summary {
    let n = values.len();
    assert!(n > 0, "cannot summarize an empty sample");
    let mean = values.iter().sum::<f64>() / n as f64;
    let std = if n > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Summary {
        algo: algo.to_string(),
        metric: metric.to_string(),
        mean,
        std,
        q25: quantile(&sorted, 0.25),
        q50: quantile(&sorted, 0.5),
        q75: quantile(&sorted, 0.75),
        min: sorted[0],
        max: sorted[n - 1],
        n,
    }
}

/// Fraction of runs whose recommendation at checkpoint `cp` is not `eps_grid[e]`-good,
/// indexed `[e]`.
pub fn error_curve(traces: &[AnytimeTrace], cp: usize) -> Vec<f64> {
    let width = traces.first().map_or(0, |t| t.errors[cp].len());
    (0..width)
        .map(|e| traces.iter().filter(|t| t.errors[cp][e]).count() as f64 / traces.len() as f64)
        .collect()
}

/// `sum_{i < C} (gap_{i+1} - gap_i) P(error at gap_i)`, where `errors[i]` is the error
/// rate at epsilon equal to the `i`-th distinct gap.
pub fn regret_from_error_curve(gaps: &GapStructure, errors: &[f64]) -> f64 {
    let d = gaps.distinct_gaps();
    (0..d.len().saturating_sub(1))
        .map(|i| (d[i + 1] - d[i]) * errors[i])
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_statistics() {
        let s = summarize("a", "tau", &[4.0, 1.0, 3.0, 2.0]);
        assert_eq!(s.mean, 2.5);
        assert!((s.std - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!((s.q25, s.q50, s.q75), (1.75, 2.5, 3.25));
        assert_eq!((s.min, s.max, s.n), (1.0, 4.0, 4));
        let one = summarize("a", "tau", &[7.0]);
        assert_eq!((one.std, one.q25, one.q75), (0.0, 7.0, 7.0));
    }

    #[test]
    fn error_curve_integrates_to_regret() {
        let gaps = GapStructure::new(&[1.0, 0.8, 0.8, 0.3]);
        let d = gaps.distinct_gaps();
        let rec_gaps = [d[0], d[1], d[2], d[1]];
        let traces: Vec<AnytimeTrace> = rec_gaps
            .iter()
            .map(|&g: &f64| AnytimeTrace {
                run_id: 0,
                seed: 0,
                checkpoints: vec![5],
                recommendations: vec![0],
                regrets: vec![g],
                errors: vec![gaps.distinct_gaps().iter().map(|&e| g > e).collect()],
                cumulative_regret: 0.0,
            })
            .collect();
        let curve = error_curve(&traces, 0);
        assert_eq!(curve, vec![0.75, 0.25, 0.0]);
        let regret = regret_from_error_curve(&gaps, &curve);
        let direct = rec_gaps.iter().sum::<f64>() / 4.0;
        assert!((regret - direct).abs() < 1e-12);
    }
}
