//! Bandit instances, the benchmark generators, and the gap structure of a mean vector.
//!
//! Arms are 0-based everywhere in the library. User-facing output (CSV, CLI)
//! renders them 1-based.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reward law shared by every arm of an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RewardFamily {
    /// `Normal(mu_i, 1)`.
    #[default]
    Gaussian,
    /// `Bernoulli(mu_i)`, means must lie in `[0, 1]`.
    Bernoulli,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BanditInstance {
    means: Vec<f64>,
    family: RewardFamily,
}

impl BanditInstance {
    pub fn new(means: Vec<f64>, family: RewardFamily) -> Result<Self> {
        if means.len() < 2 {
            return Err(Error::invalid(format!(
                "an instance needs at least 2 arms, got {}",
                means.len()
            )));
        }
        if let Some((i, m)) = means.iter().enumerate().find(|(_, m)| !m.is_finite()) {
            return Err(Error::invalid(format!(
                "mean of arm {} is not finite: {m}",
                i + 1
            )));
        }
        if family == RewardFamily::Bernoulli {
            if let Some((i, m)) = means
                .iter()
                .enumerate()
                .find(|(_, m)| !(0.0..=1.0).contains(*m))
            {
                return Err(Error::invalid(format!(
                    "Bernoulli mean of arm {} must lie in [0, 1], got {m}",
                    i + 1
                )));
            }
        }
        Ok(Self { means, family })
    }

    pub fn gaussian(means: Vec<f64>) -> Result<Self> {
        Self::new(means, RewardFamily::Gaussian)
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn family(&self) -> RewardFamily {
        self.family
    }

    pub fn num_arms(&self) -> usize {
        self.means.len()
    }

    pub fn best_mean(&self) -> f64 {
        max_mean(&self.means)
    }

    /// Arms whose mean equals the best mean.
    pub fn best_arms(&self) -> Vec<usize> {
        eps_good_set(&self.means, 0.0)
    }

    pub fn gap(&self, arm: usize) -> f64 {
        self.best_mean() - self.means[arm]
    }

    pub fn gaps(&self) -> GapStructure {
        GapStructure::new(&self.means)
    }

    /// Arms `i` with `mu_i >= (1 - eps) mu_star`, for positive means.
    pub fn multiplicative_eps_good_set(&self, eps: f64) -> Vec<usize> {
        let best = self.best_mean();
        self.means
            .iter()
            .enumerate()
            .filter(|(_, &m)| best - m <= best * eps)
            .map(|(i, _)| i)
            .collect()
    }
}

pub(crate) fn max_mean(means: &[f64]) -> f64 {
    means.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Arms with `mu_i >= mu_star - eps`, in increasing index order.
pub fn eps_good_set(means: &[f64], eps: f64) -> Vec<usize> {
    let threshold = max_mean(means) - eps;
    means
        .iter()
        .enumerate()
        .filter(|(_, &m)| m >= threshold)
        .map(|(i, _)| i)
        .collect()
}

/// Distinct gaps `0 = gap_1 < gap_2 < ... < gap_C` and the arms sharing each gap.
#[derive(Debug, Clone, PartialEq)]
pub struct GapStructure {
    distinct_gaps: Vec<f64>,
    classes: Vec<Vec<usize>>,
}

impl GapStructure {
    pub fn new(means: &[f64]) -> Self {
        Self::with_tolerance(means, 0.0)
    }

    /// Groups means that differ by at most `tol` from the first mean of their group.
    pub fn with_tolerance(means: &[f64], tol: f64) -> Self {
        let best = max_mean(means);
        let mut order: Vec<usize> = (0..means.len()).collect();
        // stable sort keeps arm indices increasing inside a class
        order.sort_by(|&a, &b| means[b].total_cmp(&means[a]));

        let mut distinct_gaps = Vec::new();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut anchor = f64::NAN;
        for arm in order {
            let m = means[arm];
            if classes.is_empty() || anchor - m > tol {
                anchor = m;
                distinct_gaps.push(if classes.is_empty() { 0.0 } else { best - m });
                classes.push(Vec::new());
            }
            classes.last_mut().unwrap().push(arm);
        }
        for class in &mut classes {
            class.sort_unstable();
        }
        Self {
            distinct_gaps,
            classes,
        }
    }

    /// Number of distinct means, `C_mu`.
    pub fn c_mu(&self) -> usize {
        self.distinct_gaps.len()
    }

    pub fn distinct_gaps(&self) -> &[f64] {
        &self.distinct_gaps
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    /// 1-based level `i` with `eps` in `[gap_i, gap_{i+1})`, `gap_{C+1} = +inf`.
    pub fn gap_index(&self, eps: f64) -> usize {
        self.distinct_gaps
            .iter()
            .filter(|&&g| g <= eps)
            .count()
            .max(1)
    }
}

/// Generator configuration for the benchmark instances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InstanceSpec {
    /// `mu_i = 1 - ((i - 1) / (K - 1))^alpha`.
    Alpha {
        #[serde(rename = "K")]
        k: usize,
        alpha: f64,
        #[serde(default)]
        family: RewardFamily,
    },
    /// `mu_1 = 1/4`, every other arm `0`.
    Sparse {
        #[serde(rename = "K")]
        k: usize,
        #[serde(default)]
        family: RewardFamily,
    },
    /// `n_best` arms at `high`, the rest at `low`.
    #[serde(rename = "two-groups")]
    TwoGroups {
        #[serde(rename = "K")]
        k: usize,
        n_best: usize,
        high: f64,
        low: f64,
        #[serde(default)]
        family: RewardFamily,
    },
    /// `mu_1 = 1`, `n_good` arms uniform in `[1 - eps, 1]`, the rest uniform in `[0, 1 - eps)`.
    Random {
        #[serde(rename = "K")]
        k: usize,
        epsilon: f64,
        n_good: usize,
        seed: u64,
        #[serde(default)]
        family: RewardFamily,
    },
    Explicit {
        means: Vec<f64>,
        #[serde(default)]
        family: RewardFamily,
    },
}

impl InstanceSpec {
    pub fn family(&self) -> RewardFamily {
        match self {
            InstanceSpec::Alpha { family, .. }
            | InstanceSpec::Sparse { family, .. }
            | InstanceSpec::TwoGroups { family, .. }
            | InstanceSpec::Random { family, .. }
            | InstanceSpec::Explicit { family, .. } => *family,
        }
    }

    /// Short label used as `instance_id` in persisted records.
    pub fn label(&self) -> String {
        match self {
            InstanceSpec::Alpha { k, alpha, .. } => format!("alpha{alpha}-K{k}"),
            InstanceSpec::Sparse { k, .. } => format!("sparse-K{k}"),
            InstanceSpec::TwoGroups { k, n_best, .. } => format!("twogroups-K{k}-b{n_best}"),
            InstanceSpec::Random {
                k, epsilon, seed, ..
            } => format!("random-K{k}-e{epsilon}-s{seed}"),
            InstanceSpec::Explicit { means, .. } => format!("explicit-K{}", means.len()),
        }
    }
}

fn check_arms(k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::invalid(format!("K must be at least 2, got {k}")));
    }
    Ok(())
}

pub fn generate_instance(spec: &InstanceSpec) -> Result<BanditInstance> {
    let means = match *spec {
        InstanceSpec::Alpha { k, alpha, .. } => {
            check_arms(k)?;
            if !(alpha > 0.0 && alpha.is_finite()) {
                return Err(Error::invalid(format!(
                    "alpha must be positive, got {alpha}"
                )));
            }
            let last = (k - 1) as f64;
            (0..k)
                .map(|i| 1.0 - (i as f64 / last).powf(alpha))
                .collect()
        }
        InstanceSpec::Sparse { k, .. } => {
            check_arms(k)?;
            let mut means = vec![0.0; k];
            means[0] = 0.25;
            means
        }
        InstanceSpec::TwoGroups {
            k,
            n_best,
            high,
            low,
            ..
        } => {
            check_arms(k)?;
            if n_best == 0 || n_best > k {
                return Err(Error::invalid(format!(
                    "n_best must lie in [1, K], got {n_best}"
                )));
            }
            if !(high > low) {
                return Err(Error::invalid("two-groups instance needs high > low"));
            }
            (0..k)
                .map(|i| if i < n_best { high } else { low })
                .collect()
        }
        InstanceSpec::Random {
            k,
            epsilon,
            n_good,
            seed,
            ..
        } => {
            check_arms(k)?;
            if !(epsilon > 0.0 && epsilon < 1.0) {
                return Err(Error::invalid(format!(
                    "epsilon must lie in (0, 1), got {epsilon}"
                )));
            }
            if n_good == 0 || n_good >= k {
                return Err(Error::invalid(format!(
                    "n_good must lie in [1, K), got {n_good}"
                )));
            }
            random_eps_good_means(k, epsilon, n_good, seed)
        }
        InstanceSpec::Explicit { ref means, .. } => means.clone(),
    };
    BanditInstance::new(means, spec.family())
}

fn random_eps_good_means(k: usize, eps: f64, n_good: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cut = 1.0 - eps;
    let mut means = Vec::with_capacity(k);
    means.push(1.0);
    for _ in 0..n_good {
        means.push(cut + rng.random::<f64>() * eps);
    }
    while means.len() < k {
        let x = rng.random::<f64>() * cut;
        if x < cut {
            means.push(x);
        }
    }
    means
}

#[cfg(test)]
mod tests {
    use super::*;

    const MU3: [f64; 6] = [0.6, 0.6, 0.55, 0.45, 0.3, 0.2];

    #[test]
    fn alpha_scenario_values() {
        let inst = generate_instance(&InstanceSpec::Alpha {
            k: 3,
            alpha: 1.0,
            family: RewardFamily::Gaussian,
        })
        .unwrap();
        assert_eq!(inst.means(), &[1.0, 0.5, 0.0]);

        let inst = generate_instance(&InstanceSpec::Alpha {
            k: 5,
            alpha: 0.3,
            family: RewardFamily::Gaussian,
        })
        .unwrap();
        let expected = [1.0, 0.34025, 0.18775, 0.08269, 0.0];
        for (m, e) in inst.means().iter().zip(expected) {
            assert!((m - e).abs() < 5e-6, "{m} vs {e}");
        }
    }

    #[test]
    fn sparse_instance() {
        let inst = generate_instance(&InstanceSpec::Sparse {
            k: 4,
            family: RewardFamily::Gaussian,
        })
        .unwrap();
        assert_eq!(inst.means(), &[0.25, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn generator_preconditions() {
        assert!(generate_instance(&InstanceSpec::Sparse {
            k: 1,
            family: RewardFamily::Gaussian
        })
        .is_err());
        assert!(generate_instance(&InstanceSpec::Alpha {
            k: 4,
            alpha: 0.0,
            family: RewardFamily::Gaussian
        })
        .is_err());
        for (eps, n_good) in [(0.0, 1), (1.0, 1), (0.1, 0), (0.1, 5)] {
            assert!(generate_instance(&InstanceSpec::Random {
                k: 5,
                epsilon: eps,
                n_good,
                seed: 1,
                family: RewardFamily::Gaussian
            })
            .is_err());
        }
        assert!(BanditInstance::new(vec![0.5, 1.5], RewardFamily::Bernoulli).is_err());
        assert!(BanditInstance::gaussian(vec![0.5, f64::NAN]).is_err());
    }

    #[test]
    fn eps_good_sets_of_table_instances() {
        assert_eq!(eps_good_set(&MU3, 0.1), vec![0, 1, 2]);
        assert_eq!(eps_good_set(&[0.7, 0.55, 0.5, 0.4, 0.2], 0.1), vec![0]);
        assert_eq!(eps_good_set(&MU3, 0.0), vec![0, 1]);
    }

    #[test]
    fn gap_structure_of_mu3() {
        let gaps = GapStructure::new(&MU3);
        assert_eq!(gaps.c_mu(), 5);
        let expected = [0.0, 0.05, 0.15, 0.3, 0.4];
        for (g, e) in gaps.distinct_gaps().iter().zip(expected) {
            assert!((g - e).abs() < 1e-12);
        }
        assert_eq!(gaps.classes()[0], vec![0, 1]);
        assert_eq!(gaps.gap_index(0.1), 2);
        assert_eq!(gaps.gap_index(0.0), 1);
        assert_eq!(gaps.gap_index(0.5), 5);
    }

    #[test]
    fn gap_tolerance_merges_close_means() {
        let gaps = GapStructure::with_tolerance(&[1.0, 1.0 - 1e-13, 0.5], 1e-12);
        assert_eq!(gaps.c_mu(), 2);
        assert_eq!(gaps.classes()[0], vec![0, 1]);
    }

    #[test]
    fn spec_is_tagged_json() {
        let spec: InstanceSpec =
            serde_json::from_str(r#"{"kind":"alpha","K":10,"alpha":0.3,"family":"gaussian"}"#)
                .unwrap();
        assert_eq!(
            spec,
            InstanceSpec::Alpha {
                k: 10,
                alpha: 0.3,
                family: RewardFamily::Gaussian
            }
        );
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn eps_good_sets_are_nested(
                means in prop::collection::vec(-2.0f64..2.0, 2..12),
                e1 in 0.0f64..1.0,
                extra in 0.0f64..1.0,
            ) {
                let small = eps_good_set(&means, e1);
                let large = eps_good_set(&means, e1 + extra);
                prop_assert!(small.iter().all(|i| large.contains(i)));
                let best = eps_good_set(&means, 0.0);
                prop_assert!(best.iter().all(|i| small.contains(i)));
            }

            #[test]
            fn gap_index_is_a_step_function(
                means in prop::collection::vec(prop::sample::select(vec![0.0, 0.1, 0.25, 0.5, 0.6, 1.0]), 2..10),
                e1 in 0.0f64..1.5,
                extra in 0.0f64..1.0,
            ) {
                let gaps = GapStructure::new(&means);
                let i = gaps.gap_index(e1);
                prop_assert!(i >= 1 && i <= gaps.c_mu());
                prop_assert!(gaps.gap_index(e1 + extra) >= i);
                let d = gaps.distinct_gaps();
                prop_assert!(d[i - 1] <= e1);
                if i < gaps.c_mu() {
                    prop_assert!(e1 < d[i]);
                }
                let mut covered: Vec<usize> = gaps.classes().concat();
                covered.sort_unstable();
                prop_assert_eq!(covered, (0..means.len()).collect::<Vec<_>>());
                prop_assert_eq!(&gaps.classes()[0], &eps_good_set(&means, 0.0));
            }

            #[test]
            fn alpha_means_strictly_decrease(k in 2usize..200, alpha in 0.01f64..5.0) {
                let inst = generate_instance(&InstanceSpec::Alpha { k, alpha, family: RewardFamily::Gaussian }).unwrap();
                let m = inst.means();
                prop_assert_eq!(m[0], 1.0);
                prop_assert_eq!(m[k - 1], 0.0);
                prop_assert!(m.windows(2).all(|w| w[1] < w[0]));
            }

            #[test]
            fn random_instances_have_planted_good_set(
                k in 3usize..40,
                eps in 0.01f64..0.99,
                seed in any::<u64>(),
                frac in 0.0f64..1.0,
            ) {
                let n_good = 1 + ((k - 2) as f64 * frac) as usize;
                let spec = InstanceSpec::Random { k, epsilon: eps, n_good, seed, family: RewardFamily::Gaussian };
                let inst = generate_instance(&spec).unwrap();
                prop_assert_eq!(eps_good_set(inst.means(), eps), (0..=n_good).collect::<Vec<_>>());
                prop_assert_eq!(&generate_instance(&spec).unwrap(), &inst);
            }
        }
    }
}
