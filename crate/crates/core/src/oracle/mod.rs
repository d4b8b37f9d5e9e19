//! Characteristic times and optimal allocations for Gaussian (epsilon-)best-arm
//! identification, additive and multiplicative, plus the hardness constants.

mod hardness;
mod roots;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instances::{eps_good_set, max_mean};

pub use hardness::{hardness_constants, level_bracket, HardnessConstants};

/// Simplex weights together with their characteristic time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Allocation {
    pub weights: Vec<f64>,
    pub time: f64,
    /// Weight forced on the target arm, for constrained solutions.
    pub beta: Option<f64>,
}

impl Allocation {
    /// Transportation costs `(mu_t - mu_j)^2 / (1/w_t + 1/w_j)` of `means` under these weights.
    pub fn transport_costs(&self, means: &[f64], target: usize) -> Vec<f64> {
        let w = &self.weights;
        (0..means.len())
            .filter(|&j| j != target)
            .map(|j| (means[target] - means[j]).powi(2) / (1.0 / w[target] + 1.0 / w[j]))
            .collect()
    }
}

fn unique_best(means: &[f64]) -> Result<usize> {
    let best = eps_good_set(means, 0.0);
    match best.as_slice() {
        [b] => Ok(*b),
        _ => Err(Error::NonUniqueBest { count: best.len() }),
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::Domain {
            what: "beta",
            value: beta,
        });
    }
    Ok(())
}

/// Squared gaps to the unique best arm and the pole `1 / min gap^2`.
fn squared_gaps(means: &[f64]) -> Result<(usize, Vec<f64>, f64)> {
    if means.len() < 2 {
        return Err(Error::invalid(format!(
            "at least 2 arms are required, got {}",
            means.len()
        )));
    }
    let best = unique_best(means)?;
    let star = means[best];
    let sq: Vec<f64> = means
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != best)
        .map(|(_, m)| (star - m).powi(2))
        .collect();
    let pole = 1.0 / sq.iter().copied().fold(f64::INFINITY, f64::min);
    Ok((best, sq, pole))
}

fn check_above_pole(r: f64, pole: f64) -> Result<()> {
    if !(r > pole) {
        return Err(Error::Domain {
            what: "r (must exceed the pole 1/min gap^2)",
            value: r,
        });
    }
    Ok(())
}

/// `sum_{i != i*} 1/(r gap_i^2 - 1)^2 - 1`.
pub fn psi_value(means: &[f64], r: f64) -> Result<f64> {
    let (_, sq, pole) = squared_gaps(means)?;
    check_above_pole(r, pole)?;
    Ok(sq.iter().map(|d| (r * d - 1.0).powi(-2)).sum::<f64>() - 1.0)
}

/// `sum_{i != i*} 1/(r gap_i^2 - 1) - (1 - beta)/beta`.
pub fn phi_value(means: &[f64], beta: f64, r: f64) -> Result<f64> {
    check_beta(beta)?;
    let (_, sq, pole) = squared_gaps(means)?;
    check_above_pole(r, pole)?;
    Ok(sq.iter().map(|d| 1.0 / (r * d - 1.0)).sum::<f64>() - (1.0 - beta) / beta)
}

/// Solves `sum_j c/(r a_j - 1) = (1-beta)/beta` over squared costs `a_j` and
/// returns `(r, ratios c/(r a_j - 1))`.
fn beta_root(sq: &[f64], c: f64, beta: f64, pole: f64) -> Result<(f64, Vec<f64>)> {
    let rhs = (1.0 - beta) / beta;
    let r = roots::decreasing_root(
        |r| sq.iter().map(|d| c / (r * d - 1.0)).sum::<f64>() - rhs,
        |r| {
            -sq.iter()
                .map(|d| c * d / (r * d - 1.0).powi(2))
                .sum::<f64>()
        },
        pole,
    )?;
    Ok((r, sq.iter().map(|d| c / (r * d - 1.0)).collect()))
}

/// Builds a full weight vector with `head` on `best` and `rest` elsewhere, normalised.
fn assemble(best: usize, head: f64, rest: &[f64]) -> Vec<f64> {
    let mut w = Vec::with_capacity(rest.len() + 1);
    let mut it = rest.iter();
    for j in 0..=rest.len() {
        w.push(if j == best { head } else { *it.next().unwrap() });
    }
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    w
}

/// Shared constrained solver; `c = 1` and `sq = gap^2` is plain best-arm identification.
fn solve_beta_costs(best: usize, sq: &[f64], pole: f64, c: f64, beta: f64) -> Result<Allocation> {
    let (r, ratios) = beta_root(sq, c, beta, pole)?;
    let rest: Vec<f64> = ratios.iter().map(|x| beta * x).collect();
    Ok(Allocation {
        weights: assemble(best, beta, &rest),
        time: 2.0 * r / beta,
        beta: Some(beta),
    })
}

/// Optimal allocation with weight `beta` on the unique best arm.
pub fn solve_bai_beta(means: &[f64], beta: f64) -> Result<Allocation> {
    check_beta(beta)?;
    let (best, sq, pole) = squared_gaps(means)?;
    solve_beta_costs(best, &sq, pole, 1.0, beta)
}

/// Unconstrained optimal allocation for best-arm identification.
pub fn solve_bai(means: &[f64]) -> Result<Allocation> {
    let (best, sq, pole) = squared_gaps(means)?;
    let r = roots::decreasing_root(
        |r| sq.iter().map(|d| (r * d - 1.0).powi(-2)).sum::<f64>() - 1.0,
        |r| -2.0 * sq.iter().map(|d| d * (r * d - 1.0).powi(-3)).sum::<f64>(),
        pole,
    )?;
    let ratios: Vec<f64> = sq.iter().map(|d| 1.0 / (r * d - 1.0)).collect();
    let mass = 1.0 + ratios.iter().sum::<f64>();
    // equal transportation costs give T = 2 (1/w* + 1/w_i) / gap_i^2 = 2 r mass
    Ok(Allocation {
        weights: assemble(best, 1.0, &ratios),
        time: 2.0 * r * mass,
        beta: None,
    })
}

/// Arm `arm` keeps its mean, every other arm is lowered by `eps`.
pub fn modified_instance(means: &[f64], eps: f64, arm: usize) -> Vec<f64> {
    means
        .iter()
        .enumerate()
        .map(|(j, &m)| if j == arm { m } else { m - eps })
        .collect()
}

/// Characteristic time and allocation for `eps`-best-arm identification, targeting `arm`
/// (lowest-index best arm by default), optionally with weight `beta` on it.
pub fn solve_eps(
    means: &[f64],
    eps: f64,
    beta: Option<f64>,
    arm: Option<usize>,
) -> Result<Allocation> {
    if !(eps >= 0.0) || !eps.is_finite() {
        return Err(Error::Domain {
            what: "epsilon",
            value: eps,
        });
    }
    if means.len() < 2 {
        return Err(Error::invalid(format!(
            "at least 2 arms are required, got {}",
            means.len()
        )));
    }
    let good = eps_good_set(means, eps);
    let arm = match arm {
        Some(a) if a >= means.len() => {
            return Err(Error::invalid(format!("arm {} does not exist", a + 1)))
        }
        Some(a) => a,
        None => eps_good_set(means, 0.0)[0],
    };
    if !good.contains(&arm) {
        return Err(Error::NotEpsGood { arm: arm + 1, eps });
    }
    let target = if eps > 0.0 {
        modified_instance(means, eps, arm)
    } else {
        means.to_vec()
    };
    match beta {
        Some(b) => solve_bai_beta(&target, b),
        None => solve_bai(&target),
    }
}

/// Allocation for the multiplicative setting, where arm `i` is good when
/// `mu_i >= (1 - eps) mu_star`. Without `beta` the target weight is optimised.
pub fn solve_eps_multiplicative(means: &[f64], eps: f64, beta: Option<f64>) -> Result<Allocation> {
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::Domain {
            what: "multiplicative epsilon",
            value: eps,
        });
    }
    if means.len() < 2 {
        return Err(Error::invalid(format!(
            "at least 2 arms are required, got {}",
            means.len()
        )));
    }
    if let Some((arm, &mean)) = means.iter().enumerate().find(|(_, &m)| !(m > 0.0)) {
        return Err(Error::NonPositiveMean { arm: arm + 1, mean });
    }
    let best = unique_best(means)?;
    let star = max_mean(means);
    let c = (1.0 - eps) * (1.0 - eps);
    let sq: Vec<f64> = means
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != best)
        .map(|(_, m)| (star - (1.0 - eps) * m).powi(2))
        .collect();
    let pole = 1.0 / sq.iter().copied().fold(f64::INFINITY, f64::min);

    if let Some(b) = beta {
        check_beta(b)?;
        return solve_beta_costs(best, &sq, pole, c, b);
    }

    let time_at = |b: f64| beta_root(&sq, c, b, pole).map(|(r, _)| 2.0 * r / b);
    let b = golden_min(time_at, 1e-8)?;
    let mut alloc = solve_beta_costs(best, &sq, pole, c, b)?;
    alloc.beta = None;
    Ok(alloc)
}

/// Golden-section minimisation over `(0, 1)` seeded by a coarse scan.
fn golden_min(f: impl Fn(f64) -> Result<f64>, tol: f64) -> Result<f64> {
    const SCAN: usize = 100;
    let mut best = (f64::INFINITY, 0.5);
    for k in 1..SCAN {
        let b = k as f64 / SCAN as f64;
        let v = f(b)?;
        if v < best.0 {
            best = (v, b);
        }
    }
    let step = 1.0 / SCAN as f64;
    let mut a = (best.1 - step).max(1e-12);
    let mut b = (best.1 + step).min(1.0 - 1e-12);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while b - a > tol {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2)?;
        }
    }
    Ok(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn psi_and_phi_closed_forms() {
        assert!(psi_value(&[1.0, 0.0], 2.0).unwrap().abs() < 1e-15);
        assert!(
            psi_value(&[1.0, 0.0, 0.0], 1.0 + 2f64.sqrt())
                .unwrap()
                .abs()
                < 1e-15
        );
        let far = psi_value(&[1.0, 0.0], 1e9).unwrap();
        assert!((far + 1.0).abs() < 1e-12);
        assert!(phi_value(&[1.0, 0.0], 0.5, 2.0).unwrap().abs() < 1e-15);
        assert!((phi_value(&[1.0, 0.0], 0.5, 3.0).unwrap() + 0.5).abs() < 1e-15);
        let near_one = phi_value(&[1.0, 0.0], 1.0 - 1e-12, 3.0).unwrap();
        assert!((near_one - 0.5).abs() < 1e-9);
        assert!(psi_value(&[1.0, 0.0], 1.0).is_err());
        assert!(psi_value(&[1.0, 1.0], 3.0).is_err());
        assert!(phi_value(&[1.0, 0.0], 1.0, 3.0).is_err());
    }

    #[test]
    fn two_arm_allocations() {
        let a = solve_bai(&[1.0, 0.0]).unwrap();
        assert!(close(a.time, 8.0, 1e-12));
        assert!(close(a.weights[0], 0.5, 1e-12) && close(a.weights[1], 0.5, 1e-12));

        let a = solve_bai_beta(&[1.0, 0.0], 0.5).unwrap();
        assert!(close(a.time, 8.0, 1e-12));
        assert_eq!(a.beta, Some(0.5));

        let a = solve_bai_beta(&[1.0, 0.0], 0.9).unwrap();
        assert!(close(a.time, 2.0 * (1.0 / 0.9 + 1.0 / 0.1), 1e-12));
        assert!(close(a.weights[0], 0.9, 1e-12) && close(a.weights[1], 0.1, 1e-12));
    }

    #[test]
    fn symmetric_three_arms() {
        let a = solve_bai(&[1.0, 0.0, 0.0]).unwrap();
        assert!((a.time - 11.65685).abs() < 5e-6);
        let expected = [0.41421, 0.29289, 0.29289];
        for (w, e) in a.weights.iter().zip(expected) {
            assert!((w - e).abs() < 5e-6);
        }
    }

    #[test]
    fn best_arm_need_not_be_first() {
        let a = solve_bai(&[0.0, 0.5, 1.0]).unwrap();
        let b = solve_bai(&[1.0, 0.5, 0.0]).unwrap();
        assert_eq!(a.time, b.time);
        assert_eq!(a.weights[2], b.weights[0]);
        assert_eq!(a.weights[0], b.weights[2]);
    }

    #[test]
    fn modified_instances() {
        assert_eq!(modified_instance(&[1.0, 0.0], 1.0, 0), vec![1.0, -1.0]);
        let m = modified_instance(&[0.6, 0.6, 0.5], 0.1, 0);
        assert!(close(m[1], 0.5, 1e-15) && close(m[2], 0.4, 1e-15) && m[0] == 0.6);
        let m = modified_instance(&[0.6, 0.6, 0.5], 0.1, 1);
        assert!(m[1] == 0.6 && close(m[0], 0.5, 1e-15));
    }

    #[test]
    fn eps_reduction() {
        let a = solve_eps(&[1.0, 0.0], 1.0, Some(0.5), Some(0)).unwrap();
        assert!(close(a.time, 2.0, 1e-12));
        assert!(close(a.weights[1], 0.5, 1e-12));

        let mu3 = [0.6, 0.6, 0.55, 0.45, 0.3, 0.2];
        let a = solve_eps(&mu3, 0.1, Some(0.5), Some(0)).unwrap();
        let b = solve_bai_beta(&modified_instance(&mu3, 0.1, 0), 0.5).unwrap();
        assert_eq!(a, b);
        assert!(a.time.is_finite());
        assert_eq!(solve_eps(&mu3, 0.1, Some(0.5), None).unwrap(), a);
        assert!(matches!(
            solve_eps(&mu3, 0.0, None, None),
            Err(Error::NonUniqueBest { count: 2 })
        ));
        assert!(matches!(
            solve_eps(&mu3, 0.1, None, Some(3)),
            Err(Error::NotEpsGood { .. })
        ));
    }

    #[test]
    fn far_arms_can_get_tiny_weight() {
        // arm 2 is eps/2-good, yet arm 3 sits far away and receives almost no weight
        let means = [1.0, 0.95, 0.0];
        let a = solve_eps(&means, 0.1, Some(0.5), Some(1)).unwrap();
        assert!(a.weights[2] < 1e-3);
        assert!(a.weights[0] > 0.49);
        let costs = a.transport_costs(&modified_instance(&means, 0.1, 1), 1);
        assert!((costs[0] - costs[1]).abs() < 1e-12);
    }

    #[test]
    fn multiplicative_collapses_and_closed_forms() {
        let a = solve_eps_multiplicative(&[1.0, 0.5], 0.0, Some(0.5)).unwrap();
        assert_eq!(a, solve_bai_beta(&[1.0, 0.5], 0.5).unwrap());

        let a = solve_eps_multiplicative(&[1.0, 0.5], 0.2, Some(0.5)).unwrap();
        assert!((a.time - 18.2222).abs() < 5e-5, "{}", a.time);
        assert!(close(a.weights[1], 0.5, 1e-12));

        assert!(matches!(
            solve_eps_multiplicative(&[1.0, 0.0], 0.2, None),
            Err(Error::NonPositiveMean { .. })
        ));
        assert!(solve_eps_multiplicative(&[1.0, 0.5], 1.0, None).is_err());
    }

    #[test]
    fn multiplicative_overall_balance() {
        for (means, eps) in [
            (vec![1.0, 0.5, 0.25], 0.2),
            (vec![2.0, 1.9, 1.0, 0.3], 0.1),
            (vec![0.9, 0.2], 0.5),
        ] {
            let a = solve_eps_multiplicative(&means, eps, None).unwrap();
            let b = a.weights[0];
            let s: f64 = a.weights[1..].iter().map(|w| (w / b).powi(2)).sum();
            assert!((s - (1.0 - eps).powi(2)).abs() < 1e-6, "{s}");
        }
    }

    #[test]
    fn multiplicative_beta_objective_is_unimodal() {
        let means = [1.0, 0.5, 0.25];
        let times: Vec<f64> = (1..1000)
            .map(|k| {
                solve_eps_multiplicative(&means, 0.2, Some(k as f64 / 1000.0))
                    .unwrap()
                    .time
            })
            .collect();
        let argmin = times
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert!(times[..=argmin].windows(2).all(|w| w[1] <= w[0]));
        assert!(times[argmin..].windows(2).all(|w| w[1] >= w[0]));
        let free = solve_eps_multiplicative(&means, 0.2, None).unwrap();
        assert!(free.time <= times[argmin] + 1e-9);
    }

    fn random_means() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-1.0f64..1.0, 2..8).prop_filter("unique best", |m| {
            let best = max_mean(m);
            m.iter().filter(|&&x| best - x < 1e-3).count() == 1
        })
    }

    proptest! {
        #[test]
        fn equilibrium_and_balance(means in random_means()) {
            let a = solve_bai(&means).unwrap();
            let best = unique_best(&means).unwrap();
            let w = &a.weights;
            prop_assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            let others: f64 = (0..means.len()).filter(|&j| j != best).map(|j| w[j] * w[j]).sum();
            prop_assert!((w[best] * w[best] - others).abs() < 1e-9);
            for cost in a.transport_costs(&means, best) {
                prop_assert!((cost - 2.0 / a.time).abs() < 1e-9 * (2.0 / a.time).max(1.0));
            }
            let half = solve_bai_beta(&means, 0.5).unwrap();
            prop_assert!(half.time <= 2.0 * a.time * (1.0 + 1e-9));
            for cost in half.transport_costs(&means, best) {
                prop_assert!((cost - 2.0 / half.time).abs() < 1e-9 * (2.0 / half.time).max(1.0));
            }
        }

        #[test]
        fn sandwich_by_gap_complexity(means in random_means()) {
            let a = solve_bai(&means).unwrap();
            let best = unique_best(&means).unwrap();
            let star = means[best];
            let dmin = means.iter().enumerate().filter(|&(j, _)| j != best)
                .map(|(_, m)| star - m).fold(f64::INFINITY, f64::min);
            let h: f64 = 2.0 / (dmin * dmin)
                + means.iter().enumerate().filter(|&(j, _)| j != best)
                    .map(|(_, m)| 2.0 / (star - m).powi(2)).sum::<f64>();
            prop_assert!(h <= a.time * (1.0 + 1e-9));
            prop_assert!(a.time <= 2.0 * h * (1.0 + 1e-9));
        }

        #[test]
        fn relation_across_slacks(means in random_means(), e1 in 0.01f64..0.5, extra in 0.01f64..0.5) {
            let e0 = e1 + extra;
            let best = unique_best(&means).unwrap();
            let dmin = means.iter().enumerate().filter(|&(j, _)| j != best)
                .map(|(_, m)| means[best] - m).fold(f64::INFINITY, f64::min);
            let t0 = solve_eps(&means, e0, None, None).unwrap().time;
            let t1 = solve_eps(&means, e1, None, None).unwrap().time;
            prop_assert!(t0 * (dmin + e0).powi(2) >= t1 * (dmin + e1).powi(2) * (1.0 - 1e-9));
        }

        #[test]
        fn half_constrained_time_is_bounded(means in random_means(), eps in 0.01f64..1.0) {
            let k = means.len() as f64;
            for arm in eps_good_set(&means, eps / 2.0) {
                let a = solve_eps(&means, eps, Some(0.5), Some(arm)).unwrap();
                prop_assert!(a.time <= 32.0 * k / (eps * eps) * (1.0 + 1e-9));
                for j in eps_good_set(&means, eps / 2.0) {
                    if j != arm {
                        prop_assert!(a.weights[j] >= 1.0 / (16.0 * (k - 2.0) + 2.0) * (1.0 - 1e-9));
                    }
                }
            }
        }
    }
}
