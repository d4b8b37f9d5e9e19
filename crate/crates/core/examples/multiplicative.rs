//! Multiplicative epsilon: an arm is good when its mean is within a factor (1 - eps)
//! of the best one.
//!
//! ```text
//! cargo run --release --example multiplicative
//! ```

use epsbai::harness::{run_fc_batch, FixedConfidence};
use epsbai::oracle::solve_eps_multiplicative;
use epsbai::sampling::{AlgoName, AlgoSpec};
use epsbai::thresholds::Threshold;
use epsbai::BanditInstance;

fn main() -> epsbai::Result<()> {
    let instance = BanditInstance::gaussian(vec![2.0, 1.85, 1.5, 1.0, 0.5])?;
    for eps in [0.05, 0.1, 0.2] {
        let good = instance.multiplicative_eps_good_set(eps);
        let t = solve_eps_multiplicative(instance.means(), eps, None)?.time;
        let setup = FixedConfidence::new(
            AlgoSpec::new(AlgoName::EbTcmIds),
            instance.clone(),
            eps,
            Threshold::heuristic(0.01)?,
        )
        .multiplicative(true);
        let records = run_fc_batch(&setup, 100, 0, None)?;
        let mean = records.iter().map(|r| r.tau as f64).sum::<f64>() / records.len() as f64;
        let errors = records.iter().filter(|r| !r.correct).count();
        println!(
            "eps = {eps:<5} good arms {:?}  T = {t:>8.2}  mean tau {mean:>8.1}  errors {errors}/100",
            good.iter().map(|a| a + 1).collect::<Vec<_>>()
        );
    }
    Ok(())
}
