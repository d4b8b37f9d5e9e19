//! Anytime behaviour: simple regret and per-epsilon error curves without a stopping rule.
//!
//! ```text
//! cargo run --release --example anytime_regret
//! ```

use epsbai::harness::{error_curve, run_anytime_batch, Anytime};
use epsbai::sampling::{AlgoName, AlgoSpec};
use epsbai::BanditInstance;

fn main() -> epsbai::Result<()> {
    let instance = BanditInstance::gaussian(vec![0.6, 0.6, 0.55, 0.45, 0.3, 0.2])?;
    let horizon = 5000;
    let runs = 500;
    let checkpoints = vec![50, 200, 1000, 5000];
    let gaps = instance.gaps();
    println!("distinct gaps {:?}\n", gaps.distinct_gaps());

    for spec in [
        AlgoSpec::new(AlgoName::EbTcFixed)
            .with_slack(0.1)
            .with_beta(0.5),
        AlgoSpec::new(AlgoName::Uniform),
        AlgoSpec::new(AlgoName::Dsr),
        AlgoSpec::new(AlgoName::Dsh),
    ] {
        let setup = Anytime::new(spec.clone(), instance.clone(), 0.1, horizon)
            .with_checkpoints(checkpoints.clone());
        let traces = run_anytime_batch(&setup, runs, 0, None)?;
        println!("{}", spec.name);
        for (c, t) in checkpoints.iter().enumerate() {
            let regret = traces.iter().map(|tr| tr.regrets[c]).sum::<f64>() / runs as f64;
            let curve: Vec<String> = error_curve(&traces, c)
                .iter()
                .map(|e| format!("{e:.3}"))
                .collect();
            println!(
                "  n = {t:>5}  regret {regret:.5}  P(error) per eps [{}]",
                curve.join(", ")
            );
        }
        let cumulative = traces.iter().map(|tr| tr.cumulative_regret).sum::<f64>() / runs as f64;
        println!("  cumulative recommendation regret {cumulative:.2}");
    }
    Ok(())
}
