//! Fixed-budget identification: Successive Rejects and Sequential Halving against
//! EB-TC stopped at the same budget, scored by the probability of missing a best arm.
//!
//! ```text
//! cargo run --release --example fixed_budget
//! ```

use epsbai::harness::{run_anytime_batch, Anytime};
use epsbai::sampling::{sh_schedule, sr_schedule, AlgoName, AlgoSpec};
use epsbai::BanditInstance;

fn main() -> epsbai::Result<()> {
    let instance = BanditInstance::gaussian(vec![0.6, 0.6, 0.55, 0.45, 0.3, 0.2])?;
    let k = instance.num_arms();
    let budget = 2000;
    println!("SR cumulative pulls per phase {:?}", sr_schedule(k, budget));
    println!(
        "SH (arms, pulls) per phase    {:?}\n",
        sh_schedule(k, budget)
    );

    let runs = 1000;
    for spec in [
        AlgoSpec::new(AlgoName::Sr).with_budget(budget),
        AlgoSpec::new(AlgoName::Sh).with_budget(budget),
        AlgoSpec::new(AlgoName::EbTcFixed).with_slack(0.1),
        AlgoSpec::new(AlgoName::EbTcIds).with_slack(0.1),
    ] {
        let setup = Anytime::new(spec.clone(), instance.clone(), 0.1, budget)
            .with_checkpoints(vec![budget])
            .with_eps_grid(vec![0.0]);
        let traces = run_anytime_batch(&setup, runs, 0, None)?;
        let misses = traces.iter().filter(|t| t.errors[0][0]).count();
        println!(
            "{:<11} P(not best) = {:.3}",
            spec.name.as_str(),
            misses as f64 / runs as f64
        );
    }
    Ok(())
}
