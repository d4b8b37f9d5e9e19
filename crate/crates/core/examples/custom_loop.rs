//! Driving a sampler by hand: select, observe, check the GLR stopping rule.
//! Useful when rewards come from somewhere other than the built-in simulator.
//!
//! ```text
//! cargo run --example custom_loop
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use epsbai::sampling::{AlgoName, AlgoSpec, BuildContext};
use epsbai::stopping::glr_check;
use epsbai::thresholds::Threshold;
use epsbai::ArmStatistics;

fn main() -> epsbai::Result<()> {
    let means = [0.5, 0.45, 0.3, 0.1];
    let eps = 0.1;
    let threshold = Threshold::heuristic(0.05)?;
    let ctx = BuildContext {
        k: means.len(),
        epsilon: eps,
        threshold,
        budget: 1_000_000,
    };
    let mut sampler = AlgoSpec::new(AlgoName::EbTcIds).build(&ctx, 3)?;
    let mut stats = ArmStatistics::new(means.len());
    let mut rng = ChaCha8Rng::seed_from_u64(11);

    loop {
        let arm = sampler.select(&stats);
        let reward = Normal::new(means[arm], 1.0).unwrap().sample(&mut rng);
        sampler.update(arm, reward, &stats);
        stats.record(arm, reward);
        if !stats.all_pulled() {
            continue;
        }
        let d = glr_check(&stats, eps, &threshold)?;
        if stats.total() % 50 == 0 || d.stop {
            println!(
                "n = {:>4}  leader {}  statistic {:>6.3}  threshold {:>6.3}  counts {:?}",
                stats.total(),
                d.leader + 1,
                d.statistic,
                d.threshold,
                stats.counts()
            );
        }
        if d.stop {
            println!("stopped, recommending arm {}", d.leader + 1);
            break;
        }
    }
    Ok(())
}
