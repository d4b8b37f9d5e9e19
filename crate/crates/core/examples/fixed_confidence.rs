//! Fixed-confidence identification: one traced run, then a small comparison across
//! sampling rules on the same instance.
//!
//! ```text
//! cargo run --release --example fixed_confidence
//! ```

use epsbai::harness::{run_fc_batch, FixedConfidence};
use epsbai::oracle::solve_eps;
use epsbai::sampling::{AlgoName, AlgoSpec};
use epsbai::thresholds::Threshold;
use epsbai::{generate_instance, InstanceSpec};

fn main() -> epsbai::Result<()> {
    let instance = generate_instance(&InstanceSpec::Alpha {
        k: 10,
        alpha: 0.3,
        family: Default::default(),
    })?;
    let (eps, delta) = (0.1, 0.01);
    let threshold = Threshold::heuristic(delta)?;
    println!("means {:?}", instance.means());

    let t = solve_eps(instance.means(), eps, None, None)?.time;
    println!(
        "T_eps = {t:.2}, so roughly T ln(1/delta) = {:.0} samples\n",
        t * (1.0 / delta).ln()
    );

    let setup = FixedConfidence::new(
        AlgoSpec::new(AlgoName::EbTcIds),
        instance.clone(),
        eps,
        threshold,
    );
    let r = setup.run(0, 7)?;
    println!(
        "single run: tau = {}, recommended arm {}, correct = {}\n",
        r.tau,
        r.recommended + 1,
        r.correct
    );

    let runs = 50;
    for name in [
        AlgoName::EbTcIds,
        AlgoName::EbTcFixed,
        AlgoName::T3c,
        AlgoName::EbTci,
        AlgoName::Ttucb,
        AlgoName::Tas,
        AlgoName::Lucb,
        AlgoName::Uniform,
    ] {
        let setup = FixedConfidence::new(AlgoSpec::new(name), instance.clone(), eps, threshold);
        let records = run_fc_batch(&setup, runs, 0, None)?;
        let mean = records.iter().map(|r| r.tau as f64).sum::<f64>() / runs as f64;
        let errors = records.iter().filter(|r| !r.correct).count();
        println!(
            "{:<10} mean tau {mean:>8.1}   errors {errors}/{runs}",
            name.as_str()
        );
    }
    Ok(())
}
