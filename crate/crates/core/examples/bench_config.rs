//! Batch experiment from a JSON config, the same format `epsbai bench` reads.
//!
//! ```text
//! cargo run --release --example bench_config
//! cargo run --release --example bench_config -- presets/mu3_anytime.json
//! ```

use epsbai::harness::{monte_carlo, ExperimentConfig};

const INLINE: &str = r#"{
    "experiment": "fc",
    "instance": {"kind": "explicit", "means": [0.7, 0.55, 0.5, 0.4, 0.2]},
    "algo": [{"name": "ebtc-ids"}, {"name": "ebtc-ids", "slack": 0.05}, {"name": "t3c"}],
    "epsilon": 0.1,
    "delta": 0.01,
    "threshold": "heuristic",
    "runs": 200,
    "base_seed": 1
}"#;

fn main() -> epsbai::Result<()> {
    let config = match std::env::args().nth(1) {
        Some(path) => {
            let mut cfg = ExperimentConfig::load(path.as_ref())?;
            // keep the example quick and side-effect free
            cfg.runs = cfg.runs.min(100);
            cfg.out = None;
            cfg
        }
        None => serde_json::from_str(INLINE).map_err(|e| epsbai::Error::Config(e.to_string()))?,
    };
    let out = monte_carlo(&config)?;
    for s in &out.summaries {
        println!(
            "{:<22} {:<24} mean {:>10.4}  std {:>9.4}  median {:>9.4}  n {}",
            s.algo, s.metric, s.mean, s.std, s.q50, s.n
        );
    }
    Ok(())
}
