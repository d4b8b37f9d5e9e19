//! Pure-exploration bandits: Top-Two sampling with a slack (EB-TCε), GLR stopping,
//! optimal-allocation oracles, baselines and a reproducible Monte-Carlo harness.
//!
//! Arms are 0-based in the library API.

pub mod error;
pub mod harness;
pub mod instances;
pub mod oracle;
pub mod rng;
pub mod sampling;
pub mod stopping;
pub mod thresholds;

pub use error::{Error, Result};
pub use instances::{
    eps_good_set, generate_instance, BanditInstance, GapStructure, InstanceSpec, RewardFamily,
};
pub use oracle::{Allocation, HardnessConstants};
pub use sampling::{AlgoSpec, ArmStatistics, Sampler};
pub use stopping::StopDecision;
pub use thresholds::Threshold;
