//! Hardness constants of the anytime error bounds.
//!
//! ```text
//! cargo run --example hardness
//! ```

use epsbai::oracle::{hardness_constants, level_bracket};
use epsbai::{generate_instance, InstanceSpec};

fn main() -> epsbai::Result<()> {
    let two_groups = generate_instance(&InstanceSpec::TwoGroups {
        k: 10,
        n_best: 1,
        high: 1.0,
        low: 0.8,
        family: Default::default(),
    })?;
    let h = hardness_constants(two_groups.means(), 0.1, 0.0)?;
    println!(
        "two groups: H_eps = {:.1}, H_1 = {:.1}",
        h.h_eps, h.h_levels[0]
    );

    let mu3 = [0.6, 0.6, 0.55, 0.45, 0.3, 0.2];
    for eps0 in [0.05, 0.1, 0.2] {
        let h = hardness_constants(&mu3, eps0, 0.0)?;
        println!("\nmu3, eps0 = {eps0}: H_eps = {:.1}", h.h_eps);
        for (i, v) in h.h_levels.iter().enumerate() {
            let (lo, hi) = level_bracket(&mu3, eps0, i + 1);
            println!("  H_{} = {v:>10.1}   bracket [{lo:.1}, {hi:.1}]", i + 1);
        }
    }
    Ok(())
}
