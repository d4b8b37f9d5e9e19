//! Stopping thresholds and the special functions behind them.
//!
//! ```text
//! cargo run --example thresholds
//! ```

use epsbai::thresholds::{c_gaussian, lambert_wbar, zeta, Threshold};

fn main() -> epsbai::Result<()> {
    println!(
        "zeta(2) = {:.12} (pi^2/6 = {:.12})",
        zeta(2.0),
        std::f64::consts::PI.powi(2) / 6.0
    );
    for x in [1.0, 2.0, 10.0, 1e3] {
        let w = lambert_wbar(x)?;
        println!("W(-1) bar at {x:>6}: {w:.8}   x + ln x = {:.8}", x + x.ln());
    }
    for x in [0.5, 1.0, 5.0, 20.0, 100.0] {
        println!("C_G({x:>5}) = {:.8}", c_gaussian(x));
    }

    let k = 10;
    println!(
        "\n{:>10} {:>12} {:>12} {:>12}",
        "n", "heuristic", "proven", "delta"
    );
    for delta in [1e-2, 1e-4] {
        let h = Threshold::heuristic(delta)?;
        let p = Threshold::proven(k, delta)?;
        for n in [100u64, 10_000, 1_000_000] {
            println!(
                "{n:>10} {:>12.4} {:>12.4} {delta:>12}",
                h.value(n)?,
                p.value(n)?
            );
        }
    }
    Ok(())
}
