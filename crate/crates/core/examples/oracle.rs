//! Characteristic times and optimal allocations.
//!
//! ```text
//! cargo run --example oracle
//! ```

use epsbai::oracle::{solve_bai, solve_bai_beta, solve_eps, solve_eps_multiplicative};

fn show(label: &str, time: f64, weights: &[f64]) {
    let w: Vec<String> = weights.iter().map(|w| format!("{w:.4}")).collect();
    println!("{label:<34} T = {time:>10.4}  w = [{}]", w.join(", "));
}

fn main() -> epsbai::Result<()> {
    let a = solve_bai(&[1.0, 0.0])?;
    show("BAI, (1, 0)", a.time, &a.weights);

    let a = solve_bai(&[1.0, 0.0, 0.0])?;
    show("BAI, (1, 0, 0)", a.time, &a.weights);

    let means = [0.9, 0.7, 0.5, 0.4, 0.1];
    let free = solve_bai(&means)?;
    let half = solve_bai_beta(&means, 0.5)?;
    show("BAI", free.time, &free.weights);
    show("BAI, beta = 1/2", half.time, &half.weights);
    // the beta = 1/2 allocation never costs more than a factor two
    println!("  ratio T_1/2 / T = {:.4}", half.time / free.time);

    // two best arms: plain BAI is ill-posed, eps-BAI is not
    let mu3 = [0.6, 0.6, 0.55, 0.45, 0.3, 0.2];
    for eps in [0.05, 0.1, 0.2] {
        let a = solve_eps(&mu3, eps, None, None)?;
        show(&format!("eps = {eps}"), a.time, &a.weights);
    }
    // any eps-good arm can be the target
    let a = solve_eps(&mu3, 0.1, Some(0.5), Some(2))?;
    show("eps = 0.1, target arm 3, beta 1/2", a.time, &a.weights);

    let a = solve_eps_multiplicative(&[0.6, 0.55, 0.45, 0.3, 0.2], 0.1, None)?;
    show("multiplicative eps = 0.1", a.time, &a.weights);
    println!("  optimal target weight {:.4}", a.weights[0]);
    Ok(())
}
