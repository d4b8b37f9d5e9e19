//! Stopping thresholds: the proven mixture-martingale threshold, the heuristic one,
//! and the special functions they rely on.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bernoulli numbers B_2, B_4, ..., B_16.
const BERNOULLI_EVEN: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

/// Riemann zeta for real `s > 1`, by Euler-Maclaurin summation.
pub fn zeta(s: f64) -> f64 {
    if s <= 1.0 {
        return f64::INFINITY;
    }
    const N: usize = 12;
    let n = N as f64;
    let mut sum: f64 = (1..N).map(|k| (k as f64).powf(-s)).sum();
    sum += n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    // rising factorial s(s+1)...(s+2j-2) divided by (2j)!, times N^{-s-2j+1}
    let mut coeff = s / 2.0;
    let mut power = n.powf(-s - 1.0);
    for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
        let term = b * coeff * power;
        sum += term;
        if term.abs() < 1e-17 * sum {
            break;
        }
        let j2 = 2.0 * (j as f64 + 1.0);
        coeff *= (s + j2 - 1.0) * (s + j2) / ((j2 + 1.0) * (j2 + 2.0));
        power /= n * n;
    }
    sum
}

/// The unique `w >= 1` with `w - ln w = x`.
pub fn lambert_wbar(x: f64) -> Result<f64> {
    if !(x >= 1.0) || !x.is_finite() {
        return Err(Error::Domain {
            what: "lambert_wbar argument",
            value: x,
        });
    }
    if x == 1.0 {
        return Ok(1.0);
    }
    let f = |w: f64| w - w.ln() - x;
    let mut lo = x + x.ln();
    let mut hi = lo + 0.5_f64.min(1.0 / x.sqrt());
    if f(lo) >= 0.0 {
        return Ok(lo);
    }
    while hi - lo > 1e-12 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `g_G(lambda) = 2 lambda - 2 lambda ln(4 lambda) + ln zeta(2 lambda) - ln(1 - lambda) / 2`.
pub fn g_gaussian(lambda: f64) -> f64 {
    if !(lambda > 0.5 && lambda < 1.0) {
        return f64::INFINITY;
    }
    2.0 * lambda - 2.0 * lambda * (4.0 * lambda).ln() + zeta(2.0 * lambda).ln()
        - 0.5 * (1.0 - lambda).ln()
}

fn c_objective(lambda: f64, x: f64) -> f64 {
    (g_gaussian(lambda) + x) / lambda
}

/// `min_{lambda in (1/2, 1]} (g_G(lambda) + x) / lambda`.
pub fn c_gaussian(x: f64) -> f64 {
    const LO: f64 = 0.5 + 1e-9;
    const HI: f64 = 1.0 - 1e-9;
    const STEP: f64 = 1e-3;

    let mut best = (f64::INFINITY, 0.75);
    let mut lambda = 0.5 + STEP;
    while lambda < 1.0 {
        let v = c_objective(lambda, x);
        if v < best.0 {
            best = (v, lambda);
        }
        lambda += STEP;
    }
    let mut a = (best.1 - STEP).max(LO);
    let mut b = (best.1 + STEP).min(HI);

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = c_objective(c, x);
    let mut fd = c_objective(d, x);
    while b - a > 1e-13 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = c_objective(c, x);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = c_objective(d, x);
        }
    }
    fc.min(fd).min(best.0)
}

/// Stopping threshold `c(n, delta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    /// `2 C_G(ln((K-1)/delta)/2) + 4 ln(4 + ln(n/2))`. The first term is cached.
    Proven { k: usize, delta: f64, base: f64 },
    /// `ln((1 + ln n)/delta)`.
    Heuristic { delta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThresholdKind {
    #[default]
    Heuristic,
    Proven,
}

impl std::fmt::Display for ThresholdKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ThresholdKind::Heuristic => "heuristic",
            ThresholdKind::Proven => "proven",
        })
    }
}

impl std::str::FromStr for ThresholdKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "heuristic" => Ok(ThresholdKind::Heuristic),
            "proven" => Ok(ThresholdKind::Proven),
            other => Err(Error::invalid(format!(
                "unknown threshold {other:?}, expected heuristic or proven"
            ))),
        }
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain {
            what: "delta",
            value: delta,
        });
    }
    Ok(())
}

impl Threshold {
    pub fn heuristic(delta: f64) -> Result<Self> {
        check_delta(delta)?;
        Ok(Threshold::Heuristic { delta })
    }

    pub fn proven(k: usize, delta: f64) -> Result<Self> {
        check_delta(delta)?;
        if k < 2 {
            return Err(Error::invalid(format!("K must be at least 2, got {k}")));
        }
        let base = 2.0 * c_gaussian(((k as f64 - 1.0) / delta).ln() / 2.0);
        Ok(Threshold::Proven { k, delta, base })
    }

    pub fn new(kind: ThresholdKind, k: usize, delta: f64) -> Result<Self> {
        match kind {
            ThresholdKind::Heuristic => Self::heuristic(delta),
            ThresholdKind::Proven => Self::proven(k, delta),
        }
    }

    pub fn kind(&self) -> ThresholdKind {
        match self {
            Threshold::Proven { .. } => ThresholdKind::Proven,
            Threshold::Heuristic { .. } => ThresholdKind::Heuristic,
        }
    }

    pub fn delta(&self) -> f64 {
        match *self {
            Threshold::Proven { delta, .. } | Threshold::Heuristic { delta } => delta,
        }
    }

    /// `c(n, delta)`; requires `n >= 2`.
    pub fn value(&self, n: u64) -> Result<f64> {
        if n < 2 {
            return Err(Error::Domain {
                what: "threshold time index",
                value: n as f64,
            });
        }
        let n = n as f64;
        Ok(match *self {
            Threshold::Proven { base, .. } => base + 4.0 * (4.0 + (n / 2.0).ln()).ln(),
            Threshold::Heuristic { delta } => ((1.0 + n.ln()) / delta).ln(),
        })
    }
}
