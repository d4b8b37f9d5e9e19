//! Root of a convex decreasing function on `(pole, +inf)` that blows up at the pole.

use crate::error::{Error, Result};

const MAX_BISECTIONS: usize = 200;
const MAX_DOUBLINGS: usize = 2000;
const NEWTON_STEPS: usize = 8;
pub(crate) const TOLERANCE: f64 = 1e-12;

/// Brackets the root between `pole (1 + 1e-9)` and a doubled upper point, bisects,
/// then polishes with Newton steps kept inside the bracket.
pub(crate) fn decreasing_root(
    f: impl Fn(f64) -> f64,
    df: impl Fn(f64) -> f64,
    pole: f64,
) -> Result<f64> {
    let mut lo = pole * (1.0 + 1e-9);
    let mut shrink = 0;
    while f(lo) < 0.0 {
        // root even closer to the pole than the default lower bracket
        lo = pole + 0.5 * (lo - pole);
        shrink += 1;
        if shrink > 200 || lo <= pole {
            return Err(Error::NonConvergence { iterations: shrink });
        }
    }
    let mut hi = pole + 1.0;
    let mut doublings = 0;
    while f(hi) > 0.0 {
        hi *= 2.0;
        doublings += 1;
        if doublings > MAX_DOUBLINGS || !hi.is_finite() {
            return Err(Error::NonConvergence {
                iterations: doublings,
            });
        }
    }

    let mut r = 0.5 * (lo + hi);
    let mut fr = f(r);
    for _ in 0..MAX_BISECTIONS {
        if fr.abs() <= TOLERANCE {
            break;
        }
        if fr > 0.0 {
            lo = r;
        } else {
            hi = r;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        r = mid;
        fr = f(r);
    }
    for _ in 0..NEWTON_STEPS {
        if fr == 0.0 {
            break;
        }
        let d = df(r);
        if !(d < 0.0) {
            break;
        }
        let next = r - fr / d;
        if !(next > lo && next < hi) {
            break;
        }
        let fnext = f(next);
        if fnext.abs() >= fr.abs() {
            break;
        }
        r = next;
        fr = fnext;
    }
    if fr.abs() <= TOLERANCE || hi - lo <= 4.0 * f64::EPSILON * hi {
        Ok(r)
    } else {
        Err(Error::NonConvergence {
            iterations: MAX_BISECTIONS,
        })
    }
}
