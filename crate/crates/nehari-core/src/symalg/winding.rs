//! Winding numbers of nonvanishing scalar symbols.

use crate::error::{Error, Result};
use crate::symalg::grid::GridSymbol;
use crate::{tol, C64};

/// Winding number from samples along the circle, in grid order.
///
/// Requires `min |f| > CIRCLE_MIN_REL * max |f|` and consecutive phase
/// increments below `pi/2`; otherwise the sampling is too coarse to certify
/// the count and the call fails with `ResolutionFailure`.
pub fn winding_from_samples(samples: &[C64]) -> Result<i64> {
    if samples.len() < 4 {
        return Err(Error::invalid("winding: need at least 4 samples"));
    }
    let max = samples.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let min = samples.iter().map(|c| c.norm()).fold(f64::INFINITY, f64::min);
    if !(min > tol::CIRCLE_MIN_REL * max) || max == 0.0 {
        return Err(Error::NotInvertibleOnCircle(format!(
            "winding: min |f| = {min:.3e}, max |f| = {max:.3e}"
        )));
    }
    let mut total = 0.0f64;
    let n = samples.len();
    for j in 0..n {
        let a = samples[j];
        let b = samples[(j + 1) % n];
        let inc = (b / a).arg();
        if inc.abs() >= std::f64::consts::FRAC_PI_2 {
            return Err(Error::ResolutionFailure(format!(
                "winding: phase increment {inc:.3} at sample {j} exceeds pi/2"
            )));
        }
        total += inc;
    }
    let w = total / (2.0 * std::f64::consts::PI);
    let rounded = w.round();
    if (w - rounded).abs() > 1e-6 {
        return Err(Error::InternalInconsistency(format!(
            "winding: accumulated phase {w} is not close to an integer"
        )));
    }
    Ok(rounded as i64)
}

/// Winding number of a scalar grid symbol (no refinement possible).
pub fn winding_number_grid(f: &GridSymbol) -> Result<i64> {
    winding_from_samples(&f.scalar_samples()?)
}

/// Winding number with adaptive dyadic refinement: the sampler is asked for
/// progressively finer grids until the phase increments certify the count or
/// the cap `GRID_CAP` is reached.
pub fn winding_number_adaptive<F>(sample: F, start: usize) -> Result<i64>
where
    F: Fn(usize) -> Result<Vec<C64>>,
{
    let mut n = start.max(tol::GRID_MIN).next_power_of_two();
    loop {
        match winding_from_samples(&sample(n)?) {
            Ok(w) => return Ok(w),
            Err(Error::ResolutionFailure(_)) if n < tol::GRID_CAP => {
                n *= 2;
            }
            Err(e) => return Err(e),
        }
    }
}
