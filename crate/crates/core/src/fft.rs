//! Centered, Riemann-normalized discrete Fourier transforms on rustfft.

use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(len)
        } else {
            p.plan_fft_forward(len)
        }
    })
}

#[inline]
fn sign(k: usize) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// In-place centered transform.
///
/// Sample `j` sits at `(j - M/2)·h`, output bin `k` at `(k - M/2)/(M·h)`:
/// `out[k] = h · Σ_j v[j] exp(∓2πi (j-M/2)(k-M/2)/M)` (minus for forward).
pub(crate) fn centered_in_place(values: &mut [Complex64], step: f64, inverse: bool) {
    let m = values.len();
    if m == 0 {
        return;
    }
    for (j, v) in values.iter_mut().enumerate() {
        if j % 2 == 1 {
            *v = -*v;
        }
    }
    plan(m, inverse).process(values);
    let global = sign(m / 2) * step;
    for (k, v) in values.iter_mut().enumerate() {
        *v *= global * sign(k);
    }
}

pub(crate) fn centered(values: &[Complex64], step: f64, inverse: bool) -> Vec<Complex64> {
    let mut out = values.to_vec();
    centered_in_place(&mut out, step, inverse);
    out
}

/// Plain (uncentered, unnormalized) FFT used for periodic index-space work.
pub(crate) fn raw_in_place(values: &mut [Complex64], inverse: bool) {
    if values.is_empty() {
        return;
    }
    plan(values.len(), inverse).process(values);
}

/// Values of a periodic sequence at `j + dir/2` (`dir = ±1`) by
/// trigonometric interpolation. The Nyquist mode is taken at frequency
/// `+M/2` in both directions, so shifts by `+1/2` and `-1/2` are exact
/// inverses of each other.
pub(crate) fn half_shift(values: &[Complex64], dir: f64) -> Vec<Complex64> {
    let m = values.len();
    let mut buf = values.to_vec();
    raw_in_place(&mut buf, false);
    for (k, v) in buf.iter_mut().enumerate() {
        let freq = if k <= m / 2 { k as f64 } else { k as f64 - m as f64 };
        *v *= Complex64::from_polar(1.0, dir * std::f64::consts::PI * freq / m as f64);
    }
    raw_in_place(&mut buf, true);
    let inv = 1.0 / m as f64;
    buf.iter_mut().for_each(|v| *v *= inv);
    buf
}

/// Table `e^{sign·2πi r/M}` for `r = 0..M`.
pub(crate) fn twiddles(m: usize, sign: f64) -> Vec<Complex64> {
    (0..m)
        .map(|r| Complex64::from_polar(1.0, sign * 2.0 * std::f64::consts::PI * r as f64 / m as f64))
        .collect()
}
