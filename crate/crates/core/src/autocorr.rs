//! Distance histograms: for each `d`, how many pairs of a set differ by `d`.
//!
//! Small sets enumerate pairs directly; large ones go through an FFT
//! autocorrelation of the indicator vector.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::pointset::PointSet;

/// Returns `counts` with `counts[d] = |A ∩ (A - d)|` for `0 < d < n`;
/// `counts[0]` is left at zero.
pub fn distance_counts(a: &PointSet, planner: &mut FftPlanner<f64>) -> Vec<u64> {
    let n = a.n();
    let m = a.len();
    let log_n = n.max(2).ilog2() as usize;
    if m * m <= 16 * n * log_n {
        by_pairs(a)
    } else {
        by_fft(a, planner)
    }
}

pub(crate) fn by_pairs(a: &PointSet) -> Vec<u64> {
    let mut counts = vec![0u64; a.n().max(1)];
    let pts = a.to_vec();
    for (i, &x) in pts.iter().enumerate() {
        for &y in &pts[i + 1..] {
            counts[y - x] += 1;
        }
    }
    counts
}

pub(crate) fn by_fft(a: &PointSet, planner: &mut FftPlanner<f64>) -> Vec<u64> {
    let n = a.n();
    let len = (2 * n).next_power_of_two();
    let mut buf = vec![Complex::new(0.0, 0.0); len];
    for x in a.iter() {
        buf[x - 1].re = 1.0;
    }
    planner.plan_fft_forward(len).process(&mut buf);
    for v in buf.iter_mut() {
        *v = Complex::new(v.norm_sqr(), 0.0);
    }
    planner.plan_fft_inverse(len).process(&mut buf);
    let scale = len as f64;
    let mut counts = vec![0u64; n.max(1)];
    for (d, c) in counts.iter_mut().enumerate().skip(1) {
        *c = (buf[d].re / scale).round().max(0.0) as u64;
    }
    counts
}
