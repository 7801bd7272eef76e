use super::{GridSpec, LineSample};
use crate::error::{Error, Result};
use num_complex::Complex64;
use rustfft::FftPlanner;

/// Largest admissible `|ξ·dy|` for a continuation multiplier.
pub const SHIFT_GUARD: f64 = 700.0;

/// Unnormalized forward DFT, `X_j = Σ x_k e^{-2πijk/n}`.
pub fn fft(v: &[Complex64]) -> Vec<Complex64> {
    let mut buf = v.to_vec();
    FftPlanner::new().plan_fft_forward(buf.len()).process(&mut buf);
    buf
}

/// Inverse DFT including the `1/n` factor.
pub fn ifft(v: &[Complex64]) -> Vec<Complex64> {
    let mut buf = v.to_vec();
    FftPlanner::new().plan_fft_inverse(buf.len()).process(&mut buf);
    let s = 1.0 / buf.len() as f64;
    buf.iter_mut().for_each(|c| *c *= s);
    buf
}

/// `ĥ(ξ_j) = Σ h(x_k) e^{-iξ_j x_k} h`, in FFT index order.
pub fn fourier_transform(line: &LineSample) -> Vec<Complex64> {
    let g = &line.grid;
    fft(&line.values)
        .into_iter()
        .enumerate()
        .map(|(j, c)| c * Complex64::from_polar(g.spacing, -g.freq(j) * g.origin))
        .collect()
}

/// Multipliers `e^{-ξ_j dy}`, or the offending frequency if the guard trips.
pub fn shift_multiplier(grid: &GridSpec, dy: f64) -> Result<Vec<f64>> {
    let freqs = grid.freqs();
    if let Some(&xi) = freqs
        .iter()
        .filter(|xi| (*xi * dy).abs() > SHIFT_GUARD)
        .max_by(|a, b| a.abs().total_cmp(&b.abs()))
    {
        return Err(Error::IllPosedContinuation { frequency: xi, exponent: (xi * dy).abs() });
    }
    Ok(freqs.iter().map(|xi| (-xi * dy).exp()).collect())
}

/// Moves a sampled line to `offset_y + dy` with the multiplier `e^{-ξ dy}`.
pub fn analytic_shift(line: &LineSample, dy: f64) -> Result<LineSample> {
    if dy == 0.0 {
        return Ok(line.clone());
    }
    let mult = shift_multiplier(&line.grid, dy)?;
    let mut spec = fft(&line.values);
    spec.iter_mut().zip(&mult).for_each(|(c, m)| *c *= m);
    LineSample::new(line.grid, line.offset_y + dy, ifft(&spec))
}
