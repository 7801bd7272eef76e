//! Phase models for `w2 = e^{iφ2}`: `φ2` is real on the real axis,
//! holomorphic for `|Im z| < 2α`, and `Im φ2(x − 2αi) = log|f(x − αi)|`.
//! Both models normalize `φ2(x_c) = 0` at the window center.

use crate::error::{Error, Result};
use crate::strip_core::{fft, ifft, GridSpec, SHIFT_GUARD};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Relative tolerance for recognizing the boundary lines `y = ±2α`.
const EDGE_TOL: f64 = 1e-12;

/// Fourier coefficients of `φ2` for window-periodic `log|f(x−αi)|`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeSolution {
    pub grid: GridSpec,
    pub alpha: f64,
    /// Linear part: the zero mode of the log-modulus forces `φ2 ∋ slope·z`.
    pub slope: f64,
    /// `i·L̂(ξ)/sinh(2αξ)` in FFT index order; zero at `ξ = 0` and at Nyquist.
    pub phi_hat: Vec<Complex64>,
    /// Nyquist coefficient of the log-modulus, split evenly between `±π/h`.
    pub nyquist: f64,
}

/// Mode-wise solve of `Im φ2(x − 2αi) = L(x)` for periodic `L`.
pub fn solve_fourier_modes(log_modulus: &[f64], grid: GridSpec, alpha: f64) -> Result<ModeSolution> {
    let n = grid.n;
    if log_modulus.len() != n {
        return Err(Error::GridMismatch(format!("{} samples for n = {n}", log_modulus.len())));
    }
    if 2.0 * alpha * grid.nyquist() > SHIFT_GUARD {
        return Err(Error::IllPosedContinuation {
            frequency: grid.nyquist(),
            exponent: 2.0 * alpha * grid.nyquist(),
        });
    }
    let data: Vec<Complex64> = log_modulus.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let lh = fft(&data);
    let half = n / 2;
    let mut phi_hat = vec![Complex64::new(0.0, 0.0); n];
    for j in (1..n).filter(|&j| j != half) {
        let s = (2.0 * alpha * grid.freq(j)).sinh();
        if s.abs() < 1e-12 {
            return Err(Error::Internal(format!("sinh(2αξ) vanishes at index {j}")));
        }
        phi_hat[j] = Complex64::i() * lh[j] / s;
    }
    Ok(ModeSolution {
        grid,
        alpha,
        slope: -lh[0].re / n as f64 / (2.0 * alpha),
        phi_hat,
        nyquist: lh[half].re,
    })
}

impl ModeSolution {
    /// `φ2` on `Im z = y` before normalization at the center.
    fn raw_phase(&self, y: f64) -> Vec<Complex64> {
        let g = &self.grid;
        let n = g.n;
        let shifted: Vec<Complex64> = self
            .phi_hat
            .iter()
            .enumerate()
            .map(|(j, c)| c * (-g.freq(j) * y).exp())
            .collect();
        let mut v = ifft(&shifted);
        let a = 2.0 * self.alpha * g.nyquist();
        let ny = self.nyquist / (2.0 * n as f64) / a.sinh()
            * ((-g.nyquist() * y).exp() - (g.nyquist() * y).exp());
        let xc = g.center();
        for (k, vk) in v.iter_mut().enumerate() {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            *vk += Complex64::new(0.0, sign * ny) + self.slope * Complex64::new(g.x(k) - xc, y);
        }
        v
    }
}

/// Harmonic-extension kernel for non-periodic data:
/// `φ2(z) = −(1/4α) ∫ [tanh(π(z−t)/4α) − tanh(π(x_c−t)/4α)] L(t) dt`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelSolution {
    pub grid: GridSpec,
    pub alpha: f64,
    pub log_modulus: Vec<f64>,
}

pub fn solve_harmonic_kernel(log_modulus: &[f64], grid: GridSpec, alpha: f64) -> Result<KernelSolution> {
    if log_modulus.len() != grid.n {
        return Err(Error::GridMismatch(format!("{} samples for n = {}", log_modulus.len(), grid.n)));
    }
    if !(alpha > 0.0) {
        return Err(Error::InvalidParameter(format!("alpha must be > 0, got {alpha}")));
    }
    Ok(KernelSolution { grid, alpha, log_modulus: log_modulus.to_vec() })
}

/// `tanh` without overflow for large `|Re z|`.
fn tanh_c(z: Complex64) -> Complex64 {
    if z.re < 0.0 {
        return -tanh_c(-z);
    }
    let e = (-2.0 * z).exp();
    (1.0 - e) / (1.0 + e)
}

fn tanh_r(x: f64) -> f64 {
    x.tanh()
}

fn coth_r(x: f64) -> f64 {
    1.0 / x.tanh()
}

impl KernelSolution {
    fn scale(&self) -> f64 {
        PI / (4.0 * self.alpha)
    }

    fn raw_phase(&self, y: f64) -> Result<Vec<Complex64>> {
        let edge = 2.0 * self.alpha;
        if y.abs() > edge * (1.0 + EDGE_TOL) {
            return Err(Error::Domain(format!("line y = {y} outside |y| <= 2α = {edge}")));
        }
        if (y.abs() - edge).abs() <= EDGE_TOL * edge {
            Ok(self.edge_phase(y < 0.0))
        } else {
            Ok(self.interior_phase(y))
        }
    }

    fn interior_phase(&self, y: f64) -> Vec<Complex64> {
        let g = &self.grid;
        let n = g.n as i64;
        let h = g.spacing;
        let s = self.scale();
        let c = g.center_index() as i64;
        // both kernels depend only on the index offset
        let kern: Vec<Complex64> = (-(n - 1)..n).map(|d| tanh_c(s * Complex64::new(d as f64 * h, y))).collect();
        let reference: f64 = (0..n)
            .map(|k| tanh_r(s * (c - k) as f64 * h) * self.log_modulus[k as usize])
            .sum();
        let w = -h / (4.0 * self.alpha);
        (0..n)
            .map(|j| {
                let mut acc = Complex64::new(-reference, 0.0);
                for k in 0..n {
                    acc += kern[(j - k + n - 1) as usize] * self.log_modulus[k as usize];
                }
                w * acc
            })
            .collect()
    }

    /// Principal-value line `y = ∓2α`: odd-offset quadrature of the `coth`
    /// kernel for the real part, the data itself for the imaginary part.
    fn edge_phase(&self, lower: bool) -> Vec<Complex64> {
        let g = &self.grid;
        let n = g.n as i64;
        let h = g.spacing;
        let s = self.scale();
        let c = g.center_index() as i64;
        let w = -2.0 * h / (4.0 * self.alpha);
        (0..n)
            .map(|j| {
                let mut acc = 0.0;
                let mut k = if j % 2 == 0 { 1 } else { 0 };
                while k < n {
                    let kern = coth_r(s * (j - k) as f64 * h) - tanh_r(s * (c - k) as f64 * h);
                    acc += kern * self.log_modulus[k as usize];
                    k += 2;
                }
                let im = self.log_modulus[j as usize];
                Complex64::new(w * acc, if lower { im } else { -im })
            })
            .collect()
    }
}

/// Either phase model behind one interface.
#[derive(Clone, Debug, PartialEq)]
pub enum PhaseModel {
    Spectral(ModeSolution),
    Kernel(KernelSolution),
}

impl PhaseModel {
    pub fn grid(&self) -> &GridSpec {
        match self {
            PhaseModel::Spectral(m) => &m.grid,
            PhaseModel::Kernel(k) => &k.grid,
        }
    }

    pub fn alpha(&self) -> f64 {
        match self {
            PhaseModel::Spectral(m) => m.alpha,
            PhaseModel::Kernel(k) => k.alpha,
        }
    }

    /// `φ2` on `Im z = y`, normalized so that `φ2(x_c) = 0`.
    pub fn phase(&self, y: f64) -> Result<Vec<Complex64>> {
        let edge = 2.0 * self.alpha();
        if y.abs() > edge * (1.0 + EDGE_TOL) {
            return Err(Error::Domain(format!("line y = {y} outside |y| <= 2α = {edge}")));
        }
        let (mut v, offset) = match self {
            PhaseModel::Spectral(m) => (m.raw_phase(y), m.raw_phase(0.0)[m.grid.center_index()].re),
            // the kernel is built to vanish at the center already
            PhaseModel::Kernel(k) => (k.raw_phase(y)?, 0.0),
        };
        v.iter_mut().for_each(|c| *c -= offset);
        Ok(v)
    }

    /// `w2 = e^{iφ2}` on `Im z = y`.
    pub fn w2(&self, y: f64) -> Result<Vec<Complex64>> {
        Ok(self.phase(y)?.into_iter().map(|p| (Complex64::i() * p).exp()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strip_core::AnalyticFnSpec;

    fn log_mod(f: &AnalyticFnSpec, g: &GridSpec, alpha: f64) -> Vec<f64> {
        (0..g.n).map(|k| f.eval(Complex64::new(g.x(k), -alpha)).norm().ln()).collect()
    }

    #[test]
    fn spectral_boundary_condition_is_exact() {
        let g = GridSpec::centered(256, 0.05).unwrap();
        let alpha = 0.1;
        let f = AnalyticFnSpec::ScaledSine(g.mode_frequency(4));
        let l = log_mod(&f, &g, alpha);
        let m = solve_fourier_modes(&l, g, alpha).unwrap();
        let model = PhaseModel::Spectral(m);
        let lower = model.phase(-2.0 * alpha).unwrap();
        let real = model.phase(0.0).unwrap();
        for k in 0..g.n {
            assert!((lower[k].im - l[k]).abs() < 1e-12, "k={k}");
            assert!(real[k].im.abs() < 1e-12);
        }
        assert!(real[g.center_index()].norm() < 1e-15);
    }

    #[test]
    fn nyquist_mode_is_split() {
        // data that is a pure alternating sequence lives entirely at Nyquist
        let g = GridSpec::centered(16, 0.5).unwrap();
        let l: Vec<f64> = (0..16).map(|k| if k % 2 == 0 { 0.3 } else { -0.3 }).collect();
        let m = solve_fourier_modes(&l, g, 0.2).unwrap();
        assert!(m.phi_hat.iter().all(|c| c.norm() == 0.0));
        let model = PhaseModel::Spectral(m);
        let lower = model.phase(-0.4).unwrap();
        let real = model.phase(0.0).unwrap();
        for k in 0..16 {
            assert!((lower[k].im - l[k]).abs() < 1e-14);
            assert!(real[k].norm() < 1e-14);
        }
    }

    #[test]
    fn kernel_matches_spectral_on_periodic_data() {
        let g = GridSpec::centered(512, 0.05).unwrap();
        let alpha = 0.25;
        let f = AnalyticFnSpec::ScaledSine(g.mode_frequency(3));
        let l = log_mod(&f, &g, alpha);
        let a = PhaseModel::Spectral(solve_fourier_modes(&l, g, alpha).unwrap());
        let b = PhaseModel::Kernel(solve_harmonic_kernel(&l, g, alpha).unwrap());
        for y in [0.0, -0.25, 0.3, -0.5, 0.5] {
            let pa = a.phase(y).unwrap();
            let pb = b.phase(y).unwrap();
            let err = g.central_half().map(|k| (pa[k] - pb[k]).norm()).fold(0.0, f64::max);
            // edge lines use a 2h-spaced rule: error ~ e^{-π·α/h}
            assert!(err < 1e-6, "y={y}: {err:e}");
        }
    }

    #[test]
    fn lines_outside_the_strip_are_rejected() {
        let g = GridSpec::centered(64, 0.1).unwrap();
        let l = vec![0.0; 64];
        let m = PhaseModel::Kernel(solve_harmonic_kernel(&l, g, 0.1).unwrap());
        assert!(matches!(m.phase(0.3), Err(Error::Domain(_))));
        let s = PhaseModel::Spectral(solve_fourier_modes(&l, g, 0.1).unwrap());
        assert!(matches!(s.phase(-0.21), Err(Error::Domain(_))));
    }

    #[test]
    fn overflow_safe_tanh() {
        let v = tanh_c(Complex64::new(800.0, 0.3));
        assert!((v - 1.0).norm() < 1e-15);
        let v = tanh_c(Complex64::new(-800.0, 0.3));
        assert!((v + 1.0).norm() < 1e-15);
        let z = Complex64::new(0.4, -0.7);
        assert!((tanh_c(z) - z.tanh()).norm() < 1e-15);
    }
}
