//! Grid and strip data model, Gaussian-weighted line norms, and spectral
//! continuation of sampled lines.
//!
//! Frequency convention: `ĥ(ξ) = Σ h(x_k) e^{-iξx_k} h`, and a line moved up by
//! `dy` picks up the multiplier `e^{-ξ dy}`. Frequencies follow FFT index order,
//! so index `n/2` carries `ξ = -π/h`.

mod analytic;
mod io;
mod norm;
mod spectral;

pub use analytic::AnalyticFnSpec;
pub use io::{read_csv, write_csv};
pub use norm::{
    boundary_convergence_check, class_membership_estimate, gaussian_weighted_norm, Approach,
    MembershipReport, Verdict,
};
pub use spectral::{analytic_shift, fft, fourier_transform, ifft, shift_multiplier, SHIFT_GUARD};

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::ops::RangeInclusive;

/// The strip `lower < Im z < upper` with the weight parameter `epsilon`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StripDomain {
    pub upper: f64,
    pub lower: f64,
    pub epsilon: f64,
}

impl StripDomain {
    pub fn new(upper: f64, lower: f64, epsilon: f64) -> Result<Self> {
        if !(upper.is_finite() && lower.is_finite() && upper > lower) {
            return Err(Error::InvalidParameter(format!(
                "strip needs upper > lower, got upper={upper}, lower={lower}"
            )));
        }
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!("epsilon must be >= 0, got {epsilon}")));
        }
        Ok(Self { upper, lower, epsilon })
    }

    /// Closed-strip membership of a line offset.
    pub fn contains(&self, y: f64) -> bool {
        y >= self.lower && y <= self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Uniform periodic grid `x_k = origin + k·spacing`, `k = 0..n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGrid")]
pub struct GridSpec {
    pub n: usize,
    pub spacing: f64,
    pub origin: f64,
}

#[derive(Deserialize)]
struct RawGrid {
    n: usize,
    spacing: f64,
    origin: f64,
}

impl TryFrom<RawGrid> for GridSpec {
    type Error = Error;
    fn try_from(r: RawGrid) -> Result<Self> {
        GridSpec::new(r.n, r.spacing, r.origin)
    }
}

impl GridSpec {
    pub fn new(n: usize, spacing: f64, origin: f64) -> Result<Self> {
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::InvalidParameter(format!("n must be a power of two >= 2, got {n}")));
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::InvalidParameter(format!("spacing must be > 0, got {spacing}")));
        }
        if !origin.is_finite() {
            return Err(Error::InvalidParameter(format!("origin must be finite, got {origin}")));
        }
        Ok(Self { n, spacing, origin })
    }

    /// Grid whose middle sample `k = n/2` sits at `x = 0`.
    pub fn centered(n: usize, spacing: f64) -> Result<Self> {
        Self::new(n, spacing, -(n as f64) * spacing / 2.0)
    }

    pub fn x(&self, k: usize) -> f64 {
        self.origin + k as f64 * self.spacing
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.x(k)).collect()
    }

    pub fn length(&self) -> f64 {
        self.n as f64 * self.spacing
    }

    pub fn center_index(&self) -> usize {
        self.n / 2
    }

    pub fn center(&self) -> f64 {
        self.x(self.center_index())
    }

    pub fn freq_step(&self) -> f64 {
        2.0 * PI / self.length()
    }

    /// Signed frequency of FFT index `j`.
    pub fn freq(&self, j: usize) -> f64 {
        let j = j as i64;
        let n = self.n as i64;
        let m = if j < n / 2 { j } else { j - n };
        m as f64 * self.freq_step()
    }

    pub fn freqs(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.freq(j)).collect()
    }

    pub fn nyquist(&self) -> f64 {
        PI / self.spacing
    }

    /// Indices with `|x_k - center| <= length/4`.
    pub fn central_half(&self) -> RangeInclusive<usize> {
        self.n / 4..=3 * self.n / 4
    }

    /// Whether FFT index `j` lies in the central `fraction` of the band.
    pub fn in_band(&self, j: usize, fraction: f64) -> bool {
        self.freq(j).abs() <= fraction * self.nyquist() * (1.0 + 1e-12)
    }

    /// Frequency `2πm/L` of mode index `m`.
    pub fn mode_frequency(&self, m: i64) -> f64 {
        m as f64 * self.freq_step()
    }

    pub fn compatible(&self, other: &GridSpec) -> bool {
        self.n == other.n
            && (self.spacing - other.spacing).abs() <= 1e-14 * self.spacing
            && (self.origin - other.origin).abs() <= 1e-12 * self.length()
    }

    pub fn require_compatible(&self, other: &GridSpec) -> Result<()> {
        if self.compatible(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!("{self:?} vs {other:?}")))
        }
    }
}

/// Values `h(x_k + i·offset_y)` on one horizontal line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineSample {
    pub grid: GridSpec,
    pub offset_y: f64,
    #[serde(with = "crate::json::complex_pairs")]
    pub values: Vec<Complex64>,
}

impl LineSample {
    pub fn new(grid: GridSpec, offset_y: f64, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n {
            return Err(Error::InvalidParameter(format!(
                "line has {} values for a grid of {}",
                values.len(),
                grid.n
            )));
        }
        Ok(Self { grid, offset_y, values })
    }

    pub fn from_fn(grid: GridSpec, offset_y: f64, f: impl Fn(Complex64) -> Complex64) -> Self {
        let values = (0..grid.n)
            .map(|k| f(Complex64::new(grid.x(k), offset_y)))
            .collect();
        Self { grid, offset_y, values }
    }

    /// Max of `|a - b|` over the central half-window.
    pub fn central_max_diff(&self, other: &LineSample) -> f64 {
        self.grid
            .central_half()
            .map(|k| (self.values[k] - other.values[k]).norm())
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> String {
        crate::json::to_string(self).expect("line sample serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let line: LineSample =
            serde_json::from_str(s).map_err(|e| Error::Io(format!("line json: {e}")))?;
        LineSample::new(line.grid, line.offset_y, line.values)
    }
}

/// Samples `f` on the line `Im z = offset_y`.
pub fn sample_line(f: &AnalyticFnSpec, grid: GridSpec, offset_y: f64) -> LineSample {
    LineSample::from_fn(grid, offset_y, |z| f.eval(z))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(GridSpec::new(6, 1.0, 0.0).is_err());
        assert!(GridSpec::new(8, 0.0, 0.0).is_err());
        assert!(GridSpec::new(8, 1.0, f64::NAN).is_err());
        let g = GridSpec::centered(8, 0.5).unwrap();
        assert_eq!(g.center(), 0.0);
        assert_eq!(g.length(), 4.0);
    }

    #[test]
    fn frequency_order() {
        let g = GridSpec::new(8, 1.0, 0.0).unwrap();
        let d = g.freq_step();
        let f: Vec<f64> = g.freqs().iter().map(|x| (x / d).round()).collect();
        assert_eq!(f, vec![0.0, 1.0, 2.0, 3.0, -4.0, -3.0, -2.0, -1.0]);
        assert!((g.freq(4).abs() - g.nyquist()).abs() < 1e-12);
    }

    #[test]
    fn central_half_bounds() {
        let g = GridSpec::centered(16, 1.0).unwrap();
        let r = g.central_half();
        assert_eq!((*r.start(), *r.end()), (4, 12));
        assert!((g.x(4) + 4.0).abs() < 1e-15 && (g.x(12) - 4.0).abs() < 1e-15);
    }

    #[test]
    fn strip_validation() {
        assert!(StripDomain::new(1.0, 1.0, 0.0).is_err());
        assert!(StripDomain::new(1.0, -1.0, -0.1).is_err());
        let d = StripDomain::new(1.0, -1.0, 0.0).unwrap();
        assert!(d.contains(1.0) && d.contains(-1.0) && !d.contains(1.1));
    }

    #[test]
    fn sample_identity() {
        let g = GridSpec::new(4, 1.0, 0.0).unwrap();
        let s = sample_line(&AnalyticFnSpec::Identity, g, 0.0);
        let re: Vec<f64> = s.values.iter().map(|c| c.re).collect();
        assert_eq!(re, vec![0.0, 1.0, 2.0, 3.0]);
        assert!(s.values.iter().all(|c| c.im == 0.0));
    }

    #[test]
    fn sample_constant_and_sine() {
        let g = GridSpec::centered(8, 0.3).unwrap();
        let s = sample_line(&AnalyticFnSpec::Constant(Complex64::new(1.0, 0.0)), g, 0.7);
        assert!(s.values.iter().all(|c| *c == Complex64::new(1.0, 0.0)));
        let v = AnalyticFnSpec::ScaledSine(1.0).eval(Complex64::new(0.0, -0.5));
        assert!(v.re.abs() < 1e-16);
        assert!((v.im + 2.0 * 0.5f64.sinh()).abs() < 1e-15);
        assert!((v.im + 1.0421906109874948).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let g = GridSpec::centered(8, 0.25).unwrap();
        let s = sample_line(&AnalyticFnSpec::ScaledSine(0.7), g, -0.2);
        let back = LineSample::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
        assert!(LineSample::from_json(r#"{"grid":{"n":3,"spacing":1,"origin":0},"offset_y":0,"values":[]}"#).is_err());
    }
}
