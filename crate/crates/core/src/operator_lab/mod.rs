//! Dense position-basis matrices for the shift operators `e^{±2αP}`, the
//! operators `L_f`, `R_f`, `A_f`, and the q-deformed Heisenberg
//! representation, with residual checks of the identities they satisfy.

mod qheis;
mod suite;

pub use qheis::{
    qheis_equivalence_residual, qheis_equivalence_with, qheis_residuals, qheis_suite, EquivalenceReport,
    QHeisParams, QHeisSuite,
};
pub use suite::{
    adjoint_residual, build_operator_suite, exp_product_residual, hermiticity_residual, shift_formula_residual,
    min_singular_value, scaling_covariance_residual, svd_polar_compare, CovarianceReport, OperatorSuite,
    PolarCompare,
};

use crate::error::{Error, Result};
use crate::strip_core::{fft, ifft, GridSpec, SHIFT_GUARD};
use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

/// A discretized operator with the recipe that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct OpMatrix {
    pub grid: GridSpec,
    pub label: String,
    pub entries: CMatrix,
}

impl OpMatrix {
    pub fn new(grid: GridSpec, label: impl Into<String>, entries: CMatrix) -> Result<Self> {
        if entries.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::Overflow("matrix has non-finite entries".into()));
        }
        Ok(Self { grid, label: label.into(), entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn adjoint(&self) -> CMatrix {
        self.entries.adjoint()
    }
}

/// `‖a − b‖_F / ‖b‖_F`.
pub fn rel_frobenius(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

/// Position-basis matrix of the Fourier multiplier `m(ξ_j)`; it is circulant.
pub fn fourier_multiplier(grid: &GridSpec, m: &[Complex64]) -> CMatrix {
    let n = grid.n;
    let col = ifft(m);
    CMatrix::from_fn(n, n, |k, l| col[(k + n - l) % n])
}

/// `e^{sP}`: multiplier `e^{sξ}`, guarded against overflow.
pub fn exp_p(grid: &GridSpec, s: f64) -> Result<CMatrix> {
    let top = grid.nyquist() * s.abs();
    if top > SHIFT_GUARD {
        return Err(Error::IllPosedContinuation { frequency: grid.nyquist(), exponent: top });
    }
    let m: Vec<Complex64> = grid.freqs().iter().map(|xi| Complex64::new((s * xi).exp(), 0.0)).collect();
    Ok(fourier_multiplier(grid, &m))
}

pub fn diag(values: &[Complex64]) -> CMatrix {
    CMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(values))
}

/// `[[a, b], [c, d]]` from four equal-size blocks.
pub fn block2(a: &CMatrix, b: &CMatrix, c: &CMatrix, d: &CMatrix) -> CMatrix {
    let (r, k) = (a.nrows(), a.ncols());
    let mut m = CMatrix::zeros(r + c.nrows(), k + b.ncols());
    m.view_mut((0, 0), a.shape()).copy_from(a);
    m.view_mut((0, k), b.shape()).copy_from(b);
    m.view_mut((r, 0), c.shape()).copy_from(c);
    m.view_mut((r, k), d.shape()).copy_from(d);
    m
}

pub fn antidiag(b: &CMatrix, c: &CMatrix) -> CMatrix {
    let z = CMatrix::zeros(b.nrows(), b.ncols());
    block2(&z, b, c, &z)
}

pub fn blockdiag(a: &CMatrix, d: &CMatrix) -> CMatrix {
    let zb = CMatrix::zeros(a.nrows(), d.ncols());
    let zc = CMatrix::zeros(d.nrows(), a.ncols());
    block2(a, &zb, &zc, d)
}

/// Reflection `k → (n − k) mod n`, i.e. `η(x) → η(−x)` about the center.
pub fn reflection(n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |k, l| if l == (n - k) % n { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
}

/// Zeroes every frequency outside the central `fraction` of the band.
pub fn band_project(grid: &GridSpec, v: &[Complex64], fraction: f64) -> Vec<Complex64> {
    let mut s = fft(v);
    for (j, c) in s.iter_mut().enumerate() {
        if !grid.in_band(j, fraction) {
            *c = Complex64::new(0.0, 0.0);
        }
    }
    ifft(&s)
}

/// Orthonormal columns `e^{iξ_j x}/√n` for the in-band frequencies.
pub fn band_basis(grid: &GridSpec, fraction: f64) -> CMatrix {
    let n = grid.n;
    let js: Vec<usize> = (0..n).filter(|&j| grid.in_band(j, fraction)).collect();
    let s = 1.0 / (n as f64).sqrt();
    CMatrix::from_fn(n, js.len(), |k, c| {
        Complex64::from_polar(s, 2.0 * std::f64::consts::PI * (js[c] * k) as f64 / n as f64)
    })
}

/// `e^{−γx² + βx}` on the grid, normalized to unit Euclidean norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TestVectorSpec {
    pub gamma: f64,
    pub beta_c: Complex64,
}

impl TestVectorSpec {
    pub fn new(gamma: f64, beta_c: Complex64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidParameter(format!("test vector needs gamma > 0, got {gamma}")));
        }
        Ok(Self { gamma, beta_c })
    }

    pub fn sample(&self, grid: &GridSpec) -> Vec<Complex64> {
        let v: Vec<Complex64> = grid
            .xs()
            .iter()
            .map(|&x| (-self.gamma * x * x + self.beta_c * x).exp())
            .collect();
        let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        v.into_iter().map(|c| c / norm).collect()
    }

    /// A fixed spread of widths and complex exponents.
    pub fn family() -> Vec<TestVectorSpec> {
        let mut out = Vec::new();
        for gamma in [0.05, 0.3, 1.0] {
            for beta in [
                Complex64::new(0.0, 0.0),
                Complex64::new(0.4, 0.0),
                Complex64::new(0.0, 1.5),
                Complex64::new(-0.3, -0.8),
            ] {
                out.push(TestVectorSpec { gamma, beta_c: beta });
            }
        }
        out
    }
}

/// Columns of band-projected test vectors. With `two_blocks`, every vector
/// appears once in each half of the doubled space.
pub fn test_matrix(grid: &GridSpec, fraction: f64, two_blocks: bool) -> CMatrix {
    let fam = TestVectorSpec::family();
    let n = grid.n;
    let cols: Vec<Vec<Complex64>> = fam.iter().map(|t| band_project(grid, &t.sample(grid), fraction)).collect();
    if !two_blocks {
        return CMatrix::from_fn(n, cols.len(), |k, c| cols[c][k]);
    }
    let m = cols.len();
    CMatrix::from_fn(2 * n, 2 * m, |r, c| {
        let (blk, col) = (c / m, c % m);
        if r / n == blk {
            cols[col][r % n]
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}
