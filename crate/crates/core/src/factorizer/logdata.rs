use crate::error::{Error, Result};
use crate::strip_core::{AnalyticFnSpec, GridSpec};
use num_complex::Complex64;

/// Smallest `|f|` accepted on either boundary line.
pub const ADMISSIBILITY_FLOOR: f64 = 1e-8;

/// Continuous-branch logarithms of `f(x−αi)` and `f̄(x−αi)` on the grid.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryLogData {
    pub grid: GridSpec,
    pub alpha: f64,
    pub a_minus: Vec<Complex64>,
    pub b_plus: Vec<Complex64>,
    /// Net phase increase of `a_minus` across the window.
    pub winding_minus: f64,
    /// Net phase increase of `b_plus` across the window.
    pub winding_plus: f64,
}

impl BoundaryLogData {
    /// `log |f(x−αi)|`, the only input the solvers consume.
    pub fn log_modulus(&self) -> Vec<f64> {
        self.a_minus.iter().map(|a| a.re).collect()
    }
}

/// Principal log at the first sample, then phase increments of at most π.
pub fn unwrap_log(values: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(values.len());
    let mut phase = 0.0;
    for (k, v) in values.iter().enumerate() {
        phase = if k == 0 { v.arg() } else { phase + (v / values[k - 1]).arg() };
        out.push(Complex64::new(v.norm().ln(), phase));
    }
    out
}

pub fn boundary_log_data(f: &AnalyticFnSpec, alpha: f64, grid: GridSpec) -> Result<BoundaryLogData> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!("alpha must be >= 0, got {alpha}")));
    }
    for line in [-alpha, alpha] {
        let (m, x) = f.inf_on_line(&grid, line);
        if !(m >= ADMISSIBILITY_FLOOR) {
            return Err(Error::Admissibility { line, x, modulus: m });
        }
    }
    let lower: Vec<Complex64> = (0..grid.n).map(|k| f.eval(Complex64::new(grid.x(k), -alpha))).collect();
    let fbar = f.conjugate();
    let conj_lower: Vec<Complex64> = (0..grid.n).map(|k| fbar.eval(Complex64::new(grid.x(k), -alpha))).collect();
    let a_minus = unwrap_log(&lower);
    let b_plus = unwrap_log(&conj_lower);
    let winding = |v: &[Complex64]| v[v.len() - 1].im - v[0].im;
    Ok(BoundaryLogData {
        grid,
        alpha,
        winding_minus: winding(&a_minus),
        winding_plus: winding(&b_plus),
        a_minus,
        b_plus,
    })
}
