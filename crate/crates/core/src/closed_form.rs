//! Closed-form boundary unitaries for `f(z) = z`:
//!
//! `w1(z) = e^{iγz} Δ(βz + 1/4) / Δ(−βz + 1/4)`,
//! `w2(z) = i e^{iγz} Δ(βz + 3/4) / Δ(−βz + 3/4)`,
//! with `β = i/(4α)` and `γ = −log(4α)/(2α)`.

use crate::error::{Error, Result};
use crate::special_fn::{delta_eval, DeltaSettings};
use crate::strip_core::{GridSpec, LineSample};
use num_complex::Complex64;

/// Proximity to a zero or pole that is excluded from ratio checks.
pub const EXCLUSION_RADIUS: f64 = 1e-6;
/// Denominators smaller than this are treated as poles.
const POLE_TOL: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Which {
    W1,
    W2,
}

impl Which {
    /// Offset `1/4` or `3/4` inside the Δ arguments.
    fn shift(self) -> f64 {
        match self {
            Which::W1 => 0.25,
            Which::W2 => 0.75,
        }
    }

    fn prefactor(self) -> Complex64 {
        match self {
            Which::W1 => Complex64::new(1.0, 0.0),
            Which::W2 => Complex64::i(),
        }
    }

    /// `1` for w1, `3` for w2: zeros sit at `(4n + r)αi`.
    fn residue_class(self) -> f64 {
        match self {
            Which::W1 => 1.0,
            Which::W2 => 3.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleParams {
    pub alpha: f64,
    pub beta_c: Complex64,
    pub gamma_c: f64,
}

impl OracleParams {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!("alpha must be > 0, got {alpha}")));
        }
        Ok(Self {
            alpha,
            beta_c: Complex64::new(0.0, 1.0 / (4.0 * alpha)),
            gamma_c: -(4.0 * alpha).ln() / (2.0 * alpha),
        })
    }
}

/// Meromorphic evaluation of `w1` or `w2`.
pub fn oracle_w(which: Which, z: Complex64, p: &OracleParams, s: &DeltaSettings) -> Result<Complex64> {
    let bz = p.beta_c * z;
    let den = delta_eval(-bz + which.shift(), s)?;
    if den.norm() < POLE_TOL {
        return Err(Error::Pole { nearest: nearest_pole(which, z, p) });
    }
    let num = delta_eval(bz + which.shift(), s)?;
    Ok(which.prefactor() * (Complex64::i() * p.gamma_c * z).exp() * num / den)
}

fn nearest_pole(which: Which, z: Complex64, p: &OracleParams) -> Complex64 {
    let r = which.residue_class();
    let n = ((-z.im / p.alpha - r) / 4.0).round().max(0.0);
    Complex64::new(0.0, -(4.0 * n + r) * p.alpha)
}

/// Samples of `w1` or `w2` on the line `Im z = y`.
pub fn oracle_line(which: Which, grid: GridSpec, y: f64, p: &OracleParams, s: &DeltaSettings) -> Result<LineSample> {
    let values = (0..grid.n)
        .map(|k| oracle_w(which, Complex64::new(grid.x(k), y), p, s))
        .collect::<Result<Vec<_>>>()?;
    LineSample::new(grid, y, values)
}

/// Every zero and pole of either function is an odd multiple of `αi`.
fn check_exclusion(z: Complex64, p: &OracleParams) -> Result<()> {
    let k = z.im / p.alpha;
    let odd = 2.0 * ((k - 1.0) / 2.0).round() + 1.0;
    let d = Complex64::new(z.re, z.im - odd * p.alpha).norm();
    if d < EXCLUSION_RADIUS {
        return Err(Error::DomainExclusion { point: z, radius: EXCLUSION_RADIUS });
    }
    Ok(())
}

/// Relative residuals of `w1(z)/w2(z−2αi) = z − αi` and `w2(z)/w1(z−2αi) = z − αi`.
pub fn oracle_ratio_residual(z: Complex64, p: &OracleParams, s: &DeltaSettings) -> Result<(f64, f64)> {
    let down = z - Complex64::new(0.0, 2.0 * p.alpha);
    check_exclusion(z, p)?;
    check_exclusion(down, p)?;
    let target = z - Complex64::new(0.0, p.alpha);
    let rel = |num: Complex64, den: Complex64| (num - target * den).norm() / (target * den).norm();
    let r1 = rel(oracle_w(Which::W1, z, p, s)?, oracle_w(Which::W2, down, p, s)?);
    let r2 = rel(oracle_w(Which::W2, z, p, s)?, oracle_w(Which::W1, down, p, s)?);
    Ok((r1, r2))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroPoleCatalog {
    pub w1_zeros: Vec<Complex64>,
    pub w1_poles: Vec<Complex64>,
    pub w2_zeros: Vec<Complex64>,
    pub w2_poles: Vec<Complex64>,
}

pub fn zero_pole_catalog(p: &OracleParams, n_max: usize) -> ZeroPoleCatalog {
    let prog = |r: f64, sign: f64| -> Vec<Complex64> {
        (0..=n_max)
            .map(|n| Complex64::new(0.0, sign * (4.0 * n as f64 + r) * p.alpha))
            .collect()
    };
    ZeroPoleCatalog {
        w1_zeros: prog(1.0, 1.0),
        w1_poles: prog(1.0, -1.0),
        w2_zeros: prog(3.0, 1.0),
        w2_poles: prog(3.0, -1.0),
    }
}
