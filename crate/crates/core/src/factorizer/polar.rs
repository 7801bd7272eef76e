use super::pair::FactorPair;
use crate::closed_form::Which;
use crate::error::{Error, Result};
use crate::strip_core::{AnalyticFnSpec, LineSample};
use num_complex::Complex64;

/// `u_f(z) = w1(z) w̄2(z)` and `g_f(z) = w2(z+αi) w̄2(z−αi)` on the lines
/// needed for `f(x) = u_f(x+αi) g_f(x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolarDecomposition {
    pub u_real: LineSample,
    pub u_upper: LineSample,
    pub g_real: LineSample,
    pub g_lower: LineSample,
    /// `max |f − u_f(·+αi) g_f|` over the central half, relative to `max |f|` there.
    pub recon_residual: f64,
}

fn product(a: &LineSample, b: &LineSample, y: f64) -> Result<LineSample> {
    let v = a.values.iter().zip(&b.values).map(|(x, z)| x * z.conj()).collect();
    LineSample::new(a.grid, y, v)
}

pub fn polar_decompose(pair: &FactorPair, f: &AnalyticFnSpec, alpha: f64) -> Result<PolarDecomposition> {
    if (alpha - pair.alpha).abs() > 1e-14 * alpha.abs().max(1.0) {
        return Err(Error::InvalidParameter(format!("pair built for α = {}, asked for α = {alpha}", pair.alpha)));
    }
    let g = pair.grid;
    let w1_0 = pair.line(Which::W1, 0.0)?;
    let w2_0 = pair.line(Which::W2, 0.0)?;
    let w1_up = pair.line(Which::W1, alpha)?;
    let w2_up = pair.line(Which::W2, alpha)?;
    let w2_down = pair.line(Which::W2, -alpha)?;
    let w2_top = pair.line(Which::W2, 2.0 * alpha)?;

    let u_real = product(&w1_0, &w2_0, 0.0)?;
    let u_upper = product(&w1_up, &w2_down, alpha)?;
    let g_real = product(&w2_up, &w2_up, 0.0)?;
    let g_lower = product(&w2_0, &w2_top, -alpha)?;

    let mut err = 0.0f64;
    let mut scale = 0.0f64;
    for k in g.central_half() {
        let fx = f.eval(Complex64::new(g.x(k), 0.0));
        err = err.max((fx - u_upper.values[k] * g_real.values[k]).norm());
        scale = scale.max(fx.norm());
    }
    Ok(PolarDecomposition { u_real, u_upper, g_real, g_lower, recon_residual: err / scale.max(1e-300) })
}
