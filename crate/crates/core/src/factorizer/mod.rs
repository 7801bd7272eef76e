//! Construction of the boundary unitaries `w1`, `w2` for admissible `f`, and
//! the polar decomposition `f(z) = u_f(z+αi) g_f(z)` built from them.
//!
//! Writing `w2 = e^{iφ2}` with `φ2` real on the axis, the relation
//! `w1(x) = f(x−αi) w2(x−2αi)` has unimodular left side exactly when
//! `Im φ2(x−2αi) = log|f(x−αi)|`. That is a Dirichlet-type problem on the
//! strip `|Im z| < 2α`, solved per Fourier mode for window-periodic data and
//! with a `tanh` kernel otherwise. `w1` then follows from the relation itself.

mod logdata;
mod pair;
mod phase;
mod polar;

pub use logdata::{boundary_log_data, unwrap_log, BoundaryLogData, ADMISSIBILITY_FLOOR};
pub use pair::{continue_into_strip, factor_residual, phase_slope, FactorPair, PairModel, Residuals};
pub use phase::{solve_fourier_modes, solve_harmonic_kernel, KernelSolution, ModeSolution, PhaseModel};
pub use polar::{polar_decompose, PolarDecomposition};

use crate::closed_form::Which;
use crate::error::{Error, Result};
use crate::strip_core::{AnalyticFnSpec, GridSpec};
use num_complex::Complex64;

/// Failure threshold for the post-construction residual check.
const CONSTRUCTION_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GaugeConvention {
    /// `w1(x_c) = 1` at the window center.
    PhaseZeroAtCenter,
    /// `w1(x_c)` equals the given value (normalized to modulus 1).
    MatchReference(Complex64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// Spectral when `f` repeats over the window, kernel otherwise.
    Auto,
    Spectral,
    Kernel,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FactorOptions {
    pub gauge: GaugeConvention,
    pub route: Route,
}

impl Default for FactorOptions {
    fn default() -> Self {
        Self { gauge: GaugeConvention::PhaseZeroAtCenter, route: Route::Auto }
    }
}

/// Fixes the unimodular constant and assembles the pair with its diagnostics.
pub fn fix_affine_and_gauge(
    phase: PhaseModel,
    f: &AnalyticFnSpec,
    convention: GaugeConvention,
) -> Result<FactorPair> {
    let grid = *phase.grid();
    let alpha = phase.alpha();
    let model = PairModel::Solved { f: f.clone(), phase };
    let raw = model.line(Which::W1, grid, alpha, 0.0)?[grid.center_index()];
    let target = match convention {
        GaugeConvention::PhaseZeroAtCenter => Complex64::new(1.0, 0.0),
        GaugeConvention::MatchReference(r) => {
            if !(r.norm() > 0.0 && r.norm().is_finite()) {
                return Err(Error::InvalidParameter(format!("reference value {r} has no phase")));
            }
            r / r.norm()
        }
    };
    if !((raw.norm() - 1.0).abs() < 1e-8) {
        return Err(Error::NonConvergence(format!("|w1(x_c)| = {} before gauging", raw.norm())));
    }
    let gauge = target / raw;
    let gauge = gauge / gauge.norm();
    let mut pair = FactorPair::assemble(alpha, grid, model, gauge)?;
    let res = factor_residual(&mut pair, f, alpha)?;
    let modulus = pair
        .w1_real_line
        .iter()
        .chain(&pair.w2_real_line)
        .map(|w| (w.norm() - 1.0).abs())
        .fold(0.0, f64::max);
    if !(res.res_b2 <= CONSTRUCTION_TOL && res.res_b3 <= CONSTRUCTION_TOL && modulus <= 1e-10) {
        return Err(Error::NonConvergence(format!(
            "residual_b2 = {:e}, residual_b3 = {:e}, max ||w|-1| = {modulus:e}",
            res.res_b2, res.res_b3
        )));
    }
    Ok(pair)
}

/// Full pipeline: boundary data, phase solve, gauge, diagnostics.
pub fn factorize(f: &AnalyticFnSpec, alpha: f64, grid: GridSpec, options: FactorOptions) -> Result<FactorPair> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!("alpha must be > 0, got {alpha}")));
    }
    let data = boundary_log_data(f, alpha, grid)?;
    let ell = data.log_modulus();
    let route = match options.route {
        Route::Auto if f.is_window_periodic(&grid, -alpha) => Route::Spectral,
        Route::Auto => Route::Kernel,
        r => r,
    };
    let phase = match route {
        Route::Spectral => PhaseModel::Spectral(solve_fourier_modes(&ell, grid, alpha)?),
        _ => PhaseModel::Kernel(solve_harmonic_kernel(&ell, grid, alpha)?),
    };
    fix_affine_and_gauge(phase, f, options.gauge)
}
