use super::{antidiag, band_basis, blockdiag, diag, exp_p, rel_frobenius, test_matrix, CMatrix, OpMatrix};
use crate::error::{Error, Result};
use crate::factorizer::FactorPair;
use crate::strip_core::{AnalyticFnSpec, GridSpec};
use num_complex::Complex64;

/// Matrices of `e^{±2αP}`, `L_f = f(x−αi)e^{2αP}`, `R_f = e^{2αP} f̄(x+αi)`,
/// `A_f = [[0, L_f], [R_f, 0]]` and `B = [[0, e^{2αP}], [e^{2αP}, 0]]`.
#[derive(Clone, Debug)]
pub struct OperatorSuite {
    pub f: AnalyticFnSpec,
    pub alpha: f64,
    pub grid: GridSpec,
    pub exp_p_plus: OpMatrix,
    pub exp_p_minus: OpMatrix,
    pub lf: OpMatrix,
    pub rf: OpMatrix,
    pub af: OpMatrix,
    pub b: OpMatrix,
}

fn line_values(f: &AnalyticFnSpec, grid: &GridSpec, y: f64) -> Vec<Complex64> {
    grid.xs().iter().map(|&x| f.eval(Complex64::new(x, y))).collect()
}

pub fn build_operator_suite(f: &AnalyticFnSpec, alpha: f64, grid: GridSpec) -> Result<OperatorSuite> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!("alpha must be > 0, got {alpha}")));
    }
    let ep = exp_p(&grid, 2.0 * alpha)?;
    let em = exp_p(&grid, -2.0 * alpha)?;
    let lf = diag(&line_values(f, &grid, -alpha)) * &ep;
    let rf = &ep * diag(&line_values(&f.conjugate(), &grid, alpha));
    let af = antidiag(&lf, &rf);
    let b = antidiag(&ep, &ep);
    Ok(OperatorSuite {
        f: f.clone(),
        alpha,
        grid,
        lf: OpMatrix::new(grid, format!("diag({f}(x-{alpha}i)) e^(2{alpha}P)"), lf)?,
        rf: OpMatrix::new(grid, format!("e^(2{alpha}P) diag(conj {f}(x-{alpha}i))"), rf)?,
        af: OpMatrix::new(grid, "[[0,Lf],[Rf,0]]", af)?,
        b: OpMatrix::new(grid, "[[0,E],[E,0]]", b)?,
        exp_p_plus: OpMatrix::new(grid, format!("e^(2{alpha}P)"), ep)?,
        exp_p_minus: OpMatrix::new(grid, format!("e^(-2{alpha}P)"), em)?,
    })
}

/// `‖L_f† − R_f‖_F / ‖L_f‖_F`.
pub fn adjoint_residual(s: &OperatorSuite) -> f64 {
    (s.lf.adjoint() - &s.rf.entries).norm() / s.lf.entries.norm()
}

/// `‖A − A†‖_F / ‖A‖_F` for `A_f`.
pub fn hermiticity_residual(s: &OperatorSuite) -> f64 {
    (s.af.adjoint() - &s.af.entries).norm() / s.af.entries.norm()
}

/// `‖e^{2αP} e^{−2αP} − I‖_F / ‖I‖_F`.
pub fn exp_product_residual(s: &OperatorSuite) -> f64 {
    let n = s.grid.n;
    rel_frobenius(&(&s.exp_p_plus.entries * &s.exp_p_minus.entries), &CMatrix::identity(n, n))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CovarianceReport {
    pub residual: f64,
    /// Whether `t` is a whole number of frequency steps.
    pub commensurate: bool,
    /// Whether the shifted band still avoids cyclic wraparound.
    pub wrap_free: bool,
}

/// `U(−t) A_f U(t) = e^{2αt} A_f` on band-limited test vectors, with
/// `U(t) = diag(e^{itx})` on each block.
pub fn scaling_covariance_residual(s: &OperatorSuite, t: f64, band_fraction: f64) -> Result<CovarianceReport> {
    if !(band_fraction > 0.0 && band_fraction <= 1.0) {
        return Err(Error::InvalidParameter(format!("band_fraction must be in (0, 1], got {band_fraction}")));
    }
    let g = &s.grid;
    let steps = t / g.freq_step();
    let commensurate = (steps - steps.round()).abs() < 1e-9;
    let wrap_free = band_fraction * g.nyquist() + t.abs() < g.nyquist() * (1.0 - 1e-12) || t == 0.0;
    let phase = |sign: f64| -> Vec<Complex64> { g.xs().iter().map(|&x| Complex64::from_polar(1.0, sign * t * x)).collect() };
    let up = diag(&phase(1.0));
    let um = diag(&phase(-1.0));
    let u_plus = blockdiag(&up, &up);
    let u_minus = blockdiag(&um, &um);
    let v = test_matrix(g, band_fraction, true);
    let av = &s.af.entries * &v;
    let lhs = &u_minus * (&s.af.entries * (&u_plus * &v));
    let rhs = av * Complex64::new((2.0 * s.alpha * t).exp(), 0.0);
    Ok(CovarianceReport { residual: rel_frobenius(&lhs, &rhs), commensurate, wrap_free })
}

/// `e^{2αP} h φ = h(x−2αi) e^{2αP} φ` on band-limited test vectors.
pub fn shift_formula_residual(grid: &GridSpec, alpha: f64, h: &AnalyticFnSpec, band_fraction: f64) -> Result<f64> {
    let ep = exp_p(grid, 2.0 * alpha)?;
    let v = test_matrix(grid, band_fraction, false);
    let lhs = &ep * (diag(&line_values(h, grid, 0.0)) * &v);
    let rhs = diag(&line_values(h, grid, -2.0 * alpha)) * (&ep * &v);
    Ok(rel_frobenius(&lhs, &rhs))
}

pub fn min_singular_value(m: &CMatrix) -> f64 {
    m.singular_values().iter().cloned().fold(f64::INFINITY, f64::min)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolarCompare {
    /// Max elementwise `|Q − c·diag(w1 w̄2)|` for the SVD polar unitary `Q`.
    pub unitary_residual: f64,
    /// `‖P†(|L_f| − M)P‖_F / ‖P†MP‖_F` for `M = w2 e^{2αP} w̄2`, `P` the
    /// central half-band basis.
    pub modulus_residual: f64,
    /// Max elementwise `||L_f| − M|` relative to `max |M|`. Dominated by the
    /// `e^{2αξ}` growth of `M` near Nyquist; reported only.
    pub modulus_residual_elementwise: f64,
    pub min_singular: f64,
    pub phase_alignment: Complex64,
}

/// Polar factors of `L_f` from its SVD, compared with the factorization.
pub fn svd_polar_compare(s: &OperatorSuite, pair: &FactorPair) -> Result<PolarCompare> {
    s.grid.require_compatible(&pair.grid)?;
    if (s.alpha - pair.alpha).abs() > 1e-14 {
        return Err(Error::InvalidParameter(format!("suite α = {}, pair α = {}", s.alpha, pair.alpha)));
    }
    let n = s.grid.n;
    let svd = s.lf.entries.clone().svd(true, true);
    let sig = &svd.singular_values;
    let smax = sig.max();
    let smin = sig.min();
    if !(smin > 1e-14 * smax) {
        return Err(Error::Internal(format!("L_f is numerically rank deficient: σ_min/σ_max = {:e}", smin / smax)));
    }
    let u = svd.u.as_ref().expect("requested U");
    let vt = svd.v_t.as_ref().expect("requested V^T");
    let q = u * vt;
    let sig_c = CMatrix::from_diagonal(&sig.map(|x| Complex64::new(x, 0.0)));
    let modulus = vt.adjoint() * sig_c * vt;

    let d: Vec<Complex64> = pair.w1_real_line.iter().zip(&pair.w2_real_line).map(|(a, b)| a * b.conj()).collect();
    let overlap: Complex64 = (0..n).map(|k| d[k].conj() * q[(k, k)]).sum();
    let c = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { Complex64::new(1.0, 0.0) };
    let mut unitary_residual = 0.0f64;
    for k in 0..n {
        for l in 0..n {
            let target = if k == l { c * d[k] } else { Complex64::new(0.0, 0.0) };
            unitary_residual = unitary_residual.max((q[(k, l)] - target).norm());
        }
    }

    let w2 = diag(&pair.w2_real_line);
    let m = &w2 * &s.exp_p_plus.entries * w2.adjoint();
    let mmax = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let modulus_residual_elementwise = (&modulus - &m).iter().map(|z| z.norm()).fold(0.0, f64::max) / mmax;
    let p = band_basis(&s.grid, 0.5);
    let compress = |a: &CMatrix| p.adjoint() * a * &p;
    let modulus_residual = rel_frobenius(&compress(&modulus), &compress(&m));

    Ok(PolarCompare {
        unitary_residual,
        modulus_residual,
        modulus_residual_elementwise,
        min_singular: smin,
        phase_alignment: c,
    })
}
