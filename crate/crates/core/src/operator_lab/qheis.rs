use super::{antidiag, band_basis, blockdiag, diag, exp_p, reflection, rel_frobenius, test_matrix, CMatrix, OpMatrix};
use crate::error::{Error, Result};
use crate::factorizer::FactorPair;
use crate::strip_core::{AnalyticFnSpec, GridSpec};
use num_complex::Complex64;

/// `q = e^{2αβ}` with real `β`; the square root used throughout is `e^{αβ}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QHeisParams {
    pub alpha: f64,
    pub beta_h: f64,
    pub q: f64,
}

impl QHeisParams {
    pub fn new(alpha: f64, beta_h: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!("alpha must be > 0, got {alpha}")));
        }
        if !beta_h.is_finite() {
            return Err(Error::InvalidParameter(format!("beta must be finite, got {beta_h}")));
        }
        let q = (2.0 * alpha * beta_h).exp();
        if !(q > 0.0 && q.is_finite()) || q == 1.0 {
            return Err(Error::InvalidParameter(format!("q = e^(2αβ) must be positive and != 1, got {q}")));
        }
        Ok(Self { alpha, beta_h, q })
    }

    /// `β = 2πm/L` for mode index `m` of the grid.
    pub fn from_mode(alpha: f64, grid: &GridSpec, m: i64) -> Result<Self> {
        Self::new(alpha, grid.mode_frequency(m))
    }

    pub fn sqrt_q(&self) -> f64 {
        (self.alpha * self.beta_h).exp()
    }

    pub fn commensurate(&self, grid: &GridSpec) -> bool {
        let m = self.beta_h / grid.freq_step();
        (m - m.round()).abs() < 1e-9
    }

    pub fn symbol(&self) -> AnalyticFnSpec {
        AnalyticFnSpec::ScaledSine(self.beta_h)
    }
}

/// `ρ(u) = e^{iβx} ⊕ e^{iβx}`, `ρ(p) = [[0, e^{−2αP}], [e^{−2αP}, 0]]`,
/// `ρ(x) = [[0, 2sin β(x−αi) e^{2αP}], [e^{2αP} 2sin β(x+αi), 0]]`.
#[derive(Clone, Debug)]
pub struct QHeisSuite {
    pub grid: GridSpec,
    pub rho_u: OpMatrix,
    pub rho_p: OpMatrix,
    pub rho_x: OpMatrix,
}

pub fn qheis_suite(params: &QHeisParams, grid: GridSpec) -> Result<QHeisSuite> {
    let a = params.alpha;
    let ep = exp_p(&grid, 2.0 * a)?;
    let em = exp_p(&grid, -2.0 * a)?;
    let xs = grid.xs();
    let u: Vec<Complex64> = xs.iter().map(|&x| Complex64::from_polar(1.0, params.beta_h * x)).collect();
    let f = params.symbol();
    let lower: Vec<Complex64> = xs.iter().map(|&x| f.eval(Complex64::new(x, -a))).collect();
    let upper: Vec<Complex64> = xs.iter().map(|&x| f.eval(Complex64::new(x, a))).collect();
    let du = diag(&u);
    Ok(QHeisSuite {
        grid,
        rho_u: OpMatrix::new(grid, "e^(i beta x) (+) e^(i beta x)", blockdiag(&du, &du))?,
        rho_p: OpMatrix::new(grid, "[[0,e^(-2aP)],[e^(-2aP),0]]", antidiag(&em, &em))?,
        rho_x: OpMatrix::new(
            grid,
            "[[0,2sin b(x-ai) e^(2aP)],[e^(2aP) 2sin b(x+ai),0]]",
            antidiag(&(diag(&lower) * &ep), &(&ep * diag(&upper))),
        )?,
    })
}

/// Relative residuals of the six relations on band-limited test vectors, in
/// the order: `upu⁻¹ = qp`, `uxu⁻¹ = q⁻¹x`, the two product formulas for
/// `px` and `xp`, and the two q-commutators.
pub fn qheis_residuals(s: &QHeisSuite, params: &QHeisParams, band_fraction: f64) -> Result<Vec<(String, f64)>> {
    if !(band_fraction > 0.0 && band_fraction <= 1.0) {
        return Err(Error::InvalidParameter(format!("band_fraction must be in (0, 1], got {band_fraction}")));
    }
    let v = test_matrix(&s.grid, band_fraction, true);
    let u = &s.rho_u.entries;
    let ui = u.adjoint();
    let p = &s.rho_p.entries;
    let x = &s.rho_x.entries;
    let q = params.q;
    let r = params.sqrt_q();
    let i = Complex64::i();
    let c = |z: f64| Complex64::new(z, 0.0);

    let pv = p * &v;
    let xv = x * &v;
    let uv = u * &v;
    let uiv = &ui * &v;
    let pxv = p * &xv;
    let xpv = x * &pv;
    let check = |lhs: CMatrix, rhs: CMatrix| rel_frobenius(&lhs, &rhs);
    Ok(vec![
        ("u p u^-1 = q p".into(), check(u * (p * &uiv), &pv * c(q))),
        ("u x u^-1 = q^-1 x".into(), check(u * (x * &uiv), &xv * c(1.0 / q))),
        ("p x = i q^1/2 u^-1 - i q^-1/2 u".into(), check(pxv.clone(), &uiv * (i * r) - &uv * (i / r))),
        ("x p = i q^-1/2 u^-1 - i q^1/2 u".into(), check(xpv.clone(), &uiv * (i / r) - &uv * (i * r))),
        (
            "p x - q x p = i q^1/2 (q - q^-1) u".into(),
            check(&pxv - &xpv * c(q), &uv * (i * r * (q - 1.0 / q))),
        ),
        (
            "x p - q p x = -i q^1/2 (q - q^-1) u^-1".into(),
            check(&xpv - &pxv * c(q), &uiv * (-i * r * (q - 1.0 / q))),
        ),
    ])
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EquivalenceReport {
    /// `‖P(T − ρ(p))P‖_F / ‖Pρ(p)P‖_F` with `P` the central-band projection.
    pub weak: f64,
    /// `‖(T − ρ(p))P‖_F / ‖ρ(p)P‖_F`; not asserted (aliasing of the product).
    pub strong: f64,
}

/// Compares `T = (WV)† ρ(x) (WV)` with `ρ(p)`, for `W = w1 ⊕ w2` and the
/// reflection `V`.
pub fn qheis_equivalence_with(
    s: &QHeisSuite,
    w1: &[Complex64],
    w2: &[Complex64],
    band_fraction: f64,
) -> Result<EquivalenceReport> {
    let n = s.grid.n;
    if w1.len() != n || w2.len() != n {
        return Err(Error::GridMismatch(format!("W has {} / {} entries for n = {n}", w1.len(), w2.len())));
    }
    if !(band_fraction > 0.0 && band_fraction <= 1.0) {
        return Err(Error::InvalidParameter(format!("band_fraction must be in (0, 1], got {band_fraction}")));
    }
    let v1 = reflection(n);
    let wv = blockdiag(&(diag(w1) * &v1), &(diag(w2) * &v1));
    let t = wv.adjoint() * &s.rho_x.entries * &wv;
    let pb = band_basis(&s.grid, band_fraction);
    let p = blockdiag(&pb, &pb);
    let rho_p = &s.rho_p.entries;
    let tp = &t * &p;
    let rp = rho_p * &p;
    let weak = rel_frobenius(&(p.adjoint() * &tp), &(p.adjoint() * &rp));
    let strong = rel_frobenius(&tp, &rp);
    Ok(EquivalenceReport { weak, strong })
}

pub fn qheis_equivalence_residual(
    s: &QHeisSuite,
    pair: &FactorPair,
    params: &QHeisParams,
    band_fraction: f64,
) -> Result<EquivalenceReport> {
    s.grid.require_compatible(&pair.grid)?;
    if (pair.alpha - params.alpha).abs() > 1e-14 {
        return Err(Error::InvalidParameter(format!("pair α = {}, params α = {}", pair.alpha, params.alpha)));
    }
    qheis_equivalence_with(s, &pair.w1_real_line, &pair.w2_real_line, band_fraction)
}
