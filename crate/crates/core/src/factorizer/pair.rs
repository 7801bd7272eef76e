use super::phase::PhaseModel;
use crate::closed_form::{oracle_line, OracleParams, Which};
use crate::error::{Error, Result};
use crate::special_fn::DeltaSettings;
use crate::strip_core::{AnalyticFnSpec, GridSpec, LineSample};
use num_complex::Complex64;
use serde::Serialize;

/// Tolerance for recognizing a requested line as a strip edge.
const LINE_TOL: f64 = 1e-12;

/// How a pair evaluates `w1`, `w2` off the real axis (ungauged).
#[derive(Clone, Debug, PartialEq)]
pub enum PairModel {
    /// `w2` from a phase model; `w1(z) = f(z−αi) w2(z−2αi)` above the axis
    /// and `w1(z) = 1/conj(w1(conj z))` below it.
    Solved { f: AnalyticFnSpec, phase: PhaseModel },
    /// Closed form for `f(z) = z`.
    Oracle { params: OracleParams, settings: DeltaSettings },
    /// The same functions with the roles of `w1` and `w2` exchanged.
    Swapped(Box<PairModel>),
}

impl PairModel {
    pub fn line(&self, which: Which, grid: GridSpec, alpha: f64, y: f64) -> Result<Vec<Complex64>> {
        match self {
            PairModel::Oracle { params, settings } => Ok(oracle_line(which, grid, y, params, settings)?.values),
            PairModel::Swapped(inner) => {
                let other = match which {
                    Which::W1 => Which::W2,
                    Which::W2 => Which::W1,
                };
                inner.line(other, grid, alpha, y)
            }
            PairModel::Solved { f, phase } => match which {
                Which::W2 => phase.w2(y),
                Which::W1 if y >= 0.0 => {
                    if y > 4.0 * alpha * (1.0 + LINE_TOL) {
                        return Err(Error::Domain(format!("w1 continuation needs 0 <= y <= 4α, got {y}")));
                    }
                    let w2 = phase.w2((y - 2.0 * alpha).max(-2.0 * alpha))?;
                    Ok((0..grid.n)
                        .map(|k| f.eval(Complex64::new(grid.x(k), y - alpha)) * w2[k])
                        .collect())
                }
                Which::W1 => Ok(self
                    .line(Which::W1, grid, alpha, -y)?
                    .into_iter()
                    .map(|v| 1.0 / v.conj())
                    .collect()),
            },
        }
    }
}

/// Boundary unitaries `w1`, `w2` on a grid with their diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FactorPair {
    pub alpha: f64,
    pub grid: GridSpec,
    #[serde(rename = "w1", with = "crate::json::complex_pairs")]
    pub w1_real_line: Vec<Complex64>,
    #[serde(rename = "w2", with = "crate::json::complex_pairs")]
    pub w2_real_line: Vec<Complex64>,
    pub slope1: f64,
    pub slope2: f64,
    #[serde(with = "crate::json::complex_pair")]
    pub gauge: Complex64,
    pub residual_b2: f64,
    pub residual_b3: f64,
    #[serde(skip)]
    pub(crate) model: PairModel,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Residuals {
    pub res_b2: f64,
    pub res_b3: f64,
}

impl FactorPair {
    pub(crate) fn assemble(alpha: f64, grid: GridSpec, model: PairModel, gauge: Complex64) -> Result<Self> {
        let w1 = model.line(Which::W1, grid, alpha, 0.0)?;
        let w2 = model.line(Which::W2, grid, alpha, 0.0)?;
        let mut pair = FactorPair {
            alpha,
            grid,
            w1_real_line: w1.iter().map(|v| gauge * v).collect(),
            w2_real_line: w2.iter().map(|v| gauge * v).collect(),
            slope1: 0.0,
            slope2: 0.0,
            gauge,
            residual_b2: f64::NAN,
            residual_b3: f64::NAN,
            model,
        };
        pair.slope1 = phase_slope(&pair.grid, &pair.w1_real_line);
        pair.slope2 = phase_slope(&pair.grid, &pair.w2_real_line);
        Ok(pair)
    }

    /// The closed-form pair for `f(z) = z`, with unit gauge.
    pub fn from_oracle(params: OracleParams, grid: GridSpec, settings: DeltaSettings) -> Result<Self> {
        let model = PairModel::Oracle { params, settings };
        let mut pair = Self::assemble(params.alpha, grid, model, Complex64::new(1.0, 0.0))?;
        factor_residual(&mut pair, &AnalyticFnSpec::Identity, params.alpha)?;
        Ok(pair)
    }

    pub fn model(&self) -> &PairModel {
        &self.model
    }

    /// `w_j` on the line `Im z = y`, gauge included; no strip restriction.
    pub fn line(&self, which: Which, y: f64) -> Result<LineSample> {
        if y == 0.0 {
            let v = match which {
                Which::W1 => self.w1_real_line.clone(),
                Which::W2 => self.w2_real_line.clone(),
            };
            return LineSample::new(self.grid, 0.0, v);
        }
        let raw = self.model.line(which, self.grid, self.alpha, y)?;
        LineSample::new(self.grid, y, raw.into_iter().map(|v| self.gauge * v).collect())
    }

    /// Multiplies both components by the unimodular constant `c`.
    pub fn regauged(&self, c: Complex64) -> Result<Self> {
        if (c.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("gauge must have modulus 1, got {}", c.norm())));
        }
        let mut out = self.clone();
        out.gauge *= c;
        out.w1_real_line.iter_mut().for_each(|v| *v *= c);
        out.w2_real_line.iter_mut().for_each(|v| *v *= c);
        Ok(out)
    }

    /// The pair `(w2, w1)`, which satisfies the relations of `f̄` whenever
    /// `(w1, w2)` satisfies those of `f`.
    pub fn swapped(&self) -> Self {
        let mut out = self.clone();
        std::mem::swap(&mut out.w1_real_line, &mut out.w2_real_line);
        std::mem::swap(&mut out.slope1, &mut out.slope2);
        std::mem::swap(&mut out.residual_b2, &mut out.residual_b3);
        out.model = PairModel::Swapped(Box::new(self.model.clone()));
        out
    }

    pub fn to_json(&self) -> String {
        crate::json::to_string(self).expect("factor pair serializes")
    }
}

/// Least-squares slope of the unwrapped phase over the central half-window.
pub fn phase_slope(grid: &GridSpec, w: &[Complex64]) -> f64 {
    let range = grid.central_half();
    let mut phase = Vec::new();
    let mut xs = Vec::new();
    let mut acc = 0.0;
    let mut prev: Option<Complex64> = None;
    for k in range {
        acc = match prev {
            None => w[k].arg(),
            Some(p) => acc + (w[k] / p).arg(),
        };
        prev = Some(w[k]);
        phase.push(acc);
        xs.push(grid.x(k));
    }
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let mp = phase.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(&phase).map(|(x, p)| (x - mx) * (p - mp)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Max relative errors of `w1(x) = f(x−αi) w2(x−2αi)` and
/// `w2(x) = f̄(x−αi) w1(x−2αi)` on the central half-window; also stored on the pair.
pub fn factor_residual(pair: &mut FactorPair, f: &AnalyticFnSpec, alpha: f64) -> Result<Residuals> {
    if (alpha - pair.alpha).abs() > 1e-14 * alpha.abs().max(1.0) {
        return Err(Error::InvalidParameter(format!("pair built for α = {}, asked for α = {alpha}", pair.alpha)));
    }
    let g = pair.grid;
    let w2_low = pair.line(Which::W2, -2.0 * alpha)?;
    let w1_low = pair.line(Which::W1, -2.0 * alpha)?;
    let fbar = f.conjugate();
    let mut res = Residuals { res_b2: 0.0, res_b3: 0.0 };
    for k in g.central_half() {
        let z = Complex64::new(g.x(k), -alpha);
        let w1 = pair.w1_real_line[k];
        let w2 = pair.w2_real_line[k];
        res.res_b2 = res.res_b2.max((w1 - f.eval(z) * w2_low.values[k]).norm() / w1.norm());
        res.res_b3 = res.res_b3.max((w2 - fbar.eval(z) * w1_low.values[k]).norm() / w2.norm());
    }
    pair.residual_b2 = res.res_b2;
    pair.residual_b3 = res.res_b3;
    Ok(res)
}

/// Samples of `w1` on lines in `[0, 2α]` or of `w2` on lines in `[−2α, 2α]`.
pub fn continue_into_strip(pair: &FactorPair, which: Which, lines: &[f64]) -> Result<Vec<LineSample>> {
    let a2 = 2.0 * pair.alpha;
    let (lo, hi) = match which {
        Which::W1 => (0.0, a2),
        Which::W2 => (-a2, a2),
    };
    lines
        .iter()
        .map(|&y| {
            if y < lo - LINE_TOL * a2 || y > hi + LINE_TOL * a2 {
                Err(Error::Domain(format!("{which:?} is holomorphic only for {lo} <= y <= {hi}, got {y}")))
            } else {
                pair.line(which, y)
            }
        })
        .collect()
}
