use super::{sample_line, AnalyticFnSpec, GridSpec, LineSample, StripDomain};
use crate::error::{Error, Result};

/// Suprema above this are reported as an overflow verdict.
const OVERFLOW_THRESHOLD: f64 = 1e300;

/// Trapezoid approximation of `∫ |h(x+iy)|² e^{-2γx²} dx` on one line.
pub fn gaussian_weighted_norm(line: &LineSample, gamma: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidParameter(format!("gamma must be > 0, got {gamma}")));
    }
    let g = &line.grid;
    let s: f64 = line
        .values
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let x = g.x(k);
            v.norm_sqr() * (-2.0 * gamma * x * x).exp()
        })
        .sum();
    Ok(s * g.spacing)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Finite,
    Overflow,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MembershipReport {
    pub gammas: Vec<f64>,
    pub sup_norms: Vec<f64>,
    pub lines: Vec<f64>,
    pub verdict: Verdict,
}

/// Largest weighted norm over `n_lines` interior lines, for each sampled `γ`.
pub fn class_membership_estimate(
    f: &AnalyticFnSpec,
    dom: &StripDomain,
    grid: GridSpec,
    gammas: &[f64],
    n_lines: usize,
) -> Result<MembershipReport> {
    if n_lines < 2 {
        return Err(Error::InvalidParameter(format!("n_lines must be >= 2, got {n_lines}")));
    }
    if gammas.is_empty() {
        return Err(Error::InvalidParameter("no gamma values given".into()));
    }
    if let Some(g) = gammas.iter().find(|g| !(**g > dom.epsilon)) {
        return Err(Error::InvalidParameter(format!(
            "gamma {g} must exceed epsilon {}",
            dom.epsilon
        )));
    }
    let step = dom.width() / (n_lines + 1) as f64;
    let lines: Vec<f64> = (1..=n_lines).map(|j| dom.lower + j as f64 * step).collect();
    let samples: Vec<LineSample> = lines.iter().map(|&y| sample_line(f, grid, y)).collect();
    let mut sup_norms = Vec::with_capacity(gammas.len());
    for &gamma in gammas {
        let mut sup = 0.0f64;
        for s in &samples {
            let v = gaussian_weighted_norm(s, gamma)?;
            sup = if v.is_nan() { f64::INFINITY } else { sup.max(v) };
        }
        sup_norms.push(sup);
    }
    let verdict = if sup_norms.iter().all(|v| *v < OVERFLOW_THRESHOLD) {
        Verdict::Finite
    } else {
        Verdict::Overflow
    };
    Ok(MembershipReport { gammas: gammas.to_vec(), sup_norms, lines, verdict })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Approach {
    Upper,
    Lower,
}

/// Weighted distances between the boundary line and interior lines at
/// offsets `width/2 · 2^{-k}`, `k = 0..steps`.
pub fn boundary_convergence_check(
    f: &AnalyticFnSpec,
    dom: &StripDomain,
    grid: GridSpec,
    gamma: f64,
    approach: Approach,
    steps: usize,
) -> Result<Vec<f64>> {
    if !(gamma > dom.epsilon) {
        return Err(Error::InvalidParameter(format!(
            "gamma {gamma} must exceed epsilon {}",
            dom.epsilon
        )));
    }
    let (edge, dir) = match approach {
        Approach::Upper => (dom.upper, -1.0),
        Approach::Lower => (dom.lower, 1.0),
    };
    let boundary = sample_line(f, grid, edge);
    (0..steps)
        .map(|k| {
            let delta = 0.5 * dom.width() * 0.5f64.powi(k as i32);
            let inner = sample_line(f, grid, edge + dir * delta);
            let diff: Vec<_> = inner.values.iter().zip(&boundary.values).map(|(a, b)| a - b).collect();
            gaussian_weighted_norm(&LineSample::new(grid, inner.offset_y, diff)?, gamma)
        })
        .collect()
}
