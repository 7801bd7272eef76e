use super::GridSpec;
use num_complex::Complex64;
use std::fmt;

/// Catalog of entire functions that can be evaluated anywhere.
#[derive(Clone, Debug, PartialEq)]
pub enum AnalyticFnSpec {
    /// `f(z) = z`
    Identity,
    /// `f(z) = 2 sin(β z)` with real `β`
    ScaledSine(f64),
    Constant(Complex64),
    Product(Vec<AnalyticFnSpec>),
}

impl AnalyticFnSpec {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            AnalyticFnSpec::Identity => z,
            AnalyticFnSpec::ScaledSine(beta) => 2.0 * (z * *beta).sin(),
            AnalyticFnSpec::Constant(c) => *c,
            AnalyticFnSpec::Product(fs) => fs.iter().fold(Complex64::new(1.0, 0.0), |acc, f| acc * f.eval(z)),
        }
    }

    /// `f̄(z) = conj(f(conj z))`, which stays inside the catalog.
    pub fn conjugate(&self) -> AnalyticFnSpec {
        match self {
            AnalyticFnSpec::Identity => AnalyticFnSpec::Identity,
            AnalyticFnSpec::ScaledSine(b) => AnalyticFnSpec::ScaledSine(*b),
            AnalyticFnSpec::Constant(c) => AnalyticFnSpec::Constant(c.conj()),
            AnalyticFnSpec::Product(fs) => AnalyticFnSpec::Product(fs.iter().map(|f| f.conjugate()).collect()),
        }
    }

    /// Smallest `|f|` over the grid points of the line `Im z = y`, with its location.
    pub fn inf_on_line(&self, grid: &GridSpec, y: f64) -> (f64, f64) {
        (0..grid.n)
            .map(|k| {
                let x = grid.x(k);
                (self.eval(Complex64::new(x, y)).norm(), x)
            })
            .fold((f64::INFINITY, grid.origin), |a, b| if b.0 < a.0 { b } else { a })
    }

    /// Whether `f(x + L) = f(x)` for the window length `L` of `grid`, tested
    /// on a handful of points of the line `Im z = y`.
    pub fn is_window_periodic(&self, grid: &GridSpec, y: f64) -> bool {
        let l = grid.length();
        (0..8).all(|k| {
            let z = Complex64::new(grid.origin + l * (k as f64) / 8.0 + 0.123 * grid.spacing, y);
            let a = self.eval(z);
            let b = self.eval(z + l);
            (a - b).norm() <= 1e-10 * (a.norm() + b.norm()).max(1e-300)
        })
    }
}

impl fmt::Display for AnalyticFnSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalyticFnSpec::Identity => write!(f, "z"),
            AnalyticFnSpec::ScaledSine(b) => write!(f, "2sin({b}z)"),
            AnalyticFnSpec::Constant(c) => write!(f, "({}{:+}i)", c.re, c.im),
            AnalyticFnSpec::Product(fs) => {
                let parts: Vec<String> = fs.iter().map(|p| p.to_string()).collect();
                write!(f, "{}", parts.join("*"))
            }
        }
    }
}
