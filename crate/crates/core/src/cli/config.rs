use crate::error::{Error, Result};
use crate::factorizer::Route;
use crate::strip_core::{AnalyticFnSpec, GridSpec};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(name = "stripfact", version, about = "Boundary-unitary factorization on a strip: solver, oracle and operator checks")]
#[command(allow_negative_numbers = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: RawOpts,
}

#[derive(Subcommand, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    /// Evaluate Δ = 1/Γ at a point, or check it at seeded points.
    #[command(allow_negative_numbers = true)]
    Delta,
    /// Sample the closed-form pair for f(z) = z on horizontal lines.
    #[command(allow_negative_numbers = true)]
    Oracle,
    /// Factorize f into the boundary-unitary pair (w1, w2).
    #[command(allow_negative_numbers = true)]
    Factorize,
    /// Polar decomposition f(x) = u(x + αi) g(x).
    #[command(allow_negative_numbers = true)]
    Polar,
    /// Finite-matrix checks of the shift and multiplication operator identities.
    #[command(allow_negative_numbers = true)]
    Opcheck,
    /// q-deformed Heisenberg relations and the equivalence with the factorization.
    #[command(allow_negative_numbers = true)]
    Qheis,
    /// Gaussian-weighted class-membership estimate.
    #[command(allow_negative_numbers = true)]
    Norm,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Delta => "delta",
            Command::Oracle => "oracle",
            Command::Factorize => "factorize",
            Command::Polar => "polar",
            Command::Opcheck => "opcheck",
            Command::Qheis => "qheis",
            Command::Norm => "norm",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FunctionKind {
    Identity,
    ScaledSine,
    Constant,
}

/// Which opcheck rows are asserted; the others are still computed and
/// reported.
#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpChecks {
    /// Adjoint, exp(±2αP) product, Hermiticity, covariance, shift formula.
    Identities,
    /// Polar factors of L_f against the SVD.
    Polar,
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum RouteArg {
    Auto,
    Spectral,
    Kernel,
}

/// Every option as given on the command line or in a config file; `None`
/// means "not set here".
#[derive(Args, Clone, Debug, Default, PartialEq)]
pub struct RawOpts {
    /// key=value config file; '#' starts a comment. Flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Grid size.
    #[arg(long, short = 'n', global = true)]
    pub n: Option<usize>,
    /// Grid spacing.
    #[arg(long, global = true)]
    pub h: Option<f64>,
    /// Left end of the window (default: centered, -n*h/2).
    #[arg(long, global = true)]
    pub origin: Option<f64>,
    #[arg(long, value_enum, global = true)]
    pub function: Option<FunctionKind>,
    /// Mode index m of β = 2πm/(n h) for scaled-sine and qheis.
    #[arg(long, global = true)]
    pub beta_index: Option<i64>,
    #[arg(long, global = true)]
    pub const_re: Option<f64>,
    #[arg(long, global = true)]
    pub const_im: Option<f64>,
    /// Horizontal lines Im z = y to emit (repeat or comma-separate).
    #[arg(long = "line", value_delimiter = ',', global = true)]
    pub lines: Option<Vec<f64>>,
    #[arg(long, global = true)]
    pub re: Option<f64>,
    #[arg(long, global = true)]
    pub im: Option<f64>,
    /// Number of seeded test points.
    #[arg(long, global = true)]
    pub points: Option<usize>,
    #[arg(long = "gamma", value_delimiter = ',', global = true)]
    pub gammas: Option<Vec<f64>>,
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    #[arg(long, global = true)]
    pub n_lines: Option<usize>,
    /// Override a tolerance: name=value (repeatable).
    #[arg(long = "tol", value_delimiter = ',', global = true)]
    pub tolerances: Option<Vec<String>>,
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub band_fraction: Option<f64>,
    #[arg(long, value_enum, global = true)]
    pub route: Option<RouteArg>,
    /// opcheck: which group of rows to assert.
    #[arg(long, value_enum, global = true)]
    pub checks: Option<OpChecks>,
    /// Also write the operator matrices.
    #[arg(long, global = true)]
    pub dump: bool,
}

macro_rules! merge_fields {
    ($hi:expr, $lo:expr; $($f:ident),*) => { RawOpts { $($f: $hi.$f.or($lo.$f),)* dump: $hi.dump || $lo.dump } };
}

impl RawOpts {
    /// Fields set in `self` win over `lower`.
    pub fn over(self, lower: RawOpts) -> RawOpts {
        merge_fields!(self, lower; config, alpha, n, h, origin, function, beta_index, const_re, const_im,
            lines, re, im, points, gammas, epsilon, n_lines, tolerances, output, format, seed, band_fraction, route, checks)
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim().parse().map_err(|_| usage(format!("malformed value for '{key}': '{v}'")))
}

fn list<T: std::str::FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
    v.split(',').map(|s| num(key, s)).collect()
}

fn choice<T: ValueEnum>(key: &str, v: &str) -> Result<T> {
    T::from_str(v.trim(), true).map_err(|_| usage(format!("invalid value for '{key}': '{v}'")))
}

/// Parses the key=value file format. Keys are the long flag names.
pub fn parse_config_text(text: &str) -> Result<RawOpts> {
    let mut o = RawOpts::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("config line {}: expected key=value, got '{raw}'", i + 1)))?;
        let (k, v) = (k.trim().replace('_', "-"), v.trim());
        match k.as_str() {
            "alpha" => o.alpha = Some(num(&k, v)?),
            "n" => o.n = Some(num(&k, v)?),
            "h" => o.h = Some(num(&k, v)?),
            "origin" => o.origin = Some(num(&k, v)?),
            "function" => o.function = Some(choice(&k, v)?),
            "beta-index" => o.beta_index = Some(num(&k, v)?),
            "const-re" => o.const_re = Some(num(&k, v)?),
            "const-im" => o.const_im = Some(num(&k, v)?),
            "line" => o.lines = Some(list(&k, v)?),
            "re" => o.re = Some(num(&k, v)?),
            "im" => o.im = Some(num(&k, v)?),
            "points" => o.points = Some(num(&k, v)?),
            "gamma" => o.gammas = Some(list(&k, v)?),
            "epsilon" => o.epsilon = Some(num(&k, v)?),
            "n-lines" => o.n_lines = Some(num(&k, v)?),
            "tol" => o.tolerances = Some(v.split(',').map(|s| s.trim().to_string()).collect()),
            "output" => o.output = Some(PathBuf::from(v)),
            "format" => o.format = Some(choice(&k, v)?),
            "seed" => o.seed = Some(num(&k, v)?),
            "band-fraction" => o.band_fraction = Some(num(&k, v)?),
            "route" => o.route = Some(choice(&k, v)?),
            "checks" => o.checks = Some(choice(&k, v)?),
            "dump" => o.dump = num(&k, v)?,
            _ => return Err(usage(format!("config line {}: unknown key '{k}'", i + 1))),
        }
    }
    Ok(o)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub alpha: f64,
    pub grid: GridSpec,
    pub function: AnalyticFnSpec,
    pub beta_index: i64,
    pub lines: Vec<f64>,
    pub point: Option<Complex64>,
    pub points: usize,
    pub gammas: Vec<f64>,
    pub epsilon: f64,
    pub n_lines: usize,
    pub tolerances: BTreeMap<String, f64>,
    pub output: PathBuf,
    pub format: Format,
    pub seed: u64,
    pub band_fraction: f64,
    pub route: Route,
    pub checks: OpChecks,
    pub dump: bool,
}

/// Per-subcommand defaults for α, n, h. The operator subcommands build dense
/// 2n×2n matrices, so they default to n = 256 and α = 0.1.
fn grid_defaults(c: Command) -> (f64, usize, f64) {
    match c {
        Command::Opcheck => (0.1, 256, 0.5),
        Command::Qheis => (0.1, 256, 0.06),
        _ => (0.5, 2048, 0.04),
    }
}

/// Default tolerances of the asserted rows, by subcommand.
pub fn default_tolerances(c: Command, route: Route) -> BTreeMap<String, f64> {
    let exact = route == Route::Spectral;
    let t: &[(&str, f64)] = match c {
        Command::Delta => &[("routes", 1e-10), ("recursion", 1e-10)],
        Command::Oracle => &[("unimodular", 1e-9), ("ratio", 1e-8)],
        Command::Factorize if exact => &[("b2", 1e-8), ("b3", 1e-8)],
        Command::Factorize => &[("b2", 1e-3), ("b3", 1e-3)],
        Command::Polar => &[
            ("g_nonneg", 1e-8),
            ("g_imag", 1e-8),
            ("u_unimodular", 1e-8),
            ("recon", if exact { 1e-6 } else { 1e-3 }),
        ],
        Command::Opcheck => &[
            ("adjoint", 1e-10),
            ("exp_product", 1e-10),
            ("hermiticity", 1e-10),
            ("covariance", 1e-8),
            ("shift_formula", 1e-8),
            ("unitary", 1e-3),
            ("modulus", 1e-3),
        ],
        Command::Qheis => &[("relations", 1e-6), ("equivalence", 1e-3), ("control", 1e-1)],
        Command::Norm => &[("sup_norm", 1e300)],
    };
    t.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// Merges flags over the optional config file, fills defaults and validates.
pub fn parse_config<I, T>(argv: I) -> Result<RunConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| usage(e.to_string()))?;
    let file = match &cli.opts.config {
        Some(p) => read_config_file(p)?,
        None => RawOpts::default(),
    };
    resolve(cli.command, cli.opts.over(file))
}

fn read_config_file(p: &Path) -> Result<RawOpts> {
    let text = std::fs::read_to_string(p).map_err(|e| usage(format!("cannot read config {}: {e}", p.display())))?;
    parse_config_text(&text)
}

pub fn resolve(command: Command, o: RawOpts) -> Result<RunConfig> {
    let (a0, n0, h0) = grid_defaults(command);
    let alpha = o.alpha.unwrap_or(a0);
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(usage(format!("alpha must be > 0, got {alpha}")));
    }
    let n = o.n.unwrap_or(n0);
    let h = o.h.unwrap_or(h0);
    let grid = match o.origin {
        Some(x0) => GridSpec::new(n, h, x0),
        None => GridSpec::centered(n, h),
    }
    .map_err(|e| usage(e.to_string()))?;

    let beta_index = o.beta_index.unwrap_or(4);
    let default_kind = match command {
        Command::Opcheck | Command::Qheis => FunctionKind::ScaledSine,
        _ => FunctionKind::Identity,
    };
    let function = match o.function.unwrap_or(default_kind) {
        FunctionKind::Identity => AnalyticFnSpec::Identity,
        FunctionKind::ScaledSine => AnalyticFnSpec::ScaledSine(grid.mode_frequency(beta_index)),
        FunctionKind::Constant => {
            AnalyticFnSpec::Constant(Complex64::new(o.const_re.unwrap_or(1.0), o.const_im.unwrap_or(0.0)))
        }
    };

    let point = match (o.re, o.im) {
        (None, None) => None,
        (re, im) => Some(Complex64::new(re.unwrap_or(0.0), im.unwrap_or(0.0))),
    };
    let points = o.points.unwrap_or(if command == Command::Oracle { 50 } else { 100 });
    if points == 0 {
        return Err(usage("points must be >= 1"));
    }
    let lines = o.lines.unwrap_or_else(|| vec![0.0]);
    if let Some(y) = lines.iter().find(|y| !y.is_finite()) {
        return Err(usage(format!("line offsets must be finite, got {y}")));
    }

    let epsilon = o.epsilon.unwrap_or(0.0);
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(usage(format!("epsilon must be >= 0, got {epsilon}")));
    }
    let gammas = o.gammas.unwrap_or_else(|| [0.1, 0.5, 1.0, 2.0].iter().map(|g| epsilon + g).collect());
    if let Some(g) = gammas.iter().find(|g| !(**g > epsilon && g.is_finite())) {
        return Err(usage(format!("gamma values must exceed epsilon = {epsilon}, got {g}")));
    }
    let n_lines = o.n_lines.unwrap_or(5);
    if n_lines < 2 {
        return Err(usage(format!("n-lines must be >= 2, got {n_lines}")));
    }
    let band_fraction = o.band_fraction.unwrap_or(0.5);
    if !(band_fraction > 0.0 && band_fraction <= 1.0) {
        return Err(usage(format!("band-fraction must be in (0, 1], got {band_fraction}")));
    }

    let route_arg = o.route.unwrap_or(RouteArg::Auto);
    let route = match route_arg {
        RouteArg::Auto => Route::Auto,
        RouteArg::Spectral => Route::Spectral,
        RouteArg::Kernel => Route::Kernel,
    };
    // the tolerance class follows the route that Auto will actually take
    let effective = match route {
        Route::Auto if function.is_window_periodic(&grid, -alpha) => Route::Spectral,
        Route::Auto => Route::Kernel,
        r => r,
    };
    let mut tolerances = default_tolerances(command, effective);
    for item in o.tolerances.unwrap_or_default() {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| usage(format!("tolerance must be name=value, got '{item}'")))?;
        let k = k.trim();
        let v: f64 = num(k, v)?;
        if !(v > 0.0 && v.is_finite()) {
            return Err(usage(format!("tolerance '{k}' must be positive, got {v}")));
        }
        match tolerances.get_mut(k) {
            Some(slot) => *slot = v,
            None => {
                let known: Vec<&str> = tolerances.keys().map(String::as_str).collect();
                return Err(usage(format!(
                    "unknown tolerance '{k}' for {} (known: {})",
                    command.name(),
                    known.join(", ")
                )));
            }
        }
    }

    Ok(RunConfig {
        command,
        alpha,
        grid,
        function,
        beta_index,
        lines,
        point,
        points,
        gammas,
        epsilon,
        n_lines,
        tolerances,
        output: o.output.unwrap_or_else(|| PathBuf::from("out")),
        format: o.format.unwrap_or(Format::Json),
        seed: o.seed.unwrap_or(42),
        band_fraction,
        route,
        checks: o.checks.unwrap_or(OpChecks::Identities),
        dump: o.dump,
    })
}
