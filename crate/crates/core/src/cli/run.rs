use super::config::{Command, Format, OpChecks, RunConfig};
use crate::closed_form::{oracle_line, oracle_ratio_residual, OracleParams, Which};
use crate::error::{Error, Result};
use crate::factorizer::{continue_into_strip, factorize, polar_decompose, FactorOptions, FactorPair};
use crate::json::fmt_f64;
use crate::operator_lab::{
    adjoint_residual, build_operator_suite, exp_product_residual, hermiticity_residual, shift_formula_residual,
    min_singular_value, qheis_equivalence_residual, qheis_equivalence_with, qheis_residuals, qheis_suite,
    scaling_covariance_residual, svd_polar_compare, OpMatrix, QHeisParams,
};
use crate::special_fn::{delta_eval, delta_product, delta_recursion_residual, euler_mascheroni, DeltaSettings};
use crate::strip_core::{
    boundary_convergence_check, class_membership_estimate, write_csv, Approach, LineSample, StripDomain, Verdict,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::path::PathBuf;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Check {
    /// Passes iff value ≤ tolerance.
    Max(f64),
    /// Passes iff value > bound.
    Min(f64),
    Report,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub name: String,
    pub value: f64,
    pub check: Check,
}

impl Row {
    fn max(name: impl Into<String>, value: f64, tol: f64) -> Self {
        Row { name: name.into(), value, check: Check::Max(tol) }
    }

    fn min(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Row { name: name.into(), value, check: Check::Min(bound) }
    }

    fn report(name: impl Into<String>, value: f64) -> Self {
        Row { name: name.into(), value, check: Check::Report }
    }

    /// NaN never passes.
    pub fn passed(&self) -> bool {
        match self.check {
            Check::Max(t) => self.value <= t,
            Check::Min(b) => self.value > b,
            Check::Report => true,
        }
    }

    fn to_json(&self) -> Value {
        let (kind, tol) = match self.check {
            Check::Max(t) => ("max", Some(t)),
            Check::Min(b) => ("min", Some(b)),
            Check::Report => ("report", None),
        };
        json!({ "name": self.name, "value": self.value, "kind": kind, "tolerance": tol, "pass": self.passed() })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub command: Command,
    pub rows: Vec<Row>,
    /// Extra lines printed before the table (e.g. the Δ value).
    pub notes: Vec<String>,
    pub files: Vec<PathBuf>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(Row::passed)
    }

    pub fn table(&self) -> String {
        let w = self.rows.iter().map(|r| r.name.len()).max().unwrap_or(4).max(4);
        let mut s = String::new();
        for n in &self.notes {
            let _ = writeln!(s, "{n}");
        }
        let _ = writeln!(s, "{:<w$}  {:>24}  {:>24}  verdict", "name", "residual", "tolerance");
        for r in &self.rows {
            let (tol, verdict) = match r.check {
                Check::Max(t) => (format!("<= {}", fmt_f64(t)), if r.passed() { "PASS" } else { "FAIL" }),
                Check::Min(b) => (format!("> {}", fmt_f64(b)), if r.passed() { "PASS" } else { "FAIL" }),
                Check::Report => ("-".to_string(), "report"),
            };
            let _ = writeln!(s, "{:<w$}  {:>24}  {:>24}  {verdict}", r.name, fmt_f64(r.value), tol);
        }
        let _ = writeln!(s, "{}: {}", self.command.name(), if self.passed() { "PASS" } else { "FAIL" });
        s
    }
}

struct Sink<'a> {
    cfg: &'a RunConfig,
    files: Vec<PathBuf>,
}

impl Sink<'_> {
    fn write(&mut self, name: &str, text: &str) -> Result<()> {
        let p = self.cfg.output.join(name);
        std::fs::write(&p, text)?;
        self.files.push(p);
        Ok(())
    }

    fn json(&mut self, name: &str, v: &Value) -> Result<()> {
        let text = crate::json::to_string(v).map_err(|e| Error::Internal(e.to_string()))?;
        self.write(&format!("{name}.json"), &text)
    }

    fn line(&mut self, stem: &str, line: &LineSample) -> Result<()> {
        let name = format!("{stem}_y{}", line.offset_y);
        match self.cfg.format {
            Format::Json => self.write(&format!("{name}.json"), &line.to_json()),
            Format::Csv => {
                let mut buf = Vec::new();
                write_csv(line, &mut buf)?;
                self.write(&format!("{name}.csv"), &String::from_utf8(buf).expect("csv is ascii"))
            }
        }
    }

    fn matrix(&mut self, stem: &str, m: &OpMatrix) -> Result<()> {
        let e = &m.entries;
        match self.cfg.format {
            Format::Json => {
                let rows: Vec<Vec<[f64; 2]>> =
                    (0..e.nrows()).map(|i| (0..e.ncols()).map(|j| [e[(i, j)].re, e[(i, j)].im]).collect()).collect();
                self.json(stem, &json!({ "label": m.label, "grid": m.grid, "entries": rows }))
            }
            Format::Csv => {
                let mut s = String::from("row,col,re,im\n");
                for i in 0..e.nrows() {
                    for j in 0..e.ncols() {
                        let _ = writeln!(s, "{i},{j},{},{}", fmt_f64(e[(i, j)].re), fmt_f64(e[(i, j)].im));
                    }
                }
                self.write(&format!("{stem}.csv"), &s)
            }
        }
    }
}

fn pair_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn tol(cfg: &RunConfig, key: &str) -> f64 {
    cfg.tolerances[key]
}

/// Runs the subcommand, writes its artifacts and `summary.json` under the
/// output directory.
pub fn dispatch(cfg: &RunConfig) -> Result<Outcome> {
    std::fs::create_dir_all(&cfg.output)?;
    let mut sink = Sink { cfg, files: Vec::new() };
    let mut notes = Vec::new();
    let rows = match cfg.command {
        Command::Delta => run_delta(cfg, &mut sink, &mut notes)?,
        Command::Oracle => run_oracle(cfg, &mut sink)?,
        Command::Factorize => run_factorize(cfg, &mut sink)?,
        Command::Polar => run_polar(cfg, &mut sink)?,
        Command::Opcheck => run_opcheck(cfg, &mut sink)?,
        Command::Qheis => run_qheis(cfg, &mut sink)?,
        Command::Norm => run_norm(cfg, &mut sink)?,
    };
    let out = Outcome { command: cfg.command, rows, notes, files: Vec::new() };
    sink.json(
        "summary",
        &json!({
            "command": cfg.command.name(),
            "pass": out.passed(),
            "rows": out.rows.iter().map(Row::to_json).collect::<Vec<_>>(),
        }),
    )?;
    Ok(Outcome { files: sink.files, ..out })
}

fn relative(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

fn run_delta(cfg: &RunConfig, sink: &mut Sink, notes: &mut Vec<String>) -> Result<Vec<Row>> {
    let s = DeltaSettings::default();
    let product_radius = s.product_terms as f64 / 4.0;
    let zs: Vec<Complex64> = match cfg.point {
        Some(z) => vec![z],
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            (0..cfg.points)
                .map(|_| Complex64::from_polar(5.0 * rng.random::<f64>().sqrt(), rng.random_range(0.0..std::f64::consts::TAU)))
                .collect()
        }
    };
    let mut routes = 0.0f64;
    let mut recursion = 0.0f64;
    let mut records = Vec::with_capacity(zs.len());
    for &z in &zs {
        let d = delta_eval(z, &s)?;
        let p = if z.norm() <= product_radius { Some(delta_product(z, &s)?) } else { None };
        if let Some(p) = p {
            routes = routes.max(relative(d, p));
        }
        recursion = recursion.max(delta_recursion_residual(z, &s)?);
        if cfg.point.is_some() {
            notes.push(format!("{} {}", fmt_f64(d.re), fmt_f64(d.im)));
        }
        records.push(json!({ "z": pair_json(z), "delta": pair_json(d), "product": p.map(pair_json) }));
    }
    sink.json("delta", &json!({ "euler_mascheroni": euler_mascheroni(), "points": records }))?;
    let mut rows = vec![Row::max("recursion", recursion, tol(cfg, "recursion"))];
    if zs.iter().any(|z| z.norm() <= product_radius) {
        rows.insert(0, Row::max("routes", routes, tol(cfg, "routes")));
    }
    Ok(rows)
}

fn run_oracle(cfg: &RunConfig, sink: &mut Sink) -> Result<Vec<Row>> {
    let s = DeltaSettings::default();
    let p = OracleParams::new(cfg.alpha)?;
    let mut unimodular = 0.0f64;
    for &y in &cfg.lines {
        let w1 = oracle_line(Which::W1, cfg.grid, y, &p, &s)?;
        let w2 = oracle_line(Which::W2, cfg.grid, y, &p, &s)?;
        sink.line("w1", &w1)?;
        sink.line("w2", &w2)?;
    }
    for which in [Which::W1, Which::W2] {
        let real = oracle_line(which, cfg.grid, 0.0, &p, &s)?;
        unimodular = real.values.iter().fold(unimodular, |m, v| m.max((v.norm() - 1.0).abs()));
    }
    // seeded interior points of the strip, resampled near catalog singularities
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut ratio = 0.0f64;
    let mut done = 0;
    while done < cfg.points {
        let z = Complex64::new(rng.random_range(-10.0..10.0), rng.random_range(-4.0..4.0) * cfg.alpha);
        match oracle_ratio_residual(z, &p, &s) {
            Ok((r1, r2)) => {
                ratio = ratio.max(r1).max(r2);
                done += 1;
            }
            Err(Error::DomainExclusion { .. }) | Err(Error::Pole { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(vec![
        Row::max("unimodular", unimodular, tol(cfg, "unimodular")),
        Row::max("ratio", ratio, tol(cfg, "ratio")),
    ])
}

fn options(cfg: &RunConfig) -> FactorOptions {
    FactorOptions { route: cfg.route, ..FactorOptions::default() }
}

fn solve(cfg: &RunConfig) -> Result<FactorPair> {
    factorize(&cfg.function, cfg.alpha, cfg.grid, options(cfg))
}

fn run_factorize(cfg: &RunConfig, sink: &mut Sink) -> Result<Vec<Row>> {
    let pair = solve(cfg)?;
    sink.write("factor_pair.json", &pair.to_json())?;
    let a2 = 2.0 * cfg.alpha;
    for &y in &cfg.lines {
        if !(-a2..=a2).contains(&y) {
            return Err(Error::Domain(format!("line y = {y} is outside [-2α, 2α] = [{}, {a2}]", -a2)));
        }
        if y >= 0.0 {
            sink.line("w1", &continue_into_strip(&pair, Which::W1, &[y])?[0])?;
        }
        sink.line("w2", &continue_into_strip(&pair, Which::W2, &[y])?[0])?;
    }
    Ok(vec![
        Row::max("b2", pair.residual_b2, tol(cfg, "b2")),
        Row::max("b3", pair.residual_b3, tol(cfg, "b3")),
        Row::report("slope1", pair.slope1),
        Row::report("slope2", pair.slope2),
    ])
}

fn run_polar(cfg: &RunConfig, sink: &mut Sink) -> Result<Vec<Row>> {
    let pair = solve(cfg)?;
    let d = polar_decompose(&pair, &cfg.function, cfg.alpha)?;
    sink.line("u", &d.u_real)?;
    sink.line("g", &d.g_real)?;
    let g = &d.g_real.values;
    let g_nonneg = g.iter().fold(0.0f64, |m, v| m.max(-v.re));
    let g_imag = g.iter().fold(0.0f64, |m, v| m.max(v.im.abs()));
    let u_unimodular = d.u_real.values.iter().fold(0.0f64, |m, v| m.max((v.norm() - 1.0).abs()));
    Ok(vec![
        Row::max("g_nonneg", g_nonneg, tol(cfg, "g_nonneg")),
        Row::max("g_imag", g_imag, tol(cfg, "g_imag")),
        Row::max("u_unimodular", u_unimodular, tol(cfg, "u_unimodular")),
        Row::max("recon", d.recon_residual, tol(cfg, "recon")),
    ])
}

fn run_opcheck(cfg: &RunConfig, sink: &mut Sink) -> Result<Vec<Row>> {
    let s = build_operator_suite(&cfg.function, cfg.alpha, cfg.grid)?;
    let cov = scaling_covariance_residual(&s, cfg.grid.freq_step(), cfg.band_fraction)?;
    let shift_formula = shift_formula_residual(&cfg.grid, cfg.alpha, &cfg.function, cfg.band_fraction)?;
    let smin = min_singular_value(&s.lf.entries);
    let pair = solve(cfg)?;
    let pc = svd_polar_compare(&s, &pair)?;
    if cfg.dump {
        for (stem, m) in [("exp_p_plus", &s.exp_p_plus), ("exp_p_minus", &s.exp_p_minus), ("lf", &s.lf), ("rf", &s.rf), ("af", &s.af)] {
            sink.matrix(stem, m)?;
        }
    }
    let ids = cfg.checks != OpChecks::Polar;
    let polar = cfg.checks != OpChecks::Identities;
    let pick = |on: bool, name: &str, v: f64| if on { Row::max(name, v, tol(cfg, name)) } else { Row::report(name, v) };
    Ok(vec![
        pick(ids, "adjoint", adjoint_residual(&s)),
        pick(ids, "exp_product", exp_product_residual(&s)),
        pick(ids, "hermiticity", hermiticity_residual(&s)),
        pick(ids, "covariance", cov.residual),
        pick(ids, "shift_formula", shift_formula),
        Row::min("min_singular", smin, 0.0),
        pick(polar, "unitary", pc.unitary_residual),
        pick(polar, "modulus", pc.modulus_residual),
        Row::report("modulus_elementwise", pc.modulus_residual_elementwise),
    ])
}

fn run_qheis(cfg: &RunConfig, sink: &mut Sink) -> Result<Vec<Row>> {
    let params = QHeisParams::from_mode(cfg.alpha, &cfg.grid, cfg.beta_index)?;
    let suite = qheis_suite(&params, cfg.grid)?;
    let mut rows: Vec<Row> = qheis_residuals(&suite, &params, cfg.band_fraction)?
        .into_iter()
        .map(|(name, r)| Row::max(name, r, tol(cfg, "relations")))
        .collect();
    let pair = factorize(&params.symbol(), cfg.alpha, cfg.grid, options(cfg))?;
    let eq = qheis_equivalence_residual(&suite, &pair, &params, cfg.band_fraction)?;
    let ones = vec![Complex64::new(1.0, 0.0); cfg.grid.n];
    let control = qheis_equivalence_with(&suite, &ones, &ones, cfg.band_fraction)?;
    rows.push(Row::max("equivalence", eq.weak, tol(cfg, "equivalence")));
    rows.push(Row::report("equivalence_strong", eq.strong));
    rows.push(Row::min("control (W = I)", control.weak, tol(cfg, "control")));
    if cfg.dump {
        sink.matrix("rho_u", &suite.rho_u)?;
        sink.matrix("rho_p", &suite.rho_p)?;
        sink.matrix("rho_x", &suite.rho_x)?;
    }
    Ok(rows)
}

fn run_norm(cfg: &RunConfig, sink: &mut Sink) -> Result<Vec<Row>> {
    let dom = StripDomain::new(cfg.alpha, -cfg.alpha, cfg.epsilon)?;
    let rep = class_membership_estimate(&cfg.function, &dom, cfg.grid, &cfg.gammas, cfg.n_lines)?;
    let g0 = cfg.gammas[0];
    let upper = boundary_convergence_check(&cfg.function, &dom, cfg.grid, g0, Approach::Upper, 6)?;
    let lower = boundary_convergence_check(&cfg.function, &dom, cfg.grid, g0, Approach::Lower, 6)?;
    sink.json(
        "membership",
        &json!({
            "gammas": rep.gammas,
            "sup_norms": rep.sup_norms,
            "lines": rep.lines,
            "verdict": match rep.verdict { Verdict::Finite => "finite", Verdict::Overflow => "overflow" },
            "boundary_upper": upper,
            "boundary_lower": lower,
        }),
    )?;
    let mut rows: Vec<Row> = rep
        .gammas
        .iter()
        .zip(&rep.sup_norms)
        .map(|(g, v)| Row::max(format!("sup_norm[gamma={g}]"), *v, tol(cfg, "sup_norm")))
        .collect();
    rows.push(Row::report("boundary_upper_last", upper.last().copied().unwrap_or(f64::NAN)));
    rows.push(Row::report("boundary_lower_last", lower.last().copied().unwrap_or(f64::NAN)));
    Ok(rows)
}
