//! Command-line front end: JSON problem files, CSV/JSON reports.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure,
//! 4 verification failure.

use crate::bem::{distance_to_system, single_layer_guard};
use crate::geometry::{Curve, LoopSystem, RawCurve};
use crate::spectral::{
    classify, critical_essential_point, dual_coupling, eigenfunction, find_eigenvalues, transmission_matrix,
    CouplingPair, EigenvalueReport, Regime, ScanConfig, SpectralError,
};
use crate::validation::{rows_to_csv, run_suite, suites_for, Level, SuiteOptions, SUITES};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Node count used for the arc-length reparametrization of every loop.
const GEOMETRY_QUAD: usize = 512;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Verification(_) => 4,
        }
    }
}

impl From<SpectralError> for CliError {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::ZeroMass => CliError::Config(e.to_string()),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum CurveSpec {
    Circle {
        radius: f64,
        #[serde(default)]
        center: [f64; 2],
    },
    Ellipse {
        a: f64,
        b: f64,
        #[serde(default)]
        center: [f64; 2],
    },
    Star {
        radius: f64,
        amplitude: f64,
        petals: u32,
        #[serde(default)]
        center: [f64; 2],
    },
    Fourier {
        x_cos: Vec<f64>,
        x_sin: Vec<f64>,
        y_cos: Vec<f64>,
        y_sin: Vec<f64>,
    },
}

impl CurveSpec {
    pub fn raw(&self) -> RawCurve {
        match self {
            CurveSpec::Circle { radius, center } => RawCurve::circle(*radius, *center),
            CurveSpec::Ellipse { a, b, center } => RawCurve::ellipse(*a, *b, *center),
            CurveSpec::Star { radius, amplitude, petals, center } => RawCurve::star(*radius, *amplitude, *petals, *center),
            CurveSpec::Fourier { x_cos, x_sin, y_cos, y_sin } => {
                RawCurve::new(x_cos.clone(), x_sin.clone(), y_cos.clone(), y_sin.clone())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopConfig {
    pub curve: CurveSpec,
    pub eta: f64,
    pub tau: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Discretization {
    pub n: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub path: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub m: f64,
    pub loops: Vec<LoopConfig>,
    pub discretization: Discretization,
    #[serde(default)]
    pub scan: ScanConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

/// Line of the first occurrence of `"key"` in `text` (1-based).
fn line_of(text: &str, key: &str) -> Option<usize> {
    let quoted = format!("\"{key}\"");
    text.lines().position(|l| l.contains(&quoted)).map(|i| i + 1)
}

fn at(text: &str, key: &str, msg: String) -> CliError {
    match line_of(text, key) {
        Some(l) => CliError::Config(format!("line {l}: {msg}")),
        None => CliError::Config(msg),
    }
}

impl ProblemConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: ProblemConfig = serde_json::from_str(text)
            .map_err(|e| CliError::Config(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        cfg.validate(text)?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    fn validate(&self, text: &str) -> Result<(), CliError> {
        if !self.m.is_finite() || self.m == 0.0 {
            return Err(at(text, "m", format!("mass m = {} must be finite and nonzero; for m = 0 the gap is empty", self.m)));
        }
        if self.loops.is_empty() {
            return Err(at(text, "loops", "loops must be non-empty".into()));
        }
        let n = self.discretization.n;
        if n < 16 || !n.is_power_of_two() {
            return Err(at(text, "n", format!("discretization.n = {n} must be a power of two and at least 16")));
        }
        let s = &self.scan;
        if s.samples < 2 {
            return Err(at(text, "samples", format!("scan.samples = {} must be at least 2", s.samples)));
        }
        if !(s.gap_margin > 0.0 && s.gap_margin < self.m.abs()) {
            return Err(at(text, "gap_margin", format!("scan.gap_margin = {} must lie in (0, |m|)", s.gap_margin)));
        }
        if !(s.tol_accept > 0.0) || !(s.critical_exclusion >= 0.0) {
            return Err(at(text, "scan", "scan.tol_accept must be positive and critical_exclusion non-negative".into()));
        }
        let edge = self.m.abs() - s.gap_margin;
        for (key, v) in [("z_min", s.z_min), ("z_max", s.z_max)] {
            if let Some(z) = v {
                if !(z.abs() <= edge) {
                    return Err(at(text, key, format!("scan.{key} = {z} lies outside [−|m|+gap_margin, |m|−gap_margin] = [{}, {edge}]", -edge)));
                }
            }
        }
        if let (Some(a), Some(b)) = (s.z_min, s.z_max) {
            if a >= b {
                return Err(at(text, "z_min", format!("scan.z_min = {a} must be below scan.z_max = {b}")));
            }
        }
        for (i, l) in self.loops.iter().enumerate() {
            if !(l.eta.is_finite() && l.tau.is_finite()) {
                return Err(at(text, "eta", format!("loops[{i}]: couplings must be finite")));
            }
        }
        Ok(())
    }

    pub fn couplings(&self) -> Vec<CouplingPair> {
        self.loops.iter().map(|l| classify(l.eta, l.tau)).collect()
    }

    pub fn system(&self) -> Result<LoopSystem, CliError> {
        let loops = self
            .loops
            .iter()
            .enumerate()
            .map(|(i, l)| {
                Curve::from_raw(&l.curve.raw(), GEOMETRY_QUAD)
                    .map(|c| (c, classify(l.eta, l.tau)))
                    .map_err(|e| CliError::Config(format!("loops[{i}].curve: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        LoopSystem::new(loops).map_err(|e| CliError::Config(e.to_string()))
    }
}

#[derive(Parser, Debug)]
#[command(name = "diracshell", version, about = "Eigenvalues of Dirac operators with δ-shell interactions on closed curves")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct GlobalArgs {
    /// Problem configuration (JSON).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Regime, interaction type and critical point of every loop.
    Classify,
    /// σ_min(B(z)) on the scan grid, CSV "z,sigma_min".
    Scan,
    /// Accepted eigenvalues, CSV "index,z,sigma_min,multiplicity" or JSON with densities.
    Spectrum,
    /// Eigenfunction sampled on a rectangular grid.
    Eigenfunction {
        #[arg(long, allow_negative_numbers = true)]
        z: f64,
        /// Grid points along x1 and x2.
        #[arg(long, num_args = 2, value_names = ["NX", "NY"])]
        grid: Vec<usize>,
        /// x1_min x1_max x2_min x2_max; defaults to the loops' bounding box widened by half its size.
        #[arg(long, num_args = 4, allow_negative_numbers = true, value_names = ["X1MIN", "X1MAX", "X2MIN", "X2MAX"])]
        bbox: Option<Vec<f64>>,
        #[arg(long, default_value_t = 8)]
        oversample: usize,
    },
    /// Built-in residual suites; exit code 4 when any test fails.
    Verify {
        #[arg(long, value_enum, default_value_t = LevelArg::Quick)]
        level: LevelArg,
        /// Restrict to named suites.
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// Perturb the log-rule weight at offset K by DELTA ("K:DELTA").
        #[arg(long, hide = true)]
        tamper_log_weight: Option<String>,
    },
    /// Eigenvalue counts over a grid of couplings applied to every loop.
    Sweep {
        #[arg(long, num_args = 2, allow_negative_numbers = true, value_names = ["MIN", "MAX"])]
        eta_range: Vec<f64>,
        #[arg(long, num_args = 2, allow_negative_numbers = true, value_names = ["MIN", "MAX"])]
        tau_range: Vec<f64>,
        #[arg(long)]
        steps: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LevelArg {
    Quick,
    Full,
}

/// Parses arguments, runs, and returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    if let Some(k) = cli.global.threads {
        // Fails only if a pool already exists, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k.max(1)).build_global();
    }
    let g = &cli.global;
    match &cli.command {
        Command::Verify { level, suites, tamper_log_weight } => {
            let level = if *level == LevelArg::Full { Level::Full } else { Level::Quick };
            let tamper = tamper_log_weight.as_deref().map(parse_tamper).transpose()?;
            let out = cmd_verify(level, suites, tamper)?;
            emit(g, None, &out.0)?;
            out.1
        }
        cmd => {
            let path = g.config.as_ref().ok_or_else(|| CliError::Config("--config PATH is required".into()))?;
            let cfg = ProblemConfig::load(path)?;
            let format = g.format.unwrap_or(cfg.output.format);
            let text = match cmd {
                Command::Classify => cmd_classify(&cfg, g.format == Some(Format::Json)),
                Command::Scan => cmd_scan(&cfg)?,
                Command::Spectrum => cmd_spectrum(&cfg, format)?,
                Command::Eigenfunction { z, grid, bbox, oversample } => {
                    cmd_eigenfunction(&cfg, *z, [grid[0], grid[1]], bbox.as_deref(), *oversample)?
                }
                Command::Sweep { eta_range, tau_range, steps } => {
                    cmd_sweep(&cfg, [eta_range[0], eta_range[1]], [tau_range[0], tau_range[1]], *steps)?
                }
                Command::Verify { .. } => unreachable!(),
            };
            emit(g, cfg.output.path.as_deref(), &text)
        }
    }
}

fn parse_tamper(s: &str) -> Result<(usize, f64), CliError> {
    let bad = || CliError::Config(format!("--tamper-log-weight expects K:DELTA, got {s}"));
    let (k, d) = s.split_once(':').ok_or_else(bad)?;
    Ok((k.parse().map_err(|_| bad())?, d.parse().map_err(|_| bad())?))
}

fn emit(g: &GlobalArgs, cfg_path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match g.output.as_deref().or(cfg_path) {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Config(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// RFC 4180 table with LF line endings.
pub fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

#[derive(Serialize)]
struct LoopClass {
    index: usize,
    eta: f64,
    tau: f64,
    d: f64,
    regime: Regime,
    interaction: crate::spectral::InteractionType,
    essential_point: Option<f64>,
    dual: Option<(f64, f64)>,
    note: Option<String>,
}

pub fn cmd_classify(cfg: &ProblemConfig, json: bool) -> String {
    let rows: Vec<LoopClass> = cfg
        .couplings()
        .iter()
        .enumerate()
        .map(|(index, c)| {
            let note = match c.regime {
                Regime::Free => Some("operator equals free Dirac".to_string()),
                Regime::Confinement => {
                    let r = transmission_matrix(c, [1.0, 0.0]).expect("R is always defined").r;
                    Some(format!(
                        "confinement: R = (i/2)(σ·ν)(ησ0+τσ3) squares to σ0, at ν = (1,0) R = {}; A = A+ ⊕ A− decouples inside and outside",
                        fmt_mat(&r)
                    ))
                }
                Regime::Critical => Some("critical: essential spectrum gains the point −(τ/η)m".to_string()),
                Regime::Noncritical => None,
            };
            LoopClass {
                index,
                eta: c.eta,
                tau: c.tau,
                d: c.d,
                regime: c.regime,
                interaction: c.interaction_type(),
                essential_point: critical_essential_point(c, cfg.m).ok(),
                dual: dual_coupling(c).ok().map(|d| (d.eta, d.tau)),
                note,
            }
        })
        .collect();
    if json {
        return serde_json::to_string_pretty(&rows).expect("serializable") + "\n";
    }
    let mut out = String::new();
    for r in rows {
        let _ = write!(
            out,
            "loop {}: eta={} tau={} d={} regime={} interaction={}",
            r.index,
            r.eta,
            r.tau,
            r.d,
            serde_json::to_value(r.regime).unwrap().as_str().unwrap(),
            serde_json::to_value(r.interaction).unwrap().as_str().unwrap()
        );
        if let Some(z) = r.essential_point {
            let _ = write!(out, " essential_point={z}");
        }
        if let Some(n) = r.note {
            let _ = write!(out, "\n  {n}");
        }
        out.push('\n');
    }
    out
}

fn fmt_mat(m: &crate::kernel::pauli::Mat2) -> String {
    let c = |v: num_complex::Complex64| format!("{}{:+}i", v.re, v.im);
    format!("[[{}, {}], [{}, {}]]", c(m.0[0][0]), c(m.0[0][1]), c(m.0[1][0]), c(m.0[1][1]))
}

fn spectrum_report(cfg: &ProblemConfig) -> Result<EigenvalueReport, CliError> {
    let sys = cfg.system()?;
    Ok(find_eigenvalues(&sys, cfg.m, cfg.discretization.n, &cfg.scan)?)
}

pub fn cmd_scan(cfg: &ProblemConfig) -> Result<String, CliError> {
    let rep = spectrum_report(cfg)?;
    let mut pts = rep.scan.clone();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(csv_table(&["z", "sigma_min"], pts.into_iter().map(|(z, s)| vec![num(z), num(s)])))
}

pub fn cmd_spectrum(cfg: &ProblemConfig, format: Format) -> Result<String, CliError> {
    let rep = spectrum_report(cfg)?;
    for w in &rep.warnings {
        eprintln!("warning: {w}");
    }
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(&rep).expect("serializable") + "\n",
        Format::Csv => csv_table(
            &["index", "z", "sigma_min", "multiplicity"],
            rep.eigenvalues
                .iter()
                .enumerate()
                .map(|(i, e)| vec![i.to_string(), num(e.z), num(e.sigma_min), e.multiplicity.to_string()]),
        ),
    })
}

pub fn cmd_eigenfunction(
    cfg: &ProblemConfig,
    z: f64,
    grid: [usize; 2],
    bbox: Option<&[f64]>,
    oversample: usize,
) -> Result<String, CliError> {
    if grid[0] == 0 || grid[1] == 0 {
        return Err(CliError::Config("--grid needs positive NX NY".into()));
    }
    let sys = cfg.system()?;
    let rep = find_eigenvalues(&sys, cfg.m, cfg.discretization.n, &cfg.scan)?;
    let entry = rep
        .eigenvalues
        .iter()
        .find(|e| (e.z - z).abs() <= 1e-8)
        .ok_or_else(|| {
            CliError::Numerical(format!("no accepted eigenvalue within 1e-8 of z = {z}; accepted: {:?}", rep.roots()))
        })?;
    let b = match bbox {
        Some(b) => [b[0], b[1], b[2], b[3]],
        None => {
            let mut b = [f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY];
            for (c, _) in sys.loops() {
                let cb = c.bbox();
                b = [b[0].min(cb[0]), b[1].max(cb[1]), b[2].min(cb[2]), b[3].max(cb[3])];
            }
            let (wx, wy) = (0.5 * (b[1] - b[0]), 0.5 * (b[3] - b[2]));
            [b[0] - wx, b[1] + wx, b[2] - wy, b[3] + wy]
        }
    };
    let axis = |lo: f64, hi: f64, k: usize| -> Vec<f64> {
        if k == 1 {
            vec![0.5 * (lo + hi)]
        } else {
            (0..k).map(|i| lo + (hi - lo) * i as f64 / (k - 1) as f64).collect()
        }
    };
    let guard = single_layer_guard(&sys, oversample);
    let points: Vec<[f64; 2]> =
        axis(b[2], b[3], grid[1]).iter().flat_map(|&y| axis(b[0], b[1], grid[0]).into_iter().map(move |x| [x, y])).collect();
    let keep: Vec<bool> = points.iter().map(|p| distance_to_system(&sys, *p) >= guard).collect();
    let targets: Vec<[f64; 2]> = points.iter().zip(&keep).filter(|(_, k)| **k).map(|(p, _)| *p).collect();
    let field = eigenfunction(&sys, cfg.m, entry, &rep.sizes, &targets, oversample)?;
    let mut it = field.into_iter();
    let rows = points.iter().zip(keep).map(|(p, k)| {
        if k {
            let u = it.next().expect("one value per kept point");
            vec![num(p[0]), num(p[1]), num(u[0].re), num(u[0].im), num(u[1].re), num(u[1].im), "0".into()]
        } else {
            let nan = || "NaN".to_string();
            vec![num(p[0]), num(p[1]), nan(), nan(), nan(), nan(), "1".into()]
        }
    });
    Ok(csv_table(&["x1", "x2", "re_u1", "im_u1", "re_u2", "im_u2", "masked"], rows.collect::<Vec<_>>()))
}

pub fn cmd_verify(
    level: Level,
    suites: &[String],
    tamper: Option<(usize, f64)>,
) -> Result<(String, Result<(), CliError>), CliError> {
    let names: Vec<String> =
        if suites.is_empty() { suites_for(level).iter().map(|s| s.to_string()).collect() } else { suites.to_vec() };
    let opts = SuiteOptions { tamper_log_weight: tamper, ..Default::default() };
    let mut rows = Vec::new();
    for name in &names {
        let t = std::time::Instant::now();
        let r = run_suite(name, level, &opts)
            .ok_or_else(|| CliError::Config(format!("unknown suite {name}; known: {}", SUITES.join(", "))))?;
        eprintln!("{name}: {} tests, {:.1} s", r.len(), t.elapsed().as_secs_f64());
        rows.extend(r);
    }
    let failed: Vec<String> = rows.iter().filter(|r| !r.pass).map(|r| format!("{}/{}", r.suite, r.test)).collect();
    let verdict = if failed.is_empty() { Ok(()) } else { Err(CliError::Verification(failed.join(", "))) };
    Ok((rows_to_csv(&rows), verdict))
}

pub fn cmd_sweep(cfg: &ProblemConfig, eta: [f64; 2], tau: [f64; 2], steps: usize) -> Result<String, CliError> {
    if steps == 0 || !eta.iter().chain(&tau).all(|v| v.is_finite()) {
        return Err(CliError::Config("sweep needs finite ranges and steps ≥ 1".into()));
    }
    let axis = |r: [f64; 2]| -> Vec<f64> {
        if steps == 1 {
            vec![r[0]]
        } else {
            (0..steps).map(|i| r[0] + (r[1] - r[0]) * i as f64 / (steps - 1) as f64).collect()
        }
    };
    let mut rows = Vec::new();
    for &e in &axis(eta) {
        for &t in &axis(tau) {
            let c = classify(e, t);
            let mut cell = cfg.clone();
            for l in &mut cell.loops {
                l.eta = e;
                l.tau = t;
            }
            let roots = if c.regime == Regime::Free { Vec::new() } else { spectrum_report(&cell)?.root_multiset() };
            let regime = serde_json::to_value(c.regime).unwrap();
            let zl: Vec<String> = roots.iter().map(|z| num(*z)).collect();
            rows.push(vec![num(e), num(t), regime.as_str().unwrap().to_string(), roots.len().to_string(), zl.join(";")]);
        }
    }
    Ok(csv_table(&["eta", "tau", "regime", "n_eigenvalues", "z_list"], rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASIC: &str = r#"{
  "m": 1.0,
  "loops": [
    {"curve": {"type": "circle", "radius": 1.0, "center": [0.0, 0.0]}, "eta": 2.5, "tau": 1.5}
  ],
  "discretization": {"n": 32}
}"#;

    #[test]
    fn parse_defaults() {
        let c = ProblemConfig::parse(BASIC).unwrap();
        assert_eq!(c.scan, ScanConfig::default());
        assert_eq!(c.output.format, Format::Csv);
    }

    #[test]
    fn round_trip() {
        let c = ProblemConfig::parse(BASIC).unwrap();
        assert_eq!(ProblemConfig::parse(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn errors_carry_lines() {
        let bad = BASIC.replace("\"n\": 32", "\"n\": 100");
        let msg = ProblemConfig::parse(&bad).unwrap_err().to_string();
        assert!(msg.contains("line 6") && msg.contains("power of two"), "{msg}");
        let bad = BASIC.replace("\"eta\": 2.5,", "\"eta\": 2.5");
        let msg = ProblemConfig::parse(&bad).unwrap_err().to_string();
        assert!(msg.contains("line 4"), "{msg}");
        let bad = BASIC.replace("\"m\": 1.0", "\"m\": 0.0");
        assert_eq!(ProblemConfig::parse(&bad).unwrap_err().exit_code(), 2);
        let bad = BASIC.replace("\"type\": \"circle\"", "\"type\": \"square\"");
        assert!(ProblemConfig::parse(&bad).is_err());
    }

    #[test]
    fn classify_critical() {
        let c = ProblemConfig::parse(BASIC).unwrap();
        let text = cmd_classify(&c, false);
        assert!(text.contains("regime=critical") && text.contains("essential_point=-0.6"), "{text}");
    }

    #[test]
    fn classify_free_and_confinement() {
        let c = ProblemConfig::parse(&BASIC.replace("\"eta\": 2.5, \"tau\": 1.5", "\"eta\": 0.0, \"tau\": 0.0")).unwrap();
        assert!(cmd_classify(&c, false).contains("operator equals free Dirac"));
        let c = ProblemConfig::parse(&BASIC.replace("\"eta\": 2.5, \"tau\": 1.5", "\"eta\": 0.0, \"tau\": 2.0")).unwrap();
        let text = cmd_classify(&c, false);
        assert!(text.contains("regime=confinement") && text.contains("A = A+ ⊕ A−"), "{text}");
    }

    #[test]
    fn tamper_parse() {
        assert_eq!(parse_tamper("3:1e-6").unwrap(), (3, 1e-6));
        assert!(parse_tamper("x").is_err());
    }

    #[test]
    fn scan_range_checked() {
        let bad = BASIC.replace("\"discretization\": {\"n\": 32}", "\"discretization\": {\"n\": 32},\n  \"scan\": {\"z_min\": -1.5, \"z_max\": null, \"samples\": 400, \"tol_accept\": 1e-6, \"gap_margin\": 1e-3, \"critical_exclusion\": 0.02}");
        let msg = ProblemConfig::parse(&bad).unwrap_err().to_string();
        assert!(msg.contains("z_min") && msg.contains("line 7"), "{msg}");
    }
}
