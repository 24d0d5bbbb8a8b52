//! The `specgeo` command line: coefficient tables, trace evaluation and
//! fitting, verification suites and inverse runs.
//!
//! Tables default to CSV with a header row, structured objects to JSON.
//! Exit codes: 0 success, 2 invalid input, 3 numerical failure or a failed
//! verification. The resolved configuration is echoed to stderr as JSON.

use crate::error::Error;
use crate::fitting::{fit_series, FitConfig, Weighting, DEFAULT_CONDITION_CAP};
use crate::geometry::{Angle, AsymptoticSeries, OrbisurfaceSpec, PolygonSpec};
use crate::invariants::{
    hyper_series_legacy, lune_series, orbifold_series, polygon_series, round_sphere,
    sphere_mod_cyclic, sphere_mod_dihedral, DEFAULT_MAX_N,
};
use crate::inverse::{recover_orbifold, recover_polygon, PeelConfig};
use crate::numkit::{format_float, int, Scalar};
use crate::spectra::{heat_trace_grid, QuotientGroup, Spectrum};
use crate::suites::{
    closed_sum_suite, relation_suite, roundtrip_suite, trig_identity_suite, wedge_suite,
    RELATION_ORDERS, RELATION_TIMES,
};
use crate::wedgekernel::{green_suite, mehler_suite, IdentityCheck, GREEN_SAMPLE, MEHLER_SAMPLE};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

/// Environment variable capping the worker threads.
pub const THREADS_VAR: &str = "SPECGEO_THREADS";

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "specgeo",
    version,
    about = "Heat-trace invariants of polygons and orbisurfaces"
)]
pub struct Cli {
    /// Output format; tables default to csv, structured objects to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Heat-trace coefficients of a geometry.
    #[command(subcommand)]
    Coeffs(CoeffsCmd),
    /// Heat traces of explicit spectra and fits to them.
    #[command(subcommand)]
    Trace(TraceCmd),
    /// Verification suites; exit 3 if any check fails.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Recover geometry from a series file.
    #[command(subcommand)]
    Invert(InvertCmd),
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CoeffsCmd {
    /// Geodesic polygon of constant curvature.
    Polygon(PolygonArgs),
    /// Closed orbisurface of constant curvature.
    Orbifold(OrbifoldArgs),
    /// Spherical lune of angle pi/k.
    Lune(LuneArgs),
    /// Round sphere.
    Sphere(SphereArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct PolygonArgs {
    /// Curvature: `p`, `p/q` or a decimal.
    #[arg(long, value_parser = parse_scalar, allow_hyphen_values = true)]
    pub kappa: Scalar,
    /// Area, e.g. `2pi` or `1/3pi`.
    #[arg(long, value_parser = parse_scalar)]
    pub area: Scalar,
    #[arg(long, value_parser = parse_scalar, default_value = "0")]
    pub perimeter: Scalar,
    /// Comma-separated angles: `p/qpi` exact, decimals in radians.
    #[arg(long, value_parser = parse_angle, value_delimiter = ',')]
    pub angles: Vec<Angle>,
    /// Largest exponent n of t^(n/2).
    #[arg(long, default_value_t = DEFAULT_MAX_N)]
    pub order: i32,
    /// Assemble from the hyperbolic wedge coefficients (curvature -1 only).
    #[arg(long)]
    pub legacy: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct OrbifoldArgs {
    #[arg(long, value_parser = parse_scalar, allow_hyphen_values = true)]
    pub kappa: Scalar,
    #[arg(long, value_parser = parse_scalar)]
    pub area: Scalar,
    /// Length of the mirror locus.
    #[arg(long, value_parser = parse_scalar, default_value = "0")]
    pub mirror: Scalar,
    /// Comma-separated cone orders.
    #[arg(long, value_delimiter = ',')]
    pub cones: Vec<u32>,
    /// Comma-separated dihedral half-orders.
    #[arg(long, value_delimiter = ',')]
    pub dihedral: Vec<u32>,
    #[arg(long, default_value_t = DEFAULT_MAX_N)]
    pub order: i32,
}

#[derive(Debug, Args, Serialize)]
pub struct LuneArgs {
    #[arg(long)]
    pub k: u32,
    /// Positive curvature; exact values must be perfect squares.
    #[arg(long, value_parser = parse_scalar, default_value = "1")]
    pub kappa: Scalar,
    #[arg(long, default_value_t = DEFAULT_MAX_N)]
    pub order: i32,
}

#[derive(Debug, Args, Serialize)]
pub struct SphereArgs {
    #[arg(long, value_parser = parse_scalar, default_value = "1")]
    pub kappa: Scalar,
    #[arg(long, default_value_t = DEFAULT_MAX_N)]
    pub order: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumArg {
    Sphere,
    Lune,
    Cyclic,
    Dihedral,
}

#[derive(Debug, Args, Serialize)]
pub struct SpectrumArgs {
    #[arg(long, value_enum)]
    pub spectrum: SpectrumArg,
    /// Group order or lune index; required except for the sphere.
    #[arg(long)]
    pub k: Option<u64>,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TraceCmd {
    /// Heat trace with certified tail bounds on a log-spaced grid or at given times.
    Eval {
        #[command(flatten)]
        spectrum: SpectrumArgs,
        /// Comma-separated times; overrides the grid.
        #[arg(long, value_delimiter = ',')]
        t: Vec<f64>,
        #[arg(long, default_value_t = 0.02)]
        t_min: f64,
        #[arg(long, default_value_t = 0.2)]
        t_max: f64,
        #[arg(long, default_value_t = 15)]
        points: usize,
        /// Relative accuracy of each truncated sum.
        #[arg(long, default_value_t = 1e-12)]
        rel_tol: f64,
    },
    /// Fit `sum c_n t^(n/2)` to a CSV written by `trace eval` and compare
    /// with the closed-form coefficients.
    Fit {
        #[command(flatten)]
        spectrum: SpectrumArgs,
        #[arg(long)]
        input: PathBuf,
        /// Comma-separated exponents n; default depends on the spectrum.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        exponents: Vec<i32>,
        #[arg(long, value_enum, default_value = "relative")]
        weighting: WeightingArg,
        #[arg(long, default_value_t = DEFAULT_CONDITION_CAP)]
        condition_cap: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightingArg {
    None,
    Relative,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyCmd {
    /// Bernoulli/trigonometric identities and closed cosecant sums.
    Trig {
        #[arg(long, value_parser = parse_range, default_value = "2..40")]
        k: (usize, usize),
        #[arg(long, value_parser = parse_range, default_value = "0..8")]
        eta: (usize, usize),
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Range of k for the closed power sums.
        #[arg(long, value_parser = parse_range, default_value = "2..200")]
        closed_k: (usize, usize),
        #[arg(long, default_value_t = 1e-10)]
        closed_tol: f64,
    },
    /// Cyclic minus dihedral quotient traces against the lune trace.
    Relation {
        #[arg(long, value_delimiter = ',', default_values_t = RELATION_ORDERS)]
        k: Vec<u64>,
        #[arg(long, value_delimiter = ',', default_values_t = RELATION_TIMES)]
        t: Vec<f64>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 1e-12)]
        rel_tol: f64,
    },
    /// Mehler-type product integral of Legendre functions.
    Mehler {
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Laplace transform of the heat kernel against the Green's function.
    Green {
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Image kernels, dual heat kernel formulas, vertex and sector fits.
    Wedge,
    /// Random polygons and orbisurfaces recovered from their series.
    Roundtrip {
        #[arg(long, default_value_t = 25)]
        polygons: usize,
        #[arg(long, default_value_t = 10)]
        orbifolds: usize,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long, default_value_t = 84)]
        order: i32,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InvertCmd {
    /// Area, perimeter, curvature, angles and Euler characteristic.
    Polygon {
        #[arg(long)]
        series: PathBuf,
    },
    /// Area, mirror length, curvature and the order multiset.
    Orbifold {
        #[arg(long)]
        series: PathBuf,
        /// Curvature; needed when the mirror locus is empty.
        #[arg(long, value_parser = parse_scalar, allow_hyphen_values = true)]
        kappa: Option<Scalar>,
    },
}

fn parse_scalar(s: &str) -> Result<Scalar, String> {
    Scalar::parse(s).ok_or_else(|| format!("cannot read {s:?} as p, p/q, p/qpi or a decimal"))
}

fn parse_angle(s: &str) -> Result<Angle, String> {
    Angle::parse(s).ok_or_else(|| format!("cannot read {s:?} as p/qpi or radians"))
}

/// `a..b` (inclusive) or a single value.
fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let bad = || format!("cannot read {s:?} as a range a..b");
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (
            a.trim().parse().map_err(|_| bad())?,
            b.trim().parse().map_err(|_| bad())?,
        ),
        None => {
            let v = s.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if a > b {
        return Err(format!("empty range {s:?}"));
    }
    Ok((a, b))
}

/// Why a run stopped.
#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Numerical(String),
    #[error("output error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(std::io::Error::other(e))
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Input(_) | Failure::Io(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }
}

type Outcome = Result<(), Failure>;

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Never panics on bad input.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let threads = match configure_threads() {
        Ok(t) => t,
        Err(f) => {
            let _ = writeln!(err, "error: {f}");
            return f.code();
        }
    };
    let config = serde_json::json!({ "threads": threads, "cli": &cli });
    let _ = writeln!(err, "config: {config}");
    match dispatch(&cli, out, err) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {f}");
            f.code()
        }
    }
}

/// Reads the thread cap and sizes the global pool. A pool built earlier in
/// the same process is kept.
fn configure_threads() -> Result<Option<usize>, Failure> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(None);
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n >= 1).ok_or_else(|| {
        Failure::Input(format!(
            "{THREADS_VAR} must be a positive integer, got {raw:?}"
        ))
    })?;
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(Some(n))
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match &cli.command {
        Command::Coeffs(c) => coeffs(c, cli.format.unwrap_or(Format::Json), out),
        Command::Trace(c) => trace(c, cli.format.unwrap_or(Format::Csv), out, err),
        Command::Verify(c) => verify(c, cli.format.unwrap_or(Format::Csv), out, err),
        Command::Invert(c) => invert(c, cli.format.unwrap_or(Format::Json), out),
    }
}

fn write_json<T: Serialize + ?Sized>(value: &T, out: &mut dyn Write) -> Outcome {
    let text = serde_json::to_string_pretty(value).map_err(std::io::Error::other)?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn write_csv(header: &[&str], rows: &[Vec<String>], out: &mut dyn Write) -> Outcome {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

/// `n/2` as text: `-1`, `-1/2`, `0`, `3/2`.
fn half_power(n: i32) -> String {
    if n % 2 == 0 {
        (n / 2).to_string()
    } else {
        format!("{n}/2")
    }
}

fn write_series(series: &AsymptoticSeries, format: Format, out: &mut dyn Write) -> Outcome {
    match format {
        Format::Json => write_json(series, out),
        Format::Csv => {
            let rows: Vec<Vec<String>> = (series.min_n()..=series.max_n())
                .map(|n| {
                    let c = series.coeff(n);
                    vec![
                        n.to_string(),
                        half_power(n),
                        c.to_string(),
                        format_float(c.to_f64()),
                    ]
                })
                .collect();
            write_csv(&["n", "power", "value", "value_f64"], &rows, out)
        }
    }
}

fn coeffs(cmd: &CoeffsCmd, format: Format, out: &mut dyn Write) -> Outcome {
    let series = match cmd {
        CoeffsCmd::Polygon(a) => {
            let spec = PolygonSpec::new(
                a.kappa.clone(),
                a.area.clone(),
                a.perimeter.clone(),
                a.angles.clone(),
            );
            if a.legacy {
                hyper_series_legacy(&spec, a.order)?
            } else {
                polygon_series(&spec, a.order)?
            }
        }
        CoeffsCmd::Orbifold(a) => {
            let spec = OrbisurfaceSpec {
                curvature: a.kappa.clone(),
                area: a.area.clone(),
                mirror_length: a.mirror.clone(),
                cone_orders: a.cones.clone(),
                dihedral_half_orders: a.dihedral.clone(),
            };
            orbifold_series(&spec, a.order)?
        }
        CoeffsCmd::Lune(a) => lune_series(a.k, &a.kappa, a.order)?,
        CoeffsCmd::Sphere(a) => polygon_series(&sphere_spec(&a.kappa)?, a.order)?,
    };
    write_series(&series, format, out)
}

fn sphere_spec(kappa: &Scalar) -> Result<PolygonSpec, Failure> {
    if kappa.signum() <= 0 {
        return Err(Failure::Input("the sphere needs positive curvature".into()));
    }
    if let Some(q) = kappa.as_exact().and_then(|p| p.as_rational()) {
        return Ok(round_sphere(q));
    }
    let area = 4.0 * std::f64::consts::PI / kappa.to_f64();
    Ok(PolygonSpec::new(
        kappa.clone(),
        Scalar::Float(area),
        Scalar::integer(0),
        vec![],
    ))
}

fn spectrum_of(a: &SpectrumArgs) -> Result<Spectrum, Failure> {
    let need_k = || {
        a.k.ok_or_else(|| Failure::Input(format!("--k is required for {:?}", a.spectrum)))
    };
    Ok(match a.spectrum {
        SpectrumArg::Sphere => Spectrum::sphere(a.radius)?,
        SpectrumArg::Lune => Spectrum::lune(need_k()?, a.radius)?,
        SpectrumArg::Cyclic => Spectrum::quotient(QuotientGroup::Cyclic, need_k()?, a.radius)?,
        SpectrumArg::Dihedral => Spectrum::quotient(QuotientGroup::Dihedral, need_k()?, a.radius)?,
    })
}

/// Closed-form expansion of the spectrum on the unit sphere, to be rescaled
/// by `r^(-n)` for radius `r`.
fn unit_series(a: &SpectrumArgs, max_n: i32) -> Result<AsymptoticSeries, Failure> {
    let k = || -> Result<u32, Failure> {
        let k =
            a.k.ok_or_else(|| Failure::Input("--k is required".into()))?;
        u32::try_from(k).map_err(|_| Failure::Input(format!("k = {k} is too large")))
    };
    Ok(match a.spectrum {
        SpectrumArg::Sphere => polygon_series(&round_sphere(int(1)), max_n)?,
        SpectrumArg::Lune => lune_series(k()?, &Scalar::integer(1), max_n)?,
        SpectrumArg::Cyclic => orbifold_series(&sphere_mod_cyclic(k()?, int(1)), max_n)?,
        SpectrumArg::Dihedral => {
            let spec = sphere_mod_dihedral(k()?, int(1))
                .ok_or_else(|| Failure::Input("bad dihedral order".into()))?;
            orbifold_series(&spec, max_n)?
        }
    })
}

fn default_exponents(s: SpectrumArg) -> Vec<i32> {
    match s {
        SpectrumArg::Sphere => FitConfig::sphere_default().exponents,
        _ => FitConfig::lune_default().exponents,
    }
}

fn trace(cmd: &TraceCmd, format: Format, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match cmd {
        TraceCmd::Eval {
            spectrum,
            t,
            t_min,
            t_max,
            points,
            rel_tol,
        } => {
            let spec = spectrum_of(spectrum)?;
            let grid = if t.is_empty() {
                if !(*t_min > 0.0 && t_max > t_min && *points >= 2) {
                    return Err(Failure::Input(
                        "need 0 < t-min < t-max and at least 2 points".into(),
                    ));
                }
                crate::fitting::log_grid(*t_min, *t_max, *points)
            } else {
                t.clone()
            };
            let values = heat_trace_grid(&spec, &grid, *rel_tol)?;
            match format {
                Format::Json => write_json(&values, out),
                Format::Csv => {
                    let rows: Vec<Vec<String>> = values
                        .iter()
                        .map(|v| {
                            vec![
                                format_float(v.t),
                                format_float(v.value),
                                format_float(v.tail_bound),
                                v.terms_used.to_string(),
                            ]
                        })
                        .collect();
                    write_csv(&["t", "value", "tail_bound", "terms_used"], &rows, out)
                }
            }
        }
        TraceCmd::Fit {
            spectrum,
            input,
            exponents,
            weighting,
            condition_cap,
        } => {
            let samples = read_trace_csv(input)?;
            let exponents = if exponents.is_empty() {
                default_exponents(spectrum.spectrum)
            } else {
                exponents.clone()
            };
            let mut config = FitConfig::new(samples.iter().map(|s| s.0).collect(), exponents);
            config.weighting = match weighting {
                WeightingArg::None => Weighting::None,
                WeightingArg::Relative => Weighting::Relative,
            };
            config.condition_cap = *condition_cap;
            let mut samples = samples;
            // the fit wants decreasing times
            samples.sort_by(|a, b| b.0.total_cmp(&a.0));
            config.t_grid = samples.iter().map(|s| s.0).collect();
            config.validate()?;
            if !(spectrum.radius.is_finite() && spectrum.radius > 0.0) {
                return Err(Failure::Input("radius must be positive".into()));
            }
            let fit = fit_series(&samples, &config)?;
            let max_n = *config.exponents.iter().max().unwrap_or(&0);
            let unit = unit_series(spectrum, max_n.max(0))?;
            writeln!(
                err,
                "fit: residual_norm={} condition_estimate={}",
                format_float(fit.residual_norm),
                format_float(fit.condition_estimate)
            )?;
            let rows: Vec<(i32, f64, f64)> = fit
                .coefficients
                .iter()
                .map(|(&n, &c)| {
                    let expected = if unit.contains(n) {
                        unit.coeff(n).to_f64() * spectrum.radius.powi(-n)
                    } else {
                        f64::NAN
                    };
                    (n, c, expected)
                })
                .collect();
            match format {
                Format::Json => {
                    let body = serde_json::json!({
                        "fit": &fit,
                        "expected": rows.iter().map(|(n, _, e)| (n.to_string(), *e)).collect::<std::collections::BTreeMap<_, _>>(),
                    });
                    write_json(&body, out)
                }
                Format::Csv => {
                    let table: Vec<Vec<String>> = rows
                        .iter()
                        .map(|&(n, c, e)| {
                            vec![
                                n.to_string(),
                                half_power(n),
                                format_float(c),
                                format_float(e),
                                format_float(c - e),
                            ]
                        })
                        .collect();
                    write_csv(
                        &["n", "power", "fitted", "expected", "difference"],
                        &table,
                        out,
                    )
                }
            }
        }
    }
}

fn read_trace_csv(path: &PathBuf) -> Result<Vec<(f64, f64)>, Failure> {
    let mut rdr = csv::Reader::from_path(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    let headers = rdr
        .headers()
        .map_err(|e| Failure::Input(e.to_string()))?
        .clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Failure::Input(format!("{} lacks a {name:?} column", path.display())))
    };
    let (ti, vi) = (col("t")?, col("value")?);
    let mut samples = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Failure::Input(e.to_string()))?;
        let get = |i: usize| -> Result<f64, Failure> {
            rec.get(i)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| Failure::Input(format!("row {}: unreadable number", line + 2)))
        };
        samples.push((get(ti)?, get(vi)?));
    }
    Ok(samples)
}

/// Writes a verification table and fails with the first failing residual.
fn finish_table(
    header: &[&str],
    rows: Vec<(Vec<String>, bool, String)>,
    format: Format,
    out: &mut dyn Write,
) -> Outcome {
    let mut table = Vec::with_capacity(rows.len());
    let mut failures = Vec::new();
    for (mut cells, pass, note) in rows {
        cells.push(pass.to_string());
        if !pass {
            failures.push(note);
        }
        table.push(cells);
    }
    let mut full: Vec<&str> = header.to_vec();
    full.push("pass");
    match format {
        Format::Csv => write_csv(&full, &table, out)?,
        Format::Json => {
            let objs: Vec<serde_json::Map<String, serde_json::Value>> = table
                .iter()
                .map(|r| {
                    full.iter()
                        .zip(r)
                        .map(|(h, v)| (h.to_string(), serde_json::Value::String(v.clone())))
                        .collect()
                })
                .collect();
            write_json(&objs, out)?;
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Numerical(format!(
            "{} check(s) failed; first: {}",
            failures.len(),
            failures[0]
        )))
    }
}

fn f(x: f64) -> String {
    format_float(x)
}

fn identity_row(
    params: &[f64],
    r: &crate::error::Result<IdentityCheck>,
    tol: f64,
) -> (Vec<String>, bool, String) {
    let mut cells: Vec<String> = params.iter().map(|&p| f(p)).collect();
    let label = cells.join(" ");
    match r {
        Ok(c) => {
            cells.extend([
                f(c.lhs),
                f(c.rhs),
                f(c.residual),
                f(c.error_estimate),
                f(c.cutoff),
                f(tol),
            ]);
            let pass = c.residual <= tol;
            (cells, pass, format!("({label}) residual {}", f(c.residual)))
        }
        Err(e) => {
            cells.extend(std::iter::repeat_n(f(f64::NAN), 5).chain([f(tol)]));
            (cells, false, format!("({label}) {e}"))
        }
    }
}

fn verify(cmd: &VerifyCmd, format: Format, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match cmd {
        VerifyCmd::Trig {
            k,
            eta,
            tol,
            closed_k,
            closed_tol,
        } => {
            let mut rows = trig_identity_suite(k.0..=k.1, eta.0..=eta.1, *tol)?;
            rows.extend(closed_sum_suite(
                closed_k.0..=closed_k.1,
                1..=3,
                *closed_tol,
            )?);
            let table = rows
                .iter()
                .map(|r| {
                    let cells = vec![
                        r.check.as_str().into(),
                        r.k.to_string(),
                        r.index.to_string(),
                        f(r.residual),
                        f(r.tol),
                    ];
                    (
                        cells,
                        r.pass(),
                        format!(
                            "{} k={} index={} residual {}",
                            r.check.as_str(),
                            r.k,
                            r.index,
                            f(r.residual)
                        ),
                    )
                })
                .collect();
            finish_table(
                &["check", "k", "index", "residual", "tol"],
                table,
                format,
                out,
            )
        }
        VerifyCmd::Relation { k, t, tol, rel_tol } => {
            let rows = relation_suite(k, t, *rel_tol)?;
            let table = rows
                .iter()
                .map(|r| {
                    let cells = vec![
                        r.k.to_string(),
                        f(r.t),
                        f(r.cyclic.value),
                        f(r.dihedral.value),
                        f(r.lune.value),
                        f(r.residual),
                        f(r.tail_sum),
                    ];
                    (
                        cells,
                        r.holds(*tol),
                        format!("k={} t={} residual {}", r.k, r.t, f(r.residual)),
                    )
                })
                .collect();
            finish_table(
                &[
                    "k", "t", "cyclic", "dihedral", "lune", "residual", "tail_sum",
                ],
                table,
                format,
                out,
            )
        }
        VerifyCmd::Mehler { tol } => {
            let results = mehler_suite(&MEHLER_SAMPLE);
            let table = MEHLER_SAMPLE
                .iter()
                .zip(&results)
                .map(|(&(nu, th, a, b), r)| identity_row(&[nu, th, a, b], r, *tol))
                .collect();
            let header = [
                "nu",
                "theta",
                "a",
                "b",
                "lhs",
                "rhs",
                "residual",
                "error_estimate",
                "cutoff",
                "tol",
            ];
            finish_table(&header, table, format, out)
        }
        VerifyCmd::Green { tol } => {
            let results = green_suite(&GREEN_SAMPLE);
            let table = GREEN_SAMPLE
                .iter()
                .zip(&results)
                .map(|(&(d, s), r)| identity_row(&[d, s], r, *tol))
                .collect();
            let header = [
                "d",
                "s",
                "lhs",
                "rhs",
                "residual",
                "error_estimate",
                "cutoff",
                "tol",
            ];
            finish_table(&header, table, format, out)
        }
        VerifyCmd::Wedge => {
            let rows = wedge_suite()?;
            let table = rows
                .iter()
                .map(|r| {
                    let cells = vec![
                        r.check.into(),
                        r.parameter.clone(),
                        f(r.value),
                        f(r.expected),
                        f(r.residual),
                        f(r.tol),
                    ];
                    (
                        cells,
                        r.pass(),
                        format!("{} {} residual {}", r.check, r.parameter, f(r.residual)),
                    )
                })
                .collect();
            finish_table(
                &["check", "parameter", "value", "expected", "residual", "tol"],
                table,
                format,
                out,
            )
        }
        VerifyCmd::Roundtrip {
            polygons,
            orbifolds,
            seed,
            order,
        } => {
            if *order < 2 {
                return Err(Failure::Input("order must be at least 2".into()));
            }
            let rows = roundtrip_suite(*polygons, *orbifolds, *seed, *order);
            let passed = rows.iter().filter(|r| r.outcome.pass).count();
            writeln!(err, "roundtrip: {passed}/{} recovered", rows.len())?;
            let table = rows
                .into_iter()
                .map(|r| {
                    let note = format!("{} {}: {}", r.kind.as_str(), r.index, r.outcome.detail);
                    let cells = vec![
                        r.kind.as_str().into(),
                        r.index.to_string(),
                        r.outcome.input,
                        r.outcome.recovered,
                        r.outcome.detail,
                    ];
                    (cells, r.outcome.pass, note)
                })
                .collect();
            finish_table(
                &["kind", "index", "input", "recovered", "detail"],
                table,
                format,
                out,
            )
        }
    }
}

fn read_series(path: &PathBuf) -> Result<AsymptoticSeries, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn invert(cmd: &InvertCmd, format: Format, out: &mut dyn Write) -> Outcome {
    if format != Format::Json {
        return Err(Failure::Input(
            "recovered geometry is written as JSON only".into(),
        ));
    }
    match cmd {
        InvertCmd::Polygon { series } => {
            let s = read_series(series)?;
            write_json(&recover_polygon(&s, &PeelConfig::default())?, out)
        }
        InvertCmd::Orbifold { series, kappa } => {
            let s = read_series(series)?;
            write_json(
                &recover_orbifold(&s, kappa.clone(), &PeelConfig::reciprocal())?,
                out,
            )
        }
    }
}
