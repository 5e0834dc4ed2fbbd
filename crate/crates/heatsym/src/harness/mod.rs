//! Run configuration, comparison metrics, CSV emission, and the CLI.
//!
//! Configs are flat `key = value` files (`#` starts a comment). Keys:
//!
//! ```text
//! problem        ibvp1 | ibvp2
//! T_i, T_s       K      (ibvp1 requires both; ibvp2 defaults T_i = 0)
//! q0pp           W/m^2  (required for ibvp2)
//! k              W/(m K)   rho kg/m^3   c_heat J/(kg K)
//! alpha          m^2/s  (derived as k/(rho*c_heat) when absent)
//! L m   dx m   dt s   theta [0,1]   t_end s
//! snapshot_times comma-separated seconds
//! output_dir     path for CSV output
//! ```
//!
//! Material properties default to AISI 304; grid keys default to the
//! per-problem solver defaults. CSV output is deterministic: 12 significant
//! digits, `.` decimal separator, `\n` line endings.

pub mod cli;

pub use cli::cli;

use crate::analytic::{self, temp_ibvp1, temp_ibvp2, AnalyticError, ThermalConfig};
use crate::fdsolver::{
    solve_fd, validate_truncation, Field, GridSpec, SolverError, TruncationReport,
    DEFAULT_TRUNCATION_TOLERANCE,
};
use crate::Problem;
use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub what: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(n) => write!(f, "config line {n}: {}", self.what),
            None => write!(f, "config: {}", self.what),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug)]
pub enum HarnessError {
    Config(ConfigError),
    Solver(SolverError),
    Analytic(AnalyticError),
    Io(String),
    Report { what: String },
}

impl fmt::Display for HarnessError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HarnessError::Config(e) => e.fmt(f),
            HarnessError::Solver(e) => e.fmt(f),
            HarnessError::Analytic(e) => e.fmt(f),
            HarnessError::Io(what) => write!(f, "io error: {what}"),
            HarnessError::Report { what } => write!(f, "report error: {what}"),
        }
    }
}

impl std::error::Error for HarnessError {}

impl From<ConfigError> for HarnessError {
    fn from(e: ConfigError) -> Self {
        HarnessError::Config(e)
    }
}

impl From<SolverError> for HarnessError {
    fn from(e: SolverError) -> Self {
        HarnessError::Solver(e)
    }
}

impl From<AnalyticError> for HarnessError {
    fn from(e: AnalyticError) -> Self {
        HarnessError::Analytic(e)
    }
}

impl From<std::io::Error> for HarnessError {
    fn from(e: std::io::Error) -> Self {
        HarnessError::Io(e.to_string())
    }
}

/// A fully resolved run: problem, physics, grid, output location.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub problem: Problem,
    pub thermal: ThermalConfig,
    pub grid: GridSpec,
    pub output_dir: PathBuf,
}

const KNOWN_KEYS: [&str; 15] = [
    "problem", "T_i", "T_s", "q0pp", "k", "rho", "c_heat", "alpha", "L", "dx", "dt", "theta",
    "t_end", "snapshot_times", "output_dir",
];

struct RawConfig {
    entries: BTreeMap<String, (usize, String)>,
}

impl RawConfig {
    fn parse(text: &str) -> Result<RawConfig, ConfigError> {
        let mut entries = BTreeMap::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw_line.find('#') {
                Some(p) => &raw_line[..p],
                None => raw_line,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError {
                    line: Some(line_no),
                    what: format!("expected `key = value`, got `{line}`"),
                });
            };
            let key = key.trim();
            let value = value.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(ConfigError {
                    line: Some(line_no),
                    what: format!("unknown key `{key}`"),
                });
            }
            if entries.insert(key.to_string(), (line_no, value.to_string())).is_some() {
                return Err(ConfigError {
                    line: Some(line_no),
                    what: format!("duplicate key `{key}`"),
                });
            }
        }
        Ok(RawConfig { entries })
    }

    fn get(&self, key: &str) -> Option<&(usize, String)> {
        self.entries.get(key)
    }

    fn get_f64(&self, key: &str) -> Result<Option<(usize, f64)>, ConfigError> {
        match self.entries.get(key) {
            None => Ok(None),
            Some((line, value)) => match value.parse::<f64>() {
                Ok(v) => Ok(Some((*line, v))),
                Err(_) => Err(ConfigError {
                    line: Some(*line),
                    what: format!("cannot parse `{value}` as a number for `{key}`"),
                }),
            },
        }
    }
}

/// Parse a config text. `fill_example_data` supplies the worked-example
/// values for the per-problem required keys (used by `reproduce-figures`).
pub fn parse_config(text: &str, fill_example_data: bool) -> Result<RunConfig, ConfigError> {
    parse_config_inner(text, None, fill_example_data)
}

/// Parse a config text for a fixed problem, ignoring any `problem` key and
/// filling absent problem data with the worked-example values.
pub fn parse_config_for_problem(text: &str, problem: Problem) -> Result<RunConfig, ConfigError> {
    parse_config_inner(text, Some(problem), true)
}

fn parse_config_inner(
    text: &str,
    force_problem: Option<Problem>,
    fill_example_data: bool,
) -> Result<RunConfig, ConfigError> {
    let raw = RawConfig::parse(text)?;

    let problem = match (force_problem, raw.get("problem")) {
        (Some(p), _) => p,
        (None, Some((line, value))) => value.parse::<Problem>().map_err(|e| ConfigError {
            line: Some(*line),
            what: e,
        })?,
        (None, None) => {
            return Err(ConfigError {
                line: None,
                what: "missing required key `problem` (ibvp1 additionally requires T_i and \
                       T_s; ibvp2 requires q0pp)"
                    .to_string(),
            })
        }
    };

    let kcond = raw.get_f64("k")?.map(|(_, v)| v).unwrap_or(analytic::AISI304_KCOND);
    let rho = raw.get_f64("rho")?.map(|(_, v)| v).unwrap_or(analytic::AISI304_RHO);
    let c_heat = raw.get_f64("c_heat")?.map(|(_, v)| v).unwrap_or(analytic::AISI304_C_HEAT);
    let alpha = match raw.get_f64("alpha")? {
        Some((line, v)) => {
            if v <= 0.0 || v.is_nan() {
                return Err(ConfigError {
                    line: Some(line),
                    what: format!("alpha must be positive, got {v}"),
                });
            }
            v
        }
        None => ThermalConfig::derived_alpha(kcond, rho, c_heat),
    };

    let example = ThermalConfig::aisi304(problem);
    let mut missing = Vec::new();
    let required_f64 = |key: &str, missing: &mut Vec<&'static str>, name: &'static str, example_value: f64| -> Result<f64, ConfigError> {
        match raw.get_f64(key)? {
            Some((_, v)) => Ok(v),
            None if fill_example_data => Ok(example_value),
            None => {
                missing.push(name);
                Ok(f64::NAN)
            }
        }
    };
    let (t_init, t_surf, q0pp) = match problem {
        Problem::Ibvp1 => {
            let t_init = required_f64("T_i", &mut missing, "T_i", example.t_init)?;
            let t_surf = required_f64("T_s", &mut missing, "T_s", example.t_surf)?;
            let q0pp = raw.get_f64("q0pp")?.map(|(_, v)| v).unwrap_or(0.0);
            (t_init, t_surf, q0pp)
        }
        Problem::Ibvp2 => {
            let q0pp = required_f64("q0pp", &mut missing, "q0pp", example.q0pp)?;
            let t_init = raw.get_f64("T_i")?.map(|(_, v)| v).unwrap_or(0.0);
            let t_surf = raw.get_f64("T_s")?.map(|(_, v)| v).unwrap_or(0.0);
            (t_init, t_surf, q0pp)
        }
    };
    if !missing.is_empty() {
        return Err(ConfigError {
            line: None,
            what: format!("missing required key(s) for {problem}: {}", missing.join(", ")),
        });
    }

    let defaults = GridSpec::defaults_for(problem);
    let length = raw.get_f64("L")?.map(|(_, v)| v).unwrap_or(defaults.length);
    let dx = raw.get_f64("dx")?.map(|(_, v)| v).unwrap_or(defaults.dx);
    let dt = raw.get_f64("dt")?.map(|(_, v)| v).unwrap_or(defaults.dt);
    let theta = raw.get_f64("theta")?.map(|(_, v)| v).unwrap_or(defaults.theta);
    let t_end = raw.get_f64("t_end")?.map(|(_, v)| v).unwrap_or(defaults.t_end);
    let snapshot_times = match raw.get("snapshot_times") {
        None => defaults.snapshot_times.clone(),
        Some((line, value)) => {
            let mut times = Vec::new();
            for piece in value.split(',') {
                let piece = piece.trim();
                let v = piece.parse::<f64>().map_err(|_| ConfigError {
                    line: Some(*line),
                    what: format!("cannot parse snapshot time `{piece}`"),
                })?;
                times.push(v);
            }
            times
        }
    };

    let thermal = ThermalConfig {
        kcond,
        rho,
        c_heat,
        alpha,
        t_init,
        t_surf,
        q0pp,
        length,
    };
    thermal.validate().map_err(|e| ConfigError { line: None, what: e.to_string() })?;

    let grid_line = raw.get("dx").or_else(|| raw.get("L")).map(|(l, _)| *l);
    let grid = GridSpec::new(length, dx, dt, theta, t_end, &snapshot_times)
        .map_err(|e| ConfigError { line: grid_line, what: e.to_string() })?;

    let output_dir = raw
        .get("output_dir")
        .map(|(_, v)| PathBuf::from(v))
        .unwrap_or_else(|| PathBuf::from("out"));

    Ok(RunConfig { problem, thermal, grid, output_dir })
}

/// Load and validate a config file.
pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = fs::read_to_string(path).map_err(|e| ConfigError {
        line: None,
        what: format!("cannot read {}: {e}", path.display()),
    })?;
    parse_config(&text, false)
}

/// Deterministic 12-significant-digit float format used in all CSV output.
pub fn format_value(v: f64) -> String {
    format!("{v:.11e}")
}

fn time_label(t: f64) -> String {
    if (t - t.round()).abs() < 1e-9 {
        format!("{}", t.round() as i64)
    } else {
        format!("{t}").replace('.', "p")
    }
}

/// Error metrics of one snapshot comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotError {
    pub time: f64,
    /// Max absolute analytic-vs-numeric difference, K.
    pub linf: f64,
    /// Root-mean-square difference over the nodes, K.
    pub l2: f64,
    /// `linf` over the problem's temperature scale (`|T_s - T_i|`, or the
    /// analytic surface value for the flux problem).
    pub relative_linf: f64,
}

#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub problem: Problem,
    pub per_snapshot: Vec<SnapshotError>,
    pub truncation: TruncationReport,
}

impl fmt::Display for ComparisonReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "analytic vs finite-difference, {}:", self.problem)?;
        for s in &self.per_snapshot {
            writeln!(
                f,
                "  t = {:>8.1} s: Linf = {:.6e} K, L2 = {:.6e} K, relative Linf = {:.6e}",
                s.time, s.linf, s.l2, s.relative_linf
            )?;
        }
        write!(f, "  truncation: {}", self.truncation)
    }
}

fn analytic_solution(problem: Problem) -> fn(f64, f64, &ThermalConfig) -> Result<f64, AnalyticError> {
    match problem {
        Problem::Ibvp1 => temp_ibvp1,
        Problem::Ibvp2 => temp_ibvp2,
    }
}

fn temperature_scale(rc: &RunConfig, time: f64) -> Result<f64, HarnessError> {
    match rc.problem {
        Problem::Ibvp1 => Ok((rc.thermal.t_surf - rc.thermal.t_init).abs()),
        Problem::Ibvp2 => Ok(temp_ibvp2(0.0, time, &rc.thermal)?.abs()),
    }
}

fn write_lines(path: &Path, header: &str, rows: &[Vec<f64>]) -> Result<(), HarnessError> {
    let mut out = Vec::with_capacity(rows.len() * 64);
    out.extend_from_slice(header.as_bytes());
    out.push(b'\n');
    for row in rows {
        let mut first = true;
        for v in row {
            if !first {
                out.push(b',');
            }
            out.extend_from_slice(format_value(*v).as_bytes());
            first = false;
        }
        out.push(b'\n');
    }
    let mut file = fs::File::create(path)?;
    file.write_all(&out)?;
    Ok(())
}

/// Write the analytic profile CSVs (`x,t,T_analytic`), one per snapshot.
pub fn write_profiles(rc: &RunConfig) -> Result<Vec<PathBuf>, HarnessError> {
    fs::create_dir_all(&rc.output_dir)?;
    let f = analytic_solution(rc.problem);
    let n = rc.grid.node_count();
    let mut files = Vec::new();
    for &time in &rc.grid.snapshot_times {
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let x = i as f64 * rc.grid.dx;
            rows.push(vec![x, time, f(x, time, &rc.thermal)?]);
        }
        let path = rc
            .output_dir
            .join(format!("profile_{}_t{}.csv", rc.problem, time_label(time)));
        write_lines(&path, "x,t,T_analytic", &rows)?;
        files.push(path);
    }
    Ok(files)
}

/// Write the numeric-solution CSVs (`x,t,T_numeric`), one per snapshot.
pub fn write_numeric(rc: &RunConfig, fields: &[Field]) -> Result<Vec<PathBuf>, HarnessError> {
    fs::create_dir_all(&rc.output_dir)?;
    let mut files = Vec::new();
    for field in fields {
        let rows: Vec<Vec<f64>> = field
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| vec![i as f64 * rc.grid.dx, field.time, v])
            .collect();
        let path = rc
            .output_dir
            .join(format!("fd_{}_t{}.csv", rc.problem, time_label(field.time)));
        write_lines(&path, "x,t,T_numeric", &rows)?;
        files.push(path);
    }
    Ok(files)
}

/// Solve numerically, evaluate the analytic solution on the same grid, write
/// one comparison CSV per snapshot plus the profile family, and return the
/// error report.
pub fn run_compare(rc: &RunConfig) -> Result<(ComparisonReport, Vec<PathBuf>), HarnessError> {
    fs::create_dir_all(&rc.output_dir)?;
    let fields = solve_fd(rc.problem, &rc.thermal, &rc.grid)?;
    let f = analytic_solution(rc.problem);
    let mut files = Vec::new();
    let mut per_snapshot = Vec::new();
    for field in &fields {
        let mut rows = Vec::with_capacity(field.values.len());
        let mut linf = 0.0f64;
        let mut sum_sq = 0.0f64;
        for (i, &numeric) in field.values.iter().enumerate() {
            let x = i as f64 * rc.grid.dx;
            let exact = f(x, field.time, &rc.thermal)?;
            let abs_error = (exact - numeric).abs();
            linf = linf.max(abs_error);
            sum_sq += abs_error * abs_error;
            rows.push(vec![x, field.time, exact, numeric, abs_error]);
        }
        let path = rc
            .output_dir
            .join(format!("compare_{}_t{}.csv", rc.problem, time_label(field.time)));
        write_lines(&path, "x,t,T_analytic,T_numeric,abs_error", &rows)?;
        files.push(path);

        let l2 = (sum_sq / field.values.len() as f64).sqrt();
        let scale = temperature_scale(rc, field.time)?;
        let relative_linf = if scale > 0.0 {
            linf / scale
        } else if linf == 0.0 {
            0.0
        } else {
            return Err(HarnessError::Report {
                what: format!(
                    "temperature scale is zero at t = {} but Linf = {linf}",
                    field.time
                ),
            });
        };
        per_snapshot.push(SnapshotError { time: field.time, linf, l2, relative_linf });
    }
    files.extend(write_profiles(rc)?);

    let last = fields.last().ok_or(HarnessError::Report {
        what: "no snapshots produced".to_string(),
    })?;
    let truncation =
        validate_truncation(last, &rc.thermal, rc.problem, DEFAULT_TRUNCATION_TOLERANCE);
    Ok((ComparisonReport { problem: rc.problem, per_snapshot, truncation }, files))
}

/// Emit the four figure datasets: analytic profiles at the snapshot times
/// for each problem, and the analytic-vs-numeric overlay data.
///
/// `text` is a config whose `problem` key (if any) is ignored; problem data
/// absent from it is filled with the worked-example values.
pub fn write_figures(text: &str) -> Result<Vec<PathBuf>, HarnessError> {
    let mut files = Vec::new();
    for (problem, profile_fig, overlay_fig) in
        [(Problem::Ibvp1, 1, 2), (Problem::Ibvp2, 3, 4)]
    {
        let rc = parse_config_for_problem(text, problem)?;
        fs::create_dir_all(&rc.output_dir)?;
        let f = analytic_solution(problem);
        let n = rc.grid.node_count();

        let mut profile_rows = Vec::new();
        for &time in &rc.grid.snapshot_times {
            for i in 0..n {
                let x = i as f64 * rc.grid.dx;
                profile_rows.push(vec![x, time, f(x, time, &rc.thermal)?]);
            }
        }
        let path = rc
            .output_dir
            .join(format!("figure{profile_fig}_{problem}_analytic_profiles.csv"));
        write_lines(&path, "x,t,T_analytic", &profile_rows)?;
        files.push(path);

        let fields = solve_fd(problem, &rc.thermal, &rc.grid)?;
        let mut overlay_rows = Vec::new();
        for field in &fields {
            for (i, &numeric) in field.values.iter().enumerate() {
                let x = i as f64 * rc.grid.dx;
                let exact = f(x, field.time, &rc.thermal)?;
                overlay_rows.push(vec![x, field.time, exact, numeric, (exact - numeric).abs()]);
            }
        }
        let path = rc
            .output_dir
            .join(format!("figure{overlay_fig}_{problem}_comparison.csv"));
        write_lines(&path, "x,t,T_analytic,T_numeric,abs_error", &overlay_rows)?;
        files.push(path);
    }
    Ok(files)
}
