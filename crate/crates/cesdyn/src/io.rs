//! Scenario JSON, trajectory and series CSV, and fit reports.
//!
//! Writers are byte-deterministic: fixed key order, fixed number format
//! (12 significant digits in CSV, shortest round-trip in JSON) and `\n`
//! line endings.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use cesdyn_core::ces::{rho_from_sigma, sigma_from_rho};
use cesdyn_core::scenario::{validate, PhaseDownKind};
use cesdyn_core::sim::TrajectoryRow;
use cesdyn_core::{
    ElasticityPath, InitMode, PhaseDownSchedule, Scenario, ScurveError, ScurveFit, SeriesData,
    SweepGrid, TrajectoryTable, Violation,
};
use serde::{Deserialize, Serialize};

pub const TRAJECTORY_HEADER: &str = "t,rho,F,R,Y,share_F,p_R,p_F,carbon_tax,re_multiple";
pub const SERIES_HEADER: &str = "year,share";

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: line {line}{}: {message}", .path.display(), column_suffix(*.column))]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{}: {}", .path.display(), join(.violations))]
    Invalid {
        path: PathBuf,
        violations: Vec<Violation>,
    },
    #[error("{}: line {line}: {source}", .path.display())]
    Series {
        path: PathBuf,
        line: usize,
        #[source]
        source: ScurveError,
    },
}

impl IoError {
    /// True for errors caused by file content rather than the filesystem.
    pub fn is_validation(&self) -> bool {
        !matches!(self, IoError::Io { .. })
    }
}

fn column_suffix(column: usize) -> String {
    if column == 0 {
        String::new()
    } else {
        format!(", column {column}")
    }
}

fn join(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> IoError + '_ {
    move |source| IoError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn json_err(path: &Path, e: serde_json::Error) -> IoError {
    IoError::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> IoError {
    IoError::Parse {
        path: path.to_path_buf(),
        line,
        column: 0,
        message: message.into(),
    }
}

fn read(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(io_err(path))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    fs::write(path, text).map_err(io_err(path))
}

/// `%.12g`: 12 significant digits, trailing zeros trimmed, exponent form
/// outside `[1e-4, 1e12)`. Negative zero prints as `0`.
pub fn fmt_g12(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..12).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
    }
    let decimals = (11 - exp).max(0) as usize;
    trim_zeros(&format!("{v:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

// ---------------------------------------------------------------- scenario

fn default_sigma_path() -> SigmaPathFile {
    SigmaPathFile {
        kind: "constant".into(),
        sigma_start: 1.5,
        sigma_end: None,
        decay_rate: None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SigmaPathFile {
    /// `constant`, `linear-decay` or `exponential-decay`.
    pub kind: String,
    pub sigma_start: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_end: Option<f64>,
    /// Exponential kind only; defaults to `3/years`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decay_rate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleFile {
    /// `linear` or `exponential`.
    pub kind: String,
    pub final_share_fraction: f64,
}

/// On-disk scenario. Every key is optional and defaults to
/// [`Scenario::default`]; elasticities are given as σ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioFile {
    pub label: String,
    pub years: u32,
    pub alpha: f64,
    pub sigma_path: SigmaPathFile,
    pub demand_growth_rate: f64,
    pub fossil_schedule: ScheduleFile,
    pub re_cost_decline: f64,
    pub fossil_unit_cost: f64,
    pub re_initial_cost: f64,
    pub y0: f64,
    /// `share-calibrated` or `direct-share`.
    pub init_mode: String,
}

impl Default for ScenarioFile {
    fn default() -> Self {
        let mut f = ScenarioFile::from(&Scenario::default());
        f.sigma_path = default_sigma_path();
        f
    }
}

impl From<&Scenario> for ScenarioFile {
    fn from(s: &Scenario) -> Self {
        let sigma_path = match s.sigma_path {
            ElasticityPath::Constant { rho } => SigmaPathFile {
                kind: "constant".into(),
                sigma_start: sigma_from_rho(rho),
                sigma_end: None,
                decay_rate: None,
            },
            ElasticityPath::LinearDecay { rho_start, rho_end } => SigmaPathFile {
                kind: "linear-decay".into(),
                sigma_start: sigma_from_rho(rho_start),
                sigma_end: Some(sigma_from_rho(rho_end)),
                decay_rate: None,
            },
            ElasticityPath::ExponentialDecay {
                rho_start,
                rho_end,
                rate,
            } => SigmaPathFile {
                kind: "exponential-decay".into(),
                sigma_start: sigma_from_rho(rho_start),
                sigma_end: Some(sigma_from_rho(rho_end)),
                decay_rate: Some(rate),
            },
        };
        ScenarioFile {
            label: s.label.clone(),
            years: s.years,
            alpha: s.alpha,
            sigma_path,
            demand_growth_rate: s.demand_growth_rate,
            fossil_schedule: ScheduleFile {
                kind: s.fossil_schedule.kind.name().into(),
                final_share_fraction: s.fossil_schedule.final_share_fraction,
            },
            re_cost_decline: s.re_cost_decline,
            fossil_unit_cost: s.fossil_unit_cost,
            re_initial_cost: s.re_initial_cost,
            y0: s.y0,
            init_mode: s.init_mode.name().into(),
        }
    }
}

impl ScenarioFile {
    /// Converts to a [`Scenario`] and validates it.
    pub fn into_scenario(self) -> Result<Scenario, Vec<Violation>> {
        let mut problems = Vec::new();
        let mut rho = |field: &'static str, sigma: f64| match rho_from_sigma(sigma) {
            Ok(r) => r,
            Err(e) => {
                problems.push(Violation {
                    field,
                    message: format!("{e}"),
                });
                0.0
            }
        };
        let sp = &self.sigma_path;
        let start = rho("sigma_path", sp.sigma_start);
        let sigma_path = match sp.kind.as_str() {
            "constant" => ElasticityPath::Constant { rho: start },
            "linear-decay" | "exponential-decay" => {
                let end = match sp.sigma_end {
                    Some(v) => rho("sigma_path", v),
                    None => {
                        problems.push(Violation {
                            field: "sigma_path",
                            message: format!("{} needs sigma_end", sp.kind),
                        });
                        0.0
                    }
                };
                if sp.kind == "linear-decay" {
                    ElasticityPath::LinearDecay {
                        rho_start: start,
                        rho_end: end,
                    }
                } else {
                    ElasticityPath::ExponentialDecay {
                        rho_start: start,
                        rho_end: end,
                        rate: sp.decay_rate.unwrap_or(3.0 / self.years.max(1) as f64),
                    }
                }
            }
            other => {
                problems.push(Violation {
                    field: "sigma_path",
                    message: format!(
                        "unknown kind {other:?} (constant, linear-decay, exponential-decay)"
                    ),
                });
                ElasticityPath::Constant { rho: start }
            }
        };
        if sp.kind != "exponential-decay" && sp.decay_rate.is_some() {
            problems.push(Violation {
                field: "sigma_path",
                message: "decay_rate only applies to exponential-decay".into(),
            });
        }
        if sp.kind == "constant" && sp.sigma_end.is_some() {
            problems.push(Violation {
                field: "sigma_path",
                message: "sigma_end does not apply to constant".into(),
            });
        }
        let kind = match self.fossil_schedule.kind.as_str() {
            "linear" => PhaseDownKind::Linear,
            "exponential" => PhaseDownKind::Exponential,
            other => {
                problems.push(Violation {
                    field: "fossil_schedule",
                    message: format!("unknown kind {other:?} (linear, exponential)"),
                });
                PhaseDownKind::Linear
            }
        };
        let init_mode = match self.init_mode.as_str() {
            "share-calibrated" => InitMode::ShareCalibrated,
            "direct-share" => InitMode::DirectShare,
            other => {
                problems.push(Violation {
                    field: "init_mode",
                    message: format!("unknown mode {other:?} (share-calibrated, direct-share)"),
                });
                InitMode::ShareCalibrated
            }
        };
        if !problems.is_empty() {
            return Err(problems);
        }
        let scenario = Scenario {
            label: self.label,
            years: self.years,
            alpha: self.alpha,
            sigma_path,
            demand_growth_rate: self.demand_growth_rate,
            fossil_schedule: PhaseDownSchedule {
                kind,
                final_share_fraction: self.fossil_schedule.final_share_fraction,
            },
            re_cost_decline: self.re_cost_decline,
            fossil_unit_cost: self.fossil_unit_cost,
            re_initial_cost: self.re_initial_cost,
            y0: self.y0,
            init_mode,
        };
        let violations = validate(&scenario);
        if violations.is_empty() {
            Ok(scenario)
        } else {
            Err(violations)
        }
    }
}

pub fn parse_scenario(text: &str, path: &Path) -> Result<Scenario, IoError> {
    let file: ScenarioFile = serde_json::from_str(text).map_err(|e| json_err(path, e))?;
    file.into_scenario().map_err(|violations| IoError::Invalid {
        path: path.to_path_buf(),
        violations,
    })
}

pub fn load_scenario(path: &Path) -> Result<Scenario, IoError> {
    parse_scenario(&read(path)?, path)
}

pub fn scenario_json(s: &Scenario) -> String {
    let mut text =
        serde_json::to_string_pretty(&ScenarioFile::from(s)).expect("scenario serializes");
    text.push('\n');
    text
}

pub fn write_scenario(s: &Scenario, path: &Path) -> Result<(), IoError> {
    write_text(path, &scenario_json(s))
}

// -------------------------------------------------------------------- grid

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridFile {
    pub alpha: Vec<f64>,
    pub sigma: Vec<f64>,
    pub re_cost_decline: Vec<f64>,
    pub demand_growth_rate: Vec<f64>,
}

impl From<GridFile> for SweepGrid {
    fn from(g: GridFile) -> Self {
        SweepGrid {
            alpha: g.alpha,
            sigma: g.sigma,
            re_cost_decline: g.re_cost_decline,
            demand_growth_rate: g.demand_growth_rate,
        }
    }
}

pub fn load_grid(path: &Path) -> Result<SweepGrid, IoError> {
    let text = read(path)?;
    let g: GridFile = serde_json::from_str(&text).map_err(|e| json_err(path, e))?;
    Ok(g.into())
}

// -------------------------------------------------------------- trajectory

pub fn trajectory_csv(rows: &[TrajectoryRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    for r in rows {
        let cells = [
            r.rho,
            r.fossil,
            r.renewable,
            r.output,
            r.share_fossil,
            r.p_renewable,
            r.p_fossil,
            r.carbon_tax,
            r.re_multiple,
        ];
        let _ = write!(out, "{}", r.t);
        for c in cells {
            out.push(',');
            out.push_str(&fmt_g12(c));
        }
        out.push('\n');
    }
    out
}

pub fn write_trajectory(table: &TrajectoryTable, path: &Path) -> Result<(), IoError> {
    write_text(path, &trajectory_csv(&table.rows))
}

fn csv_reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes())
}

fn header_line(text: &str) -> &str {
    text.lines().next().unwrap_or("").trim()
}

/// Loads a trajectory CSV written by [`write_trajectory`].
pub fn load_trajectory(path: &Path) -> Result<Vec<TrajectoryRow>, IoError> {
    let text = read(path)?;
    if header_line(&text) != TRAJECTORY_HEADER {
        return Err(parse_err(
            path,
            1,
            format!("header must be {TRAJECTORY_HEADER:?}"),
        ));
    }
    let mut rows = Vec::new();
    for (i, rec) in csv_reader(&text).records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| parse_err(path, line, e.to_string()))?;
        let num = |j: usize| -> Result<f64, IoError> {
            rec.get(j)
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| parse_err(path, line, format!("column {} is not a number", j + 1)))
        };
        let t: u32 = rec
            .get(0)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| parse_err(path, line, "t must be a non-negative integer"))?;
        if t as usize != rows.len() {
            return Err(parse_err(
                path,
                line,
                format!("expected t = {}, found {t}", rows.len()),
            ));
        }
        rows.push(TrajectoryRow {
            t,
            rho: num(1)?,
            fossil: num(2)?,
            renewable: num(3)?,
            output: num(4)?,
            share_fossil: num(5)?,
            p_renewable: num(6)?,
            p_fossil: num(7)?,
            carbon_tax: num(8)?,
            re_multiple: num(9)?,
        });
    }
    Ok(rows)
}

// ------------------------------------------------------------------ series

pub fn parse_series(text: &str, path: &Path) -> Result<SeriesData, IoError> {
    if header_line(text) != SERIES_HEADER {
        return Err(parse_err(
            path,
            1,
            format!("header must be {SERIES_HEADER:?}"),
        ));
    }
    let mut points = Vec::new();
    for (i, rec) in csv_reader(text).records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| parse_err(path, line, e.to_string()))?;
        if rec.len() != 2 {
            return Err(parse_err(
                path,
                line,
                format!("expected 2 columns, found {}", rec.len()),
            ));
        }
        let year: f64 = rec[0]
            .parse()
            .map_err(|_| parse_err(path, line, format!("year {:?} is not a number", &rec[0])))?;
        let share: f64 = rec[1]
            .parse()
            .map_err(|_| parse_err(path, line, format!("share {:?} is not a number", &rec[1])))?;
        points.push((year, share));
    }
    let label = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("series")
        .to_string();
    SeriesData::new(label, points).map_err(|source| {
        let line = match &source {
            ScurveError::NonFinite { index }
            | ScurveError::ShareOutOfRange { index, .. }
            | ScurveError::UnsortedYears { index } => index + 2,
            _ => 0,
        };
        let line = if let ScurveError::DuplicateYear { year } = &source {
            duplicate_line(text, *year)
        } else {
            line
        };
        IoError::Series {
            path: path.to_path_buf(),
            line,
            source,
        }
    })
}

fn duplicate_line(text: &str, year: f64) -> usize {
    let mut seen = 0;
    for (i, l) in text.lines().enumerate().skip(1) {
        if l.split(',')
            .next()
            .and_then(|s| s.trim().parse::<f64>().ok())
            == Some(year)
        {
            seen += 1;
            if seen == 2 {
                return i + 1;
            }
        }
    }
    0
}

pub fn load_series(path: &Path) -> Result<SeriesData, IoError> {
    parse_series(&read(path)?, path)
}

pub fn series_csv(series: &SeriesData) -> String {
    let mut out = String::from(SERIES_HEADER);
    out.push('\n');
    for &(y, s) in series.points() {
        let _ = writeln!(out, "{},{}", fmt_g12(y), fmt_g12(s));
    }
    out
}

// ------------------------------------------------------------- fit report

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub model: String,
    pub param_names: Vec<String>,
    pub params: Vec<f64>,
    pub time_origin: f64,
    pub rmse: f64,
    pub r_squared: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl From<&ScurveFit> for FitReport {
    fn from(f: &ScurveFit) -> Self {
        let kind = f.model.kind();
        FitReport {
            model: kind.name().into(),
            param_names: kind.param_names().iter().map(|s| s.to_string()).collect(),
            params: f.model.params().to_vec(),
            time_origin: f.model.time_origin(),
            rmse: f.rmse,
            r_squared: f.r_squared,
            iterations: f.iterations,
            converged: f.converged,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRanking {
    pub series: String,
    pub points: usize,
    /// Best (lowest rmse) first.
    pub fits: Vec<FitReport>,
}

/// Orders fits by rmse; ties keep the given order.
pub fn rank_fits(series: &SeriesData, fits: &[ScurveFit]) -> FitRanking {
    let mut reports: Vec<FitReport> = fits.iter().map(FitReport::from).collect();
    reports.sort_by(|a, b| a.rmse.total_cmp(&b.rmse));
    FitRanking {
        series: series.label().into(),
        points: series.len(),
        fits: reports,
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut text = serde_json::to_string_pretty(v).expect("report serializes");
    text.push('\n');
    text
}

pub fn write_fit_report(fit: &ScurveFit, path: &Path) -> Result<(), IoError> {
    write_text(path, &pretty(&FitReport::from(fit)))
}

pub fn write_fit_ranking(ranking: &FitRanking, path: &Path) -> Result<(), IoError> {
    write_text(path, &pretty(ranking))
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<(), IoError> {
    write_text(path, &pretty(value))
}
