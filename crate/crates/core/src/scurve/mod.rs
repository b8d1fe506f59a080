//! Diffusion S-curves and least-squares fitting.
//!
//! | kind          | parameters        | f(t)                                             |
//! |---------------|-------------------|--------------------------------------------------|
//! | `logistic`    | α, β, t₀          | `1 / (1 + exp(−α(t − t₀) − β))`                  |
//! | `logistic-ho` | α, β, γ, t₀       | `1 / (1 + exp(−α·exp(−γ(t − t₀)) − β))`          |
//! | `gompertz`    | a, b              | `exp(−a·exp(−b·u))`                              |
//! | `bass`        | p, q              | `(1 − e^(−(p+q)u)) / (1 + (q/p)·e^(−(p+q)u))`    |
//!
//! `u = t − time_origin`. Fitted Gompertz and Bass models put the origin at
//! the first year of the series so that Bass starts from zero there.
//!
//! The higher-order logistic is increasing with limit 1 only for α > 0 and
//! γ < 0; that is its valid parameter region here.

mod nelder_mead;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::math::{exp, expm1, ln, sqrt};

pub use nelder_mead::{distance, nelder_mead, Minimum, NelderMeadOptions, OptimizeError};

/// Objective value assigned to invalid parameter vectors.
pub const BARRIER: f64 = 1e12;
pub const MIN_FIT_POINTS: usize = 4;
const STARTS: usize = 5;
const RESTARTS: usize = 4;
/// Smallest |γ| of a fitted higher-order logistic; γ = 0 has no finite
/// (α, β) representation.
const MIN_HO_GAMMA: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScurveKind {
    Logistic,
    LogisticHo,
    Gompertz,
    Bass,
}

impl ScurveKind {
    pub const ALL: [ScurveKind; 4] = [Self::Logistic, Self::LogisticHo, Self::Gompertz, Self::Bass];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Logistic => "logistic",
            Self::LogisticHo => "logistic-ho",
            Self::Gompertz => "gompertz",
            Self::Bass => "bass",
        }
    }

    pub fn param_names(&self) -> &'static [&'static str] {
        match self {
            Self::Logistic => &["alpha", "beta", "t0"],
            Self::LogisticHo => &["alpha", "beta", "gamma", "t0"],
            Self::Gompertz => &["a", "b"],
            Self::Bass => &["p", "q"],
        }
    }

    pub fn param_count(&self) -> usize {
        self.param_names().len()
    }

    fn uses_origin(&self) -> bool {
        matches!(self, Self::Gompertz | Self::Bass)
    }
}

impl fmt::Display for ScurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScurveKind {
    type Err = ScurveError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| ScurveError::UnknownKind(s.into()))
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScurveError {
    #[error("unknown model kind {0:?} (expected logistic, logistic-ho, gompertz or bass)")]
    UnknownKind(String),
    #[error("{kind} takes {expected} parameters, got {got}")]
    WrongParamCount {
        kind: ScurveKind,
        expected: usize,
        got: usize,
    },
    #[error("invalid {kind} parameters: {reason}")]
    InvalidParams {
        kind: ScurveKind,
        reason: &'static str,
    },
    #[error("point {index}: year and share must be finite")]
    NonFinite { index: usize },
    #[error("point {index}: share {share} outside [0, 1]")]
    ShareOutOfRange { index: usize, share: f64 },
    #[error("duplicate year {year}")]
    DuplicateYear { year: f64 },
    #[error("point {index}: years must be strictly increasing")]
    UnsortedYears { index: usize },
    #[error("{have} points cannot fit a model that needs at least {need}")]
    InsufficientData { have: usize, need: usize },
    #[error("series is constant; r-squared is undefined")]
    FitDegenerate,
    #[error(transparent)]
    Optimize(#[from] OptimizeError),
}

fn check_params(kind: ScurveKind, p: &[f64]) -> Result<(), &'static str> {
    if p.iter().any(|v| !v.is_finite()) {
        return Err("parameters must be finite");
    }
    match kind {
        ScurveKind::Logistic if p[0] <= 0.0 => Err("alpha must be > 0"),
        ScurveKind::LogisticHo if p[0] <= 0.0 => Err("alpha must be > 0"),
        ScurveKind::LogisticHo if p[2] >= 0.0 => Err("gamma must be < 0"),
        ScurveKind::Gompertz if p[0] <= 0.0 || p[1] <= 0.0 => Err("a and b must be > 0"),
        ScurveKind::Bass if p[0] <= 0.0 => Err("p must be > 0"),
        ScurveKind::Bass if p[1] < 0.0 => Err("q must be >= 0"),
        _ => Ok(()),
    }
}

fn raw_eval(kind: ScurveKind, p: &[f64], t: f64, origin: f64) -> f64 {
    match kind {
        ScurveKind::Logistic => 1.0 / (1.0 + exp(-p[0] * (t - p[2]) - p[1])),
        ScurveKind::LogisticHo => 1.0 / (1.0 + exp(-p[0] * exp(-p[2] * (t - p[3])) - p[1])),
        ScurveKind::Gompertz => exp(-p[0] * exp(-p[1] * (t - origin))),
        ScurveKind::Bass => {
            let e = exp(-(p[0] + p[1]) * (t - origin));
            (1.0 - e) / (1.0 + (p[1] / p[0]) * e)
        }
    }
}

/// One member of the diffusion-curve family with validated parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ScurveModel {
    kind: ScurveKind,
    params: Vec<f64>,
    time_origin: f64,
}

impl ScurveModel {
    pub fn new(kind: ScurveKind, params: Vec<f64>) -> Result<Self, ScurveError> {
        if params.len() != kind.param_count() {
            return Err(ScurveError::WrongParamCount {
                kind,
                expected: kind.param_count(),
                got: params.len(),
            });
        }
        check_params(kind, &params)
            .map_err(|reason| ScurveError::InvalidParams { kind, reason })?;
        Ok(Self {
            kind,
            params,
            time_origin: 0.0,
        })
    }

    /// Sets the time origin used by Gompertz and Bass (ignored otherwise).
    pub fn with_origin(mut self, origin: f64) -> Self {
        self.time_origin = if self.kind.uses_origin() { origin } else { 0.0 };
        self
    }

    pub fn kind(&self) -> ScurveKind {
        self.kind
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn time_origin(&self) -> f64 {
        self.time_origin
    }

    pub fn evaluate(&self, t: f64) -> f64 {
        raw_eval(self.kind, &self.params, t, self.time_origin)
    }
}

pub fn evaluate(model: &ScurveModel, t: f64) -> f64 {
    model.evaluate(t)
}

/// A labelled (year, share) series.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesData {
    label: String,
    points: Vec<(f64, f64)>,
}

impl SeriesData {
    /// Years must be strictly increasing and shares within [0, 1].
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>) -> Result<Self, ScurveError> {
        for (index, &(year, share)) in points.iter().enumerate() {
            if !year.is_finite() || !share.is_finite() {
                return Err(ScurveError::NonFinite { index });
            }
            if !(0.0..=1.0).contains(&share) {
                return Err(ScurveError::ShareOutOfRange { index, share });
            }
            if index > 0 {
                let prev = points[index - 1].0;
                if year == prev {
                    return Err(ScurveError::DuplicateYear { year });
                }
                if year < prev {
                    return Err(ScurveError::UnsortedYears { index });
                }
            }
        }
        Ok(Self {
            label: label.into(),
            points,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn first_year(&self) -> f64 {
        self.points.first().map_or(0.0, |p| p.0)
    }

    fn span(&self) -> f64 {
        match (self.points.first(), self.points.last()) {
            (Some(a), Some(b)) if b.0 > a.0 => b.0 - a.0,
            _ => 1.0,
        }
    }

    fn total_sum_squares(&self) -> f64 {
        let n = self.points.len() as f64;
        let mean = self.points.iter().map(|p| p.1).sum::<f64>() / n;
        self.points
            .iter()
            .map(|p| (p.1 - mean) * (p.1 - mean))
            .sum()
    }
}

/// Fitted model with diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct ScurveFit {
    pub model: ScurveModel,
    pub rmse: f64,
    pub r_squared: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn sum_squares(series: &SeriesData, mut predict: impl FnMut(f64) -> f64) -> f64 {
    series
        .points
        .iter()
        .map(|&(t, y)| {
            let r = predict(t) - y;
            r * r
        })
        .sum()
}

/// Root mean squared residual of `model` over `series`.
pub fn rmse(model: &ScurveModel, series: &SeriesData) -> f64 {
    sqrt(sum_squares(series, |t| model.evaluate(t)) / series.len() as f64)
}

/// Year at which the series crosses one half (linear interpolation), or
/// the midpoint year if it never does.
fn half_crossing(series: &SeriesData) -> f64 {
    let pts = &series.points;
    for w in pts.windows(2) {
        let ((t0, s0), (t1, s1)) = (w[0], w[1]);
        if s0 == 0.5 {
            return t0;
        }
        if (s0 < 0.5 && s1 > 0.5) || (s0 > 0.5 && s1 < 0.5) {
            return t0 + (0.5 - s0) * (t1 - t0) / (s1 - s0);
        }
    }
    match pts.last() {
        Some(&(t, 0.5)) => t,
        _ => series.first_year() + 0.5 * series.span(),
    }
}

fn max_slope(series: &SeriesData) -> f64 {
    series
        .points
        .windows(2)
        .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
        .fold(0.0, f64::max)
}

/// Heuristic starting parameters for `kind`.
///
/// * logistic: t₀ at the 0.5 crossing, α = 4·(max slope) since a logistic
///   peaks at slope α/4, β = 0.
/// * logistic-ho: the same curve near t₀ with γ = −α/10, which gives
///   α_ho = 10 and β_ho = −10.
/// * gompertz: least squares line through `ln(−ln f) = ln a − b·u` over
///   points with 0.01 < f < 0.99; falls back to b = logistic α with the
///   0.5 crossing at t₀.
/// * bass: q = 4·(max slope) (q ≫ p), p from the peak time
///   `t* = ln(q/p)/(p+q)` taken at the 0.5 crossing.
pub fn default_start(kind: ScurveKind, series: &SeriesData) -> Vec<f64> {
    let t_half = half_crossing(series);
    let slope = max_slope(series);
    let rate = if slope > 0.0 {
        4.0 * slope
    } else {
        4.0 / series.span()
    };
    let origin = series.first_year();
    match kind {
        ScurveKind::Logistic => vec![rate, 0.0, t_half],
        ScurveKind::LogisticHo => {
            let gamma = -rate / 10.0;
            let alpha = rate / -gamma;
            vec![alpha, -alpha, gamma, t_half]
        }
        ScurveKind::Gompertz => {
            let pts: Vec<(f64, f64)> = series
                .points
                .iter()
                .filter(|p| p.1 > 0.01 && p.1 < 0.99)
                .map(|&(t, f)| (t - origin, ln(-ln(f))))
                .collect();
            let fallback = || {
                let b = rate;
                vec![core::f64::consts::LN_2 * exp(b * (t_half - origin)), b]
            };
            if pts.len() < 2 {
                return fallback();
            }
            let n = pts.len() as f64;
            let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
            let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
            let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
            let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
            let b = -sxy / sxx;
            if !(b > 0.0 && b.is_finite()) {
                return fallback();
            }
            vec![exp(my + b * mx), b]
        }
        ScurveKind::Bass => {
            let q = rate;
            let p = (q * exp(-q * (t_half - origin))).max(1e-6);
            vec![p, q]
        }
    }
}

/// Parameter coordinates the optimizer works in.
#[derive(Debug, Clone, Copy)]
enum Coords {
    /// Free (α, t₀); β held fixed. Only α·t₀ − β is identified.
    Logistic {
        beta: f64,
    },
    /// Free (k, c, γ) with t₀ fixed; exponent `−c − k·u·φ(γu)`,
    /// `φ(x) = (1 − e^(−x))/x`, which is the logistic at γ = 0.
    HoNested {
        t0: f64,
    },
    /// Free (α, β, γ) with t₀ fixed (α and t₀ are redundant).
    HoPublic {
        t0: f64,
    },
    Direct(ScurveKind),
}

impl Coords {
    fn predict(&self, free: &[f64], t: f64, origin: f64) -> Option<f64> {
        match *self {
            Coords::Logistic { beta } => {
                let p = [free[0], beta, free[1]];
                check_params(ScurveKind::Logistic, &p).ok()?;
                Some(raw_eval(ScurveKind::Logistic, &p, t, origin))
            }
            Coords::HoNested { t0 } => {
                let (k, c, gamma) = (free[0], free[1], free[2]);
                if !(k > 0.0 && gamma <= 0.0 && c.is_finite() && k.is_finite()) {
                    return None;
                }
                let u = t - t0;
                let x = gamma * u;
                let u_phi = if x == 0.0 { u } else { -expm1(-x) / gamma };
                Some(1.0 / (1.0 + exp(-c - k * u_phi)))
            }
            Coords::HoPublic { t0 } => {
                let p = [free[0], free[1], free[2], t0];
                check_params(ScurveKind::LogisticHo, &p).ok()?;
                Some(raw_eval(ScurveKind::LogisticHo, &p, t, origin))
            }
            Coords::Direct(kind) => {
                check_params(kind, free).ok()?;
                Some(raw_eval(kind, free, t, origin))
            }
        }
    }

    fn objective(&self, series: &SeriesData, origin: f64, free: &[f64]) -> f64 {
        let mut invalid = false;
        let ss = sum_squares(series, |t| match self.predict(free, t, origin) {
            Some(v) if v.is_finite() => v,
            _ => {
                invalid = true;
                0.0
            }
        });
        if invalid {
            BARRIER
        } else {
            ss / series.len() as f64
        }
    }
}

/// Multi-start Nelder-Mead: the start plus four deterministic jitters of
/// two initial steps each, every run restarted from its optimum until it
/// stops improving. Lowest objective wins, earliest start on ties.
fn minimize(
    coords: Coords,
    series: &SeriesData,
    origin: f64,
    start: &[f64],
    steps: &[f64],
) -> Result<Minimum, ScurveError> {
    let opts = NelderMeadOptions {
        initial_step: Some(steps.to_vec()),
        ..NelderMeadOptions::default()
    };
    let objective = |x: &[f64]| coords.objective(series, origin, x);
    let mut best: Option<Minimum> = None;
    for j in 0..STARTS {
        let s: Vec<f64> = start
            .iter()
            .zip(steps)
            .enumerate()
            .map(|(i, (&x, &h))| {
                let sign = match j {
                    0 => 0.0,
                    1 => 1.0,
                    2 => -1.0,
                    3 => {
                        if i % 2 == 0 {
                            1.0
                        } else {
                            -1.0
                        }
                    }
                    _ => {
                        if i % 2 == 0 {
                            -1.0
                        } else {
                            1.0
                        }
                    }
                };
                x + sign * 2.0 * h
            })
            .collect();
        let mut m = nelder_mead(objective, &s, &opts)?;
        for _ in 0..RESTARTS {
            let again = nelder_mead(objective, &m.x, &opts)?;
            let improved = again.value < m.value;
            let iterations = m.iterations + again.iterations;
            if improved {
                m = Minimum {
                    iterations,
                    ..again
                };
            } else {
                m.iterations = iterations;
                break;
            }
        }
        if best.as_ref().is_none_or(|b| m.value < b.value) {
            best = Some(m);
        }
    }
    Ok(best.expect("at least one start"))
}

fn step_for(x: f64, rel: f64, floor: f64) -> f64 {
    (rel * x.abs()).max(floor)
}

/// Least-squares fit of `kind` to `series` from `start` (or
/// [`default_start`]).
///
/// The higher-order logistic is additionally warm-started from the fitted
/// logistic at γ = 0 in nested coordinates, so its optimum is never worse
/// than the logistic one beyond the γ floor of 1e-9.
pub fn fit(
    kind: ScurveKind,
    series: &SeriesData,
    start: Option<&[f64]>,
) -> Result<ScurveFit, ScurveError> {
    let need = MIN_FIT_POINTS.max(kind.param_count() + 1);
    if series.len() < need {
        return Err(ScurveError::InsufficientData {
            have: series.len(),
            need,
        });
    }
    let ss_tot = series.total_sum_squares();
    if ss_tot.is_nan() || ss_tot <= 0.0 {
        return Err(ScurveError::FitDegenerate);
    }
    let start: Vec<f64> = match start {
        Some(s) => s.to_vec(),
        None => default_start(kind, series),
    };
    // Validates length and region of the start.
    ScurveModel::new(kind, start.clone())?;
    let origin = if kind.uses_origin() {
        series.first_year()
    } else {
        0.0
    };
    let span = series.span();

    let (params, iterations, converged) = match kind {
        ScurveKind::Logistic => {
            let coords = Coords::Logistic { beta: start[1] };
            let free = [start[0], start[2]];
            let steps = [step_for(start[0], 0.1, 1e-4), span / 20.0];
            let m = minimize(coords, series, origin, &free, &steps)?;
            (vec![m.x[0], start[1], m.x[1]], m.iterations, m.converged)
        }
        ScurveKind::LogisticHo => fit_higher_order(series, &start, span)?,
        ScurveKind::Gompertz | ScurveKind::Bass => {
            let steps: Vec<f64> = start.iter().map(|&x| step_for(x, 0.1, 1e-3)).collect();
            let m = minimize(Coords::Direct(kind), series, origin, &start, &steps)?;
            (m.x, m.iterations, m.converged)
        }
    };

    let model = ScurveModel::new(kind, params)?.with_origin(origin);
    let ss_res = sum_squares(series, |t| model.evaluate(t));
    Ok(ScurveFit {
        rmse: sqrt(ss_res / series.len() as f64),
        r_squared: 1.0 - ss_res / ss_tot,
        iterations,
        converged,
        model,
    })
}

fn fit_higher_order(
    series: &SeriesData,
    start: &[f64],
    span: f64,
) -> Result<(Vec<f64>, usize, bool), ScurveError> {
    let logistic = fit(ScurveKind::Logistic, series, None)?;
    let lp = logistic.model.params();
    // (k, c, γ, t0) candidates: the nested logistic and the given start.
    let candidates = [
        ([lp[0], lp[1], 0.0], lp[2]),
        (
            [-start[0] * start[2], start[0] + start[1], start[2]],
            start[3],
        ),
    ];
    let mut best: Option<(Minimum, f64)> = None;
    for (free, t0) in candidates {
        let steps = [
            step_for(free[0], 0.1, 1e-4),
            0.1,
            -step_for(free[0], 0.05, 1e-4),
        ];
        let m = minimize(Coords::HoNested { t0 }, series, 0.0, &free, &steps)?;
        if best.as_ref().is_none_or(|(b, _)| m.value < b.value) {
            best = Some((m, t0));
        }
    }
    let (m, t0) = best.expect("two candidates");
    let (k, c, gamma) = (m.x[0], m.x[1], m.x[2].min(-MIN_HO_GAMMA));
    let alpha = k / -gamma;
    let mapped = [alpha, c - alpha, gamma];
    let steps = [
        step_for(alpha, 1e-3, 1e-6),
        step_for(c - alpha, 1e-3, 1e-6),
        -step_for(gamma, 1e-2, 1e-12),
    ];
    let polish = minimize(Coords::HoPublic { t0 }, series, 0.0, &mapped, &steps)?;
    let _ = span;
    Ok((
        vec![polish.x[0], polish.x[1], polish.x[2], t0],
        m.iterations + polish.iterations,
        m.converged,
    ))
}
