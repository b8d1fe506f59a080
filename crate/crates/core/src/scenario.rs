//! Experiment description: horizon, initial shares, demand growth, fossil
//! phase-down, renewable cost decline and the elasticity path.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::ces::{self, CesError, CesParams, FactorPoint};
use crate::math::{exp, powf};

/// Time path of the substitution parameter ρ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ElasticityPath {
    Constant {
        rho: f64,
    },
    /// `ρ(t) = ρ_start + (ρ_end − ρ_start)·t/T`
    LinearDecay {
        rho_start: f64,
        rho_end: f64,
    },
    /// `ρ(t) = ρ_end + (ρ_start − ρ_end)·exp(−rate·t)`
    ExponentialDecay {
        rho_start: f64,
        rho_end: f64,
        rate: f64,
    },
}

impl ElasticityPath {
    pub fn constant_sigma(sigma: f64) -> Result<Self, CesError> {
        Ok(Self::Constant {
            rho: ces::rho_from_sigma(sigma)?,
        })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::Constant { .. } => "constant",
            Self::LinearDecay { .. } => "linear-decay",
            Self::ExponentialDecay { .. } => "exponential-decay",
        }
    }

    pub fn rho_start(&self) -> f64 {
        match *self {
            Self::Constant { rho } => rho,
            Self::LinearDecay { rho_start, .. } | Self::ExponentialDecay { rho_start, .. } => {
                rho_start
            }
        }
    }

    pub fn rho_end(&self) -> f64 {
        match *self {
            Self::Constant { rho } => rho,
            Self::LinearDecay { rho_end, .. } | Self::ExponentialDecay { rho_end, .. } => rho_end,
        }
    }

    /// ρ at year `t` of a `horizon`-year run.
    pub fn rho_at(&self, t: f64, horizon: u32) -> Result<f64, CesError> {
        let rho = match *self {
            Self::Constant { rho } => rho,
            Self::LinearDecay { rho_start, rho_end } => {
                if t == horizon as f64 {
                    rho_end
                } else {
                    rho_start + (rho_end - rho_start) * t / horizon as f64
                }
            }
            Self::ExponentialDecay {
                rho_start,
                rho_end,
                rate,
            } => {
                if t == 0.0 {
                    rho_start
                } else {
                    rho_end + (rho_start - rho_end) * exp(-rate * t)
                }
            }
        };
        if rho > -1.0 && rho.is_finite() {
            Ok(rho)
        } else {
            Err(CesError::InvalidRho(rho))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseDownKind {
    Linear,
    Exponential,
}

impl PhaseDownKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Linear => "linear",
            Self::Exponential => "exponential",
        }
    }
}

/// Exogenous fossil path from `F₀` down to `final_share_fraction·F₀` at the
/// horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseDownSchedule {
    pub kind: PhaseDownKind,
    pub final_share_fraction: f64,
}

impl PhaseDownSchedule {
    pub fn linear(final_share_fraction: f64) -> Self {
        Self {
            kind: PhaseDownKind::Linear,
            final_share_fraction,
        }
    }

    pub fn exponential(final_share_fraction: f64) -> Self {
        Self {
            kind: PhaseDownKind::Exponential,
            final_share_fraction,
        }
    }

    pub fn fossil_at(&self, f0: f64, t: f64, horizon: u32) -> Result<f64, CesError> {
        let x = t / horizon as f64;
        let frac = self.final_share_fraction;
        let f = match self.kind {
            PhaseDownKind::Linear => f0 * (1.0 - (1.0 - frac) * x),
            PhaseDownKind::Exponential => f0 * powf(frac, x),
        };
        if f > 0.0 && f.is_finite() {
            Ok(f)
        } else {
            Err(CesError::NonPositive {
                name: "fossil",
                value: f,
            })
        }
    }
}

/// How `(F₀, R₀)` are derived from the initial share α.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitMode {
    /// `F₀/(F₀+R₀) = α` and the CES output equals `y0`.
    #[default]
    ShareCalibrated,
    /// `F₀ = α·y0`, `R₀ = (1−α)·y0`; the initial output is then recomputed
    /// from the CES function.
    DirectShare,
}

impl InitMode {
    pub fn name(&self) -> &'static str {
        match self {
            Self::ShareCalibrated => "share-calibrated",
            Self::DirectShare => "direct-share",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub label: String,
    /// Horizon T; the run covers years `0..=T`.
    pub years: u32,
    /// Initial fossil share.
    pub alpha: f64,
    pub sigma_path: ElasticityPath,
    /// γ, compounded yearly.
    pub demand_growth_rate: f64,
    pub fossil_schedule: PhaseDownSchedule,
    /// ζ, yearly decline of the renewable unit cost.
    pub re_cost_decline: f64,
    /// Constant fossil unit cost c̄_F.
    pub fossil_unit_cost: f64,
    /// Renewable unit cost at t = 0.
    pub re_initial_cost: f64,
    pub y0: f64,
    pub init_mode: InitMode,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            label: "default".to_string(),
            years: 85,
            alpha: 0.85,
            sigma_path: ElasticityPath::Constant {
                rho: 1.0 / 1.5 - 1.0,
            },
            demand_growth_rate: 0.0,
            fossil_schedule: PhaseDownSchedule::linear(0.51),
            re_cost_decline: 0.0,
            fossil_unit_cost: 1.0,
            re_initial_cost: 1.0,
            y0: 1.0,
            init_mode: InitMode::ShareCalibrated,
        }
    }
}

impl Scenario {
    pub fn params_at(&self, t: f64) -> Result<CesParams, CesError> {
        CesParams::new(self.alpha, self.sigma_path.rho_at(t, self.years)?)
    }

    /// Initial inputs and initial output.
    pub fn initial_state(&self) -> Result<(FactorPoint, f64), CesError> {
        let params = self.params_at(0.0)?;
        match self.init_mode {
            InitMode::ShareCalibrated => Ok((
                ces::calibrate_initial(self.alpha, params.rho(), self.y0)?,
                self.y0,
            )),
            InitMode::DirectShare => {
                let pt = FactorPoint::new(self.alpha * self.y0, (1.0 - self.alpha) * self.y0);
                let y = ces::ces_output(params, pt)?;
                Ok((pt, y))
            }
        }
    }

    pub fn output_at(&self, y_initial: f64, t: u32) -> f64 {
        y_initial * powf(1.0 + self.demand_growth_rate, t as f64)
    }

    pub fn re_price_at(&self, t: u32) -> f64 {
        self.re_initial_cost * powf(1.0 - self.re_cost_decline, t as f64)
    }
}

/// One failed check of [`validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub field: &'static str,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

fn label_ok(label: &str) -> bool {
    !label.is_empty()
        && label
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
}

/// Checks every field invariant and the t = 0 simulation preconditions.
/// An empty list means the scenario can be simulated.
pub fn validate(s: &Scenario) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut bad = |field: &'static str, message: String| out.push(Violation { field, message });

    if !label_ok(&s.label) {
        bad(
            "label",
            format!(
                "{:?} must be non-empty and use only [A-Za-z0-9._-]",
                s.label
            ),
        );
    }
    if s.years < 1 {
        bad("years", "horizon must be at least 1 year".to_string());
    }
    if !(s.alpha > 0.0 && s.alpha < 1.0) {
        bad("alpha", format!("{} must lie in (0, 1)", s.alpha));
    }
    if let Some(msg) = path_problem(&s.sigma_path, s.years.max(1)) {
        bad("sigma_path", msg);
    }
    if !(s.demand_growth_rate >= 0.0 && s.demand_growth_rate.is_finite()) {
        bad(
            "demand_growth_rate",
            format!("{} must be finite and >= 0", s.demand_growth_rate),
        );
    }
    let frac = s.fossil_schedule.final_share_fraction;
    if !(frac > 0.0 && frac < 1.0) {
        bad(
            "fossil_schedule",
            format!("final_share_fraction {frac} must lie in (0, 1) to keep fossil input positive"),
        );
    }
    if !(s.re_cost_decline >= 0.0 && s.re_cost_decline < 1.0) {
        bad(
            "re_cost_decline",
            format!("{} must lie in [0, 1)", s.re_cost_decline),
        );
    }
    for (field, v) in [
        ("fossil_unit_cost", s.fossil_unit_cost),
        ("re_initial_cost", s.re_initial_cost),
        ("y0", s.y0),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            bad(field, format!("{v} must be finite and > 0"));
        }
    }

    if out.is_empty() {
        if let Err(e) = initial_feasibility(s) {
            out.push(Violation {
                field: "init_mode",
                message: format!("initial state is not computable: {e}"),
            });
        }
    }
    out
}

fn path_problem(path: &ElasticityPath, horizon: u32) -> Option<String> {
    let (start, end) = (path.rho_start(), path.rho_end());
    if !(start > -1.0 && start.is_finite() && end > -1.0 && end.is_finite()) {
        return Some(format!(
            "ElasticityPath rho range [{start}, {end}] must stay finite and > -1 (sigma > 0)"
        ));
    }
    match *path {
        ElasticityPath::Constant { .. } => None,
        ElasticityPath::LinearDecay { .. } if end > start => Some(format!(
            "ElasticityPath linear-decay must be non-increasing (rho_end {end} > rho_start {start})"
        )),
        ElasticityPath::ExponentialDecay { rate, .. } if end > start || !(rate >= 0.0 && rate.is_finite()) => {
            Some(format!(
                "ElasticityPath exponential-decay needs rho_end <= rho_start and a finite rate >= 0 \
                 (rho_start {start}, rho_end {end}, rate {rate})"
            ))
        }
        _ => path.rho_at(horizon as f64, horizon).err().map(|e| e.to_string()),
    }
}

fn initial_feasibility(s: &Scenario) -> Result<(), CesError> {
    let (pt, y) = s.initial_state()?;
    let params = s.params_at(0.0)?;
    let f = s.fossil_schedule.fossil_at(pt.fossil, 0.0, s.years)?;
    let r = ces::invert_renewable(params, y, f)?;
    ces::relative_price(params, FactorPoint::new(f, r))?;
    Ok(())
}
