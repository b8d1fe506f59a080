//! Default grids and scenarios behind each reproducible figure, and the
//! claims report. Every default the figures depend on is set here.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use cesdyn_core::ces::{point_at_share, rho_from_sigma};
use cesdyn_core::sim::SweepOutcome;
use cesdyn_core::{
    simulate, tax_peak, ElasticityPath, InitMode, PhaseDownSchedule, Scenario, SimError, SweepGrid,
    TrajectoryTable,
};
use serde::Serialize;

use crate::io::{fmt_g12, trajectory_csv, write_json, write_text, IoError};
use crate::sweep::{outcome_rows, par_map, run_sweep, status, write_sweep};

pub const HORIZON: u32 = 85;
pub const ALPHAS: [f64; 3] = [0.75, 0.85, 0.95];
pub const SIGMAS: [f64; 4] = [0.5, 1.0, 1.5, 2.0];
pub const ZETAS: [f64; 3] = [0.0, 0.005, 0.01];
pub const GAMMAS: [f64; 2] = [0.0, 0.03];

/// Fossil input left at the horizon in the constant-elasticity figures.
/// σ = 0.5 saturates at exactly half of F₀ under constant demand.
pub const FIG_FINAL_FRACTION: f64 = 0.51;

pub const DES_ALPHA: f64 = 0.6;
pub const DES_FINAL_FRACTION: f64 = 0.25;
pub const DES_SIGMA_START: f64 = 0.5;
pub const DES_SIGMA_END: f64 = 3.0;

/// Share reduction quoted for σ = 1.5.
pub const CLAIM_SHARE_FROM: f64 = 0.85;
pub const CLAIM_SHARE_TO: f64 = 0.55;
pub const CLAIM_SIGMA: f64 = 1.5;
pub const CLAIM_MULTIPLE: f64 = 13.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    One,
    Two,
    Six,
    Seven,
    Claims,
}

impl FromStr for Figure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "1" => Ok(Figure::One),
            "2" => Ok(Figure::Two),
            "6" => Ok(Figure::Six),
            "7" => Ok(Figure::Seven),
            "claims" => Ok(Figure::Claims),
            _ => Err(format!(
                "unknown figure {s:?} (expected 1, 2, 6, 7 or claims)"
            )),
        }
    }
}

pub fn figure_base(label: &str) -> Scenario {
    Scenario {
        label: label.into(),
        years: HORIZON,
        fossil_schedule: PhaseDownSchedule::linear(FIG_FINAL_FRACTION),
        ..Scenario::default()
    }
}

/// α × σ × ζ at constant demand.
pub fn fig1_grid() -> SweepGrid {
    SweepGrid {
        alpha: ALPHAS.to_vec(),
        sigma: SIGMAS.to_vec(),
        re_cost_decline: ZETAS.to_vec(),
        demand_growth_rate: vec![0.0],
    }
}

/// α × σ × ζ × γ, constant against growing demand.
pub fn fig2_grid() -> SweepGrid {
    SweepGrid {
        demand_growth_rate: GAMMAS.to_vec(),
        ..fig1_grid()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DesPath {
    Linear,
    Exponential,
}

impl DesPath {
    pub fn name(&self) -> &'static str {
        match self {
            DesPath::Linear => "linear",
            DesPath::Exponential => "exponential",
        }
    }

    pub fn path(&self) -> ElasticityPath {
        let rho_start = rho_from_sigma(DES_SIGMA_START).expect("valid sigma");
        let rho_end = rho_from_sigma(DES_SIGMA_END).expect("valid sigma");
        match self {
            DesPath::Linear => ElasticityPath::LinearDecay { rho_start, rho_end },
            DesPath::Exponential => ElasticityPath::ExponentialDecay {
                rho_start,
                rho_end,
                rate: 3.0 / HORIZON as f64,
            },
        }
    }
}

pub fn des_scenario(path: DesPath, demand_growth_rate: f64, re_cost_decline: f64) -> Scenario {
    Scenario {
        label: format!(
            "des_{}_z{}_g{}",
            path.name(),
            re_cost_decline,
            demand_growth_rate
        ),
        years: HORIZON,
        alpha: DES_ALPHA,
        sigma_path: path.path(),
        demand_growth_rate,
        fossil_schedule: PhaseDownSchedule::exponential(DES_FINAL_FRACTION),
        re_cost_decline,
        ..Scenario::default()
    }
}

/// Both elasticity paths × every ζ at one demand growth rate.
pub fn des_scenarios(demand_growth_rate: f64) -> Vec<Scenario> {
    [DesPath::Linear, DesPath::Exponential]
        .iter()
        .flat_map(|&p| {
            ZETAS
                .iter()
                .map(move |&z| des_scenario(p, demand_growth_rate, z))
        })
        .collect()
}

// ------------------------------------------------------------ claims: RE multiple

/// One reading of "F share 85% reduced to 55% requires 13 times the RE".
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Interpretation {
    pub init_mode: &'static str,
    /// `sigma`: 1.5 is σ (ρ = 1/σ − 1); `rho`: 1.5 is ρ.
    pub elasticity_reading: &'static str,
    /// `share`: fossil share falls to 0.55 on the isoquant; `level`: the
    /// fossil quantity falls by the factor 55/85.
    pub target_reading: &'static str,
    pub rho: f64,
    pub final_fraction: f64,
    pub final_share_f: f64,
    pub re_multiple: f64,
    /// `re_multiple / 13 − 1`.
    pub deviation: f64,
}

pub fn claim_scenario(init_mode: InitMode, rho: f64, final_fraction: f64) -> Scenario {
    Scenario {
        label: "claim".into(),
        years: HORIZON,
        alpha: CLAIM_SHARE_FROM,
        sigma_path: ElasticityPath::Constant { rho },
        fossil_schedule: PhaseDownSchedule::linear(final_fraction),
        init_mode,
        ..Scenario::default()
    }
}

/// Fraction of F₀ at which the constant-output isoquant reaches fossil
/// share `share`.
pub fn fraction_for_share(init_mode: InitMode, rho: f64, share: f64) -> Result<f64, SimError> {
    let s = claim_scenario(init_mode, rho, 0.5);
    let infeasible = |source| SimError::Infeasible {
        year: 0,
        source,
        partial: Vec::new(),
    };
    let (start, y) = s.initial_state().map_err(infeasible)?;
    let params = s.params_at(0.0).map_err(infeasible)?;
    let end = point_at_share(params, y, share).map_err(infeasible)?;
    Ok(end.fossil / start.fossil)
}

pub fn interpretation_sweep() -> Result<Vec<Interpretation>, SimError> {
    let mut out = Vec::new();
    for init_mode in [InitMode::ShareCalibrated, InitMode::DirectShare] {
        for (reading, rho) in [
            ("sigma", rho_from_sigma(CLAIM_SIGMA).expect("valid sigma")),
            ("rho", CLAIM_SIGMA),
        ] {
            for target in ["share", "level"] {
                let fraction = match target {
                    "share" => fraction_for_share(init_mode, rho, CLAIM_SHARE_TO)?,
                    _ => CLAIM_SHARE_TO / CLAIM_SHARE_FROM,
                };
                let table = simulate(&claim_scenario(init_mode, rho, fraction))?;
                let last = table.last();
                out.push(Interpretation {
                    init_mode: init_mode.name(),
                    elasticity_reading: reading,
                    target_reading: target,
                    rho,
                    final_fraction: fraction,
                    final_share_f: last.share_fossil,
                    re_multiple: last.re_multiple,
                    deviation: last.re_multiple / CLAIM_MULTIPLE - 1.0,
                });
            }
        }
    }
    Ok(out)
}

pub fn closest_interpretation(v: &[Interpretation]) -> Option<&Interpretation> {
    v.iter()
        .min_by(|a, b| a.deviation.abs().total_cmp(&b.deviation.abs()))
}

// ------------------------------------------------------------ claims: tax ratio

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaxRatio {
    pub alpha: f64,
    pub sigma: f64,
    pub re_cost_decline: f64,
    pub status: String,
    /// max carbon_tax / c̄_F over the run.
    pub max_tax_ratio: f64,
    /// max carbon_tax / c̄_F over the years before share_F first drops
    /// below 0.5.
    pub max_tax_ratio_before_half: f64,
    /// p_F(T) / p_F(0).
    pub fossil_price_growth: f64,
}

pub fn tax_ratio(outcome: &SweepOutcome, fossil_unit_cost: f64) -> TaxRatio {
    let rows = outcome_rows(outcome);
    let max_over = |it: &mut dyn Iterator<Item = f64>| it.fold(f64::NEG_INFINITY, f64::max);
    let max_tax_ratio = max_over(&mut rows.iter().map(|r| r.carbon_tax / fossil_unit_cost));
    let max_tax_ratio_before_half = max_over(
        &mut rows
            .iter()
            .take_while(|r| r.share_fossil >= 0.5)
            .map(|r| r.carbon_tax / fossil_unit_cost),
    );
    let fossil_price_growth = match (rows.first(), rows.last()) {
        (Some(a), Some(b)) => b.p_fossil / a.p_fossil,
        _ => f64::NAN,
    };
    TaxRatio {
        alpha: outcome.point.alpha,
        sigma: outcome.point.sigma,
        re_cost_decline: outcome.point.re_cost_decline,
        status: status(&outcome.result),
        max_tax_ratio,
        max_tax_ratio_before_half,
        fossil_price_growth,
    }
}

pub fn tax_ratio_report(jobs: usize) -> Vec<TaxRatio> {
    let base = figure_base("fig1");
    run_sweep(&base, &fig1_grid(), jobs)
        .iter()
        .map(|o| tax_ratio(o, base.fossil_unit_cost))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimsReport {
    pub re_multiple_target: f64,
    pub interpretations: Vec<Interpretation>,
    pub closest: Interpretation,
    pub tax_ratio_threshold: f64,
    pub any_ratio_above_threshold_before_half: bool,
    pub tax_ratios: Vec<TaxRatio>,
}

pub fn claims_report(jobs: usize) -> Result<ClaimsReport, SimError> {
    let interpretations = interpretation_sweep()?;
    let closest = closest_interpretation(&interpretations)
        .expect("eight readings")
        .clone();
    let tax_ratios = tax_ratio_report(jobs);
    Ok(ClaimsReport {
        re_multiple_target: CLAIM_MULTIPLE,
        any_ratio_above_threshold_before_half: tax_ratios
            .iter()
            .any(|t| t.max_tax_ratio_before_half > 1e3),
        closest,
        interpretations,
        tax_ratio_threshold: 1e3,
        tax_ratios,
    })
}

fn interpretations_csv(v: &[Interpretation]) -> String {
    let mut out =
        String::from("init_mode,elasticity_reading,target_reading,rho,final_fraction,final_share_F,re_multiple,deviation\n");
    for i in v {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            i.init_mode,
            i.elasticity_reading,
            i.target_reading,
            fmt_g12(i.rho),
            fmt_g12(i.final_fraction),
            fmt_g12(i.final_share_f),
            fmt_g12(i.re_multiple),
            fmt_g12(i.deviation)
        );
    }
    out
}

fn tax_ratios_csv(v: &[TaxRatio]) -> String {
    let mut out = String::from(
        "alpha,sigma,re_cost_decline,status,max_tax_ratio,max_tax_ratio_before_half,fossil_price_growth\n",
    );
    for t in v {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            fmt_g12(t.alpha),
            fmt_g12(t.sigma),
            fmt_g12(t.re_cost_decline),
            t.status,
            fmt_g12(t.max_tax_ratio),
            fmt_g12(t.max_tax_ratio_before_half),
            fmt_g12(t.fossil_price_growth)
        );
    }
    out
}

// ------------------------------------------------------------ DES figures

#[derive(Debug, Clone, PartialEq)]
pub struct DesRun {
    pub scenario: Scenario,
    pub result: Result<TrajectoryTable, SimError>,
}

pub fn run_des(demand_growth_rate: f64, jobs: usize) -> Vec<DesRun> {
    par_map(des_scenarios(demand_growth_rate), jobs, |scenario| DesRun {
        result: simulate(&scenario),
        scenario,
    })
}

fn write_des(dir: &Path, runs: &[DesRun]) -> Result<Vec<PathBuf>, IoError> {
    let mut written = Vec::new();
    let mut summary = String::from("file,path,re_cost_decline,demand_growth_rate,status,peak_tax_year,peak_tax,final_carbon_tax,peak_drop\n");
    for run in runs {
        let name = format!("{}.csv", run.scenario.label);
        let rows = match &run.result {
            Ok(t) => t.rows.as_slice(),
            Err(SimError::Infeasible { partial, .. }) => partial.as_slice(),
            Err(SimError::Invalid(_)) => &[],
        };
        let path = dir.join(&name);
        write_text(&path, &trajectory_csv(rows))?;
        written.push(path);
        let _ = write!(
            summary,
            "{name},{},{},{},{}",
            run.scenario.sigma_path.kind_name(),
            fmt_g12(run.scenario.re_cost_decline),
            fmt_g12(run.scenario.demand_growth_rate),
            status(&run.result)
        );
        match &run.result {
            Ok(table) => {
                let (year, peak) = tax_peak(table).expect("non-empty table");
                let last = table.last().carbon_tax;
                let _ = writeln!(
                    summary,
                    ",{year},{},{},{}",
                    fmt_g12(peak),
                    fmt_g12(last),
                    fmt_g12((peak - last) / peak.abs())
                );
            }
            Err(_) => summary.push_str(",,,,\n"),
        }
    }
    let path = dir.join("summary.csv");
    write_text(&path, &summary)?;
    written.push(path);
    Ok(written)
}

// ------------------------------------------------------------ driver

fn ensure_dir(dir: &Path) -> Result<(), IoError> {
    std::fs::create_dir_all(dir).map_err(|source| IoError::Io {
        path: dir.to_path_buf(),
        source,
    })
}

#[derive(Debug, thiserror::Error)]
pub enum ReproduceError {
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// Runs `figure` and writes its data files under `dir`. Returns the
/// written paths in a fixed order.
pub fn reproduce(figure: Figure, dir: &Path, jobs: usize) -> Result<Vec<PathBuf>, ReproduceError> {
    ensure_dir(dir)?;
    let written = match figure {
        Figure::One | Figure::Two => {
            let (label, grid) = match figure {
                Figure::One => ("fig1", fig1_grid()),
                _ => ("fig2", fig2_grid()),
            };
            let base = figure_base(label);
            let outcomes = run_sweep(&base, &grid, jobs);
            write_sweep(dir, &base, &outcomes)?
        }
        Figure::Six => write_des(dir, &run_des(0.0, jobs))?,
        Figure::Seven => write_des(dir, &run_des(0.03, jobs))?,
        Figure::Claims => {
            let report = claims_report(jobs)?;
            let files = [
                (
                    "re_multiple_interpretations.csv",
                    interpretations_csv(&report.interpretations),
                ),
                ("tax_ratio_by_point.csv", tax_ratios_csv(&report.tax_ratios)),
            ];
            let mut written = Vec::new();
            for (name, text) in files {
                let path = dir.join(name);
                write_text(&path, &text)?;
                written.push(path);
            }
            let path = dir.join("claims.json");
            write_json(&report, &path)?;
            written.push(path);
            written
        }
    };
    Ok(written)
}
