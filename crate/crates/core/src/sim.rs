//! Year-by-year carbon-tax simulation.
//!
//! For each year `t = 0..=T`:
//!
//! 1. fossil input `F(t)` follows the exogenous phase-down schedule;
//! 2. the renewable input `R(t)` is solved from the CES isoquant at output
//!    `Y(t) = Y₀·(1+γ)^t` with `ρ(t)` from the elasticity path;
//! 3. the renewable price declines as `p_R(t) = c_R(0)·(1−ζ)^t` and the
//!    fossil price follows from the first-order condition
//!    `p_F = p_R·(α/(1−α))·(F/R)^(−ρ−1)`;
//! 4. the carbon tax is the gap to the constant fossil cost,
//!    `C(t) = p_F(t) − c̄_F`. Negative values are kept as computed.

use alloc::vec::Vec;

use crate::ces::{self, CesError, FactorPoint};
use crate::scenario::{validate, ElasticityPath, Scenario, Violation};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryRow {
    pub t: u32,
    pub rho: f64,
    pub fossil: f64,
    pub renewable: f64,
    pub output: f64,
    pub share_fossil: f64,
    pub p_renewable: f64,
    pub p_fossil: f64,
    pub carbon_tax: f64,
    /// `R(t)/R(0)`.
    pub re_multiple: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryTable {
    pub scenario: Scenario,
    /// One row per year, `t = 0..=T`.
    pub rows: Vec<TrajectoryRow>,
}

impl TrajectoryTable {
    pub fn last(&self) -> &TrajectoryRow {
        self.rows.last().expect("trajectory has at least one row")
    }

    pub fn carbon_tax(&self) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().map(|r| r.carbon_tax)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("invalid scenario: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("year {year}: {source}")]
    Infeasible {
        year: u32,
        source: CesError,
        /// Rows computed before the failing year.
        partial: Vec<TrajectoryRow>,
    },
}

fn join_violations(v: &[Violation]) -> alloc::string::String {
    use alloc::string::ToString;
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// Runs the substitution procedure over the scenario horizon.
pub fn simulate(scenario: &Scenario) -> Result<TrajectoryTable, SimError> {
    let violations = validate(scenario);
    if !violations.is_empty() {
        return Err(SimError::Invalid(violations));
    }
    let horizon = scenario.years;
    let mut rows: Vec<TrajectoryRow> = Vec::with_capacity(horizon as usize + 1);
    let (start, y_initial) = scenario
        .initial_state()
        .map_err(|source| SimError::Infeasible {
            year: 0,
            source,
            partial: Vec::new(),
        })?;

    for t in 0..=horizon {
        let row = year_row(
            scenario,
            start,
            y_initial,
            t,
            rows.first().map(|r| r.renewable),
        );
        match row {
            Ok(row) => rows.push(row),
            Err(source) => {
                return Err(SimError::Infeasible {
                    year: t,
                    source,
                    partial: rows,
                })
            }
        }
    }
    Ok(TrajectoryTable {
        scenario: scenario.clone(),
        rows,
    })
}

fn year_row(
    s: &Scenario,
    start: FactorPoint,
    y_initial: f64,
    t: u32,
    r_initial: Option<f64>,
) -> Result<TrajectoryRow, CesError> {
    let tf = t as f64;
    let params = s.params_at(tf)?;
    let output = s.output_at(y_initial, t);
    let fossil = s.fossil_schedule.fossil_at(start.fossil, tf, s.years)?;
    let renewable = if t == 0 {
        start.renewable
    } else {
        ces::invert_renewable(params, output, fossil)?
    };
    let point = FactorPoint::new(fossil, renewable);
    let p_renewable = s.re_price_at(t);
    let p_fossil = p_renewable * ces::relative_price(params, point)?;
    if !p_fossil.is_finite() {
        return Err(CesError::InfeasibleIsoquant {
            fossil,
            output,
            residual: f64::INFINITY,
        });
    }
    Ok(TrajectoryRow {
        t,
        rho: params.rho(),
        fossil,
        renewable,
        output,
        share_fossil: point.fossil_share(),
        p_renewable,
        p_fossil,
        carbon_tax: p_fossil - s.fossil_unit_cost,
        re_multiple: renewable / r_initial.unwrap_or(renewable),
    })
}

/// Year and value of the highest carbon tax; the earliest year wins ties.
pub fn tax_peak(table: &TrajectoryTable) -> Option<(u32, f64)> {
    let mut best: Option<(u32, f64)> = None;
    for row in &table.rows {
        match best {
            Some((_, v)) if row.carbon_tax <= v => {}
            _ => best = Some((row.t, row.carbon_tax)),
        }
    }
    best
}

/// Value lists for the swept scenario fields. An empty list keeps the base
/// scenario's value. A `sigma` value replaces the base elasticity path with
/// a constant one.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepGrid {
    pub alpha: Vec<f64>,
    pub sigma: Vec<f64>,
    pub re_cost_decline: Vec<f64>,
    pub demand_growth_rate: Vec<f64>,
}

/// One Cartesian grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub alpha: f64,
    pub sigma: f64,
    pub re_cost_decline: f64,
    pub demand_growth_rate: f64,
    sigma_override: bool,
}

impl GridPoint {
    /// The base scenario with this point's overrides applied.
    pub fn apply(&self, base: &Scenario) -> Result<Scenario, SimError> {
        let mut s = base.clone();
        s.alpha = self.alpha;
        s.re_cost_decline = self.re_cost_decline;
        s.demand_growth_rate = self.demand_growth_rate;
        if self.sigma_override {
            s.sigma_path = ElasticityPath::constant_sigma(self.sigma).map_err(|e| {
                SimError::Invalid(alloc::vec![Violation {
                    field: "sigma_path",
                    message: alloc::format!("{e}"),
                }])
            })?;
        }
        Ok(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub point: GridPoint,
    pub result: Result<TrajectoryTable, SimError>,
}

impl SweepGrid {
    pub fn len(&self) -> usize {
        [
            &self.alpha,
            &self.sigma,
            &self.re_cost_decline,
            &self.demand_growth_rate,
        ]
        .iter()
        .map(|v| v.len().max(1))
        .product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid points in nested order alpha > sigma > re_cost_decline >
    /// demand_growth_rate (first field outermost), each list in given order.
    pub fn points(&self, base: &Scenario) -> Vec<GridPoint> {
        fn axis(values: &[f64], fallback: f64) -> Vec<(f64, bool)> {
            if values.is_empty() {
                alloc::vec![(fallback, false)]
            } else {
                values.iter().map(|&v| (v, true)).collect()
            }
        }
        let base_sigma = ces::sigma_from_rho(base.sigma_path.rho_start());
        let mut out = Vec::with_capacity(self.len());
        for &(alpha, _) in &axis(&self.alpha, base.alpha) {
            for &(sigma, sigma_override) in &axis(&self.sigma, base_sigma) {
                for &(zeta, _) in &axis(&self.re_cost_decline, base.re_cost_decline) {
                    for &(gamma, _) in &axis(&self.demand_growth_rate, base.demand_growth_rate) {
                        out.push(GridPoint {
                            alpha,
                            sigma,
                            re_cost_decline: zeta,
                            demand_growth_rate: gamma,
                            sigma_override,
                        });
                    }
                }
            }
        }
        out
    }
}

pub fn run_point(base: &Scenario, point: GridPoint) -> SweepOutcome {
    SweepOutcome {
        point,
        result: point.apply(base).and_then(|s| simulate(&s)),
    }
}

/// Simulates every grid point in order. Failures are kept per point.
pub fn simulate_sweep(base: &Scenario, grid: &SweepGrid) -> Vec<SweepOutcome> {
    grid.points(base)
        .into_iter()
        .map(|p| run_point(base, p))
        .collect()
}
