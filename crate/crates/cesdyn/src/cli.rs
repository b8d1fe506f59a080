//! Command-line interface.
//!
//! Exit codes: 0 success, 2 invalid input, 3 infeasible scenario, 4 I/O.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use cesdyn_core::scurve::fit;
use cesdyn_core::{simulate, tax_peak, ScurveKind, SimError};

use crate::io::{self, IoError};
use crate::reproduce::{self, Figure, ReproduceError};
use crate::svg::trajectory_svg;
use crate::sweep::{run_sweep, write_sweep};

#[derive(Debug, Parser)]
#[command(
    name = "cesdyn",
    version,
    about = "CES energy-substitution carbon-tax simulator and S-curve fitter"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate one scenario; writes trajectory.csv and summary.json.
    Simulate {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Report negative carbon taxes as zero.
        #[arg(long)]
        clamp_negative_tax: bool,
        /// Also write trajectory.svg.
        #[arg(long)]
        svg: bool,
    },
    /// Simulate every point of a parameter grid.
    Sweep {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Fit diffusion curves to a year,share series.
    Fit {
        #[arg(long)]
        series: PathBuf,
        /// logistic, logistic-ho, gompertz or bass; repeatable.
        #[arg(long = "model", required = true)]
        models: Vec<ScurveKind>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Regenerate the data behind a figure or the claims report.
    Reproduce {
        /// 1, 2, 6, 7 or claims.
        #[arg(long)]
        figure: Figure,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
}

#[derive(Debug)]
pub enum Failure {
    Validation(String),
    Infeasible(String),
    Io(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 2,
            Failure::Infeasible(_) => 3,
            Failure::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Infeasible(m) | Failure::Io(m) => m,
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        if e.is_validation() {
            Failure::Validation(e.to_string())
        } else {
            Failure::Io(e.to_string())
        }
    }
}

impl From<SimError> for Failure {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Invalid(_) => Failure::Validation(e.to_string()),
            SimError::Infeasible { .. } => Failure::Infeasible(e.to_string()),
        }
    }
}

impl From<ReproduceError> for Failure {
    fn from(e: ReproduceError) -> Self {
        match e {
            ReproduceError::Io(e) => e.into(),
            ReproduceError::Sim(e) => e.into(),
        }
    }
}

#[derive(Debug, Serialize)]
struct SimulateSummary {
    label: String,
    years: u32,
    peak_tax_year: u32,
    peak_tax: f64,
    final_share_f: f64,
    final_carbon_tax: f64,
    final_re_multiple: f64,
    clamped_negative_tax: bool,
}

fn create_dir(dir: &Path) -> Result<(), Failure> {
    std::fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))
}

fn cmd_simulate(scenario: &Path, out: &Path, clamp: bool, svg: bool) -> Result<(), Failure> {
    let scenario = io::load_scenario(scenario)?;
    let mut table = simulate(&scenario)?;
    if clamp {
        for row in &mut table.rows {
            row.carbon_tax = row.carbon_tax.max(0.0);
        }
    }
    create_dir(out)?;
    io::write_trajectory(&table, &out.join("trajectory.csv"))?;
    let (peak_tax_year, peak_tax) = tax_peak(&table).expect("non-empty table");
    let last = table.last();
    let summary = SimulateSummary {
        label: scenario.label.clone(),
        years: scenario.years,
        peak_tax_year,
        peak_tax,
        final_share_f: last.share_fossil,
        final_carbon_tax: last.carbon_tax,
        final_re_multiple: last.re_multiple,
        clamped_negative_tax: clamp,
    };
    io::write_json(&summary, &out.join("summary.json"))?;
    if svg {
        io::write_text(
            &out.join("trajectory.svg"),
            &trajectory_svg(&scenario.label, &table.rows),
        )?;
    }
    Ok(())
}

fn cmd_sweep(scenario: &Path, grid: &Path, out: &Path, jobs: usize) -> Result<(), Failure> {
    let base = io::load_scenario(scenario)?;
    let grid = io::load_grid(grid)?;
    let outcomes = run_sweep(&base, &grid, jobs);
    write_sweep(out, &base, &outcomes)?;
    for o in &outcomes {
        if let Err(e) = &o.result {
            eprintln!(
                "warning: alpha={} sigma={} zeta={} gamma={}: {e}",
                o.point.alpha, o.point.sigma, o.point.re_cost_decline, o.point.demand_growth_rate
            );
        }
    }
    Ok(())
}

fn cmd_fit(series: &Path, models: &[ScurveKind], out: &Path) -> Result<(), Failure> {
    let data = io::load_series(series)?;
    let mut kinds = models.to_vec();
    kinds.dedup();
    let mut fits = Vec::with_capacity(kinds.len());
    for kind in kinds {
        let f = fit(kind, &data, None).map_err(|e| Failure::Validation(format!("{kind}: {e}")))?;
        fits.push(f);
    }
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        create_dir(parent)?;
    }
    io::write_fit_ranking(&io::rank_fits(&data, &fits), out)?;
    Ok(())
}

pub fn execute(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Simulate {
            scenario,
            out,
            clamp_negative_tax,
            svg,
        } => cmd_simulate(&scenario, &out, clamp_negative_tax, svg),
        Command::Sweep {
            scenario,
            grid,
            out,
            jobs,
        } => cmd_sweep(&scenario, &grid, &out, jobs),
        Command::Fit {
            series,
            models,
            out,
        } => cmd_fit(&series, &models, &out),
        Command::Reproduce { figure, out, jobs } => {
            reproduce::reproduce(figure, &out, jobs)?;
            Ok(())
        }
    }
}

/// Parses `std::env::args`, runs the command and maps failures to exit
/// codes. Usage errors exit with 2.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
