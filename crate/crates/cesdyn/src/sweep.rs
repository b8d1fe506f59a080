//! Parallel grid sweeps with deterministic output.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use cesdyn_core::sim::{run_point, GridPoint, SweepOutcome};
use cesdyn_core::{tax_peak, Scenario, SimError, SweepGrid, TrajectoryTable};
use rayon::prelude::*;

use crate::io::{fmt_g12, trajectory_csv, write_text, IoError};

/// Maps `f` over `items` on `jobs` worker threads (0 = all cores). The
/// result order is the input order whatever the thread count.
pub fn par_map<T, R, F>(items: Vec<T>, jobs: usize, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    if jobs == 1 {
        return items.into_iter().map(f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool");
    pool.install(|| items.into_par_iter().map(f).collect())
}

pub fn run_sweep(base: &Scenario, grid: &SweepGrid, jobs: usize) -> Vec<SweepOutcome> {
    par_map(grid.points(base), jobs, |p| run_point(base, p))
}

/// `label_a<α>_s<σ>_z<ζ>_g<γ>.csv`, numbers in shortest round-trip form.
pub fn point_file_name(label: &str, p: &GridPoint) -> String {
    format!(
        "{label}_a{}_s{}_z{}_g{}.csv",
        p.alpha, p.sigma, p.re_cost_decline, p.demand_growth_rate
    )
}

pub const SUMMARY_HEADER: &str = "file,alpha,sigma,re_cost_decline,demand_growth_rate,status,rows,\
peak_tax_year,peak_tax,final_share_F,final_carbon_tax,final_re_multiple,max_tax_ratio";

/// Rows of a finished or failed run.
pub fn outcome_rows(outcome: &SweepOutcome) -> &[cesdyn_core::TrajectoryRow] {
    match &outcome.result {
        Ok(t) => &t.rows,
        Err(SimError::Infeasible { partial, .. }) => partial,
        Err(SimError::Invalid(_)) => &[],
    }
}

pub fn status(result: &Result<TrajectoryTable, SimError>) -> String {
    match result {
        Ok(_) => "ok".into(),
        Err(SimError::Infeasible { year, .. }) => format!("infeasible@{year}"),
        Err(SimError::Invalid(_)) => "invalid".into(),
    }
}

fn summary_line(out: &mut String, file: &str, outcome: &SweepOutcome, fossil_unit_cost: f64) {
    let p = &outcome.point;
    let rows = outcome_rows(outcome);
    let _ = write!(
        out,
        "{file},{},{},{},{},{},{}",
        fmt_g12(p.alpha),
        fmt_g12(p.sigma),
        fmt_g12(p.re_cost_decline),
        fmt_g12(p.demand_growth_rate),
        status(&outcome.result),
        rows.len()
    );
    match (&outcome.result, rows.last()) {
        (Ok(table), Some(last)) => {
            let (year, peak) = tax_peak(table).expect("non-empty table");
            let max_ratio = peak / fossil_unit_cost;
            let _ = writeln!(
                out,
                ",{year},{},{},{},{},{}",
                fmt_g12(peak),
                fmt_g12(last.share_fossil),
                fmt_g12(last.carbon_tax),
                fmt_g12(last.re_multiple),
                fmt_g12(max_ratio)
            );
        }
        _ => out.push_str(",,,,,,\n"),
    }
}

/// Writes one trajectory per grid point (partial rows for infeasible
/// points) and `summary.csv`. Returns the written paths in grid order.
pub fn write_sweep(
    dir: &Path,
    base: &Scenario,
    outcomes: &[SweepOutcome],
) -> Result<Vec<PathBuf>, IoError> {
    std::fs::create_dir_all(dir).map_err(|source| IoError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut written = Vec::with_capacity(outcomes.len() + 1);
    let mut summary = String::from(SUMMARY_HEADER);
    summary.push('\n');
    for o in outcomes {
        let name = point_file_name(&base.label, &o.point);
        let path = dir.join(&name);
        write_text(&path, &trajectory_csv(outcome_rows(o)))?;
        summary_line(&mut summary, &name, o, base.fossil_unit_cost);
        written.push(path);
    }
    let path = dir.join("summary.csv");
    write_text(&path, &summary)?;
    written.push(path);
    Ok(written)
}
