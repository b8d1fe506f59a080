//! Acceptance criteria A1–A8. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

mod common;

use cesdyn::reproduce::{
    closest_interpretation, fig1_grid, figure_base, interpretation_sweep, run_des,
    tax_ratio_report, ALPHAS, SIGMAS, ZETAS,
};
use cesdyn_core::ces::{
    calibrate_initial, ces_output, invert_renewable, mrts, price_elasticity,
    quantity_ratio_from_prices, relative_price,
};
use cesdyn_core::scurve::fit;
use cesdyn_core::{
    simulate, tax_peak, CesParams, ElasticityPath, FactorPoint, PricePair, Scenario, ScurveKind,
    ScurveModel, SeriesData,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DRAWS: usize = 1000;
const TOL_HOMOGENEITY: f64 = 1e-12;
const TOL_INVERSION: f64 = 1e-10;
const TOL_IDENTITY: f64 = 1e-12;
const TOL_ELASTICITY: f64 = 1e-6;
const TOL_CALIBRATION: f64 = 1e-10;
const TOL_CLAIM_MULTIPLE: f64 = 1e-3;
const CLAIM_BAND: f64 = 0.30;
const TAX_RATIO_THRESHOLD: f64 = 1e3;
const BLOWUP_THRESHOLD: f64 = 1e2;
const PEAK_DROP: f64 = 0.10;
const TOL_PARAM: f64 = 1e-4;
const TOL_RMSE: f64 = 1e-8;
const TOL_NESTED: f64 = 1e-9;

type Check = fn() -> Outcome;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn a1_ces_algebra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0ce5);
    let mut worst = [0.0f64; 5];
    for _ in 0..DRAWS {
        let alpha = rng.gen_range(0.02..0.98);
        let rho = rng.gen_range(-0.9..4.0);
        let p = CesParams::new(alpha, rho).unwrap();
        let x = FactorPoint::new(rng.gen_range(0.01..100.0), rng.gen_range(0.01..100.0));
        let k = rng.gen_range(0.01..100.0);

        let y = ces_output(p, x).unwrap();
        worst[0] = worst[0].max(rel(ces_output(p, x.scaled(k)).unwrap(), k * y));

        let r = invert_renewable(p, y, x.fossil).unwrap();
        worst[1] = worst[1].max(rel(
            ces_output(p, FactorPoint::new(x.fossil, r)).unwrap(),
            y,
        ));

        worst[2] = worst[2].max(rel(mrts(p, x).unwrap(), relative_price(p, x).unwrap()));

        let pr = rng.gen_range(0.05..20.0);
        let h = 1e-5;
        let q = |v: f64| {
            quantity_ratio_from_prices(p, PricePair::new(v, 1.0))
                .unwrap()
                .ln()
        };
        let fd = (q(pr * (1.0 + h)) - q(pr * (1.0 - h))) / ((1.0 + h).ln() - (1.0 - h).ln());
        worst[3] = worst[3].max((fd - price_elasticity(p).unwrap()).abs());

        let y0 = rng.gen_range(0.01..100.0);
        let c = calibrate_initial(alpha, rho, y0).unwrap();
        let share_err = (c.fossil / (c.fossil + c.renewable) - alpha).abs();
        worst[4] = worst[4].max(share_err.max(rel(ces_output(p, c).unwrap(), y0)));
    }
    let tol = [
        TOL_HOMOGENEITY,
        TOL_INVERSION,
        TOL_IDENTITY,
        TOL_ELASTICITY,
        TOL_CALIBRATION,
    ];
    let pass = worst.iter().zip(tol).all(|(w, t)| *w < t);
    outcome(
        pass,
        format!(
            "{DRAWS} draws; max errors: homogeneity {:.1e}, inversion {:.1e}, mrts/price {:.1e}, elasticity {:.1e}, calibration {:.1e}",
            worst[0], worst[1], worst[2], worst[3], worst[4]
        ),
    )
}

fn a2_saturation() -> Outcome {
    let rows = simulate(&Scenario::default()).unwrap().rows;
    let r_up = rows.windows(2).all(|w| w[1].renewable > w[0].renewable);
    let marginal: Vec<f64> = rows
        .windows(2)
        .map(|w| (w[1].renewable - w[0].renewable) / (w[0].fossil - w[1].fossil))
        .collect();
    let marginal_up = marginal.windows(2).all(|w| w[1] > w[0]);
    let tail = &rows[rows.len() - rows.len() / 3..];
    let tax_up = tail.windows(2).all(|w| w[1].carbon_tax > w[0].carbon_tax);
    let convex = tail
        .windows(3)
        .all(|w| w[2].carbon_tax - 2.0 * w[1].carbon_tax + w[0].carbon_tax > 0.0);
    outcome(
        r_up && marginal_up && tax_up && convex,
        format!(
            "R increasing {r_up}, dR/|dF| increasing {marginal_up}, tax increasing {tax_up} and convex {convex} over t={}..{}; tax {:.4} -> {:.4}",
            tail[0].t,
            tail[tail.len() - 1].t,
            rows[0].carbon_tax,
            rows[rows.len() - 1].carbon_tax
        ),
    )
}

/// RE multiple for the share reading: the unit-output point with fossil
/// share `s` under weight α = 0.85 has total input
/// `1 / (α·s^(−ρ) + (1−α)·(1−s)^(−ρ))^(−1/ρ)`.
fn share_reading_oracle(rho: f64) -> f64 {
    let alpha: f64 = 0.85;
    let total = |s: f64| {
        1.0 / (alpha * s.powf(-rho) + (1.0 - alpha) * (1.0 - s).powf(-rho)).powf(-1.0 / rho)
    };
    (0.45 * total(0.55)) / (0.15 * total(0.85))
}

fn a3_claim_multiple() -> Outcome {
    let sweep = match interpretation_sweep() {
        Ok(s) => s,
        Err(e) => return outcome(false, format!("interpretation sweep failed: {e}")),
    };
    for i in &sweep {
        println!(
            "     {:<16} {:<5} {:<5} re_multiple {:>9.4}  deviation {:>+7.1}%",
            i.init_mode,
            i.elasticity_reading,
            i.target_reading,
            i.re_multiple,
            100.0 * i.deviation
        );
    }
    let oracle = share_reading_oracle(1.0 / 1.5 - 1.0);
    let default = sweep
        .iter()
        .find(|i| {
            i.init_mode == "share-calibrated"
                && i.elasticity_reading == "sigma"
                && i.target_reading == "share"
        })
        .expect("default reading present");
    let matches = (default.re_multiple - oracle).abs() < TOL_CLAIM_MULTIPLE;
    let closest = closest_interpretation(&sweep).expect("non-empty");
    let within = closest.deviation.abs() <= CLAIM_BAND;
    outcome(
        matches && sweep.len() == 8,
        format!(
            "default reading {:.4} vs oracle {oracle:.4}; closest {}/{}/{} = {:.4}x ({:+.1}% from 13x, {})",
            default.re_multiple,
            closest.init_mode,
            closest.elasticity_reading,
            closest.target_reading,
            closest.re_multiple,
            100.0 * closest.deviation,
            if within { "within the 30% band" } else { "outside the 30% band: recorded as a finding" }
        ),
    )
}

fn a4_tax_ratio() -> Outcome {
    let report = tax_ratio_report(0);
    let direct = report
        .iter()
        .any(|t| t.max_tax_ratio_before_half > TAX_RATIO_THRESHOLD);
    let max_alpha = ALPHAS.iter().copied().fold(f64::MIN, f64::max);
    let min_sigma = SIGMAS.iter().copied().fold(f64::MAX, f64::min);
    let extreme: Vec<_> = report
        .iter()
        .filter(|t| t.alpha == max_alpha && t.sigma == min_sigma)
        .collect();
    let documented = report.len() == fig1_grid().len() && report.iter().all(|t| t.status == "ok");
    let blowup = !extreme.is_empty()
        && extreme
            .iter()
            .all(|t| t.fossil_price_growth >= BLOWUP_THRESHOLD);
    let best = report
        .iter()
        .map(|t| t.max_tax_ratio_before_half)
        .fold(f64::NEG_INFINITY, f64::max);
    let growth: Vec<String> = extreme
        .iter()
        .map(|t| format!("{:.0}", t.fossil_price_growth))
        .collect();
    outcome(
        direct || (documented && blowup),
        format!(
            "{} points documented; max tax/c_F before share 0.5 = {best:.2} ({}); alpha={max_alpha}, sigma={min_sigma} p_F(T)/p_F(0) = [{}]",
            report.len(),
            if direct { "above 1e3" } else { "below 1e3, documentation branch" },
            growth.join(", ")
        ),
    )
}

fn a5_des_peak() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for gamma in [0.0, 0.03] {
        for run in run_des(gamma, 0) {
            if run.scenario.re_cost_decline <= 0.0 {
                continue;
            }
            checked += 1;
            let table = match &run.result {
                Ok(t) => t,
                Err(e) => {
                    failures.push(format!("{}: {e}", run.scenario.label));
                    continue;
                }
            };
            let (year, peak) = tax_peak(table).unwrap();
            let last = table.last().carbon_tax;
            let interior = year > 0 && year < run.scenario.years;
            let dropped = peak - last >= PEAK_DROP * peak.abs();
            if !(interior && dropped) {
                failures.push(format!(
                    "{} peak t={year} {peak:.4} final {last:.4}",
                    run.scenario.label
                ));
            }
        }
    }
    outcome(
        failures.is_empty() && checked == 8,
        if failures.is_empty() {
            format!("{checked} runs with zeta>0: interior peak and final tax >=10% below it")
        } else {
            failures.join("; ")
        },
    )
}

fn a6_demand_growth() -> Outcome {
    let mut share_ok = 0;
    let mut tax_ok = 0;
    let mut infeasible = 0;
    let mut total = 0;
    for &alpha in &ALPHAS {
        for &sigma in &SIGMAS {
            for &zeta in &ZETAS {
                total += 1;
                let s = |gamma: f64| Scenario {
                    alpha,
                    sigma_path: ElasticityPath::constant_sigma(sigma).unwrap(),
                    re_cost_decline: zeta,
                    demand_growth_rate: gamma,
                    ..figure_base("contrast")
                };
                let (flat, grow) = match (simulate(&s(0.0)), simulate(&s(0.03))) {
                    (Ok(a), Ok(b)) => (a, b),
                    _ => {
                        infeasible += 1;
                        continue;
                    }
                };
                if grow.last().share_fossil > flat.last().share_fossil {
                    share_ok += 1;
                }
                if grow.last().carbon_tax > flat.last().carbon_tax {
                    tax_ok += 1;
                }
            }
        }
    }
    outcome(
        share_ok == total && tax_ok == total,
        format!(
            "{total} points: share_F(T) higher under growth at {share_ok}, tax(T) higher at {tax_ok}, infeasible under growth at {infeasible}"
        ),
    )
}

fn synthetic(kind: ScurveKind, params: &[f64]) -> SeriesData {
    let m = ScurveModel::new(kind, params.to_vec())
        .unwrap()
        .with_origin(1900.0);
    let pts = (0..=20)
        .map(|i| 1900.0 + 5.0 * i as f64)
        .map(|t| (t, m.evaluate(t)))
        .collect();
    SeriesData::new("synthetic", pts).unwrap()
}

fn a7_scurve_recovery() -> Outcome {
    let cases: [(ScurveKind, &[f64]); 3] = [
        (ScurveKind::Logistic, &[0.3, 0.0, 1950.0]),
        (ScurveKind::Gompertz, &[5.0, 0.08]),
        (ScurveKind::Bass, &[0.01, 0.15]),
    ];
    let mut pass = true;
    let mut notes = Vec::new();
    for (kind, truth) in cases {
        let f = match fit(kind, &synthetic(kind, truth), None) {
            Ok(f) => f,
            Err(e) => {
                pass = false;
                notes.push(format!("{kind}: {e}"));
                continue;
            }
        };
        let err = f
            .model
            .params()
            .iter()
            .zip(truth)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        pass &= err < TOL_PARAM && f.rmse < TOL_RMSE;
        notes.push(format!("{kind} param err {err:.1e} rmse {:.1e}", f.rmse));
    }
    let data = synthetic(ScurveKind::Logistic, &[0.3, 0.0, 1950.0]);
    match (
        fit(ScurveKind::Logistic, &data, None),
        fit(ScurveKind::LogisticHo, &data, None),
    ) {
        (Ok(lg), Ok(ho)) => {
            pass &= ho.rmse <= lg.rmse + TOL_NESTED;
            notes.push(format!(
                "logistic-ho rmse {:.1e} vs logistic {:.1e}",
                ho.rmse, lg.rmse
            ));
        }
        (a, b) => {
            pass = false;
            notes.push(format!("nested fit failed: {:?} {:?}", a.err(), b.err()));
        }
    }
    outcome(pass, notes.join("; "))
}

fn a8_reproduce_golden() -> Outcome {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let first = common::digest_lines(a.path(), 1);
    let second = common::digest_lines(b.path(), 0);
    let identical = first == second;
    let golden = common::read_golden();
    let matches = golden.as_ref() == Some(&first);
    outcome(
        identical && matches,
        format!(
            "{} files; reruns identical {identical}; golden checksums {}",
            first.len(),
            match golden {
                None => "missing".to_string(),
                Some(_) if matches => "match".to_string(),
                Some(g) => format!("differ ({} expected, {} produced)", g.len(), first.len()),
            }
        ),
    )
}

fn main() {
    let criteria: [(&str, &str, Check); 8] = [
        ("A1", "CES algebra properties", a1_ces_algebra),
        ("A2", "constant-elasticity saturation", a2_saturation),
        ("A3", "RE multiple interpretation sweep", a3_claim_multiple),
        ("A4", "carbon tax ratio report", a4_tax_ratio),
        ("A5", "dynamic-elasticity tax peak", a5_des_peak),
        ("A6", "demand-growth contrast", a6_demand_growth),
        ("A7", "S-curve fit recovery", a7_scurve_recovery),
        (
            "A8",
            "reproduce determinism and golden checksums",
            a8_reproduce_golden,
        ),
    ];
    let mut failed = 0;
    for (id, name, check) in criteria {
        let o = check();
        println!(
            "{} {id} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        if !o.pass {
            failed += 1;
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
