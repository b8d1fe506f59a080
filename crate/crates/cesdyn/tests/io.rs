use std::path::Path;

use cesdyn::io::{
    fmt_g12, load_scenario, load_series, load_trajectory, parse_scenario, parse_series, rank_fits,
    scenario_json, trajectory_csv, write_fit_report, write_scenario, write_trajectory, IoError,
    TRAJECTORY_HEADER,
};
use cesdyn::reproduce::{des_scenario, DesPath};
use cesdyn_core::scurve::fit;
use cesdyn_core::{simulate, InitMode, Scenario, ScurveError, ScurveKind};

fn p() -> &'static Path {
    Path::new("inline.json")
}

#[test]
fn scenario_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for s in [
        Scenario::default(),
        des_scenario(DesPath::Linear, 0.03, 0.01),
        des_scenario(DesPath::Exponential, 0.0, 0.005),
        Scenario {
            init_mode: InitMode::DirectShare,
            ..Scenario::default()
        },
    ] {
        let path = dir.path().join("s.json");
        write_scenario(&s, &path).unwrap();
        let back = load_scenario(&path).unwrap();
        assert_eq!(back, s);
        assert_eq!(
            scenario_json(&back),
            std::fs::read_to_string(&path).unwrap()
        );
    }
}

#[test]
fn shipped_default_scenario_is_the_default() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/default_scenario.json");
    assert_eq!(load_scenario(&path).unwrap(), Scenario::default());
}

#[test]
fn missing_keys_take_defaults() {
    assert_eq!(parse_scenario("{}", p()).unwrap(), Scenario::default());
    let s = parse_scenario(
        r#"{"alpha": 0.7, "sigma_path": {"kind": "constant", "sigma_start": 2.0}}"#,
        p(),
    )
    .unwrap();
    assert_eq!(s.alpha, 0.7);
    assert_eq!(s.sigma_path.rho_start(), -0.5);
}

#[test]
fn exponential_rate_defaults_to_three_over_horizon() {
    let s = parse_scenario(
        r#"{"years": 60, "sigma_path": {"kind": "exponential-decay", "sigma_start": 0.5, "sigma_end": 3.0}}"#,
        p(),
    )
    .unwrap();
    match s.sigma_path {
        cesdyn_core::ElasticityPath::ExponentialDecay { rate, .. } => assert_eq!(rate, 3.0 / 60.0),
        other => panic!("{other:?}"),
    }
}

#[test]
fn unknown_keys_are_rejected_with_position() {
    match parse_scenario("{\n  \"alpha\": 0.8,\n  \"colour\": 1\n}", p()) {
        Err(IoError::Parse { line, message, .. }) => {
            assert_eq!(line, 3);
            assert!(message.contains("colour"), "{message}");
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        parse_scenario(
            r#"{"sigma_path": {"kind": "constant", "sigma_start": 1.5, "rho": 1}}"#,
            p()
        ),
        Err(IoError::Parse { .. })
    ));
}

#[test]
fn invalid_values_name_the_field() {
    let field = |json: &str| match parse_scenario(json, p()) {
        Err(IoError::Invalid { violations, .. }) => {
            violations.iter().map(|v| v.field).collect::<Vec<_>>()
        }
        other => panic!("{json}: {other:?}"),
    };
    assert_eq!(
        field(r#"{"demand_growth_rate": -0.1}"#),
        ["demand_growth_rate"]
    );
    assert_eq!(field(r#"{"alpha": 1.0}"#), ["alpha"]);
    assert_eq!(field(r#"{"re_cost_decline": 1.0}"#), ["re_cost_decline"]);
    assert_eq!(
        field(r#"{"sigma_path": {"kind": "constant", "sigma_start": -1}}"#),
        ["sigma_path"]
    );
    assert_eq!(
        field(r#"{"sigma_path": {"kind": "wavy", "sigma_start": 1}}"#),
        ["sigma_path"]
    );
    assert_eq!(field(r#"{"init_mode": "guess"}"#), ["init_mode"]);
    assert_eq!(
        field(r#"{"fossil_schedule": {"kind": "linear", "final_share_fraction": 0}}"#),
        ["fossil_schedule"]
    );
    assert_eq!(field(r#"{"label": "a b"}"#), ["label"]);
}

#[test]
fn trajectory_has_one_row_per_year() {
    let s = Scenario {
        years: 3,
        ..Scenario::default()
    };
    let table = simulate(&s).unwrap();
    let text = trajectory_csv(&table.rows);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], TRAJECTORY_HEADER);
    assert_eq!(lines.len(), 5);
    assert!(text.ends_with('\n'));
}

#[test]
fn trajectory_round_trip_to_printed_precision() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let table = simulate(&des_scenario(DesPath::Linear, 0.03, 0.01)).unwrap();
    write_trajectory(&table, &path).unwrap();
    let back = load_trajectory(&path).unwrap();
    assert_eq!(back.len(), table.rows.len());
    for (a, b) in back.iter().zip(&table.rows) {
        assert_eq!(a.t, b.t);
        for (x, y) in [
            (a.rho, b.rho),
            (a.fossil, b.fossil),
            (a.renewable, b.renewable),
            (a.carbon_tax, b.carbon_tax),
            (a.p_fossil, b.p_fossil),
            (a.re_multiple, b.re_multiple),
        ] {
            assert!((x - y).abs() <= 5e-12 * y.abs().max(1e-300), "{x} vs {y}");
            assert_eq!(fmt_g12(x), fmt_g12(y));
        }
    }
}

#[test]
fn series_rejections_name_the_row() {
    let err = |text: &str| parse_series(text, Path::new("s.csv")).unwrap_err();
    match err("year,share\n1990,0.1\n1991,1.2\n") {
        IoError::Series { line, source, .. } => {
            assert_eq!(line, 3);
            assert!(matches!(source, ScurveError::ShareOutOfRange { .. }));
        }
        other => panic!("{other:?}"),
    }
    match err("year,share\n1990,0.1\n1991,0.2\n1991,0.3\n") {
        IoError::Series { line, source, .. } => {
            assert_eq!(line, 4);
            assert!(matches!(source, ScurveError::DuplicateYear { .. }));
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        err("year,share\n1991,0.1\n1990,0.2\n"),
        IoError::Series { line: 3, .. }
    ));
    assert!(matches!(
        err("t,share\n1991,0.1\n"),
        IoError::Parse { line: 1, .. }
    ));
    assert!(matches!(
        err("year,share\n1991,abc\n"),
        IoError::Parse { line: 2, .. }
    ));
    assert!(err("year,share\n1991,abc\n").to_string().contains("line 2"));
}

#[test]
fn shipped_series_fits_exactly() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/logistic_synthetic.csv");
    let s = load_series(&path).unwrap();
    assert_eq!(s.len(), 21);
    let f = fit(ScurveKind::Logistic, &s, None).unwrap();
    assert!(f.rmse < 1e-8);
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fit.json");
    write_fit_report(&f, &out).unwrap();
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["model"], "logistic");
    assert_eq!(v["params"].as_array().unwrap().len(), 3);
    assert!(v["converged"].is_boolean());
    let g = fit(ScurveKind::Bass, &s, None).unwrap();
    let ranking = rank_fits(&s, &[g, f]);
    assert_eq!(ranking.fits[0].model, "logistic");
}
