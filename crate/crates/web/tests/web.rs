use lingrowth_web::{balls_json, borderline_json, minimize_json};
use serde_json::Value;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

fn pts(v: &Value) -> Vec<[f64; 2]> {
    serde_json::from_value(v.clone()).unwrap()
}

#[test]
fn euclidean_balls_are_unit_circles() {
    let r = parse(&balls_json(r#"{"key": "euclidean"}"#, 64).unwrap());
    for key in ["unit", "polar"] {
        let p = pts(&r[key]);
        assert_eq!(p.len(), 64);
        assert!(p.iter().all(|q| (q[0].hypot(q[1]) - 1.0).abs() < 1e-9), "{key}");
    }
}

#[test]
fn l1_ball_and_its_polar_square() {
    let r = parse(&balls_json(r#"{"key": "l1"}"#, 128).unwrap());
    assert!(pts(&r["unit"])
        .iter()
        .all(|q| (q[0].abs() + q[1].abs() - 1.0).abs() < 1e-12));
    assert!(pts(&r["polar"])
        .iter()
        .all(|q| (q[0].abs().max(q[1].abs()) - 1.0).abs() < 1e-6));
}

#[test]
fn ball_errors_are_messages() {
    assert!(balls_json(r#"{"key": "nope"}"#, 64).is_err());
    assert!(balls_json(r#"{"key": "euclidean", "dim": 3}"#, 64)
        .unwrap_err()
        .contains("planar"));
    assert!(balls_json("{", 64).unwrap_err().contains("line 1"));
}

#[test]
fn borderline_table_decreases() {
    let r = parse(&borderline_json(r#"{"k": [1, 2, 4, 8, 16], "n_r": 100, "n_theta": 100}"#).unwrap());
    let cols: Vec<String> = serde_json::from_value(r["columns"].clone()).unwrap();
    let i = cols.iter().position(|c| c == "a_k").unwrap();
    let a: Vec<f64> = r["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|row| row[i].as_f64().unwrap())
        .collect();
    assert!(a.windows(2).all(|w| w[1] < w[0]) && a.iter().all(|v| *v > 0.0), "{a:?}");
}

#[test]
fn minimize_reports_status_and_certificate() {
    let ok = parse(
        &minimize_json(r#"{"integrand": {"key": "area"}, "u0": [0.1, -0.2], "measures": {"plus": {"domain": [0, 1], "atoms": [[0.5, 1.5]]}}}"#)
            .unwrap(),
    );
    assert_eq!(ok["status"], "converged");
    assert!(ok["certificate"].is_null());
    let prof = pts(&ok["profile"]);
    assert_eq!(prof[0][0], 0.0);
    assert_eq!(prof.last().unwrap()[0], 1.0);

    let bad = parse(
        &minimize_json(r#"{"integrand": {"key": "area"}, "u0": [0.1, -0.2], "measures": {"plus": {"domain": [0, 1], "atoms": [[0.5, 2.2]]}}}"#)
            .unwrap(),
    );
    assert_eq!(bad["status"], "unbounded_suspected");
    assert_eq!(bad["certificate"]["witness"]["kind"], "intervals");
    assert!(minimize_json(r#"{"integrand": {"key": "area"}}"#).is_err());
}
