use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

const RANDOM6_SIGMA: i64 = -3;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn hsymp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hsymp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn error_json(o: &Output) -> Value {
    let text = String::from_utf8(o.stderr.clone()).unwrap();
    serde_json::from_str(text.trim()).expect("stderr is a JSON object")
}

#[test]
fn m_of_a_line_with_itself() {
    let x = fixture("standard2_x.json");
    let o = hsymp(&["m", &fixture("standard2_space.json"), &x, &x]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("m = 0\nintersection_dim = 1\n"), "{out}");
}

#[test]
fn m_on_the_torus_at_t_one() {
    let o = hsymp(&[
        "--json",
        "m",
        &fixture("torus1_space.json"),
        &fixture("torus1_11.json"),
        &fixture("torus1_10.json"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["m"].as_f64().unwrap() + 0.5).abs() < 1e-10);
    assert_eq!(v["intersection_dim"], 1);
    assert_eq!(v["eigenvalues"].as_array().unwrap().len(), 2);
}

#[test]
fn malformed_json_exits_with_2() {
    let x = fixture("standard2_x.json");
    let o = hsymp(&["m", &fixture("malformed.json"), &x, &x]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_json(&o)["exit_code"], 2);
}

#[test]
fn missing_file_exits_with_2() {
    let x = fixture("standard2_x.json");
    let o = hsymp(&["m", &fixture("no_such_file.json"), &x, &x]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_json(&o)["error"], "Io");
}

#[test]
fn triple_with_repeated_lagrangian_is_zero() {
    let (x, xy) = (fixture("standard2_x.json"), fixture("standard2_xy.json"));
    let o = hsymp(&["triple", &fixture("standard2_space.json"), &x, &x, &xy]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "sigma = 0\n");
}

#[test]
fn triple_on_the_shipped_fixture() {
    let o = hsymp(&[
        "triple",
        &fixture("random6_space.json"),
        &fixture("random6_u.json"),
        &fixture("random6_v.json"),
        &fixture("random6_w.json"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), format!("sigma = {RANDOM6_SIGMA}\n"));
}

#[test]
fn triple_with_mismatched_dimensions_exits_with_2() {
    let o = hsymp(&[
        "triple",
        &fixture("random6_space.json"),
        &fixture("random6_u.json"),
        &fixture("standard2_x.json"),
        &fixture("random6_w.json"),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_json(&o)["error"], "Shape");
}

#[test]
fn ambiguous_eigenvalue_exits_with_3() {
    let dir = std::env::temp_dir().join(format!("hsymp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let theta: f64 = 1e-7;
    let near = dir.join("near.json");
    std::fs::write(
        &near,
        format!(
            r#"{{"basis": [[{{"re": {}}}], [{{"re": {}}}]]}}"#,
            theta.cos(),
            theta.sin()
        ),
    )
    .unwrap();
    let o = hsymp(&[
        "m",
        &fixture("standard2_space.json"),
        &fixture("standard2_x.json"),
        near.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(error_json(&o)["error"], "EigenvalueAmbiguity");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn sweep_single_row() {
    let o = hsymp(&["torus-sweep", "1", "1", "1", "0", "1", "1", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("t,m_closed,m_generic,delta"));
    let row: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|f| f.parse().unwrap())
        .collect();
    assert_eq!(row[0], 1.0);
    assert!((row[1] + 0.5).abs() < 1e-10);
    assert!((row[2] + 0.5).abs() < 1e-10);
    assert!(lines.next().is_none());
}

#[test]
fn sweep_of_equal_lines_is_zero() {
    let o = hsymp(&["torus-sweep", "1", "1", "1", "1", "0.5", "2", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let rows: Vec<_> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 4);
    for r in rows {
        let fields: Vec<f64> = r.split(',').map(|f| f.parse().unwrap()).collect();
        assert!(fields[1].abs() < 1e-12 && fields[2].abs() < 1e-9, "{r}");
    }
}

#[test]
fn sweep_argument_errors() {
    assert_eq!(
        hsymp(&["torus-sweep", "1", "1", "1", "0", "1", "1", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        hsymp(&["torus-sweep", "1", "1", "1", "0", "2", "1", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        hsymp(&["torus-sweep", "0", "0", "1", "0", "1", "2", "3"])
            .status
            .code(),
        Some(2)
    );
    let o = hsymp(&["torus-sweep", "-2", "3", "1", "-1", "0.5", "2", "3"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn trefoil_and_rho_diff() {
    let o = hsymp(&["trefoil", "--t", "2/5"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(
        out.contains("(m, n) = (7, -5)\n") && out.ends_with("cs = 3/10\n"),
        "{out}"
    );

    let o = hsymp(&["--json", "rho-diff", "--t1", "1/5", "--t2", "2/5"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rho_diff"], "3/5");

    let o = hsymp(&["trefoil", "--t", "1/2"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_json(&o)["error"], "OutOfArc");
}

#[test]
fn reduce_and_compose_through_the_cylinder() {
    let cyl = fixture("standard2_cylinder.json");
    let o = hsymp(&["reduce", &cyl, &fixture("standard2_xy.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let b = v["basis"].as_array().unwrap();
    let (x, y) = (
        b[0][0]["re"].as_f64().unwrap(),
        b[1][0]["re"].as_f64().unwrap(),
    );
    assert!((x - y).abs() < 1e-12 && x.abs() > 0.1);

    let o = hsymp(&["compose", &cyl, &cyl]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["source_dim"], 2);
    assert_eq!(v["target_dim"], 2);
}

#[test]
fn validate_reports() {
    let o = hsymp(&[
        "validate",
        &fixture("random6_space.json"),
        &fixture("random6_u.json"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("passed = true"));
    let o = hsymp(&["validate", &fixture("not_a_space.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_json(&o)["error"], "InvalidSpace");
}

#[test]
fn output_is_deterministic() {
    let args = [
        "m",
        &fixture("random6_space.json"),
        &fixture("random6_u.json"),
        &fixture("random6_w.json"),
    ]
    .map(String::from);
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    let first = hsymp(&args);
    let second = hsymp(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
}
