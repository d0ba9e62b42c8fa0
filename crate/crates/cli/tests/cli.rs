use std::path::Path;
use std::process::{Command, Output};

fn hardylab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hardylab")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

#[test]
fn spike_has_unit_mass() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "s.json", r#"{"family":"spike","params":{"t":16}}"#);
    let o = hardylab(&["eval", "--functional", "l1", "--function", &f]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).parse::<f64>().unwrap(), 1.0);
}

#[test]
fn llogl_of_spike_matches_closed_form() {
    // |f| = t on a set of measure 1/t: t (1 + ln t) / t
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "s.json",
        r#"{"family":"spike","params":{"t":64},"grid":{"dim":1,"box_radius":4,"cells_per_unit":64}}"#,
    );
    let o = hardylab(&["eval", "--functional", "llogl", "--function", &f]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: f64 = stdout(&o).parse().unwrap();
    assert!((v - (1.0 + 64f64.ln())).abs() < 1e-12, "{v}");
}

#[test]
fn misnamed_field_is_reported_by_name() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.json", r#"{"family":"spike","parms":{"t":16}}"#);
    let o = hardylab(&["eval", "--functional", "l1", "--function", &f]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("params"));
}

#[test]
fn bad_inputs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "s.json", r#"{"family":"spike","params":{"t":16}}"#);
    for args in [
        vec!["eval", "--functional", "nope", "--function", f.as_str()],
        vec!["eval", "--functional", "l1", "--function", "/nonexistent/f.json"],
        vec!["verify", "no-such-suite"],
    ] {
        assert_eq!(hardylab(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_is_deterministic_and_exits_by_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let o =
            hardylab(&["verify", "stein-inequality", "--count", "20", "--seed", "7", "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    assert!(text.starts_with("experiment,param,lhs,rhs,ratio,verdict"));
    assert_eq!(text.lines().count(), 1 + 20 * 20);
    // the quarter-octave oracle band is known to miss its tolerance
    let o = hardylab(&["verify", "hl-oracle", "--out", dir.path().join("h.csv").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn maximal_and_ttheta_write_grid_csv() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "s.json",
        r#"{"family":"cube_indicator","params":{"k":3},"grid":{"dim":1,"box_radius":8,"cells_per_unit":8}}"#,
    );
    let m = dir.path().join("m.csv");
    let o = hardylab(&["maximal", "--kind", "hl", "--function", &f, "--out", m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let t = dir.path().join("t.csv");
    let o = hardylab(&["ttheta", "--function", &f, "--out", t.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    // chi_{Q_3} - chi_{Q_0}, read back through the CLI
    let o = hardylab(&["eval", "--functional", "l1", "--function", t.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).parse::<f64>().unwrap(), 2.0);
}

#[test]
fn catalog_round_trips() {
    let o = hardylab(&["catalog"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["entries"].as_array().unwrap().len() >= 12);
}
