use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use braidstir::report::{RunReport, CURVE_CSV, L1_CSV, SUMMARY_JSON, SUP_CSV};
use braidstir::TnType;

fn braidstir(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_braidstir"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn protocol(dir: &Path, name: &str, json: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, json).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn braid_subcommands() {
    let cases: [(&[&str], &str); 5] = [
        (&["braid", "inverse", "1 -2"], "2 -1"),
        (&["braid", "reduce", "1 -1 2"], "2"),
        (&["braid", "perm", "1", "--n", "3"], "2 1 3"),
        (&["braid", "compose", "1", "-2 3"], "1 -2 3"),
        (&["braid", "reduce", "1 -1"], ""),
    ];
    for (args, expect) in cases {
        let o = braidstir(args);
        assert!(o.status.success(), "{args:?}");
        assert_eq!(stdout(&o).trim_end(), expect, "{args:?}");
    }
}

#[test]
fn braid_parse_error_exits_2() {
    let o = braidstir(&["braid", "inverse", "1 x"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("token 1"));
    let o = braidstir(&["braid", "perm", "3", "--n", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn classify_examples() {
    let dir = tempfile::tempdir().unwrap();
    let pa = protocol(dir.path(), "pa.json", r#"{"punctures": 3, "braid": [1, -2]}"#);
    let o = braidstir(&["classify", &pa]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("tag: PseudoAnosovCandidate"));
    assert!(text.contains("lambda: 2.618033988"), "{text}");

    let fo = protocol(dir.path(), "fo.json", r#"{"punctures": 3, "braid": [1, 2]}"#);
    let o = braidstir(&["classify", &fo]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("tag: FiniteOrder"));

    let id = protocol(dir.path(), "id.json", r#"{"punctures": 3, "braid": []}"#);
    let out = dir.path().join("id_out");
    let o = braidstir(&["classify", &id, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let report = RunReport::load(&out.join(SUMMARY_JSON)).unwrap();
    assert_eq!(report.classification.tag, TnType::FiniteOrder);
    assert_eq!(report.classification.recurrence_period, Some(1));
}

#[test]
fn inconclusive_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let pa = protocol(dir.path(), "pa.json", r#"{"punctures": 3, "braid": [1, -2]}"#);
    let o = braidstir(&["classify", &pa, "--max-iter", "10"]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
    assert!(stdout(&o).contains("tag: Inconclusive"));
}

#[test]
fn malformed_protocols_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let typo = protocol(dir.path(), "typo.json", "{\"punctures\": 3,\n\"braid\": [1],\n\"rotr\": {\"r0\": 0.6}}");
    let o = braidstir(&["classify", &typo]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr).into_owned();
    assert!(err.contains("rotr") && err.contains("line 3"), "{err}");

    let radii = protocol(
        dir.path(),
        "radii.json",
        r#"{"punctures": 3, "braid": [1], "rotor": {"r0": 0.6, "r1": 1.6}}"#,
    );
    assert_eq!(braidstir(&["simulate", &radii]).status.code(), Some(2));

    let grid = protocol(dir.path(), "grid.json", r#"{"punctures": 3, "braid": [1]}"#);
    assert_eq!(braidstir(&["scalar", &grid, "--grid", "8"]).status.code(), Some(2));

    let missing = dir.path().join("nope.json");
    assert_eq!(braidstir(&["classify", missing.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn simulate_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let pa = protocol(dir.path(), "pa.json", r#"{"punctures": 3, "braid": [1, -2], "grid_n": 128}"#);
    let out = dir.path().join("out");
    let o = braidstir(&["simulate", &pa, "--out", out.to_str().unwrap(), "--periods", "6"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for name in [CURVE_CSV, SUP_CSV, L1_CSV] {
        let text = fs::read_to_string(out.join(name)).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("period,value"));
        assert_eq!(lines.count(), 7, "{name}");
    }
    let report = RunReport::load(&out.join(SUMMARY_JSON)).unwrap();
    assert_eq!(report.protocol.periods, 6);
    assert!(report.lowerbound.unwrap().lowerbound_satisfied);
    assert!(report.metric.unwrap().fit.is_some());
}

#[test]
fn identity_and_outside_curve() {
    let dir = tempfile::tempdir().unwrap();
    let id = protocol(dir.path(), "id.json", r#"{"punctures": 3, "braid": [], "periods": 3, "grid_n": 64}"#);
    let out = dir.path().join("id");
    assert!(braidstir(&["simulate", &id, "--out", out.to_str().unwrap()]).status.success());
    let lb = RunReport::load(&out.join(SUMMARY_JSON)).unwrap().lowerbound.unwrap();
    assert_eq!(lb.metric_rate, 0.0);
    assert!(lb.lowerbound_satisfied);

    let outside = protocol(
        dir.path(),
        "outside.json",
        r#"{"punctures": 3, "braid": [1, -2], "periods": 4, "grid_n": 64,
            "seed_curve": {"center": [3.0, 0.0], "radius": 0.1}}"#,
    );
    let out = dir.path().join("outside");
    assert!(braidstir(&["simulate", &outside, "--out", out.to_str().unwrap()]).status.success());
    let csv = fs::read_to_string(out.join(CURVE_CSV)).unwrap();
    let values: Vec<&str> = csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(values.len(), 5);
    assert!(values.iter().all(|v| *v == values[0]));
}

#[test]
fn simulate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let pa = protocol(
        dir.path(),
        "pa.json",
        r#"{"punctures": 4, "braid": [1, -2, 3], "periods": 5, "grid_n": 128, "seed": 11}"#,
    );
    let runs: Vec<_> = ["a", "b"]
        .iter()
        .map(|name| {
            let out = dir.path().join(name);
            assert!(braidstir(&["simulate", &pa, "--out", out.to_str().unwrap()]).status.success());
            out
        })
        .collect();
    for name in [CURVE_CSV, SUP_CSV, L1_CSV] {
        assert_eq!(fs::read(runs[0].join(name)).unwrap(), fs::read(runs[1].join(name)).unwrap());
    }
}
