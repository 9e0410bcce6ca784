use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn spectile(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spectile"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn utc_verify_example() {
    let out = spectile(&["utc-verify", "--p", "2", "--gamma", "0,1", "--n-max", "5", "--m-max", "8", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["result"]["certificate"]["residues"], serde_json::json!([0]));
    assert_eq!(v["result"]["certificate"]["period"], 2);
}

#[test]
fn check_spectrum_example() {
    let out = spectile(&["check-spectrum", "--gamma", "0,1/2", "--b", "0,1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["verdict"], "true");
    let out = spectile(&["check-spectrum", "--gamma", "0,1/2", "--b", "0,2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_omega_example() {
    let out = spectile(&["verify-omega", "--omega", "[0,3/4);[7/4,2)", "--t-residues", "0", "--t-period", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let out = spectile(&["verify-omega", "--omega", "[0,1)", "--t-residues", "0", "--t-period", "2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn inconclusive_searches_exit_2() {
    let out = spectile(&["utc-verify", "--p", "2", "--gamma", "0,1", "--n-max", "5", "--m-max", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = spectile(&["find-complement", "--family", "0,1;0,2", "--m-max", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_1_and_name_the_field() {
    let cases: &[(&[&str], &str)] = &[
        (&["check-spectrum", "--gamma", "0,1/x", "--b", "0,1"], "gamma"),
        (&["verify-omega", "--omega", "[0,2);[1,3)", "--t-residues", "0", "--t-period", "1"], "overlap"),
        (&["utc-verify", "--p", "2", "--gamma", "0,1", "--n-max", "5", "--m-max", "0"], "m_max"),
        (&["roundtrip", "--p", "2", "--gamma", "0,1", "--family", "0,1;0,2", "--breakpoints", "0,1/4,1/2", "--m-max", "4"], "#1"),
        (&["build-omega", "--p", "2", "--family", "0,1", "--breakpoints", "0,1"], "breakpoint"),
        (&["find-complement", "--a", "0,1,1", "--m", "4"], "a"),
    ];
    for (args, needle) in cases {
        let out = spectile(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(needle), "{args:?}: {err}");
    }
    assert_eq!(spectile(&["no-such-command"]).status.code(), Some(1));
}

#[test]
fn certificates_are_deterministic_and_recheck() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let args = |p: &Path| {
        vec![
            "roundtrip".to_string(), "--p".into(), "2".into(), "--gamma".into(), "0,1".into(),
            "--family".into(), "0,1;0,3".into(), "--breakpoints".into(), "0,1/4,1/2".into(),
            "--m-max".into(), "4".into(), "--output".into(), p.display().to_string(),
        ]
    };
    for path in [&a, &b] {
        let out = Command::new(env!("CARGO_BIN_EXE_spectile")).args(args(path)).output().unwrap();
        assert_eq!(out.status.code(), Some(0));
    }
    let strip = |p: &Path| {
        let mut v: Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
        v.as_object_mut().unwrap().remove("timing");
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(strip(&a), strip(&b));

    // parse -> emit is byte-identical
    let text = std::fs::read_to_string(&a).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(format!("{}\n", serde_json::to_string(&v).unwrap()), text);

    let out = spectile(&["recheck", a.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));

    let forged = text.replace("\"omega_tiles\":true", "\"omega_tiles\":false");
    std::fs::write(&b, forged).unwrap();
    assert_eq!(spectile(&["recheck", b.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn job_files_run() {
    let dir = tempfile::tempdir().unwrap();
    let job = dir.path().join("job.json");
    let cert = dir.path().join("cert.json");
    std::fs::write(
        &job,
        format!(
            r#"{{"command":"utc-verify","p":4,"gamma":["0","1","2","3"],"n_max":7,"m_max":8,"output":{:?}}}"#,
            cert.display().to_string()
        ),
    )
    .unwrap();
    let out = spectile(&["job", job.to_str().unwrap(), "--jobs", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(v["result"]["family_size"], 8);
    assert_eq!(v["result"]["certificate"]["period"], 4);
    assert_eq!(spectile(&["recheck", cert.to_str().unwrap()]).status.code(), Some(0));

    std::fs::write(&job, r#"{"command":"utc-verify","p":"two"}"#).unwrap();
    assert_eq!(spectile(&["job", job.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn every_command_emits_a_rechecking_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let runs: &[&[&str]] = &[
        &["check-spectrum", "--gamma", "0,1/4,1/2,3/4", "--b", "0,1,2,3"],
        &["enum-spectra", "--p", "4", "--gamma", "0,1/2,1,3/2", "--n-max", "12", "--oracle"],
        &["find-complement", "--a", "0,2", "--m", "4"],
        &["find-complement", "--family", "0,2,4,6;0,2,4,14", "--m-max", "16"],
        &["utc-verify", "--p", "2", "--gamma", "0,1/3", "--n-max", "6", "--m-max", "6"],
        &["build-omega", "--p", "2", "--family", "0,1;0,3", "--breakpoints", "0,1/4,1/2"],
        &["verify-omega", "--omega", "[0,1/2);[3/2,2)", "--p", "2", "--t-residues", "0", "--t-period", "2"],
        &["gram-check", "--omega", "[0,3/4);[7/4,2)", "--gamma", "0,1", "--p", "2"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let path = dir.path().join(format!("c{i}.json"));
        let mut full: Vec<&str> = args.to_vec();
        let p = path.to_str().unwrap();
        full.extend(["--output", p]);
        let out = spectile(&full);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let re = spectile(&["recheck", p]);
        assert_eq!(re.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&re.stdout));
    }
}
