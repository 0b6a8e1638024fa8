use std::fs;
use std::path::Path;
use std::process::{Command as Process, Output};

use cablewave_cli::{parse_config, parse_spec, CliError, Command};

fn cablewave(args: &[&str]) -> Output {
    Process::new(env!("CARGO_BIN_EXE_cablewave"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn out_arg(dir: &Path) -> String {
    dir.to_str().unwrap().to_string()
}

fn read(path: impl AsRef<Path>) -> String {
    fs::read_to_string(path).unwrap()
}

/// Parses a delimited table, checking that every row has the header's width.
fn table(path: impl AsRef<Path>) -> (Vec<String>, Vec<Vec<String>>) {
    let text = read(path);
    let mut lines = text.lines();
    let header: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
    let rows: Vec<Vec<String>> = lines
        .map(|l| l.split(',').map(String::from).collect::<Vec<_>>())
        .collect();
    assert!(rows.iter().all(|r| r.len() == header.len()));
    (header, rows)
}

#[test]
fn analytic_profile_with_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let o = cablewave(&[
        "analytic",
        "--k1",
        "1",
        "--k2",
        "5",
        "--out",
        &out_arg(dir.path()),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = table(dir.path().join("profile.csv"));
    assert_eq!(header, ["xi", "w"]);
    assert_eq!(rows.len(), 1001);
    let xi: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert_eq!((xi[0], xi[1000]), (0.0, 1.0));
    // at xi = alpha/2 the compression branch peaks at sqrt(k2/k1)
    let w: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    let min = w.iter().copied().fold(f64::INFINITY, f64::min);
    assert!((min + 5f64.sqrt()).abs() < 1e-4);

    let meta = read(dir.path().join("metadata.jsonl"));
    let spec: serde_json::Value = serde_json::from_str(meta.lines().next().unwrap()).unwrap();
    assert_eq!(spec["record"], "spec");
    assert_eq!(spec["command"], "analytic");
    assert_eq!(spec["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(spec["parameters"]["n"], 1);
    assert_eq!(spec["parameters"]["L"], 1.0);
    assert_eq!(spec["parameters"]["v"], 1.0);
    let result: serde_json::Value = serde_json::from_str(meta.lines().nth(1).unwrap()).unwrap();
    let c2 = result["values"]["c_squared"].as_f64().unwrap();
    assert!((c2 - 1.048376560463754).abs() < 1e-14);
}

#[test]
fn usage_errors_exit_with_two() {
    let o = cablewave(&["analytic", "--k1", "-1", "--k2", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("invalid value: k1 must be ≥ 0"));

    let o = cablewave(&["floquet", "--k1", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing required key: k2"));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.conf");
    fs::write(&cfg, "command = floquet\nk1 = 1\nk2 = 2\nstiffness = 3\n").unwrap();
    let o = cablewave(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown key: stiffness"));

    assert_eq!(cablewave(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(
        cablewave(&["verify", "--scenario", "nope"]).status.code(),
        Some(2)
    );
}

#[test]
fn loaded_wave_with_wrong_load_sign_is_a_usage_error() {
    let o = cablewave(&[
        "simulate-loaded",
        "--k1",
        "1",
        "--k2",
        "2",
        "--p",
        "0.01",
        "--alpha",
        "0.7",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("inadmissible load sign"));
}

#[test]
fn figure_config_is_echoed() {
    let text = "# four snapshots of the (1, 5) wave\n\
                command = simulate\n\
                k1 = 1\nk2 = 5\nL = 1\namplitude = 0.01\n\
                snapshot-times = 20, 40, 60, 80\n";
    let spec = parse_spec(None, &parse_config(text).unwrap(), &[]).unwrap();
    assert_eq!(spec.command, Command::Simulate);
    assert_eq!(spec.number("k1"), Some(1.0));
    assert_eq!(spec.number("k2"), Some(5.0));
    assert_eq!(spec.number("amplitude"), Some(0.01));
    assert_eq!(
        spec.list("snapshot-times"),
        Some(&[20.0, 40.0, 60.0, 80.0][..])
    );
}

#[test]
fn specs_round_trip_through_config_text() {
    let cases: [(Command, &[(&str, &str)]); 7] = [
        (
            Command::Analytic,
            &[
                ("k1", "0.3"),
                ("k2", "7"),
                ("n", "3"),
                ("amplitude", "-0.2"),
            ],
        ),
        (
            Command::Dispersion,
            &[("k1", "1"), ("k2", "2"), ("alpha", "0.3"), ("p", "0.01")],
        ),
        (
            Command::Simulate,
            &[
                ("k1", "1"),
                ("k2", "5"),
                ("dx", "0.01"),
                ("probes", "1.5,2.25"),
            ],
        ),
        (
            Command::SimulateLoaded,
            &[
                ("k1", "1"),
                ("k2", "2"),
                ("p", "-0.01"),
                ("alpha", "0.7029437251522859"),
            ],
        ),
        (
            Command::Stability,
            &[
                ("k1", "1"),
                ("k2", "5"),
                ("perturbation", "initial"),
                ("skip", "12.5"),
            ],
        ),
        (Command::Floquet, &[("k1", "1e-3"), ("k2", "100")]),
        (
            Command::ExtremaSweep,
            &[
                ("k1", "1"),
                ("k2", "2"),
                ("p", "0.01"),
                ("alphas", "0.1,0.2"),
            ],
        ),
    ];
    for (command, items) in cases {
        let flags: Vec<(String, String)> = items
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        let spec = parse_spec(Some(command), &[], &flags).unwrap();
        let again = parse_spec(None, &parse_config(&spec.to_config()).unwrap(), &[]).unwrap();
        assert_eq!(spec, again, "{command}");
    }
}

#[test]
fn identical_specs_give_identical_bytes() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for dir in [&a, &b] {
        let o = cablewave(&[
            "extrema-sweep",
            "--k1",
            "1",
            "--k2",
            "2",
            "--p",
            "0.01",
            "--out",
            &out_arg(dir.path()),
        ]);
        assert!(o.status.success());
    }
    for file in ["extrema.csv", "metadata.jsonl"] {
        assert_eq!(
            fs::read(a.path().join(file)).unwrap(),
            fs::read(b.path().join(file)).unwrap()
        );
    }
}

#[test]
fn emitted_spec_reruns_to_the_same_output() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let o = cablewave(&[
        "floquet",
        "--k1",
        "0.7",
        "--k2",
        "3",
        "--n",
        "2",
        "--out",
        &out_arg(a.path()),
    ]);
    assert!(o.status.success());
    let conf = a.path().join("spec.conf");
    let o = cablewave(&[
        "run",
        "--config",
        conf.to_str().unwrap(),
        "--out",
        &out_arg(b.path()),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for file in ["monodromy.csv", "multipliers.csv", "metadata.jsonl"] {
        assert_eq!(
            read(a.path().join(file)),
            read(b.path().join(file)),
            "{file}"
        );
    }
}

#[test]
fn extrema_sweep_flags_the_critical_neighbourhood() {
    let dir = tempfile::tempdir().unwrap();
    let o = cablewave(&[
        "extrema-sweep",
        "--k1",
        "1",
        "--k2",
        "2",
        "--p",
        "0.01",
        "--out",
        &out_arg(dir.path()),
    ]);
    assert!(o.status.success());
    let (header, rows) = table(dir.path().join("extrema.csv"));
    assert_eq!(header[0], "alpha");
    assert_eq!(rows.len(), 19);
    let flagged: Vec<String> = rows
        .iter()
        .filter(|r| r[6] == "1")
        .map(|r| r[0].clone())
        .collect();
    let flagged: Vec<f64> = flagged.iter().map(|a| a.parse().unwrap()).collect();
    assert_eq!(flagged, [0.55, 0.6]);
    // the load flips sign across alpha_cr
    let p: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(p[..11].iter().all(|&x| x > 0.0) && p[11..].iter().all(|&x| x < 0.0));
}

#[test]
fn tsv_output() {
    let dir = tempfile::tempdir().unwrap();
    let o = cablewave(&[
        "floquet",
        "--k1",
        "1",
        "--k2",
        "5",
        "--format",
        "tsv",
        "--out",
        &out_arg(dir.path()),
    ]);
    assert!(o.status.success());
    assert!(read(dir.path().join("multipliers.tsv")).starts_with("index\tre\tim\tmodulus\n"));
}

#[test]
fn short_simulation_writes_all_series() {
    let dir = tempfile::tempdir().unwrap();
    let o = cablewave(&[
        "simulate",
        "--k1",
        "1",
        "--k2",
        "5",
        "--t-end",
        "4",
        "--dx",
        "0.01",
        "--probes",
        "1,2",
        "--snapshot-times",
        "2,4",
        "--out",
        &out_arg(dir.path()),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (h, rows) = table(dir.path().join("snapshots.csv"));
    assert_eq!(h, ["time", "x", "w"]);
    assert!(!rows.is_empty());
    let (h, rows) = table(dir.path().join("probes.csv"));
    assert_eq!(h, ["x", "time", "w", "wdot"]);
    let xs: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    assert!(xs.contains(&"1.000000000000000e0") && xs.contains(&"2.000000000000000e0"));
    let (h, _) = table(dir.path().join("energy.csv"));
    assert_eq!(h[3], "total");
}

#[test]
fn stability_writes_return_map() {
    let dir = tempfile::tempdir().unwrap();
    let o = cablewave(&[
        "stability",
        "--k1",
        "1",
        "--k2",
        "1",
        "--dx",
        "0.02",
        "--t-end",
        "45",
        "--probes",
        "2",
        "--skip",
        "8",
        "--out",
        &out_arg(dir.path()),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (h, rows) = table(dir.path().join("return_map.csv"));
    assert_eq!(h, ["index", "time", "f", "fdot"]);
    assert!(rows.len() >= 30);
}

#[test]
fn verify_reports_each_scenario() {
    let o = cablewave(&[
        "verify",
        "--scenario",
        "alpha-critical",
        "--scenario",
        "floquet",
    ]);
    assert!(o.status.success());
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("[PASS] alpha-critical"));
    assert!(text.contains("[PASS] floquet"));
    assert_eq!(
        CliError::Verification {
            failed: 1,
            total: 2
        }
        .exit_code(),
        1
    );
}
