use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn monopole(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_monopole"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("MONOPOLE_THREADS", t),
        None => cmd.env_remove("MONOPOLE_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Header lines turned back into a config file.
fn header_as_config(csv: &str) -> String {
    csv.lines()
        .filter_map(|l| l.strip_prefix("# "))
        .filter(|l| l.contains(" = "))
        .map(|l| format!("{l}\n"))
        .collect()
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(monopole(&["--help"], None).status.code(), Some(0));
    assert_eq!(monopole(&["--version"], None).status.code(), Some(0));
    assert_eq!(
        monopole(&["spectrum", "--help"], None).status.code(),
        Some(0)
    );
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["spectrum", "--lambda", "-5"][..],
        &["spectrum", "--method", "magic"],
        &["spectrum", "--bogus", "1"],
        &["potential", "--rho-min", "3", "--rho-max", "2"],
        &[],
    ] {
        let out = monopole(args, None);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn numerical_errors_exit_two() {
    let out = monopole(
        &[
            "lifetime-fd",
            "--lambda",
            "5",
            "--m",
            "-3",
            "--n-points",
            "500",
            "--b",
            "20",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("numerical failure"));
}

#[test]
fn bad_thread_count_is_a_usage_error() {
    let out = monopole(&["potential", "--points", "10"], Some("zero"));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn header_records_the_resolved_configuration() {
    let out = monopole(&["spectrum", "--method", "wkb"], None);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# monopole "));
    assert_eq!(lines.next().unwrap(), "# command = spectrum");
    for expect in [
        "# lambda = 100",
        "# m = 1",
        "# method = wkb",
        "#: levels = 6",
    ] {
        assert!(text.lines().any(|l| l == expect), "missing {expect}");
    }
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# comment\nlambda = 50\nm = 2\npoints = 5\n").unwrap();
    let out = monopole(
        &["potential", "-c", cfg.to_str().unwrap(), "--m", "3"],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("# lambda = 50\n"));
    assert!(text.contains("# m = 3\n"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 6);
}

#[test]
fn config_file_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    for body in [
        "nonsense = 1\n",
        "lambda = 1\nlambda = 2\n",
        "command = orbit\n",
        "lambda\n",
    ] {
        fs::write(&cfg, body).unwrap();
        let out = monopole(&["potential", "--config", cfg.to_str().unwrap()], None);
        assert_eq!(out.status.code(), Some(1), "{body:?}");
    }
    let missing = dir.path().join("absent.cfg");
    let out = monopole(&["potential", "--config", missing.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn provenance_header_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &[
            "spectrum",
            "--lambda",
            "40",
            "--m",
            "-1",
            "--n-points",
            "1500",
        ][..],
        &[
            "phase-scan",
            "--lambda",
            "20",
            "--eps-min",
            "50",
            "--eps-max",
            "60",
            "--points",
            "4",
            "--z-max",
            "200",
        ],
        &["orbit", "--epsilon", "500", "--samples", "50"],
    ] {
        let first = stdout(&monopole(args, None));
        let cfg = dir.path().join("replay.cfg");
        fs::write(&cfg, header_as_config(&first)).unwrap();
        let replay = monopole(&[args[0], "--config", cfg.to_str().unwrap()], None);
        assert_eq!(replay.status.code(), Some(0));
        assert_eq!(stdout(&replay), first, "{args:?}");
    }
}

#[test]
fn output_file_and_json_mirror() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("levels.csv");
    let out = monopole(
        &[
            "spectrum",
            "--method",
            "wkb",
            "-o",
            csv.to_str().unwrap(),
            "--json",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(&csv).unwrap();
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("levels.csv.json")).unwrap())
            .unwrap();
    assert_eq!(json["command"], "spectrum");
    assert_eq!(json["parameters"]["lambda"], 100.0);
    assert_eq!(json["results"]["levels"], 6.0);
    let rows = json["rows"].as_array().unwrap();
    assert_eq!(
        rows.len(),
        text.lines().filter(|l| !l.starts_with('#')).count() - 1
    );
    let first_csv: f64 = text
        .lines()
        .find(|l| l.starts_with("0,"))
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(rows[0][1].as_f64().unwrap(), first_csv);
}

#[test]
fn json_to_stdout() {
    let out = monopole(&["potential", "--points", "3", "--json"], None);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["columns"].as_array().unwrap().len(), 3);
    assert_eq!(json["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn unwritable_output_is_an_io_error() {
    let out = monopole(
        &["potential", "--points", "3", "-o", "/nonexistent-dir/x.csv"],
        None,
    );
    assert_eq!(out.status.code(), Some(1));
}

fn deterministic(args: &[&str], dir: &Path) {
    let path = |t: &str| dir.join(format!("{}-{t}.csv", args[0]));
    for t in ["1", "8"] {
        let p = path(t);
        let mut full = args.to_vec();
        full.extend(["-o", p.to_str().unwrap()]);
        assert_eq!(monopole(&full, Some(t)).status.code(), Some(0));
    }
    assert_eq!(
        fs::read(path("1")).unwrap(),
        fs::read(path("8")).unwrap(),
        "{args:?}"
    );
}

#[test]
fn output_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    deterministic(
        &["count", "--lambda", "20", "--n-points", "1500"],
        dir.path(),
    );
    deterministic(
        &[
            "phase-scan",
            "--lambda",
            "20",
            "--eps-min",
            "20",
            "--eps-max",
            "200",
            "--points",
            "16",
            "--z-max",
            "300",
        ],
        dir.path(),
    );
}
