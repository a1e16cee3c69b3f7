use std::path::Path;
use std::process::{Command, Output};

fn cir(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cir"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn sweep_output_is_byte_identical_across_runs() {
    let args = [
        "sweep",
        "--ka-perp",
        "0.0707,7.07e-5",
        "--a",
        "0.01,0.1,0.5",
        "--ratio",
        "0.05:6:300",
        "--outputs",
        "t_tot,f_e,f_o,g1d,cir",
    ];
    let first = cir(&args);
    assert!(first.status.success(), "{}", stderr(&first));
    let second = cir(&args);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(stdout(&first).lines().count(), 2 + 6 * 300);
}

#[test]
fn sweep_csv_reads_back() {
    let o = cir(&[
        "sweep",
        "--ka-perp",
        "0.0707",
        "--a",
        "0.5",
        "--ratio",
        "0.05:6:200",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header = reader.headers().unwrap().clone();
    assert_eq!(
        header.iter().collect::<Vec<_>>(),
        [
            "ka_perp",
            "a_over_aperp",
            "aperp_over_a3d",
            "T_tot",
            "T_e",
            "T_o",
            "R",
            "flag"
        ]
    );
    let mut minima = 0;
    let t: Vec<f64> = reader
        .records()
        .map(|r| r.unwrap()[3].parse().unwrap())
        .collect();
    for w in t.windows(3) {
        if w[1] < w[0] && w[1] < w[2] {
            minima += 1;
        }
    }
    assert_eq!(minima, 2);
}

#[test]
fn json_format_has_rows() {
    let o = cir(&[
        "sweep",
        "--ka-perp",
        "0.5",
        "--a",
        "0.2",
        "--ratio",
        "-1:1:5",
        "--format",
        "json",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0]["aperp_over_a3d"], -1.0);
    assert_eq!(rows[0]["flag"], "ok");
}

#[test]
fn figure_manifest_reproduces_file() {
    let dir = tempfile::tempdir().unwrap();
    let again = tempfile::tempdir().unwrap();
    for id in ["2", "3a", "7b"] {
        let o = cir(&["figure", id, "--out-dir", dir.path().to_str().unwrap()]);
        assert!(o.status.success(), "{}", stderr(&o));
        let manifest = dir.path().join(format!("fig{id}.manifest.json"));
        let o = cir(&[
            "replay",
            manifest.to_str().unwrap(),
            "--out-dir",
            again.path().to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        let name = format!("fig{id}.csv");
        let original = std::fs::read(dir.path().join(&name)).unwrap();
        let replayed = std::fs::read(again.path().join(&name)).unwrap();
        assert_eq!(original, replayed, "figure {id}");
    }
}

fn manifest_value(path: &Path) -> serde_json::Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

#[test]
fn manifest_records_every_parameter_in_the_file() {
    let dir = tempfile::tempdir().unwrap();
    assert!(
        cir(&["figure", "2", "--out-dir", dir.path().to_str().unwrap()])
            .status
            .success()
    );
    let m = manifest_value(&dir.path().join("fig2.manifest.json"));
    assert_eq!(m["version"], env!("CARGO_PKG_VERSION"));
    let cfg = &m["spec"]["config"];
    let momenta: Vec<f64> = serde_json::from_value(cfg["ka_perp"].clone()).unwrap();
    let seps: Vec<f64> = serde_json::from_value(cfg["a_half_sep"].clone()).unwrap();
    assert!(cfg["tolerance"].as_f64().unwrap() > 0.0);
    let text = std::fs::read_to_string(dir.path().join("fig2.csv")).unwrap();
    for line in text.lines().skip(2) {
        let cols: Vec<&str> = line.split(',').collect();
        assert!(momenta.contains(&cols[0].parse().unwrap()));
        assert!(seps.contains(&cols[1].parse().unwrap()));
    }
}

#[test]
fn flags_override_config_file_with_warning() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.json");
    std::fs::write(
        &path,
        r#"{"ka_perp": 0.1, "a_half_sep": [0.5], "ratio_range": {"lo": 0.1, "hi": 5.0, "count": 3}}"#,
    )
    .unwrap();
    let o = cir(&[
        "sweep",
        "--config",
        path.to_str().unwrap(),
        "--ka-perp",
        "0.0707",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("--ka-perp overrides"), "{}", stderr(&o));
    let body = stdout(&o);
    let rows: Vec<&str> = body.lines().skip(2).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.starts_with("0.0707,0.5,")));
}

#[test]
fn config_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{\n  \"ka_perp\": 0.1,\n  \"a_half_sep\": ,\n}").unwrap();
    let o = cir(&["sweep", "--config", broken.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("broken.json:3:"), "{}", stderr(&o));

    let o = cir(&[
        "sweep",
        "--ka-perp",
        "0.1",
        "--a",
        "0.5",
        "--ratio",
        "0.1:5:1",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("ratio_range.count"));

    let o = cir(&[
        "sweep",
        "--ka-perp",
        "2.5",
        "--a",
        "0.5",
        "--ratio",
        "0.1:5:3",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("ka_perp[0]"));

    let o = cir(&["figure", "8"]);
    assert_eq!(o.status.code(), Some(1));

    let o = cir(&["sweep", "--ratio", "nonsense"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn resonant_point_reports_no_coupling() {
    let o = cir(&[
        "amplitudes",
        "--ka-perp",
        "0.0707",
        "--a",
        "0.5",
        "--ratio",
        "3.041182808735422",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["g_plus"].is_null());
    assert!(v["T_tot"].as_f64().unwrap() < 1e-20);
}

#[test]
fn verify_passes() {
    let o = cir(&["verify", "--samples", "500"]);
    assert!(o.status.success(), "{}{}", stdout(&o), stderr(&o));
    assert_eq!(
        stdout(&o).lines().filter(|l| l.starts_with("PASS")).count(),
        6
    );
}

#[test]
fn cir_reports_positions() {
    let o = cir(&["cir", "--ka-perp", "0.0707", "--a", "0.5"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["cir_total_plus"].as_f64().unwrap() - 3.04).abs() < 0.02);
    assert!((v["cir_total_minus"].as_f64().unwrap() - 0.42).abs() < 0.02);
}
