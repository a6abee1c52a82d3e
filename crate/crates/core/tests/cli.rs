use magnon_efimov::cli::{Cell, Format, Meta, Table, emit_table};
use serde_json::{Map, Value};
use std::path::Path;
use std::process::{Command, Output};

fn magnon(args: &[&str], out_dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_magnon"))
        .args(args)
        .env("MAGNON_OUT_DIR", out_dir)
        .output()
        .expect("binary runs")
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<String> {
    let i = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[i].clone()).collect()
}

#[test]
fn efimov_spectrum_spacing() {
    let dir = tempfile::tempdir().unwrap();
    let out = magnon(&["efimov-spectrum", "--alpha", "2.2", "--states", "3"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("efimov-spectrum.csv")).unwrap();
    assert!(!text.contains('\r'));
    let (h, rows) = csv_rows(&text);
    assert_eq!(h, ["n", "ln_abs_E", "phi_n", "diff_n"]);
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0][3], "");
    let d: f64 = rows[2][3].parse().unwrap();
    assert!((d - 1.913).abs() < 0.02, "{d}");
}

#[test]
fn semisuper_spectrum_first_level() {
    let dir = tempfile::tempdir().unwrap();
    let out = magnon(&["semisuper-spectrum", "--states", "4", "--format", "json"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("semisuper-spectrum.json")).unwrap())
            .unwrap();
    let phi1 = v["rows"][0]["phi_n"].as_f64().unwrap();
    assert!((phi1 - 1.166).abs() < 0.01, "{phi1}");
    assert_eq!(v["meta"]["channel"], "two-channel");
    assert_eq!(v["meta"]["params"]["states"], 4);
}

#[test]
fn s0_sweep_leaves_gaps_past_the_edge() {
    let dir = tempfile::tempdir().unwrap();
    let out = magnon(&["s0-sweep"], dir.path());
    assert!(out.status.success());
    let (h, rows) = csv_rows(&std::fs::read_to_string(dir.path().join("s0-sweep.csv")).unwrap());
    assert_eq!(rows.len(), 91);
    let alphas: Vec<f64> = column(&h, &rows, "alpha").iter().map(|a| a.parse().unwrap()).collect();
    let s0 = column(&h, &rows, "s0");
    for (a, s) in alphas.iter().zip(&s0) {
        assert_eq!(s.is_empty(), *a > 2.885, "alpha {a}");
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(magnon(&["no-such-command"], dir.path()).status.code(), Some(2));
    assert_eq!(magnon(&["efimov-spectrum", "--alpha", "3.5"], dir.path()).status.code(), Some(2));
    assert_eq!(magnon(&["ed-resonance", "--n-sites", "2"], dir.path()).status.code(), Some(2));
    assert_eq!(magnon(&["--help"], dir.path()).status.code(), Some(0));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0, "validation failure wrote a file");

    let missing = dir.path().join("missing").join("x.csv");
    let out = magnon(&["s0-sweep", "--out", missing.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_is_deterministic_apart_from_timestamp() {
    let dir = tempfile::tempdir().unwrap();
    let strip = |p: &Path| -> String {
        std::fs::read_to_string(p)
            .unwrap()
            .lines()
            .filter(|l| !l.starts_with("# timestamp"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = ["dispersion", "--points", "12", "--out"];
    for p in [&a, &b] {
        let mut v = args.to_vec();
        v.push(p.to_str().unwrap());
        assert!(magnon(&v, dir.path()).status.success());
    }
    assert_eq!(strip(&a).replace("a.csv", "b.csv"), strip(&b));
}

#[test]
fn config_file_and_explicit_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "from = 2.1\nto = 2.3\npoints = 5\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let out = magnon(&["s0-sweep", "--config", cfg, "--points", "3", "--format", "json"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("s0-sweep.json")).unwrap()).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert!((rows[0]["alpha"].as_f64().unwrap() - 2.1).abs() < 1e-12);
    assert!((rows[2]["alpha"].as_f64().unwrap() - 2.3).abs() < 1e-12);
}

#[test]
fn ed_resonance_small_ring() {
    let dir = tempfile::tempdir().unwrap();
    let out = magnon(
        &["ed-resonance", "--n-sites", "12", "--jz-max", "30", "--jz-points", "7"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (h, rows) = csv_rows(&std::fs::read_to_string(dir.path().join("ed-resonance.csv")).unwrap());
    let e: Vec<f64> = column(&h, &rows, "E_bind").iter().map(|x| x.parse().unwrap()).collect();
    assert_eq!(e[0], 0.0);
    assert!(e.windows(2).all(|w| w[1] >= w[0]));
    assert!(*e.last().unwrap() > 0.0);
}

#[test]
fn empty_table_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let table = Table { columns: vec!["a", "b"], rows: vec![] };
    let mut fields = Map::new();
    fields.insert("tool".into(), Value::from("magnon"));
    let meta = Meta { fields, timestamp: "2026-01-01T00:00:00Z".into() };
    let p = dir.path().join("empty.csv");
    emit_table(&table, &meta, Format::Csv, &p).unwrap();
    let text = std::fs::read_to_string(&p).unwrap();
    assert_eq!(text, "# timestamp: 2026-01-01T00:00:00Z\n# tool: magnon\na,b\n");

    let bad = Table { columns: vec!["a"], rows: vec![vec![Cell::Int(1), Cell::Empty]] };
    assert!(emit_table(&bad, &meta, Format::Json, &dir.path().join("bad.json")).is_err());
}
