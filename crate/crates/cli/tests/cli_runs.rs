use std::path::Path;
use std::process::{Command, Output};

fn permlab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_permlab"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn read(path: impl AsRef<Path>) -> String {
    std::fs::read_to_string(path).unwrap()
}

fn write_rademacher(dir: &Path) {
    std::fs::write(dir.join("rad.csv"), "position,mass\n-1,0.5\n1,0.5\n").unwrap();
}

#[test]
fn gen_seq_then_dio_count() {
    let tmp = tempfile::tempdir().unwrap();
    let out = permlab(tmp.path(), &["gen-seq", "--kind", "hadamard", "--q", "2", "--n1", "1", "--N", "5"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let values: Vec<String> = read(tmp.path().join("seq.csv")).lines().map(str::to_owned).collect();
    assert_eq!(values, ["1", "2", "4", "8", "16"]);

    let out = permlab(tmp.path(), &["dio-count", "--seq", "seq.csv", "--a", "1", "--b", "-2", "--c", "0", "--N-list", "5"]);
    assert!(out.status.success());
    assert_eq!(read(tmp.path().join("counts.csv")).lines().nth(1), Some("5,4,0.8"));
}

#[test]
fn rerun_is_byte_identical_and_manifest_echoes_config() {
    let tmp = tempfile::tempdir().unwrap();
    permlab(tmp.path(), &["gen-seq", "--kind", "hadamard", "--q", "2", "--N", "64"]);
    let args = ["--seed", "7", "--out-dir", "a", "clt", "--seq", "seq.csv", "--N", "64", "--M", "2000"];
    assert!(permlab(tmp.path(), &args).status.success());
    let first = read(tmp.path().join("a/dist.csv"));
    assert!(permlab(tmp.path(), &args).status.success());
    assert_eq!(first, read(tmp.path().join("a/dist.csv")));

    let manifest: serde_json::Value = serde_json::from_str(&read(tmp.path().join("a/manifest.json"))).unwrap();
    assert_eq!(manifest["config"]["seed"], 7);
    assert_eq!(manifest["config"]["experiment"]["command"], "clt");
    assert_eq!(manifest["config"]["experiment"]["params"]["M"], 2000);
    assert!(manifest["wall_time_seconds"].as_f64().unwrap() >= 0.0);

    let out = permlab(tmp.path(), &["--out-dir", "b", "replay", "--manifest", "a/manifest.json"]);
    assert!(out.status.success());
    assert_eq!(first, read(tmp.path().join("b/dist.csv")));
}

#[test]
fn permute_clt_alias_changes_the_sample() {
    let tmp = tempfile::tempdir().unwrap();
    permlab(tmp.path(), &["gen-seq", "--kind", "hadamard", "--q", "2", "--N", "128"]);
    let base = ["--out-dir", "p", "permute-clt", "--seq", "seq.csv", "--N", "64", "--M", "500", "--perm", "reverse"];
    assert!(permlab(tmp.path(), &base).status.success());
    assert!(permlab(tmp.path(), &["--out-dir", "i", "clt", "--seq", "seq.csv", "--N", "64", "--M", "500"]).status.success());
    assert_ne!(read(tmp.path().join("p/dist.csv")), read(tmp.path().join("i/dist.csv")));
    let summary: serde_json::Value = serde_json::from_str(&read(tmp.path().join("p/dist.summary.json"))).unwrap();
    assert_eq!(summary["perm"], "reverse");
}

#[test]
fn plot_structure() {
    let tmp = tempfile::tempdir().unwrap();
    permlab(tmp.path(), &["gen-seq", "--kind", "hadamard", "--q", "2", "--N", "256"]);
    permlab(tmp.path(), &["clt", "--seq", "seq.csv", "--N", "32", "--M", "300"]);
    permlab(tmp.path(), &["lil", "--seq", "seq.csv", "--Nmax", "256", "--xs", "5"]);

    let out = permlab(tmp.path(), &["plot", "--in", "dist.csv", "--kind", "cdf-overlay", "--out", "cdf.svg"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let svg = read(tmp.path().join("cdf.svg"));
    assert_eq!(svg.matches("<path").count(), 2);
    assert!(svg.contains("width=\"800\"") && svg.contains("height=\"600\""));

    permlab(tmp.path(), &["plot", "--in", "dist.csv", "--kind", "cdf-overlay", "--out", "again.svg"]);
    assert_eq!(svg, read(tmp.path().join("again.svg")));

    assert!(permlab(tmp.path(), &["plot", "--in", "lil.csv", "--kind", "trajectory", "--out", "lil.svg"]).status.success());
    let svg = read(tmp.path().join("lil.svg"));
    assert_eq!(svg.matches("<path").count(), 1);
    assert_eq!(svg.matches("<line").count(), 2);
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(tmp.path().join("empty.csv"), "value\n").unwrap();
    let empty = permlab(tmp.path(), &["plot", "--in", "empty.csv", "--kind", "cdf-overlay"]);
    assert_eq!(empty.status.code(), Some(2));
    assert_eq!(String::from_utf8_lossy(&empty.stderr).lines().count(), 1);

    assert_eq!(permlab(tmp.path(), &["gen-seq", "--kind", "hadamard", "--N", "5"]).status.code(), Some(2));
    assert_eq!(permlab(tmp.path(), &["no-such-command"]).status.code(), Some(2));
    assert_eq!(permlab(tmp.path(), &["clt", "--seq", "missing.csv", "--N", "4", "--M", "4"]).status.code(), Some(2));
    assert_eq!(permlab(tmp.path(), &["--threads", "0", "gen-seq", "--kind", "hadamard", "--q", "2", "--N", "3"]).status.code(), Some(2));

    let bad_q = permlab(tmp.path(), &["gen-seq", "--kind", "hadamard", "--q", "1", "--N", "5"]);
    assert_eq!(bad_q.status.code(), Some(3));

    std::fs::write(tmp.path().join("manifest.json"), r#"{"version":"0","config":{},"outputs":[],"wall_time_seconds":0,"extra":1}"#)
        .unwrap();
    assert_eq!(permlab(tmp.path(), &["replay", "--manifest", "manifest.json"]).status.code(), Some(2));
}

#[test]
fn prohorov_framework_and_exchangeable() {
    let tmp = tempfile::tempdir().unwrap();
    write_rademacher(tmp.path());
    std::fs::write(tmp.path().join("shift.csv"), "position,mass\n-0.75,0.5\n1.25,0.5\n").unwrap();
    let out = permlab(tmp.path(), &["prohorov", "--mu", "rad.csv", "--nu", "shift.csv", "--oracle"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = read(tmp.path().join("prohorov.csv"));
    let value = |name: &str| -> f64 {
        table.lines().find_map(|l| l.strip_prefix(&format!("{name},"))).unwrap().parse().unwrap()
    };
    assert!((value("prohorov") - 0.25).abs() < 1e-9);
    assert!((value("prohorov") - value("prohorov_oracle")).abs() < 1e-9);

    let out = permlab(tmp.path(), &["framework-check", "--theorem", "clt", "--mu", "rad.csv", "--k-list", "1,100", "--M", "5000"]);
    assert!(out.status.success());
    let rows: Vec<String> = read(tmp.path().join("table.csv")).lines().map(str::to_owned).collect();
    assert_eq!(rows[0], "k,ks_to_G");
    let k1: f64 = rows[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!((k1 - 0.341_344_746).abs() < 0.03);

    std::fs::write(
        tmp.path().join("model.json"),
        r#"{"atoms": [{"prob": 1.0, "law_csv": "rad.csv"}], "bad_mass": 0.0,
            "perturb": {"eps": 0.1, "outlier_prob": 0.0, "outlier_size": 0.0}}"#,
    )
    .unwrap();
    let out = permlab(
        tmp.path(),
        &["exchangeable", "--model", "model.json", "--theorem", "clt", "--k", "50", "--perms", "identity,reverse", "--M", "3000"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(&read(tmp.path().join("report.json"))).unwrap();
    assert!(report["max_pairwise_ks"].as_f64().unwrap() < 0.1);

    let out = permlab(tmp.path(), &["strong-law", "--model", "model.json", "--p", "1", "--N", "1000", "--every", "100"]);
    assert!(out.status.success());
    assert_eq!(read(tmp.path().join("strong.csv")).lines().count(), 11);
}
