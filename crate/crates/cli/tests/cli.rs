use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn stt(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stt"))
        .args(args)
        .current_dir(dir)
        .env_remove("STT_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

#[test]
fn generate_run_and_verify_grid() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = stt(
        &[
            "generate",
            "grid",
            "--size",
            "5",
            "--out",
            "g.txt",
            "--decomposition-out",
            "g.pd",
        ],
        d,
    );
    assert!(out.status.success());
    assert_eq!(json(&out)["m"], 40);

    let out = stt(
        &[
            "run-stt",
            "--graph",
            "g.txt",
            "--strategy",
            "planar-cycle",
            "--model",
            "edge",
            "--out",
            "s.jsonl",
        ],
        d,
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(json(&out)["report"]["captured"], true);

    let out = stt(&["verify", "--graph", "g.txt", "--schedule", "s.jsonl"], d);
    assert!(out.status.success());
    assert_eq!(json(&out)["captured"], true);

    let out = stt(
        &[
            "run-pw",
            "--graph",
            "g.txt",
            "--decomposition",
            "g.pd",
            "--out",
            "p.jsonl",
        ],
        d,
    );
    assert!(out.status.success());
    assert_eq!(json(&out)["stats"]["cops"], 6);
}

#[test]
fn verify_fails_on_a_losing_schedule() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(
        stt(&["generate", "path", "--size", "3", "--out", "p3.txt"], d)
            .status
            .success()
    );
    assert!(stt(
        &[
            "run-stt",
            "--graph",
            "p3.txt",
            "--strategy",
            "tree-centroid",
            "--budget",
            "const:1",
            "--out",
            "s.jsonl"
        ],
        d
    )
    .status
    .success());
    // drop the final clear
    let text = fs::read_to_string(d.join("s.jsonl")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    let cut = [lines[0], lines[1], lines[3]].join("\n");
    fs::write(d.join("cut.jsonl"), cut).unwrap();
    let out = stt(
        &["verify", "--graph", "p3.txt", "--schedule", "cut.jsonl"],
        d,
    );
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["captured"], false);

    let out = stt(
        &["verify", "--graph", "p3.txt", "--schedule", "missing.jsonl"],
        d,
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn separate_tree_and_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(
        stt(&["generate", "path", "--size", "7", "--out", "p7.txt"], d)
            .status
            .success()
    );
    let out = stt(
        &[
            "separate",
            "--graph",
            "p7.txt",
            "--strategy",
            "tree-centroid",
        ],
        d,
    );
    assert_eq!(json(&out)["s"], serde_json::json!([3]));
    let out = stt(
        &[
            "tree",
            "--graph",
            "p7.txt",
            "--strategy",
            "tree-centroid",
            "--budget",
            "const:1",
        ],
        d,
    );
    assert_eq!(json(&out)["node_count"], 7);
    let out = stt(&["bounds", "--n", "3", "--budget", "const:1"], d);
    assert_eq!(json(&out)["cop_bound"], 4);
    assert_eq!(json(&out)["ell"], 4);
}

#[test]
fn hyperbolic_generation_with_coordinates() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = stt(
        &[
            "generate",
            "hyperbolic",
            "--size",
            "300",
            "--seed",
            "3",
            "--largest",
            "--out",
            "h.txt",
            "--coords-out",
            "h.xy",
        ],
        d,
    );
    assert!(out.status.success());
    let out = stt(
        &[
            "run-stt",
            "--graph",
            "h.txt",
            "--coords",
            "h.xy",
            "--strategy",
            "hyperbolic-sector",
            "--budget",
            "power:4:0.5",
        ],
        d,
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn run_and_compare_configs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(
        d.join("a.toml"),
        "name = \"a\"\nfamily = \"grid\"\nsizes = [4, 6]\nmodel = \"edge\"\n",
    )
    .unwrap();
    fs::write(
        d.join("b.json"),
        r#"{"name": "b", "family": "grid", "sizes": [4, 6], "model": "edge", "algorithm": "pw"}"#,
    )
    .unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_stt"))
        .args(["run", "a.toml"])
        .current_dir(d)
        .env("STT_OUT_DIR", "results")
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(d.join("results/a.csv").exists());
    assert!(stt(&["run", "b.json", "--out-dir", "results"], d)
        .status
        .success());
    let first = fs::read(d.join("results/b.csv")).unwrap();
    assert!(stt(&["run", "b.json", "--out-dir", "results"], d)
        .status
        .success());
    assert_eq!(fs::read(d.join("results/b.csv")).unwrap(), first);

    let out = stt(&["compare", "results/a.csv", "results/b.csv"], d);
    assert!(out.status.success());
    let table = String::from_utf8(out.stdout).unwrap();
    assert!(table.starts_with("instance,n,capture_a,capture_b,ratio"));
    assert_eq!(table.lines().count(), 3);

    fs::write(
        d.join("bad.toml"),
        "name = \"x\"\nfamily = \"grid\"\nsizes = [4]\nspeed = 2\n",
    )
    .unwrap();
    assert_eq!(stt(&["run", "bad.toml"], d).status.code(), Some(2));
}
