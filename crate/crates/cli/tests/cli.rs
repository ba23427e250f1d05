use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

use sha2::{Digest, Sha256};

fn hybridbench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hybridbench"))
        .args(args)
        .env_remove("HYBRIDBENCH_THREADS")
        .output()
        .expect("spawn hybridbench")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("terminated by signal")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn demo(dir: &Path) -> std::path::PathBuf {
    let out = hybridbench(&["demo", "--out", p(&dir.join("src")), "--side", "64", "--images", "2"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    dir.join("src/manifest.json")
}

fn hashes(dir: &Path) -> BTreeMap<String, String> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "png"))
        .map(|p| {
            let digest = Sha256::digest(std::fs::read(&p).unwrap());
            let hex = digest.iter().map(|b| format!("{b:02x}")).collect();
            (p.file_name().unwrap().to_string_lossy().into_owned(), hex)
        })
        .collect()
}

#[test]
fn plan_prints_spec_count() {
    let tmp = tempfile::tempdir().unwrap();
    let manifest = demo(tmp.path());
    let out = hybridbench(&["plan", "--manifest", p(&manifest), "--out", p(&tmp.path().join("run"))]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    // 2 ordered pairs x 2 x 2 images x 7 cutoffs
    assert_eq!(stdout(&out).trim(), "56");
    assert!(tmp.path().join("run/plan.json").is_file());

    let out = hybridbench(&[
        "plan", "--manifest", p(&manifest), "--out", p(&tmp.path().join("run")), "--cutoffs", "2,6", "--limit", "5",
    ]);
    assert_eq!(stdout(&out).trim(), "5");
}

#[test]
fn config_errors_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let empty = tmp.path().join("empty.json");
    std::fs::write(&empty, r#"{"categories": []}"#).unwrap();
    let out = hybridbench(&["plan", "--manifest", p(&empty), "--out", p(tmp.path())]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));

    let manifest = demo(tmp.path());
    for bad in ["0,4", "-1", "nan"] {
        let out = hybridbench(&["plan", "--manifest", p(&manifest), "--out", p(tmp.path()), "--cutoffs", bad]);
        assert_eq!(code(&out), 2, "cutoffs {bad}: {}", stderr(&out));
    }
    let out = hybridbench(&["generate", "--out", p(tmp.path()), "--workers", "0"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn missing_inputs_exit_3_and_name_the_path() {
    let tmp = tempfile::tempdir().unwrap();
    let run = tmp.path().join("run");
    let out = hybridbench(&["evaluate", "--out", p(&run)]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("plan.json"));

    let manifest = demo(tmp.path());
    hybridbench(&["plan", "--manifest", p(&manifest), "--out", p(&run)]);
    let out = hybridbench(&["evaluate", "--out", p(&run)]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("hybrids"));

    let out = hybridbench(&["analyze", "--out", p(&run)]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("predictions.csv"));

    let out = hybridbench(&["plan", "--manifest", p(&tmp.path().join("nope.json")), "--out", p(&run)]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("nope.json"));
}

#[test]
fn generation_is_identical_across_worker_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let manifest = demo(tmp.path());
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for (dir, workers) in [(&a, "1"), (&b, "8")] {
        let out = hybridbench(&["plan", "--manifest", p(&manifest), "--out", p(dir)]);
        assert_eq!(code(&out), 0);
        let out = Command::new(env!("CARGO_BIN_EXE_hybridbench"))
            .args(["generate", "--out", p(dir)])
            .env("HYBRIDBENCH_THREADS", workers)
            .output()
            .unwrap();
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        assert_eq!(stdout(&out).trim(), "generated 56 skipped 0 failed 0");
    }
    let ha = hashes(&a.join("hybrids"));
    assert_eq!(ha.len(), 56);
    assert_eq!(ha, hashes(&b.join("hybrids")));

    let out = hybridbench(&["generate", "--out", p(&a)]);
    assert_eq!(stdout(&out).trim(), "generated 0 skipped 56 failed 0");
}

#[test]
fn run_all_with_mock_backend_writes_reports() {
    let tmp = tempfile::tempdir().unwrap();
    let manifest = demo(tmp.path());
    let run = tmp.path().join("run");
    let out = hybridbench(&["run-all", "--manifest", p(&manifest), "--out", p(&run), "--workers", "4"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("top-1 crossover at cutoff"));

    for f in [
        "plan.json",
        "generation_report.json",
        "predictions.csv",
        "evaluation_report.json",
        "report/aggregate.csv",
        "report/aggregate.svg",
        "report/grid.svg",
        "report/crossovers.csv",
        "report/pairs/gradient__checkerboard.csv",
        "report/pairs/checkerboard__gradient.csv",
    ] {
        assert!(run.join(f).is_file(), "{f} missing");
    }
    let predictions = std::fs::read_to_string(run.join("predictions.csv")).unwrap();
    assert!(predictions.starts_with("spec,backend,rank,label_id,score\n"));
    // the mock has two labels, so each spec contributes two ranks
    assert_eq!(predictions.lines().count(), 1 + 56 * 2);

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(run.join("evaluation_report.json")).unwrap()).unwrap();
    assert_eq!(report["records"], 56);
    assert_eq!(report["failed"], 0);
}

#[test]
fn onnx_model_path_must_exist() {
    let tmp = tempfile::tempdir().unwrap();
    let manifest = demo(tmp.path());
    let run = tmp.path().join("run");
    hybridbench(&["plan", "--manifest", p(&manifest), "--out", p(&run)]);
    hybridbench(&["generate", "--out", p(&run)]);
    let out = hybridbench(&["evaluate", "--out", p(&run), "--backend", p(&tmp.path().join("model.onnx"))]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("model.onnx"));

    let model = tmp.path().join("model.onnx");
    std::fs::write(&model, b"onnx").unwrap();
    let out = hybridbench(&["evaluate", "--out", p(&run), "--backend", p(&model)]);
    assert_eq!(code(&out), 3, "sidecar is missing");
    assert!(stderr(&out).contains("model.json"));
}

#[test]
fn example_fruit_manifest_plans_full_sweep() {
    let tmp = tempfile::tempdir().unwrap();
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/fruits.example.json");
    let out = hybridbench(&["plan", "--manifest", p(&manifest), "--out", p(tmp.path())]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(stdout(&out).trim(), "63000");
}

#[test]
fn shipped_demo_manifest_plans_desk_sweep() {
    let tmp = tempfile::tempdir().unwrap();
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/demo/manifest.json");
    let out = hybridbench(&["plan", "--manifest", p(&manifest), "--out", p(tmp.path())]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(stdout(&out).trim(), "126");
}
