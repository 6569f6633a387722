use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_oval-optics"))
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn good_scene_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let scene = write(
        dir.path(),
        "p.json",
        r#"{"n1": 1, "n2": 1.5, "wavefront": {"kind": "parabola", "vertex": [0, 3]}, "a": [2],
            "sampling": {"wavefront_samples": 801}}"#,
    );
    let out = dir.path().join("out");
    let o = bin()
        .args(["run"])
        .arg(&scene)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.join("summary.json").exists());
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("overall: PASS"));
}

#[test]
fn schema_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let scene = write(
        dir.path(),
        "bad.json",
        r#"{"n1": 1.2, "n2": 1.2, "wavefront": "parabola", "a": [1], "tasks": ["profile"]}"#,
    );
    let o = bin().arg("validate").arg(&scene).output().unwrap();
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("indices-equal"));

    let broken = write(dir.path(), "broken.json", "{\"n1\": 1,\n \"n2\": }");
    let o = bin().arg("validate").arg(&broken).output().unwrap();
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("broken.json:2:"));
}

#[test]
fn degenerate_caustic_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let scene = write(
        dir.path(),
        "c.json",
        r#"{"n1": 1, "n2": 1.5, "wavefront": "circle", "a": [2], "tasks": ["reconstruct"]}"#,
    );
    let o = bin()
        .arg("run")
        .arg(&scene)
        .arg("--out")
        .arg(dir.path().join("o"))
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("degenerate caustic"));
}

#[test]
fn failed_validation_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    let scene = write(
        dir.path(),
        "t.json",
        r#"{"n1": 1, "n2": 1.5, "wavefront": {"kind": "parabola", "vertex": [0, 3]}, "a": [2],
            "sampling": {"wavefront_samples": 801}, "tasks": ["validate"], "thresholds": {"membership": 1e-300}}"#,
    );
    let o = bin().arg("validate").arg(&scene).output().unwrap();
    assert_eq!(code(&o), 4);
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL"));
}

#[test]
fn missing_file_exits_one() {
    let o = bin()
        .args(["validate", "/nonexistent/scene.json"])
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
}

#[test]
fn seed_figures_writes_every_scene() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .args(["run", "--seed-figures", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for name in ["fig1", "fig2", "fig3", "fig4a", "fig4b", "fig5"] {
        assert!(dir
            .path()
            .join("scenes")
            .join(format!("{name}.json"))
            .exists());
        assert!(dir.path().join(name).join("scene.svg").exists(), "{name}");
    }
}

#[test]
fn version_and_help() {
    let o = bin().arg("--version").output().unwrap();
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains(env!("CARGO_PKG_VERSION")));
    let o = bin().arg("--help").output().unwrap();
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("run") && text.contains("validate"));
}

#[test]
fn run_without_scene_is_a_usage_error() {
    let o = bin().arg("run").output().unwrap();
    assert_eq!(code(&o), 2);
}
