use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn scene(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenes").join(name)
}

fn ribbonize(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ribbonize")).current_dir(dir).args(args).output().unwrap()
}

fn text(b: &[u8]) -> String {
    String::from_utf8_lossy(b).into_owned()
}

fn listing(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(dir)
        .map(|d| d.map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect())
        .unwrap_or_default();
    names.sort();
    names
}

#[test]
fn inspect_prints_topology_and_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let torus = scene("torus.scene");
    let out = ribbonize(dir.path(), &["inspect", torus.to_str().unwrap(), "--samples", "256", "--seed", "11"]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    let stdout = text(&out.stdout);
    assert!(stdout.contains("note: --samples 256 overrides scene.samples = 2048"));
    assert!(stdout.contains("note: --seed 11"));
    assert_eq!(stdout.lines().last().unwrap(), "χ = 0 (exact), audit 0.000 ± 0.02");
    assert!(listing(dir.path()).is_empty());
}

#[test]
fn ribbonize_writes_every_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let torus = scene("torus.scene");
    let out = ribbonize(dir.path(), &["ribbonize", torus.to_str().unwrap(), "--samples", "128", "--out-dir", "run"]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    assert_eq!(
        listing(&dir.path().join("run")),
        ["torus-curvature.csv", "torus-report.txt", "torus-widths.csv", "torus.obj", "torus.svg"]
    );
}

#[test]
fn develop_writes_only_the_flat_patterns() {
    let dir = tempfile::tempdir().unwrap();
    let torus = scene("torus.scene");
    let out = ribbonize(dir.path(), &["develop", torus.to_str().unwrap(), "--samples", "128"]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    assert_eq!(listing(&dir.path().join("out")), ["torus.svg"]);
}

#[test]
fn curvature_writes_the_trace() {
    let dir = tempfile::tempdir().unwrap();
    let torus = scene("torus.scene");
    let out = ribbonize(dir.path(), &["curvature", torus.to_str().unwrap(), "--samples", "64"]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("out/torus-curvature.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 2 * 65);
}

#[test]
fn bad_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("broken.scene"), "[surface]\nkind = torus\nshape = round\n").unwrap();
    let out = ribbonize(dir.path(), &["inspect", "broken.scene"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(text(&out.stderr).contains("line 3: unknown key `shape` in [surface]"), "{}", text(&out.stderr));

    let out = ribbonize(dir.path(), &["inspect", "missing.scene"]);
    assert_eq!(out.status.code(), Some(2));

    let torus = scene("torus.scene");
    let out = ribbonize(dir.path(), &["inspect", torus.to_str().unwrap(), "--samples", "8"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failing_stage_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("flat.scene"),
        "[surface]\nkind = plane\n[curve]\nfamily = line\nparams = 0, 0, 1, 0\ninterval = 0, 1\n",
    )
    .unwrap();
    let out = ribbonize(dir.path(), &["inspect", "flat.scene"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stdout).contains("normal curvature"), "{}", text(&out.stdout));
}
