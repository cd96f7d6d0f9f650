use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(rel: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(rel);
    fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn greenfix(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_greenfix")).args(args).env_remove("RUST_LOG").output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn write(root: &Path, rel: &str, text: &str) -> PathBuf {
    let path = root.join(rel);
    fs::create_dir_all(path.parent().unwrap()).unwrap();
    fs::write(&path, text).unwrap();
    path
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

const JAVA: &str = "src/main/java/org/example/StyledView.java";
const LAYOUT: &str = "src/main/res/layout/main.xml";

#[test]
fn check_reports_unreleased_typed_array() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), JAVA, &fixture("golden/recycle/before.java"));
    let out = greenfix(&["check", dir.path().to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&out), 1, "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let at: Vec<_> = ["\"version\"", "\"mode\"", "\"findings\"", "\"summary\""].map(|k| text.find(k).unwrap()).into();
    assert!(at.windows(2).all(|w| w[0] < w[1]), "top-level keys out of order");
    assert_eq!(report["version"], "1");
    assert_eq!(report["mode"], "check");
    let findings = report["findings"].as_array().unwrap();
    assert_eq!(findings.len(), 1);
    let f = &findings[0];
    assert_eq!(f["rule"], "Recycle");
    assert_eq!(Path::new(f["file"].as_str().unwrap()), file);
    assert!(f["message"].as_str().unwrap().contains("recycle()"));
    let source = fixture("golden/recycle/before.java");
    let (start, end) = (f["span"]["start"].as_u64().unwrap() as usize, f["span"]["end"].as_u64().unwrap() as usize);
    assert!(source[start..end].contains("obtainStyledAttributes"));
    assert_eq!(report["summary"]["total_findings"], 1);
    assert!(out.stderr.is_empty());
}

#[test]
fn clean_tree_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), JAVA, &fixture("golden/recycle/after.java"));
    let out = greenfix(&["check", dir.path().to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["findings"].as_array().unwrap().len(), 0);
}

#[test]
fn fix_then_check_is_clean() {
    let dir = tempfile::tempdir().unwrap();
    let java = write(dir.path(), JAVA, &fixture("golden/wake_lock/before.java"));
    let xml = write(dir.path(), LAYOUT, &fixture("golden/obsolete_layout_param/before.xml"));
    let root = dir.path().to_str().unwrap();
    let out = greenfix(&["fix", root]);
    assert_eq!(code(&out), 1, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(fs::read_to_string(java).unwrap(), fixture("golden/wake_lock/after.java"));
    assert_eq!(fs::read_to_string(xml).unwrap(), fixture("golden/obsolete_layout_param/after.xml"));
    assert_eq!(code(&greenfix(&["check", root])), 0);
    assert_eq!(code(&greenfix(&["fix", root])), 0);
}

#[test]
fn paper_guard_flag() {
    let dir = tempfile::tempdir().unwrap();
    let java = write(dir.path(), JAVA, &fixture("golden/wake_lock/before.java"));
    let out = greenfix(&["fix", dir.path().to_str().unwrap(), "--paper-faithful-wakelock-guard"]);
    assert_eq!(code(&out), 1);
    assert_eq!(fs::read_to_string(java).unwrap(), fixture("golden/wake_lock/after_paper_guard.java"));
}

#[test]
fn patch_dir_leaves_sources() {
    let dir = tempfile::tempdir().unwrap();
    let patches = tempfile::tempdir().unwrap();
    let java = write(dir.path(), JAVA, &fixture("golden/recycle/before.java"));
    let out = greenfix(&["fix", dir.path().to_str().unwrap(), "--patch-dir", patches.path().to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["mode"], "patch");
    assert_eq!(fs::read_to_string(java).unwrap(), fixture("golden/recycle/before.java"));
    let patch = fs::read_to_string(patches.path().join(format!("{JAVA}.patch"))).unwrap();
    assert!(patch.starts_with(&format!("--- a/{JAVA}\n+++ b/{JAVA}\n")));
    assert!(patch.contains("+"));
}

#[test]
fn only_limits_rules() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), JAVA, &fixture("golden/recycle/before.java"));
    let root = dir.path().to_str().unwrap();
    assert_eq!(code(&greenfix(&["--only", "WakeLock,ViewHolder", "check", root])), 0);
    assert_eq!(code(&greenfix(&["check", root, "--only", "recycle"])), 1);
}

#[test]
fn exclude_skips_matching_paths() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), JAVA, &fixture("golden/recycle/before.java"));
    let out = greenfix(&["check", dir.path().to_str().unwrap(), "--exclude", "**/org/**"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path().to_str().unwrap();
    let cases: [&[&str]; 6] = [
        &["--only", "Nonsense", "check", root],
        &["check", "/definitely/not/a/path"],
        &["fix", root, "--patch-dir", root, "--backup"],
        &["check", root, "--exclude", "a[b"],
        &["check", root, "--layout-param-table", "/no/such/table.tsv"],
        &["corpus", root, "--out", "/dev/null"],
    ];
    for args in cases {
        let out = greenfix(args);
        assert_eq!(code(&out), 2, "{args:?}");
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert!(stderr.contains("Usage"), "{args:?}: {stderr}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn unparseable_file_warns_but_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), JAVA, "class {");
    let out = greenfix(&["check", dir.path().to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["summary"]["parse_failures"], 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse failed"));
}

#[test]
fn corpus_writes_summary() {
    let root = tempfile::tempdir().unwrap();
    write(&root.path().join("one"), JAVA, &fixture("golden/recycle/before.java"));
    write(&root.path().join("two"), JAVA, &fixture("golden/recycle/before.java"));
    write(&root.path().join("two"), LAYOUT, &fixture("golden/obsolete_layout_param/before.xml"));
    write(&root.path().join("three"), JAVA, "class Nothing {}");
    let out_dir = tempfile::tempdir().unwrap();
    let csv = out_dir.path().join("summary.csv");
    let per = out_dir.path().join("projects.csv");
    let out = greenfix(&[
        "corpus",
        root.path().to_str().unwrap(),
        "--out",
        csv.to_str().unwrap(),
        "--per-project",
        per.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let expected = "\
rule,total_refactorings,total_projects,percentage_of_projects,incidence_per_project
ViewHolder,0,0,0,-
DrawAllocation,0,0,0,-
WakeLock,0,0,0,-
Recycle,2,2,67,1.0
ObsoleteLayoutParam,1,1,33,1.0
Any,3,2,67,1.5
";
    assert_eq!(fs::read_to_string(&csv).unwrap(), expected);
    assert!(fs::read_to_string(&per).unwrap().starts_with("project,rule,"));
    // the corpus is never rewritten
    assert_eq!(fs::read_to_string(root.path().join("one").join(JAVA)).unwrap(), fixture("golden/recycle/before.java"));

    let json_out = out_dir.path().join("summary.json");
    let out = greenfix(&["corpus", root.path().to_str().unwrap(), "--out", json_out.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&out), 0);
    let rows: Value = serde_json::from_str(&fs::read_to_string(json_out).unwrap()).unwrap();
    assert_eq!(rows[5]["rule"], "Any");
    assert_eq!(rows[5]["corpus_size"], 3);
    assert_eq!(rows[5]["incidence_per_project"], "1.5");
}
