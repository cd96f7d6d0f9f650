#![allow(dead_code)]

pub mod mutations;

use std::fs;
use std::path::{Path, PathBuf};

use greenfix_core::engine::{run_project, Mode, ProjectReport, RunConfig};
use greenfix_core::rules::{JavaRuleOptions, RuleId, RuleResult};
use greenfix_core::syntax::{parse_java_source, parse_layout_xml};
use greenfix_core::xml_rules::{apply_obsolete_layout_param, LayoutParamTable};

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn read(rel: &str) -> String {
    fs::read_to_string(fixtures().join(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

/// Where a file of this kind has to live for the engine to pick it up.
pub fn project_path(name: &str) -> String {
    if name.ends_with(".xml") {
        format!("app/src/main/res/layout/{name}")
    } else {
        format!("app/src/main/java/org/example/{name}")
    }
}

/// Writes `files` (relative path, contents) into a fresh temp project.
pub fn project(files: &[(String, String)]) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for (rel, text) in files {
        let path = dir.path().join(rel);
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(path, text).unwrap();
    }
    dir
}

pub fn run(root: &Path, mode: Mode) -> ProjectReport {
    let mut config = RunConfig::new(root);
    config.mode = mode;
    run_project(&config).unwrap()
}

/// Every rule applicable to `name`, run on `text` directly.
pub fn analyze(name: &str, text: &str) -> Vec<(RuleId, RuleResult)> {
    if name.ends_with(".xml") {
        let tree = parse_layout_xml(text).expect("fixture parses");
        vec![(RuleId::ObsoleteLayoutParam, apply_obsolete_layout_param(&tree, &LayoutParamTable::default()))]
    } else {
        let tree = parse_java_source(text).expect("fixture parses");
        let options = JavaRuleOptions::default();
        RuleId::JAVA
            .into_iter()
            .map(|r| (r, greenfix_core::rules::run_java_rule(r, &tree, &options)))
            .collect()
    }
}

pub fn parses_cleanly(name: &str, text: &str) -> bool {
    if name.ends_with(".xml") {
        parse_layout_xml(text).is_ok()
    } else {
        parse_java_source(text).is_ok()
    }
}

/// Fixes a single file in a scratch project and returns the rewritten text.
pub fn fix_text(name: &str, text: &str) -> (ProjectReport, String) {
    let rel = project_path(name);
    let dir = project(&[(rel.clone(), text.to_owned())]);
    let report = run(dir.path(), Mode::FixInPlace);
    let out = fs::read_to_string(dir.path().join(&rel)).unwrap();
    (report, out)
}

/// Sorted list of (relative path, contents) of every regular file.
pub fn snapshot(root: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut out: Vec<_> = walkdir::WalkDir::new(root)
        .into_iter()
        .filter_map(Result::ok)
        .filter(|e| e.file_type().is_file())
        .map(|e| (e.path().strip_prefix(root).unwrap().to_path_buf(), fs::read(e.path()).unwrap()))
        .collect();
    out.sort();
    out
}
