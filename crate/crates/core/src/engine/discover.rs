use std::ffi::OsStr;
use std::path::{Path, PathBuf};

use globset::{GlobBuilder, GlobSet, GlobSetBuilder};
use walkdir::WalkDir;

use super::{EngineError, Language, RunConfig};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Discovery {
    /// Sorted by path.
    pub files: Vec<(PathBuf, Language)>,
    pub warnings: Vec<String>,
}

fn exclude_set(patterns: &[String]) -> Result<GlobSet, EngineError> {
    let mut builder = GlobSetBuilder::new();
    for pattern in patterns {
        let glob = GlobBuilder::new(pattern)
            .literal_separator(true)
            .build()
            .map_err(|e| EngineError::BadGlob { pattern: pattern.clone(), message: e.to_string() })?;
        builder.add(glob);
    }
    builder
        .build()
        .map_err(|e| EngineError::BadGlob { pattern: patterns.join(", "), message: e.to_string() })
}

/// `.java` anywhere; `.xml` only directly inside `res/layout*`.
pub(crate) fn classify(path: &Path) -> Option<Language> {
    match path.extension().and_then(OsStr::to_str) {
        Some("java") => Some(Language::Java),
        Some("xml") => {
            let dir = path.parent()?;
            let in_layout = dir.file_name().and_then(OsStr::to_str).is_some_and(|n| n.starts_with("layout"));
            let in_res = dir.parent().and_then(Path::file_name) == Some(OsStr::new("res"));
            (in_layout && in_res).then_some(Language::Xml)
        }
        _ => None,
    }
}

/// Lists eligible files under `config.input`. Excludes match against the
/// path relative to the input, with a leading `/` so that `**/build/**`
/// also catches a top-level `build` directory.
pub fn discover_files(config: &RunConfig) -> Result<Discovery, EngineError> {
    let excludes = exclude_set(&config.exclude)?;
    let root = &config.input;
    let excluded = |path: &Path| {
        let rel = path.strip_prefix(root).unwrap_or(path);
        if rel.as_os_str().is_empty() {
            return false;
        }
        let rel = rel.to_string_lossy().replace('\\', "/");
        excludes.is_match(format!("/{rel}")) || excludes.is_match(&rel)
    };

    let mut out = Discovery::default();
    if root.is_file() {
        match classify(root) {
            Some(lang) => out.files.push((root.clone(), lang)),
            None => out.warnings.push(format!("{}: not a Java source or layout file", root.display())),
        }
        return Ok(out);
    }

    let walker = WalkDir::new(root).follow_links(true).sort_by_file_name().into_iter();
    for entry in walker.filter_entry(|e| !excluded(e.path())) {
        match entry {
            Ok(entry) => {
                if entry.file_type().is_file() {
                    if let Some(lang) = classify(entry.path()) {
                        out.files.push((entry.into_path(), lang));
                    }
                }
            }
            Err(err) => {
                let what = if err.loop_ancestor().is_some() { "symlink cycle, not followed" } else { "unreadable" };
                let path = err.path().map(|p| p.display().to_string()).unwrap_or_default();
                out.warnings.push(format!("{path}: {what}: {err}"));
            }
        }
    }
    out.files.sort();
    Ok(out)
}
