use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use similar::TextDiff;

/// Unified diff from `old` to `new` with `a/` and `b/` headers for `rel`.
pub fn unified_diff(rel: &str, old: &str, new: &str) -> String {
    TextDiff::from_lines(old, new)
        .unified_diff()
        .context_radius(3)
        .header(&format!("a/{rel}"), &format!("b/{rel}"))
        .to_string()
}

/// Replaces `path` with `contents` via a temp file in the same directory
/// and a rename, keeping the original permissions.
pub(crate) fn atomic_write(path: &Path, contents: &str, backup: bool) -> io::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let permissions = fs::metadata(path)?.permissions();
    if backup {
        let mut orig = path.as_os_str().to_owned();
        orig.push(".orig");
        fs::copy(path, PathBuf::from(orig))?;
    }
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    fs::set_permissions(tmp.path(), permissions)?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub(crate) fn write_patch(patch_dir: &Path, rel: &str, diff: &str) -> io::Result<PathBuf> {
    let target = patch_dir.join(format!("{rel}.patch"));
    if let Some(parent) = target.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(&target, diff)?;
    Ok(target)
}
