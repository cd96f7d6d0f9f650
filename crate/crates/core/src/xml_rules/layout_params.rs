use std::collections::BTreeMap;
use std::path::Path;

use thiserror::Error;

const DEFAULT_TABLE: &str = include_str!("default_layout_params.tsv");

const ANDROID_PREFIX: &str = "android:";

#[derive(Debug, Error)]
pub enum TableError {
    #[error("line {line}: expected `ParentTag<TAB>attribute_name`, found {text:?}")]
    Malformed { line: usize, text: String },
    #[error("cannot read layout parameter table {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Pattern {
    Exact(String),
    Prefix(String),
}

impl Pattern {
    fn parse(name: &str) -> Self {
        let name = name.strip_prefix(ANDROID_PREFIX).unwrap_or(name);
        match name.strip_suffix('*') {
            Some(prefix) => Pattern::Prefix(prefix.to_owned()),
            None => Pattern::Exact(name.to_owned()),
        }
    }

    fn matches(&self, name: &str) -> bool {
        match self {
            Pattern::Exact(n) => n == name,
            Pattern::Prefix(p) => name.starts_with(p.as_str()),
        }
    }
}

/// Which `android:layout_*` attributes each known parent container reads.
///
/// A parent's meaningful set is the universal set plus its own entries, so
/// the universal set is always contained in it. Parents absent from the
/// table are unknown and never produce findings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayoutParamTable {
    universal: Vec<Pattern>,
    parents: BTreeMap<String, Vec<Pattern>>,
}

impl Default for LayoutParamTable {
    fn default() -> Self {
        Self::parse(DEFAULT_TABLE).expect("embedded layout parameter table is well formed")
    }
}

impl LayoutParamTable {
    pub fn parse(text: &str) -> Result<Self, TableError> {
        let mut universal = Vec::new();
        let mut parents: BTreeMap<String, Vec<Pattern>> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let malformed = || TableError::Malformed { line: i + 1, text: line.to_owned() };
            let (parent, attr) = line.split_once('\t').ok_or_else(malformed)?;
            let (parent, attr) = (parent.trim(), attr.trim());
            if parent.is_empty() || attr.is_empty() || attr.contains(char::is_whitespace) {
                return Err(malformed());
            }
            let pattern = Pattern::parse(attr);
            if parent == "*" {
                universal.push(pattern);
            } else {
                parents.entry(parent.to_owned()).or_default().push(pattern);
            }
        }
        Ok(Self { universal, parents })
    }

    pub fn load(path: &Path) -> Result<Self, TableError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| TableError::Io { path: path.display().to_string(), source })?;
        Self::parse(&text)
    }

    /// Framework containers may be written fully qualified.
    fn key(tag: &str) -> &str {
        tag.strip_prefix("android.widget.").unwrap_or(tag)
    }

    pub fn is_known_parent(&self, tag: &str) -> bool {
        self.parents.contains_key(Self::key(tag))
    }

    pub fn is_universal(&self, attribute: &str) -> bool {
        let local = attribute.strip_prefix(ANDROID_PREFIX).unwrap_or(attribute);
        self.universal.iter().any(|p| p.matches(local))
    }

    /// Whether `attribute` (with or without the `android:` prefix) has an
    /// effect under `parent`. Unknown parents accept everything.
    pub fn is_meaningful(&self, parent: &str, attribute: &str) -> bool {
        let local = attribute.strip_prefix(ANDROID_PREFIX).unwrap_or(attribute);
        match self.parents.get(Self::key(parent)) {
            None => true,
            Some(own) => self.is_universal(local) || own.iter().any(|p| p.matches(local)),
        }
    }

    pub fn known_parents(&self) -> impl Iterator<Item = &str> {
        self.parents.keys().map(String::as_str)
    }
}
