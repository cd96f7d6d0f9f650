use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::SourceSpan;

/// Replacement of one byte range of the original text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edit {
    pub span: SourceSpan,
    pub replacement: String,
}

impl Edit {
    pub fn replace(span: SourceSpan, replacement: impl Into<String>) -> Self {
        Self { span, replacement: replacement.into() }
    }

    pub fn insert(offset: usize, text: impl Into<String>) -> Self {
        Self::replace(SourceSpan::point(offset), text)
    }

    pub fn delete(span: SourceSpan) -> Self {
        Self::replace(span, String::new())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EditError {
    #[error("edit {second} overlaps edit {first}")]
    Overlap { first: SourceSpan, second: SourceSpan },
    #[error("edit {span} lies outside a text of {len} bytes")]
    OutOfBounds { span: SourceSpan, len: usize },
    #[error("edit {span} splits a UTF-8 character")]
    NotCharBoundary { span: SourceSpan },
}

/// Edits sorted by start offset, pairwise non-overlapping.
///
/// Zero-width insertions at the same offset are kept in the order they were
/// added and applied in that order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EditSet {
    edits: Vec<Edit>,
}

impl EditSet {
    pub fn new(mut edits: Vec<Edit>) -> Result<Self, EditError> {
        // stable: equal keys keep insertion order
        edits.sort_by_key(|e| (e.span.start, e.span.end));
        for pair in edits.windows(2) {
            if pair[1].span.start < pair[0].span.end {
                return Err(EditError::Overlap { first: pair[0].span, second: pair[1].span });
            }
        }
        Ok(Self { edits })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.edits.is_empty()
    }

    pub fn len(&self) -> usize {
        self.edits.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Edit> {
        self.edits.iter()
    }

    pub fn as_slice(&self) -> &[Edit] {
        &self.edits
    }

    /// Union of two sets; fails when any pair of edits overlaps.
    pub fn merge(&self, other: &EditSet) -> Result<EditSet, EditError> {
        let mut all = self.edits.clone();
        all.extend(other.edits.iter().cloned());
        EditSet::new(all)
    }

    /// Adds every edit of `edits` or none of them.
    pub fn try_extend(&mut self, edits: &[Edit]) -> Result<(), EditError> {
        let mut all = self.edits.clone();
        all.extend_from_slice(edits);
        *self = EditSet::new(all)?;
        Ok(())
    }
}

/// Applies `edits` to `text`. Bytes outside every edit span are copied
/// through unchanged.
pub fn apply_edit_set(text: &str, edits: &EditSet) -> Result<String, EditError> {
    let delta: isize = edits
        .iter()
        .map(|e| e.replacement.len() as isize - e.span.len() as isize)
        .sum();
    let mut out = String::with_capacity((text.len() as isize + delta).max(0) as usize);
    let mut cursor = 0;
    for edit in edits.iter() {
        let span = edit.span;
        if span.end > text.len() {
            return Err(EditError::OutOfBounds { span, len: text.len() });
        }
        if !text.is_char_boundary(span.start) || !text.is_char_boundary(span.end) {
            return Err(EditError::NotCharBoundary { span });
        }
        debug_assert!(span.start >= cursor);
        out.push_str(&text[cursor..span.start]);
        out.push_str(&edit.replacement);
        cursor = span.end;
    }
    out.push_str(&text[cursor..]);
    Ok(out)
}
