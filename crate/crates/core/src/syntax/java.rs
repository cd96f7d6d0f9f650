//! Lossless Java syntax trees backed by the tree-sitter Java grammar.
//!
//! Tree-sitter keeps comments as nodes and leaves whitespace between
//! token spans, so every byte of the input is recoverable from the tree
//! together with the original text it owns.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use tree_sitter::{Node, Parser, Tree};

use super::SourceSpan;

/// Default cap on source size accepted by the parsers.
pub const DEFAULT_MAX_SOURCE_BYTES: usize = 16 * 1024 * 1024;

/// A syntax problem reported by one of the parsers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseDiagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseDiagnostic {
    pub fn at(text: &str, offset: usize, message: impl Into<String>) -> Self {
        let (line, column) = super::line_col(text, offset);
        Self { line, column, message: message.into() }
    }
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

/// Parsed Java compilation unit together with the text it was parsed from.
pub struct JavaTree {
    source: String,
    tree: Tree,
    path: Option<PathBuf>,
}

impl fmt::Debug for JavaTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("JavaTree")
            .field("path", &self.path)
            .field("len", &self.source.len())
            .finish()
    }
}

pub fn parse_java_source(text: &str) -> Result<JavaTree, Vec<ParseDiagnostic>> {
    parse_java_source_with_limit(text, DEFAULT_MAX_SOURCE_BYTES)
}

pub fn parse_java_source_with_limit(
    text: &str,
    max_bytes: usize,
) -> Result<JavaTree, Vec<ParseDiagnostic>> {
    if text.len() > max_bytes {
        return Err(vec![ParseDiagnostic {
            line: 1,
            column: 1,
            message: format!("source is {} bytes, above the {max_bytes} byte limit", text.len()),
        }]);
    }
    let mut parser = Parser::new();
    parser
        .set_language(&tree_sitter_java::LANGUAGE.into())
        .expect("bundled Java grammar is ABI compatible");
    let Some(tree) = parser.parse(text, None) else {
        return Err(vec![ParseDiagnostic::at(text, 0, "parser gave up")]);
    };
    let diagnostics = collect_diagnostics(tree.root_node(), text);
    if !diagnostics.is_empty() {
        return Err(diagnostics);
    }
    Ok(JavaTree { source: text.to_owned(), tree, path: None })
}

fn collect_diagnostics(root: Node<'_>, text: &str) -> Vec<ParseDiagnostic> {
    let mut out = Vec::new();
    if !root.has_error() {
        return out;
    }
    let mut stack = vec![root];
    while let Some(node) = stack.pop() {
        if node.is_missing() {
            out.push(ParseDiagnostic::at(text, node.start_byte(), format!("missing `{}`", node.kind())));
            continue;
        }
        if node.is_error() {
            let snippet: String = text[node.start_byte()..node.end_byte()]
                .chars()
                .take(24)
                .collect::<String>()
                .replace('\n', " ");
            out.push(ParseDiagnostic::at(text, node.start_byte(), format!("unexpected `{}`", snippet.trim())));
            continue;
        }
        if node.has_error() {
            let mut cursor = node.walk();
            let children: Vec<_> = node.children(&mut cursor).collect();
            stack.extend(children.into_iter().rev());
        }
    }
    if out.is_empty() {
        out.push(ParseDiagnostic::at(text, 0, "syntax error"));
    }
    out.sort_by_key(|d| (d.line, d.column));
    out
}

impl JavaTree {
    pub fn with_path(mut self, path: impl Into<PathBuf>) -> Self {
        self.path = Some(path.into());
        self
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// The compilation-unit node. Its span always covers the whole file,
    /// including leading and trailing trivia.
    pub fn root(&self) -> JavaNode<'_> {
        JavaNode { node: self.tree.root_node(), source: &self.source }
    }

    pub fn root_span(&self) -> SourceSpan {
        SourceSpan::new(0, self.source.len())
    }

    /// Rebuilds the text from the leaves of the tree and the trivia
    /// between them.
    pub fn serialize(&self) -> String {
        let mut out = String::with_capacity(self.source.len());
        let mut cursor = 0;
        self.root().for_each_leaf(&mut |leaf| {
            let span = leaf.span();
            out.push_str(&self.source[cursor..span.start]);
            out.push_str(leaf.text());
            cursor = span.end;
        });
        out.push_str(&self.source[cursor..]);
        out
    }
}

/// Borrowed view of one node in a [`JavaTree`].
#[derive(Clone, Copy)]
pub struct JavaNode<'t> {
    node: Node<'t>,
    source: &'t str,
}

impl fmt::Debug for JavaNode<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.kind(), self.span())
    }
}

impl PartialEq for JavaNode<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.node == other.node
    }
}

impl Eq for JavaNode<'_> {}

impl<'t> JavaNode<'t> {
    fn wrap(&self, node: Node<'t>) -> JavaNode<'t> {
        JavaNode { node, source: self.source }
    }

    pub fn kind(&self) -> &'t str {
        self.node.kind()
    }

    pub fn is_named(&self) -> bool {
        self.node.is_named()
    }

    pub fn is_comment(&self) -> bool {
        matches!(self.kind(), "line_comment" | "block_comment")
    }

    pub fn span(&self) -> SourceSpan {
        SourceSpan::new(self.node.start_byte(), self.node.end_byte())
    }

    pub fn text(&self) -> &'t str {
        &self.source[self.node.start_byte()..self.node.end_byte()]
    }

    /// 1-based line and column of the node start.
    pub fn position(&self) -> (usize, usize) {
        let p = self.node.start_position();
        (p.row + 1, p.column + 1)
    }

    /// All children, including anonymous punctuation tokens.
    pub fn children(&self) -> Vec<JavaNode<'t>> {
        let mut cursor = self.node.walk();
        self.node.children(&mut cursor).map(|n| self.wrap(n)).collect()
    }

    pub fn named_children(&self) -> Vec<JavaNode<'t>> {
        let mut cursor = self.node.walk();
        self.node.named_children(&mut cursor).map(|n| self.wrap(n)).collect()
    }

    /// Named children that are not comments.
    pub fn code_children(&self) -> Vec<JavaNode<'t>> {
        self.named_children().into_iter().filter(|n| !n.is_comment()).collect()
    }

    pub fn field(&self, name: &str) -> Option<JavaNode<'t>> {
        self.node.child_by_field_name(name).map(|n| self.wrap(n))
    }

    pub fn fields(&self, name: &str) -> Vec<JavaNode<'t>> {
        let mut cursor = self.node.walk();
        self.node
            .children_by_field_name(name, &mut cursor)
            .map(|n| self.wrap(n))
            .collect()
    }

    pub fn parent(&self) -> Option<JavaNode<'t>> {
        self.node.parent().map(|n| self.wrap(n))
    }

    pub fn prev_named_sibling(&self) -> Option<JavaNode<'t>> {
        self.node.prev_named_sibling().map(|n| self.wrap(n))
    }

    pub fn ancestors(&self) -> impl Iterator<Item = JavaNode<'t>> {
        let mut current = self.parent();
        std::iter::from_fn(move || {
            let node = current?;
            current = node.parent();
            Some(node)
        })
    }

    /// Named descendants in document order, excluding `self`.
    pub fn descendants(&self) -> Vec<JavaNode<'t>> {
        self.descendants_pruned(|_| false)
    }

    /// Named descendants in document order; the subtrees of nodes for which
    /// `prune` returns true are not entered (the pruned node itself is
    /// still yielded).
    pub fn descendants_pruned(&self, prune: impl Fn(&JavaNode<'t>) -> bool) -> Vec<JavaNode<'t>> {
        let mut out = Vec::new();
        let mut stack: Vec<JavaNode<'t>> = self.named_children().into_iter().rev().collect();
        while let Some(node) = stack.pop() {
            out.push(node);
            if !prune(&node) {
                stack.extend(node.named_children().into_iter().rev());
            }
        }
        out
    }

    pub fn for_each_leaf(&self, f: &mut impl FnMut(JavaNode<'t>)) {
        let children = self.children();
        if children.is_empty() {
            f(*self);
        } else {
            for child in children {
                child.for_each_leaf(f);
            }
        }
    }
}
