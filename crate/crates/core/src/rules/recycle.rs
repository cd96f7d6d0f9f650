//! Recycle: pooled resources (`TypedArray`, `MotionEvent`, `Cursor`, ...)
//! obtained into a local and never given back.
//!
//! A textual `var.recycle()` / `var.close()` anywhere in the enclosing
//! method counts as a release. The fix appends a null-guarded release at the
//! end of the block that declares the variable, and is only offered when
//! the variable provably stays inside the method.

use super::ast::{
    declared_local_names, invocation_name, is_member_name, name_of, receiver_name, same_scope_descendants, simple_type_name,
    strip_parens_and_casts,
};
use super::format::{indent_at, indent_unit, line_start, newline, render_lines, starts_line};
use super::{Finding, RuleId, RuleResult};
use crate::syntax::{Edit, JavaNode, JavaTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReleaseMethod {
    Recycle,
    Close,
}

impl ReleaseMethod {
    pub fn name(self) -> &'static str {
        match self {
            ReleaseMethod::Recycle => "recycle",
            ReleaseMethod::Close => "close",
        }
    }
}

/// A call that hands out a resource which must be released.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecyclableFactory {
    /// Invoked method name, e.g. `obtainStyledAttributes`.
    pub method: String,
    /// Required receiver type name for static factories (`MotionEvent` in
    /// `MotionEvent.obtain(..)`); `None` accepts any receiver.
    pub receiver: Option<String>,
    /// Required declared type of the local; `None` accepts any.
    pub declared_type: Option<String>,
    pub release: ReleaseMethod,
}

impl RecyclableFactory {
    pub fn new(method: &str, receiver: Option<&str>, declared_type: Option<&str>, release: ReleaseMethod) -> Self {
        Self {
            method: method.to_owned(),
            receiver: receiver.map(str::to_owned),
            declared_type: declared_type.map(str::to_owned),
            release,
        }
    }

    /// TypedArray, MotionEvent, VelocityTracker, Parcel and Cursor.
    pub fn defaults() -> Vec<Self> {
        use ReleaseMethod::*;
        vec![
            Self::new("obtainStyledAttributes", None, None, Recycle),
            Self::new("obtain", Some("MotionEvent"), None, Recycle),
            Self::new("obtain", Some("VelocityTracker"), None, Recycle),
            Self::new("obtain", Some("Parcel"), None, Recycle),
            Self::new("query", None, Some("Cursor"), Close),
        ]
    }

    fn matches(&self, call: &JavaNode<'_>, declared_type: &str) -> bool {
        if invocation_name(call) != Some(self.method.as_str()) {
            return false;
        }
        if let Some(receiver) = &self.receiver {
            let object = call.field("object").map(|o| simple_type_name(o.text()).to_owned());
            if object.as_deref() != Some(receiver.as_str()) {
                return false;
            }
        }
        match &self.declared_type {
            Some(t) => simple_type_name(declared_type) == t,
            None => true,
        }
    }
}

pub fn apply_recycle(tree: &JavaTree, factories: &[RecyclableFactory]) -> RuleResult {
    let mut findings = Vec::new();
    for decl in tree.root().descendants() {
        if decl.kind() != "local_variable_declaration" {
            continue;
        }
        let Some(callable) = enclosing_callable(&decl) else { continue };
        let declared_type = decl.field("type").map(|t| t.text()).unwrap_or("");
        for declarator in decl.fields("declarator") {
            let Some(value) = declarator.field("value") else { continue };
            let call = strip_parens_and_casts(value);
            let Some(factory) = factories.iter().find(|f| f.matches(&call, declared_type)) else { continue };
            let Some(name) = name_of(&declarator) else { continue };
            if let Some(f) = inspect(tree, &decl, &declarator, &callable, &call, name, factory.release) {
                findings.push(f);
            }
        }
    }
    RuleResult::from_findings(findings)
}

/// Nearest method, constructor, lambda or initializer body owning `node`.
fn enclosing_callable<'t>(node: &JavaNode<'t>) -> Option<JavaNode<'t>> {
    for a in node.ancestors() {
        match a.kind() {
            "method_declaration" | "constructor_declaration" | "lambda_expression" | "static_initializer" => {
                return Some(a)
            }
            "block" if a.parent().is_some_and(|p| p.kind() == "class_body") => return Some(a),
            "class_body" | "interface_body" | "enum_body" => return None,
            _ => {}
        }
    }
    None
}

fn inspect(
    tree: &JavaTree,
    decl: &JavaNode<'_>,
    declarator: &JavaNode<'_>,
    callable: &JavaNode<'_>,
    call: &JavaNode<'_>,
    name: &str,
    release: ReleaseMethod,
) -> Option<Finding> {
    let src = tree.source();
    let scope = same_scope_descendants(callable);
    let released = scope
        .iter()
        .any(|n| invocation_name(n) == Some(release.name()) && receiver_name(n) == Some(name));
    if released {
        return None;
    }
    let escapes = match escape(callable, declarator, name) {
        Escape::Stays => false,
        // The caller or the object now owns the resource.
        Escape::Transferred => return None,
        Escape::Unknown => true,
    };
    let factory_name = invocation_name(call).unwrap_or("factory");
    let message = if escapes {
        format!("`{name}` from `{factory_name}(..)` is never released here and may leave the method; release it where it is last used")
    } else {
        format!("`{name}` from `{factory_name}(..)` is never released; call `{name}.{}()` when done", release.name())
    };
    let finding = Finding::new(RuleId::Recycle, tree.path(), src, call.span(), message);
    if escapes {
        return Some(finding);
    }
    let fix = build_fix(src, decl, name, release);
    Some(finding.with_fix(fix.unwrap_or_default()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Escape {
    /// Only used as a call receiver or in a null comparison.
    Stays,
    /// Returned, or stored in a field, and otherwise staying.
    Transferred,
    /// Passed along, aliased, captured by a lambda or nested class, or
    /// shadowed by a second declaration of the same name.
    Unknown,
}

fn escape(callable: &JavaNode<'_>, declarator: &JavaNode<'_>, name: &str) -> Escape {
    let declared_name = declarator.field("name").map(|n| n.span());
    let locals = declared_local_names(callable);
    let mut worst = Escape::Stays;
    for node in callable.descendants() {
        if node.kind() == "variable_declarator" && node != *declarator && name_of(&node) == Some(name) {
            return Escape::Unknown;
        }
        if node.kind() != "identifier" || node.text() != name || Some(node.span()) == declared_name {
            continue;
        }
        let Some(parent) = node.parent() else { return Escape::Unknown };
        if is_member_name(&node) {
            continue;
        }
        let nested = node
            .ancestors()
            .take_while(|a| a != callable)
            .any(|a| super::ast::opens_nested_scope(&a));
        if nested {
            return Escape::Unknown;
        }
        let use_kind = match parent.kind() {
            "method_invocation" if parent.field("object").is_some_and(|o| o == node) => Escape::Stays,
            "binary_expression"
                if matches!(parent.field("operator").map(|o| o.text()), Some("==" | "!="))
                    && parent.code_children().iter().any(|c| c.kind() == "null_literal") =>
            {
                Escape::Stays
            }
            "return_statement" => Escape::Transferred,
            "assignment_expression"
                if parent.field("right").is_some_and(|r| r == node)
                    && parent.field("operator").map(|o| o.text()) == Some("=")
                    && parent.field("left").is_some_and(|l| is_field_target(&l, &locals)) =>
            {
                Escape::Transferred
            }
            _ => Escape::Unknown,
        };
        if use_kind == Escape::Unknown {
            return Escape::Unknown;
        }
        worst = worst.max(use_kind);
    }
    worst
}

/// `this.f = ..`, or `f = ..` where `f` is not a local of the method.
fn is_field_target(left: &JavaNode<'_>, locals: &std::collections::BTreeSet<&str>) -> bool {
    match left.kind() {
        "identifier" => !locals.contains(left.text()),
        "field_access" => left.field("object").is_some_and(|o| o.kind() == "this"),
        _ => false,
    }
}

fn is_exit(node: &JavaNode<'_>) -> bool {
    matches!(
        node.kind(),
        "return_statement" | "throw_statement" | "break_statement" | "continue_statement" | "yield_statement"
    )
}

fn never_completes(node: &JavaNode<'_>) -> bool {
    match node.kind() {
        "while_statement" => node
            .field("condition")
            .is_some_and(|c| strip_parens_and_casts(c).kind() == "true"),
        "for_statement" => node.field("condition").is_none(),
        _ => false,
    }
}

fn build_fix(src: &str, decl: &JavaNode<'_>, name: &str, release: ReleaseMethod) -> Option<Vec<Edit>> {
    let block = decl.parent().filter(|p| matches!(p.kind(), "block" | "constructor_body"))?;
    let statements = block.code_children();
    let close = block.children().into_iter().last().filter(|c| c.kind() == "}")?;
    let anchor = match statements.last() {
        Some(last) if is_exit(last) => {
            let mentions = last
                .descendants()
                .iter()
                .any(|n| n.kind() == "identifier" && n.text() == name);
            if mentions {
                return None;
            }
            last.span().start
        }
        Some(last) if never_completes(last) => return None,
        _ => close.span().start,
    };
    if !starts_line(src, anchor) || !starts_line(src, decl.span().start) {
        return None;
    }
    let indent = indent_at(src, decl.span().start);
    let block_indent = indent_at(src, block.span().start);
    let unit = indent_unit(src, block_indent, indent);
    let lines = [
        format!("{indent}if ({name} != null) {{"),
        format!("{indent}{unit}{name}.{}();", release.name()),
        format!("{indent}}}"),
    ];
    Some(vec![Edit::insert(line_start(src, anchor), render_lines(&lines, newline(src)))])
}
