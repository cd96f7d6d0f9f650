//! DrawAllocation: objects allocated inside `onDraw(Canvas)` whose
//! constructor arguments cannot change between frames.
//!
//! The fix hoists the declaration to a field placed right before `onDraw`,
//! so the allocation runs once per view instead of once per frame.
//! Arguments must be literals, constants, or final fields initialized before
//! the hoisted field; anything else (parameters, locals, method calls,
//! mutable fields) keeps the allocation out of scope.

use std::collections::{BTreeMap, BTreeSet};

use super::ast::{
    declared_local_names, has_modifier, is_literal, is_method_named, name_of, parameter_type,
    parameters, same_scope_descendants, simple_type_name,
};
use super::format::{ends_line, indent_at, line_end, line_start, newline, next_line_start, starts_line};
use super::{Finding, RuleId, RuleResult};
use crate::syntax::{Edit, JavaNode, JavaTree, SourceSpan};

pub fn apply_draw_allocation(tree: &JavaTree) -> RuleResult {
    let mut findings = Vec::new();
    for method in tree.root().descendants() {
        if is_on_draw(&method) {
            inspect_on_draw(tree, &method, &mut findings);
        }
    }
    RuleResult::from_findings(findings)
}

fn is_on_draw(method: &JavaNode<'_>) -> bool {
    if !is_method_named(method, "onDraw") || method.parent().map(|p| p.kind()) != Some("class_body") {
        return false;
    }
    match parameters(method).as_deref() {
        Some([canvas]) => parameter_type(canvas).is_some_and(|t| simple_type_name(t) == "Canvas"),
        _ => false,
    }
}

#[derive(Debug)]
struct FieldInfo {
    is_static: bool,
    is_final: bool,
    initialized: bool,
    start: usize,
}

fn class_fields(class_body: &JavaNode<'_>) -> BTreeMap<String, FieldInfo> {
    let mut fields = BTreeMap::new();
    for member in class_body.code_children() {
        if member.kind() != "field_declaration" {
            continue;
        }
        let is_static = has_modifier(&member, "static");
        let is_final = has_modifier(&member, "final");
        for declarator in member.fields("declarator") {
            if let Some(name) = name_of(&declarator) {
                fields.insert(
                    name.to_owned(),
                    FieldInfo {
                        is_static,
                        is_final,
                        initialized: declarator.field("value").is_some(),
                        start: member.span().start,
                    },
                );
            }
        }
    }
    fields
}

struct Scope<'a> {
    locals: BTreeSet<&'a str>,
    fields: BTreeMap<String, FieldInfo>,
    on_draw_start: usize,
}

impl Scope<'_> {
    /// A field whose value is fixed by the time a field declared right
    /// before `onDraw` is initialized.
    fn is_stable_field(&self, name: &str) -> bool {
        match self.fields.get(name) {
            Some(f) if f.is_static && f.is_final => true,
            Some(f) => f.is_final && f.initialized && f.start < self.on_draw_start,
            None => false,
        }
    }

    fn is_invariant(&self, expr: &JavaNode<'_>) -> bool {
        if is_literal(expr) {
            return true;
        }
        match expr.kind() {
            "identifier" => !self.locals.contains(expr.text()) && self.is_stable_field(expr.text()),
            "parenthesized_expression" | "unary_expression" | "binary_expression" | "ternary_expression" => {
                expr.code_children().iter().all(|c| self.is_invariant(c))
            }
            "cast_expression" => expr.field("value").is_some_and(|v| self.is_invariant(&v)),
            "field_access" => self.is_constant_access(expr),
            _ => false,
        }
    }

    /// `this.FIELD`, or a dotted constant such as `Color.RED` or
    /// `Paint.Style.FILL` rooted at a type name.
    fn is_constant_access(&self, expr: &JavaNode<'_>) -> bool {
        let (Some(object), Some(field)) = (expr.field("object"), expr.field("field")) else {
            return false;
        };
        if object.kind() == "this" {
            return self.is_stable_field(field.text());
        }
        let looks_constant = |s: &str| {
            s.chars().any(|c| c.is_ascii_uppercase())
                && s.chars().all(|c| c.is_ascii_uppercase() || c.is_ascii_digit() || c == '_')
        };
        if !looks_constant(field.text()) {
            return false;
        }
        let mut root = object;
        loop {
            match root.kind() {
                "field_access" => match root.field("object") {
                    Some(o) => root = o,
                    None => return false,
                },
                "identifier" => break,
                _ => return false,
            }
        }
        let name = root.text();
        !self.locals.contains(name)
            && !self.fields.contains_key(name)
            && name.starts_with(|c: char| c.is_ascii_uppercase())
    }
}

fn inspect_on_draw(tree: &JavaTree, method: &JavaNode<'_>, findings: &mut Vec<Finding>) {
    let src = tree.source();
    let Some(class_body) = method.parent() else { return };
    let Some(body) = method.field("body") else { return };
    let Some(canvas_name) = parameters(method).and_then(|p| p.first().and_then(name_of)) else { return };
    let scope = Scope {
        locals: declared_local_names(method),
        fields: class_fields(&class_body),
        on_draw_start: method.span().start,
    };
    let scope_nodes = same_scope_descendants(&body);
    // Names used elsewhere in the class; a hoisted field must not capture them.
    let outside_names: BTreeSet<&str> = class_body
        .descendants()
        .into_iter()
        .filter(|n| !method.span().contains(n.span()))
        .filter(|n| n.kind() == "identifier")
        .map(|n| n.text())
        .collect();
    let mut hoisted: BTreeSet<&str> = BTreeSet::new();
    let mut pending = Vec::new();

    for decl in scope_nodes.iter().filter(|n| n.kind() == "local_variable_declaration") {
        let declarators = decl.fields("declarator");
        let [declarator] = declarators.as_slice() else { continue };
        let Some(value) = declarator.field("value") else { continue };
        if value.kind() != "object_creation_expression" {
            continue;
        }
        if value.code_children().iter().any(|c| c.kind() == "class_body") {
            continue;
        }
        let args = value.field("arguments").map(|a| a.code_children()).unwrap_or_default();
        if !args.iter().all(|a| scope.is_invariant(a)) {
            continue;
        }
        let Some(name) = name_of(declarator) else { continue };
        let type_name = value.field("type").map(|t| t.text()).unwrap_or("object");
        let message = format!("`new {type_name}(..)` runs on every frame in `onDraw`; allocate `{name}` once as a field");
        let finding = Finding::new(RuleId::DrawAllocation, tree.path(), src, value.span(), message);

        let hoistable = decl.field("type").is_some_and(|t| t.text() != "var")
            && declarator.field("dimensions").is_none()
            && !scope.fields.contains_key(name)
            && !outside_names.contains(name)
            && hoisted.insert(name)
            && only_local_uses(&scope_nodes, declarator, name, canvas_name)
            && starts_line(src, decl.span().start)
            && ends_line(src, decl.span().end);
        if hoistable {
            pending.push((finding, *decl));
        } else {
            findings.push(finding);
        }
    }
    if pending.is_empty() {
        return;
    }

    let anchor = method.span().start;
    if !starts_line(src, anchor) {
        findings.extend(pending.into_iter().map(|(f, _)| f));
        return;
    }
    let nl = newline(src);
    let member_indent = indent_at(src, anchor);
    let insert_at = line_start(src, member_indent_anchor(src, method));
    for (finding, decl) in pending {
        let span = decl.span();
        let moved = src[span.start..line_end(src, span.end)].trim_end();
        let fix = vec![
            Edit::insert(insert_at, format!("{member_indent}{moved}{nl}")),
            Edit::delete(SourceSpan::new(line_start(src, span.start), next_line_start(src, span.end))),
        ];
        findings.push(finding.with_fix(fix));
    }
}

/// Start of `onDraw` including comments attached directly above it.
fn member_indent_anchor(src: &str, method: &JavaNode<'_>) -> usize {
    let mut anchor = method.span().start;
    let mut prev = method.prev_named_sibling();
    while let Some(p) = prev {
        if p.is_comment() && starts_line(src, p.span().start) && src[p.span().end..anchor].trim().is_empty() {
            anchor = p.span().start;
            prev = p.prev_named_sibling();
        } else {
            break;
        }
    }
    anchor
}

/// The allocated object is only used as a call receiver or handed to a
/// `Canvas` draw call, and the variable is never reassigned, so one shared
/// instance behaves like a fresh one per frame.
fn only_local_uses(scope_nodes: &[JavaNode<'_>], declarator: &JavaNode<'_>, name: &str, canvas: &str) -> bool {
    let declared_name = declarator.field("name").map(|n| n.span());
    scope_nodes
        .iter()
        .filter(|n| n.kind() == "identifier" && n.text() == name && Some(n.span()) != declared_name)
        .all(|use_site| {
            let Some(parent) = use_site.parent() else { return false };
            match parent.kind() {
                "method_invocation" => parent.field("object").is_some_and(|o| o == *use_site),
                "argument_list" => parent
                    .parent()
                    .filter(|call| call.kind() == "method_invocation")
                    .and_then(|call| call.field("object"))
                    .is_some_and(|o| o.kind() == "identifier" && o.text() == canvas),
                "field_access" => parent.field("object").is_some_and(|o| o == *use_site),
                "binary_expression" => true,
                _ => false,
            }
        })
        && !scope_nodes
            .iter()
            .any(|n| n.kind() == "variable_declarator" && n != declarator && name_of(n) == Some(name))
}
