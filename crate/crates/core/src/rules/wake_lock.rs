//! WakeLock: activities that acquire a wake lock in a lifecycle callback
//! and never release it in `onPause`.

use std::collections::BTreeSet;

use super::ast::{
    declared_local_names, invocation_args, invocation_name, is_method_named, name_of, parameters,
    receiver_name, same_scope_descendants, simple_type_name,
};
use super::format::{indent_at, indent_unit, is_blank_line, line_start, newline, render_lines, starts_line};
use super::{Finding, RuleId, RuleResult};
use crate::syntax::{Edit, JavaNode, JavaTree};

/// Lifecycle callbacks in which an acquired wake lock is expected to be
/// released again by `onPause`.
const LIFECYCLE_METHODS: [&str; 6] =
    ["onCreate", "onStart", "onRestart", "onResume", "onPostCreate", "onPostResume"];

/// Condition emitted in front of `release()`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum WakeLockGuard {
    /// `wl != null && wl.isHeld()`: release only a lock that is held.
    #[default]
    Held,
    /// `wl != null && !wl.isHeld()`, exactly as in the published fix listing.
    PaperFaithful,
}

impl WakeLockGuard {
    fn condition(self, field: &str) -> String {
        match self {
            WakeLockGuard::Held => format!("{field} != null && {field}.isHeld()"),
            WakeLockGuard::PaperFaithful => format!("{field} != null && !{field}.isHeld()"),
        }
    }
}

pub fn apply_wake_lock(tree: &JavaTree, guard: WakeLockGuard) -> RuleResult {
    let findings = tree
        .root()
        .descendants()
        .into_iter()
        .filter(|n| n.kind() == "class_declaration" && extends_activity(n))
        .filter_map(|class| inspect(tree, &class, guard))
        .collect();
    RuleResult::from_findings(findings)
}

fn extends_activity(class: &JavaNode<'_>) -> bool {
    class
        .field("superclass")
        .and_then(|s| s.code_children().into_iter().next())
        .is_some_and(|t| simple_type_name(t.text()).ends_with("Activity"))
}

fn calls_on<'t>(scope: &[JavaNode<'t>], method: &str, receiver: &str) -> Vec<JavaNode<'t>> {
    scope
        .iter()
        .filter(|n| invocation_name(n) == Some(method) && receiver_name(n) == Some(receiver))
        .copied()
        .collect()
}

fn inspect(tree: &JavaTree, class: &JavaNode<'_>, guard: WakeLockGuard) -> Option<Finding> {
    let src = tree.source();
    let body = class.field("body")?;
    let members = body.code_children();
    let lock_fields: BTreeSet<&str> = members
        .iter()
        .filter(|m| m.kind() == "field_declaration")
        .filter(|m| m.field("type").is_some_and(|t| simple_type_name(t.text()) == "WakeLock"))
        .flat_map(|m| m.fields("declarator"))
        .filter_map(|d| name_of(&d))
        .collect();
    let lifecycle: Vec<JavaNode<'_>> = members
        .iter()
        .filter(|m| LIFECYCLE_METHODS.iter().any(|name| is_method_named(m, name)))
        .copied()
        .collect();
    let on_pause = members
        .iter()
        .find(|m| is_method_named(m, "onPause") && parameters(m).is_some_and(|p| p.is_empty()))
        .copied();
    let pause_scope = on_pause
        .and_then(|m| m.field("body"))
        .map(|b| same_scope_descendants(&b))
        .unwrap_or_default();

    // (field, first acquire() call) in document order
    let mut acquired: Vec<(&str, JavaNode<'_>)> = Vec::new();
    let mut local_acquire: Option<(&str, JavaNode<'_>)> = None;
    for method in &lifecycle {
        let Some(method_body) = method.field("body") else { continue };
        let scope = same_scope_descendants(&method_body);
        let locals = declared_local_names(method);
        for call in scope.iter().filter(|n| invocation_name(n) == Some("acquire") && invocation_args(n).is_empty()) {
            let Some(name) = receiver_name(call) else { continue };
            let via_this = call.field("object").is_some_and(|o| o.kind() == "field_access");
            if lock_fields.contains(name) && (via_this || !locals.contains(name)) {
                if !acquired.iter().any(|(f, _)| *f == name) {
                    acquired.push((name, *call));
                }
            } else if local_acquire.is_none() && is_local_wake_lock(&scope, name) {
                local_acquire = Some((name, *call));
            }
        }
    }

    let pending: Vec<(&str, JavaNode<'_>)> = acquired
        .into_iter()
        .filter(|(field, _)| calls_on(&pause_scope, "release", field).is_empty())
        .collect();

    if pending.is_empty() {
        let (name, call) = local_acquire?;
        let class_scope = body.descendants();
        if !calls_on(&class_scope, "release", name).is_empty() {
            return None;
        }
        let message = format!("wake lock `{name}` is acquired through a local variable and never released");
        return Some(Finding::new(RuleId::WakeLock, tree.path(), src, call.span(), message));
    }

    let names: Vec<&str> = pending.iter().map(|(f, _)| *f).collect();
    let message = format!(
        "wake lock `{}` is acquired but not released in `onPause`",
        names.join("`, `")
    );
    let finding = Finding::new(RuleId::WakeLock, tree.path(), src, pending[0].1.span(), message);
    let fix = match on_pause {
        None => append_on_pause(src, class, &body, &members, &names, guard),
        Some(method) => extend_on_pause(src, &method, &names, guard),
    };
    Some(finding.with_fix(fix.unwrap_or_default()))
}

fn is_local_wake_lock(scope: &[JavaNode<'_>], name: &str) -> bool {
    scope.iter().any(|n| {
        n.kind() == "local_variable_declaration"
            && n.field("type").is_some_and(|t| simple_type_name(t.text()) == "WakeLock")
            && n.fields("declarator").iter().any(|d| name_of(d) == Some(name))
    })
}

fn guard_lines(indent: &str, unit: &str, fields: &[&str], guard: WakeLockGuard) -> Vec<String> {
    fields
        .iter()
        .flat_map(|f| {
            [
                format!("{indent}if ({}) {{", guard.condition(f)),
                format!("{indent}{unit}{f}.release();"),
                format!("{indent}}}"),
            ]
        })
        .collect()
}

fn append_on_pause(
    src: &str,
    class: &JavaNode<'_>,
    body: &JavaNode<'_>,
    members: &[JavaNode<'_>],
    fields: &[&str],
    guard: WakeLockGuard,
) -> Option<Vec<Edit>> {
    let close = body.children().into_iter().last().filter(|c| c.kind() == "}")?;
    if !starts_line(src, close.span().start) {
        return None;
    }
    let class_indent = indent_at(src, class.span().start);
    let member_indent = members
        .iter()
        .find(|m| starts_line(src, m.span().start))
        .map(|m| indent_at(src, m.span().start).to_owned())
        .unwrap_or_else(|| format!("{class_indent}{}", indent_unit(src, class_indent, class_indent)));
    let unit = indent_unit(src, class_indent, &member_indent);
    let inner = format!("{member_indent}{unit}");

    let insert_at = line_start(src, close.span().start);
    let mut lines = Vec::new();
    let previous_line_blank = insert_at > 0 && is_blank_line(src, line_start(src, insert_at - 1));
    if !members.is_empty() && !previous_line_blank {
        lines.push(String::new());
    }
    lines.push(format!("{member_indent}@Override"));
    lines.push(format!("{member_indent}protected void onPause() {{"));
    lines.push(format!("{inner}super.onPause();"));
    lines.extend(guard_lines(&inner, &unit, fields, guard));
    lines.push(format!("{member_indent}}}"));
    Some(vec![Edit::insert(insert_at, render_lines(&lines, newline(src)))])
}

fn extend_on_pause(src: &str, method: &JavaNode<'_>, fields: &[&str], guard: WakeLockGuard) -> Option<Vec<Edit>> {
    let body = method.field("body")?;
    let locals = declared_local_names(method);
    if fields.iter().any(|f| locals.contains(f)) {
        return None;
    }
    let statements = body.code_children();
    let close = body.children().into_iter().last().filter(|c| c.kind() == "}")?;
    let method_indent = indent_at(src, method.span().start);
    let indent = match statements.first() {
        Some(s) if starts_line(src, s.span().start) => indent_at(src, s.span().start).to_owned(),
        Some(_) => return None,
        None => format!("{method_indent}{}", indent_unit(src, method_indent, method_indent)),
    };
    let unit = indent_unit(src, method_indent, &indent);
    let anchor = match statements.last() {
        Some(last) if last.kind() == "return_statement" => last.span().start,
        _ => close.span().start,
    };
    if !starts_line(src, anchor) {
        return None;
    }
    let lines = guard_lines(&indent, &unit, fields, guard);
    Some(vec![Edit::insert(line_start(src, anchor), render_lines(&lines, newline(src)))])
}
