//! Small syntactic queries over the Java tree shared by the rules.

use std::collections::BTreeSet;

use crate::syntax::JavaNode;

/// Last dotted segment of a type, without type arguments or array dims:
/// `android.os.PowerManager.WakeLock` and `List<String>[]` give `WakeLock`
/// and `List`.
pub(crate) fn simple_type_name(type_text: &str) -> &str {
    let base = type_text.split('<').next().unwrap_or(type_text);
    let base = base.trim_end_matches(|c: char| c == '[' || c == ']' || c.is_whitespace());
    base.rsplit('.').next().unwrap_or(base).trim()
}

pub(crate) fn name_of<'t>(node: &JavaNode<'t>) -> Option<&'t str> {
    node.field("name").map(|n| n.text())
}

pub(crate) fn is_method_named(node: &JavaNode<'_>, name: &str) -> bool {
    node.kind() == "method_declaration" && name_of(node) == Some(name)
}

/// Formal parameters of a method or constructor. Returns `None` for
/// receiver or varargs parameters so callers can bail out.
pub(crate) fn parameters<'t>(method: &JavaNode<'t>) -> Option<Vec<JavaNode<'t>>> {
    let params = method.field("parameters")?.code_children();
    params.iter().all(|p| p.kind() == "formal_parameter").then_some(params)
}

pub(crate) fn parameter_type<'t>(param: &JavaNode<'t>) -> Option<&'t str> {
    param.field("type").map(|t| t.text())
}

/// Removes redundant parentheses and casts around an expression.
pub(crate) fn strip_parens_and_casts<'t>(mut node: JavaNode<'t>) -> JavaNode<'t> {
    loop {
        match node.kind() {
            "parenthesized_expression" => match node.code_children().into_iter().next() {
                Some(inner) => node = inner,
                None => return node,
            },
            "cast_expression" => match node.field("value") {
                Some(inner) => node = inner,
                None => return node,
            },
            _ => return node,
        }
    }
}

pub(crate) fn invocation_name<'t>(node: &JavaNode<'t>) -> Option<&'t str> {
    (node.kind() == "method_invocation").then(|| name_of(node)).flatten()
}

pub(crate) fn invocation_args<'t>(node: &JavaNode<'t>) -> Vec<JavaNode<'t>> {
    node.field("arguments").map(|a| a.code_children()).unwrap_or_default()
}

/// Receiver of a method invocation written as a bare name or `this.name`.
pub(crate) fn receiver_name<'t>(invocation: &JavaNode<'t>) -> Option<&'t str> {
    let object = invocation.field("object")?;
    simple_or_this_name(&object)
}

pub(crate) fn simple_or_this_name<'t>(node: &JavaNode<'t>) -> Option<&'t str> {
    match node.kind() {
        "identifier" => Some(node.text()),
        "field_access" if node.field("object")?.kind() == "this" => {
            node.field("field").map(|f| f.text())
        }
        _ => None,
    }
}

/// Whether an identifier names a member (`x.name`, `x.name()`) rather than
/// referring to a variable.
pub(crate) fn is_member_name(node: &JavaNode<'_>) -> bool {
    let Some(parent) = node.parent() else { return false };
    match parent.kind() {
        "method_invocation" => parent.field("name").is_some_and(|n| n == *node),
        "field_access" => parent.field("field").is_some_and(|n| n == *node),
        _ => false,
    }
}

/// Nodes that open a new class body or deferred-execution scope.
pub(crate) fn opens_nested_scope(node: &JavaNode<'_>) -> bool {
    matches!(
        node.kind(),
        "class_body" | "interface_body" | "enum_body" | "lambda_expression" | "record_declaration"
    )
}

/// Named descendants of `node` that belong to the same method body: nested
/// class bodies and lambdas are not entered.
pub(crate) fn same_scope_descendants<'t>(node: &JavaNode<'t>) -> Vec<JavaNode<'t>> {
    node.descendants_pruned(opens_nested_scope)
        .into_iter()
        .filter(|n| !opens_nested_scope(n))
        .collect()
}

/// Every identifier and type name spelled anywhere below `node`.
pub(crate) fn spelled_names<'t>(node: &JavaNode<'t>) -> BTreeSet<&'t str> {
    node.descendants()
        .into_iter()
        .filter(|n| matches!(n.kind(), "identifier" | "type_identifier"))
        .map(|n| n.text())
        .collect()
}

/// Names introduced as locals anywhere below `node`: variables, lambda and
/// catch parameters, loop variables, resources, pattern bindings.
pub(crate) fn declared_local_names<'t>(node: &JavaNode<'t>) -> BTreeSet<&'t str> {
    let mut names = BTreeSet::new();
    for n in node.descendants() {
        match n.kind() {
            "variable_declarator" if n.parent().is_some_and(|p| p.kind() == "local_variable_declaration") => {
                names.extend(name_of(&n));
            }
            "formal_parameter" | "catch_formal_parameter" | "resource" | "enhanced_for_statement"
            | "spread_parameter" => {
                names.extend(name_of(&n));
            }
            "lambda_expression" => {
                if let Some(params) = n.field("parameters") {
                    if params.kind() == "identifier" {
                        names.insert(params.text());
                    } else {
                        for p in params.descendants() {
                            if p.kind() == "identifier" && p.parent().is_some_and(|pp| pp == params || pp.kind() == "formal_parameter") {
                                names.insert(p.text());
                            }
                        }
                    }
                }
            }
            "type_pattern" | "record_pattern_component" => {
                names.extend(n.code_children().into_iter().filter(|c| c.kind() == "identifier").map(|c| c.text()));
            }
            _ => {}
        }
    }
    names
}

/// Whether `node` carries `modifier` (e.g. `static`, `final`).
pub(crate) fn has_modifier(node: &JavaNode<'_>, modifier: &str) -> bool {
    node.named_children()
        .iter()
        .find(|c| c.kind() == "modifiers")
        .is_some_and(|m| m.children().iter().any(|t| t.kind() == modifier))
}

/// Whether the class body may declare a static member type under Java 8
/// rules: every enclosing class must be top level, static, or implicitly
/// static (interfaces, enums, records, members of interfaces).
pub(crate) fn allows_static_member_type(class_body: &JavaNode<'_>) -> bool {
    let Some(mut decl) = class_body.parent() else { return false };
    loop {
        if !matches!(
            decl.kind(),
            "class_declaration" | "interface_declaration" | "enum_declaration" | "record_declaration"
        ) {
            // anonymous class
            return false;
        }
        let Some(mut container) = decl.parent() else { return false };
        if container.kind() == "enum_body_declarations" {
            let Some(p) = container.parent() else { return false };
            container = p;
        }
        match container.kind() {
            "program" => return true,
            "class_body" | "interface_body" | "enum_body" => {
                let implicitly_static =
                    decl.kind() != "class_declaration" || container.kind() == "interface_body";
                if !implicitly_static && !has_modifier(&decl, "static") {
                    return false;
                }
                let Some(outer) = container.parent() else { return false };
                decl = outer;
            }
            // local class
            _ => return false,
        }
    }
}

pub(crate) fn is_literal(node: &JavaNode<'_>) -> bool {
    matches!(
        node.kind(),
        "decimal_integer_literal"
            | "hex_integer_literal"
            | "octal_integer_literal"
            | "binary_integer_literal"
            | "decimal_floating_point_literal"
            | "hex_floating_point_literal"
            | "string_literal"
            | "character_literal"
            | "true"
            | "false"
            | "null_literal"
    )
}
