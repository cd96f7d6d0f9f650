//! ViewHolder: adapters whose `getView` inflates a fresh row and looks its
//! views up with `findViewById` on every call.
//!
//! The fix caches the looked-up views in a private static holder class
//! stored as the row's tag, so inflation and lookups only happen when the
//! list hands in no recycled `convertView`.

use std::collections::BTreeSet;

use super::ast::{
    allows_static_member_type, invocation_args, invocation_name, is_member_name, name_of, parameter_type,
    parameters, simple_type_name, spelled_names, strip_parens_and_casts,
};
use super::format::{
    ends_line, indent_at, indent_unit, is_blank_line, line_start, newline, next_line_start,
    render_lines, starts_line,
};
use super::{Finding, RuleId, RuleResult};
use crate::syntax::{Edit, JavaNode, JavaTree, SourceSpan};

const HOLDER_CLASS: &str = "ViewHolderItem";

pub fn apply_view_holder(tree: &JavaTree) -> RuleResult {
    let root = tree.root();
    let mut taken: BTreeSet<String> = spelled_names(&root).into_iter().map(str::to_owned).collect();
    let findings = root
        .descendants()
        .into_iter()
        .filter(|n| super::ast::is_method_named(n, "getView"))
        .filter_map(|m| inspect(tree, &m, &mut taken))
        .collect();
    RuleResult::from_findings(findings)
}

/// A `final TextView t = (TextView) convertView.findViewById(..);` line.
struct CachedView<'t> {
    statement: JavaNode<'t>,
    name: &'t str,
    type_text: &'t str,
    value: JavaNode<'t>,
}

fn inspect(tree: &JavaTree, method: &JavaNode<'_>, taken: &mut BTreeSet<String>) -> Option<Finding> {
    let src = tree.source();
    let params = parameters(method)?;
    let [position, convert, parent] = params.as_slice() else { return None };
    if parameter_type(position)? != "int"
        || simple_type_name(parameter_type(convert)?) != "View"
        || simple_type_name(parameter_type(parent)?) != "ViewGroup"
    {
        return None;
    }
    let convert_name = name_of(convert)?;
    let body = method.field("body")?;
    if tests_for_null(&body, convert_name) {
        return None;
    }

    let statements = body.code_children();
    let inflate_index = statements.iter().position(|s| is_inflate_assignment(s, convert_name))?;
    if !statements.iter().any(initializes_local_from_lookup) {
        return None;
    }
    let cached: Vec<CachedView<'_>> = statements[inflate_index + 1..]
        .iter()
        .map_while(|s| cached_view(s, convert_name))
        .collect();

    let message = format!(
        "`getView` inflates `{convert_name}` and calls findViewById on every call; cache the views in a view holder"
    );
    let finding = Finding::new(RuleId::ViewHolder, tree.path(), src, method.span(), message);
    let fix = build_fix(src, method, &statements[inflate_index], &cached, convert_name, taken);
    Some(finding.with_fix(fix.unwrap_or_default()))
}

fn tests_for_null(body: &JavaNode<'_>, name: &str) -> bool {
    body.descendants().iter().any(|n| {
        if n.kind() != "binary_expression" {
            return false;
        }
        let op = n.field("operator").map(|o| o.text());
        if !matches!(op, Some("==" | "!=")) {
            return false;
        }
        let (Some(l), Some(r)) = (n.field("left"), n.field("right")) else { return false };
        let is = |a: &JavaNode<'_>, b: &JavaNode<'_>| {
            strip_parens_and_casts(*a).text() == name && b.kind() == "null_literal"
        };
        is(&l, &r) || is(&r, &l)
    })
}

fn is_inflate_assignment(statement: &JavaNode<'_>, convert: &str) -> bool {
    if statement.kind() != "expression_statement" {
        return false;
    }
    let Some(assign) = statement.code_children().into_iter().next() else { return false };
    assign.kind() == "assignment_expression"
        && assign.field("operator").map(|o| o.text()) == Some("=")
        && assign.field("left").is_some_and(|l| l.kind() == "identifier" && l.text() == convert)
        && assign
            .field("right")
            .is_some_and(|r| invocation_name(&strip_parens_and_casts(r)) == Some("inflate"))
}

fn initializes_local_from_lookup(statement: &JavaNode<'_>) -> bool {
    statement.kind() == "local_variable_declaration"
        && statement.fields("declarator").iter().any(|d| {
            d.field("value").is_some_and(|v| {
                std::iter::once(v)
                    .chain(v.descendants())
                    .any(|n| invocation_name(&n) == Some("findViewById"))
            })
        })
}

fn cached_view<'t>(statement: &JavaNode<'t>, convert: &str) -> Option<CachedView<'t>> {
    if statement.kind() != "local_variable_declaration" {
        return None;
    }
    let declarators = statement.fields("declarator");
    let [declarator] = declarators.as_slice() else { return None };
    if declarator.field("dimensions").is_some() {
        return None;
    }
    let value = declarator.field("value")?;
    let call = strip_parens_and_casts(value);
    if invocation_name(&call) != Some("findViewById")
        || call.field("object").map(|o| o.text()) != Some(convert)
    {
        return None;
    }
    Some(CachedView {
        statement: *statement,
        name: name_of(declarator)?,
        type_text: statement.field("type")?.text(),
        value,
    })
}

fn fresh_names(taken: &mut BTreeSet<String>) -> (String, String) {
    let mut n = 1;
    loop {
        let class = if n == 1 { HOLDER_CLASS.to_owned() } else { format!("{HOLDER_CLASS}{n}") };
        let var = format!("{}{}", class[..1].to_ascii_lowercase(), &class[1..]);
        if !taken.contains(&class) && !taken.contains(&var) {
            taken.insert(class.clone());
            taken.insert(var.clone());
            return (class, var);
        }
        n += 1;
    }
}

/// Start of the method including any comments attached directly above it.
fn member_anchor(src: &str, member: &JavaNode<'_>) -> usize {
    let mut anchor = member.span().start;
    let mut prev = member.prev_named_sibling();
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

fn build_fix(
    src: &str,
    method: &JavaNode<'_>,
    inflate: &JavaNode<'_>,
    cached: &[CachedView<'_>],
    convert: &str,
    taken: &mut BTreeSet<String>,
) -> Option<Vec<Edit>> {
    let last = cached.last()?;
    let class_body = method.parent().filter(|p| p.kind() == "class_body")?;
    if !allows_static_member_type(&class_body) {
        return None;
    }
    let cached_names: BTreeSet<&str> = cached.iter().map(|c| c.name).collect();
    for view in cached {
        if view.type_text == "var" {
            return None;
        }
        let prefix = &src[view.statement.span().start..view.value.span().start];
        if prefix.contains('\n') || !starts_line(src, view.statement.span().start) || !ends_line(src, view.statement.span().end) {
            return None;
        }
        let call = strip_parens_and_casts(view.value);
        let refers_to_cached = invocation_args(&call)
            .iter()
            .flat_map(|a| std::iter::once(*a).chain(a.descendants()))
            .any(|n| n.kind() == "identifier" && !is_member_name(&n) && cached_names.contains(n.text()));
        if refers_to_cached {
            return None;
        }
    }
    let anchor = member_anchor(src, method);
    if !starts_line(src, anchor) || !starts_line(src, inflate.span().start) || !ends_line(src, inflate.span().end) {
        return None;
    }

    let nl = newline(src);
    let method_indent = indent_at(src, method.span().start);
    let stmt_indent = indent_at(src, inflate.span().start);
    let unit = indent_unit(src, method_indent, stmt_indent);
    let (holder, var) = fresh_names(taken);

    let mut edits = Vec::new();

    let mut holder_lines = vec![format!("{method_indent}private static class {holder} {{")];
    holder_lines.extend(
        cached
            .iter()
            .map(|c| format!("{method_indent}{unit}private {} {};", c.type_text, c.name)),
    );
    holder_lines.push(format!("{method_indent}}}"));
    holder_lines.push(String::new());
    edits.push(Edit::insert(line_start(src, anchor), render_lines(&holder_lines, nl)));

    let block_start = line_start(src, inflate.span().start);
    edits.push(Edit::insert(
        block_start,
        render_lines(
            &[format!("{stmt_indent}{holder} {var};"), format!("{stmt_indent}if ({convert} == null) {{")],
            nl,
        ),
    ));

    // Re-indent everything that moves into the `if` block.
    let after_inflate = next_line_start(src, inflate.span().end);
    let block_last_line = line_start(src, last.statement.span().end);
    let mut line = block_start;
    while line <= block_last_line {
        if line == after_inflate {
            edits.push(Edit::insert(line, format!("{stmt_indent}{unit}{var} = new {holder}();{nl}")));
        }
        if !is_blank_line(src, line) {
            edits.push(Edit::insert(line, unit.clone()));
        }
        line = next_line_start(src, line);
    }

    for view in cached {
        edits.push(Edit::replace(
            SourceSpan::new(view.statement.span().start, view.value.span().start),
            format!("{var}.{} = ", view.name),
        ));
    }

    let mut tail = vec![
        format!("{stmt_indent}{unit}{convert}.setTag({var});"),
        format!("{stmt_indent}}} else {{"),
        format!("{stmt_indent}{unit}{var} = ({holder}) {convert}.getTag();"),
        format!("{stmt_indent}}}"),
    ];
    for view in cached {
        let prefix = &src[view.statement.span().start..view.value.span().start];
        tail.push(format!("{stmt_indent}{prefix}{var}.{};", view.name));
    }
    edits.push(Edit::insert(next_line_start(src, last.statement.span().end), render_lines(&tail, nl)));
    Some(edits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{apply_edit_set, parse_java_source};

    fn run(src: &str) -> (RuleResult, String) {
        let tree = parse_java_source(src).unwrap();
        let result = apply_view_holder(&tree);
        let out = apply_edit_set(src, &result.edits).unwrap();
        (result, out)
    }

    const ADAPTER: &str = "class A extends BaseAdapter {\n    public View getView(int pos, View row, ViewGroup parent) {\n        row = inflater.inflate(R.layout.item, parent, false);\n        TextView title = (TextView) row.findViewById(R.id.title);\n        ImageView icon = row.findViewById(R.id.icon);\n        title.setText(\"x\");\n        return row;\n    }\n}\n";

    #[test]
    fn caches_every_contiguous_lookup() {
        let (result, out) = run(ADAPTER);
        assert_eq!(result.findings.len(), 1);
        assert!(result.findings[0].fixable);
        let expected = "class A extends BaseAdapter {\n    private static class ViewHolderItem {\n        private TextView title;\n        private ImageView icon;\n    }\n\n    public View getView(int pos, View row, ViewGroup parent) {\n        ViewHolderItem viewHolderItem;\n        if (row == null) {\n            row = inflater.inflate(R.layout.item, parent, false);\n            viewHolderItem = new ViewHolderItem();\n            viewHolderItem.title = (TextView) row.findViewById(R.id.title);\n            viewHolderItem.icon = row.findViewById(R.id.icon);\n            row.setTag(viewHolderItem);\n        } else {\n            viewHolderItem = (ViewHolderItem) row.getTag();\n        }\n        TextView title = viewHolderItem.title;\n        ImageView icon = viewHolderItem.icon;\n        title.setText(\"x\");\n        return row;\n    }\n}\n";
        assert_eq!(out, expected);
        assert!(apply_view_holder(&parse_java_source(&out).unwrap()).findings.is_empty());
    }

    #[test]
    fn no_get_view_means_no_findings() {
        let (result, _) = run("class A { void f() {} }");
        assert!(result.findings.is_empty());
        assert!(result.edits.is_empty());
    }

    #[test]
    fn wrong_signature_is_ignored() {
        let src = ADAPTER.replace("int pos, View row, ViewGroup parent", "long pos, View row, ViewGroup parent");
        assert!(run(&src).0.findings.is_empty());
    }

    #[test]
    fn conditional_inflate_is_not_a_finding() {
        let src = "class A {\n  public View getView(int p, View v, ViewGroup g) {\n    if (v == null) {\n      v = inf.inflate(R.layout.x, g, false);\n    }\n    TextView t = (TextView) v.findViewById(R.id.t);\n    return v;\n  }\n}\n";
        assert!(run(src).0.findings.is_empty());
    }

    #[test]
    fn inner_class_adapter_is_reported_but_not_rewritten() {
        let src = ADAPTER.replace("class A extends BaseAdapter {\n", "class Outer {\nclass A extends BaseAdapter {\n") + "}\n";
        let (result, out) = run(&src);
        assert_eq!(result.findings.len(), 1);
        assert!(!result.findings[0].fixable);
        assert_eq!(out, src);
    }

    #[test]
    fn holder_name_avoids_collisions() {
        let src = ADAPTER.replace("title.setText(\"x\");", "title.setText(ViewHolderItem.LABEL);");
        let (_, out) = run(&src);
        assert!(out.contains("private static class ViewHolderItem2 {"));
        assert!(out.contains("ViewHolderItem2 viewHolderItem2;"));
    }

    #[test]
    fn non_contiguous_lookup_is_unfixable() {
        let src = "class A {\n  public View getView(int p, View v, ViewGroup g) {\n    v = inf.inflate(R.layout.x, g, false);\n    bind(v);\n    TextView t = (TextView) v.findViewById(R.id.t);\n    return v;\n  }\n}\n";
        let (result, _) = run(src);
        assert_eq!(result.findings.len(), 1);
        assert!(!result.findings[0].fixable);
    }
}
