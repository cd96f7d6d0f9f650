//! ObsoleteLayoutParam: `android:layout_*` attributes on a child view that
//! its parent container never reads.

mod layout_params;

pub use layout_params::{LayoutParamTable, TableError};

use crate::rules::{Finding, RuleId, RuleResult};
use crate::syntax::{Edit, SourceSpan, XmlTree};

const LAYOUT_PREFIX: &str = "android:layout_";

pub fn apply_obsolete_layout_param(tree: &XmlTree, table: &LayoutParamTable) -> RuleResult {
    apply_obsolete_layout_param_at(tree, table, None)
}

/// Same as [`apply_obsolete_layout_param`], attributing findings to `file`.
pub fn apply_obsolete_layout_param_at(
    tree: &XmlTree,
    table: &LayoutParamTable,
    file: Option<&std::path::Path>,
) -> RuleResult {
    let src = tree.source();
    let mut findings = Vec::new();
    tree.walk_elements(&mut |element, parent| {
        let Some(parent) = parent else { return };
        if !table.is_known_parent(&parent.name) {
            return;
        }
        for attr in &element.attributes {
            if !attr.name.starts_with(LAYOUT_PREFIX) || table.is_meaningful(&parent.name, &attr.name) {
                continue;
            }
            let message = format!(
                "`{}` on `{}` has no effect inside `{}`",
                attr.name, element.name, parent.name
            );
            let fix = Edit::delete(SourceSpan::new(attr.leading_whitespace.start, attr.span.end));
            findings.push(Finding::new(RuleId::ObsoleteLayoutParam, file, src, attr.span, message).with_fix(vec![fix]));
        }
    });
    RuleResult::from_findings(findings)
}
