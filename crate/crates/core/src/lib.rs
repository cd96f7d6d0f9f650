//! Detection and automatic refactoring of five Android energy code smells:
//! ViewHolder, DrawAllocation, WakeLock and Recycle in Java sources, and
//! ObsoleteLayoutParam in layout XML.
//!
//! Rules never mutate trees. They report [`rules::Finding`]s whose fixes are
//! byte-range [`syntax::Edit`]s against the text the tree was parsed from;
//! the [`engine`] applies them, re-verifies the result and writes files or
//! patches. [`report`] folds per-project reports into corpus statistics.

pub mod engine;
pub mod report;
pub mod rules;
pub mod syntax;
pub mod xml_rules;

pub use rules::{Finding, RuleId, RuleMeta, RuleResult};
pub use syntax::{apply_edit_set, Edit, EditSet, SourceSpan};
