//! The energy rules for Java sources, plus the rule identity and result
//! types shared with the XML rule.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::syntax::{Edit, EditSet, JavaTree, SourceSpan};

mod ast;
mod draw_allocation;
pub(crate) mod format;
mod recycle;
mod view_holder;
mod wake_lock;

pub use draw_allocation::apply_draw_allocation;
pub use recycle::{apply_recycle, RecyclableFactory, ReleaseMethod};
pub use view_holder::apply_view_holder;
pub use wake_lock::{apply_wake_lock, WakeLockGuard};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RuleId {
    ViewHolder,
    DrawAllocation,
    WakeLock,
    Recycle,
    ObsoleteLayoutParam,
}

impl RuleId {
    /// Every rule, in the fixed execution and reporting order.
    pub const ALL: [RuleId; 5] = [
        RuleId::ViewHolder,
        RuleId::DrawAllocation,
        RuleId::WakeLock,
        RuleId::Recycle,
        RuleId::ObsoleteLayoutParam,
    ];

    pub const JAVA: [RuleId; 4] =
        [RuleId::ViewHolder, RuleId::DrawAllocation, RuleId::WakeLock, RuleId::Recycle];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::ViewHolder => "ViewHolder",
            RuleId::DrawAllocation => "DrawAllocation",
            RuleId::WakeLock => "WakeLock",
            RuleId::Recycle => "Recycle",
            RuleId::ObsoleteLayoutParam => "ObsoleteLayoutParam",
        }
    }

    pub fn is_java(self) -> bool {
        self != RuleId::ObsoleteLayoutParam
    }

    pub fn meta(self) -> RuleMeta {
        let (lint_priority, energy_improvement_tenths_pct) = match self {
            RuleId::ViewHolder => (5, 45),
            RuleId::DrawAllocation => (9, 15),
            RuleId::WakeLock => (9, 15),
            RuleId::Recycle => (7, 7),
            RuleId::ObsoleteLayoutParam => (6, 7),
        };
        RuleMeta { rule: self, lint_priority, energy_improvement_tenths_pct }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown rule `{0}` (expected one of ViewHolder, DrawAllocation, WakeLock, Recycle, ObsoleteLayoutParam)")]
pub struct UnknownRule(pub String);

impl FromStr for RuleId {
    type Err = UnknownRule;

    /// Accepts the rule name case-insensitively, with or without
    /// separators, plus the `OLP` abbreviation.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .map(|c| c.to_ascii_lowercase())
            .collect();
        RuleId::ALL
            .into_iter()
            .find(|r| r.name().to_ascii_lowercase() == key)
            .or((key == "olp").then_some(RuleId::ObsoleteLayoutParam))
            .ok_or_else(|| UnknownRule(s.to_owned()))
    }
}

/// Lint metadata carried with each rule. The energy figure is informational
/// and never measured by this crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleMeta {
    pub rule: RuleId,
    /// Android lint fix priority, 1 (lowest) to 10 (most severe).
    pub lint_priority: u8,
    /// Reported energy-efficiency improvement, in tenths of a percent.
    pub energy_improvement_tenths_pct: u16,
}

impl RuleMeta {
    pub fn energy_improvement_pct(&self) -> f64 {
        f64::from(self.energy_improvement_tenths_pct) / 10.0
    }
}

/// One detected smell instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub rule: RuleId,
    pub file: PathBuf,
    /// The anchor construct: the `getView` method, the `new` expression,
    /// the `acquire()` call, the factory call or the attribute.
    pub span: SourceSpan,
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub fixable: bool,
    /// Edits that fix this finding; empty when not fixable.
    #[serde(skip)]
    pub fix: Vec<Edit>,
}

impl Finding {
    pub(crate) fn new(rule: RuleId, file: Option<&std::path::Path>, source: &str, span: SourceSpan, message: String) -> Self {
        let (line, column) = crate::syntax::line_col(source, span.start);
        Self {
            rule,
            file: file.map(PathBuf::from).unwrap_or_default(),
            span,
            line,
            column,
            message,
            fixable: false,
            fix: Vec::new(),
        }
    }

    pub(crate) fn with_fix(mut self, fix: Vec<Edit>) -> Self {
        self.fixable = !fix.is_empty();
        self.fix = fix;
        self
    }
}

/// Findings of one rule on one file and the combined edits of the fixable
/// ones, expressed against the text the rule inspected.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RuleResult {
    pub findings: Vec<Finding>,
    pub edits: EditSet,
}

impl RuleResult {
    /// Builds the edit set from the findings' fixes. A finding whose fix
    /// conflicts with an earlier finding's fix is downgraded to unfixable.
    pub fn from_findings(mut findings: Vec<Finding>) -> Self {
        let mut edits = EditSet::empty();
        for finding in &mut findings {
            if finding.fix.is_empty() {
                finding.fixable = false;
                continue;
            }
            if edits.try_extend(&finding.fix).is_err() {
                log::debug!("{} fix at {} conflicts with another fix; reporting only", finding.rule, finding.span);
                finding.fix.clear();
                finding.fixable = false;
            }
        }
        Self { findings, edits }
    }

    pub fn fixable_count(&self) -> usize {
        self.findings.iter().filter(|f| f.fixable).count()
    }

    pub fn unfixable_count(&self) -> usize {
        self.findings.len() - self.fixable_count()
    }
}

/// Options for the Java rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JavaRuleOptions {
    pub wake_lock_guard: WakeLockGuard,
    pub recyclables: Vec<RecyclableFactory>,
}

impl Default for JavaRuleOptions {
    fn default() -> Self {
        Self { wake_lock_guard: WakeLockGuard::default(), recyclables: RecyclableFactory::defaults() }
    }
}

/// Runs one Java rule. Panics when given the XML rule.
pub fn run_java_rule(rule: RuleId, tree: &JavaTree, options: &JavaRuleOptions) -> RuleResult {
    match rule {
        RuleId::ViewHolder => apply_view_holder(tree),
        RuleId::DrawAllocation => apply_draw_allocation(tree),
        RuleId::WakeLock => apply_wake_lock(tree, options.wake_lock_guard),
        RuleId::Recycle => apply_recycle(tree, &options.recyclables),
        RuleId::ObsoleteLayoutParam => panic!("ObsoleteLayoutParam is not a Java rule"),
    }
}
