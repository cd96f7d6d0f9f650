//! Corpus-level statistics over many project reports.
//!
//! For every rule, and for the synthetic row `Any`, the summary counts
//! refactorings (fixable findings), the projects with at least one of
//! them, the share of the corpus those projects make up, and refactorings
//! per affected project. Percentages and incidences are rounded half up
//! with integer arithmetic so the rendered cells are exact.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::ProjectReport;
use crate::rules::RuleId;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReportError {
    #[error("cannot summarize an empty corpus")]
    EmptyCorpus,
    #[error("project id `{0}` appears more than once")]
    DuplicateProject(String),
    #[error("malformed summary: {0}")]
    Malformed(String),
}

/// Row label: one rule or the union over all rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SummaryRule {
    Rule(RuleId),
    Any,
}

impl SummaryRule {
    pub const ORDER: [SummaryRule; 6] = [
        SummaryRule::Rule(RuleId::ViewHolder),
        SummaryRule::Rule(RuleId::DrawAllocation),
        SummaryRule::Rule(RuleId::WakeLock),
        SummaryRule::Rule(RuleId::Recycle),
        SummaryRule::Rule(RuleId::ObsoleteLayoutParam),
        SummaryRule::Any,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SummaryRule::Rule(r) => r.name(),
            SummaryRule::Any => "Any",
        }
    }

    fn parse(name: &str) -> Option<Self> {
        Self::ORDER.into_iter().find(|r| r.name() == name)
    }
}

impl fmt::Display for SummaryRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SummaryRow {
    pub rule: SummaryRule,
    pub total_refactorings: u64,
    pub total_projects: u64,
}

impl SummaryRow {
    /// `total_projects / corpus_size` as an integer percent, half up.
    pub fn percentage_of_projects(&self, corpus_size: u64) -> u64 {
        if corpus_size == 0 {
            return 0;
        }
        (200 * self.total_projects + corpus_size) / (2 * corpus_size)
    }

    /// Refactorings per affected project in tenths, half up; `None` when no
    /// project is affected.
    pub fn incidence_tenths(&self) -> Option<u64> {
        let p = self.total_projects;
        (p > 0).then(|| (20 * self.total_refactorings + p) / (2 * p))
    }

    /// Incidence as printed: `5.2`, or `-` when undefined.
    pub fn incidence_label(&self) -> String {
        match self.incidence_tenths() {
            Some(t) => format!("{}.{}", t / 10, t % 10),
            None => "-".to_owned(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusSummary {
    pub corpus_size: u64,
    /// Always six rows in [`SummaryRule::ORDER`].
    pub rows: Vec<SummaryRow>,
}

impl CorpusSummary {
    pub fn row(&self, rule: SummaryRule) -> &SummaryRow {
        self.rows.iter().find(|r| r.rule == rule).expect("summary has a row for every rule")
    }
}

pub fn aggregate(reports: &[ProjectReport]) -> Result<CorpusSummary, ReportError> {
    if reports.is_empty() {
        return Err(ReportError::EmptyCorpus);
    }
    let mut seen = BTreeSet::new();
    for report in reports {
        if !seen.insert(report.project_id.as_str()) {
            return Err(ReportError::DuplicateProject(report.project_id.clone()));
        }
    }
    let rows = SummaryRule::ORDER
        .into_iter()
        .map(|rule| {
            let count = |r: &ProjectReport| match rule {
                SummaryRule::Rule(id) => r.refactorings(id),
                SummaryRule::Any => RuleId::ALL.into_iter().map(|id| r.refactorings(id)).sum(),
            };
            SummaryRow {
                rule,
                total_refactorings: reports.iter().map(count).sum(),
                total_projects: reports.iter().filter(|r| count(r) > 0).count() as u64,
            }
        })
        .collect();
    Ok(CorpusSummary { corpus_size: reports.len() as u64, rows })
}

pub const CSV_HEADER: &str = "rule,total_refactorings,total_projects,percentage_of_projects,incidence_per_project";

pub fn to_csv(summary: &CorpusSummary) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in &summary.rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.rule,
            row.total_refactorings,
            row.total_projects,
            row.percentage_of_projects(summary.corpus_size),
            row.incidence_label()
        ));
    }
    out
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonRow {
    rule: String,
    total_refactorings: u64,
    total_projects: u64,
    percentage_of_projects: u64,
    incidence_per_project: String,
    corpus_size: u64,
}

pub fn to_json(summary: &CorpusSummary) -> String {
    let rows: Vec<JsonRow> = summary
        .rows
        .iter()
        .map(|row| JsonRow {
            rule: row.rule.name().to_owned(),
            total_refactorings: row.total_refactorings,
            total_projects: row.total_projects,
            percentage_of_projects: row.percentage_of_projects(summary.corpus_size),
            incidence_per_project: row.incidence_label(),
            corpus_size: summary.corpus_size,
        })
        .collect();
    let mut out = serde_json::to_string_pretty(&rows).expect("summary rows serialize");
    out.push('\n');
    out
}

/// Reads back [`to_json`] output. Derived cells must agree with the totals.
pub fn from_json(text: &str) -> Result<CorpusSummary, ReportError> {
    let malformed = |m: String| ReportError::Malformed(m);
    let rows: Vec<JsonRow> = serde_json::from_str(text).map_err(|e| malformed(e.to_string()))?;
    let corpus_size = rows.first().map(|r| r.corpus_size).ok_or_else(|| malformed("no rows".into()))?;
    let mut out = Vec::with_capacity(rows.len());
    for (row, expected) in rows.iter().zip(SummaryRule::ORDER) {
        let rule = SummaryRule::parse(&row.rule).ok_or_else(|| malformed(format!("unknown rule `{}`", row.rule)))?;
        if rule != expected {
            return Err(malformed(format!("row `{rule}` out of order, expected `{expected}`")));
        }
        if row.corpus_size != corpus_size {
            return Err(malformed(format!("row `{rule}` disagrees on corpus_size")));
        }
        let parsed = SummaryRow { rule, total_refactorings: row.total_refactorings, total_projects: row.total_projects };
        if parsed.percentage_of_projects(corpus_size) != row.percentage_of_projects
            || parsed.incidence_label() != row.incidence_per_project
        {
            return Err(malformed(format!("row `{rule}` has derived cells inconsistent with its totals")));
        }
        out.push(parsed);
    }
    if out.len() != SummaryRule::ORDER.len() || rows.len() != out.len() {
        return Err(malformed(format!("expected {} rows, got {}", SummaryRule::ORDER.len(), rows.len())));
    }
    Ok(CorpusSummary { corpus_size, rows: out })
}

/// One line per project and rule, including findings without a fix.
pub fn per_project_csv(reports: &[ProjectReport]) -> String {
    let mut sorted: Vec<&ProjectReport> = reports.iter().collect();
    sorted.sort_by(|a, b| a.project_id.cmp(&b.project_id));
    let mut out = String::from("project,rule,refactorings,unfixable,java_files,xml_files,parse_failures\n");
    for report in sorted {
        for rule in RuleId::ALL {
            let counts = report.rules.get(&rule).copied().unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                csv_field(&report.project_id),
                rule,
                counts.refactorings,
                counts.unfixable,
                report.java_files,
                report.xml_files,
                report.parse_failures
            ));
        }
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}
