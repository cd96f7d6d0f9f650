//! File discovery, the per-file rule pipeline, and the side effects of each
//! run mode.

mod discover;
mod output;
mod pipeline;

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rules::{JavaRuleOptions, RecyclableFactory, RuleId, RuleResult, WakeLockGuard};
use crate::syntax::{ParseDiagnostic, DEFAULT_MAX_SOURCE_BYTES};
use crate::xml_rules::{LayoutParamTable, TableError};

pub use discover::{discover_files, Discovery};
pub use output::unified_diff;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("input path {0} does not exist")]
    MissingInput(PathBuf),
    #[error("no rules enabled")]
    NoRules,
    #[error("invalid exclude pattern `{pattern}`: {message}")]
    BadGlob { pattern: String, message: String },
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("cannot start worker pool: {0}")]
    Pool(String),
    #[error("cannot read corpus root {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    ReportOnly,
    FixInPlace,
    /// Write one unified diff per changed file under this directory.
    EmitPatch(PathBuf),
}

impl Mode {
    pub fn rewrites(&self) -> bool {
        !matches!(self, Mode::ReportOnly)
    }
}

pub const DEFAULT_EXCLUDES: [&str; 3] = ["**/build/**", "**/.git/**", "**/generated/**"];

#[derive(Debug, Clone)]
pub struct RunConfig {
    /// A single file, a package directory or a project root.
    pub input: PathBuf,
    pub mode: Mode,
    pub rules: BTreeSet<RuleId>,
    pub exclude: Vec<String>,
    pub wake_lock_guard: WakeLockGuard,
    pub layout_param_table: Option<PathBuf>,
    pub recyclables: Vec<RecyclableFactory>,
    /// Worker threads; 0 means one per logical CPU.
    pub jobs: usize,
    /// Keep a `.orig` copy next to every file rewritten in place.
    pub backup: bool,
    pub max_file_bytes: usize,
}

impl RunConfig {
    pub fn new(input: impl Into<PathBuf>) -> Self {
        Self {
            input: input.into(),
            mode: Mode::ReportOnly,
            rules: RuleId::ALL.into_iter().collect(),
            exclude: DEFAULT_EXCLUDES.iter().map(|s| s.to_string()).collect(),
            wake_lock_guard: WakeLockGuard::default(),
            layout_param_table: None,
            recyclables: RecyclableFactory::defaults(),
            jobs: 0,
            backup: false,
            max_file_bytes: DEFAULT_MAX_SOURCE_BYTES,
        }
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        if self.rules.is_empty() {
            return Err(EngineError::NoRules);
        }
        if !self.input.exists() {
            return Err(EngineError::MissingInput(self.input.clone()));
        }
        Ok(())
    }

    fn java_options(&self) -> JavaRuleOptions {
        JavaRuleOptions { wake_lock_guard: self.wake_lock_guard, recyclables: self.recyclables.clone() }
    }

    fn java_rules(&self) -> Vec<RuleId> {
        RuleId::JAVA.into_iter().filter(|r| self.rules.contains(r)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    Java,
    Xml,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "diagnostics")]
pub enum ParseStatus {
    Parsed,
    Failed(Vec<ParseDiagnostic>),
    NotParsed,
}

/// Everything that happened to one discovered file.
#[derive(Debug, Clone)]
pub struct FileOutcome {
    pub path: PathBuf,
    /// `None` when the file was skipped before parsing.
    pub language: Option<Language>,
    pub parse_status: ParseStatus,
    pub results: BTreeMap<RuleId, RuleResult>,
    pub rewritten: bool,
    pub skip_reason: Option<String>,
    /// Verification rollback or write failure.
    pub error: Option<String>,
    pub patch: Option<PathBuf>,
}

impl FileOutcome {
    fn new(path: PathBuf, language: Option<Language>) -> Self {
        Self {
            path,
            language,
            parse_status: ParseStatus::NotParsed,
            results: BTreeMap::new(),
            rewritten: false,
            skip_reason: None,
            error: None,
            patch: None,
        }
    }

    pub fn fixable_count(&self) -> usize {
        self.results.values().map(RuleResult::fixable_count).sum()
    }

    pub fn finding_count(&self) -> usize {
        self.results.values().map(|r| r.findings.len()).sum()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleCounts {
    /// Fixable findings.
    pub refactorings: u64,
    /// Fixable findings whose fix was written or emitted as a patch.
    pub fixed: u64,
    /// Findings reported without a fix.
    pub unfixable: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProjectReport {
    pub project_id: String,
    pub rules: BTreeMap<RuleId, RuleCounts>,
    pub java_files: u64,
    pub xml_files: u64,
    pub parse_failures: u64,
    pub skipped_files: u64,
    pub internal_errors: u64,
    #[serde(skip)]
    pub wall_time: Duration,
    #[serde(skip)]
    pub outcomes: Vec<FileOutcome>,
    pub warnings: Vec<String>,
}

impl ProjectReport {
    pub fn new(project_id: impl Into<String>) -> Self {
        Self {
            project_id: project_id.into(),
            rules: RuleId::ALL.into_iter().map(|r| (r, RuleCounts::default())).collect(),
            java_files: 0,
            xml_files: 0,
            parse_failures: 0,
            skipped_files: 0,
            internal_errors: 0,
            wall_time: Duration::ZERO,
            outcomes: Vec::new(),
            warnings: Vec::new(),
        }
    }

    /// Synthetic report with the given refactoring counts, for aggregation.
    pub fn with_refactorings(project_id: impl Into<String>, counts: &[(RuleId, u64)]) -> Self {
        let mut report = Self::new(project_id);
        for &(rule, n) in counts {
            report.rules.entry(rule).or_default().refactorings += n;
        }
        report
    }

    pub fn refactorings(&self, rule: RuleId) -> u64 {
        self.rules.get(&rule).map_or(0, |c| c.refactorings)
    }

    pub fn total_findings(&self) -> u64 {
        self.rules.values().map(|c| c.refactorings + c.unfixable).sum()
    }

    fn absorb(&mut self, outcome: &FileOutcome) {
        match outcome.language {
            Some(Language::Java) => self.java_files += 1,
            Some(Language::Xml) => self.xml_files += 1,
            None => {}
        }
        if matches!(outcome.parse_status, ParseStatus::Failed(_)) {
            self.parse_failures += 1;
        }
        if outcome.skip_reason.is_some() {
            self.skipped_files += 1;
        }
        if outcome.error.is_some() {
            self.internal_errors += 1;
        }
        let fixed = outcome.rewritten || outcome.patch.is_some();
        for (rule, result) in &outcome.results {
            let counts = self.rules.entry(*rule).or_default();
            let fixable = result.fixable_count() as u64;
            counts.refactorings += fixable;
            counts.unfixable += result.unfixable_count() as u64;
            if fixed {
                counts.fixed += fixable;
            }
        }
    }
}

/// Identifier of a project: the name of its root directory.
pub fn project_id(input: &Path) -> String {
    let resolved = input.canonicalize().unwrap_or_else(|_| input.to_path_buf());
    resolved
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| resolved.display().to_string())
}

/// Analyzes (and per `config.mode`, rewrites) every eligible file under
/// `config.input`.
pub fn run_project(config: &RunConfig) -> Result<ProjectReport, EngineError> {
    config.validate()?;
    let started = Instant::now();
    let table = match &config.layout_param_table {
        Some(path) => LayoutParamTable::load(path)?,
        None => LayoutParamTable::default(),
    };
    let discovery = discover_files(config)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| EngineError::Pool(e.to_string()))?;
    let context = pipeline::Context::new(config, &table);
    let mut outcomes: Vec<FileOutcome> = pool.install(|| {
        discovery
            .files
            .par_iter()
            .map(|(path, language)| context.process(path, *language))
            .collect()
    });
    outcomes.sort_by(|a, b| a.path.cmp(&b.path));

    let mut report = ProjectReport::new(project_id(&config.input));
    report.warnings = discovery.warnings;
    for outcome in &outcomes {
        report.absorb(outcome);
        if let Some(reason) = &outcome.skip_reason {
            report.warnings.push(format!("{}: skipped: {reason}", outcome.path.display()));
        }
        if let ParseStatus::Failed(diags) = &outcome.parse_status {
            let first = diags.first().map(|d| d.to_string()).unwrap_or_default();
            report.warnings.push(format!("{}: parse failed, skipping: {first}", outcome.path.display()));
        }
        if let Some(err) = &outcome.error {
            report.warnings.push(format!("{}: {err}", outcome.path.display()));
        }
    }
    report.outcomes = outcomes;
    report.wall_time = started.elapsed();
    Ok(report)
}

/// Runs every immediate child directory of `root` as one project in
/// report-only mode. `base` supplies every setting except input and mode.
pub fn run_corpus(root: &Path, base: &RunConfig) -> Result<Vec<ProjectReport>, EngineError> {
    let io = |source| EngineError::Io { path: root.to_path_buf(), source };
    let mut projects: Vec<PathBuf> = std::fs::read_dir(root)
        .map_err(io)?
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.is_dir())
        .collect();
    projects.sort();
    projects
        .into_iter()
        .map(|project| {
            let mut config = base.clone();
            config.input = project;
            config.mode = Mode::ReportOnly;
            run_project(&config)
        })
        .collect()
}
