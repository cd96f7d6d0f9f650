//! `greenfix`: find and fix Android energy code smells.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context as _;
use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use greenfix_core::engine::{run_corpus, run_project, EngineError, Mode, ProjectReport, RuleCounts, RunConfig};
use greenfix_core::report::{self, ReportError};
use greenfix_core::rules::WakeLockGuard;
use greenfix_core::{RuleId, SourceSpan};
use serde::Serialize;

const CLEAN: u8 = 0;
const FOUND: u8 = 1;
const INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(name = "greenfix", version, about = "Detect and fix Android energy code smells in Java sources and layout XML")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Only run these rules (comma separated, e.g. `Recycle,WakeLock`)
    #[arg(long, global = true, value_delimiter = ',', value_name = "RULE")]
    only: Vec<RuleId>,
    /// Skip paths matching this glob; may be repeated. Added to the built-in
    /// excludes for build, generated and .git directories.
    #[arg(long, global = true, value_name = "GLOB")]
    exclude: Vec<String>,
    /// Worker threads (default: one per CPU)
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    /// Guard the WakeLock release with `!wl.isHeld()` as in the original
    /// refactoring listing instead of `wl.isHeld()`
    #[arg(long, global = true)]
    paper_faithful_wakelock_guard: bool,
    /// Replace the built-in table of meaningful layout parameters
    #[arg(long, global = true, value_name = "PATH")]
    layout_param_table: Option<PathBuf>,
    /// Keep a `.orig` copy of every file rewritten in place
    #[arg(long, global = true)]
    backup: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Report smells without touching any file
    Check {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Apply every available fix in place, or write patches instead
    Fix {
        path: PathBuf,
        /// Write one unified diff per changed file here; sources stay untouched
        #[arg(long, value_name = "DIR", conflicts_with = "backup")]
        patch_dir: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Analyze every subdirectory of ROOT as a project and summarize
    Corpus {
        root: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = SummaryFormat::Csv)]
        format: SummaryFormat,
        /// Also write per-project counts as CSV
        #[arg(long, value_name = "FILE")]
        per_project: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SummaryFormat {
    Csv,
    Json,
}

/// Failures that are the caller's fault: reported with usage, exit 2.
fn usage_error(kind: ErrorKind, message: impl std::fmt::Display) -> ! {
    Cli::command().error(kind, message).exit()
}

fn engine_error(err: EngineError) -> anyhow::Error {
    match err {
        EngineError::MissingInput(_) | EngineError::NoRules => usage_error(ErrorKind::ValueValidation, err),
        EngineError::BadGlob { .. } | EngineError::Table(_) => usage_error(ErrorKind::InvalidValue, err),
        EngineError::Pool(_) | EngineError::Io { .. } => err.into(),
    }
}

fn config(global: &Global, input: &Path) -> RunConfig {
    let mut config = RunConfig::new(input);
    if !global.only.is_empty() {
        config.rules = global.only.iter().copied().collect();
    }
    config.exclude.extend(global.exclude.iter().cloned());
    config.jobs = global.jobs.unwrap_or(0);
    if global.paper_faithful_wakelock_guard {
        config.wake_lock_guard = WakeLockGuard::PaperFaithful;
    }
    config.layout_param_table = global.layout_param_table.clone();
    config.backup = global.backup;
    config
}

fn warn_all(report: &ProjectReport) {
    for w in &report.warnings {
        log::warn!("{w}");
    }
}

fn mode_name(mode: &Mode) -> &'static str {
    match mode {
        Mode::ReportOnly => "check",
        Mode::FixInPlace => "fix",
        Mode::EmitPatch(_) => "patch",
    }
}

#[derive(Serialize)]
struct JsonReport<'a> {
    version: &'static str,
    mode: &'static str,
    findings: Vec<JsonFinding<'a>>,
    summary: JsonSummary<'a>,
}

#[derive(Serialize)]
struct JsonFinding<'a> {
    file: &'a Path,
    rule: RuleId,
    span: SourceSpan,
    line: usize,
    column: usize,
    message: &'a str,
    fixable: bool,
}

#[derive(Serialize)]
struct JsonSummary<'a> {
    project: &'a str,
    java_files: u64,
    xml_files: u64,
    parse_failures: u64,
    skipped_files: u64,
    internal_errors: u64,
    total_findings: u64,
    rules: &'a BTreeMap<RuleId, RuleCounts>,
}

fn json_report<'a>(report: &'a ProjectReport, mode: &Mode) -> JsonReport<'a> {
    let mut findings: Vec<JsonFinding> = report
        .outcomes
        .iter()
        .flat_map(|o| o.results.values().flat_map(move |r| r.findings.iter().map(move |f| (o, f))))
        .map(|(o, f)| JsonFinding {
            file: &o.path,
            rule: f.rule,
            span: f.span,
            line: f.line,
            column: f.column,
            message: &f.message,
            fixable: f.fixable,
        })
        .collect();
    findings.sort_by(|a, b| (a.file, a.span.start, a.rule).cmp(&(b.file, b.span.start, b.rule)));
    JsonReport {
        version: "1",
        mode: mode_name(mode),
        findings,
        summary: JsonSummary {
            project: &report.project_id,
            java_files: report.java_files,
            xml_files: report.xml_files,
            parse_failures: report.parse_failures,
            skipped_files: report.skipped_files,
            internal_errors: report.internal_errors,
            total_findings: report.total_findings(),
            rules: &report.rules,
        },
    }
}

fn text_report(report: &ProjectReport, mode: &Mode) -> String {
    let mut out = String::new();
    for outcome in &report.outcomes {
        for result in outcome.results.values() {
            for f in &result.findings {
                let tag = if f.fixable { "" } else { " (no automatic fix)" };
                let _ = writeln!(out, "{}:{}:{}: {}: {}{tag}", outcome.path.display(), f.line, f.column, f.rule, f.message);
            }
        }
        if let Some(patch) = &outcome.patch {
            let _ = writeln!(out, "{}: patch written to {}", outcome.path.display(), patch.display());
        } else if outcome.rewritten {
            let _ = writeln!(out, "{}: fixed", outcome.path.display());
        }
    }
    let fixed: u64 = report.rules.values().map(|c| c.fixed).sum();
    let _ = write!(
        out,
        "{} findings in {} Java and {} layout files",
        report.total_findings(),
        report.java_files,
        report.xml_files
    );
    if mode.rewrites() {
        let _ = write!(out, ", {fixed} fixed");
    }
    if report.parse_failures > 0 {
        let _ = write!(out, ", {} unparseable", report.parse_failures);
    }
    out.push('\n');
    out
}

fn project(global: &Global, path: &Path, mode: Mode, format: Format) -> anyhow::Result<u8> {
    let mut config = config(global, path);
    config.mode = mode;
    let report = run_project(&config).map_err(engine_error)?;
    warn_all(&report);
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&json_report(&report, &config.mode))?),
        Format::Text => print!("{}", text_report(&report, &config.mode)),
    }
    let found = match config.mode {
        Mode::ReportOnly => report.total_findings() > 0,
        _ => report.rules.values().any(|c| c.fixed > 0),
    };
    Ok(if report.internal_errors > 0 {
        INTERNAL
    } else if found {
        FOUND
    } else {
        CLEAN
    })
}

fn corpus(global: &Global, root: &Path, out: &Path, format: SummaryFormat, per_project: Option<&Path>) -> anyhow::Result<u8> {
    if !root.is_dir() {
        usage_error(ErrorKind::ValueValidation, format!("corpus root {} is not a directory", root.display()));
    }
    let reports = run_corpus(root, &config(global, root)).map_err(engine_error)?;
    for r in &reports {
        warn_all(r);
    }
    let summary = match report::aggregate(&reports) {
        Ok(s) => s,
        Err(err @ ReportError::EmptyCorpus) => usage_error(ErrorKind::ValueValidation, err),
        Err(err) => return Err(err.into()),
    };
    let body = match format {
        SummaryFormat::Csv => report::to_csv(&summary),
        SummaryFormat::Json => report::to_json(&summary),
    };
    std::fs::write(out, body).with_context(|| format!("cannot write {}", out.display()))?;
    if let Some(path) = per_project {
        std::fs::write(path, report::per_project_csv(&reports)).with_context(|| format!("cannot write {}", path.display()))?;
    }
    let errors: u64 = reports.iter().map(|r| r.internal_errors).sum();
    Ok(if errors > 0 { INTERNAL } else { CLEAN })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .format_target(false)
        .init();
    let cli = Cli::try_parse().unwrap_or_else(|err| {
        if err.use_stderr() && !err.to_string().contains("Usage:") {
            // value errors come without usage; every usage error should carry it
            eprint!("{err}\n{}\n", Cli::command().render_usage());
            std::process::exit(2);
        }
        err.exit()
    });
    let result = match &cli.command {
        Command::Check { path, format } => project(&cli.global, path, Mode::ReportOnly, *format),
        Command::Fix { path, patch_dir, format } => {
            let mode = patch_dir.clone().map_or(Mode::FixInPlace, Mode::EmitPatch);
            project(&cli.global, path, mode, *format)
        }
        Command::Corpus { root, out, format, per_project } => {
            corpus(&cli.global, root, out, *format, per_project.as_deref())
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            log::error!("{err:#}");
            ExitCode::from(INTERNAL)
        }
    }
}
