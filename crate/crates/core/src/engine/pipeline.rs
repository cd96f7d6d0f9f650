//! The single-threaded pipeline every discovered file goes through.

use std::collections::BTreeMap;
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;

use super::output::{atomic_write, unified_diff, write_patch};
use super::{FileOutcome, Language, Mode, ParseStatus, RunConfig};
use crate::rules::{run_java_rule, JavaRuleOptions, RuleId, RuleResult};
use crate::syntax::{apply_edit_set, parse_java_source_with_limit, parse_layout_xml, JavaTree, ParseDiagnostic, XmlTree};
use crate::xml_rules::{apply_obsolete_layout_param_at, LayoutParamTable};

enum Parsed {
    Java(JavaTree),
    Xml(XmlTree),
}

pub(super) struct Context<'a> {
    config: &'a RunConfig,
    table: &'a LayoutParamTable,
    java_rules: Vec<RuleId>,
    java_options: JavaRuleOptions,
}

impl<'a> Context<'a> {
    pub(super) fn new(config: &'a RunConfig, table: &'a LayoutParamTable) -> Self {
        Self { config, table, java_rules: config.java_rules(), java_options: config.java_options() }
    }

    fn rules_for(&self, language: Language) -> Vec<RuleId> {
        match language {
            Language::Java => self.java_rules.clone(),
            Language::Xml if self.config.rules.contains(&RuleId::ObsoleteLayoutParam) => {
                vec![RuleId::ObsoleteLayoutParam]
            }
            Language::Xml => Vec::new(),
        }
    }

    fn parse(&self, language: Language, text: &str, path: &Path) -> Result<Parsed, Vec<ParseDiagnostic>> {
        match language {
            Language::Java => parse_java_source_with_limit(text, self.config.max_file_bytes)
                .map(|t| Parsed::Java(t.with_path(path))),
            Language::Xml => parse_layout_xml(text).map(Parsed::Xml),
        }
    }

    fn run_rule(&self, parsed: &Parsed, rule: RuleId, path: &Path) -> RuleResult {
        match parsed {
            Parsed::Java(tree) => run_java_rule(rule, tree, &self.java_options),
            Parsed::Xml(tree) => apply_obsolete_layout_param_at(tree, self.table, Some(path)),
        }
    }

    fn relative<'p>(&self, path: &'p Path) -> std::borrow::Cow<'p, str> {
        let input = &self.config.input;
        let rel = if input.is_file() {
            Path::new(path.file_name().unwrap_or(path.as_os_str()))
        } else {
            path.strip_prefix(input).unwrap_or(path)
        };
        rel.to_string_lossy()
    }

    pub(super) fn process(&self, path: &Path, language: Language) -> FileOutcome {
        let mut outcome = FileOutcome::new(path.to_path_buf(), Some(language));
        let text = match fs::read(path) {
            Ok(bytes) if bytes.len() > self.config.max_file_bytes => {
                outcome.skip_reason = Some(format!("{} bytes exceeds the size limit", bytes.len()));
                None
            }
            Ok(bytes) => match String::from_utf8(bytes) {
                Ok(text) => Some(text),
                Err(_) => {
                    outcome.skip_reason = Some("not valid UTF-8".to_owned());
                    None
                }
            },
            Err(err) => {
                outcome.skip_reason = Some(format!("unreadable: {err}"));
                None
            }
        };
        let Some(text) = text else {
            outcome.language = None;
            return outcome;
        };

        // A panicking rule must not take the whole run down.
        match panic::catch_unwind(AssertUnwindSafe(|| self.analyze(&mut outcome, language, &text))) {
            Ok(()) => {}
            Err(payload) => {
                let message = payload
                    .downcast_ref::<&str>()
                    .map(|s| s.to_string())
                    .or_else(|| payload.downcast_ref::<String>().cloned())
                    .unwrap_or_else(|| "unknown panic".to_owned());
                outcome.rewritten = false;
                outcome.patch = None;
                outcome.error = Some(format!("internal error: rule panicked: {message}"));
            }
        }
        outcome
    }

    fn analyze(&self, outcome: &mut FileOutcome, language: Language, original: &str) {
        let path = outcome.path.clone();
        let rules = self.rules_for(language);
        let parsed = match self.parse(language, original, &path) {
            Ok(parsed) => parsed,
            Err(diagnostics) => {
                outcome.parse_status = ParseStatus::Failed(diagnostics);
                return;
            }
        };
        outcome.parse_status = ParseStatus::Parsed;

        if !self.config.mode.rewrites() {
            outcome.results = rules.iter().map(|&r| (r, self.run_rule(&parsed, r, &path))).collect();
            return;
        }

        // Each rule sees the output of the rules before it.
        let mut current = original.to_owned();
        let mut tree = parsed;
        let mut results = BTreeMap::new();
        let mut failure = None;
        for (i, &rule) in rules.iter().enumerate() {
            if i > 0 && results.values().any(|r: &RuleResult| !r.edits.is_empty()) {
                match self.parse(language, &current, &path) {
                    Ok(t) => tree = t,
                    Err(d) => {
                        failure = Some(format!("fixes made the file unparseable ({})", d[0]));
                        break;
                    }
                }
            }
            let result = self.run_rule(&tree, rule, &path);
            if !result.edits.is_empty() {
                match apply_edit_set(&current, &result.edits) {
                    Ok(next) => current = next,
                    Err(err) => failure = Some(format!("{rule} produced invalid edits: {err}")),
                }
            }
            results.insert(rule, result);
            if failure.is_some() {
                break;
            }
        }
        outcome.results = results;
        if failure.is_none() && current != original {
            failure = self.verify(language, &current, &path, &rules).err();
        }
        if let Some(reason) = failure {
            outcome.error = Some(format!("internal error: {reason}; fixes rolled back"));
            return;
        }
        if current == original {
            return;
        }

        match &self.config.mode {
            Mode::ReportOnly => unreachable!(),
            Mode::FixInPlace => match atomic_write(&path, &current, self.config.backup) {
                Ok(()) => outcome.rewritten = true,
                Err(err) => outcome.error = Some(format!("cannot write fixed file: {err}")),
            },
            Mode::EmitPatch(dir) => {
                let rel = self.relative(&path).replace('\\', "/");
                let diff = unified_diff(&rel, original, &current);
                match write_patch(dir, &rel, &diff) {
                    Ok(patch) => outcome.patch = Some(patch),
                    Err(err) => outcome.error = Some(format!("cannot write patch: {err}")),
                }
            }
        }
    }

    /// The rewritten text must parse cleanly and contain nothing left to fix.
    fn verify(&self, language: Language, text: &str, path: &Path, rules: &[RuleId]) -> Result<(), String> {
        let tree = self
            .parse(language, text, path)
            .map_err(|d| format!("rewritten text does not parse ({})", d[0]))?;
        for &rule in rules {
            let again = self.run_rule(&tree, rule, path).fixable_count();
            if again > 0 {
                return Err(format!("{rule} still finds {again} fixable smell(s) after fixing"));
            }
        }
        Ok(())
    }
}
