//! Conversion of a LabelStudio JSON task export into a gold corpus.
//!
//! Each task carries the page in `data.html` (or a configured key) and one or
//! more annotations whose `result` entries are highlighted spans. Spans whose
//! label contains "author" become author strings. The first annotation that
//! was not cancelled is used. Tasks are dropped when every annotation was
//! skipped, when nobody annotated them, or when the annotator flagged them
//! through a choice such as "wrong language".

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;
use serde_json::Value;

use super::{Corpus, CorpusError, Document, GoldLabel};
use crate::lang::LanguageCode;
use crate::text::{collapse_whitespace, nfc};

#[derive(Debug, Clone)]
pub struct ConvertOptions {
    /// Keys tried in `data` for the page HTML.
    pub html_keys: Vec<String>,
    /// Language for tasks that carry none (LabelStudio projects were set up per language).
    pub default_language: Option<LanguageCode>,
    /// Span label substring (case-insensitive) identifying author highlights.
    pub author_label: String,
    /// Choice values (case-insensitive) that mark a task as unannotatable.
    pub reject_choices: Vec<String>,
}

impl Default for ConvertOptions {
    fn default() -> Self {
        Self {
            html_keys: vec!["html".into(), "text".into()],
            default_language: None,
            author_label: "author".into(),
            reject_choices: [
                "wrong language",
                "not in expected language",
                "mangled formatting",
                "formatting issue",
                "author in image",
                "unannotatable",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SkipReason {
    /// Every annotation was cancelled (the annotator pressed "skip").
    Skipped,
    /// The annotator marked the task with a rejecting choice.
    Flagged,
    /// No annotation at all.
    Unannotated,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ConversionReport {
    pub tasks: usize,
    pub converted: usize,
    pub dropped: BTreeMap<SkipReason, usize>,
    /// Task ids that were dropped, with the reason.
    pub dropped_tasks: Vec<(String, SkipReason)>,
}

impl ConversionReport {
    pub fn dropped_total(&self) -> usize {
        self.dropped.values().sum()
    }
}

pub fn convert_labelstudio(export: &str, options: &ConvertOptions) -> Result<(Corpus, ConversionReport), CorpusError> {
    let value: Value = serde_json::from_str(export)
        .map_err(|e| CorpusError::Malformed { line: e.line(), reason: format!("LabelStudio export: {e}") })?;
    let Value::Array(tasks) = value else {
        return Err(CorpusError::Malformed { line: 1, reason: "LabelStudio export must be a list of tasks".into() });
    };

    let mut report = ConversionReport { tasks: tasks.len(), ..Default::default() };
    let mut documents = Vec::new();
    let mut labels = Vec::new();
    for (idx, task) in tasks.iter().enumerate() {
        let position = idx + 1;
        let task_id = task_id(task, position);
        let data = task.get("data").cloned().unwrap_or(Value::Null);

        let annotation = match pick_annotation(task) {
            Ok(a) => a,
            Err(reason) => {
                report.drop(task_id, reason);
                continue;
            }
        };
        let results = annotation.get("result").and_then(Value::as_array).map(Vec::as_slice).unwrap_or(&[]);
        if results.iter().any(|r| is_rejecting_choice(r, options)) {
            report.drop(task_id, SkipReason::Flagged);
            continue;
        }

        let html = options
            .html_keys
            .iter()
            .find_map(|k| data.get(k).and_then(Value::as_str))
            .filter(|h| !h.is_empty())
            .ok_or_else(|| CorpusError::Invalid { line: position, reason: format!("task {task_id} has no HTML payload") })?;
        let language = match data.get("language").or_else(|| data.get("lang")).and_then(Value::as_str) {
            Some(code) => code
                .trim()
                .to_ascii_lowercase()
                .parse()
                .map_err(|_| CorpusError::InvalidLanguage { line: position, code: code.to_string() })?,
            None => options.default_language.ok_or_else(|| CorpusError::Invalid {
                line: position,
                reason: format!("task {task_id} has no language and no default was given"),
            })?,
        };
        let url = data.get("url").and_then(Value::as_str).filter(|u| !u.is_empty()).map(nfc);
        let doc_id = data.get("id").and_then(Value::as_str).map(str::to_string).unwrap_or_else(|| task_id.clone());

        let mut authors = Vec::new();
        let mut seen = HashSet::new();
        for r in results {
            if let Some(text) = author_span_text(r, options) {
                let text = collapse_whitespace(&nfc(text));
                if !text.is_empty() && seen.insert(text.clone()) {
                    authors.push(text);
                }
            }
        }

        documents.push(Document { id: doc_id.clone(), language, url, html: nfc(html) });
        labels.push(GoldLabel { doc_id, authors });
        report.converted += 1;
    }
    Ok((Corpus::new(documents, labels)?, report))
}

impl ConversionReport {
    fn drop(&mut self, task_id: String, reason: SkipReason) {
        *self.dropped.entry(reason).or_insert(0) += 1;
        self.dropped_tasks.push((task_id, reason));
    }
}

fn task_id(task: &Value, position: usize) -> String {
    match task.get("id") {
        Some(Value::String(s)) => s.clone(),
        Some(Value::Number(n)) => n.to_string(),
        _ => format!("task-{position}"),
    }
}

fn pick_annotation(task: &Value) -> Result<&Value, SkipReason> {
    let annotations = task
        .get("annotations")
        .or_else(|| task.get("completions"))
        .and_then(Value::as_array)
        .filter(|a| !a.is_empty())
        .ok_or(SkipReason::Unannotated)?;
    annotations
        .iter()
        .find(|a| !a.get("was_cancelled").and_then(Value::as_bool).unwrap_or(false))
        .ok_or(SkipReason::Skipped)
}

fn is_rejecting_choice(result: &Value, options: &ConvertOptions) -> bool {
    let Some(choices) = result.pointer("/value/choices").and_then(Value::as_array) else {
        return false;
    };
    choices.iter().filter_map(Value::as_str).any(|c| {
        let c = c.trim().to_lowercase();
        options.reject_choices.iter().any(|r| r.to_lowercase() == c)
    })
}

fn author_span_text<'a>(result: &'a Value, options: &ConvertOptions) -> Option<&'a str> {
    let value = result.get("value")?;
    let needle = options.author_label.to_lowercase();
    let is_author = ["hypertextlabels", "labels"]
        .iter()
        .filter_map(|k| value.get(*k).and_then(Value::as_array))
        .flatten()
        .filter_map(Value::as_str)
        .any(|l| l.to_lowercase().contains(&needle));
    if is_author {
        value.get("text").and_then(Value::as_str)
    } else {
        None
    }
}
