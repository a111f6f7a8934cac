//! Frequency-based NER baseline.
//!
//! Entities are pulled from the page's visible text by a [`NerProvider`],
//! counted, and the least frequent person entities are taken as the authors,
//! on the premise that bylines name the author once while the story's subjects
//! recur. Ties go to the earlier first mention.

mod gazetteer;
mod rules;
mod stdio;

use serde::{Deserialize, Serialize};

use crate::extract::{ExtractionResult, Method};
use crate::html;
use crate::lang::LanguageCode;

pub use gazetteer::Gazetteer;
pub use rules::RuleBasedProvider;
pub use stdio::StdioNerProvider;

pub const DEFAULT_K: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntityKind {
    Person,
    Organization,
    Other,
}

/// An entity aggregated over all of its mentions in one text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateEntity {
    pub surface: String,
    pub kind: EntityKind,
    /// Character index of the first mention.
    pub first_offset: usize,
    /// Number of mentions, at least 1.
    pub frequency: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NerError {
    #[error("NER provider {provider} does not support language {language}")]
    UnsupportedLanguage { provider: String, language: LanguageCode },
    #[error("empty text")]
    EmptyText,
    #[error("NER provider failed: {0}")]
    Provider(String),
}

/// Entity recognition for one or more languages.
pub trait NerProvider: Send + Sync {
    fn name(&self) -> &str;

    fn supports(&self, language: LanguageCode) -> bool;

    fn annotate(&self, text: &str, language: LanguageCode) -> Result<Vec<CandidateEntity>, NerError>;

    /// Whether `annotate` may run on several threads at once. Callers
    /// serialize calls to providers that return false.
    fn concurrent(&self) -> bool {
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NerOptions {
    /// Number of candidates returned.
    pub k: usize,
    /// Also consider organization entities (wire-service bylines).
    pub include_organizations: bool,
}

impl Default for NerOptions {
    fn default() -> Self {
        Self { k: DEFAULT_K, include_organizations: false }
    }
}

/// Person entities ordered by ascending frequency then first mention; the first `k`.
pub fn select_authors(entities: &[CandidateEntity], k: usize) -> Vec<String> {
    select_authors_with(entities, NerOptions { k, include_organizations: false })
}

pub fn select_authors_with(entities: &[CandidateEntity], options: NerOptions) -> Vec<String> {
    assert!(options.k >= 1, "k must be at least 1");
    let mut candidates: Vec<&CandidateEntity> = entities
        .iter()
        .filter(|e| e.kind == EntityKind::Person || (options.include_organizations && e.kind == EntityKind::Organization))
        .collect();
    candidates.sort_by(|a, b| {
        (a.frequency, a.first_offset, &a.surface).cmp(&(b.frequency, b.first_offset, &b.surface))
    });
    let mut out: Vec<String> = Vec::new();
    for c in candidates {
        if out.len() == options.k {
            break;
        }
        if !out.contains(&c.surface) {
            out.push(c.surface.clone());
        }
    }
    out
}

/// Runs the baseline on a page: visible text, provider, selection.
pub fn ner_extract(
    html_text: &str,
    language: LanguageCode,
    provider: &dyn NerProvider,
    options: NerOptions,
) -> Result<ExtractionResult, NerError> {
    let doc = html::parse(html_text);
    ner_extract_text(&html::visible_text(&doc), language, provider, options)
}

pub(crate) fn ner_extract_text(
    text: &str,
    language: LanguageCode,
    provider: &dyn NerProvider,
    options: NerOptions,
) -> Result<ExtractionResult, NerError> {
    if text.trim().is_empty() {
        return Ok(ExtractionResult::empty());
    }
    if !provider.supports(language) {
        return Err(NerError::UnsupportedLanguage { provider: provider.name().to_string(), language });
    }
    let mut entities = provider.annotate(text, language)?;
    // Providers may normalize surfaces; keep only those present verbatim.
    entities.retain(|e| !e.surface.is_empty() && text.contains(e.surface.as_str()));
    let authors = select_authors_with(&entities, options);
    if authors.is_empty() {
        return Ok(ExtractionResult::empty());
    }
    Ok(ExtractionResult { raw: authors.clone(), authors, method: Method::NerFallback, diagnostics: Default::default() })
}
