//! Heuristic author extraction from raw HTML.
//!
//! Stages run in a fixed order and the first one that yields a non-empty,
//! cleaned author list wins: JSON-LD, meta tags, `rel="author"` links,
//! class/attribute heuristics, byline cues in the visible text and finally
//! the NER baseline when a provider is supplied.

mod byline;
mod clean;
pub mod config;
mod jsonld;
mod markup;
mod rules;

use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use crate::html;
use crate::lang::LanguageCode;
use crate::ner::{self, NerOptions, NerProvider};

pub use config::{BylinePatternTable, CaptureRule, ConfigError, ExtractorConfig, LanguagePatterns};
pub use jsonld::JsonLdAuthors;
use rules::CompiledRules;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Jsonld,
    MetaTag,
    RelAuthor,
    ClassHeuristic,
    BylineRegex,
    NerFallback,
    None,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Jsonld => "jsonld",
            Method::MetaTag => "meta_tag",
            Method::RelAuthor => "rel_author",
            Method::ClassHeuristic => "class_heuristic",
            Method::BylineRegex => "byline_regex",
            Method::NerFallback => "ner_fallback",
            Method::None => "none",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// JSON-LD blocks that were not valid JSON.
    #[serde(default)]
    pub malformed_jsonld: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ner_error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionResult {
    pub authors: Vec<String>,
    pub method: Method,
    /// Uncleaned strings of the stage that fired.
    pub raw: Vec<String>,
    #[serde(default)]
    pub diagnostics: Diagnostics,
}

impl ExtractionResult {
    pub fn empty() -> Self {
        Self { authors: Vec::new(), method: Method::None, raw: Vec::new(), diagnostics: Diagnostics::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtractError {
    #[error("empty HTML input")]
    EmptyInput,
}

#[derive(Debug)]
pub struct Extractor {
    config: ExtractorConfig,
    rules: CompiledRules,
}

impl Extractor {
    pub fn new(config: ExtractorConfig) -> Result<Self, ConfigError> {
        let rules = CompiledRules::compile(&config.patterns)?;
        Ok(Self { config, rules })
    }

    pub fn config(&self) -> &ExtractorConfig {
        &self.config
    }

    /// Cleans every raw string and merges the names, dropping duplicates.
    fn clean_all(&self, raw: &[String], language: LanguageCode) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for r in raw {
            for name in self.clean_author_string(r, language) {
                let key = name.to_lowercase();
                if !out.iter().any(|o| o.to_lowercase() == key) {
                    out.push(name);
                }
            }
        }
        out
    }

    pub fn clean_author_string(&self, raw: &str, language: LanguageCode) -> Vec<String> {
        clean::clean_with(raw, self.rules.get(language))
    }

    pub fn extract_byline_regex(&self, text: &str, language: LanguageCode) -> Vec<String> {
        let head = byline::head_window(text, self.config.byline_window);
        byline::find_bylines(head, self.rules.get(language))
    }

    pub fn extract(
        &self,
        html_text: &str,
        language: LanguageCode,
        ner: Option<&dyn NerProvider>,
    ) -> Result<ExtractionResult, ExtractError> {
        if html_text.trim().is_empty() {
            return Err(ExtractError::EmptyInput);
        }
        let doc = html::parse(html_text);
        let cfg = &self.config;
        let ld = jsonld::from_document(&doc, &cfg.jsonld_types);
        let mut diagnostics = Diagnostics { malformed_jsonld: ld.malformed_blocks, ner_error: None };

        let stages: [(Method, &dyn Fn() -> Vec<String>); 4] = [
            (Method::Jsonld, &|| ld.authors.clone()),
            (Method::MetaTag, &|| markup::meta_authors(&doc, &cfg.meta_names)),
            (Method::RelAuthor, &|| markup::rel_authors(&doc, cfg.candidate_cap)),
            (Method::ClassHeuristic, &|| {
                markup::class_authors(&doc, &cfg.class_attributes, &cfg.class_tokens, cfg.candidate_cap)
            }),
        ];
        for (method, run) in stages {
            let raw = run();
            let authors = self.clean_all(&raw, language);
            if !authors.is_empty() {
                return Ok(ExtractionResult { authors, method, raw, diagnostics });
            }
        }

        let text = html::visible_text(&doc);
        let raw = self.extract_byline_regex(&text, language);
        let authors = self.clean_all(&raw, language);
        if !authors.is_empty() {
            return Ok(ExtractionResult { authors, method: Method::BylineRegex, raw, diagnostics });
        }

        if let Some(provider) = ner {
            let options = NerOptions { k: cfg.ner_k.max(1), ..NerOptions::default() };
            match ner::ner_extract_text(&text, language, provider, options) {
                Ok(found) if found.method == Method::NerFallback => {
                    // Entity surfaces are names already; cleaning only normalizes them.
                    let authors = self.clean_all(&found.raw, language);
                    if !authors.is_empty() {
                        return Ok(ExtractionResult { authors, method: Method::NerFallback, raw: found.raw, diagnostics });
                    }
                }
                Ok(_) => {}
                Err(e) => {
                    log::debug!("NER fallback failed: {e}");
                    diagnostics.ner_error = Some(e.to_string());
                }
            }
        }
        Ok(ExtractionResult { diagnostics, ..ExtractionResult::empty() })
    }
}

static DEFAULT_EXTRACTOR: LazyLock<Extractor> =
    LazyLock::new(|| Extractor::new(ExtractorConfig::default()).expect("default config compiles"));

pub fn default_extractor() -> &'static Extractor {
    &DEFAULT_EXTRACTOR
}

/// Runs the cascade with the default configuration.
pub fn extract(
    html_text: &str,
    language: LanguageCode,
    ner: Option<&dyn NerProvider>,
) -> Result<ExtractionResult, ExtractError> {
    DEFAULT_EXTRACTOR.extract(html_text, language, ner)
}

pub fn extract_jsonld(html_text: &str) -> JsonLdAuthors {
    jsonld::from_document(&html::parse(html_text), &DEFAULT_EXTRACTOR.config.jsonld_types)
}

pub fn extract_meta_tags(html_text: &str) -> Vec<String> {
    markup::meta_authors(&html::parse(html_text), &DEFAULT_EXTRACTOR.config.meta_names)
}

pub fn extract_rel_author(html_text: &str) -> Vec<String> {
    markup::rel_authors(&html::parse(html_text), DEFAULT_EXTRACTOR.config.candidate_cap)
}

pub fn extract_class_heuristics(html_text: &str) -> Vec<String> {
    let cfg = &DEFAULT_EXTRACTOR.config;
    markup::class_authors(&html::parse(html_text), &cfg.class_attributes, &cfg.class_tokens, cfg.candidate_cap)
}

/// Byline cues in the first characters of `text`, which should be the
/// page's visible text.
pub fn extract_byline_regex(text: &str, language: LanguageCode) -> Vec<String> {
    DEFAULT_EXTRACTOR.extract_byline_regex(text, language)
}

pub fn clean_author_string(raw: &str, language: LanguageCode) -> Vec<String> {
    DEFAULT_EXTRACTOR.clean_author_string(raw, language)
}
