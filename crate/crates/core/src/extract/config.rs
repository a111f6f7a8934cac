//! Tunable constants and the per-language byline pattern table.
//!
//! Everything here can be overridden from a TOML or JSON file; fields left out
//! keep their defaults.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::lang::LanguageCode;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("invalid TOML config: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("invalid JSON config: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid pattern {pattern:?}: {source}")]
    Pattern { pattern: String, source: regex::Error },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExtractorConfig {
    /// schema.org types whose `author` is collected from JSON-LD.
    pub jsonld_types: Vec<String>,
    /// `<meta>` name/property values that carry an author (compared case-insensitively).
    pub meta_names: Vec<String>,
    /// Attribute substrings marking byline-ish elements.
    pub class_tokens: Vec<String>,
    /// Attributes searched for `class_tokens`.
    pub class_attributes: Vec<String>,
    /// Longest element text, in characters, accepted as a candidate.
    pub candidate_cap: usize,
    /// Number of leading visible-text characters searched for byline cues.
    pub byline_window: usize,
    /// Candidates kept by the NER fallback.
    pub ner_k: usize,
    pub patterns: BylinePatternTable,
}

impl Default for ExtractorConfig {
    fn default() -> Self {
        Self {
            jsonld_types: strings(&[
                "Article",
                "NewsArticle",
                "BlogPosting",
                "ReportageNewsArticle",
                "AnalysisNewsArticle",
                "OpinionNewsArticle",
                "BackgroundNewsArticle",
                "ReviewNewsArticle",
                "LiveBlogPosting",
                "SocialMediaPosting",
                "Report",
            ]),
            meta_names: strings(&[
                "author",
                "article:author",
                "parsely-author",
                "sailthru.author",
                "dc.creator",
                "dcterms.creator",
                "twitter:creator",
            ]),
            class_tokens: strings(&["author", "byline", "writer", "creator"]),
            class_attributes: strings(&["class", "id", "itemprop", "rel"]),
            candidate_cap: 120,
            byline_window: 2000,
            ner_k: 3,
            patterns: BylinePatternTable::default(),
        }
    }
}

impl ExtractorConfig {
    /// Loads a `.json` file as JSON and anything else as TOML.
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
            Ok(serde_json::from_str(&text)?)
        } else {
            Ok(toml::from_str(&text)?)
        }
    }
}

/// Byline cues and name separators for one language.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LanguagePatterns {
    /// Words introducing a byline. A trailing `:` makes the colon mandatory.
    pub cues: Vec<String>,
    /// Words joining two author names ("and").
    pub and_words: Vec<String>,
    /// Lowercase words allowed inside a capitalized name ("van", "de").
    pub particles: Vec<String>,
    /// Words that always end a captured name.
    pub stop_words: Vec<String>,
    /// Words that end a captured name when a number follows them (month names).
    pub date_words: Vec<String>,
    /// Characters after which the rest of a candidate is dropped (roles, dates).
    pub segment_separators: Option<Vec<char>>,
    pub capture: Option<CaptureRule>,
}

/// How the name following a cue is delimited.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaptureRule {
    /// Cased scripts: a run of capitalized words, joined by separators and particles.
    CapitalizedRun { max_words: usize },
    /// Uncased, space-separated scripts: up to `max_words` words per name.
    WordRun { max_words: usize },
    /// Unspaced scripts: a run of ideographs and name separators.
    IdeographRun { max_chars: usize },
}

/// Loaded tables are merged over the defaults: a language entry replaces the
/// default entry for that language only, and a `fallback` entry replaces the
/// default fallback. Set `replace_defaults = true` to start from an empty table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "RawPatternTable")]
pub struct BylinePatternTable {
    pub languages: BTreeMap<LanguageCode, LanguagePatterns>,
    /// Applied for every language in addition to its own entry.
    pub fallback: LanguagePatterns,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPatternTable {
    #[serde(default)]
    languages: BTreeMap<LanguageCode, LanguagePatterns>,
    fallback: Option<LanguagePatterns>,
    #[serde(default)]
    replace_defaults: bool,
}

impl From<RawPatternTable> for BylinePatternTable {
    fn from(raw: RawPatternTable) -> Self {
        let mut table = if raw.replace_defaults {
            Self { languages: BTreeMap::new(), fallback: LanguagePatterns::default() }
        } else {
            Self::default()
        };
        table.languages.extend(raw.languages);
        if let Some(fallback) = raw.fallback {
            table.fallback = fallback;
        }
        table
    }
}

pub const DEFAULT_SEGMENT_SEPARATORS: &[char] = &['|', '—', '–', '·', '•', '‖', '¦'];

impl BylinePatternTable {
    pub fn get(&self, language: LanguageCode) -> Option<&LanguagePatterns> {
        self.languages.get(&language)
    }

    /// Cues for `language` followed by the fallback cues.
    pub fn cues(&self, language: LanguageCode) -> impl Iterator<Item = &str> {
        self.get(language).into_iter().flat_map(|p| p.cues.iter()).chain(self.fallback.cues.iter()).map(String::as_str)
    }

    pub fn and_words(&self, language: LanguageCode) -> impl Iterator<Item = &str> {
        self.get(language)
            .into_iter()
            .flat_map(|p| p.and_words.iter())
            .chain(self.fallback.and_words.iter())
            .map(String::as_str)
    }

    pub fn particles(&self, language: LanguageCode) -> impl Iterator<Item = &str> {
        self.get(language)
            .into_iter()
            .flat_map(|p| p.particles.iter())
            .chain(self.fallback.particles.iter())
            .map(String::as_str)
    }

    pub fn stop_words(&self, language: LanguageCode) -> impl Iterator<Item = &str> {
        self.get(language)
            .into_iter()
            .flat_map(|p| p.stop_words.iter())
            .chain(self.fallback.stop_words.iter())
            .map(String::as_str)
    }

    pub fn date_words(&self, language: LanguageCode) -> impl Iterator<Item = &str> {
        self.get(language)
            .into_iter()
            .flat_map(|p| p.date_words.iter())
            .chain(self.fallback.date_words.iter())
            .map(String::as_str)
    }

    pub fn segment_separators(&self, language: LanguageCode) -> Vec<char> {
        self.get(language)
            .and_then(|p| p.segment_separators.clone())
            .or_else(|| self.fallback.segment_separators.clone())
            .unwrap_or_else(|| DEFAULT_SEGMENT_SEPARATORS.to_vec())
    }

    pub fn capture(&self, language: LanguageCode) -> CaptureRule {
        if let Some(rule) = self.get(language).and_then(|p| p.capture) {
            return rule;
        }
        if !language.is_spaced() {
            CaptureRule::IdeographRun { max_chars: 40 }
        } else if language.is_cased() {
            CaptureRule::CapitalizedRun { max_words: 12 }
        } else {
            CaptureRule::WordRun { max_words: 4 }
        }
    }
}

fn strings(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn lang(code: &str) -> LanguageCode {
    code.parse().expect("built-in language code")
}

impl Default for BylinePatternTable {
    fn default() -> Self {
        let mut languages = BTreeMap::new();
        let mut add = |code: &str, cues: &[&str], and_words: &[&str], particles: &[&str]| {
            languages.insert(
                lang(code),
                LanguagePatterns {
                    cues: strings(cues),
                    and_words: strings(and_words),
                    particles: strings(particles),
                    ..Default::default()
                },
            );
        };
        add(
            "en",
            &["Written by", "Words by", "Reported by", "Reporting by", "Story by", "By", "Author:", "Authors:"],
            &[],
            &[],
        );
        add("fr", &["Écrit par", "Par", "Auteur:", "Auteurs:", "Autrice:"], &["et"], &["de", "du", "des", "le", "la"]);
        add("de", &["Geschrieben von", "Von", "Autor:", "Autorin:", "Autoren:", "Text:"], &["und"], &["von", "van", "der", "zu"]);
        add("es", &["Escrito por", "Por", "Autor:", "Autora:", "Redacción:"], &["y", "e"], &["de", "del", "la", "los"]);
        add("da", &["Skrevet af", "Af", "Forfatter:", "Tekst:"], &["og"], &["af", "von", "van", "de"]);
        add("el", &["Γράφει ο", "Γράφει η", "Γράφει", "Του", "Της", "Των", "Συντάκτης:"], &["και"], &[]);
        add("ru", &["Автор:", "Авторы:", "Автор", "Текст:", "Корреспондент:"], &["и"], &["фон", "де"]);
        add("hi", &["लेखक:", "लेखक", "रिपोर्ट:", "संवाददाता:", "द्वारा:"], &["और", "एवं", "व"], &[]);
        add("ur", &["تحریر:", "تحریر", "رپورٹ:", "مصنف:", "از"], &["اور"], &[]);
        add("zh", &["作者：", "作者:", "作者", "记者", "記者", "文／", "文/", "撰文："], &[], &[]);
        if let Some(zh) = languages.get_mut(&lang("zh")) {
            // U+00B7 joins transliterated given and family names.
            zh.segment_separators = Some(vec!['|', '—', '–', '•', '‖', '¦']);
        }

        let fallback = LanguagePatterns {
            cues: strings(&["Written by", "Edited by", "Posted by", "Reported by", "By", "Author:", "Authors:"]),
            and_words: strings(&["and"]),
            particles: strings(&[
                "de", "da", "del", "della", "di", "du", "dos", "das", "van", "von", "der", "den", "ten", "ter", "le",
                "la", "bin", "ibn", "al", "el", "y",
            ]),
            stop_words: strings(&["updated", "published", "posted", "photo", "photos", "image", "video"]),
            date_words: strings(&[
                "jan", "feb", "mar", "apr", "may", "jun", "jul", "aug", "sep", "sept", "oct", "nov", "dec",
                "january", "february", "march", "april", "june", "july", "august", "september", "october",
                "november", "december",
            ]),
            segment_separators: None,
            capture: None,
        };
        Self { languages, fallback }
    }
}
