//! Pattern tables compiled into regexes and lookup sets, one entry per language.

use std::collections::{HashMap, HashSet};

use regex::Regex;

use super::config::{BylinePatternTable, CaptureRule, ConfigError};
use crate::lang::LanguageCode;
use crate::text::is_han;

/// Characters that may separate two names inside one candidate.
pub(crate) const NAME_SEPARATORS: &[char] = &[',', ';', '/', '&', '、', '，', '；', '＆', '／'];

#[derive(Debug)]
pub(crate) struct LanguageRules {
    /// Cue at the start of a line or after a segment separator.
    pub cue_in_line: Option<Regex>,
    /// Cue at the start of a string.
    pub cue_prefix: Option<Regex>,
    /// Name delimiters: separator characters and whole "and" words.
    pub splitter: Regex,
    pub and_words: HashSet<String>,
    pub particles: HashSet<String>,
    pub stop_words: HashSet<String>,
    pub date_words: HashSet<String>,
    pub segment_separators: Vec<char>,
    pub capture: CaptureRule,
}

#[derive(Debug)]
pub(crate) struct CompiledRules {
    by_language: HashMap<LanguageCode, LanguageRules>,
    /// Rules for languages without an entry: fallback patterns only.
    generic: HashMap<(bool, bool), LanguageRules>,
}

impl CompiledRules {
    pub fn compile(table: &BylinePatternTable) -> Result<Self, ConfigError> {
        let mut by_language = HashMap::new();
        for &lang in table.languages.keys() {
            by_language.insert(lang, LanguageRules::compile(table, lang)?);
        }
        // Representative codes per script class for unlisted languages.
        let mut generic = HashMap::new();
        for code in ["it", "fa", "ja"] {
            let lang: LanguageCode = code.parse().expect("static code");
            let mut fallback_only = table.clone();
            fallback_only.languages.clear();
            generic.insert((lang.is_cased(), lang.is_spaced()), LanguageRules::compile(&fallback_only, lang)?);
        }
        Ok(Self { by_language, generic })
    }

    pub fn get(&self, language: LanguageCode) -> &LanguageRules {
        self.by_language.get(&language).unwrap_or_else(|| {
            self.generic
                .get(&(language.is_cased(), language.is_spaced()))
                .or_else(|| self.generic.get(&(true, true)))
                .expect("generic rules compiled")
        })
    }
}

fn lower_set<'a>(words: impl Iterator<Item = &'a str>) -> HashSet<String> {
    words.map(|w| w.trim().to_lowercase()).filter(|w| !w.is_empty()).collect()
}

/// Regex fragment for one cue, including what may follow it.
fn cue_fragment(cue: &str, allow_end: bool) -> Option<String> {
    let cue = cue.trim();
    let (body, colon_required) = match cue.strip_suffix([':', '：']) {
        Some(body) => (body.trim_end(), true),
        None => (cue, false),
    };
    let last = body.chars().last()?;
    let escaped = regex::escape(body).replace(' ', r"\s+");
    let tail = if colon_required {
        r"\s*[:：]\s*".to_string()
    } else if last.is_alphabetic() && !is_han(last) {
        // Whole word: a colon or at least one space must follow.
        if allow_end {
            r"(?:\s*[:：]\s*|\s+|$)".to_string()
        } else {
            r"(?:\s*[:：]\s*|\s+)".to_string()
        }
    } else {
        r"\s*[:：]?\s*".to_string()
    };
    Some(format!("{escaped}{tail}"))
}

fn cue_alternation(cues: &[&str], allow_end: bool) -> Option<String> {
    let mut cues: Vec<&str> = cues.to_vec();
    // Longest first so "Written by" wins over "By".
    cues.sort_by_key(|c| std::cmp::Reverse(c.chars().count()));
    cues.dedup();
    let parts: Vec<String> = cues.iter().filter_map(|c| cue_fragment(c, allow_end)).collect();
    if parts.is_empty() {
        None
    } else {
        Some(parts.join("|"))
    }
}

fn compile(pattern: String) -> Result<Regex, ConfigError> {
    Regex::new(&pattern).map_err(|source| ConfigError::Pattern { pattern, source })
}

impl LanguageRules {
    fn compile(table: &BylinePatternTable, lang: LanguageCode) -> Result<Self, ConfigError> {
        let cues: Vec<&str> = table.cues(lang).collect();
        let segment_separators = table.segment_separators(lang);
        let seps: String = segment_separators.iter().map(|c| regex::escape(&c.to_string())).collect();

        let cue_in_line = match cue_alternation(&cues, false) {
            Some(alt) => Some(compile(format!(r"(?im)(?:^|[{seps}(（\[])[\t ]*(?:{alt})"))?),
            None => None,
        };
        let cue_prefix = match cue_alternation(&cues, true) {
            Some(alt) => Some(compile(format!(r"(?i)^(?:{alt})"))?),
            None => None,
        };

        let and_words = lower_set(table.and_words(lang));
        let seps_class: String = NAME_SEPARATORS.iter().map(|c| regex::escape(&c.to_string())).collect();
        let mut words: Vec<String> = and_words.iter().map(|w| regex::escape(w)).collect();
        words.sort();
        let splitter = if words.is_empty() {
            compile(format!("[{seps_class}]"))?
        } else {
            compile(format!(r"(?i)[{seps_class}]|(?:^|\s)(?:{})(?:\s|$)", words.join("|")))?
        };

        Ok(Self {
            cue_in_line,
            cue_prefix,
            splitter,
            and_words,
            particles: lower_set(table.particles(lang)),
            stop_words: lower_set(table.stop_words(lang)),
            date_words: lower_set(table.date_words(lang)),
            segment_separators,
            capture: table.capture(lang),
        })
    }

    /// Removes leading cue words until none is left.
    pub fn strip_cues<'a>(&self, mut s: &'a str) -> &'a str {
        let Some(re) = &self.cue_prefix else { return s };
        loop {
            let trimmed = s.trim_start();
            match re.find(trimmed) {
                Some(m) if m.end() > 0 => s = &trimmed[m.end()..],
                _ => return trimmed,
            }
        }
    }
}
