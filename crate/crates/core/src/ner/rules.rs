//! A small rule-based entity recognizer.
//!
//! For cased scripts, runs of capitalized words are candidates: runs of two or
//! more words are persons, single words are `Other` and are dropped when every
//! mention opens a sentence. Gazetteer entries are matched first and take
//! precedence over overlapping runs. Uncased scripts rely on the gazetteer alone.

use std::collections::{HashMap, HashSet};

use super::{CandidateEntity, EntityKind, Gazetteer, NerError, NerProvider};
use crate::lang::LanguageCode;
use crate::text::{is_han, is_punct_or_symbol};

const REFERENCE_LANGUAGES: [&str; 10] = ["da", "de", "el", "en", "es", "fr", "hi", "ru", "ur", "zh"];

/// Capitalized words that open a run without belonging to a name.
const LEADING_NOISE: &[&str] = &[
    "the", "a", "an", "this", "that", "these", "those", "in", "on", "at", "for", "but", "and", "or", "as", "if",
    "when", "while", "after", "before", "since", "yesterday", "today", "mr", "mrs", "ms", "dr", "prof", "sir",
    "president", "minister", "by", "written", "reported", "reporting", "monday", "tuesday", "wednesday", "thursday",
    "friday", "saturday", "sunday", "january", "february", "march", "april", "june", "july", "august", "september",
    "october", "november", "december", "par", "le", "la", "les", "un", "une", "des", "du", "selon", "hier",
    "aujourd'hui", "von", "der", "die", "das", "dem", "den", "ein", "eine", "am", "im", "gestern", "heute", "por",
    "el", "los", "las", "una", "según", "ayer", "hoy", "af", "det", "efter", "ifølge", "ο", "η", "το", "οι", "τα",
    "του", "της", "στο", "στη", "στην", "χθες", "σήμερα", "автор", "в", "на", "по", "из", "с", "к", "о", "это",
    "как", "вчера", "сегодня",
];

const PARTICLES: &[&str] = &[
    "de", "da", "del", "della", "di", "du", "dos", "das", "van", "von", "der", "den", "ten", "ter", "le", "la", "bin",
    "ibn", "al", "el",
];

/// Text markers after which the next word opens a sentence.
const SENTENCE_BREAKS: &[char] = &['.', '!', '?', '\n', '…', ':', '"', '“', '«', '„', '¿', '¡', ';'];

#[derive(Debug, Clone)]
pub struct RuleBasedProvider {
    gazetteer: Gazetteer,
    languages: Vec<LanguageCode>,
    leading_noise: HashSet<String>,
    particles: HashSet<String>,
}

impl RuleBasedProvider {
    /// Supports the ten reference languages.
    pub fn new(gazetteer: Gazetteer) -> Self {
        let languages = REFERENCE_LANGUAGES.iter().map(|c| c.parse().expect("static code")).collect();
        Self::with_languages(gazetteer, languages)
    }

    pub fn with_languages(gazetteer: Gazetteer, languages: Vec<LanguageCode>) -> Self {
        Self {
            gazetteer,
            languages,
            leading_noise: LEADING_NOISE.iter().map(|s| s.to_string()).collect(),
            particles: PARTICLES.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn gazetteer(&self) -> &Gazetteer {
        &self.gazetteer
    }
}

impl Default for RuleBasedProvider {
    fn default() -> Self {
        Self::new(Gazetteer::new())
    }
}

struct Mention {
    start: usize,
    end: usize,
    surface: String,
    kind: EntityKind,
    sentence_initial: bool,
}

struct Token {
    /// Byte range.
    start: usize,
    end: usize,
    /// Only spaces separate it from the previous token.
    joined: bool,
    sentence_start: bool,
}

fn is_word_char(c: char) -> bool {
    !(c.is_whitespace() || c.is_control() || c.is_numeric() || is_punct_or_symbol(c))
}

fn tokenize(text: &str) -> Vec<Token> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    let mut prev_end = 0;
    while i < chars.len() {
        if !is_word_char(chars[i].1) {
            i += 1;
            continue;
        }
        let start = chars[i].0;
        let mut j = i;
        let mut letters = 0;
        while j < chars.len() {
            let c = chars[j].1;
            if is_word_char(c) {
                letters += 1;
                j += 1;
            } else if matches!(c, '-' | '\'' | '’') && chars.get(j + 1).is_some_and(|&(_, n)| is_word_char(n)) {
                j += 1;
            } else {
                break;
            }
        }
        // A single letter followed by a period is an initial.
        if letters == 1 && chars.get(j).is_some_and(|&(_, c)| c == '.') {
            j += 1;
        }
        let end = chars.get(j).map_or(text.len(), |&(b, _)| b);
        let gap = &text[prev_end..start];
        tokens.push(Token {
            start,
            end,
            joined: !tokens.is_empty() && !gap.is_empty() && gap.chars().all(|c| c == ' ' || c == '\u{a0}'),
            sentence_start: tokens.is_empty() || gap.contains(SENTENCE_BREAKS),
        });
        prev_end = end;
        i = j;
    }
    tokens
}

fn capitalized(word: &str) -> bool {
    word.chars().next().is_some_and(char::is_uppercase)
}

fn at_boundary(text: &str, start: usize, end: usize) -> bool {
    let before = text[..start].chars().next_back();
    let after = text[end..].chars().next();
    !before.is_some_and(is_word_char) && !after.is_some_and(is_word_char)
}

impl RuleBasedProvider {
    fn gazetteer_mentions(&self, text: &str, spaced: bool, mentions: &mut Vec<Mention>) {
        for (name, kind) in self.gazetteer.by_length() {
            for (start, m) in text.match_indices(name.as_str()) {
                let end = start + m.len();
                let needs_boundary = spaced || !name.chars().all(is_han);
                if needs_boundary && !at_boundary(text, start, end) {
                    continue;
                }
                if mentions.iter().any(|o| start < o.end && o.start < end) {
                    continue;
                }
                let sentence_initial = text[..start].trim_end_matches([' ', '\t']).chars().next_back().is_none_or(|c| SENTENCE_BREAKS.contains(&c));
                mentions.push(Mention { start, end, surface: name.clone(), kind: *kind, sentence_initial });
            }
        }
    }

    fn capitalized_runs(&self, text: &str, mentions: &mut Vec<Mention>) {
        let tokens = tokenize(text);
        let word = |t: &Token| &text[t.start..t.end];
        let mut runs: Vec<(usize, usize)> = Vec::new();
        let mut i = 0;
        while i < tokens.len() {
            if !capitalized(word(&tokens[i])) {
                i += 1;
                continue;
            }
            let mut j = i + 1;
            while j < tokens.len() && tokens[j].joined {
                let w = word(&tokens[j]);
                if capitalized(w) {
                    j += 1;
                } else if self.particles.contains(&w.to_lowercase())
                    && tokens.get(j + 1).is_some_and(|n| n.joined && capitalized(word(n)))
                {
                    j += 2;
                } else {
                    break;
                }
            }
            runs.push((i, j));
            i = j;
        }

        let runs: Vec<(usize, usize)> = runs
            .into_iter()
            .filter_map(|(mut a, b)| {
                while a < b && self.leading_noise.contains(&word(&tokens[a]).trim_end_matches('.').to_lowercase()) {
                    a += 1;
                }
                (a < b).then_some((a, b))
            })
            .collect();
        let span = |a: usize, b: usize| &text[tokens[a].start..tokens[b - 1].end];
        let surfaces: HashSet<&str> = runs.iter().map(|&(a, b)| span(a, b)).collect();

        for (mut a, b) in runs.iter().copied() {
            // A capitalized common noun opening a sentence glues itself to the
            // name that follows ("Kritiker von Felix Weber"). When the name
            // also occurs on its own, drop the prefix.
            if tokens[a].sentence_start && b - a >= 3 {
                if let Some(shorter) =
                    (a + 1..b - 1).find(|&s| capitalized(word(&tokens[s])) && surfaces.contains(span(s, b)))
                {
                    a = shorter;
                }
            }
            let (start, end) = (tokens[a].start, tokens[b - 1].end);
            if mentions.iter().any(|o| start < o.end && o.start < end) {
                continue;
            }
            let surface = &text[start..end];
            let kind = match self.gazetteer.kind_of(surface) {
                Some(k) => k,
                None if b - a >= 2 => EntityKind::Person,
                None => EntityKind::Other,
            };
            mentions.push(Mention {
                start,
                end,
                surface: surface.to_string(),
                kind,
                // Stripped leading words mean the run itself is mid-sentence.
                sentence_initial: tokens[a].sentence_start,
            });
        }
    }
}

impl NerProvider for RuleBasedProvider {
    fn name(&self) -> &str {
        "rule-based"
    }

    fn supports(&self, language: LanguageCode) -> bool {
        self.languages.contains(&language)
    }

    fn annotate(&self, text: &str, language: LanguageCode) -> Result<Vec<CandidateEntity>, NerError> {
        if text.is_empty() {
            return Err(NerError::EmptyText);
        }
        if !self.supports(language) {
            return Err(NerError::UnsupportedLanguage { provider: self.name().into(), language });
        }
        let mut mentions = Vec::new();
        self.gazetteer_mentions(text, language.is_spaced(), &mut mentions);
        if language.is_cased() {
            self.capitalized_runs(text, &mut mentions);
        }
        mentions.sort_by_key(|m| m.start);

        struct Agg {
            entity: CandidateEntity,
            mid_sentence: bool,
            words: usize,
        }
        let mut order: Vec<String> = Vec::new();
        let mut agg: HashMap<String, Agg> = HashMap::new();
        for m in mentions {
            let offset = text[..m.start].chars().count();
            let entry = agg.entry(m.surface.clone()).or_insert_with(|| {
                order.push(m.surface.clone());
                Agg {
                    entity: CandidateEntity { surface: m.surface.clone(), kind: m.kind, first_offset: offset, frequency: 0 },
                    mid_sentence: false,
                    words: m.surface.split_whitespace().count(),
                }
            });
            entry.entity.frequency += 1;
            entry.mid_sentence |= !m.sentence_initial;
        }
        Ok(order
            .into_iter()
            .filter_map(|s| agg.remove(&s))
            .filter(|a| {
                let from_gazetteer = self.gazetteer.kind_of(&a.entity.surface).is_some();
                from_gazetteer || a.words >= 2 || a.mid_sentence
            })
            .map(|a| a.entity)
            .collect())
    }
}
