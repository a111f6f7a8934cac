//! Byline cue search over the visible text at the top of a page.

use super::config::CaptureRule;
use super::rules::{LanguageRules, NAME_SEPARATORS};
use crate::text::{is_han, is_punct_or_symbol};

/// Name-internal punctuation, kept when a word character follows.
const INNER: &[char] = &['-', '\'', '’', '‐', '.'];

fn is_word_char(c: char) -> bool {
    !(c.is_whitespace() || c.is_control() || c.is_numeric() || is_punct_or_symbol(c))
}

/// First `window` characters of `text`.
pub(crate) fn head_window(text: &str, window: usize) -> &str {
    match text.char_indices().nth(window) {
        Some((i, _)) => &text[..i],
        None => text,
    }
}

/// Finds every cue in `text` and captures the name run that follows it.
pub(crate) fn find_bylines(text: &str, rules: &LanguageRules) -> Vec<String> {
    let Some(re) = &rules.cue_in_line else { return Vec::new() };
    let mut found: Vec<String> = Vec::new();
    for line in text.lines() {
        for m in re.find_iter(line) {
            let captured = capture(&line[m.end()..], rules);
            if !captured.is_empty() && !found.iter().any(|f| f == captured) {
                found.push(captured.to_string());
            }
        }
    }
    found
}

/// A word starting at byte `start` of `s`: (end of the word, whether it ended on a sentence period).
fn read_word(s: &str, start: usize) -> (usize, bool) {
    let mut end = start;
    let mut letters = 0;
    let mut iter = s[start..].char_indices().peekable();
    while let Some((i, c)) = iter.next() {
        let abs = start + i;
        if is_word_char(c) {
            letters += 1;
            end = abs + c.len_utf8();
        } else if INNER.contains(&c) {
            let next_is_word = iter.peek().is_some_and(|&(_, n)| is_word_char(n));
            if next_is_word {
                end = abs + c.len_utf8();
            } else if c == '.' {
                // "J." is an initial; "Doe." ends the sentence.
                if letters == 1 {
                    return (abs + 1, false);
                }
                return (end, true);
            } else {
                break;
            }
        } else {
            break;
        }
    }
    (end, false)
}

fn first_upper(word: &str) -> bool {
    word.chars().next().is_some_and(char::is_uppercase)
}

/// Captures the name run at the start of `rest` according to the language's rule.
pub(crate) fn capture<'a>(rest: &'a str, rules: &LanguageRules) -> &'a str {
    let end = match rules.capture {
        CaptureRule::CapitalizedRun { max_words } => capture_words(rest, rules, max_words, true),
        CaptureRule::WordRun { max_words } => capture_words(rest, rules, max_words, false),
        CaptureRule::IdeographRun { max_chars } => capture_ideographs(rest, max_chars),
    };
    rest[..end].trim()
}

fn capture_words(rest: &str, rules: &LanguageRules, max_words: usize, cased: bool) -> usize {
    let mut pos = 0;
    let mut accepted_end = 0;
    let mut total_words = 0;
    let mut name_words = 0;
    let max_total = max_words * 4;
    // Skip spaces; a line break ends the byline.
    while let Some((i, c)) = rest[pos..].char_indices().find(|&(_, c)| !(c.is_whitespace() && c != '\n')) {
        pos += i;
        if c == '\n' {
            break;
        }
        if NAME_SEPARATORS.contains(&c) {
            if accepted_end == 0 {
                break;
            }
            name_words = 0;
            pos += c.len_utf8();
            continue;
        }
        if !is_word_char(c) {
            break;
        }
        let (end, sentence_end) = read_word(rest, pos);
        let word = &rest[pos..end];
        let lower = word.to_lowercase();
        if rules.stop_words.contains(&lower) {
            break;
        }
        if rules.date_words.contains(&lower) {
            let after = rest[end..].trim_start_matches(|c: char| c.is_whitespace() && c != '\n');
            if after.chars().next().is_some_and(|c| c.is_numeric()) {
                break;
            }
        }
        if rules.and_words.contains(&lower) {
            if accepted_end == 0 {
                break;
            }
            name_words = 0;
            pos = end;
            continue;
        }
        let is_particle = rules.particles.contains(&lower);
        let accept = if cased { first_upper(word) } else { true };
        if accept {
            if name_words >= max_words {
                break;
            }
            name_words += 1;
            total_words += 1;
            accepted_end = end;
        } else if !is_particle {
            break;
        }
        pos = end;
        if sentence_end || total_words >= max_total {
            break;
        }
    }
    accepted_end
}

fn capture_ideographs(rest: &str, max_chars: usize) -> usize {
    let mut accepted_end = 0;
    let chars: Vec<(usize, char)> = rest.char_indices().collect();
    for (k, &(i, c)) in chars.iter().enumerate() {
        if k >= max_chars || c == '\n' {
            break;
        }
        let joins = c == '·' || c == '・';
        if is_han(c) {
            accepted_end = i + c.len_utf8();
        } else if joins {
            let next_han = chars.get(k + 1).is_some_and(|&(_, n)| is_han(n));
            if !(accepted_end > 0 && next_han) {
                break;
            }
        } else if !(c == ' ' || c == '\u{3000}' || NAME_SEPARATORS.contains(&c)) || accepted_end == 0 {
            break;
        }
    }
    accepted_end
}
