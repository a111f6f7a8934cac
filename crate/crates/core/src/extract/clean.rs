//! Turning raw candidate strings into individual author names.

use super::rules::LanguageRules;
use crate::text::{char_len, collapse_whitespace, is_name_edge_noise, nfc};

/// Picks the segment of `s` that holds the name: text after a role or date
/// separator is dropped, unless only a later segment starts with a cue.
fn name_segment<'a>(s: &'a str, rules: &LanguageRules) -> &'a str {
    let segments: Vec<&str> = s.split(|c| rules.segment_separators.contains(&c)).collect();
    if segments.len() == 1 {
        return s;
    }
    let has_letters = |seg: &&str| seg.chars().any(char::is_alphabetic);
    let with_cue = segments.iter().find(|seg| {
        let t = seg.trim_start();
        has_letters(seg) && rules.strip_cues(t).len() < t.len()
    });
    with_cue.or_else(|| segments.iter().find(|s| has_letters(s))).copied().unwrap_or("")
}

/// Trims edge noise but keeps the period of a trailing initial ("Priya N.").
fn trim_name(fragment: &str) -> String {
    let start_trimmed = fragment.trim_start_matches(is_name_edge_noise);
    let core = start_trimmed.trim_end_matches(is_name_edge_noise);
    let after = &start_trimmed[core.len()..];
    let last_word = core.rsplit(' ').next().unwrap_or("");
    let initial = char_len(last_word) == 1 && last_word.chars().all(char::is_alphabetic);
    if initial && after.starts_with('.') {
        format!("{core}.")
    } else {
        core.to_string()
    }
}

pub(crate) fn clean_with(raw: &str, rules: &LanguageRules) -> Vec<String> {
    let text = collapse_whitespace(&nfc(raw));
    let segment = name_segment(&text, rules);
    let body = rules.strip_cues(segment.trim_start_matches(is_name_edge_noise));

    let mut out: Vec<String> = Vec::new();
    for piece in rules.splitter.split(body) {
        let piece = rules.strip_cues(piece.trim());
        let name = collapse_whitespace(&trim_name(piece));
        if char_len(&name) < 2 || !name.chars().any(char::is_alphabetic) {
            continue;
        }
        let key = name.to_lowercase();
        if !out.iter().any(|o| o.to_lowercase() == key) {
            out.push(name);
        }
    }
    out
}
