//! Small Unicode helpers shared by the corpus loader, the extractors and the metrics.

use unicode_general_category::{get_general_category, GeneralCategory};
use unicode_normalization::{is_nfc_quick, IsNormalized, UnicodeNormalization};

/// NFC-normalizes `s`, borrowing when it is already normalized.
pub fn nfc(s: &str) -> String {
    match is_nfc_quick(s.chars()) {
        IsNormalized::Yes => s.to_string(),
        _ => s.nfc().collect(),
    }
}

/// Unicode punctuation (P*) or symbol (S*) categories.
pub fn is_punct_or_symbol(c: char) -> bool {
    use GeneralCategory::*;
    matches!(
        get_general_category(c),
        ConnectorPunctuation
            | DashPunctuation
            | OpenPunctuation
            | ClosePunctuation
            | InitialPunctuation
            | FinalPunctuation
            | OtherPunctuation
            | MathSymbol
            | CurrencySymbol
            | ModifierSymbol
            | OtherSymbol
    )
}

/// Characters removed from the ends of a name: whitespace, controls, punctuation, symbols.
pub fn is_name_edge_noise(c: char) -> bool {
    c.is_whitespace() || c.is_control() || c == '\u{200b}' || c == '\u{feff}' || is_punct_or_symbol(c)
}

/// Collapses every whitespace run to a single ASCII space and trims the ends.
pub fn collapse_whitespace(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for word in s.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(word);
    }
    out
}

/// Trims whitespace, punctuation and symbols from both ends.
pub fn trim_noise(s: &str) -> &str {
    s.trim_matches(is_name_edge_noise)
}

pub fn char_len(s: &str) -> usize {
    s.chars().count()
}

/// Whether `c` belongs to a cased script and carries case.
pub fn has_case(c: char) -> bool {
    c.is_uppercase() || c.is_lowercase()
}

/// Han ideographs (CJK unified blocks and compatibility ideographs).
pub fn is_han(c: char) -> bool {
    matches!(c as u32,
        0x3400..=0x4DBF | 0x4E00..=0x9FFF | 0xF900..=0xFAFF | 0x20000..=0x2FA1F | 0x3005 | 0x3007)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nfc_composes() {
        let decomposed = "Jose\u{301}";
        assert_eq!(nfc(decomposed), "Jos\u{e9}");
        assert_eq!(nfc("plain"), "plain");
    }

    #[test]
    fn trims_multiscript_punctuation() {
        assert_eq!(trim_noise("  «Jane Doe», "), "Jane Doe");
        assert_eq!(trim_noise("—राम कुमार।"), "राम कुमार");
        assert_eq!(trim_noise("（王小明）"), "王小明");
        assert_eq!(trim_noise("علی احمد۔"), "علی احمد");
        assert_eq!(trim_noise("O'Neil-Smith"), "O'Neil-Smith");
    }

    #[test]
    fn devanagari_marks_are_not_noise() {
        // Vowel signs and virama are marks, not punctuation.
        assert_eq!(trim_noise("हिन्दी"), "हिन्दी");
        assert_eq!(trim_noise("क्"), "क्");
    }

    #[test]
    fn whitespace_collapse() {
        assert_eq!(collapse_whitespace(" a \n\t b  c "), "a b c");
        assert_eq!(collapse_whitespace("   "), "");
    }
}
