//! ISO 639-1 language codes and the script properties the extractors care about.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Every ISO 639-1 two-letter code, sorted.
const ISO_639_1: &[&str] = &[
    "aa", "ab", "ae", "af", "ak", "am", "an", "ar", "as", "av", "ay", "az", "ba", "be", "bg",
    "bh", "bi", "bm", "bn", "bo", "br", "bs", "ca", "ce", "ch", "co", "cr", "cs", "cu", "cv",
    "cy", "da", "de", "dv", "dz", "ee", "el", "en", "eo", "es", "et", "eu", "fa", "ff", "fi",
    "fj", "fo", "fr", "fy", "ga", "gd", "gl", "gn", "gu", "gv", "ha", "he", "hi", "ho", "hr",
    "ht", "hu", "hy", "hz", "ia", "id", "ie", "ig", "ii", "ik", "io", "is", "it", "iu", "ja",
    "jv", "ka", "kg", "ki", "kj", "kk", "kl", "km", "kn", "ko", "kr", "ks", "ku", "kv", "kw",
    "ky", "la", "lb", "lg", "li", "ln", "lo", "lt", "lu", "lv", "mg", "mh", "mi", "mk", "ml",
    "mn", "mr", "ms", "mt", "my", "na", "nb", "nd", "ne", "ng", "nl", "nn", "no", "nr", "nv",
    "ny", "oc", "oj", "om", "or", "os", "pa", "pi", "pl", "ps", "pt", "qu", "rm", "rn", "ro",
    "ru", "rw", "sa", "sc", "sd", "se", "sg", "si", "sk", "sl", "sm", "sn", "so", "sq", "sr",
    "ss", "st", "su", "sv", "sw", "ta", "te", "tg", "th", "ti", "tk", "tl", "tn", "to", "tr",
    "ts", "tt", "tw", "ty", "ug", "uk", "ur", "uz", "ve", "vi", "vo", "wa", "wo", "xh", "yi",
    "yo", "za", "zh", "zu",
];

/// Languages whose dominant script has no letter case.
const UNCASED: &[&str] = &[
    "am", "ar", "bn", "bo", "dv", "fa", "gu", "he", "hi", "ii", "ja", "ka", "km", "kn", "ko",
    "ks", "lo", "ml", "mr", "my", "ne", "or", "pa", "ps", "sa", "sd", "si", "ta", "te", "th",
    "ug", "ur", "yi", "zh",
];

/// Languages written without spaces between words.
const UNSPACED: &[&str] = &["bo", "ii", "ja", "km", "lo", "my", "th", "zh"];

/// A validated, lowercase ISO 639-1 code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LanguageCode([u8; 2]);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid ISO 639-1 language code {0:?}")]
pub struct InvalidLanguage(pub String);

impl LanguageCode {
    pub fn as_str(&self) -> &str {
        // Only ever built from ASCII.
        std::str::from_utf8(&self.0).expect("ascii language code")
    }

    /// Whether the language's script distinguishes upper and lower case.
    pub fn is_cased(&self) -> bool {
        !UNCASED.contains(&self.as_str())
    }

    /// Whether words are separated by whitespace.
    pub fn is_spaced(&self) -> bool {
        !UNSPACED.contains(&self.as_str())
    }
}

impl FromStr for LanguageCode {
    type Err = InvalidLanguage;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match ISO_639_1.binary_search(&s) {
            Ok(_) => {
                let b = s.as_bytes();
                Ok(Self([b[0], b[1]]))
            }
            Err(_) => Err(InvalidLanguage(s.to_string())),
        }
    }
}

impl fmt::Display for LanguageCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for LanguageCode {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for LanguageCode {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_is_sorted_and_unique() {
        assert!(ISO_639_1.windows(2).all(|w| w[0] < w[1]));
        assert!(ISO_639_1.iter().all(|c| c.len() == 2));
    }

    #[test]
    fn reference_languages_parse() {
        for code in ["da", "de", "el", "en", "es", "fr", "hi", "ru", "ur", "zh"] {
            let lang: LanguageCode = code.parse().unwrap();
            assert_eq!(lang.as_str(), code);
        }
    }

    #[test]
    fn rejects_bad_codes() {
        for bad in ["", "e", "EN", "eng", "xx", "e1"] {
            assert!(bad.parse::<LanguageCode>().is_err(), "{bad}");
        }
    }

    #[test]
    fn script_classes() {
        let en: LanguageCode = "en".parse().unwrap();
        let zh: LanguageCode = "zh".parse().unwrap();
        let hi: LanguageCode = "hi".parse().unwrap();
        assert!(en.is_cased() && en.is_spaced());
        assert!(!zh.is_cased() && !zh.is_spaced());
        assert!(!hi.is_cased() && hi.is_spaced());
    }
}
