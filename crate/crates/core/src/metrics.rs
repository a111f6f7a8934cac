//! Character-level similarity between a predicted and a gold author list.
//!
//! Both lists are first reduced to one canonical string by [`preprocess`]:
//! every name is NFC-normalized, stripped of surrounding punctuation and
//! whitespace, lowercased, and the names are sorted and joined with a single
//! space. All scores are then computed on those two strings:
//!
//! * normalized edit distance, with insert/delete/substitute costs 1/1/2,
//!   divided by the longer string's length and clamped to `[0, 1]`;
//! * ROUGE-n, the F1 of the character n-gram multiset overlap;
//! * ROUGE-L, the F1 of the longest common character subsequence.
//!
//! Lengths are counted in Unicode scalar values.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::text::{collapse_whitespace, nfc, trim_noise};

/// Separator placed between sorted author names. It participates in n-grams.
pub const NAME_SEPARATOR: char = ' ';

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EditCosts {
    pub insert: u32,
    pub delete: u32,
    pub substitute: u32,
}

impl Default for EditCosts {
    fn default() -> Self {
        Self { insert: 1, delete: 1, substitute: 2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MetricConfig {
    /// n for the character n-gram score reported in the `rouge1` column.
    pub rouge_n: usize,
    pub costs: EditCosts,
    /// Two empty author lists agree perfectly (ROUGE 1, NED 0). When false they score as a miss.
    pub empty_matches_empty: bool,
    /// Clamp normalized edit distance to 1.0.
    pub clamp_ned: bool,
}

impl Default for MetricConfig {
    fn default() -> Self {
        Self {
            rouge_n: 1,
            costs: EditCosts::default(),
            empty_matches_empty: true,
            clamp_ned: true,
        }
    }
}

/// Canonical form of a single author name, or `None` if nothing is left.
pub fn canonical_name(name: &str) -> Option<String> {
    let name = nfc(name);
    let name = collapse_whitespace(trim_noise(&name));
    if name.is_empty() {
        None
    } else {
        Some(name.to_lowercase())
    }
}

/// Reduces an author list to the single string every metric compares.
pub fn preprocess<S: AsRef<str>>(authors: &[S]) -> String {
    let mut names: Vec<String> = authors.iter().filter_map(|a| canonical_name(a.as_ref())).collect();
    names.sort_unstable();
    let mut out = String::new();
    for name in names {
        if !out.is_empty() {
            out.push(NAME_SEPARATOR);
        }
        out.push_str(&name);
    }
    out
}

/// Minimal total cost of turning `a` into `b`, over code points.
pub fn edit_distance(a: &str, b: &str, costs: EditCosts) -> u64 {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    edit_distance_chars(&a, &b, costs)
}

fn edit_distance_chars(a: &[char], b: &[char], costs: EditCosts) -> u64 {
    let (ins, del, sub) = (costs.insert as u64, costs.delete as u64, costs.substitute as u64);
    // prev[j]: cost of a[..i-1] -> b[..j]
    let mut prev: Vec<u64> = (0..=b.len() as u64).map(|j| j * ins).collect();
    let mut cur = vec![0u64; b.len() + 1];
    for (i, &ca) in a.iter().enumerate() {
        cur[0] = (i as u64 + 1) * del;
        for (j, &cb) in b.iter().enumerate() {
            let replace = prev[j] + if ca == cb { 0 } else { sub };
            cur[j + 1] = replace.min(prev[j + 1] + del).min(cur[j] + ins);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Length of the longest common subsequence of two code-point sequences.
pub fn lcs_len(a: &[char], b: &[char]) -> usize {
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for &ca in a {
        for (j, &cb) in b.iter().enumerate() {
            cur[j + 1] = if ca == cb { prev[j] + 1 } else { prev[j + 1].max(cur[j]) };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Normalized edit distance before and after clamping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NedScore {
    pub raw: f64,
    pub value: f64,
}

pub fn normalized_edit_distance<P: AsRef<str>, G: AsRef<str>>(
    pred: &[P],
    gold: &[G],
    config: &MetricConfig,
) -> NedScore {
    let pred: Vec<char> = preprocess(pred).chars().collect();
    let gold: Vec<char> = preprocess(gold).chars().collect();
    ned_on_canonical(&pred, &gold, config)
}

fn ned_on_canonical(pred: &[char], gold: &[char], config: &MetricConfig) -> NedScore {
    let raw = match (pred.is_empty(), gold.is_empty()) {
        (true, true) => {
            if config.empty_matches_empty {
                0.0
            } else {
                1.0
            }
        }
        (true, false) | (false, true) => 1.0,
        (false, false) => {
            let d = edit_distance_chars(pred, gold, config.costs);
            d as f64 / pred.len().max(gold.len()) as f64
        }
    };
    let value = if config.clamp_ned { raw.min(1.0) } else { raw };
    NedScore { raw, value }
}

fn f1(overlap: usize, pred_count: usize, gold_count: usize) -> f64 {
    if overlap == 0 {
        return 0.0;
    }
    let precision = overlap as f64 / pred_count as f64;
    let recall = overlap as f64 / gold_count as f64;
    2.0 * precision * recall / (precision + recall)
}

fn ngram_counts(s: &[char], n: usize) -> HashMap<&[char], usize> {
    let mut counts = HashMap::new();
    if s.len() >= n {
        for gram in s.windows(n) {
            *counts.entry(gram).or_insert(0) += 1;
        }
    }
    counts
}

fn rouge_n_on_canonical(pred: &[char], gold: &[char], n: usize, config: &MetricConfig) -> f64 {
    assert!(n >= 1, "rouge n must be at least 1");
    let pred_grams = ngram_counts(pred, n);
    let gold_grams = ngram_counts(gold, n);
    let pred_total: usize = pred_grams.values().sum();
    let gold_total: usize = gold_grams.values().sum();
    match (pred_total, gold_total) {
        // Strings shorter than n only agree when they are identical.
        (0, 0) => {
            if pred == gold && (config.empty_matches_empty || !pred.is_empty()) {
                1.0
            } else {
                0.0
            }
        }
        (0, _) | (_, 0) => 0.0,
        _ => {
            let overlap = pred_grams
                .iter()
                .map(|(gram, &c)| c.min(gold_grams.get(gram).copied().unwrap_or(0)))
                .sum();
            f1(overlap, pred_total, gold_total)
        }
    }
}

/// F1 over the multiset of character n-grams.
pub fn rouge_n<P: AsRef<str>, G: AsRef<str>>(pred: &[P], gold: &[G], n: usize, config: &MetricConfig) -> f64 {
    let pred: Vec<char> = preprocess(pred).chars().collect();
    let gold: Vec<char> = preprocess(gold).chars().collect();
    rouge_n_on_canonical(&pred, &gold, n, config)
}

fn rouge_l_on_canonical(pred: &[char], gold: &[char], config: &MetricConfig) -> f64 {
    match (pred.is_empty(), gold.is_empty()) {
        (true, true) => {
            if config.empty_matches_empty {
                1.0
            } else {
                0.0
            }
        }
        (true, false) | (false, true) => 0.0,
        (false, false) => f1(lcs_len(pred, gold), pred.len(), gold.len()),
    }
}

/// F1 over the longest common character subsequence.
pub fn rouge_l<P: AsRef<str>, G: AsRef<str>>(pred: &[P], gold: &[G], config: &MetricConfig) -> f64 {
    let pred: Vec<char> = preprocess(pred).chars().collect();
    let gold: Vec<char> = preprocess(gold).chars().collect();
    rouge_l_on_canonical(&pred, &gold, config)
}

/// The per-document metric triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DocumentScores {
    pub rouge1: f64,
    pub rouge_l: f64,
    pub ned: f64,
    pub ned_raw: f64,
}

pub fn score_document<P: AsRef<str>, G: AsRef<str>>(pred: &[P], gold: &[G], config: &MetricConfig) -> DocumentScores {
    let pred: Vec<char> = preprocess(pred).chars().collect();
    let gold: Vec<char> = preprocess(gold).chars().collect();
    let ned = ned_on_canonical(&pred, &gold, config);
    DocumentScores {
        rouge1: rouge_n_on_canonical(&pred, &gold, config.rouge_n, config),
        rouge_l: rouge_l_on_canonical(&pred, &gold, config),
        ned: ned.value,
        ned_raw: ned.raw,
    }
}

/// One (document, tool) evaluation result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRecord {
    pub doc_id: String,
    pub tool: String,
    pub language: String,
    pub rouge1: f64,
    #[serde(rename = "rougeL")]
    pub rouge_l: f64,
    pub ned: f64,
    /// Unclamped normalized edit distance.
    pub ned_raw: f64,
    /// The tool produced no authors (including failures and timeouts).
    pub empty_prediction: bool,
}
