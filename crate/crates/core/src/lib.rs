//! Author/byline extraction for multilingual news HTML, and a harness that
//! scores extractors against a gold-annotated corpus.
//!
//! - [`corpus`]: the gold JSONL format, a LabelStudio export converter and corpus statistics.
//! - [`extract`]: the heuristic extraction cascade (JSON-LD, meta tags, rel-author,
//!   class heuristics, byline cues, NER fallback).
//! - [`ner`]: the frequency-based NER baseline and a rule-based entity provider.
//! - [`metrics`]: normalized edit distance, character ROUGE-n and ROUGE-L.
//! - [`harness`]: adapters (builtin and subprocess), evaluation runs and reports.

pub mod corpus;
pub mod extract;
pub mod harness;
pub mod html;
pub mod lang;
pub mod metrics;
pub mod ner;
pub mod text;

pub use corpus::{Corpus, Document, GoldLabel};
pub use extract::{extract, ExtractionResult, Method};
pub use lang::LanguageCode;
