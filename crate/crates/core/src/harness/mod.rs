//! Runs adapters over a gold corpus and aggregates the scores.

mod adapter;
mod config;
pub mod protocol;
mod report;

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::thread;

pub use adapter::{
    Adapter, AdapterMode, AdapterOutput, CascadeAdapter, ExternalAdapter, FnAdapter, NerAdapter, DEFAULT_PIPELINE_DEPTH,
    DEFAULT_TIMEOUT,
};
pub use config::{AdapterSpec, BuiltinKind, HarnessConfig, HarnessConfigError, NerConfig};
pub use report::{
    emit_report, read_scores_csv, write_scores_csv, Cell, Metric, ReportFormat, ReportTable, UnknownFormat, SCORES_HEADER,
};

use crate::corpus::Corpus;
use crate::metrics::{score_document, MetricConfig, ScoreRecord};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HarnessError {
    #[error("the corpus is empty")]
    EmptyCorpus,
    #[error("no adapters to evaluate")]
    NoAdapters,
    #[error("adapter name {0:?} is used twice")]
    DuplicateAdapter(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    /// Adapter-major, then corpus order.
    pub records: Vec<ScoreRecord>,
    /// ROUGE-1 (or the configured n), ROUGE-L and NED, in that order.
    pub tables: Vec<ReportTable>,
}

/// Scores every adapter on every document. Adapters run concurrently, each on
/// its own thread; failed extractions count as empty predictions.
pub fn run_evaluation(
    corpus: &Corpus,
    adapters: &[Box<dyn Adapter>],
    metrics: &MetricConfig,
) -> Result<Evaluation, HarnessError> {
    if corpus.is_empty() {
        return Err(HarnessError::EmptyCorpus);
    }
    if adapters.is_empty() {
        return Err(HarnessError::NoAdapters);
    }
    let mut names = HashSet::new();
    for a in adapters {
        if !names.insert(a.name()) {
            return Err(HarnessError::DuplicateAdapter(a.name().to_string()));
        }
    }

    let documents = corpus.documents();
    let outputs: Vec<Vec<AdapterOutput>> = thread::scope(|s| {
        let handles: Vec<_> = adapters.iter().map(|a| s.spawn(|| a.extract_all(documents))).collect();
        handles.into_iter().map(|h| h.join().expect("adapter thread panicked")).collect()
    });

    let mut records = Vec::with_capacity(documents.len() * adapters.len());
    for (adapter, outs) in adapters.iter().zip(outputs) {
        assert_eq!(outs.len(), documents.len(), "adapter {} returned the wrong number of results", adapter.name());
        for (doc, out) in documents.iter().zip(outs) {
            if let Some(e) = &out.error {
                log::info!("{} on {}: {e}", adapter.name(), doc.id);
            }
            let gold = &corpus.label(&doc.id).expect("validated corpus").authors;
            let scores = score_document(&out.authors, gold, metrics);
            records.push(ScoreRecord {
                doc_id: doc.id.clone(),
                tool: adapter.name().to_string(),
                language: doc.language.to_string(),
                rouge1: scores.rouge1,
                rouge_l: scores.rouge_l,
                ned: scores.ned,
                ned_raw: scores.ned_raw,
                empty_prediction: out.authors.iter().all(|a| a.trim().is_empty()),
            });
        }
    }

    let tools: Vec<String> = adapters.iter().map(|a| a.name().to_string()).collect();
    let tables = Metric::ALL.iter().map(|&m| ReportTable::build(m, &records, &tools)).collect();
    Ok(Evaluation { records, tables })
}

/// Writes `scores.csv` plus one report file per format into `dir`. Returns the paths written.
pub fn write_outputs(evaluation: &Evaluation, dir: &Path, formats: &[ReportFormat]) -> std::io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let scores = dir.join("scores.csv");
    write_scores_csv(&evaluation.records, fs::File::create(&scores)?)?;
    written.push(scores);
    for &format in formats {
        let path = dir.join(format.file_name());
        fs::write(&path, emit_report(&evaluation.tables, format))?;
        written.push(path);
    }
    Ok(written)
}
