//! The gold-annotated evaluation corpus.
//!
//! On disk a corpus is UTF-8 JSONL, one document per line:
//!
//! ```text
//! {"id": "d1", "language": "en", "url": null, "html": "<html>…</html>", "authors": ["Jane Doe"]}
//! ```
//!
//! All five fields are required; unknown fields are rejected unless the loader
//! runs in lax mode. Text is NFC-normalized when loaded. Author strings are
//! otherwise kept exactly as annotated.

mod labelstudio;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::lang::LanguageCode;
use crate::text::nfc;

pub use labelstudio::{convert_labelstudio, ConversionReport, ConvertOptions, SkipReason};

const FIELDS: [&str; 5] = ["id", "language", "url", "html", "authors"];

/// One news article.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub language: LanguageCode,
    pub url: Option<String>,
    pub html: String,
}

/// The annotated authors of one document. May be empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldLabel {
    pub doc_id: String,
    pub authors: Vec<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("cannot read corpus: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: malformed record: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: missing required field `{field}`")]
    MissingField { line: usize, field: &'static str },
    #[error("line {line}: unknown field `{field}`")]
    UnknownField { line: usize, field: String },
    #[error("line {line}: duplicate id {id:?}")]
    DuplicateId { line: usize, id: String },
    #[error("line {line}: invalid language code {code:?}")]
    InvalidLanguage { line: usize, code: String },
    #[error("line {line}: {reason}")]
    Invalid { line: usize, reason: String },
    #[error("label for unknown document {0:?}")]
    OrphanLabel(String),
    #[error("document {0:?} has no label")]
    MissingLabel(String),
}

/// Documents in file order plus exactly one label per document.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Corpus {
    documents: Vec<Document>,
    labels: HashMap<String, GoldLabel>,
}

impl Corpus {
    /// Builds a corpus, checking every type invariant.
    pub fn new(documents: Vec<Document>, labels: Vec<GoldLabel>) -> Result<Self, CorpusError> {
        let mut seen = HashSet::new();
        for (i, doc) in documents.iter().enumerate() {
            let line = i + 1;
            if !seen.insert(doc.id.as_str()) {
                return Err(CorpusError::DuplicateId { line, id: doc.id.clone() });
            }
            validate_document(doc).map_err(|reason| CorpusError::Invalid { line, reason })?;
        }
        let mut by_id = HashMap::with_capacity(labels.len());
        for label in labels {
            if !seen.contains(label.doc_id.as_str()) {
                return Err(CorpusError::OrphanLabel(label.doc_id));
            }
            validate_authors(&label.authors).map_err(|reason| CorpusError::Invalid {
                line: documents.iter().position(|d| d.id == label.doc_id).unwrap_or(0) + 1,
                reason,
            })?;
            if by_id.contains_key(&label.doc_id) {
                return Err(CorpusError::Invalid {
                    line: 0,
                    reason: format!("more than one label for {:?}", label.doc_id),
                });
            }
            by_id.insert(label.doc_id.clone(), label);
        }
        if let Some(doc) = documents.iter().find(|d| !by_id.contains_key(&d.id)) {
            return Err(CorpusError::MissingLabel(doc.id.clone()));
        }
        Ok(Self { documents, labels: by_id })
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn label(&self, doc_id: &str) -> Option<&GoldLabel> {
        self.labels.get(doc_id)
    }

    /// Documents paired with their labels, in document order.
    pub fn iter(&self) -> impl Iterator<Item = (&Document, &GoldLabel)> {
        self.documents.iter().map(|d| (d, &self.labels[&d.id]))
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }
}

fn validate_document(doc: &Document) -> Result<(), String> {
    if doc.id.is_empty() {
        return Err("empty id".into());
    }
    if doc.html.is_empty() {
        return Err(format!("document {:?} has empty html", doc.id));
    }
    if let Some(u) = &doc.url {
        match url::Url::parse(u) {
            Ok(parsed) if parsed.has_host() || parsed.scheme() == "file" => {}
            _ => return Err(format!("document {:?} url {u:?} is not an absolute URL", doc.id)),
        }
    }
    Ok(())
}

fn validate_authors(authors: &[String]) -> Result<(), String> {
    let mut seen = HashSet::new();
    for a in authors {
        if a.trim().is_empty() {
            return Err("empty author string".into());
        }
        if !seen.insert(a.as_str()) {
            return Err(format!("duplicate author {a:?}"));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LoadOptions {
    /// Ignore unknown fields instead of rejecting them.
    pub lax: bool,
}

#[derive(Serialize, Deserialize)]
struct GoldRecord {
    id: String,
    language: String,
    url: Option<String>,
    html: String,
    authors: Vec<String>,
}

pub fn load_corpus(path: impl AsRef<Path>, options: LoadOptions) -> Result<Corpus, CorpusError> {
    let file = File::open(path)?;
    read_corpus(BufReader::new(file), options)
}

/// Parses gold JSONL. Blank lines are ignored; line numbers in errors are 1-based file lines.
pub fn read_corpus<R: BufRead>(reader: R, options: LoadOptions) -> Result<Corpus, CorpusError> {
    let mut documents = Vec::new();
    let mut labels = Vec::new();
    let mut ids = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record = parse_record(&line, line_no, options)?;
        if !ids.insert(record.id.clone()) {
            return Err(CorpusError::DuplicateId { line: line_no, id: record.id });
        }
        let language = record
            .language
            .parse::<LanguageCode>()
            .map_err(|_| CorpusError::InvalidLanguage { line: line_no, code: record.language.clone() })?;
        let doc = Document {
            id: record.id.clone(),
            language,
            url: record.url.map(|u| nfc(&u)),
            html: nfc(&record.html),
        };
        validate_document(&doc).map_err(|reason| CorpusError::Invalid { line: line_no, reason })?;
        let authors: Vec<String> = record.authors.iter().map(|a| nfc(a)).collect();
        validate_authors(&authors).map_err(|reason| CorpusError::Invalid { line: line_no, reason })?;
        labels.push(GoldLabel { doc_id: record.id, authors });
        documents.push(doc);
    }
    Corpus::new(documents, labels)
}

fn parse_record(line: &str, line_no: usize, options: LoadOptions) -> Result<GoldRecord, CorpusError> {
    let value: Value = serde_json::from_str(line)
        .map_err(|e| CorpusError::Malformed { line: line_no, reason: e.to_string() })?;
    let Value::Object(mut map) = value else {
        return Err(CorpusError::Malformed { line: line_no, reason: "expected a JSON object".into() });
    };
    for field in FIELDS {
        if !map.contains_key(field) {
            return Err(CorpusError::MissingField { line: line_no, field });
        }
    }
    if options.lax {
        map.retain(|k, _| FIELDS.contains(&k.as_str()));
    } else if let Some(extra) = map.keys().find(|k| !FIELDS.contains(&k.as_str())) {
        return Err(CorpusError::UnknownField { line: line_no, field: extra.clone() });
    }
    serde_json::from_value(Value::Object(map))
        .map_err(|e| CorpusError::Malformed { line: line_no, reason: e.to_string() })
}

/// Writes the corpus as gold JSONL in document order.
pub fn write_corpus<W: Write>(corpus: &Corpus, mut writer: W) -> io::Result<()> {
    for (doc, label) in corpus.iter() {
        let record = GoldRecord {
            id: doc.id.clone(),
            language: doc.language.to_string(),
            url: doc.url.clone(),
            html: doc.html.clone(),
            authors: label.authors.clone(),
        };
        serde_json::to_writer(&mut writer, &record)?;
        writer.write_all(b"\n")?;
    }
    writer.flush()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct LanguageStats {
    pub document_count: usize,
    /// Total annotations, not distinct names.
    pub author_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct CorpusStats {
    pub per_language: BTreeMap<LanguageCode, LanguageStats>,
}

pub fn stats(corpus: &Corpus) -> CorpusStats {
    let mut per_language: BTreeMap<LanguageCode, LanguageStats> = BTreeMap::new();
    for (doc, label) in corpus.iter() {
        let entry = per_language.entry(doc.language).or_default();
        entry.document_count += 1;
        entry.author_count += label.authors.len();
    }
    CorpusStats { per_language }
}

impl CorpusStats {
    /// Renders the statistics as a plain text table.
    pub fn to_table(&self) -> String {
        let mut out = String::from("language\tdocuments\tauthors\n");
        let (mut docs, mut authors) = (0, 0);
        for (lang, s) in &self.per_language {
            out.push_str(&format!("{lang}\t{}\t{}\n", s.document_count, s.author_count));
            docs += s.document_count;
            authors += s.author_count;
        }
        out.push_str(&format!("total\t{docs}\t{authors}\n"));
        out
    }
}
