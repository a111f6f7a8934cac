//! Extractors as seen by the harness: builtin ones run in-process, external
//! ones are subprocesses speaking the adapter protocol.

use std::collections::{HashMap, VecDeque};
use std::io::Write;
use std::sync::{mpsc, Arc, Mutex};
use std::thread;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::protocol::{AdapterProcess, LaunchSpec, ProtocolError, Request, Response};
use crate::corpus::Document;
use crate::extract::Extractor;
use crate::ner::{self, NerOptions, NerProvider};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(30);
pub const DEFAULT_PIPELINE_DEPTH: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdapterMode {
    Builtin,
    ExternalProcess,
}

/// What one adapter produced for one document.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AdapterOutput {
    pub authors: Vec<String>,
    /// Failure, timeout or adapter-reported error. Scored as an empty prediction.
    pub error: Option<String>,
}

impl AdapterOutput {
    pub fn authors(authors: Vec<String>) -> Self {
        Self { authors, error: None }
    }

    pub fn failed(error: impl Into<String>) -> Self {
        Self { authors: Vec::new(), error: Some(error.into()) }
    }
}

pub trait Adapter: Send + Sync {
    fn name(&self) -> &str;

    fn mode(&self) -> AdapterMode;

    /// One output per document, in input order.
    fn extract_all(&self, documents: &[Document]) -> Vec<AdapterOutput>;
}

/// Maps each document independently, in parallel unless told otherwise.
fn map_documents(documents: &[Document], parallel: bool, f: impl Fn(&Document) -> AdapterOutput + Sync) -> Vec<AdapterOutput> {
    if parallel {
        documents.par_iter().map(&f).collect()
    } else {
        documents.iter().map(f).collect()
    }
}

/// The extraction cascade, optionally with the NER fallback.
pub struct CascadeAdapter {
    name: String,
    extractor: Arc<Extractor>,
    ner: Option<Arc<dyn NerProvider>>,
}

impl CascadeAdapter {
    pub fn new(name: impl Into<String>, extractor: Arc<Extractor>, ner: Option<Arc<dyn NerProvider>>) -> Self {
        Self { name: name.into(), extractor, ner }
    }
}

impl Adapter for CascadeAdapter {
    fn name(&self) -> &str {
        &self.name
    }

    fn mode(&self) -> AdapterMode {
        AdapterMode::Builtin
    }

    fn extract_all(&self, documents: &[Document]) -> Vec<AdapterOutput> {
        let parallel = self.ner.as_ref().is_none_or(|p| p.concurrent());
        map_documents(documents, parallel, |doc| {
            match self.extractor.extract(&doc.html, doc.language, self.ner.as_deref()) {
                Ok(r) => AdapterOutput { authors: r.authors, error: r.diagnostics.ner_error },
                Err(e) => AdapterOutput::failed(e.to_string()),
            }
        })
    }
}

/// The NER baseline on its own: the least frequent person entities.
pub struct NerAdapter {
    name: String,
    provider: Arc<dyn NerProvider>,
    options: NerOptions,
}

impl NerAdapter {
    pub fn new(name: impl Into<String>, provider: Arc<dyn NerProvider>, options: NerOptions) -> Self {
        Self { name: name.into(), provider, options }
    }
}

impl Adapter for NerAdapter {
    fn name(&self) -> &str {
        &self.name
    }

    fn mode(&self) -> AdapterMode {
        AdapterMode::Builtin
    }

    fn extract_all(&self, documents: &[Document]) -> Vec<AdapterOutput> {
        map_documents(documents, self.provider.concurrent(), |doc| {
            match ner::ner_extract(&doc.html, doc.language, self.provider.as_ref(), self.options) {
                Ok(r) => AdapterOutput::authors(r.authors),
                Err(e) => AdapterOutput::failed(e.to_string()),
            }
        })
    }
}

/// An adapter backed by a closure, for experiments and tests.
pub struct FnAdapter<F> {
    name: String,
    f: F,
}

impl<F: Fn(&Document) -> AdapterOutput + Send + Sync> FnAdapter<F> {
    pub fn new(name: impl Into<String>, f: F) -> Self {
        Self { name: name.into(), f }
    }
}

impl<F: Fn(&Document) -> AdapterOutput + Send + Sync> Adapter for FnAdapter<F> {
    fn name(&self) -> &str {
        &self.name
    }

    fn mode(&self) -> AdapterMode {
        AdapterMode::Builtin
    }

    fn extract_all(&self, documents: &[Document]) -> Vec<AdapterOutput> {
        map_documents(documents, true, &self.f)
    }
}

/// A subprocess speaking `byline-adapter/1`, started fresh for each run.
pub struct ExternalAdapter {
    name: String,
    spec: LaunchSpec,
    timeout: Duration,
    depth: usize,
    /// Name the process announced in its last handshake.
    announced: Mutex<Option<String>>,
}

impl ExternalAdapter {
    pub fn new(name: impl Into<String>, spec: LaunchSpec) -> Self {
        Self {
            name: name.into(),
            spec,
            timeout: DEFAULT_TIMEOUT,
            depth: DEFAULT_PIPELINE_DEPTH,
            announced: Mutex::new(None),
        }
    }

    /// Per-document timeout. The clock of a request starts once every
    /// earlier request has been answered or has timed out.
    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }

    /// Requests in flight at once; 1 sends each request after the previous answer.
    pub fn with_pipeline_depth(mut self, depth: usize) -> Self {
        self.depth = depth.max(1);
        self
    }

    pub fn announced_name(&self) -> Option<String> {
        self.announced.lock().unwrap_or_else(|p| p.into_inner()).clone()
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Slot {
    Unsent,
    Pending,
    TimedOut,
    Done,
}

impl Adapter for ExternalAdapter {
    fn name(&self) -> &str {
        &self.name
    }

    fn mode(&self) -> AdapterMode {
        AdapterMode::ExternalProcess
    }

    fn extract_all(&self, documents: &[Document]) -> Vec<AdapterOutput> {
        let mut process = match AdapterProcess::spawn(&self.spec, self.timeout) {
            Ok(p) => p,
            Err(e) => {
                log::error!("adapter {}: {e}", self.name);
                return vec![AdapterOutput::failed(format!("adapter unavailable: {e}")); documents.len()];
            }
        };
        *self.announced.lock().unwrap_or_else(|p| p.into_inner()) = Some(process.name().to_string());
        let outputs = run_pipeline(&self.name, &mut process, documents, self.timeout, self.depth);
        process.shutdown();
        outputs
    }
}

/// Streams requests to the process from a writer thread and matches
/// responses by id on this one.
fn run_pipeline(
    name: &str,
    process: &mut AdapterProcess,
    documents: &[Document],
    timeout: Duration,
    depth: usize,
) -> Vec<AdapterOutput> {
    let n = documents.len();
    let mut outputs = vec![AdapterOutput::default(); n];
    let mut slots = vec![Slot::Unsent; n];
    let index: HashMap<&str, usize> = documents.iter().enumerate().map(|(i, d)| (d.id.as_str(), i)).collect();

    let (lines_tx, lines_rx) = mpsc::channel::<String>();
    let writer = process.take_stdin().map(|mut stdin| {
        thread::spawn(move || {
            for line in lines_rx {
                if stdin.write_all(line.as_bytes()).and_then(|_| stdin.flush()).is_err() {
                    break;
                }
            }
        })
    });

    let mut outstanding: VecDeque<usize> = VecDeque::new();
    let mut head_since = Instant::now();
    let mut next = 0;
    let failure = 'run: loop {
        while outstanding.len() < depth && next < n {
            let doc = &documents[next];
            let request = Request {
                id: doc.id.clone(),
                html: doc.html.clone(),
                url: doc.url.clone(),
                language: doc.language.to_string(),
                text: None,
            };
            let mut line = serde_json::to_string(&request).expect("serializable request");
            line.push('\n');
            if lines_tx.send(line).is_err() {
                break 'run Some("adapter crashed: its input is closed".to_string());
            }
            if outstanding.is_empty() {
                head_since = Instant::now();
            }
            slots[next] = Slot::Pending;
            outstanding.push_back(next);
            next += 1;
        }
        let Some(&head) = outstanding.front() else { break None };

        let wait = timeout.saturating_sub(head_since.elapsed());
        match process.recv(wait) {
            Ok(Response { id, authors, error, .. }) => {
                let Some(&i) = index.get(id.as_str()) else {
                    break Some(format!("protocol violation: response for unknown id {id:?}"));
                };
                match slots[i] {
                    Slot::Pending => {}
                    Slot::TimedOut => {
                        log::warn!("adapter {name}: late response for {id:?} ignored");
                        continue;
                    }
                    Slot::Unsent => break Some(format!("protocol violation: response for unsent id {id:?}")),
                    Slot::Done => break Some(format!("protocol violation: second response for id {id:?}")),
                }
                slots[i] = Slot::Done;
                outputs[i] = match error {
                    Some(e) => {
                        log::warn!("adapter {name} failed on {id:?}: {e}");
                        AdapterOutput::failed(e)
                    }
                    None => AdapterOutput::authors(authors),
                };
                outstanding.retain(|&j| j != i);
                if i == head {
                    head_since = Instant::now();
                }
            }
            Err(ProtocolError::Timeout(_)) => {
                outstanding.pop_front();
                slots[head] = Slot::TimedOut;
                log::warn!("adapter {name}: no response for {:?} within {timeout:?}", documents[head].id);
                outputs[head] = AdapterOutput::failed(format!("timed out after {timeout:?}"));
                head_since = Instant::now();
            }
            Err(e @ ProtocolError::Violation(_)) => break Some(e.to_string()),
            Err(e) => break Some(format!("adapter crashed: {e}")),
        }
    };

    if let Some(reason) = failure {
        let remaining = slots.iter().filter(|s| matches!(s, Slot::Unsent | Slot::Pending)).count();
        log::error!("adapter {name} disabled ({reason}); {remaining} documents scored as empty");
        for (slot, out) in slots.iter().zip(outputs.iter_mut()) {
            if matches!(slot, Slot::Unsent | Slot::Pending) {
                *out = AdapterOutput::failed(reason.clone());
            }
        }
        process.kill();
    }
    // The writer is not joined: if the process stopped reading, it stays
    // blocked until the process is killed on shutdown.
    drop((lines_tx, writer));
    outputs
}
