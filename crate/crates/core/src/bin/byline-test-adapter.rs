//! A scriptable adapter for exercising the harness: answers from a gold file
//! or with fixed authors, and can misbehave on demand.

use std::collections::{HashMap, HashSet};
use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::thread;
use std::time::Duration;

use anyhow::{Context, Result};
use byline_bench::corpus::{load_corpus, LoadOptions};
use byline_bench::harness::protocol::{Handshake, Request, Response, WireEntity, PROTOCOL};
use byline_bench::ner::{NerProvider, RuleBasedProvider};
use clap::Parser;

#[derive(Parser, Debug)]
#[command(about = "Test adapter for the byline-adapter/1 protocol")]
struct Args {
    /// Name announced in the handshake.
    #[arg(long, default_value = "test-adapter")]
    name: String,
    /// Answer each id with its gold authors.
    #[arg(long)]
    gold: Option<PathBuf>,
    /// Authors returned for every document (repeatable).
    #[arg(long = "author")]
    authors: Vec<String>,
    /// Answer NER requests with entities from the rule-based provider.
    #[arg(long)]
    entities: bool,
    /// Never answer these ids.
    #[arg(long = "drop")]
    drop_ids: Vec<String>,
    /// Answer these ids with `"error":"parse failure"`.
    #[arg(long = "fail")]
    fail_ids: Vec<String>,
    /// Exit with status 1 after this many responses.
    #[arg(long)]
    crash_after: Option<usize>,
    /// Print a line that is not JSON after this many responses.
    #[arg(long)]
    garbage_after: Option<usize>,
    /// Answer with an id that was never sent after this many responses.
    #[arg(long)]
    unknown_id_after: Option<usize>,
    /// Answer requests in swapped pairs (second before first).
    #[arg(long)]
    swap_pairs: bool,
    /// Sleep before each response.
    #[arg(long, default_value_t = 0)]
    delay_ms: u64,
    /// Reply to the handshake with this protocol string.
    #[arg(long, default_value = PROTOCOL)]
    protocol: String,
}

struct Adapter {
    args: Args,
    gold: HashMap<String, Vec<String>>,
    drop_ids: HashSet<String>,
    fail_ids: HashSet<String>,
    ner: RuleBasedProvider,
    sent: usize,
}

impl Adapter {
    fn answer(&self, request: &Request) -> Response {
        let mut response = Response { id: request.id.clone(), authors: Vec::new(), entities: None, error: None };
        if self.fail_ids.contains(&request.id) {
            response.error = Some("parse failure".into());
        } else if self.args.entities {
            let text = request.text.clone().unwrap_or_default();
            response.entities = Some(match request.language.parse() {
                Ok(lang) if !text.is_empty() => match self.ner.annotate(&text, lang) {
                    Ok(found) => found
                        .into_iter()
                        .map(|e| WireEntity {
                            surface: e.surface,
                            kind: e.kind,
                            offset: Some(e.first_offset),
                            frequency: Some(e.frequency),
                        })
                        .collect(),
                    Err(e) => {
                        response.error = Some(e.to_string());
                        Vec::new()
                    }
                },
                _ => Vec::new(),
            });
        } else if let Some(authors) = self.gold.get(&request.id) {
            response.authors = authors.clone();
        } else {
            response.authors = self.args.authors.clone();
        }
        response
    }

    fn emit(&mut self, out: &mut impl Write, response: &Response) -> io::Result<()> {
        if self.args.crash_after == Some(self.sent) {
            std::process::exit(1);
        }
        if self.args.delay_ms > 0 {
            thread::sleep(Duration::from_millis(self.args.delay_ms));
        }
        if self.args.garbage_after == Some(self.sent) {
            writeln!(out, "{{not json")?;
        } else if self.args.unknown_id_after == Some(self.sent) {
            let bogus = Response { id: format!("{}-unknown", response.id), ..response.clone() };
            writeln!(out, "{}", serde_json::to_string(&bogus)?)?;
        } else {
            writeln!(out, "{}", serde_json::to_string(response)?)?;
        }
        out.flush()?;
        self.sent += 1;
        Ok(())
    }
}

fn run(args: Args) -> Result<()> {
    let gold = match &args.gold {
        Some(path) => {
            let corpus = load_corpus(path, LoadOptions { lax: true }).with_context(|| format!("loading {}", path.display()))?;
            corpus.iter().map(|(d, l)| (d.id.clone(), l.authors.clone())).collect()
        }
        None => HashMap::new(),
    };
    let mut adapter = Adapter {
        drop_ids: args.drop_ids.iter().cloned().collect(),
        fail_ids: args.fail_ids.iter().cloned().collect(),
        gold,
        ner: RuleBasedProvider::default(),
        sent: 0,
        args,
    };

    let stdin = io::stdin();
    let mut stdout = io::stdout().lock();
    let mut lines = stdin.lock().lines();
    let Some(hello) = lines.next() else { return Ok(()) };
    let hello: Handshake = serde_json::from_str(&hello?).context("handshake")?;
    anyhow::ensure!(hello.protocol == PROTOCOL, "unsupported protocol {:?}", hello.protocol);
    let reply = Handshake { protocol: adapter.args.protocol.clone(), name: Some(adapter.args.name.clone()) };
    writeln!(stdout, "{}", serde_json::to_string(&reply)?)?;
    stdout.flush()?;

    let mut held: Option<Response> = None;
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let request: Request = serde_json::from_str(&line).context("request")?;
        if adapter.drop_ids.contains(&request.id) {
            continue;
        }
        let response = adapter.answer(&request);
        if adapter.args.swap_pairs {
            match held.take() {
                None => held = Some(response),
                Some(first) => {
                    adapter.emit(&mut stdout, &response)?;
                    adapter.emit(&mut stdout, &first)?;
                }
            }
        } else {
            adapter.emit(&mut stdout, &response)?;
        }
    }
    if let Some(last) = held {
        adapter.emit(&mut stdout, &last)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("byline-test-adapter: {e:#}");
            ExitCode::FAILURE
        }
    }
}
