use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use byline_bench::corpus::{self, convert_labelstudio, load_corpus, write_corpus, ConvertOptions, LoadOptions};
use byline_bench::extract::{Extractor, ExtractorConfig};
use byline_bench::harness::protocol::{self, Response};
use byline_bench::harness::{run_evaluation, write_outputs, HarnessConfig, ReportFormat};
use byline_bench::ner::{EntityKind, Gazetteer, NerProvider, RuleBasedProvider};
use byline_bench::LanguageCode;
use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "byline-bench", version, about = "Extract news article authors and benchmark author extractors")]
struct Cli {
    /// Log progress (repeat for more detail). RUST_LOG overrides.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Score adapters against a gold corpus and write reports.
    Evaluate {
        #[arg(long)]
        corpus: PathBuf,
        /// TOML file listing the adapters.
        #[arg(long)]
        adapters: PathBuf,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        /// Report format (repeatable); all formats when omitted.
        #[arg(long, value_parser = parse_format)]
        format: Vec<ReportFormat>,
        /// Per-document timeout for external adapters, overriding the adapters file.
        #[arg(long)]
        timeout_secs: Option<u64>,
        /// Accept unknown fields in corpus records.
        #[arg(long)]
        lax: bool,
    },
    /// Extract the authors of one HTML file.
    Extract {
        #[arg(long)]
        html: PathBuf,
        #[arg(long)]
        language: LanguageCode,
        /// Print the full result as JSON.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        extractor: ExtractorArgs,
    },
    /// Convert a LabelStudio JSON export into gold JSONL.
    Convert {
        #[arg(long)]
        labelstudio: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Language for tasks without one.
        #[arg(long)]
        default_language: Option<LanguageCode>,
        /// Task data key holding the HTML (repeatable).
        #[arg(long = "html-key")]
        html_keys: Vec<String>,
        /// Span label marking author highlights.
        #[arg(long, default_value = "author")]
        author_label: String,
    },
    /// Documents and annotated authors per language.
    Stats {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        lax: bool,
    },
    /// Serve the cascade over the adapter protocol on stdin/stdout.
    Serve {
        #[arg(long, default_value = "byline-cascade")]
        name: String,
        #[command(flatten)]
        extractor: ExtractorArgs,
    },
}

#[derive(Args, Debug)]
struct ExtractorArgs {
    /// Extractor settings (TOML, or JSON by extension).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Fall back to the NER baseline when no other stage fires.
    #[arg(long)]
    ner: bool,
    /// Person-name gazetteer for the NER baseline (repeatable).
    #[arg(long)]
    gazetteer: Vec<PathBuf>,
}

impl ExtractorArgs {
    fn build(&self) -> Result<(Extractor, Option<RuleBasedProvider>)> {
        let config = match &self.config {
            Some(path) => ExtractorConfig::from_path(path).with_context(|| format!("loading {}", path.display()))?,
            None => ExtractorConfig::default(),
        };
        let extractor = Extractor::new(config)?;
        let ner = if self.ner || !self.gazetteer.is_empty() {
            let mut gazetteer = Gazetteer::new();
            for path in &self.gazetteer {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                gazetteer.extend_from_str(&text, EntityKind::Person);
            }
            Some(RuleBasedProvider::new(gazetteer))
        } else {
            None
        };
        Ok((extractor, ner))
    }
}

fn parse_format(s: &str) -> Result<ReportFormat, String> {
    s.parse().map_err(|e: byline_bench::harness::UnknownFormat| e.to_string())
}

fn evaluate(
    corpus_path: &Path,
    adapters_path: &Path,
    out: &Path,
    formats: Vec<ReportFormat>,
    timeout_secs: Option<u64>,
    lax: bool,
) -> Result<()> {
    let corpus = load_corpus(corpus_path, LoadOptions { lax })
        .with_context(|| format!("loading corpus {}", corpus_path.display()))?;
    let config = HarnessConfig::load(adapters_path)?;
    let adapters = config.build_adapters(timeout_secs.map(Duration::from_secs))?;
    log::info!("evaluating {} adapters on {} documents", adapters.len(), corpus.len());
    let evaluation = run_evaluation(&corpus, &adapters, &config.metrics)?;
    let formats = if formats.is_empty() { ReportFormat::ALL.to_vec() } else { formats };
    for path in write_outputs(&evaluation, out, &formats)? {
        println!("{}", path.display());
    }
    Ok(())
}

fn extract(html: &Path, language: LanguageCode, json: bool, args: &ExtractorArgs) -> Result<()> {
    let (extractor, ner) = args.build()?;
    let text = fs::read_to_string(html).with_context(|| format!("reading {}", html.display()))?;
    let result = extractor.extract(&text, language, ner.as_ref().map(|p| p as &dyn NerProvider))?;
    let mut stdout = io::stdout().lock();
    if json {
        serde_json::to_writer_pretty(&mut stdout, &result)?;
        writeln!(stdout)?;
    } else {
        for author in &result.authors {
            writeln!(stdout, "{author}")?;
        }
        eprintln!("method: {}", result.method);
    }
    Ok(())
}

fn convert(
    export: &Path,
    out: &Path,
    default_language: Option<LanguageCode>,
    html_keys: Vec<String>,
    author_label: String,
) -> Result<()> {
    let text = fs::read_to_string(export).with_context(|| format!("reading {}", export.display()))?;
    let mut options = ConvertOptions { default_language, author_label, ..ConvertOptions::default() };
    if !html_keys.is_empty() {
        options.html_keys = html_keys;
    }
    let (corpus, report) = convert_labelstudio(&text, &options)?;
    let file = fs::File::create(out).with_context(|| format!("creating {}", out.display()))?;
    let mut writer = BufWriter::new(file);
    write_corpus(&corpus, &mut writer)?;
    writer.flush()?;
    eprintln!("{} of {} tasks converted", report.converted, report.tasks);
    for (reason, count) in &report.dropped {
        eprintln!("  dropped {count} ({})", serde_json::to_value(reason)?.as_str().unwrap_or("?"));
    }
    Ok(())
}

fn stats(path: &Path, json: bool, lax: bool) -> Result<()> {
    let corpus = load_corpus(path, LoadOptions { lax }).with_context(|| format!("loading corpus {}", path.display()))?;
    let stats = corpus::stats(&corpus);
    if json {
        println!("{}", serde_json::to_string_pretty(&stats)?);
    } else {
        print!("{}", stats.to_table());
    }
    Ok(())
}

fn serve(name: &str, args: &ExtractorArgs) -> Result<()> {
    let (extractor, ner) = args.build()?;
    let stdin = io::stdin();
    protocol::serve(name, stdin.lock(), io::stdout().lock(), |request| {
        let mut response = Response { id: request.id, authors: Vec::new(), entities: None, error: None };
        match request.language.parse::<LanguageCode>() {
            Ok(lang) => match extractor.extract(&request.html, lang, ner.as_ref().map(|p| p as &dyn NerProvider)) {
                Ok(result) => response.authors = result.authors,
                Err(e) => response.error = Some(e.to_string()),
            },
            Err(e) => response.error = Some(e.to_string()),
        }
        response
    })?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Evaluate { corpus, adapters, out, format, timeout_secs, lax } => {
            if timeout_secs == Some(0) {
                bail!("--timeout-secs must be positive");
            }
            evaluate(&corpus, &adapters, &out, format, timeout_secs, lax)
        }
        Command::Extract { html, language, json, extractor } => extract(&html, language, json, &extractor),
        Command::Convert { labelstudio, out, default_language, html_keys, author_label } => {
            convert(&labelstudio, &out, default_language, html_keys, author_label)
        }
        Command::Stats { corpus, json, lax } => stats(&corpus, json, lax),
        Command::Serve { name, extractor } => serve(&name, &extractor),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("byline-bench: {e:#}");
            ExitCode::FAILURE
        }
    }
}
