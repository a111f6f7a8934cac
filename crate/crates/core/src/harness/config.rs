//! The adapters file: which extractors to run and how.
//!
//! ```toml
//! timeout_secs = 30
//!
//! [metrics]
//! rouge_n = 1
//!
//! [extractor.patterns.languages.fr]
//! cues = ["Par", "Rédigé par"]
//!
//! [[adapter]]
//! name = "cascade"
//! builtin = "cascade"
//!
//! [[adapter]]
//! name = "trafilatura"
//! command = ["python3", "-m", "byline_adapters.trafilatura"]
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::adapter::{Adapter, CascadeAdapter, ExternalAdapter, NerAdapter, DEFAULT_PIPELINE_DEPTH};
use super::protocol::LaunchSpec;
use crate::extract::{ConfigError, Extractor, ExtractorConfig};
use crate::metrics::MetricConfig;
use crate::ner::{EntityKind, Gazetteer, NerOptions, NerProvider, RuleBasedProvider, StdioNerProvider};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BuiltinKind {
    /// Metadata and byline heuristics.
    Cascade,
    /// The cascade with the NER baseline as last stage.
    CascadeNer,
    /// The NER baseline alone.
    CustomNer,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdapterSpec {
    pub name: String,
    #[serde(default)]
    pub builtin: Option<BuiltinKind>,
    #[serde(default)]
    pub command: Option<Vec<String>>,
    #[serde(default)]
    pub env: BTreeMap<String, String>,
    #[serde(default)]
    pub cwd: Option<PathBuf>,
    #[serde(default)]
    pub timeout_secs: Option<u64>,
    #[serde(default)]
    pub pipeline_depth: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NerConfig {
    /// Files of person names.
    pub gazetteers: Vec<PathBuf>,
    /// Files of organization names.
    pub organizations: Vec<PathBuf>,
    /// An external provider speaking the adapter protocol; replaces the rule-based one.
    pub command: Option<Vec<String>>,
    pub options: NerOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarnessConfig {
    #[serde(default)]
    pub metrics: MetricConfig,
    #[serde(default)]
    pub extractor: ExtractorConfig,
    #[serde(default)]
    pub ner: NerConfig,
    #[serde(default = "default_timeout_secs")]
    pub timeout_secs: u64,
    #[serde(default = "default_depth")]
    pub pipeline_depth: usize,
    #[serde(rename = "adapter", default)]
    pub adapters: Vec<AdapterSpec>,
}

fn default_timeout_secs() -> u64 {
    30
}

fn default_depth() -> usize {
    DEFAULT_PIPELINE_DEPTH
}

impl Default for HarnessConfig {
    fn default() -> Self {
        Self {
            metrics: MetricConfig::default(),
            extractor: ExtractorConfig::default(),
            ner: NerConfig::default(),
            timeout_secs: default_timeout_secs(),
            pipeline_depth: default_depth(),
            adapters: Vec::new(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum HarnessConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("invalid adapters file: {0}")]
    Toml(#[from] toml::de::Error),
    #[error(transparent)]
    Extractor(#[from] ConfigError),
    #[error("adapter {0:?}: exactly one of `builtin` and `command` is required")]
    AdapterKind(String),
    #[error("adapter name {0:?} is used twice")]
    DuplicateName(String),
    #[error("NER provider: {0}")]
    Ner(String),
}

impl HarnessConfig {
    pub fn parse(text: &str) -> Result<Self, HarnessConfigError> {
        Ok(toml::from_str(text)?)
    }

    /// Loads the file and resolves relative paths against its directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, HarnessConfigError> {
        let path = path.as_ref();
        let text =
            std::fs::read_to_string(path).map_err(|source| HarnessConfigError::Io { path: path.to_path_buf(), source })?;
        let mut config = Self::parse(&text)?;
        let base = path.parent().unwrap_or(Path::new(""));
        let resolve = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        config.ner.gazetteers.iter_mut().for_each(resolve);
        config.ner.organizations.iter_mut().for_each(resolve);
        for a in &mut config.adapters {
            a.cwd.get_or_insert_with(|| base.to_path_buf());
            if let Some(cwd) = &mut a.cwd {
                resolve(cwd);
            }
        }
        Ok(config)
    }

    fn ner_provider(&self) -> Result<Arc<dyn NerProvider>, HarnessConfigError> {
        if let Some(command) = &self.ner.command {
            let spec = LaunchSpec::new(command.iter().cloned());
            let provider = StdioNerProvider::spawn(&spec, None, Duration::from_secs(self.timeout_secs))
                .map_err(|e| HarnessConfigError::Ner(e.to_string()))?;
            return Ok(Arc::new(provider));
        }
        let mut gazetteer = Gazetteer::new();
        for (paths, kind) in [(&self.ner.gazetteers, EntityKind::Person), (&self.ner.organizations, EntityKind::Organization)] {
            for path in paths {
                let text = std::fs::read_to_string(path)
                    .map_err(|source| HarnessConfigError::Io { path: path.clone(), source })?;
                gazetteer.extend_from_str(&text, kind);
            }
        }
        Ok(Arc::new(RuleBasedProvider::new(gazetteer)))
    }

    /// Instantiates the adapters. `timeout` overrides every per-adapter setting.
    pub fn build_adapters(&self, timeout: Option<Duration>) -> Result<Vec<Box<dyn Adapter>>, HarnessConfigError> {
        let mut seen = std::collections::HashSet::new();
        for a in &self.adapters {
            if !seen.insert(a.name.as_str()) {
                return Err(HarnessConfigError::DuplicateName(a.name.clone()));
            }
            if a.builtin.is_some() == a.command.is_some() {
                return Err(HarnessConfigError::AdapterKind(a.name.clone()));
            }
        }
        let needs_extractor = self.adapters.iter().any(|a| matches!(a.builtin, Some(BuiltinKind::Cascade | BuiltinKind::CascadeNer)));
        let needs_ner = self.adapters.iter().any(|a| matches!(a.builtin, Some(BuiltinKind::CascadeNer | BuiltinKind::CustomNer)));
        let extractor = if needs_extractor { Some(Arc::new(Extractor::new(self.extractor.clone())?)) } else { None };
        let ner = if needs_ner { Some(self.ner_provider()?) } else { None };

        let mut out: Vec<Box<dyn Adapter>> = Vec::new();
        for a in &self.adapters {
            let adapter: Box<dyn Adapter> = match (a.builtin, &a.command) {
                (Some(BuiltinKind::Cascade), _) => {
                    Box::new(CascadeAdapter::new(&a.name, extractor.clone().expect("built above"), None))
                }
                (Some(BuiltinKind::CascadeNer), _) => {
                    Box::new(CascadeAdapter::new(&a.name, extractor.clone().expect("built above"), ner.clone()))
                }
                (Some(BuiltinKind::CustomNer), _) => {
                    Box::new(NerAdapter::new(&a.name, ner.clone().expect("built above"), self.ner.options))
                }
                (None, Some(command)) => {
                    let spec = LaunchSpec { command: command.clone(), env: a.env.clone(), cwd: a.cwd.clone() };
                    let t = timeout.unwrap_or(Duration::from_secs(a.timeout_secs.unwrap_or(self.timeout_secs)));
                    Box::new(
                        ExternalAdapter::new(&a.name, spec)
                            .with_timeout(t)
                            .with_pipeline_depth(a.pipeline_depth.unwrap_or(self.pipeline_depth)),
                    )
                }
                (None, None) => unreachable!("validated above"),
            };
            out.push(adapter);
        }
        Ok(out)
    }
}
