//! NER over the adapter protocol, for models that live in another process.

use std::collections::HashMap;
use std::sync::Mutex;
use std::time::Duration;

use super::{CandidateEntity, NerError, NerProvider};
use crate::harness::protocol::{AdapterProcess, LaunchSpec, ProtocolError, Request, WireEntity};
use crate::lang::LanguageCode;

pub struct StdioNerProvider {
    name: String,
    languages: Option<Vec<LanguageCode>>,
    timeout: Duration,
    state: Mutex<State>,
}

struct State {
    process: Option<AdapterProcess>,
    next_id: u64,
}

impl StdioNerProvider {
    /// Starts the process and performs the handshake. `languages` of `None`
    /// means every language is passed through to the provider.
    pub fn spawn(spec: &LaunchSpec, languages: Option<Vec<LanguageCode>>, timeout: Duration) -> Result<Self, ProtocolError> {
        let process = AdapterProcess::spawn(spec, timeout)?;
        Ok(Self {
            name: process.name().to_string(),
            languages,
            timeout,
            state: Mutex::new(State { process: Some(process), next_id: 0 }),
        })
    }
}

/// Folds wire entries into one entity per surface. Missing offsets fall back
/// to the first occurrence in `text`.
pub(crate) fn aggregate(entries: Vec<WireEntity>, text: &str) -> Vec<CandidateEntity> {
    let mut out: Vec<CandidateEntity> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    for e in entries {
        let offset = e
            .offset
            .or_else(|| text.find(e.surface.as_str()).map(|b| text[..b].chars().count()))
            .unwrap_or(usize::MAX);
        let frequency = e.frequency.unwrap_or(1).max(1);
        match index.get(&e.surface) {
            Some(&i) => {
                out[i].frequency += frequency;
                out[i].first_offset = out[i].first_offset.min(offset);
            }
            None => {
                index.insert(e.surface.clone(), out.len());
                out.push(CandidateEntity { surface: e.surface, kind: e.kind, first_offset: offset, frequency });
            }
        }
    }
    out
}

impl NerProvider for StdioNerProvider {
    fn name(&self) -> &str {
        &self.name
    }

    fn supports(&self, language: LanguageCode) -> bool {
        self.languages.as_ref().is_none_or(|l| l.contains(&language))
    }

    fn annotate(&self, text: &str, language: LanguageCode) -> Result<Vec<CandidateEntity>, NerError> {
        if text.is_empty() {
            return Err(NerError::EmptyText);
        }
        let mut state = self.state.lock().unwrap_or_else(|p| p.into_inner());
        state.next_id += 1;
        let id = format!("ner-{}", state.next_id);
        let process = state.process.as_mut().ok_or_else(|| NerError::Provider("provider is disabled".into()))?;
        let request =
            Request { id: id.clone(), html: String::new(), url: None, language: language.to_string(), text: Some(text.into()) };
        let result = process.send(&request).and_then(|_| loop {
            let response = process.recv(self.timeout)?;
            // A late answer to an earlier, timed-out request.
            if response.id != id {
                log::warn!("{}: discarding response for stale id {}", self.name, response.id);
                continue;
            }
            break Ok(response);
        });
        match result {
            Ok(response) => match response.error {
                Some(e) => Err(NerError::Provider(e)),
                None => Ok(aggregate(response.entities.unwrap_or_default(), text)),
            },
            Err(e @ ProtocolError::Timeout(_)) => Err(NerError::Provider(e.to_string())),
            Err(e) => {
                state.process = None;
                Err(NerError::Provider(e.to_string()))
            }
        }
    }

    fn concurrent(&self) -> bool {
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ner::EntityKind;

    fn wire(surface: &str, offset: Option<usize>, frequency: Option<usize>) -> WireEntity {
        WireEntity { surface: surface.into(), kind: EntityKind::Person, offset, frequency }
    }

    #[test]
    fn mentions_fold_into_counts() {
        let text = "Ана Лі and Bo. Bo again, Bo.";
        let got = aggregate(
            vec![wire("Bo", Some(11), None), wire("Ана Лі", None, None), wire("Bo", Some(15), None), wire("Bo", Some(25), Some(1))],
            text,
        );
        assert_eq!(got.len(), 2);
        assert_eq!((got[0].surface.as_str(), got[0].frequency, got[0].first_offset), ("Bo", 3, 11));
        assert_eq!((got[1].surface.as_str(), got[1].frequency, got[1].first_offset), ("Ана Лі", 1, 0));
    }
}
