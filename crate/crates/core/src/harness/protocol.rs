//! The `byline-adapter/1` stdio protocol: UTF-8, one JSON object per line.
//!
//! ```text
//! -> {"protocol":"byline-adapter/1"}
//! <- {"protocol":"byline-adapter/1","name":"trafilatura"}
//! -> {"id":"d1","html":"<html>...","url":null,"language":"en"}
//! <- {"id":"d1","authors":["Jane Doe"],"error":null}
//! ```
//!
//! NER providers answer with `"entities"` instead of `"authors"` and receive
//! the page's visible text in an extra `"text"` field.

use std::io::{self, BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::ner::EntityKind;

pub const PROTOCOL: &str = "byline-adapter/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Handshake {
    pub protocol: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Request {
    pub id: String,
    pub html: String,
    pub url: Option<String>,
    pub language: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireEntity {
    pub surface: String,
    #[serde(default = "person")]
    pub kind: EntityKind,
    /// Character offset of this (or the first) mention.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset: Option<usize>,
    /// Mentions this entry stands for; 1 when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frequency: Option<usize>,
}

fn person() -> EntityKind {
    EntityKind::Person
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Response {
    pub id: String,
    #[serde(default)]
    pub authors: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entities: Option<Vec<WireEntity>>,
    #[serde(default)]
    pub error: Option<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum ProtocolError {
    #[error("could not start adapter `{command}`: {source}")]
    Spawn { command: String, source: io::Error },
    #[error("adapter closed its output")]
    Closed,
    #[error("timed out after {0:?}")]
    Timeout(Duration),
    #[error("protocol violation: {0}")]
    Violation(String),
    #[error("i/o error talking to adapter: {0}")]
    Io(#[from] io::Error),
}

/// How to launch an external adapter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaunchSpec {
    /// Program followed by its arguments.
    pub command: Vec<String>,
    #[serde(default)]
    pub env: std::collections::BTreeMap<String, String>,
    #[serde(default)]
    pub cwd: Option<std::path::PathBuf>,
}

impl LaunchSpec {
    pub fn new<S: Into<String>>(command: impl IntoIterator<Item = S>) -> Self {
        Self { command: command.into_iter().map(Into::into).collect(), env: Default::default(), cwd: None }
    }

    fn display(&self) -> String {
        self.command.join(" ")
    }
}

/// A running adapter that completed the handshake.
///
/// Lines are read on a background thread so receives can time out.
pub struct AdapterProcess {
    child: Child,
    stdin: Option<ChildStdin>,
    lines: Receiver<io::Result<String>>,
    name: String,
}

impl AdapterProcess {
    pub fn spawn(spec: &LaunchSpec, handshake_timeout: Duration) -> Result<Self, ProtocolError> {
        let (program, args) = spec
            .command
            .split_first()
            .ok_or_else(|| ProtocolError::Violation("empty adapter command".into()))?;
        let mut cmd = Command::new(program);
        cmd.args(args).envs(&spec.env).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
        if let Some(dir) = &spec.cwd {
            cmd.current_dir(dir);
        }
        let mut child = cmd.spawn().map_err(|source| ProtocolError::Spawn { command: spec.display(), source })?;

        let stdout = child.stdout.take().expect("piped stdout");
        let (tx, lines) = mpsc::channel();
        thread::spawn(move || {
            for line in BufReader::new(stdout).lines() {
                let stop = line.is_err();
                if tx.send(line).is_err() || stop {
                    break;
                }
            }
        });
        let stderr = child.stderr.take().expect("piped stderr");
        let label = spec.display();
        thread::spawn(move || {
            for line in BufReader::new(stderr).lines().map_while(Result::ok) {
                log::debug!("[{label}] {line}");
            }
        });

        let mut process = Self { stdin: child.stdin.take(), child, lines, name: String::new() };
        process.send_json(&Handshake { protocol: PROTOCOL.into(), name: None })?;
        let line = process.recv_line(handshake_timeout)?;
        let reply: Handshake = serde_json::from_str(&line)
            .map_err(|e| ProtocolError::Violation(format!("bad handshake reply {line:?}: {e}")))?;
        if reply.protocol != PROTOCOL {
            process.kill();
            return Err(ProtocolError::Violation(format!("adapter speaks {:?}, expected {PROTOCOL:?}", reply.protocol)));
        }
        process.name = reply.name.unwrap_or_else(|| program.clone());
        Ok(process)
    }

    /// Name announced in the handshake.
    pub fn name(&self) -> &str {
        &self.name
    }

    fn send_json<T: Serialize>(&mut self, value: &T) -> Result<(), ProtocolError> {
        let stdin = self.stdin.as_mut().ok_or(ProtocolError::Closed)?;
        let mut line = serde_json::to_string(value).expect("serializable message");
        line.push('\n');
        match stdin.write_all(line.as_bytes()).and_then(|_| stdin.flush()) {
            Ok(()) => Ok(()),
            Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Err(ProtocolError::Closed),
            Err(e) => Err(e.into()),
        }
    }

    pub fn send(&mut self, request: &Request) -> Result<(), ProtocolError> {
        self.send_json(request)
    }

    /// Takes the write half, for callers that write on their own thread.
    pub(crate) fn take_stdin(&mut self) -> Option<ChildStdin> {
        self.stdin.take()
    }

    fn recv_line(&mut self, timeout: Duration) -> Result<String, ProtocolError> {
        loop {
            let line = match self.lines.recv_timeout(timeout) {
                Ok(line) => line?,
                Err(RecvTimeoutError::Timeout) => return Err(ProtocolError::Timeout(timeout)),
                Err(RecvTimeoutError::Disconnected) => return Err(ProtocolError::Closed),
            };
            if !line.trim().is_empty() {
                return Ok(line);
            }
        }
    }

    pub fn recv(&mut self, timeout: Duration) -> Result<Response, ProtocolError> {
        let line = self.recv_line(timeout)?;
        parse_response(&line)
    }

    pub fn kill(&mut self) {
        self.stdin = None;
        let _ = self.child.kill();
        let _ = self.child.wait();
    }

    /// Closes stdin and gives the adapter a moment to exit before killing it.
    pub fn shutdown(mut self) {
        self.stdin = None;
        for _ in 0..20 {
            if let Ok(Some(_)) = self.child.try_wait() {
                return;
            }
            thread::sleep(Duration::from_millis(10));
        }
        self.kill();
    }
}

impl Drop for AdapterProcess {
    fn drop(&mut self) {
        if let Ok(None) = self.child.try_wait() {
            self.kill();
        }
    }
}

pub fn parse_response(line: &str) -> Result<Response, ProtocolError> {
    serde_json::from_str(line).map_err(|e| ProtocolError::Violation(format!("bad response {line:?}: {e}")))
}

/// Serves the protocol on the given streams. `handle` maps a request to a
/// response; it is called once per request line in order.
pub fn serve<R: BufRead, W: Write>(
    name: &str,
    input: R,
    mut output: W,
    mut handle: impl FnMut(Request) -> Response,
) -> io::Result<()> {
    let mut lines = input.lines();
    let Some(first) = lines.next() else { return Ok(()) };
    let hello: Handshake = serde_json::from_str(&first?).map_err(io::Error::other)?;
    if hello.protocol != PROTOCOL {
        return Err(io::Error::other(format!("unsupported protocol {:?}", hello.protocol)));
    }
    writeln!(output, "{}", serde_json::to_string(&Handshake { protocol: PROTOCOL.into(), name: Some(name.into()) })?)?;
    output.flush()?;
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let response = match serde_json::from_str::<Request>(&line) {
            Ok(request) => handle(request),
            Err(e) => {
                // Without an id there is nothing to answer.
                log::warn!("ignoring malformed request: {e}");
                continue;
            }
        };
        writeln!(output, "{}", serde_json::to_string(&response)?)?;
        output.flush()?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wire_shapes() {
        let req = Request { id: "d1".into(), html: "<p>x</p>".into(), url: None, language: "en".into(), text: None };
        assert_eq!(
            serde_json::to_string(&req).unwrap(),
            r#"{"id":"d1","html":"<p>x</p>","url":null,"language":"en"}"#
        );
        let resp = parse_response(r#"{"id":"d1","authors":["Jane Doe"],"error":null}"#).unwrap();
        assert_eq!(resp.authors, vec!["Jane Doe"]);
        let ner = parse_response(r#"{"id":"d2","entities":[{"surface":"Li Wei","offset":4}],"error":null}"#).unwrap();
        assert_eq!(ner.entities.unwrap()[0].kind, EntityKind::Person);
        assert!(parse_response(r#"{"authors":[]}"#).is_err());
        assert!(parse_response("not json").is_err());
    }

    #[test]
    fn serve_answers_in_order() {
        let input = concat!(
            r#"{"protocol":"byline-adapter/1"}"#,
            "\n",
            r#"{"id":"a","html":"","url":null,"language":"en"}"#,
            "\n\n",
            r#"{"id":"b","html":"","url":"https://x.test/","language":"fr"}"#,
            "\n"
        );
        let mut out = Vec::new();
        serve("echo", input.as_bytes(), &mut out, |r| Response {
            authors: vec![r.language.clone()],
            id: r.id,
            entities: None,
            error: None,
        })
        .unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], r#"{"protocol":"byline-adapter/1","name":"echo"}"#);
        assert_eq!(lines[1], r#"{"id":"a","authors":["en"],"error":null}"#);
        assert_eq!(lines[2], r#"{"id":"b","authors":["fr"],"error":null}"#);
    }
}
