//! Minimal GET transport shared by the elevation and directions clients.
//!
//! URLs starting with `file://` are served from disk (query string ignored),
//! which is how offline fixtures stand in for the real services.

use std::sync::Arc;
use std::time::Duration;

use thiserror::Error;

/// Error messages never include the request URL, since it may carry an API
/// key.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransportError {
    #[error("network error: {0}")]
    Network(String),
    #[error("upstream returned HTTP {0}")]
    Status(u16),
    #[error("cannot read mock file: {0}")]
    File(String),
}

impl TransportError {
    /// Failures worth retrying: connection-level problems, not answers.
    pub fn is_transient(&self) -> bool {
        matches!(self, TransportError::Network(_))
    }
}

pub trait Transport: Send + Sync {
    fn get(&self, url: &str) -> Result<String, TransportError>;
}

pub struct HttpTransport {
    agent: ureq::Agent,
}

impl HttpTransport {
    pub fn new(timeout: Duration) -> Self {
        Self {
            agent: ureq::AgentBuilder::new().timeout(timeout).build(),
        }
    }
}

impl Default for HttpTransport {
    fn default() -> Self {
        Self::new(Duration::from_secs(10))
    }
}

impl Transport for HttpTransport {
    fn get(&self, url: &str) -> Result<String, TransportError> {
        match self.agent.get(url).call() {
            Ok(resp) => resp
                .into_string()
                .map_err(|e| TransportError::Network(e.kind().to_string())),
            Err(ureq::Error::Status(code, _)) => Err(TransportError::Status(code)),
            Err(ureq::Error::Transport(t)) => Err(TransportError::Network(t.kind().to_string())),
        }
    }
}

#[derive(Debug, Default, Clone, Copy)]
pub struct FileTransport;

impl Transport for FileTransport {
    fn get(&self, url: &str) -> Result<String, TransportError> {
        let path = file_url_path(url)
            .ok_or_else(|| TransportError::File("not a file:// url".to_string()))?;
        std::fs::read_to_string(path).map_err(|e| TransportError::File(format!("{path}: {e}")))
    }
}

pub(crate) fn file_url_path(url: &str) -> Option<&str> {
    let rest = url.strip_prefix("file://")?;
    Some(rest.split('?').next().unwrap_or(rest))
}

/// Picks the file or HTTP transport based on the URL scheme.
pub fn transport_for(url: &str) -> Arc<dyn Transport> {
    if url.starts_with("file://") {
        Arc::new(FileTransport)
    } else {
        Arc::new(HttpTransport::default())
    }
}

/// Percent-encodes a query parameter value.
pub(crate) fn encode_query_value(value: &str) -> String {
    let mut out = String::with_capacity(value.len());
    for b in value.bytes() {
        match b {
            b'A'..=b'Z' | b'a'..=b'z' | b'0'..=b'9' | b'-' | b'_' | b'.' | b'~' | b',' => {
                out.push(b as char)
            }
            _ => out.push_str(&format!("%{b:02X}")),
        }
    }
    out
}

pub(crate) fn join_query(base: &str, params: &[(&str, String)]) -> String {
    let sep = if base.contains('?') { '&' } else { '?' };
    let query: Vec<String> = params
        .iter()
        .map(|(k, v)| format!("{k}={}", encode_query_value(v)))
        .collect();
    format!("{base}{sep}{}", query.join("&"))
}
