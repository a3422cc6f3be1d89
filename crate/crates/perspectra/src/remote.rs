//! HTTP client for an external stance model.
//!
//! Wire protocol: `POST <endpoint>` with `{"statement": .., "query": ..}`;
//! the service answers `200` with `{"label": "support"|"refute"|"neutral",
//! "confidence": <number in [0, 1]>}`. Any other status is an error.

use std::time::Duration;

use perspectra_core::index::Query;
use perspectra_core::pipeline::{PipelineConfig, StanceMode};
use perspectra_core::stance::{BaselineStance, StanceClassifier, StanceError, StanceLabel, StanceResult};
use serde::Serialize;
use serde_json::Value;

#[derive(Serialize)]
struct Request<'a> {
    statement: &'a str,
    query: &'a str,
}

/// Blocking client; the agent's connection pool is shared across threads.
#[derive(Debug, Clone)]
pub struct RemoteStance {
    agent: ureq::Agent,
    endpoint: String,
}

impl RemoteStance {
    pub fn new(endpoint: impl Into<String>, timeout: Duration) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(timeout))
            .http_status_as_error(false)
            .build()
            .into();
        RemoteStance {
            agent,
            endpoint: endpoint.into(),
        }
    }

    pub fn endpoint(&self) -> &str {
        &self.endpoint
    }
}

fn transport(e: ureq::Error) -> StanceError {
    match e {
        ureq::Error::Timeout(_) => StanceError::Timeout,
        ureq::Error::Io(io) if matches!(io.kind(), std::io::ErrorKind::TimedOut | std::io::ErrorKind::WouldBlock) => {
            StanceError::Timeout
        }
        other => StanceError::Transport(other.to_string()),
    }
}

fn contract(field: &'static str, message: impl Into<String>) -> StanceError {
    StanceError::Contract {
        field,
        message: message.into(),
    }
}

/// Validates a decoded response body.
pub fn parse_response(body: &Value) -> Result<StanceResult, StanceError> {
    let Value::Object(map) = body else {
        return Err(contract("body", "expected a JSON object"));
    };
    let label: StanceLabel = match map.get("label") {
        Some(Value::String(s)) => s.parse()?,
        Some(_) => return Err(contract("label", "expected a string")),
        None => return Err(contract("label", "missing")),
    };
    let confidence = match map.get("confidence") {
        Some(Value::Number(n)) => n.as_f64().ok_or_else(|| contract("confidence", "not representable"))?,
        Some(_) => return Err(contract("confidence", "expected a number")),
        None => return Err(contract("confidence", "missing")),
    };
    if !(0.0..=1.0).contains(&confidence) {
        return Err(contract("confidence", format!("{confidence} is outside [0, 1]")));
    }
    Ok(StanceResult { label, confidence })
}

impl StanceClassifier for RemoteStance {
    fn classify(&self, statement: &str, query: &Query) -> Result<StanceResult, StanceError> {
        let mut response = self
            .agent
            .post(&self.endpoint)
            .send_json(Request {
                statement,
                query: &query.raw,
            })
            .map_err(transport)?;
        let status = response.status().as_u16();
        if status != 200 {
            return Err(StanceError::Status(status));
        }
        let body: Value = response.body_mut().read_json().map_err(|e| match e {
            ureq::Error::Json(j) => contract("body", j.to_string()),
            other => transport(other),
        })?;
        parse_response(&body)
    }
}

/// One-shot request against `endpoint`.
pub fn remote_classify(endpoint: &str, statement: &str, query: &Query, timeout: Duration) -> Result<StanceResult, StanceError> {
    RemoteStance::new(endpoint, timeout).classify(statement, query)
}

/// The stance classifier selected by a pipeline configuration.
#[derive(Debug, Clone)]
pub enum Classifier {
    Baseline(BaselineStance<'static>),
    /// Remote model; failures fall back to the baseline when `fallback` is set.
    Remote {
        client: RemoteStance,
        baseline: BaselineStance<'static>,
        fallback: bool,
    },
}

impl Classifier {
    pub fn from_config(config: &PipelineConfig) -> Self {
        let baseline = BaselineStance::new(config.stance.overlap_gate);
        match (config.stance.mode, &config.stance.endpoint) {
            (StanceMode::Remote, Some(endpoint)) => Classifier::Remote {
                client: RemoteStance::new(endpoint.clone(), Duration::from_millis(config.stance.timeout_ms)),
                baseline,
                fallback: config.stance.fallback_to_baseline,
            },
            _ => Classifier::Baseline(baseline),
        }
    }
}

impl StanceClassifier for Classifier {
    fn classify(&self, statement: &str, query: &Query) -> Result<StanceResult, StanceError> {
        match self {
            Classifier::Baseline(b) => b.classify(statement, query),
            Classifier::Remote {
                client,
                baseline,
                fallback,
            } => match client.classify(statement, query) {
                Err(_) if *fallback => baseline.classify(statement, query),
                other => other,
            },
        }
    }
}
