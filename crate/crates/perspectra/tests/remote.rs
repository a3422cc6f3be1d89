//! Remote stance client against a scripted local HTTP stub.

use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::Duration;

use perspectra::remote::{remote_classify, Classifier, RemoteStance};
use perspectra_core::index::Query;
use perspectra_core::pipeline::{PipelineConfig, StanceMode};
use perspectra_core::stance::{classify_stance, StanceClassifier, StanceError, StanceLabel, StanceResult};

struct Stub {
    url: String,
    bodies: Arc<Mutex<Vec<String>>>,
}

/// Answers every request with `status` and `body` after `delay`.
fn stub(status: u16, body: &'static str, delay: Duration) -> Stub {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let url = format!("http://{}/stance", listener.local_addr().unwrap());
    let bodies = Arc::new(Mutex::new(Vec::new()));
    let seen = Arc::clone(&bodies);
    thread::spawn(move || {
        for stream in listener.incoming() {
            let Ok(mut stream) = stream else { break };
            let mut reader = BufReader::new(stream.try_clone().unwrap());
            let mut len = 0usize;
            loop {
                let mut line = String::new();
                if reader.read_line(&mut line).unwrap_or(0) == 0 || line == "\r\n" {
                    break;
                }
                if let Some(v) = line.to_ascii_lowercase().strip_prefix("content-length:") {
                    len = v.trim().parse().unwrap();
                }
            }
            let mut buf = vec![0; len];
            reader.read_exact(&mut buf).unwrap();
            seen.lock().unwrap().push(String::from_utf8(buf).unwrap());
            thread::sleep(delay);
            let reply = format!(
                "HTTP/1.1 {status} X\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
                body.len()
            );
            let _ = stream.write_all(reply.as_bytes());
        }
    });
    Stub { url, bodies }
}

fn query() -> Query {
    Query::new("Should wearing masks be mandatory?")
}

const SECOND: Duration = Duration::from_secs(1);

#[test]
fn echoes_wire_contract() {
    let s = stub(200, r#"{"label":"refute","confidence":0.9}"#, Duration::ZERO);
    let r = remote_classify(&s.url, "Masks are not necessary.", &query(), 2 * SECOND).unwrap();
    assert_eq!(r, StanceResult { label: StanceLabel::Refute, confidence: 0.9 });
    let sent: serde_json::Value = serde_json::from_str(&s.bodies.lock().unwrap()[0]).unwrap();
    assert_eq!(sent, serde_json::json!({"statement": "Masks are not necessary.", "query": "Should wearing masks be mandatory?"}));
}

#[test]
fn out_of_range_confidence_is_contract_violation() {
    let s = stub(200, r#"{"label":"support","confidence":1.5}"#, Duration::ZERO);
    let err = remote_classify(&s.url, "x", &query(), 2 * SECOND).unwrap_err();
    assert!(matches!(err, StanceError::Contract { field: "confidence", .. }), "{err:?}");
}

#[test]
fn unknown_label_and_bad_json_name_the_field() {
    let s = stub(200, r#"{"label":"agree","confidence":0.5}"#, Duration::ZERO);
    let err = remote_classify(&s.url, "x", &query(), 2 * SECOND).unwrap_err();
    assert!(matches!(err, StanceError::Contract { field: "label", .. }), "{err:?}");
    let s = stub(200, "not json", Duration::ZERO);
    let err = remote_classify(&s.url, "x", &query(), 2 * SECOND).unwrap_err();
    assert!(matches!(err, StanceError::Contract { field: "body", .. }), "{err:?}");
}

#[test]
fn non_200_is_status_error() {
    let s = stub(503, r#"{"label":"support","confidence":0.5}"#, Duration::ZERO);
    assert_eq!(remote_classify(&s.url, "x", &query(), 2 * SECOND), Err(StanceError::Status(503)));
}

#[test]
fn slow_service_times_out() {
    let s = stub(200, r#"{"label":"support","confidence":0.5}"#, Duration::from_millis(800));
    let err = remote_classify(&s.url, "x", &query(), Duration::from_millis(150)).unwrap_err();
    assert_eq!(err, StanceError::Timeout);
}

fn unreachable_url() -> String {
    let l = TcpListener::bind("127.0.0.1:0").unwrap();
    let url = format!("http://{}/stance", l.local_addr().unwrap());
    drop(l);
    url
}

#[test]
fn unreachable_endpoint_errors_without_fallback() {
    let client = RemoteStance::new(unreachable_url(), SECOND);
    assert!(matches!(client.classify("x", &query()), Err(StanceError::Transport(_) | StanceError::Timeout)));

    let mut config = PipelineConfig::default();
    config.stance.mode = StanceMode::Remote;
    config.stance.endpoint = Some(unreachable_url());
    config.stance.fallback_to_baseline = false;
    assert!(Classifier::from_config(&config).classify("x", &query()).is_err());
}

#[test]
fn unreachable_endpoint_with_fallback_equals_baseline() {
    let mut config = PipelineConfig::default();
    config.stance.mode = StanceMode::Remote;
    config.stance.endpoint = Some(unreachable_url());
    let classifier = Classifier::from_config(&config);
    for statement in ["Masks are effective and necessary.", "Masks are not necessary.", "The weather is nice.", ""] {
        assert_eq!(classifier.classify(statement, &query()).unwrap(), classify_stance(statement, &query()));
    }
}

#[test]
fn remote_labels_drive_the_pipeline() {
    let s = stub(200, r#"{"label":"neutral","confidence":0.4}"#, Duration::ZERO);
    let (corpus, index) = perspectra::data::demo();
    let mut config = PipelineConfig::default();
    config.stance.mode = StanceMode::Remote;
    config.stance.endpoint = Some(s.url.clone());
    config.stance.fallback_to_baseline = false;
    let app = perspectra::App::new(corpus, index, config);
    let r = app.search("Should wearing masks be mandatory?", None).unwrap();
    assert!(r.clusters.support.is_empty() && r.clusters.refute.is_empty());
    assert!(!r.clusters.neutral.is_empty());
    assert!(r.clusters.neutral.iter().all(|c| c.stance_confidence == 0.4 && c.evidence.is_empty()));
}
