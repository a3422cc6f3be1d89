//! Corpus ingestion, index snapshots, configuration, the remote stance
//! client, evaluation files and the HTTP service built on `perspectra-core`.

pub mod app;
pub mod config;
pub mod data;
pub mod eval;
pub mod ingest;
pub mod remote;
pub mod server;
pub mod snapshot;

pub use app::{render_json, render_text, ApiError, App};
pub use perspectra_core as core;
