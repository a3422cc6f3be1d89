//! HTTP service: `GET /health`, `GET /search?q=..&k=..`, `GET /doc/{id}`.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::Router;

use crate::app::{ApiError, App};

fn json(status: StatusCode, body: String) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
}

fn error(e: ApiError) -> Response {
    let status = StatusCode::from_u16(e.status()).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
    json(status, e.to_json())
}

async fn health() -> Response {
    json(StatusCode::OK, "{\"status\":\"ok\"}\n".into())
}

async fn search(State(app): State<Arc<App>>, Query(params): Query<HashMap<String, String>>) -> Response {
    let Some(q) = params.get("q").cloned() else {
        return error(ApiError::MissingParam("q"));
    };
    let k = match params.get("k").map(|k| k.trim().parse::<usize>()) {
        None => None,
        Some(Ok(k)) => Some(k),
        Some(Err(e)) => {
            return error(ApiError::BadParam {
                name: "k",
                message: e.to_string(),
            })
        }
    };
    // The pipeline may block on the remote stance service.
    match tokio::task::spawn_blocking(move || app.search_json(&q, k)).await {
        Ok(Ok(body)) => json(StatusCode::OK, body),
        Ok(Err(e)) => error(e),
        Err(join) => json(
            StatusCode::INTERNAL_SERVER_ERROR,
            crate::app::render_json(&serde_json::json!({"error": {"code": "internal", "message": join.to_string()}})),
        ),
    }
}

async fn document(State(app): State<Arc<App>>, Path(id): Path<String>) -> Response {
    match app.doc_json(&id) {
        Ok(body) => json(StatusCode::OK, body),
        Err(e) => error(e),
    }
}

async fn fallback(uri: axum::http::Uri) -> Response {
    error(ApiError::UnknownRoute(uri.path().to_string()))
}

pub fn router(app: Arc<App>) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/search", get(search))
        .route("/doc/{id}", get(document))
        .fallback(fallback)
        .with_state(app)
}

async fn shutdown_signal() {
    let _ = tokio::signal::ctrl_c().await;
}

/// Serves until Ctrl-C, then drains in-flight requests.
pub async fn serve(app: Arc<App>, addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    serve_on(app, listener, shutdown_signal()).await
}

/// Serves on an already-bound listener until `shutdown` resolves.
pub async fn serve_on(
    app: Arc<App>,
    listener: tokio::net::TcpListener,
    shutdown: impl std::future::Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, router(app)).with_graceful_shutdown(shutdown).await
}
