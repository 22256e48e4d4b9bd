//! HTTP interface: `POST /api/typecheck`, `GET /api/health` and static assets.

use axum::body::Bytes;
use axum::extract::DefaultBodyLimit;
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::json;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use tower_http::services::ServeDir;

pub const DEFAULT_PORT: u16 = 8420;
pub const MAX_BODY_BYTES: usize = 1024 * 1024;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TypecheckRequest {
    source: String,
}

/// The port from `CHAMELEON_PORT`, or the default.
pub fn port_from_env() -> Result<u16, String> {
    match std::env::var("CHAMELEON_PORT") {
        Ok(value) => value.trim().parse().map_err(|_| format!("CHAMELEON_PORT is not a valid port: {value}")),
        Err(_) => Ok(DEFAULT_PORT),
    }
}

pub fn router(static_dir: Option<&Path>) -> Router {
    let api = Router::new()
        .route("/api/typecheck", post(typecheck))
        .route("/api/health", get(health))
        .layer(DefaultBodyLimit::max(MAX_BODY_BYTES));
    match static_dir {
        Some(dir) if dir.is_dir() => api.fallback_service(ServeDir::new(dir)),
        _ => api,
    }
}

async fn health() -> Json<serde_json::Value> {
    Json(json!({"status": "ok"}))
}

fn error(status: StatusCode, message: impl Into<String>) -> Response {
    (status, Json(json!({"error": message.into()}))).into_response()
}

async fn typecheck(body: Bytes) -> Response {
    let request: TypecheckRequest = match serde_json::from_slice(&body) {
        Ok(r) => r,
        Err(e) => return error(StatusCode::BAD_REQUEST, format!("malformed request: {e}")),
    };
    let result = tokio::task::spawn_blocking(move || chameleon_core::to_json(&chameleon_core::check(&request.source))).await;
    match result {
        Ok(body) => ([(header::CONTENT_TYPE, "application/json")], body).into_response(),
        Err(e) => error(StatusCode::INTERNAL_SERVER_ERROR, format!("analysis failed: {e}")),
    }
}

pub async fn serve(port: u16, static_dir: Option<PathBuf>) -> std::io::Result<()> {
    let addr = SocketAddr::from(([127, 0, 0, 1], port));
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{addr}");
    axum::serve(listener, router(static_dir.as_deref())).await
}
