//! HTTP front end for the recommendation engine.

use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use fontpair_core::{Engine64, EngineError, RecommendResponse};
use serde::{Deserialize, Serialize};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecommendRequest {
    pub prompt: String,
    pub n_pairs: usize,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct ErrorBody {
    pub error: String,
    pub detail: String,
}

fn error_response(status: StatusCode, error: &str, detail: String) -> Response {
    let body = ErrorBody {
        error: error.to_string(),
        detail,
    };
    (status, Json(body)).into_response()
}

pub fn status_for(err: &EngineError) -> StatusCode {
    match err {
        EngineError::EmptyPrompt | EngineError::InvalidRequest(_) => StatusCode::BAD_REQUEST,
        EngineError::BlockedPrompt(_)
        | EngineError::NoFontsForCategories(_)
        | EngineError::NoCandidates(_) => StatusCode::UNPROCESSABLE_ENTITY,
        EngineError::EmbedderUnavailable(_) => StatusCode::SERVICE_UNAVAILABLE,
        EngineError::UnknownFont(_) => StatusCode::NOT_FOUND,
        EngineError::Init { .. } | EngineError::Retrieval(_) | EngineError::Pairing(_) => {
            StatusCode::INTERNAL_SERVER_ERROR
        }
    }
}

async fn healthz(State(engine): State<Arc<Engine64>>) -> Json<serde_json::Value> {
    Json(serde_json::json!({ "status": "ok", "fonts": engine.font_count() }))
}

async fn recommend(State(engine): State<Arc<Engine64>>, body: Bytes) -> Response {
    let req: RecommendRequest = match serde_json::from_slice(&body) {
        Ok(r) => r,
        Err(e) => return error_response(StatusCode::BAD_REQUEST, "malformed_request", e.to_string()),
    };
    // the prompt embedder may block on network I/O
    let result = tokio::task::spawn_blocking(move || engine.recommend(&req.prompt, req.n_pairs, req.seed)).await;
    match result {
        Ok(Ok(pairs)) => (StatusCode::OK, Json(RecommendResponse::from_pairs(&pairs))).into_response(),
        Ok(Err(e)) => {
            let status = status_for(&e);
            if status.is_server_error() {
                tracing::warn!(error = %e, "recommend failed");
            }
            error_response(status, e.code(), e.to_string())
        }
        Err(e) => error_response(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()),
    }
}

pub fn router(engine: Arc<Engine64>) -> Router {
    Router::new()
        .route("/healthz", get(healthz))
        .route("/recommend", post(recommend))
        .with_state(engine)
}
