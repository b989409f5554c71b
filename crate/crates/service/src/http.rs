//! JSON API: `POST /v1/rank` and `GET /v1/health`.

use std::net::SocketAddr;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::Deserialize;
use serde_json::json;
use terrarank_core::geo::GeoPoint;
use terrarank_core::ranking::Preference;
use tower_http::cors::{Any, CorsLayer};

use crate::engine::{report_json, Engine, EngineError, RankQuery};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCoordinate {
    lat: f64,
    lng: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RankBody {
    origin: RawCoordinate,
    destination: RawCoordinate,
    preference: Preference,
    #[serde(default)]
    alpha: Option<f64>,
    #[serde(default)]
    k: Option<usize>,
}

/// An error as sent to clients.
#[derive(Debug, Clone, PartialEq)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: &'static str,
    pub message: String,
}

impl ApiError {
    fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        Self {
            status,
            code,
            message: message.into(),
        }
    }
}

impl From<EngineError> for ApiError {
    fn from(e: EngineError) -> Self {
        let status = match e {
            EngineError::InvalidRequest(_) => StatusCode::BAD_REQUEST,
            EngineError::NoRoute(_) => StatusCode::NOT_FOUND,
            EngineError::Upstream(_) | EngineError::Elevation(_) => StatusCode::BAD_GATEWAY,
            EngineError::Setup(_) | EngineError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        };
        ApiError::new(status, e.code(), e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({"error": {"code": self.code, "message": self.message}});
        json_response(self.status, body.to_string())
    }
}

fn json_response(status: StatusCode, body: String) -> Response {
    (
        status,
        [(
            header::CONTENT_TYPE,
            HeaderValue::from_static("application/json"),
        )],
        body,
    )
        .into_response()
}

fn coordinate(raw: &RawCoordinate, field: &str) -> Result<GeoPoint, ApiError> {
    GeoPoint::new(raw.lat, raw.lng).map_err(|e| {
        ApiError::new(
            StatusCode::BAD_REQUEST,
            "invalid_coordinates",
            format!("{field}: {e}"),
        )
    })
}

/// Validate a request body into a query.
pub fn parse_rank_body(body: &[u8]) -> Result<RankQuery, ApiError> {
    let raw: RankBody = serde_json::from_slice(body)
        .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "invalid_request", e.to_string()))?;
    Ok(RankQuery {
        origin: coordinate(&raw.origin, "origin")?,
        destination: coordinate(&raw.destination, "destination")?,
        preference: raw.preference,
        alpha: raw.alpha,
        k: raw.k,
    })
}

async fn rank(State(engine): State<Arc<Engine>>, body: Bytes) -> Response {
    let query = match parse_rank_body(&body) {
        Ok(q) => q,
        Err(e) => return e.into_response(),
    };
    let result = tokio::task::spawn_blocking(move || {
        let outcome = engine.rank(&query)?;
        report_json(&outcome.report)
    })
    .await;
    match result {
        Ok(Ok(body)) => json_response(StatusCode::OK, body),
        Ok(Err(e)) => {
            tracing::info!(code = e.code(), error = %e, "rank request failed");
            ApiError::from(e).into_response()
        }
        Err(join) => {
            tracing::error!(error = %join, "rank task aborted");
            ApiError::new(
                StatusCode::INTERNAL_SERVER_ERROR,
                "internal",
                "internal error",
            )
            .into_response()
        }
    }
}

async fn health(State(engine): State<Arc<Engine>>) -> Response {
    let body = json!({
        "status": "ok",
        "sources": {
            "elevation": engine.elevation_source(),
            "routes": engine.route_source(),
        }
    });
    json_response(StatusCode::OK, body.to_string())
}

pub fn router(engine: Arc<Engine>) -> Router {
    let cors = engine.config().cors_origin.as_deref().map(|origin| {
        let layer = CorsLayer::new()
            .allow_methods([axum::http::Method::GET, axum::http::Method::POST])
            .allow_headers([header::CONTENT_TYPE]);
        if origin == "*" {
            layer.allow_origin(Any)
        } else {
            match HeaderValue::from_str(origin) {
                Ok(v) => layer.allow_origin(v),
                Err(_) => {
                    tracing::warn!("ignoring unusable cors_origin");
                    layer
                }
            }
        }
    });
    let app = Router::new()
        .route("/v1/rank", post(rank))
        .route("/v1/health", get(health))
        .with_state(engine);
    match cors {
        Some(layer) => app.layer(layer),
        None => app,
    }
}

/// Serve until ctrl-c.
pub async fn serve(engine: Arc<Engine>, addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!(addr = %listener.local_addr()?, "listening");
    axum::serve(listener, router(engine))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
