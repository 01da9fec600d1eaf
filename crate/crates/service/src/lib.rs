//! HTTP API for consistency checks and group consensus sessions.
//!
//! Routes:
//!
//! - `POST /api/consistency`: validate and repair one relation.
//! - `POST /api/sessions`: open a group session.
//! - `GET /api/sessions/{id}`: session state and expert summaries.
//! - `POST /api/sessions/{id}/hflpr`: submit the next expert's relation.
//! - `DELETE /api/sessions/{id}/hflpr`: withdraw the last relation.
//! - `POST /api/sessions/{id}/solve`: run the consensus process.
//! - `GET /api/critical-values?n=&offset=`: table lookup.
//! - `GET /health`.

pub mod api;
pub mod config;
pub mod error;
pub mod session;

use std::sync::Arc;
use std::time::Duration;

use axum::extract::{Request, State};
use axum::http::{header, HeaderValue};
use axum::middleware::{self, Next};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use base64::Engine;
use tower_http::cors::{Any, CorsLayer};
use tower_http::trace::TraceLayer;

pub use config::Config;
use error::ApiError;
use session::SessionStore;

/// Shared handler state.
#[derive(Debug, Clone)]
pub struct AppState {
    pub config: Arc<Config>,
    pub sessions: Arc<SessionStore>,
}

impl AppState {
    pub fn new(config: Config) -> Self {
        Self {
            sessions: Arc::new(SessionStore::new(config.session_ttl)),
            config: Arc::new(config),
        }
    }
}

async fn require_credentials(State(state): State<AppState>, req: Request, next: Next) -> Response {
    let Some((user, password)) = &state.config.credentials else {
        return next.run(req).await;
    };
    let expected = base64::engine::general_purpose::STANDARD.encode(format!("{user}:{password}"));
    let ok = req
        .headers()
        .get(header::AUTHORIZATION)
        .and_then(|v| v.to_str().ok())
        .and_then(|v| v.strip_prefix("Basic "))
        .is_some_and(|v| v.trim() == expected);
    if ok {
        next.run(req).await
    } else {
        let mut resp = ApiError::unauthorized().into_response();
        resp.headers_mut().insert(
            header::WWW_AUTHENTICATE,
            HeaderValue::from_static("Basic realm=\"hflpr\""),
        );
        resp
    }
}

fn cors(config: &Config) -> CorsLayer {
    let layer = CorsLayer::new().allow_methods(Any).allow_headers(Any);
    match config.cors_origin.as_deref().map(HeaderValue::from_str) {
        Some(Ok(origin)) => layer.allow_origin(origin),
        _ => layer.allow_origin(Any),
    }
}

/// The full application.
pub fn router(state: AppState) -> Router {
    let api = Router::new()
        .route("/api/consistency", post(api::check_consistency))
        .route("/api/sessions", post(api::create_session))
        .route("/api/sessions/{id}", get(api::get_session))
        .route(
            "/api/sessions/{id}/hflpr",
            post(api::submit_hflpr).delete(api::remove_last_hflpr),
        )
        .route("/api/sessions/{id}/solve", post(api::solve_session))
        .route("/api/critical-values", get(api::get_critical_value))
        .route_layer(middleware::from_fn_with_state(state.clone(), require_credentials));
    Router::new()
        .route("/health", get(api::health))
        .merge(api)
        .layer(cors(&state.config))
        .layer(TraceLayer::new_for_http())
        .with_state(state)
}

/// Binds `config.bind` and serves until Ctrl-C.
pub async fn serve(config: Config) -> std::io::Result<()> {
    let state = AppState::new(config);
    let sweeper = state.sessions.clone();
    let period = sweeper.ttl().min(Duration::from_secs(60)).max(Duration::from_secs(1));
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(period);
        loop {
            tick.tick().await;
            let dropped = sweeper.purge_expired().await;
            if dropped > 0 {
                tracing::info!(dropped, "expired sessions removed");
            }
        }
    });
    let listener = tokio::net::TcpListener::bind(state.config.bind).await?;
    tracing::info!(addr = %listener.local_addr()?, "listening");
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
