//! Request handlers and wire types.

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use hflpr_core::{
    algorithm1, algorithm2, critical_value, ConsensusTrace, ConsistencyParams, ConsistencyReport, GroupProblem, Hflpr,
    HflprDoc, PerfectMethod, SimilarityMeasure, DEFAULT_TAU,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::time::Instant;
use uuid::Uuid;

use crate::config::{PORTAL_MAX_ALTERNATIVES, PORTAL_MAX_DECISION_MAKERS};
use crate::error::ApiError;
use crate::session::{Session, SessionState, SharedSession};
use crate::AppState;

fn parse_json<T: DeserializeOwned>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request(format!("malformed JSON body: {e}")))
}

fn check_portal_n(state: &AppState, n: usize) -> Result<(), ApiError> {
    if state.config.portal_limits && n > PORTAL_MAX_ALTERNATIVES {
        return Err(ApiError::bad_request(format!(
            "n = {n} exceeds the portal limit of {PORTAL_MAX_ALTERNATIVES} alternatives"
        )));
    }
    Ok(())
}

/// Sentence reported after a successful repair.
pub fn adjustment_message(adjustments: usize) -> String {
    format!(
        "After adjusting the individual HFLPR {adjustments} times, the revised HFLPR with acceptable consistency is obtained."
    )
}

/// Weight formatted to at most four decimals without trailing zeros.
pub fn format_weight(w: f64) -> String {
    let s = format!("{w:.4}");
    let s = s.trim_end_matches('0');
    s.trim_end_matches('.').to_string()
}

/// `Ranking weight:w1,w2,...` line shown by the portal.
pub fn ranking_weight_line(weights: &[f64]) -> String {
    let parts: Vec<String> = weights.iter().map(|w| format_weight(*w)).collect();
    format!("Ranking weight:{}", parts.join(","))
}

/// Compact portal summary: `n`, the longest cell length, then the minimum
/// and maximum subscript of every cell in row-major order.
pub fn person_information(b: &Hflpr) -> String {
    let mut s = format!("{}{}", b.n(), b.max_len());
    for row in b.cells() {
        for cell in row {
            s.push_str(&format!("{}{}", cell.lower(), cell.upper()));
        }
    }
    s
}

#[derive(Debug, Deserialize)]
struct ConsistencyRequest {
    #[serde(flatten)]
    matrix: HflprDoc,
    #[serde(default)]
    params: ConsistencyParams,
}

/// Response of `POST /api/consistency`.
#[derive(Debug, Serialize)]
pub struct ConsistencyResponse {
    pub input: Hflpr,
    pub adjustments: usize,
    pub message: String,
    pub report: ConsistencyReport,
}

pub async fn check_consistency(
    State(state): State<AppState>,
    body: Bytes,
) -> Result<Json<ConsistencyResponse>, ApiError> {
    let req: ConsistencyRequest = parse_json(&body)?;
    let input = req.matrix.to_hflpr(DEFAULT_TAU)?;
    check_portal_n(&state, input.n())?;
    let params = req.params;
    let report = {
        let input = input.clone();
        tokio::task::spawn_blocking(move || algorithm1(&input, &params))
            .await
            .map_err(|e| ApiError::internal(e.to_string()))??
    };
    Ok(Json(ConsistencyResponse {
        input,
        adjustments: report.adjustments,
        message: adjustment_message(report.adjustments),
        report,
    }))
}

fn default_gamma() -> f64 {
    0.95
}

fn default_zeta_mod() -> f64 {
    0.5
}

fn default_tau() -> u32 {
    DEFAULT_TAU
}

#[derive(Debug, Deserialize)]
struct CreateSession {
    n: usize,
    #[serde(default = "default_tau")]
    tau: u32,
    #[serde(default = "default_gamma")]
    gamma: f64,
    #[serde(default = "default_zeta_mod")]
    zeta_mod: f64,
    #[serde(default)]
    params: ConsistencyParams,
    #[serde(default)]
    perfect_method: PerfectMethod,
    #[serde(default)]
    similarity: SimilarityMeasure,
}

/// Outcome of a solved session.
#[derive(Debug, Clone, Serialize)]
pub struct SolveResponse {
    pub ranking_weights: Vec<f64>,
    /// 1-based alternatives, best first.
    pub ranking: Vec<usize>,
    pub ranking_string: String,
    pub ranking_weight: String,
    pub rounds: usize,
    pub modifications: usize,
    pub final_wcd: f64,
    pub message: String,
    pub trace: ConsensusTrace,
}

impl SolveResponse {
    fn from_trace(trace: ConsensusTrace) -> Self {
        let weights = trace.final_priority.weights().to_vec();
        let line = ranking_weight_line(&weights);
        Self {
            ranking: trace.ranking.iter().map(|i| i + 1).collect(),
            ranking_string: trace.final_priority.ranking_string(),
            message: format!(
                "{line}\nThe numbers of iterations for this method to reach consensus is {}",
                trace.modifications
            ),
            ranking_weight: line,
            ranking_weights: weights,
            rounds: trace.rounds.len(),
            modifications: trace.modifications,
            final_wcd: trace.final_wcd(),
            trace,
        }
    }
}

/// Public view of a session.
#[derive(Debug, Serialize)]
pub struct SessionView {
    pub id: Uuid,
    pub state: SessionState,
    pub n: usize,
    pub tau: u32,
    pub gamma: f64,
    pub decision_makers: usize,
    pub max_decision_makers: Option<usize>,
    /// Portal summary string of every submitted relation.
    pub summaries: Vec<String>,
    pub created_at: u64,
    pub expires_in_secs: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<SolveResponse>,
}

fn view(state: &AppState, s: &Session) -> SessionView {
    SessionView {
        id: s.id,
        state: s.state,
        n: s.n,
        tau: s.tau,
        gamma: s.gamma,
        decision_makers: s.submitted.len(),
        max_decision_makers: state.config.portal_limits.then_some(PORTAL_MAX_DECISION_MAKERS),
        summaries: s.submitted.iter().map(person_information).collect(),
        created_at: s.created_at,
        expires_in_secs: state.sessions.ttl().saturating_sub(s.last_access.elapsed()).as_secs(),
        result: s.result.clone(),
    }
}

async fn session(state: &AppState, id: &str) -> Result<SharedSession, ApiError> {
    let missing = || ApiError::not_found(format!("no live session {id}"));
    let id = Uuid::parse_str(id).map_err(|_| missing())?;
    state.sessions.get(&id).await.ok_or_else(missing)
}

pub async fn create_session(State(state): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let req: CreateSession = parse_json(&body)?;
    hflpr_core::LinguisticScale::new(req.tau)?;
    check_portal_n(&state, req.n)?;
    req.params.resolve(req.n)?;
    // Group-level parameters are checked by the same rules the solver uses.
    if !(req.gamma > 0.0 && req.gamma <= 1.0) {
        return Err(ApiError::bad_request("gamma must lie in (0, 1]"));
    }
    if !(0.0..=1.0).contains(&req.zeta_mod) {
        return Err(ApiError::bad_request("zeta_mod must lie in [0, 1]"));
    }
    let s = state
        .sessions
        .insert(|id, created_at| Session {
            id,
            n: req.n,
            tau: req.tau,
            gamma: req.gamma,
            zeta_mod: req.zeta_mod,
            params: req.params,
            perfect_method: req.perfect_method,
            similarity: req.similarity,
            submitted: Vec::new(),
            state: SessionState::Collecting,
            result: None,
            created_at,
            last_access: Instant::now(),
        })
        .await;
    let s = s.lock().await;
    Ok((StatusCode::CREATED, Json(view(&state, &s))).into_response())
}

pub async fn get_session(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<SessionView>, ApiError> {
    let s = session(&state, &id).await?;
    let s = s.lock().await;
    Ok(Json(view(&state, &s)))
}

/// Response of a relation submission.
#[derive(Debug, Serialize)]
pub struct Submitted {
    /// 1-based position of the new expert.
    pub dm: usize,
    pub summary: String,
    pub decision_makers: usize,
}

pub async fn submit_hflpr(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Response, ApiError> {
    let s = session(&state, &id).await?;
    let doc: HflprDoc = parse_json(&body)?;
    let mut s = s.lock().await;
    if s.state == SessionState::Solved {
        return Err(ApiError::conflict("session is already solved"));
    }
    if state.config.portal_limits && s.submitted.len() >= PORTAL_MAX_DECISION_MAKERS {
        return Err(ApiError::conflict(format!(
            "session already holds the maximum of {PORTAL_MAX_DECISION_MAKERS} decision makers"
        )));
    }
    if doc.tau.is_some_and(|t| t != s.tau) {
        return Err(ApiError::bad_request(format!("session uses tau = {}", s.tau)));
    }
    let b = doc.to_hflpr(s.tau)?;
    if b.n() != s.n {
        return Err(ApiError::bad_request(format!(
            "session expects n = {}, relation has n = {}",
            s.n,
            b.n()
        )));
    }
    let summary = person_information(&b);
    s.submitted.push(b);
    let body = Submitted {
        dm: s.submitted.len(),
        summary,
        decision_makers: s.submitted.len(),
    };
    Ok((StatusCode::CREATED, Json(body)).into_response())
}

pub async fn remove_last_hflpr(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> Result<Json<SessionView>, ApiError> {
    let s = session(&state, &id).await?;
    let mut s = s.lock().await;
    if s.state == SessionState::Solved {
        return Err(ApiError::conflict("session is already solved"));
    }
    if s.submitted.pop().is_none() {
        return Err(ApiError::conflict("no relation to remove"));
    }
    Ok(Json(view(&state, &s)))
}

pub async fn solve_session(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> Result<Json<SolveResponse>, ApiError> {
    let s = session(&state, &id).await?;
    let mut s = s.lock().await;
    if let Some(r) = &s.result {
        return Ok(Json(r.clone()));
    }
    if s.submitted.len() < 2 {
        return Err(ApiError::conflict(format!(
            "a group needs at least 2 decision makers, session has {}",
            s.submitted.len()
        )));
    }
    let problem = GroupProblem {
        matrices: s.submitted.clone(),
        gamma: s.gamma,
        zeta_mod: s.zeta_mod,
        consistency: s.params.clone(),
        perfect_method: s.perfect_method,
        similarity: s.similarity,
        max_rounds: None,
    };
    let trace = tokio::task::spawn_blocking(move || algorithm2(&problem))
        .await
        .map_err(|e| ApiError::internal(e.to_string()))??;
    let result = SolveResponse::from_trace(trace);
    s.state = SessionState::Solved;
    s.result = Some(result.clone());
    Ok(Json(result))
}

/// Response of `GET /api/critical-values`.
#[derive(Debug, Serialize, PartialEq)]
pub struct CriticalValue {
    pub n: usize,
    pub offset: f64,
    pub alpha: f64,
    pub value: f64,
}

pub async fn get_critical_value(Query(q): Query<HashMap<String, String>>) -> Result<Json<CriticalValue>, ApiError> {
    let n: usize = q
        .get("n")
        .ok_or_else(|| ApiError::bad_request("query parameter n is required"))?
        .parse()
        .map_err(|_| ApiError::bad_request("n must be a positive integer"))?;
    let offset: f64 = match q.get("offset") {
        Some(v) => v
            .parse()
            .map_err(|_| ApiError::bad_request("offset must be a number"))?,
        None => 0.0,
    };
    let value = critical_value(n, offset).map_err(|e| ApiError::not_found(e.to_string()))?;
    Ok(Json(CriticalValue {
        n,
        offset,
        alpha: (n as f64 - 1.0) / 2.0 + offset,
        value,
    }))
}

pub async fn health() -> &'static str {
    "ok"
}
