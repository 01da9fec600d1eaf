//! JSON error responses.

use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use hflpr_core::{Error, ValidationError};
use serde::Serialize;
use serde_json::Value;

/// Text of the portal input rules, indexed by rule number.
pub fn rule_text(rule: u8) -> &'static str {
    match rule {
        1 => "only linguistic subscripts in [0, 2τ] may be entered",
        2 => "HFLE(i,j)max >= HFLE(i,j)min",
        _ => "HFLE(i,j)max + HFLE(j,i)min = s_{2τ}",
    }
}

/// Body of every error response.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorBody {
    /// Machine-readable category.
    pub error: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rule: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rule_text: Option<&'static str>,
    /// Offending cell, 1-based.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cell: Option<[usize; 2]>,
    /// Offending decision maker, 1-based.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dm: Option<usize>,
    /// Partial result attached to cap errors.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<Value>,
}

/// An error with its HTTP status.
#[derive(Debug, Clone, PartialEq)]
pub struct ApiError {
    pub status: StatusCode,
    pub body: Box<ErrorBody>,
}

impl ApiError {
    fn new(status: StatusCode, error: &'static str, message: impl Into<String>) -> Self {
        Self {
            status,
            body: Box::new(ErrorBody {
                error,
                message: message.into(),
                rule: None,
                rule_text: None,
                cell: None,
                dm: None,
                report: None,
            }),
        }
    }

    pub fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "bad_request", message)
    }

    pub fn not_found(message: impl Into<String>) -> Self {
        Self::new(StatusCode::NOT_FOUND, "not_found", message)
    }

    pub fn conflict(message: impl Into<String>) -> Self {
        Self::new(StatusCode::CONFLICT, "conflict", message)
    }

    pub fn unauthorized() -> Self {
        Self::new(StatusCode::UNAUTHORIZED, "unauthorized", "valid credentials required")
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", message)
    }

    fn with_dm(mut self, dm: usize) -> Self {
        self.body.dm = Some(dm);
        self
    }
}

impl From<ValidationError> for ApiError {
    fn from(e: ValidationError) -> Self {
        let mut err = Self::new(StatusCode::BAD_REQUEST, "validation", e.to_string());
        err.body.rule = e.portal_rule();
        err.body.rule_text = e.portal_rule().map(rule_text);
        err.body.cell = e.cell().map(|(i, j)| [i, j]);
        err
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        match e {
            Error::Validation(v) => v.into(),
            Error::IterationCapExceeded { report } => {
                let mut err = Self::new(StatusCode::UNPROCESSABLE_ENTITY, "iteration_cap", message);
                err.body.report = serde_json::to_value(&*report).ok();
                err
            }
            Error::ConsensusCapExceeded { trace, .. } => {
                let mut err = Self::new(StatusCode::UNPROCESSABLE_ENTITY, "consensus_cap", message);
                err.body.report = serde_json::to_value(&*trace).ok();
                err
            }
            Error::DecisionMaker { dm, source } => {
                let mut err = ApiError::from(*source).with_dm(dm);
                err.body.message = message;
                err
            }
            e if e.is_input_error() => Self::new(StatusCode::BAD_REQUEST, "invalid_input", message),
            _ => Self::internal(message),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(*self.body)).into_response()
    }
}
