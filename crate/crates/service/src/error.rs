use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use passflow_core::match_data::MatchError;
use passflow_core::{MetricsError, MineError, PatternError};
use serde::Serialize;

/// Error body: `{"error": {"status", "code", "message", "path"?}}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: &'static str,
    pub message: String,
    /// Field path inside the request body, for malformed uploads.
    pub path: Option<String>,
}

#[derive(Serialize)]
struct Body<'a> {
    error: Inner<'a>,
}

#[derive(Serialize)]
struct Inner<'a> {
    status: u16,
    code: &'a str,
    message: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    path: Option<&'a str>,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            code,
            message: message.into(),
            path: None,
        }
    }

    pub fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "bad-request", message)
    }

    pub fn not_found(message: impl Into<String>) -> Self {
        Self::new(StatusCode::NOT_FOUND, "not-found", message)
    }

    pub fn unprocessable(message: impl Into<String>) -> Self {
        Self::new(StatusCode::UNPROCESSABLE_ENTITY, "unprocessable", message)
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", message)
    }

    /// Errors from a match upload; every one of them is the client's.
    pub fn from_upload(err: MatchError) -> Self {
        let mut e = Self::new(StatusCode::BAD_REQUEST, "invalid-match", err.to_string());
        if let MatchError::Malformed { path, .. } = err {
            e.path = Some(path);
        }
        e
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = Body {
            error: Inner {
                status: self.status.as_u16(),
                code: self.code,
                message: &self.message,
                path: self.path.as_deref(),
            },
        };
        (self.status, Json(body)).into_response()
    }
}

impl From<std::io::Error> for ApiError {
    fn from(e: std::io::Error) -> Self {
        tracing::error!(error = %e, "storage failure");
        ApiError::internal(format!("storage failure: {e}"))
    }
}

impl From<MatchError> for ApiError {
    fn from(e: MatchError) -> Self {
        match e {
            MatchError::UnknownTeam(_) => ApiError::not_found(e.to_string()),
            _ => ApiError::unprocessable(e.to_string()),
        }
    }
}

impl From<PatternError> for ApiError {
    fn from(e: PatternError) -> Self {
        match e {
            PatternError::UnknownTeam(_) => ApiError::not_found(e.to_string()),
            PatternError::InvalidExport(_) => ApiError::internal(e.to_string()),
            PatternError::Match(m) => m.into(),
            _ => ApiError::unprocessable(e.to_string()),
        }
    }
}

impl From<MineError> for ApiError {
    fn from(e: MineError) -> Self {
        match e {
            MineError::Pattern(p) => p.into(),
            _ => ApiError::unprocessable(e.to_string()),
        }
    }
}

impl From<MetricsError> for ApiError {
    fn from(e: MetricsError) -> Self {
        ApiError::unprocessable(e.to_string())
    }
}
