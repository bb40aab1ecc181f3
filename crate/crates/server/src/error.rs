use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use emissor::model::{ModelError, ValidationReport};
use emissor::storage::StorageError;
use serde_json::json;

use crate::repo::report_json;

#[derive(Debug)]
pub enum ApiError {
    NotFound(String),
    BadRequest(String),
    /// The client's version is stale.
    Conflict {
        expected: u64,
        current: u64,
    },
    /// Well-formed request whose result would be invalid.
    Unprocessable {
        message: String,
        report: Option<ValidationReport>,
    },
    Internal(String),
}

impl ApiError {
    pub fn invalid(message: impl Into<String>, report: ValidationReport) -> Self {
        ApiError::Unprocessable {
            message: message.into(),
            report: Some(report),
        }
    }

    pub fn unprocessable(message: impl ToString) -> Self {
        ApiError::Unprocessable {
            message: message.to_string(),
            report: None,
        }
    }

    pub fn internal(e: impl ToString) -> Self {
        ApiError::Internal(e.to_string())
    }

    /// Unreadable scenario files are the server's problem; a bad document in
    /// a request body is the client's.
    pub fn storage(e: StorageError) -> Self {
        match e {
            StorageError::MissingScenarioFile(_) | StorageError::MissingMedia(_) => ApiError::NotFound(e.to_string()),
            StorageError::RowOutOfRange { .. } => ApiError::NotFound(e.to_string()),
            _ => ApiError::Internal(e.to_string()),
        }
    }

    pub fn model(e: ModelError) -> Self {
        match e {
            ModelError::UnknownSignal(_) | ModelError::UnknownMention(_) | ModelError::UnknownBase(_) => {
                ApiError::NotFound(e.to_string())
            }
            _ => ApiError::unprocessable(e),
        }
    }

    pub fn status(&self) -> StatusCode {
        match self {
            ApiError::NotFound(_) => StatusCode::NOT_FOUND,
            ApiError::BadRequest(_) => StatusCode::BAD_REQUEST,
            ApiError::Conflict { .. } => StatusCode::CONFLICT,
            ApiError::Unprocessable { .. } => StatusCode::UNPROCESSABLE_ENTITY,
            ApiError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

impl std::fmt::Display for ApiError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ApiError::NotFound(what) => write!(f, "not found: {what}"),
            ApiError::BadRequest(m) | ApiError::Internal(m) => f.write_str(m),
            ApiError::Conflict { expected, current } => {
                write!(f, "version {expected} is stale, the scenario is at version {current}")
            }
            ApiError::Unprocessable { message, .. } => f.write_str(message),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = self.status();
        let mut body = json!({ "status": status.as_u16(), "error": self.to_string() });
        match &self {
            ApiError::Unprocessable { report: Some(r), .. } => {
                body["report"] = report_json(r);
            }
            ApiError::Conflict { current, .. } => {
                body["version"] = (*current).into();
            }
            _ => {}
        }
        (status, Json(body)).into_response()
    }
}

impl std::error::Error for ApiError {}
