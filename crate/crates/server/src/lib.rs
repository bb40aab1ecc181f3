//! HTTP service and command line front end over a directory of scenario
//! folders.

pub mod api;
pub mod cli;
mod error;
pub mod repo;

use std::path::PathBuf;
use std::sync::Arc;

use emissor::ekg::EmitConfig;

pub use error::ApiError;
pub use repo::Repository;

/// Port used when neither `--port` nor `EMISSOR_PORT` is given.
pub const DEFAULT_PORT: u16 = 8000;

/// The service for the scenario folders under `root`.
pub fn app(root: impl Into<PathBuf>) -> axum::Router {
    api::router(Arc::new(api::AppState {
        repo: Repository::new(root),
        emit: EmitConfig::default(),
    }))
}

/// Serves until the listener fails.
pub async fn serve(listener: tokio::net::TcpListener, root: impl Into<PathBuf>) -> std::io::Result<()> {
    axum::serve(listener, app(root)).await
}
