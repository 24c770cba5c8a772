//! Scenario-driven front end for the istruct verifiers.

pub mod run;
pub mod scenario;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("scenario does not parse: {0}")]
    Parse(#[source] serde_json::Error),
    #[error("unsupported scenario schema \"{0}\"")]
    Schema(String),
    #[error("unresolved reference: {0}")]
    Resolve(String),
}

/// Builds the global thread pool from `ISTRUCT_THREADS`; `0` runs serially.
pub fn configure_threads(var: Option<&str>) -> Result<(), String> {
    let Some(raw) = var else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("ISTRUCT_THREADS must be a non-negative integer, got \"{raw}\""))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n.max(1))
        .build_global()
        .map_err(|e| e.to_string())
}
