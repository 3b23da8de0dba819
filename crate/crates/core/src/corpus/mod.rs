//! Data in and out: corpus files, clustering interchange, the built-in
//! baseline parser and the synthetic generator.

mod baseline;
mod ingest;
mod interchange;
mod synthetic;

use std::path::PathBuf;

use thiserror::Error;

use crate::model::ClusteringError;
use crate::seq::TokenError;
use crate::truth::TruthError;

pub use baseline::{baseline_parse, BaselineKnobs};
pub use ingest::{load_corpus, read_logs, read_truth, write_logs, write_truth_csv};
pub use interchange::{clustering_from_json, clustering_to_json, export_clustering, import_clustering};
pub use synthetic::{generate_synthetic, SyntheticConfig, SyntheticCorpus, TemplateLayout};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed table: {0}")]
    Csv(#[from] csv::Error),
    #[error("ground-truth header has no `{0}` column")]
    MissingColumn(String),
    #[error("row {row}: line id {value:?} is not a positive integer")]
    BadLineId { row: usize, value: String },
    #[error("row {row}: line id {line_id} does not name a non-blank log line")]
    UnknownLineId { row: usize, line_id: usize },
    #[error("row {row}: line id {line_id} appears twice")]
    DuplicateLineId { row: usize, line_id: usize },
    #[error("row {row}: event {event_id} was given a different template earlier")]
    ConflictingTemplate { event_id: String, row: usize },
    #[error("ground truth has no rows")]
    EmptyTruth,
    #[error("ground truth misses {count} logs (first at line {first_line_id})")]
    MissingRows { count: usize, first_line_id: usize },
    #[error(transparent)]
    Truth(#[from] TruthError),
    #[error("malformed clustering document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cluster {cluster}: bad template token {text:?}: {source}")]
    BadToken {
        cluster: usize,
        text: String,
        #[source]
        source: TokenError,
    },
    #[error("invalid clustering: {0}")]
    Clustering(#[from] ClusteringError),
    #[error("{}: {inner}", path.display())]
    InFile {
        path: PathBuf,
        #[source]
        inner: Box<CorpusError>,
    },
}

impl CorpusError {
    pub(crate) fn with_path(self, path: &std::path::Path) -> Self {
        match self {
            e @ (CorpusError::Io { .. } | CorpusError::InFile { .. }) => e,
            inner => CorpusError::InFile {
                path: path.to_owned(),
                inner: Box::new(inner),
            },
        }
    }

    /// The innermost error, past any file context.
    pub fn root(&self) -> &CorpusError {
        match self {
            CorpusError::InFile { inner, .. } => inner.root(),
            e => e,
        }
    }
}
