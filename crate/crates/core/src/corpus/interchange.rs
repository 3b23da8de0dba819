//! JSON clustering documents: `{"n_logs": N, "clusters": [{"template": [..],
//! "members": [..]}]}` with 0-based member indices.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::Deserialize;

use crate::model::{ClusterTemplatePair, MinedClustering};
use crate::seq::{is_wildcard, Token, TokenSeq};

use super::ingest::open;
use super::CorpusError;

#[derive(Deserialize)]
struct Document {
    n_logs: usize,
    clusters: Vec<DocCluster>,
}

/// Templates exported by other parsers carry `<*>` tokens; those are read
/// as gaps and dropped.
#[derive(Deserialize)]
struct DocCluster {
    template: Vec<String>,
    members: Vec<usize>,
}

impl Document {
    fn validate(self) -> Result<MinedClustering, CorpusError> {
        let mut pairs = Vec::with_capacity(self.clusters.len());
        for (c, cluster) in self.clusters.into_iter().enumerate() {
            let mut template = TokenSeq::new();
            for text in cluster.template.iter().filter(|t| !is_wildcard(t)) {
                let tok = Token::new(text).map_err(|source| CorpusError::BadToken {
                    cluster: c,
                    text: text.clone(),
                    source,
                })?;
                template.push(tok);
            }
            pairs.push(ClusterTemplatePair::new(cluster.members, template));
        }
        Ok(MinedClustering::new(pairs, self.n_logs)?)
    }
}

pub fn clustering_from_json(text: &str) -> Result<MinedClustering, CorpusError> {
    serde_json::from_str::<Document>(text)?.validate()
}

pub fn clustering_to_json(mc: &MinedClustering) -> String {
    serde_json::to_string_pretty(mc).expect("clustering serialization cannot fail")
}

/// Reads and validates a clustering document; partition violations name the
/// offending index.
pub fn import_clustering(path: &Path) -> Result<MinedClustering, CorpusError> {
    let doc: Document = serde_json::from_reader(BufReader::new(open(path)?))
        .map_err(|e| CorpusError::from(e).with_path(path))?;
    doc.validate().map_err(|e| e.with_path(path))
}

pub fn export_clustering(mc: &MinedClustering, path: &Path) -> Result<(), CorpusError> {
    let io_err = |source| CorpusError::Io {
        path: path.to_owned(),
        source,
    };
    let mut out = BufWriter::new(File::create(path).map_err(io_err)?);
    out.write_all(clustering_to_json(mc).as_bytes()).map_err(io_err)?;
    out.write_all(b"\n").map_err(io_err)?;
    out.flush().map_err(io_err)
}
