//! Ground-truth clusters and constant-token templates.

use log::warn;
use thiserror::Error;

use crate::model::LogStore;
use crate::seq::{is_subsequence, TokenSeq};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TruthError {
    #[error("ground truth covers {got} logs, store has {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("log {log} assigned to cluster {cluster}, but only {k} clusters exist")]
    UnknownCluster { log: usize, cluster: usize, k: usize },
    #[error("cluster {cluster} has no logs")]
    EmptyCluster { cluster: usize },
    #[error("template of cluster {cluster} (`{template}`) is not a subsequence of log {log}")]
    TemplateNotInLog {
        cluster: usize,
        log: usize,
        template: String,
    },
}

/// Per-log ground-truth cluster id plus the constant-token template of every
/// cluster.
#[derive(Debug, Clone)]
pub struct GroundTruth {
    cluster_of: Vec<usize>,
    templates: Vec<TokenSeq>,
    labels: Vec<String>,
    sizes: Vec<usize>,
}

impl GroundTruth {
    /// Validates coverage and that every template embeds in all of its logs.
    /// Nested templates are reported with a warning only.
    pub fn new(
        cluster_of: Vec<usize>,
        templates: Vec<TokenSeq>,
        labels: Vec<String>,
        logs: &LogStore,
    ) -> Result<Self, TruthError> {
        if cluster_of.len() != logs.len() {
            return Err(TruthError::LengthMismatch {
                expected: logs.len(),
                got: cluster_of.len(),
            });
        }
        let k = templates.len();
        let mut sizes = vec![0usize; k];
        for (n, &c) in cluster_of.iter().enumerate() {
            if c >= k {
                return Err(TruthError::UnknownCluster {
                    log: n,
                    cluster: c,
                    k,
                });
            }
            sizes[c] += 1;
            if !is_subsequence(&templates[c], &logs[n]) {
                return Err(TruthError::TemplateNotInLog {
                    cluster: c,
                    log: n,
                    template: templates[c].join(),
                });
            }
        }
        if let Some(c) = sizes.iter().position(|&s| s == 0) {
            return Err(TruthError::EmptyCluster { cluster: c });
        }
        let labels = if labels.len() == k {
            labels
        } else {
            (0..k).map(|c| format!("E{}", c + 1)).collect()
        };
        let truth = GroundTruth {
            cluster_of,
            templates,
            labels,
            sizes,
        };
        let nested = truth.nested_templates();
        if !nested.is_empty() {
            warn!(
                "{} ground-truth template pairs are nested, e.g. {} inside {}",
                nested.len(),
                truth.labels[nested[0].0],
                truth.labels[nested[0].1]
            );
        }
        Ok(truth)
    }

    pub fn k(&self) -> usize {
        self.templates.len()
    }

    pub fn n_logs(&self) -> usize {
        self.cluster_of.len()
    }

    pub fn cluster_of(&self, n: usize) -> usize {
        self.cluster_of[n]
    }

    pub fn clusters(&self) -> &[usize] {
        &self.cluster_of
    }

    pub fn template(&self, k: usize) -> &TokenSeq {
        &self.templates[k]
    }

    pub fn templates(&self) -> &[TokenSeq] {
        &self.templates
    }

    pub fn label(&self, k: usize) -> &str {
        &self.labels[k]
    }

    pub fn cluster_size(&self, k: usize) -> usize {
        self.sizes[k]
    }

    pub fn template_of_log(&self, n: usize) -> &TokenSeq {
        &self.templates[self.cluster_of[n]]
    }

    /// Pairs `(inner, outer)` with template `inner` a subsequence of `outer`.
    pub fn nested_templates(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, a) in self.templates.iter().enumerate() {
            for (j, b) in self.templates.iter().enumerate() {
                if i != j && is_subsequence(a, b) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Every cluster whose template embeds in `seq`.
    pub fn embedded_clusters<'a>(&'a self, seq: &'a [crate::seq::Token]) -> impl Iterator<Item = usize> + 'a {
        self.templates
            .iter()
            .enumerate()
            .filter(move |(_, t)| is_subsequence(t, seq))
            .map(|(k, _)| k)
    }

    /// True iff some ground-truth template embeds in `seq`.
    pub fn is_complete(&self, seq: &[crate::seq::Token]) -> bool {
        self.templates.iter().any(|t| is_subsequence(t, seq))
    }

    /// The ground-truth cluster whose template `seq` carries. When several
    /// embed, the longest wins and ties go to the smallest id.
    pub fn matched_cluster(&self, seq: &[crate::seq::Token]) -> Option<usize> {
        let mut best: Option<usize> = None;
        let mut count = 0usize;
        for k in self.embedded_clusters(seq) {
            count += 1;
            match best {
                Some(b) if self.templates[b].len() >= self.templates[k].len() => {}
                _ => best = Some(k),
            }
        }
        if count > 1 {
            warn!(
                "template `{}` embeds {} ground-truth templates; using {}",
                TokenSeq::from(seq.to_vec()),
                count,
                self.labels[best.unwrap_or_default()]
            );
        }
        best
    }
}
