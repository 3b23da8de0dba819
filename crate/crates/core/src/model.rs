//! Log store, cluster-template pairs and mined clusterings.

use std::borrow::Cow;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::seq::{Interner, TokenSeq};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClusteringError {
    #[error("cluster {cluster} has no members")]
    EmptyCluster { cluster: usize },
    #[error("log index {index} out of range (n_logs = {n_logs})")]
    OutOfRange { index: usize, n_logs: usize },
    #[error("log index {index} appears in clusters {first} and {second}")]
    Overlap {
        index: usize,
        first: usize,
        second: usize,
    },
    #[error("{} log indices belong to no cluster (first: {})", .indices.len(), .indices[0])]
    Uncovered { indices: Vec<usize> },
}

/// Immutable, densely indexed collection of tokenized logs.
#[derive(Debug, Clone, Default)]
pub struct LogStore {
    logs: Vec<TokenSeq>,
    raw: Option<Vec<String>>,
    line_ids: Vec<usize>,
}

impl LogStore {
    /// Builds a store from already tokenized logs; line ids are `1..=N`.
    pub fn from_logs(logs: Vec<TokenSeq>) -> Self {
        let line_ids = (1..=logs.len()).collect();
        LogStore {
            logs,
            raw: None,
            line_ids,
        }
    }

    /// Tokenizes raw lines, keeping them for display. Blank lines are skipped;
    /// every kept log remembers its 1-based line number in the input.
    pub fn from_lines<I, S>(lines: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut interner = Interner::new();
        let mut logs = Vec::new();
        let mut raw = Vec::new();
        let mut line_ids = Vec::new();
        for (i, line) in lines.into_iter().enumerate() {
            let line = line.as_ref();
            if line.trim().is_empty() {
                continue;
            }
            logs.push(interner.tokenize(line));
            raw.push(line.to_owned());
            line_ids.push(i + 1);
        }
        LogStore {
            logs,
            raw: Some(raw),
            line_ids,
        }
    }

    pub fn len(&self) -> usize {
        self.logs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.logs.is_empty()
    }

    pub fn get(&self, n: usize) -> Option<&TokenSeq> {
        self.logs.get(n)
    }

    pub fn logs(&self) -> &[TokenSeq] {
        &self.logs
    }

    /// The original line, or the tokens re-joined when the store was built
    /// from tokens.
    pub fn raw_line(&self, n: usize) -> Cow<'_, str> {
        match &self.raw {
            Some(raw) => Cow::Borrowed(raw[n].as_str()),
            None => Cow::Owned(self.logs[n].join()),
        }
    }

    pub fn line_id(&self, n: usize) -> usize {
        self.line_ids[n]
    }

    pub fn line_ids(&self) -> &[usize] {
        &self.line_ids
    }
}

impl std::ops::Index<usize> for LogStore {
    type Output = TokenSeq;

    fn index(&self, n: usize) -> &TokenSeq {
        &self.logs[n]
    }
}

/// A mined cluster and its template. Members are kept sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterTemplatePair {
    pub template: TokenSeq,
    pub members: Vec<usize>,
}

impl ClusterTemplatePair {
    pub fn new(mut members: Vec<usize>, template: TokenSeq) -> Self {
        members.sort_unstable();
        ClusterTemplatePair { template, members }
    }

    pub fn singleton(n: usize, template: TokenSeq) -> Self {
        ClusterTemplatePair {
            template,
            members: vec![n],
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Adds `other` (sorted) to the member set.
    pub fn absorb(&mut self, other: &[usize]) {
        if other.is_empty() {
            return;
        }
        if self.members.last().is_some_and(|&last| last < other[0]) {
            self.members.extend_from_slice(other);
            return;
        }
        let mut merged = Vec::with_capacity(self.members.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.members.len() && j < other.len() {
            if self.members[i] <= other[j] {
                merged.push(self.members[i]);
                i += 1;
            } else {
                merged.push(other[j]);
                j += 1;
            }
        }
        merged.extend_from_slice(&self.members[i..]);
        merged.extend_from_slice(&other[j..]);
        self.members = merged;
    }

    /// Up to `k` member logs, lowest indices first.
    pub fn sample_logs<'a>(&self, logs: &'a LogStore, k: usize) -> Vec<&'a TokenSeq> {
        self.members.iter().take(k).map(|&n| &logs[n]).collect()
    }
}

/// A full and disjoint partition of `0..n_logs` into cluster-template pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawClustering")]
pub struct MinedClustering {
    n_logs: usize,
    #[serde(rename = "clusters")]
    pairs: Vec<ClusterTemplatePair>,
}

#[derive(Deserialize)]
struct RawClustering {
    n_logs: usize,
    clusters: Vec<ClusterTemplatePair>,
}

impl TryFrom<RawClustering> for MinedClustering {
    type Error = ClusteringError;

    fn try_from(raw: RawClustering) -> Result<Self, Self::Error> {
        MinedClustering::new(raw.clusters, raw.n_logs)
    }
}

impl MinedClustering {
    pub fn new(pairs: Vec<ClusterTemplatePair>, n_logs: usize) -> Result<Self, ClusteringError> {
        let pairs: Vec<_> = pairs
            .into_iter()
            .map(|p| ClusterTemplatePair::new(p.members, p.template))
            .collect();
        validate_partition(&pairs, n_logs)?;
        Ok(MinedClustering { n_logs, pairs })
    }

    pub fn n_logs(&self) -> usize {
        self.n_logs
    }

    pub fn pairs(&self) -> &[ClusterTemplatePair] {
        &self.pairs
    }

    pub fn into_pairs(self) -> Vec<ClusterTemplatePair> {
        self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Cluster position of every log.
    pub fn assignment(&self) -> Vec<usize> {
        let mut of = vec![0; self.n_logs];
        for (c, pair) in self.pairs.iter().enumerate() {
            for &n in &pair.members {
                of[n] = c;
            }
        }
        of
    }
}

fn validate_partition(pairs: &[ClusterTemplatePair], n_logs: usize) -> Result<(), ClusteringError> {
    const UNSEEN: usize = usize::MAX;
    let mut owner = vec![UNSEEN; n_logs];
    for (c, pair) in pairs.iter().enumerate() {
        if pair.members.is_empty() {
            return Err(ClusteringError::EmptyCluster { cluster: c });
        }
        for &n in &pair.members {
            if n >= n_logs {
                return Err(ClusteringError::OutOfRange { index: n, n_logs });
            }
            if owner[n] != UNSEEN {
                return Err(ClusteringError::Overlap {
                    index: n,
                    first: owner[n],
                    second: c,
                });
            }
            owner[n] = c;
        }
    }
    let uncovered: Vec<usize> = owner
        .iter()
        .enumerate()
        .filter(|(_, &o)| o == UNSEEN)
        .map(|(n, _)| n)
        .collect();
    if !uncovered.is_empty() {
        return Err(ClusteringError::Uncovered { indices: uncovered });
    }
    Ok(())
}
