//! Session creation payloads and the blocking work of turning them into a
//! log store, an optional ground truth and a base clustering.

use std::path::PathBuf;

use serde::Deserialize;

use logloop::corpus::{
    baseline_parse, clustering_from_json, generate_synthetic, import_clustering, load_corpus, read_logs, read_truth,
    BaselineKnobs, SyntheticConfig,
};
use logloop::hitl::RepeatPolicy;
use logloop::{GroundTruth, LogStore, MinedClustering};

#[derive(Debug, Clone, Deserialize)]
pub struct CreateSession {
    pub corpus: CorpusSource,
    #[serde(default)]
    pub base: BaseSource,
    #[serde(default)]
    pub repeat: RepeatArg,
    #[serde(default)]
    pub lossless_completion: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum CorpusSource {
    /// Paths on the server's file system.
    Files { logs: PathBuf, truth: Option<PathBuf> },
    Inline {
        lines: Vec<String>,
        /// Ground truth in the `LineId,EventId,EventTemplate` layout.
        truth_csv: Option<String>,
    },
    Synthetic(SyntheticConfig),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BaseSource {
    Baseline {
        #[serde(default)]
        knobs: BaselineKnobs,
        #[serde(default)]
        seed: u64,
    },
    File { path: PathBuf },
    Inline { clustering: serde_json::Value },
}

impl Default for BaseSource {
    fn default() -> Self {
        BaseSource::Baseline {
            knobs: BaselineKnobs::default(),
            seed: 0,
        }
    }
}

/// A round count or `"until-stable"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RepeatArg {
    Rounds(u32),
    Named(String),
}

impl Default for RepeatArg {
    fn default() -> Self {
        RepeatArg::Rounds(0)
    }
}

impl RepeatArg {
    pub fn policy(&self) -> Result<RepeatPolicy, String> {
        match self {
            RepeatArg::Rounds(n) => Ok(RepeatPolicy::Rounds(*n)),
            RepeatArg::Named(s) => s.parse(),
        }
    }
}

pub(crate) struct Prepared {
    pub logs: LogStore,
    pub truth: Option<GroundTruth>,
    pub base: MinedClustering,
}

/// Loads everything a session needs. Reads files, so call it off the async
/// runtime.
pub(crate) fn prepare(req: &CreateSession) -> Result<Prepared, String> {
    let (logs, truth) = match &req.corpus {
        CorpusSource::Files { logs, truth: Some(truth) } => {
            let (l, t) = load_corpus(logs, truth).map_err(|e| e.to_string())?;
            (l, Some(t))
        }
        CorpusSource::Files { logs, truth: None } => (read_logs(logs).map_err(|e| e.to_string())?, None),
        CorpusSource::Inline { lines, truth_csv } => {
            let logs = LogStore::from_lines(lines);
            let truth = match truth_csv {
                Some(csv) => Some(read_truth(csv.as_bytes(), &logs).map_err(|e| format!("truth_csv: {e}"))?),
                None => None,
            };
            (logs, truth)
        }
        CorpusSource::Synthetic(cfg) => {
            if cfg.k == 0 || cfg.logs_per_cluster == 0 {
                return Err("synthetic corpus needs k >= 1 and logs_per_cluster >= 1".into());
            }
            if !(0.0..=1.0).contains(&cfg.collision_p) {
                return Err(format!("collision_p must be within [0, 1], got {}", cfg.collision_p));
            }
            let c = generate_synthetic(cfg);
            (c.logs, Some(c.truth))
        }
    };
    if logs.is_empty() {
        return Err("corpus has no logs".into());
    }

    let base = match &req.base {
        BaseSource::Baseline { knobs, seed } => {
            for (name, v) in [("split_p", knobs.split_p), ("merge_p", knobs.merge_p), ("truncate_p", knobs.truncate_p)] {
                if !(0.0..=1.0).contains(&v) {
                    return Err(format!("knob {name} must be within [0, 1], got {v}"));
                }
            }
            baseline_parse(&logs, *knobs, *seed)
        }
        BaseSource::File { path } => import_clustering(path).map_err(|e| e.to_string())?,
        BaseSource::Inline { clustering } => {
            clustering_from_json(&clustering.to_string()).map_err(|e| format!("base clustering: {e}"))?
        }
    };
    if base.n_logs() != logs.len() {
        return Err(format!(
            "base clustering covers {} logs but the corpus has {}",
            base.n_logs(),
            logs.len()
        ));
    }
    Ok(Prepared { logs, truth, base })
}
