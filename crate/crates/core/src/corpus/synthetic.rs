//! Seeded synthetic corpora with planted templates.
//!
//! Every template starts with a keyword unique to it, followed by constants
//! drawn without repetition from a shared vocabulary. Parameters are decimal
//! counters that never repeat anywhere in the corpus, so two logs of the same
//! cluster have exactly the template's constants in common and their LCS is
//! the template. No template can embed in another cluster's logs because the
//! keyword is missing there.
//!
//! `collision_p` breaks that on purpose: an affected template gets one
//! vocabulary word that every one of its logs carries, placed at a random
//! parameter slot per log, so the LCS of two logs may trade a constant for it.

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::model::LogStore;
use crate::seq::{Token, TokenSeq, WILDCARD};
use crate::truth::GroundTruth;

const VOCABULARY: &[&str] = &[
    "open", "close", "read", "write", "connect", "accept", "reject", "send", "receive", "start", "stop",
    "fail", "retry", "session", "user", "block", "packet", "request", "response", "cache", "disk", "node",
    "worker", "queue", "lock", "timeout", "commit", "rollback", "fetch", "store", "delete", "update",
    "verify", "token", "login", "logout", "port", "host", "file", "job", "task", "thread", "socket",
    "buffer", "memory", "heartbeat", "ping", "sync", "flush", "index", "table", "row", "column", "error",
    "warning", "state", "event", "signal", "handler", "service",
];

const PARAM_PREFIXES: &[&str] = &["", "id=", "port:", "0x", "/tmp/file", "blk_"];

const MIN_CONSTANTS: usize = 2;
const MAX_CONSTANTS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SyntheticConfig {
    /// Number of templates; at least 1.
    pub k: usize,
    pub logs_per_cluster: usize,
    /// Parameter tokens per log.
    pub param_slots: usize,
    pub seed: u64,
    /// Probability that a template gets a recurring parameter token.
    pub collision_p: f64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            k: 10,
            logs_per_cluster: 20,
            param_slots: 2,
            seed: 0,
            collision_p: 0.0,
        }
    }
}

/// Where a template's parameters go.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateLayout {
    pub constants: TokenSeq,
    /// For each parameter slot, the index of the constant it follows.
    /// Non-decreasing; a slot never precedes the first constant.
    pub gaps: Vec<usize>,
    pub prefixes: Vec<String>,
    /// Recurring token shared by all logs of the cluster, if any.
    pub collision: Option<Token>,
}

impl TemplateLayout {
    /// The template with `<*>` at each parameter slot.
    pub fn render(&self) -> String {
        let mut parts: Vec<&str> = Vec::new();
        for (i, c) in self.constants.iter().enumerate() {
            parts.push(c.as_str());
            if self.gaps.contains(&i) {
                parts.push(WILDCARD);
            }
        }
        parts.join(" ")
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    pub logs: LogStore,
    pub truth: GroundTruth,
    pub layouts: Vec<TemplateLayout>,
}

/// Builds `k * logs_per_cluster` logs in shuffled order. Templates depend
/// only on `seed`, `k`, `param_slots` and `collision_p`, so growing
/// `logs_per_cluster` keeps them fixed.
///
/// Panics if `k` or `logs_per_cluster` is zero.
pub fn generate_synthetic(cfg: &SyntheticConfig) -> SyntheticCorpus {
    assert!(cfg.k >= 1, "at least one template");
    assert!(cfg.logs_per_cluster >= 1, "at least one log per template");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let layouts: Vec<TemplateLayout> = (0..cfg.k).map(|k| plant(k, cfg, &mut rng)).collect();

    let mut log_rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut order: Vec<usize> = (0..cfg.k)
        .flat_map(|k| std::iter::repeat_n(k, cfg.logs_per_cluster))
        .collect();
    order.shuffle(&mut log_rng);

    let mut counter: u64 = 0;
    let mut logs = Vec::with_capacity(order.len());
    for &k in &order {
        logs.push(instantiate(&layouts[k], &mut counter, &mut log_rng));
    }
    let logs = LogStore::from_logs(logs);
    let templates = layouts.iter().map(|l| l.constants.clone()).collect();
    let labels = (0..cfg.k).map(|k| format!("E{}", k + 1)).collect();
    let truth = GroundTruth::new(order, templates, labels, &logs).expect("planted templates embed by construction");
    SyntheticCorpus { logs, truth, layouts }
}

fn plant(k: usize, cfg: &SyntheticConfig, rng: &mut ChaCha8Rng) -> TemplateLayout {
    let m = rng.gen_range(MIN_CONSTANTS..=MAX_CONSTANTS);
    let picks = index::sample(rng, VOCABULARY.len(), m);
    let keyword = format!("{}{}", VOCABULARY[picks.index(0)], k);
    let mut constants = TokenSeq::new();
    constants.push(Token::new(&keyword).expect("vocabulary word"));
    for i in picks.iter().skip(1) {
        constants.push(Token::new(VOCABULARY[i]).expect("vocabulary word"));
    }
    let mut gaps: Vec<usize> = (0..cfg.param_slots).map(|_| rng.gen_range(0..m)).collect();
    gaps.sort_unstable();
    let prefixes = (0..cfg.param_slots)
        .map(|_| PARAM_PREFIXES.choose(rng).copied().unwrap_or_default().to_owned())
        .collect();
    // drawn unconditionally so the layout of later templates does not depend
    // on whether this one collides
    let roll: f64 = rng.gen();
    let word = VOCABULARY[rng.gen_range(0..VOCABULARY.len())];
    let collision = (cfg.param_slots > 0 && roll < cfg.collision_p && !constants.iter().any(|c| c.as_str() == word))
        .then(|| Token::new(word).expect("vocabulary word"));
    TemplateLayout {
        constants,
        gaps,
        prefixes,
        collision,
    }
}

fn instantiate(layout: &TemplateLayout, counter: &mut u64, rng: &mut ChaCha8Rng) -> TokenSeq {
    let reused = layout
        .collision
        .as_ref()
        .map(|_| rng.gen_range(0..layout.gaps.len()));
    let mut out = TokenSeq::new();
    let mut slot = 0;
    for (i, c) in layout.constants.iter().enumerate() {
        out.push(c.clone());
        while slot < layout.gaps.len() && layout.gaps[slot] == i {
            let tok = match (&layout.collision, reused) {
                (Some(word), Some(r)) if r == slot => word.clone(),
                _ => {
                    *counter += 1;
                    Token::new(&format!("{}{}", layout.prefixes[slot], counter)).expect("parameter token")
                }
            };
            out.push(tok);
            slot += 1;
        }
    }
    out
}
