//! A deliberately simple base parser with knobs that inject the three
//! clustering error classes on demand.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::model::{ClusterTemplatePair, LogStore, MinedClustering};
use crate::seq::{Token, TokenSeq};

/// Error-injection probabilities, each applied per cluster.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BaselineKnobs {
    /// Split a cluster at a random point into two partial clusters.
    pub split_p: f64,
    /// Merge a cluster into another, randomly chosen one.
    pub merge_p: f64,
    /// Drop the last template token.
    pub truncate_p: f64,
}

impl BaselineKnobs {
    /// Sets one knob by name; accepts `split_p`, `merge_p`, `truncate_p`.
    pub fn set(&mut self, name: &str, value: f64) -> Result<(), String> {
        if !(0.0..=1.0).contains(&value) {
            return Err(format!("knob {name} must be within [0, 1], got {value}"));
        }
        let slot = match name {
            "split_p" | "split" => &mut self.split_p,
            "merge_p" | "merge" => &mut self.merge_p,
            "truncate_p" | "truncate" => &mut self.truncate_p,
            _ => return Err(format!("unknown knob {name:?}")),
        };
        *slot = value;
        Ok(())
    }
}

/// Buckets logs by token count and first token, takes the position-wise
/// common tokens of each bucket as its template, then applies the knobs in
/// the order split, merge, truncate.
pub fn baseline_parse(logs: &LogStore, knobs: BaselineKnobs, seed: u64) -> MinedClustering {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut buckets: Vec<Vec<usize>> = Vec::new();
    let mut index: HashMap<(usize, Option<&Token>), usize> = HashMap::new();
    for (n, log) in logs.logs().iter().enumerate() {
        let slot = *index.entry((log.len(), log.first())).or_insert_with(|| {
            buckets.push(Vec::new());
            buckets.len() - 1
        });
        buckets[slot].push(n);
    }

    if knobs.split_p > 0.0 {
        let mut split = Vec::with_capacity(buckets.len());
        for mut members in buckets {
            if members.len() >= 2 && rng.gen_bool(knobs.split_p) {
                members.shuffle(&mut rng);
                let cut = rng.gen_range(1..members.len());
                let rest = members.split_off(cut);
                split.push(members);
                split.push(rest);
            } else {
                split.push(members);
            }
        }
        buckets = split;
    }

    if knobs.merge_p > 0.0 && buckets.len() >= 2 {
        let mut alive: Vec<bool> = vec![true; buckets.len()];
        for i in 0..buckets.len() {
            if !rng.gen_bool(knobs.merge_p) {
                continue;
            }
            let others: Vec<usize> = (0..buckets.len()).filter(|&j| j != i && alive[j]).collect();
            let Some(&j) = others.choose(&mut rng) else {
                break;
            };
            let moved = std::mem::take(&mut buckets[i]);
            buckets[j].extend(moved);
            alive[i] = false;
        }
        buckets.retain(|b| !b.is_empty());
    }

    let mut pairs: Vec<ClusterTemplatePair> = buckets
        .into_iter()
        .map(|members| {
            let template = positional_common(logs, &members);
            ClusterTemplatePair::new(members, template)
        })
        .collect();

    if knobs.truncate_p > 0.0 {
        for pair in &mut pairs {
            if rng.gen_bool(knobs.truncate_p) {
                let mut tokens = std::mem::take(&mut pair.template).into_inner();
                tokens.pop();
                pair.template = tokens.into();
            }
        }
    }

    MinedClustering::new(pairs, logs.len()).expect("buckets partition the store")
}

/// Tokens that agree across all members at the same position, over the
/// shortest member's length.
fn positional_common(logs: &LogStore, members: &[usize]) -> TokenSeq {
    let first = &logs[members[0]];
    let width = members.iter().map(|&n| logs[n].len()).min().unwrap_or(0);
    (0..width)
        .filter(|&i| members.iter().all(|&n| logs[n][i] == first[i]))
        .map(|i| first[i].clone())
        .collect()
}
