use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use logloop::corpus::{BaselineKnobs, SyntheticConfig};
use logloop::hitl::RepeatPolicy;

pub const DEFAULT_SERVE_ADDR: &str = "127.0.0.1:8080";

#[derive(Debug, Parser)]
#[command(name = "logloop", version, about = "Refine log template clusterings with yes/no and pick-one feedback")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Refine a base clustering with simulated feedback and write a report.
    Run(RunArgs),
    /// Score a clustering against ground truth.
    Evaluate(EvaluateArgs),
    /// Write a synthetic corpus and its ground truth.
    Generate(GenerateArgs),
    /// Serve the interactive session API.
    Serve(ServeArgs),
}

/// Where the logs and the ground truth come from.
#[derive(Debug, Args)]
pub struct CorpusArgs {
    /// Raw log file, one log per line.
    #[arg(long, conflicts_with = "generate")]
    pub logs: Option<PathBuf>,
    /// Ground truth CSV with LineId, EventId and EventTemplate columns.
    #[arg(long, requires = "logs")]
    pub truth: Option<PathBuf>,
    /// Synthetic corpus instead of files, e.g. `K=50,logs=20,slots=2,collision=0.1,seed=3`.
    #[arg(long, value_name = "KEYS")]
    pub generate: Option<GeneratorKeys>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    /// Base clustering document; the built-in baseline parser is used otherwise.
    #[arg(long, value_name = "FILE")]
    pub import: Option<PathBuf>,
    /// Baseline error knob, e.g. `truncate_p=0.5`. Repeatable.
    #[arg(long = "knob", value_name = "NAME=P")]
    pub knobs: Vec<Knob>,
    /// Seed for the baseline parser, and for `--generate` unless it names its own.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Extra merge/separation rounds, or `until-stable`.
    #[arg(long, default_value = "0")]
    pub repeat: RepeatPolicy,
    /// Extract completion templates with feedback, for corpora whose logs
    /// share parameter values.
    #[arg(long)]
    pub lossless: bool,
    /// Directory for report.json and clustering.json.
    #[arg(long, default_value = "logloop-out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    /// Clustering document to score.
    #[arg(long, value_name = "FILE")]
    pub import: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also write the metrics as JSON to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_name = "KEYS", default_value = "")]
    pub generate: GeneratorKeys,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Directory for corpus.log and truth.csv.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, env = "LOGLOOP_SERVE_ADDR", default_value = DEFAULT_SERVE_ADDR)]
    pub serve_addr: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Knob {
    pub name: String,
    pub value: f64,
}

impl FromStr for Knob {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, value) = s.split_once('=').ok_or_else(|| format!("expected NAME=P, got {s:?}"))?;
        let value: f64 = value.trim().parse().map_err(|_| format!("knob {name}: {value:?} is not a number"))?;
        // validates name and range up front so clap reports it as a usage error
        BaselineKnobs::default().set(name.trim(), value)?;
        Ok(Knob {
            name: name.trim().to_owned(),
            value,
        })
    }
}

pub fn knobs(list: &[Knob]) -> BaselineKnobs {
    let mut k = BaselineKnobs::default();
    for knob in list {
        k.set(&knob.name, knob.value).expect("checked while parsing");
    }
    k
}

/// Synthetic corpus settings; keys left out keep their defaults, and a
/// missing `seed` falls back to `--seed`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GeneratorKeys {
    pub k: Option<usize>,
    pub logs_per_cluster: Option<usize>,
    pub param_slots: Option<usize>,
    pub collision_p: Option<f64>,
    pub seed: Option<u64>,
}

impl GeneratorKeys {
    pub fn config(&self, fallback_seed: u64) -> SyntheticConfig {
        let d = SyntheticConfig::default();
        SyntheticConfig {
            k: self.k.unwrap_or(d.k),
            logs_per_cluster: self.logs_per_cluster.unwrap_or(d.logs_per_cluster),
            param_slots: self.param_slots.unwrap_or(d.param_slots),
            seed: self.seed.unwrap_or(fallback_seed),
            collision_p: self.collision_p.unwrap_or(d.collision_p),
        }
    }
}

impl FromStr for GeneratorKeys {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        fn num<T: FromStr>(key: &str, v: &str) -> Result<T, String> {
            v.parse().map_err(|_| format!("{key}: {v:?} is not a valid value"))
        }
        let mut keys = GeneratorKeys::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, v) = part.split_once('=').ok_or_else(|| format!("expected KEY=VALUE, got {part:?}"))?;
            let v = v.trim();
            match key.trim().to_ascii_lowercase().as_str() {
                "k" | "templates" => keys.k = Some(num(key, v)?),
                "logs" | "logs_per_cluster" => keys.logs_per_cluster = Some(num(key, v)?),
                "slots" | "param_slots" => keys.param_slots = Some(num(key, v)?),
                "collision" | "collision_p" => keys.collision_p = Some(num(key, v)?),
                "seed" => keys.seed = Some(num(key, v)?),
                other => return Err(format!("unknown generator key {other:?}")),
            }
        }
        if keys.k == Some(0) || keys.logs_per_cluster == Some(0) {
            return Err("K and logs must be at least 1".into());
        }
        if let Some(p) = keys.collision_p {
            if !(0.0..=1.0).contains(&p) {
                return Err(format!("collision must be within [0, 1], got {p}"));
            }
        }
        Ok(keys)
    }
}
