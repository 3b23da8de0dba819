//! Raw log files and benchmark-style ground-truth tables.
//!
//! The ground-truth table is comma separated with a header naming at least
//! `LineId`, `EventId` and `EventTemplate`; other columns are ignored.
//! `LineId` is the 1-based line number in the raw file.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use crate::model::LogStore;
use crate::seq::{render_template, TokenSeq};
use crate::truth::GroundTruth;

use super::CorpusError;

const LINE_ID: &str = "LineId";
const EVENT_ID: &str = "EventId";
const EVENT_TEMPLATE: &str = "EventTemplate";

pub(crate) fn open(path: &Path) -> Result<File, CorpusError> {
    File::open(path).map_err(|source| CorpusError::Io {
        path: path.to_owned(),
        source,
    })
}

/// Reads one log per line. Blank lines are skipped but keep their line
/// numbers as line ids.
pub fn read_logs(path: &Path) -> Result<LogStore, CorpusError> {
    let reader = BufReader::new(open(path)?);
    let lines = reader
        .lines()
        .collect::<Result<Vec<_>, _>>()
        .map_err(|source| CorpusError::Io {
            path: path.to_owned(),
            source,
        })?;
    Ok(LogStore::from_lines(lines))
}

/// Parses a ground-truth table against an already loaded store.
///
/// Cluster ids are assigned in order of first appearance of each event id.
/// Template wildcards are dropped, so `a <*> b <*>` is stored as `a b`.
pub fn read_truth<R: Read>(reader: R, logs: &LogStore) -> Result<GroundTruth, CorpusError> {
    let mut rdr = csv::ReaderBuilder::new().flexible(false).from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.is_empty() {
        return Err(CorpusError::EmptyTruth);
    }
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| CorpusError::MissingColumn(name.to_owned()))
    };
    let (c_line, c_event, c_template) = (column(LINE_ID)?, column(EVENT_ID)?, column(EVENT_TEMPLATE)?);

    let index_of: HashMap<usize, usize> = logs.line_ids().iter().enumerate().map(|(n, &id)| (id, n)).collect();
    let mut cluster_of = vec![usize::MAX; logs.len()];
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut raw_templates: Vec<String> = Vec::new();
    let mut rows = 0usize;

    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        let row = i + 2;
        rows += 1;
        let field = |c: usize| record.get(c).unwrap_or("").trim();
        let line_id: usize = field(c_line).parse().map_err(|_| CorpusError::BadLineId {
            row,
            value: field(c_line).to_owned(),
        })?;
        let n = *index_of
            .get(&line_id)
            .ok_or(CorpusError::UnknownLineId { row, line_id })?;
        if cluster_of[n] != usize::MAX {
            return Err(CorpusError::DuplicateLineId { row, line_id });
        }
        let event = field(c_event);
        let template = field(c_template);
        let k = match ids.get(event) {
            Some(&k) => {
                if raw_templates[k] != template {
                    return Err(CorpusError::ConflictingTemplate {
                        event_id: event.to_owned(),
                        row,
                    });
                }
                k
            }
            None => {
                let k = labels.len();
                ids.insert(event.to_owned(), k);
                labels.push(event.to_owned());
                raw_templates.push(template.to_owned());
                k
            }
        };
        cluster_of[n] = k;
    }

    if rows == 0 {
        return Err(CorpusError::EmptyTruth);
    }
    let missing: Vec<usize> = cluster_of
        .iter()
        .enumerate()
        .filter(|(_, &k)| k == usize::MAX)
        .map(|(n, _)| logs.line_id(n))
        .collect();
    if let Some(&first) = missing.first() {
        return Err(CorpusError::MissingRows {
            count: missing.len(),
            first_line_id: first,
        });
    }
    let templates = raw_templates.iter().map(|t| TokenSeq::parse(t)).collect();
    Ok(GroundTruth::new(cluster_of, templates, labels, logs)?)
}

/// Loads a raw log file and its ground-truth table.
pub fn load_corpus(raw_log_path: &Path, truth_path: &Path) -> Result<(LogStore, GroundTruth), CorpusError> {
    let logs = read_logs(raw_log_path)?;
    let truth = read_truth(open(truth_path)?, &logs).map_err(|e| e.with_path(truth_path))?;
    Ok((logs, truth))
}

/// Writes a ground-truth table readable by [`read_truth`]. Templates are
/// rendered with `<*>` gaps against the first log of each cluster.
pub fn write_truth_csv<W: Write>(out: W, logs: &LogStore, truth: &GroundTruth) -> Result<(), CorpusError> {
    let mut rendered: Vec<Option<String>> = vec![None; truth.k()];
    let mut w = csv::Writer::from_writer(out);
    w.write_record([LINE_ID, EVENT_ID, EVENT_TEMPLATE])?;
    for n in 0..logs.len() {
        let k = truth.cluster_of(n);
        if rendered[k].is_none() {
            let text = render_template(truth.template(k), &[&logs[n]])
                .unwrap_or_else(|_| truth.template(k).join());
            rendered[k] = Some(text);
        }
        let line_id = logs.line_id(n).to_string();
        w.write_record([line_id.as_str(), truth.label(k), rendered[k].as_deref().unwrap_or("")])?;
    }
    w.flush().map_err(|source| CorpusError::Io {
        path: "<truth output>".into(),
        source,
    })?;
    Ok(())
}

/// Writes one log per line, in store order.
pub fn write_logs<W: Write>(mut out: W, logs: &LogStore) -> std::io::Result<()> {
    for n in 0..logs.len() {
        writeln!(out, "{}", logs.raw_line(n))?;
    }
    out.flush()
}
