// Copyright 2026 The dmine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Result JSON, metrics CSV and label maps.

use std::collections::BTreeMap;
use std::time::Duration;

use dmine_core::{Item, MiningResult, RoundMetrics};
use serde::Serialize;

use crate::CliError;

pub const METRICS_HEADER: [&str; 9] = [
    "algorithm",
    "round",
    "candidates",
    "candidates_pruned_local",
    "messages",
    "bytes",
    "llk_total",
    "lk_size",
    "wall_ms",
];

#[derive(Serialize)]
struct ResultJson<'a> {
    minsup: &'a str,
    db_size: u64,
    threshold: u64,
    frequent: Vec<FrequentJson<'a>>,
}

#[derive(Serialize)]
struct FrequentJson<'a> {
    items: &'a [Item],
    support: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<&'a str>>,
}

pub type LabelMap = BTreeMap<Item, String>;

/// One JSON object on a single line, itemsets in (length, lex) order.
pub fn result_json(result: &MiningResult, minsup_raw: &str, labels: Option<&LabelMap>) -> String {
    let fallback: BTreeMap<Item, String> = match labels {
        Some(_) => result
            .frequent
            .keys()
            .flat_map(|x| x.items().iter().copied())
            .map(|i| (i, i.to_string()))
            .collect(),
        None => BTreeMap::new(),
    };
    let doc = ResultJson {
        minsup: minsup_raw,
        db_size: result.db_size,
        threshold: result.threshold,
        frequent: result
            .frequent
            .iter()
            .map(|(x, &support)| FrequentJson {
                items: x.items(),
                support,
                labels: labels.map(|map| {
                    x.items()
                        .iter()
                        .map(|i| map.get(i).unwrap_or(&fallback[i]).as_str())
                        .collect()
                }),
            })
            .collect(),
    };
    let mut out = serde_json::to_string(&doc).expect("result document always serializes");
    out.push('\n');
    out
}

/// Parses `id:name` (or `id=name`, or `id<whitespace>name`) lines; blank
/// lines and `#` comments are skipped.
pub fn parse_labels(text: &str) -> Result<LabelMap, CliError> {
    let mut map = LabelMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let split = line
            .split_once(':')
            .or_else(|| line.split_once('='))
            .or_else(|| line.split_once(char::is_whitespace));
        let bad = || CliError::Data(format!("labels line {}: expected id:name, got {line:?}", n + 1));
        let (id, name) = split.ok_or_else(bad)?;
        let id: Item = id.trim().parse().map_err(|_| bad())?;
        let name = name.trim();
        if name.is_empty() {
            return Err(bad());
        }
        map.insert(id, name.to_string());
    }
    Ok(map)
}

fn metrics_fields(algorithm: &str, m: &RoundMetrics, wall: Option<Duration>) -> Vec<String> {
    vec![
        algorithm.to_string(),
        m.k.to_string(),
        m.candidates_generated.to_string(),
        m.candidates_pruned_local().to_string(),
        m.messages_sent.to_string(),
        m.payload_bytes.to_string(),
        m.llk_total.to_string(),
        m.lk_size.to_string(),
        wall.map(format_ms).unwrap_or_default(),
    ]
}

pub fn format_ms(d: Duration) -> String {
    format!("{:.3}", d.as_secs_f64() * 1000.0)
}

/// Per-round metrics rows under the fixed header. `wall` supplies the
/// wall_ms column when present; otherwise it is left empty.
pub fn metrics_csv(algorithm: &str, metrics: &[RoundMetrics], wall: Option<&[Duration]>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(METRICS_HEADER).expect("in-memory write");
    for (i, m) in metrics.iter().enumerate() {
        let t = wall.and_then(|w| w.get(i).copied());
        w.write_record(metrics_fields(algorithm, m, t))
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV is UTF-8")
}

/// Sweep rows: the metrics columns prefixed by the sweep point.
pub struct SweepCsv {
    writer: csv::Writer<Vec<u8>>,
}

impl SweepCsv {
    pub fn new() -> Self {
        let mut writer = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["minsup", "size"];
        header.extend(METRICS_HEADER);
        writer.write_record(header).expect("in-memory write");
        SweepCsv { writer }
    }

    pub fn push_run(
        &mut self,
        minsup: &str,
        size: usize,
        algorithm: &str,
        metrics: &[RoundMetrics],
        wall: &[Duration],
        total_wall: Duration,
    ) {
        for (m, &t) in metrics.iter().zip(wall) {
            let mut row = vec![minsup.to_string(), size.to_string()];
            row.extend(metrics_fields(algorithm, m, Some(t)));
            self.writer.write_record(row).expect("in-memory write");
        }
        let sum = |f: fn(&RoundMetrics) -> u64| metrics.iter().map(f).sum::<u64>().to_string();
        let row = vec![
            minsup.to_string(),
            size.to_string(),
            algorithm.to_string(),
            "total".to_string(),
            sum(|m| m.candidates_generated),
            sum(RoundMetrics::candidates_pruned_local),
            sum(|m| m.messages_sent),
            sum(|m| m.payload_bytes),
            sum(|m| m.llk_total),
            sum(|m| m.lk_size),
            format_ms(total_wall),
        ];
        self.writer.write_record(row).expect("in-memory write");
    }

    pub fn finish(self) -> String {
        String::from_utf8(self.writer.into_inner().expect("in-memory flush")).expect("CSV is UTF-8")
    }
}

impl Default for SweepCsv {
    fn default() -> Self {
        Self::new()
    }
}
