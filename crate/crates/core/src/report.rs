//! Command reports: named results, pass/fail checks and an optional table,
//! rendered as text, JSON or CSV. Rendering is deterministic.

use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum ReportFormat {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub results: Vec<(String, Value)>,
    pub checks: Vec<Check>,
    pub table: Option<Table>,
}

impl Report {
    pub fn new(command: &str, seed: u64) -> Self {
        Self { command: command.to_owned(), seed, results: Vec::new(), checks: Vec::new(), table: None }
    }

    pub fn put(&mut self, key: &str, value: impl Serialize) {
        let value = serde_json::to_value(value).expect("report values serialise");
        self.results.push((key.to_owned(), value));
    }

    /// Empty `detail` reads as no further information.
    pub fn check(&mut self, name: &str, passed: bool, detail: impl fmt::Display) {
        self.checks.push(Check { name: name.to_owned(), passed, detail: detail.to_string() });
    }

    pub fn check_result<E: fmt::Display>(&mut self, name: &str, outcome: &Result<impl fmt::Display, E>) {
        match outcome {
            Ok(v) => self.check(name, true, v),
            Err(e) => self.check(name, false, e),
        }
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.results.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Text => self.to_text(),
            ReportFormat::Json => self.to_json(),
            ReportFormat::Csv => self.to_csv(),
        }
    }

    fn to_text(&self) -> String {
        let mut out = format!("command: {}\nseed: {}\n", self.command, self.seed);
        for (k, v) in &self.results {
            out.push_str(&format!("{k}: {}\n", plain(v)));
        }
        for c in &self.checks {
            let verdict = if c.passed { "PASS" } else { "FAIL" };
            match c.detail.as_str() {
                "" => out.push_str(&format!("{verdict} {}\n", c.name)),
                d => out.push_str(&format!("{verdict} {}: {d}\n", c.name)),
            }
        }
        if let Some(table) = &self.table {
            out.push('\n');
            out.push_str(&table_csv(table));
        }
        out
    }

    fn to_json(&self) -> String {
        let results: serde_json::Map<String, Value> = self.results.iter().cloned().collect();
        let mut doc = json!({
            "command": self.command,
            "seed": self.seed,
            "results": results,
            "checks": self.checks,
            "passed": self.passed(),
        });
        if let Some(table) = &self.table {
            doc["table"] = json!(table);
        }
        let mut s = serde_json::to_string_pretty(&doc).expect("json values serialise");
        s.push('\n');
        s
    }

    /// The table when there is one, else `key,value` rows; checks appear as
    /// `check:<name>` keys. The first line is a `#` comment carrying the seed.
    fn to_csv(&self) -> String {
        let mut out = format!("# command={} seed={}\n", self.command, self.seed);
        let table = match &self.table {
            Some(t) => t.clone(),
            None => Table {
                header: vec!["key".into(), "value".into()],
                rows: self
                    .results
                    .iter()
                    .map(|(k, v)| vec![k.clone(), plain(v)])
                    .chain(self.checks.iter().map(|c| {
                        let verdict = if c.passed { "PASS" } else { "FAIL" };
                        let value =
                            if c.detail.is_empty() { verdict.to_owned() } else { format!("{verdict}: {}", c.detail) };
                        vec![format!("check:{}", c.name), value]
                    }))
                    .collect(),
            },
        };
        out.push_str(&table_csv(&table));
        out
    }
}

/// Strings bare, everything else as compact JSON.
fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn table_csv(table: &Table) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&table.header).expect("in-memory write");
    for row in &table.rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}
