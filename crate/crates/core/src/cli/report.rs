use std::fmt::Write;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

/// Where a number came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Trace,
    Bruteforce,
    Cover,
    Toral,
    Estimate,
    Perron,
    Shadow,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::Trace => "trace",
            Method::Bruteforce => "bruteforce",
            Method::Cover => "cover",
            Method::Toral => "toral",
            Method::Estimate => "estimate",
            Method::Perron => "perron",
            Method::Shadow => "shadow",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Claim {
    pub name: String,
    pub method: Method,
    pub value: String,
}

/// A table whose numeric columns are headed `method:quantity`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Block {
    pub name: String,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub map: String,
    pub claims: Vec<Claim>,
    pub tables: Vec<Table>,
    pub blocks: Vec<Block>,
    pub checks: Vec<Check>,
    /// Human-only lines (timings); never part of machine output.
    #[serde(skip)]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: &str, map: String) -> Self {
        Self {
            command: command.into(),
            map,
            claims: Vec::new(),
            tables: Vec::new(),
            blocks: Vec::new(),
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn claim(&mut self, name: impl Into<String>, method: Method, value: impl ToString) {
        self.claims.push(Claim {
            name: name.into(),
            method,
            value: value.to_string(),
        });
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        });
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_text(),
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises") + "\n"
    }

    /// Claims as one table, then every other table.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        if !self.claims.is_empty() {
            s.push_str("name,method,value\n");
            for c in &self.claims {
                writeln!(s, "{},{},{}", csv_field(&c.name), c.method.tag(), csv_field(&c.value)).unwrap();
            }
        }
        for t in &self.tables {
            if !s.is_empty() {
                s.push('\n');
            }
            writeln!(s, "{}", t.columns.join(",")).unwrap();
            for r in &t.rows {
                writeln!(s, "{}", r.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(",")).unwrap();
            }
        }
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} on {}\n", self.command, self.map);
        for c in &self.claims {
            writeln!(s, "  {} [{}] {}", c.name, c.method.tag(), c.value).unwrap();
        }
        for t in &self.tables {
            writeln!(s, "\n{}", t.name).unwrap();
            let widths: Vec<usize> = (0..t.columns.len())
                .map(|i| {
                    t.rows
                        .iter()
                        .map(|r| r.get(i).map_or(0, String::len))
                        .chain([t.columns[i].len()])
                        .max()
                        .unwrap()
                })
                .collect();
            let line = |cells: &[String]| {
                cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            writeln!(s, "  {}", line(&t.columns)).unwrap();
            for r in &t.rows {
                writeln!(s, "  {}", line(r)).unwrap();
            }
        }
        for b in &self.blocks {
            writeln!(s, "\n{}", b.name).unwrap();
            for l in b.text.lines() {
                writeln!(s, "  {l}").unwrap();
            }
        }
        if !self.checks.is_empty() {
            s.push('\n');
        }
        for n in &self.notes {
            writeln!(s, "{n}").unwrap();
        }
        for c in &self.checks {
            let status = if c.pass { "pass" } else { "FAIL" };
            if c.detail.is_empty() {
                writeln!(s, "check {}: {status}", c.name).unwrap();
            } else {
                writeln!(s, "check {}: {status} ({})", c.name, c.detail).unwrap();
            }
        }
        s
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
