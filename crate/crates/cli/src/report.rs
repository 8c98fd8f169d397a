use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;
use serde_json::Value;

use crate::cli::Format;

/// Two-column (or wider) table for CSV output.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }
}

pub struct Report {
    pub command: &'static str,
    pub system: Option<String>,
    pub result: Value,
    pub table: Option<Table>,
    /// The run produced a Failed verdict (exit status 2).
    pub failed: bool,
    /// Extra files written next to the report, as (file name, contents).
    pub attachments: Vec<(String, String)>,
}

impl Report {
    pub fn new(command: &'static str, system: Option<String>, result: impl Serialize) -> Result<Self> {
        Ok(Report {
            command,
            system,
            result: serde_json::to_value(result)?,
            table: None,
            failed: false,
            attachments: Vec::new(),
        })
    }

    pub fn with_table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }

    pub fn failed_if(mut self, failed: bool) -> Self {
        self.failed = failed;
        self
    }

    pub fn envelope(&self) -> Value {
        let mut map = serde_json::Map::new();
        map.insert("command".into(), Value::String(self.command.into()));
        map.insert("system".into(), self.system.clone().map_or(Value::Null, Value::String));
        map.insert("result".into(), self.result.clone());
        Value::Object(map)
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(&self.envelope())? + "\n"),
            Format::Csv => match &self.table {
                Some(t) => t.to_csv(),
                None => bail!("ConfigInvalid: {} has no CSV form; use --format json", self.command),
            },
        }
    }

    /// Writes to `out/<command>.<ext>` or stdout; returns the path written.
    pub fn emit(&self, format: Format, out: Option<&Path>) -> Result<Option<PathBuf>> {
        let body = self.render(format)?;
        let Some(dir) = out else {
            std::io::stdout().write_all(body.as_bytes())?;
            return Ok(None);
        };
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for (name, contents) in &self.attachments {
            let p = dir.join(name);
            fs::write(&p, contents).with_context(|| format!("writing {}", p.display()))?;
        }
        let ext = match format {
            Format::Json => "json",
            Format::Csv => "csv",
        };
        let path = dir.join(format!("{}.{ext}", self.command));
        fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
        log::info!("wrote {}", path.display());
        Ok(Some(path))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quotes_and_header() {
        let mut t = Table::new(&["n", "mesh"]);
        t.push(vec!["1".into(), "1/2".into()]);
        t.push(vec!["2".into(), "a,b".into()]);
        assert_eq!(t.to_csv().unwrap(), "n,mesh\n1,1/2\n2,\"a,b\"\n");
    }

    #[test]
    fn envelope_keys_are_sorted() {
        let r = Report::new("orbit", Some("star4".into()), serde_json::json!({"z": 1, "a": 2})).unwrap();
        let s = r.render(Format::Json).unwrap();
        assert!(s.find("\"command\"").unwrap() < s.find("\"result\"").unwrap());
        assert!(s.find("\"a\"").unwrap() < s.find("\"z\"").unwrap());
        assert!(r.render(Format::Csv).is_err());
    }
}
