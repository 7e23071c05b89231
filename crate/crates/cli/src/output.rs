use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde_json::Value;

/// CSV cells carry 30 significant digits.
pub const CSV_DIGITS: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// One command's result in all three renderings.
pub struct Doc {
    pub json: Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub text: String,
    pub pass: bool,
}

impl Doc {
    pub fn new(json: Value, header: &[&str], pass: bool) -> Self {
        Self { json, header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new(), text: String::new(), pass }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    pub fn line(&mut self, s: impl AsRef<str>) {
        let _ = writeln!(self.text, "{}", s.as_ref());
    }

    pub fn render(&self, format: Format) -> std::io::Result<String> {
        Ok(match format {
            Format::Text => self.text.clone(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).map_err(std::io::Error::other)?;
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.header)?;
                for r in &self.rows {
                    w.write_record(r)?;
                }
                String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).map_err(std::io::Error::other)?
            }
        })
    }

    pub fn emit(&self, format: Format, out: Option<&Path>) -> std::io::Result<()> {
        let body = self.render(format)?;
        match out {
            Some(path) => std::fs::write(path, body),
            None => std::io::stdout().lock().write_all(body.as_bytes()),
        }
    }
}
