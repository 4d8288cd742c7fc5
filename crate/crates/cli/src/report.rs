//! Report assembly and rendering. Every command produces named rows;
//! checks carry a status while informational rows do not, and the report
//! renders as an aligned table, pretty JSON, or CSV.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use relbc_core::protocol::Transcript;
use serde::Serialize;

use crate::CliResult;

/// Output encodings every command supports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// One reported quantity.
#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub quantity: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub passed: Option<bool>,
}

impl Row {
    pub fn new(quantity: impl Into<String>, value: f64) -> Self {
        Self {
            quantity: quantity.into(),
            value,
            reference: None,
            trials: None,
            stderr: None,
            passed: None,
        }
    }

    pub fn reference(mut self, reference: f64) -> Self {
        self.reference = Some(reference);
        self
    }

    pub fn sampled(mut self, trials: u64, stderr: f64) -> Self {
        self.trials = Some(trials);
        self.stderr = Some(stderr);
        self
    }

    pub fn checked(mut self, passed: bool) -> Self {
        self.passed = Some(passed);
        self
    }
}

/// A command's full output: rows, overall status, and for protocol runs
/// the complete transcript.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strategy: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub rows: Vec<Row>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transcript: Option<Transcript>,
    pub passed: bool,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            strategy: None,
            seed: None,
            rows: Vec::new(),
            transcript: None,
            passed: true,
        }
    }

    /// Appends a row; a failed check fails the whole report.
    pub fn push(&mut self, row: Row) {
        if let Some(ok) = row.passed {
            self.passed &= ok;
        }
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> CliResult<String> {
        match format {
            Format::Text => Ok(self.to_text()),
            Format::Json => Ok(serde_json::to_string_pretty(self)? + "\n"),
            Format::Csv => self.to_csv(),
        }
    }

    fn to_text(&self) -> String {
        let mut head = self.command.clone();
        if let Some(strategy) = &self.strategy {
            let _ = write!(head, " [{strategy}]");
        }
        if let Some(seed) = self.seed {
            let _ = write!(head, " (seed {seed})");
        }

        let header = ["quantity", "value", "reference", "trials", "stderr", "status"];
        let cells: Vec<[String; 6]> = self
            .rows
            .iter()
            .map(|row| {
                [
                    row.quantity.clone(),
                    sig10(row.value),
                    row.reference.map(sig10).unwrap_or_else(|| "-".into()),
                    row.trials.map(|t| t.to_string()).unwrap_or_else(|| "-".into()),
                    row.stderr.map(sig10).unwrap_or_else(|| "-".into()),
                    match row.passed {
                        Some(true) => "pass".into(),
                        Some(false) => "FAIL".into(),
                        None => "-".into(),
                    },
                ]
            })
            .collect();

        let mut widths = header.map(str::len);
        for row in &cells {
            for (width, cell) in widths.iter_mut().zip(row) {
                *width = (*width).max(cell.len());
            }
        }

        let mut out = head;
        out.push('\n');
        let mut line = String::new();
        for (k, (width, cell)) in widths.iter().zip(header).enumerate() {
            if k == 0 {
                let _ = write!(line, "{cell:<width$}");
            } else {
                let _ = write!(line, "  {cell:>width$}");
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
        for row in &cells {
            let mut line = String::new();
            for (k, (width, cell)) in widths.iter().zip(row).enumerate() {
                if k == 0 {
                    let _ = write!(line, "{cell:<width$}");
                } else {
                    let _ = write!(line, "  {cell:>width$}");
                }
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        let _ = writeln!(out, "overall: {}", if self.passed { "pass" } else { "FAIL" });

        if let Some(transcript) = &self.transcript {
            out.push_str("messages:\n");
            out.push_str(&transcript.message_log());
        }
        out
    }

    fn to_csv(&self) -> CliResult<String> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(["quantity", "value", "reference", "trials", "stderr", "passed"])?;
        for row in &self.rows {
            writer.write_record([
                row.quantity.clone(),
                row.value.to_string(),
                row.reference.map(|v| v.to_string()).unwrap_or_default(),
                row.trials.map(|v| v.to_string()).unwrap_or_default(),
                row.stderr.map(|v| v.to_string()).unwrap_or_default(),
                row.passed.map(|v| v.to_string()).unwrap_or_default(),
            ])?;
        }
        Ok(String::from_utf8(writer.into_inner()?)?)
    }
}

/// Renders to stdout or a file.
pub fn emit(report: &Report, format: Format, output: Option<&Path>) -> CliResult<()> {
    let rendered = report.render(format)?;
    match output {
        Some(path) => fs::write(path, rendered)?,
        None => print!("{rendered}"),
    }
    Ok(())
}

/// Ten significant digits: plain decimal in a readable magnitude window,
/// scientific notation outside it.
pub fn sig10(x: f64) -> String {
    if x == 0.0 {
        return "0.000000000".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    if (-4..10).contains(&magnitude) {
        format!("{:.*}", (9 - magnitude).max(0) as usize, x)
    } else {
        format!("{x:.9e}")
    }
}
