use std::fmt;
use std::io::{self, Write};

use serde_json::Value;

use crate::Format;

pub const EXIT_OK: u8 = 0;
pub const EXIT_NOT_COMPARABLE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_ORACLE: u8 = 3;

/// Everything a command produces, in all three renderings.
pub struct Outcome {
    pub code: u8,
    pub json: Value,
    pub text: String,
    pub csv_header: Vec<&'static str>,
    pub csv_rows: Vec<Vec<String>>,
}

impl Outcome {
    pub fn emit(&self, format: Format) -> io::Result<()> {
        let stdout = io::stdout();
        let mut out = stdout.lock();
        match format {
            Format::Text => out.write_all(self.text.as_bytes())?,
            Format::Json => {
                serde_json::to_writer_pretty(&mut out, &self.json)?;
                writeln!(out)?;
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.csv_header)?;
                for row in &self.csv_rows {
                    w.write_record(row)?;
                }
                w.flush()?;
            }
        }
        Ok(())
    }
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Library(lensform::Error),
    Oracle(Vec<String>),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Library(lensform::Error::Inconsistency(_)) => EXIT_ORACLE,
            Failure::Library(_) => EXIT_USAGE,
            Failure::Oracle(_) => EXIT_ORACLE,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "{m}"),
            Failure::Library(e) => write!(f, "{e}"),
            Failure::Oracle(d) => write!(f, "oracle disagreement: {}", d.join("; ")),
        }
    }
}

impl From<lensform::Error> for Failure {
    fn from(e: lensform::Error) -> Self {
        Failure::Library(e)
    }
}

/// One cross-check between a library result and its brute-force recomputation.
#[derive(Debug, Clone, serde::Serialize)]
pub struct Check {
    pub name: String,
    pub library: String,
    pub oracle: String,
    pub agree: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, library: impl fmt::Display, oracle: impl fmt::Display) -> Self {
        let (library, oracle) = (library.to_string(), oracle.to_string());
        Self {
            name: name.into(),
            agree: library == oracle,
            library,
            oracle,
        }
    }
}

/// Sets the exit code and appends a line to the text output when a check
/// failed.
pub fn apply_checks(outcome: &mut Outcome, checks: &[Check]) {
    outcome.json["oracle"] = serde_json::to_value(checks).expect("checks serialize");
    let bad: Vec<&Check> = checks.iter().filter(|c| !c.agree).collect();
    outcome.text.push_str(&format!(
        "oracle: {} checks, {} disagreements\n",
        checks.len(),
        bad.len()
    ));
    for c in &bad {
        outcome.text.push_str(&format!(
            "  {}: library {} vs oracle {}\n",
            c.name, c.library, c.oracle
        ));
        eprintln!("lensform: oracle disagreement on {}: library {} vs oracle {}", c.name, c.library, c.oracle);
    }
    if !bad.is_empty() {
        outcome.code = EXIT_ORACLE;
    }
}

pub fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn opt<T: fmt::Display>(x: &Option<T>) -> String {
    x.as_ref().map_or_else(String::new, T::to_string)
}
