use std::collections::BTreeMap;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::time::Instant;

use ovalbent::{Error, FieldParams};
use serde::Serialize;
use serde_json::{Map, Value};

/// Exit codes: 0 all verdicts pass, 1 verification failure, 2 usage or
/// input error.
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotBent(_) | Error::Verification(_) | Error::Singular => EXIT_FAIL,
            Error::OutOfRange(_) | Error::Domain(_) | Error::InvalidSpec(_) | Error::Parse(_) => {
                EXIT_USAGE
            }
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::usage(format!("bad JSON: {e}"))
    }
}

pub type CmdResult<T> = Result<T, Failure>;

#[derive(Clone, Debug, Serialize)]
pub struct FieldInfo {
    pub m: u32,
    pub poly_f: u64,
    pub poly_k: u64,
}

impl FieldInfo {
    pub fn of(p: &FieldParams) -> Self {
        FieldInfo {
            m: p.m(),
            poly_f: p.poly_f(),
            poly_k: p.poly_k(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldInfo>,
    pub verdicts: BTreeMap<String, bool>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub agreement: BTreeMap<String, bool>,
    #[serde(skip_serializing_if = "Map::is_empty")]
    pub details: Map<String, Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub artifacts: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl RunReport {
    pub fn new(command: Vec<String>) -> Self {
        RunReport {
            command,
            field: None,
            verdicts: BTreeMap::new(),
            agreement: BTreeMap::new(),
            details: Map::new(),
            witnesses: Vec::new(),
            artifacts: Vec::new(),
            wall_time_ms: None,
        }
    }

    pub fn verdict(&mut self, name: &str, ok: bool) {
        self.verdicts.insert(name.into(), ok);
    }

    /// Records the verdict, with the error message as witness on failure.
    pub fn check<T>(&mut self, name: &str, r: ovalbent::Result<T>) -> Option<T> {
        match r {
            Ok(v) => {
                self.verdict(name, true);
                Some(v)
            }
            Err(e) => {
                self.verdict(name, false);
                self.witness(format!("{name}: {e}"));
                None
            }
        }
    }

    pub fn agree(&mut self, name: &str, ok: bool) {
        self.agreement.insert(name.into(), ok);
    }

    pub fn detail(&mut self, name: &str, v: impl Serialize) {
        self.details.insert(
            name.into(),
            serde_json::to_value(v).expect("report values serialize"),
        );
    }

    pub fn witness(&mut self, w: impl Into<String>) {
        self.witnesses.push(w.into());
    }

    pub fn passed(&self) -> bool {
        self.verdicts
            .values()
            .chain(self.agreement.values())
            .all(|&v| v)
    }
}

/// Where artifacts go. Without an out-dir nothing is written.
pub struct Context {
    pub out_dir: Option<PathBuf>,
    pub seed: u64,
    pub started: Instant,
}

impl Context {
    pub fn write(&self, report: &mut RunReport, name: &str, contents: &str) -> CmdResult<()> {
        if let Some(dir) = &self.out_dir {
            fs::create_dir_all(dir)?;
            let path = dir.join(name);
            fs::write(&path, contents)?;
            report.artifacts.push(path.display().to_string());
        }
        Ok(())
    }
}

/// Reads a file, or standard input for `-`.
pub fn read_input(path: &Path) -> CmdResult<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
    }
}

pub fn write_output(path: &Path, contents: &str) -> CmdResult<()> {
    fs::write(path, contents).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

pub fn to_json(report: &RunReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}
