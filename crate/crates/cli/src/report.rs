use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

/// What every command prints. Worker count and timing are deliberately
/// absent so that reports are byte-identical across `--jobs`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    /// Independent cross-checks and whether they agree with `results`.
    pub oracle: Value,
    pub passed: bool,
    /// False when any size or budget guard limited the computation.
    pub exhaustive: bool,
}

/// A report plus the rows shown in table format.
pub struct Outcome {
    pub report: RunReport,
    pub rows: Vec<(String, String)>,
}

impl Outcome {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut out = serde_json::to_string_pretty(&self.report).expect("reports serialize");
                out.push('\n');
                out
            }
            Format::Table => {
                let mut rows = vec![("command".to_string(), self.report.command.clone())];
                rows.extend(self.rows.iter().cloned());
                rows.push(("exhaustive".into(), self.report.exhaustive.to_string()));
                rows.push(("verdict".into(), if self.report.passed { "ok" } else { "MISMATCH" }.into()));
                let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0).min(24);
                rows.iter()
                    .map(|(k, v)| format!("{k:<width$}  {v}\n"))
                    .collect()
            }
        }
    }
}

/// Run cache keyed by the SHA-256 of a canonical input description.
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating cache dir {}", dir.display()))?;
        Ok(Self { dir: dir.to_path_buf() })
    }

    pub fn key(inputs: &Value) -> String {
        let canonical = serde_json::to_vec(inputs).expect("inputs serialize");
        Sha256::digest(&canonical).iter().map(|b| format!("{b:02x}")).collect()
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// A cached outcome, if present and readable. Damaged entries are
    /// treated as misses.
    pub fn get(&self, key: &str) -> Option<(RunReport, Vec<(String, String)>)> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        serde_json::from_str::<CacheEntry>(&text).ok().map(|e| (e.report, e.rows))
    }

    pub fn put(&self, key: &str, outcome: &Outcome) -> Result<()> {
        let entry = CacheEntry {
            report: outcome.report.clone(),
            rows: outcome.rows.clone(),
        };
        let path = self.path(key);
        fs::write(&path, serde_json::to_vec(&entry)?).with_context(|| format!("writing {}", path.display()))
    }
}

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    report: RunReport,
    rows: Vec<(String, String)>,
}
