//! Experiment manifests and the batch suite runner behind `torus-ham suite`.
//!
//! A manifest is a flat TOML table of `(type, r, s, k, expected)` entries.
//! Every entry runs generate → validate → construct → oracle, and is judged
//! independently; a failing entry never stops the others.

use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use torus_ham_core::{
    construct_hamiltonian, find_hamiltonian, generate, verify_certificate, Error as CoreError, MapType,
    SearchBudget, Status,
};

/// The bundled reference manifest.
pub const REFERENCE_MANIFEST: &str = include_str!("../manifests/reference.toml");

#[derive(Debug, Error)]
pub enum CliError {
    #[error("manifest parse error: {0}")]
    ManifestParse(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Core(#[from] CoreError),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// Process exit code: usage and parse problems are 2.
    pub fn exit_code(&self) -> i32 {
        2
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expected {
    Hamiltonian,
    NonHamiltonian,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    #[serde(default)]
    pub label: Option<String>,
    #[serde(rename = "type")]
    pub map_type: String,
    pub r: usize,
    pub s: usize,
    pub k: usize,
    pub expected: Expected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetSpec {
    #[serde(default = "default_nodes")]
    pub max_nodes: u64,
    #[serde(default = "default_secs")]
    pub time_limit_secs: u64,
}

fn default_nodes() -> u64 {
    SearchBudget::default().max_nodes
}

fn default_secs() -> u64 {
    SearchBudget::default().time_limit.as_secs()
}

impl Default for BudgetSpec {
    fn default() -> Self {
        BudgetSpec {
            max_nodes: default_nodes(),
            time_limit_secs: default_secs(),
        }
    }
}

impl BudgetSpec {
    pub fn budget(&self) -> SearchBudget {
        SearchBudget::new(self.max_nodes, Duration::from_secs(self.time_limit_secs))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub budget: BudgetSpec,
    #[serde(default, rename = "entry")]
    pub entries: Vec<Entry>,
}

impl Manifest {
    /// Parse a manifest; every entry type must name one of the eight types.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let m: Manifest = toml::from_str(text).map_err(|e| CliError::ManifestParse(e.to_string()))?;
        for (i, e) in m.entries.iter().enumerate() {
            e.map_type
                .parse::<MapType>()
                .map_err(|err| CliError::ManifestParse(format!("entry {}: {err}", i + 1)))?;
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Outcome of one manifest entry. Contains no timings, so identical
/// manifests give identical reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryReport {
    pub label: String,
    #[serde(rename = "type")]
    pub map_type: String,
    pub r: usize,
    pub s: usize,
    pub k: usize,
    pub expected: Expected,
    /// `certified`, `refused`, or a failure message.
    pub construct: String,
    /// `hamiltonian`, `non-hamiltonian` or `inconclusive`.
    pub oracle: String,
    pub oracle_nodes: u64,
    pub verdict: Verdict,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub entries: Vec<EntryReport>,
    pub passed: usize,
    pub failed: usize,
}

impl SuiteReport {
    pub fn exit_code(&self) -> i32 {
        i32::from(self.failed > 0)
    }
}

/// Run every entry in manifest order.
pub fn run_suite(manifest: &Manifest) -> SuiteReport {
    let budget = manifest.budget.budget();
    let entries: Vec<EntryReport> = manifest.entries.iter().map(|e| run_entry(e, budget)).collect();
    let passed = entries.iter().filter(|e| e.verdict == Verdict::Pass).count();
    SuiteReport {
        failed: entries.len() - passed,
        passed,
        entries,
    }
}

fn run_entry(e: &Entry, budget: SearchBudget) -> EntryReport {
    let mut rep = EntryReport {
        label: e
            .label
            .clone()
            .unwrap_or_else(|| format!("{} T({},{},{})", e.map_type, e.r, e.s, e.k)),
        map_type: e.map_type.clone(),
        r: e.r,
        s: e.s,
        k: e.k,
        expected: e.expected,
        construct: String::new(),
        oracle: String::new(),
        oracle_nodes: 0,
        verdict: Verdict::Fail,
        detail: String::new(),
    };
    let t: MapType = match e.map_type.parse() {
        Ok(t) => t,
        Err(err) => {
            rep.detail = err.to_string();
            return rep;
        }
    };
    let (map, lab) = match generate(t, e.r, e.s, e.k) {
        Ok(x) => x,
        Err(err) => {
            rep.detail = format!("generate: {err}");
            return rep;
        }
    };
    if let Err(err) = map.verify_semi_equivelar() {
        rep.detail = format!("validate: {err}");
        return rep;
    }
    let certified = match construct_hamiltonian(&map, &lab) {
        Ok(cert) => match verify_certificate(&map, &cert) {
            Ok(()) => {
                rep.construct = "certified".into();
                Some(true)
            }
            Err(v) => {
                rep.construct = format!("certificate rejected: {v}");
                None
            }
        },
        Err(CoreError::NonHamiltonianType(_)) => {
            rep.construct = "refused".into();
            Some(false)
        }
        Err(err) => {
            rep.construct = format!("failed: {err}");
            None
        }
    };
    let verdict = find_hamiltonian(&map, budget);
    rep.oracle_nodes = verdict.nodes_explored;
    let oracle = match verdict.status {
        Status::Hamiltonian { .. } => Some(true),
        Status::NonHamiltonian => Some(false),
        Status::Inconclusive => None,
    };
    rep.oracle = match oracle {
        Some(true) => "hamiltonian",
        Some(false) => "non-hamiltonian",
        None => "inconclusive",
    }
    .into();
    let want = e.expected == Expected::Hamiltonian;
    let mut problems = Vec::new();
    if certified != Some(want) {
        problems.push(format!("construct {}", rep.construct));
    }
    if oracle != Some(want) {
        problems.push(format!("oracle {}", rep.oracle));
    }
    if problems.is_empty() {
        rep.verdict = Verdict::Pass;
        rep.detail = "construct and oracle agree with the expectation".into();
    } else {
        let claim = match (e.expected, t) {
            (Expected::Hamiltonian, MapType::Dodecagonal) => {
                "expected Hamiltonian, but {3,12,12} has no construction"
            }
            (Expected::Hamiltonian, _) => "expected Hamiltonian",
            (Expected::NonHamiltonian, _) => "expected non-Hamiltonian",
        };
        rep.detail = format!("{claim}; {}", problems.join(", "));
    }
    rep
}

/// One line per entry plus a summary line.
pub fn render_report(report: &SuiteReport) -> String {
    let mut out = String::new();
    for e in &report.entries {
        let v = match e.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        };
        out.push_str(&format!("{v} {}: {}\n", e.label, e.detail));
    }
    out.push_str(&format!("{} passed, {} failed\n", report.passed, report.failed));
    out
}
