use std::path::{Path, PathBuf};

use chrono::{SecondsFormat, Utc};
use gchtw_core::phase::{regular_equilibria, singular_equilibria, EquilibriumInfo};
use gchtw_core::{EquationId, HomoclinicSolution, WaveParams};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliResult;
use crate::output::write_json;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub c: f64,
    pub g: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct EquilibriumRecord {
    pub phi: f64,
    pub y: f64,
    pub kind: String,
    pub origin: String,
    /// `[re, im]` of both eigenvalues.
    pub eigenvalues: [[f64; 2]; 2],
}

impl From<&EquilibriumInfo> for EquilibriumRecord {
    fn from(e: &EquilibriumInfo) -> Self {
        Self {
            phi: e.location.0,
            y: e.location.1,
            kind: format!("{:?}", e.kind).to_lowercase(),
            origin: format!("{:?}", e.origin).to_lowercase(),
            eigenvalues: [[e.eigenvalues[0].re, e.eigenvalues[0].im], [e.eigenvalues[1].re, e.eigenvalues[1].im]],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct SeriesRecord {
    pub x0: Option<f64>,
    #[serde(rename = "M")]
    pub m: Option<usize>,
    /// Right then left leading coefficient.
    pub leading_coefficients: Vec<f64>,
    pub verdicts: Vec<String>,
    pub junction_value: f64,
}

impl From<&HomoclinicSolution> for SeriesRecord {
    fn from(sol: &HomoclinicSolution) -> Self {
        let (leading, verdicts, m) = match sol.branches() {
            Some((r, l)) => {
                let rep = |b| gchtw_core::convergence_report(b).verdict.as_str().to_string();
                (vec![r.leading(), l.leading()], vec![rep(r), rep(l)], Some(r.order))
            }
            None => (Vec::new(), vec!["exact".to_string()], None),
        };
        Self { x0: sol.x0(), m, leading_coefficients: leading, verdicts, junction_value: sol.junction_value }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timestamps {
    pub started: String,
    pub finished: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct RunManifest {
    pub tool_version: String,
    /// Shell-ready command line that regenerates the outputs.
    pub command: String,
    pub argv: Vec<String>,
    pub equation: Option<EquationId>,
    pub params: Option<Params>,
    pub derived: Vec<EquilibriumRecord>,
    pub series: Option<SeriesRecord>,
    pub outputs: Vec<PathBuf>,
    pub timestamps: Timestamps,
    /// SHA-256 of the argument vector and the bytes of every input file.
    pub input_hash: String,
}

/// Collects manifest data over one command invocation.
#[derive(Debug)]
pub struct ManifestBuilder {
    argv: Vec<String>,
    started: String,
    hasher: Sha256,
    equation: Option<EquationId>,
    params: Option<Params>,
    derived: Vec<EquilibriumRecord>,
    series: Option<SeriesRecord>,
}

fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

fn shell_quote(s: &str) -> String {
    let plain = !s.is_empty()
        && s.chars().all(|ch| ch.is_ascii_alphanumeric() || "-_./:,=+@%".contains(ch));
    if plain { s.to_string() } else { format!("'{}'", s.replace('\'', r"'\''")) }
}

impl ManifestBuilder {
    pub fn new(argv: &[String]) -> Self {
        let mut hasher = Sha256::new();
        for a in argv {
            hasher.update((a.len() as u64).to_le_bytes());
            hasher.update(a.as_bytes());
        }
        Self {
            argv: argv.to_vec(),
            started: now(),
            hasher,
            equation: None,
            params: None,
            derived: Vec::new(),
            series: None,
        }
    }

    pub fn input_file(&mut self, bytes: &[u8]) {
        self.hasher.update((bytes.len() as u64).to_le_bytes());
        self.hasher.update(bytes);
    }

    /// Records the model and its classified equilibria.
    pub fn model(&mut self, eq: EquationId, p: WaveParams) {
        self.equation = Some(eq);
        self.params = Some(Params { c: p.c(), g: p.g() });
        self.derived = regular_equilibria(eq, p)
            .iter()
            .chain(singular_equilibria(eq, p).iter())
            .map(EquilibriumRecord::from)
            .collect();
    }

    pub fn series(&mut self, sol: &HomoclinicSolution) {
        self.series = Some(SeriesRecord::from(sol));
    }

    pub fn finish(&self, outputs: &[PathBuf]) -> RunManifest {
        let hash = self.hasher.clone().finalize();
        RunManifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: self.argv.iter().map(|a| shell_quote(a)).collect::<Vec<_>>().join(" "),
            argv: self.argv.clone(),
            equation: self.equation,
            params: self.params.clone(),
            derived: self.derived.clone(),
            series: self.series.clone(),
            outputs: outputs.to_vec(),
            timestamps: Timestamps { started: self.started.clone(), finished: now() },
            input_hash: format!("{hash:x}"),
        }
    }

    /// Writes `<first output>.manifest.json` next to the outputs.
    pub fn write(&self, outputs: &[PathBuf]) -> CliResult<PathBuf> {
        let path = manifest_path(&outputs[0]);
        write_json(&path, &self.finish(outputs))?;
        Ok(path)
    }
}

pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    output.with_file_name(name)
}
