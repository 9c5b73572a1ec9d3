//! JSON configuration: `{"systems": [...], "budgets": {...}}`.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::finsys::{self, FiniteSystem};
use crate::linalg::Matrix;
use crate::seqclassify::Budgets;
use crate::seqmodel::{CardinalDim, DiagonalSpec, Override, SymTerm};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub systems: Vec<SystemConfig>,
    #[serde(default)]
    pub budgets: Budgets,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    pub id: String,
    #[serde(flatten)]
    pub payload: Payload,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Payload {
    /// Two subspaces of `R^ambient_dim`, each given by spanning vectors.
    FiniteMatrix { ambient_dim: usize, e1: Vec<Vec<f64>>, e2: Vec<Vec<f64>> },
    /// Graph system of a matrix given by rows.
    GraphFinite { matrix: Vec<Vec<f64>> },
    /// Graph system of a symbolic diagonal operator.
    GraphDiagonal(DiagonalConfig),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagonalConfig {
    #[serde(default)]
    pub branches: Vec<TermConfig>,
    #[serde(default)]
    pub overrides: Vec<OverrideConfig>,
    #[serde(default)]
    pub shift_offset: u64,
    #[serde(default)]
    pub kernel_dim: KernelDim,
    #[serde(default)]
    pub interval_parts: Vec<[f64; 2]>,
}

/// `c (n + a)^p (ln(n + b))^q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermConfig {
    pub c: f64,
    #[serde(default)]
    pub a: f64,
    pub p: f64,
    #[serde(default = "one")]
    pub b: f64,
    #[serde(default)]
    pub q: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OverrideConfig {
    pub branch: usize,
    pub index: u64,
    pub value: f64,
}

/// A count, or the string `"continuum"`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KernelDim {
    Finite(u64),
    Named(NamedDim),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum NamedDim {
    #[serde(rename = "continuum")]
    Continuum,
}

impl Default for KernelDim {
    fn default() -> Self {
        KernelDim::Finite(0)
    }
}

/// A validated system ready for classification.
#[derive(Debug, Clone)]
pub enum System {
    Finite(FiniteSystem),
    /// Graph system plus its matrix, kept for witness construction.
    GraphFinite(Matrix, FiniteSystem),
    Diagonal(DiagonalSpec),
}

impl System {
    pub fn finite(&self) -> Option<&FiniteSystem> {
        match self {
            System::Finite(s) | System::GraphFinite(_, s) => Some(s),
            System::Diagonal(_) => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            System::Finite(_) => "finite-matrix",
            System::GraphFinite(..) => "graph-finite",
            System::Diagonal(_) => "graph-diagonal",
        }
    }
}

impl ConfigFile {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: ConfigFile = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        let mut seen = BTreeSet::new();
        for s in &cfg.systems {
            if !seen.insert(s.id.as_str()) {
                return Err(CliError::Config(format!("duplicate system id {:?}", s.id)));
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn get(&self, id: &str) -> Result<&SystemConfig, CliError> {
        self.systems
            .iter()
            .find(|s| s.id == id)
            .ok_or_else(|| CliError::UnknownId(id.to_string()))
    }

    pub fn system(&self, id: &str) -> Result<System, CliError> {
        self.get(id)?.build()
    }
}

fn bad(id: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("system {id:?}: {msg}"))
}

fn rows_to_matrix(id: &str, rows: &[Vec<f64>]) -> Result<Matrix, CliError> {
    if rows.is_empty() || rows[0].is_empty() {
        return Err(bad(id, "matrix must be non-empty"));
    }
    if rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(bad(id, "ragged matrix rows"));
    }
    Matrix::from_rows(rows).map_err(|e| bad(id, e))
}

fn vectors_to_frame(id: &str, n: usize, vecs: &[Vec<f64>]) -> Result<Matrix, CliError> {
    if let Some(v) = vecs.iter().find(|v| v.len() != n) {
        return Err(bad(id, format!("vector of length {} in ambient dimension {n}", v.len())));
    }
    Matrix::from_cols(n, vecs).map_err(|e| bad(id, e))
}

impl SystemConfig {
    pub fn build(&self) -> Result<System, CliError> {
        let id = self.id.as_str();
        match &self.payload {
            Payload::FiniteMatrix { ambient_dim, e1, e2 } => {
                if *ambient_dim == 0 {
                    return Err(bad(id, "ambient_dim must be positive"));
                }
                let a = vectors_to_frame(id, *ambient_dim, e1)?;
                let b = vectors_to_frame(id, *ambient_dim, e2)?;
                let s = FiniteSystem::from_spanning(*ambient_dim, &a, &b).map_err(|e| bad(id, e))?;
                Ok(System::Finite(s))
            }
            Payload::GraphFinite { matrix } => {
                let t = rows_to_matrix(id, matrix)?;
                let s = finsys::graph_system(&t).map_err(|e| bad(id, e))?;
                Ok(System::GraphFinite(t, s))
            }
            Payload::GraphDiagonal(d) => Ok(System::Diagonal(d.build().map_err(|e| bad(id, e))?)),
        }
    }
}

impl DiagonalConfig {
    pub fn build(&self) -> Result<DiagonalSpec, crate::seqmodel::ModelError> {
        let mut branches = Vec::with_capacity(self.branches.len());
        for t in &self.branches {
            branches.push(SymTerm::new(t.c, t.a, t.p, t.b, t.q)?);
        }
        let overrides = self
            .overrides
            .iter()
            .map(|o| Override { branch: o.branch, index: o.index, value: o.value })
            .collect();
        let kernel = match self.kernel_dim {
            KernelDim::Finite(k) => CardinalDim::Finite(k),
            KernelDim::Named(NamedDim::Continuum) => CardinalDim::Continuum,
        };
        let intervals = self.interval_parts.iter().map(|&[lo, hi]| (lo, hi)).collect();
        DiagonalSpec::new(branches, overrides, self.shift_offset, kernel, intervals)
    }

    pub fn from_spec(spec: &DiagonalSpec) -> Self {
        Self {
            branches: spec
                .branches()
                .iter()
                .map(|t| TermConfig { c: t.c, a: t.a, p: t.p, b: t.b, q: t.q })
                .collect(),
            overrides: spec
                .overrides()
                .iter()
                .map(|o| OverrideConfig { branch: o.branch, index: o.index, value: o.value })
                .collect(),
            shift_offset: spec.shift_offset(),
            kernel_dim: match spec.kernel_dim() {
                CardinalDim::Finite(k) => KernelDim::Finite(k),
                CardinalDim::Continuum => KernelDim::Named(NamedDim::Continuum),
            },
            interval_parts: spec.interval_parts().iter().map(|&(lo, hi)| [lo, hi]).collect(),
        }
    }
}
