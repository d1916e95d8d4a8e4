//! Plain-text matrix files and JSON code descriptors.
//!
//! A matrix file starts with a header line `rows cols bound` where the bound
//! is `m`, `z` or `M` depending on the matrix kind, followed by `rows` lines of
//! whitespace-separated integers. Lines starting with `#` are ignored.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::matrices::{BaseGrid, DesignTriple, LiftingMatrix, PartitionMatrix, RelocationMatrix};
use super::params::CodeParams;
use crate::error::{Error, Result};

/// Parses a matrix file into its grid and header bound.
pub fn parse_grid(text: &str) -> Result<(BaseGrid, usize)> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let h = parse_ints(header)?;
    if h.len() != 3 {
        return Err(Error::Parse(format!("header {header:?} must have three integers")));
    }
    let (rows, cols, bound) = (h[0] as usize, h[1] as usize, h[2] as usize);
    let mut data = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let line = lines.next().ok_or_else(|| Error::Parse(format!("missing row {r}")))?;
        let vals = parse_ints(line)?;
        if vals.len() != cols {
            return Err(Error::Dimension {
                expected: format!("{cols} entries in row {r}"),
                got: vals.len().to_string(),
            });
        }
        data.extend(vals);
    }
    if lines.next().is_some() {
        return Err(Error::Parse("trailing rows after matrix".into()));
    }
    Ok((BaseGrid::new(rows, cols, data)?, bound))
}

fn parse_ints(line: &str) -> Result<Vec<u32>> {
    line.split_whitespace()
        .map(|t| t.parse::<u32>().map_err(|e| Error::Parse(format!("bad integer {t:?}: {e}"))))
        .collect()
}

pub fn format_grid(g: &BaseGrid, bound: usize) -> String {
    let mut s = format!("{} {} {}\n", g.rows(), g.cols(), bound);
    for i in 0..g.rows() {
        let row: Vec<String> = (0..g.cols()).map(|j| g.get(i, j).to_string()).collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}

pub fn format_partition(k: &PartitionMatrix) -> String {
    format_grid(k.grid(), k.memory())
}
pub fn format_lifting(lf: &LiftingMatrix) -> String {
    format_grid(lf.grid(), lf.circulant_size())
}
pub fn format_relocation(mr: &RelocationMatrix) -> String {
    format_grid(mr.grid(), mr.bound())
}

pub fn parse_partition(text: &str) -> Result<PartitionMatrix> {
    let (g, m) = parse_grid(text)?;
    PartitionMatrix::new(g, m)
}
pub fn parse_lifting(text: &str) -> Result<LiftingMatrix> {
    let (g, z) = parse_grid(text)?;
    LiftingMatrix::new(g, z)
}
pub fn parse_relocation(text: &str) -> Result<RelocationMatrix> {
    let (g, aux) = parse_grid(text)?;
    RelocationMatrix::new(g, aux)
}

/// JSON file bundling parameters with paths to the matrix files.
/// Relative paths are resolved against the descriptor's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeDescriptor {
    pub params: CodeParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lifting: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relocation: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pstar: Option<Vec<f64>>,
}

impl CodeDescriptor {
    pub fn load(path: &Path) -> Result<Self> {
        let mut d: CodeDescriptor = serde_json::from_str(&fs::read_to_string(path)?)?;
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [&mut d.partition, &mut d.lifting, &mut d.relocation].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        d.params.validate()?;
        Ok(d)
    }

    pub fn read_partition(&self) -> Result<Option<PartitionMatrix>> {
        self.partition.as_deref().map(|p| parse_partition(&fs::read_to_string(p)?)).transpose()
    }
    pub fn read_lifting(&self) -> Result<Option<LiftingMatrix>> {
        self.lifting.as_deref().map(|p| parse_lifting(&fs::read_to_string(p)?)).transpose()
    }
    pub fn read_relocation(&self) -> Result<Option<RelocationMatrix>> {
        self.relocation.as_deref().map(|p| parse_relocation(&fs::read_to_string(p)?)).transpose()
    }

    /// Loads all three matrices; a missing relocation file means no relocation.
    pub fn read_triple(&self) -> Result<DesignTriple> {
        let p = &self.params;
        let k =
            self.read_partition()?.ok_or_else(|| Error::InvalidParams("descriptor lacks a partition file".into()))?;
        let lf = self.read_lifting()?.ok_or_else(|| Error::InvalidParams("descriptor lacks a lifting file".into()))?;
        let mr =
            self.read_relocation()?.unwrap_or_else(|| RelocationMatrix::zeros(p.gamma, p.kappa, p.relocation_bound()));
        let t = DesignTriple::new(k, lf, mr);
        t.validate(p)?;
        Ok(t)
    }
}

/// Writes the three matrix files plus a descriptor into `dir`.
pub fn write_code(dir: &Path, params: &CodeParams, t: &DesignTriple) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("K.txt"), format_partition(&t.partition))?;
    fs::write(dir.join("L.txt"), format_lifting(&t.lifting))?;
    fs::write(dir.join("M.txt"), format_relocation(&t.relocation))?;
    let d = CodeDescriptor {
        params: *params,
        partition: Some("K.txt".into()),
        lifting: Some("L.txt".into()),
        relocation: Some("M.txt".into()),
        pstar: None,
    };
    let path = dir.join("code.json");
    fs::write(&path, serde_json::to_string_pretty(&d)?)?;
    Ok(path)
}
