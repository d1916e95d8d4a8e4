//! SC and MD-SC protographs and their circulant lifts.

use super::matrices::{DesignTriple, LiftingMatrix, PartitionMatrix};
use super::params::CodeParams;
use super::sparse::SparseBinaryMatrix;
use crate::error::{Error, Result};

/// One nonzero circulant of a quasi-cyclic protograph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QcEdge {
    pub row: u32,
    pub col: u32,
    /// Circulant power: CN lift `t` meets VN lift `(t + power) mod z`.
    pub power: u32,
    pub base_row: u16,
    pub base_col: u16,
    pub replica: u16,
    pub component: u16,
    /// Relocation index of the source circulant.
    pub aux: u16,
}

/// Block-level view of a lifted code: which circulants sit where, with their powers.
#[derive(Debug, Clone)]
pub struct QcProtograph {
    pub row_blocks: usize,
    pub col_blocks: usize,
    pub z: usize,
    pub edges: Vec<QcEdge>,
    row_edges: Vec<Vec<u32>>,
    col_edges: Vec<Vec<u32>>,
}

impl QcProtograph {
    fn from_edges(row_blocks: usize, col_blocks: usize, z: usize, mut edges: Vec<QcEdge>) -> Self {
        edges.sort_by_key(|e| (e.row, e.col));
        let mut row_edges = vec![Vec::new(); row_blocks];
        let mut col_edges = vec![Vec::new(); col_blocks];
        for (k, e) in edges.iter().enumerate() {
            row_edges[e.row as usize].push(k as u32);
            col_edges[e.col as usize].push(k as u32);
        }
        QcProtograph { row_blocks, col_blocks, z, edges, row_edges, col_edges }
    }

    /// Protograph of the SC code (no relocation).
    pub fn sc(k: &PartitionMatrix, lf: &LiftingMatrix, p: &CodeParams) -> Result<Self> {
        check_pair(k, lf, p)?;
        Ok(Self::build(k, lf, None, p, 1))
    }

    /// Protograph of the MD-SC code.
    pub fn md(t: &DesignTriple, p: &CodeParams) -> Result<Self> {
        t.validate(p)?;
        Ok(Self::build(&t.partition, &t.lifting, Some(&t.relocation), p, p.aux))
    }

    /// Like [`QcProtograph::md`] but skipping the design-regime checks on `p`.
    pub fn md_unchecked(t: &DesignTriple, p: &CodeParams) -> Result<Self> {
        check_pair(&t.partition, &t.lifting, p)?;
        if t.relocation.rows() != p.gamma
            || t.relocation.cols() != p.kappa
            || t.relocation.grid().max() as usize >= p.aux
        {
            return Err(Error::Dimension {
                expected: format!("{}x{} in 0..{}", p.gamma, p.kappa, p.aux),
                got: "relocation".into(),
            });
        }
        Ok(Self::build(&t.partition, &t.lifting, Some(&t.relocation), p, p.aux))
    }

    fn build(
        k: &PartitionMatrix,
        lf: &LiftingMatrix,
        mr: Option<&super::matrices::RelocationMatrix>,
        p: &CodeParams,
        copies: usize,
    ) -> Self {
        let (g, kap, l, m) = (p.gamma, p.kappa, p.coupling, p.m);
        let rb = (l + m) * g;
        let cb = l * kap;
        let mut edges = Vec::with_capacity(copies * l * g * kap);
        for b in 0..copies {
            for r in 0..l {
                for i in 0..g {
                    for j in 0..kap {
                        let y = k.get(i, j) as usize;
                        let ell = mr.map_or(0, |mr| mr.get(i, j)) as usize;
                        let a = (b + ell) % copies;
                        edges.push(QcEdge {
                            row: (a * rb + (r + y) * g + i) as u32,
                            col: (b * cb + r * kap + j) as u32,
                            power: lf.get(i, j),
                            base_row: i as u16,
                            base_col: j as u16,
                            replica: r as u16,
                            component: y as u16,
                            aux: ell as u16,
                        });
                    }
                }
            }
        }
        Self::from_edges(copies * rb, copies * cb, p.z, edges)
    }

    pub fn row_edges(&self, r: usize) -> &[u32] {
        &self.row_edges[r]
    }
    pub fn col_edges(&self, c: usize) -> &[u32] {
        &self.col_edges[c]
    }

    /// Block-level 0/1 matrix.
    pub fn protograph(&self) -> SparseBinaryMatrix {
        let entries = self.edges.iter().map(|e| (e.row as usize, e.col as usize));
        SparseBinaryMatrix::from_entries(self.row_blocks, self.col_blocks, entries)
            .expect("protograph blocks are distinct by construction")
    }

    /// Full parity-check matrix with each block replaced by its circulant.
    pub fn lift(&self) -> SparseBinaryMatrix {
        let z = self.z;
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); self.row_blocks * z];
        for e in &self.edges {
            for t in 0..z {
                let col = e.col as usize * z + (t + e.power as usize) % z;
                adj[e.row as usize * z + t].push(col as u32);
            }
        }
        for row in &mut adj {
            row.sort_unstable();
        }
        SparseBinaryMatrix::new(self.row_blocks * z, self.col_blocks * z, adj).expect("lift is well formed")
    }
}

fn check_pair(k: &PartitionMatrix, lf: &LiftingMatrix, p: &CodeParams) -> Result<()> {
    for (name, r, c) in [("partition", k.rows(), k.cols()), ("lifting", lf.rows(), lf.cols())] {
        if r != p.gamma || c != p.kappa {
            return Err(Error::Dimension {
                expected: format!("{}x{}", p.gamma, p.kappa),
                got: format!("{name} {r}x{c}"),
            });
        }
    }
    if k.grid().max() as usize > p.m {
        return Err(Error::InvalidParams(format!("partition entry exceeds m={}", p.m)));
    }
    if lf.grid().max() as usize >= p.z {
        return Err(Error::InvalidParams(format!("lifting entry exceeds z-1={}", p.z - 1)));
    }
    Ok(())
}

/// SC protograph of size `(L+m)γ × Lκ`.
pub fn build_sc_protograph(k: &PartitionMatrix, p: &CodeParams) -> Result<SparseBinaryMatrix> {
    let lf = LiftingMatrix::zeros(k.rows(), k.cols(), p.z);
    Ok(QcProtograph::sc(k, &lf, p)?.protograph())
}

/// Lifted SC parity-check matrix.
pub fn build_sc_matrix(k: &PartitionMatrix, lf: &LiftingMatrix, p: &CodeParams) -> Result<SparseBinaryMatrix> {
    Ok(QcProtograph::sc(k, lf, p)?.lift())
}

/// Lifted MD-SC parity-check matrix of size `M(L+m)γz × MLκz`.
pub fn build_md_matrix(t: &DesignTriple, p: &CodeParams) -> Result<SparseBinaryMatrix> {
    Ok(QcProtograph::md(t, p)?.lift())
}

/// Maps an SC block position to `(base row, base col, component)`.
/// The component is negative or above `m` when the block is structurally empty.
pub fn sc_block_to_base(block_row: usize, block_col: usize, gamma: usize, kappa: usize) -> (usize, usize, isize) {
    let y = (block_row / gamma) as isize - (block_col / kappa) as isize;
    (block_row % gamma, block_col % kappa, y)
}
