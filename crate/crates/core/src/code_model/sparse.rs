use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest column count for which dense export is allowed.
pub const DENSE_COLUMN_CAP: usize = 1_000_000;

/// Binary matrix stored as sorted per-row column lists.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SparseBinaryMatrix {
    rows: usize,
    cols: usize,
    adjacency: Vec<Vec<u32>>,
}

impl SparseBinaryMatrix {
    /// Validates that each row is strictly increasing and in range.
    pub fn new(rows: usize, cols: usize, adjacency: Vec<Vec<u32>>) -> Result<Self> {
        if adjacency.len() != rows {
            return Err(Error::Dimension { expected: format!("{rows} rows"), got: adjacency.len().to_string() });
        }
        for (r, row) in adjacency.iter().enumerate() {
            for w in row.windows(2) {
                if w[0] >= w[1] {
                    return Err(Error::Parse(format!("row {r} is not strictly increasing")));
                }
            }
            if let Some(&last) = row.last() {
                if last as usize >= cols {
                    return Err(Error::OutOfRange { row: r, col: last as usize, value: last, bound: cols as u32 });
                }
            }
        }
        Ok(SparseBinaryMatrix { rows, cols, adjacency })
    }

    /// Builds from unordered `(row, col)` pairs; duplicates are an error.
    pub fn from_entries(rows: usize, cols: usize, entries: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); rows];
        for (r, c) in entries {
            if r >= rows || c >= cols {
                return Err(Error::Dimension { expected: format!("< {rows}x{cols}"), got: format!("({r},{c})") });
            }
            adjacency[r].push(c as u32);
        }
        for row in &mut adjacency {
            row.sort_unstable();
        }
        Self::new(rows, cols, adjacency)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn row(&self, r: usize) -> &[u32] {
        &self.adjacency[r]
    }
    pub fn adjacency(&self) -> &[Vec<u32>] {
        &self.adjacency
    }
    pub fn nnz(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum()
    }
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.adjacency[r].binary_search(&(c as u32)).is_ok()
    }

    /// Per-column sorted row lists.
    pub fn column_adjacency(&self) -> Vec<Vec<u32>> {
        let mut cols = vec![Vec::new(); self.cols];
        for (r, row) in self.adjacency.iter().enumerate() {
            for &c in row {
                cols[c as usize].push(r as u32);
            }
        }
        cols
    }

    pub fn transpose(&self) -> SparseBinaryMatrix {
        SparseBinaryMatrix { rows: self.cols, cols: self.rows, adjacency: self.column_adjacency() }
    }

    pub fn row_weights(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn column_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.cols];
        for row in &self.adjacency {
            for &c in row {
                w[c as usize] += 1;
            }
        }
        w
    }

    /// Row-major 0/1 matrix; refused above [`DENSE_COLUMN_CAP`] columns.
    pub fn to_dense(&self) -> Result<Vec<Vec<u8>>> {
        if self.cols > DENSE_COLUMN_CAP {
            return Err(Error::TooLarge(format!("{} columns exceed dense cap {DENSE_COLUMN_CAP}", self.cols)));
        }
        Ok(self
            .adjacency
            .iter()
            .map(|row| {
                let mut d = vec![0u8; self.cols];
                for &c in row {
                    d[c as usize] = 1;
                }
                d
            })
            .collect())
    }

    /// Syndrome of a hard-decision word.
    pub fn syndrome_is_zero(&self, bits: &[u8]) -> bool {
        self.adjacency.iter().all(|row| row.iter().fold(0u8, |a, &c| a ^ bits[c as usize]) == 0)
    }

    /// Writes the standard alist format (column-oriented block first).
    pub fn to_alist(&self) -> String {
        use std::fmt::Write;
        let cols = self.column_adjacency();
        let cw: Vec<usize> = cols.iter().map(Vec::len).collect();
        let rw = self.row_weights();
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.cols, self.rows);
        let _ = writeln!(s, "{} {}", cw.iter().max().unwrap_or(&0), rw.iter().max().unwrap_or(&0));
        let _ = writeln!(s, "{}", join(cw.iter()));
        let _ = writeln!(s, "{}", join(rw.iter()));
        for c in &cols {
            let _ = writeln!(s, "{}", join(c.iter().map(|r| r + 1)));
        }
        for r in &self.adjacency {
            let _ = writeln!(s, "{}", join(r.iter().map(|c| c + 1)));
        }
        s
    }

    /// Parses alist text. Zero padding entries are ignored.
    pub fn from_alist(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let mut next_nums = || -> Result<Vec<usize>> {
            let line = lines.next().ok_or_else(|| Error::Parse("truncated alist".into()))?;
            line.split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|e| Error::Parse(format!("alist token {t:?}: {e}"))))
                .collect()
        };
        let dims = next_nums()?;
        if dims.len() != 2 {
            return Err(Error::Parse("alist header needs two numbers".into()));
        }
        let (n, m) = (dims[0], dims[1]);
        next_nums()?;
        next_nums()?;
        next_nums()?;
        for _ in 0..n {
            next_nums()?;
        }
        let mut adjacency = Vec::with_capacity(m);
        for _ in 0..m {
            let mut row: Vec<u32> = next_nums()?.into_iter().filter(|&c| c > 0).map(|c| c as u32 - 1).collect();
            row.sort_unstable();
            adjacency.push(row);
        }
        Self::new(m, n, adjacency)
    }
}

fn join<T: std::fmt::Display>(it: impl Iterator<Item = T>) -> String {
    it.map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}
