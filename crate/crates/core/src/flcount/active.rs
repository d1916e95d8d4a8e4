use crate::code_model::{LiftingMatrix, PartitionMatrix, RelocationMatrix};
use crate::error::{Error, Result};

/// Closed alternating walk over base-matrix entries
/// `(i1,j1), (i1,j2), (i2,j2), (i2,j3), …, (ig,jg), (ig,j1)`.
///
/// Even-indexed entries carry sign `+1`, odd-indexed entries `−1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycleCandidate {
    entries: Vec<(usize, usize)>,
}

impl CycleCandidate {
    /// Builds the candidate visiting rows `rows[k]` and columns `cols[k]`.
    pub fn from_rows_cols(rows: &[usize], cols: &[usize]) -> Result<Self> {
        let g = rows.len();
        if g < 2 || cols.len() != g {
            return Err(Error::InvalidParams(format!("need g >= 2 rows and columns, got {} and {}", g, cols.len())));
        }
        let mut entries = Vec::with_capacity(2 * g);
        for k in 0..g {
            entries.push((rows[k], cols[k]));
            entries.push((rows[k], cols[(k + 1) % g]));
        }
        Ok(CycleCandidate { entries })
    }

    /// Accepts an explicit entry list and checks the alternating structure.
    pub fn from_entries(entries: Vec<(usize, usize)>) -> Result<Self> {
        let n = entries.len();
        if n < 4 || !n.is_multiple_of(2) {
            return Err(Error::InvalidParams(format!("walk length {n} must be even and at least 4")));
        }
        for k in 0..n {
            let (a, b) = (entries[k], entries[(k + 1) % n]);
            let ok = if k % 2 == 0 { a.0 == b.0 } else { a.1 == b.1 };
            if !ok {
                return Err(Error::InvalidParams(format!("entries {k} and {} do not alternate", (k + 1) % n)));
            }
        }
        Ok(CycleCandidate { entries })
    }

    pub fn entries(&self) -> &[(usize, usize)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Alternating sum of `value(i, j)` along the walk.
    pub fn alternating_sum(&self, value: impl Fn(usize, usize) -> i64) -> i64 {
        self.entries.iter().enumerate().map(|(k, &(i, j))| if k % 2 == 0 { value(i, j) } else { -value(i, j) }).sum()
    }
}

/// Survives partitioning iff the alternating component sum is zero.
pub fn partition_active(c: &CycleCandidate, k: &PartitionMatrix) -> bool {
    c.alternating_sum(|i, j| k.get(i, j) as i64) == 0
}

/// Survives relocation iff the alternating relocation sum is divisible by `aux`.
pub fn relocation_active(c: &CycleCandidate, mr: &RelocationMatrix, aux: usize) -> bool {
    c.alternating_sum(|i, j| mr.get(i, j) as i64).rem_euclid(aux as i64) == 0
}

/// A closed walk survives lifting iff its alternating power sum is divisible by `z`.
/// Relocation leaves powers untouched, so replica and copy offsets do not enter.
pub fn lifting_survives(c: &CycleCandidate, lf: &LiftingMatrix, z: usize) -> bool {
    c.alternating_sum(|i, j| lf.get(i, j) as i64).rem_euclid(z as i64) == 0
}
