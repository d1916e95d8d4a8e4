use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on the total mass of a probability matrix.
pub const MASS_TOL: f64 = 1e-12;

/// Joint distribution over (component, auxiliary matrix), `(m+1) × M`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl ProbabilityMatrix {
    /// Validated constructor: entries nonnegative, total mass one.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let p = Self::unchecked(rows)?;
        p.validate()?;
        Ok(p)
    }

    /// Rectangularity is the only check; used for intermediate iterates.
    pub fn unchecked(rows: Vec<Vec<f64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 || rows.iter().any(|x| x.len() != c) {
            return Err(Error::Dimension { expected: "non-empty rectangular matrix".into(), got: format!("{r} rows") });
        }
        Ok(ProbabilityMatrix { rows: r, cols: c, data: rows.concat() })
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols || rows == 0 || cols == 0 {
            return Err(Error::Dimension { expected: format!("{rows}x{cols}"), got: data.len().to_string() });
        }
        Ok(ProbabilityMatrix { rows, cols, data })
    }

    /// All mass in the first column, rows given by `pstar`.
    pub fn from_pstar(pstar: &[f64], aux: usize) -> Result<Self> {
        let mut d = vec![0.0; pstar.len() * aux];
        for (i, &v) in pstar.iter().enumerate() {
            d[i * aux] = v;
        }
        let p = Self::from_flat(pstar.len(), aux, d)?;
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(v) = self.data.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidParams(format!("probability entry {v} is negative or non-finite")));
        }
        let s: f64 = self.data.iter().sum();
        if (s - 1.0).abs() > MASS_TOL * 1e3_f64.max(self.data.len() as f64) {
            return Err(Error::InvalidParams(format!("probabilities sum to {s}, not 1")));
        }
        Ok(())
    }

    /// Number of components `m + 1`.
    pub fn rows(&self) -> usize {
        self.rows
    }
    /// Number of auxiliary matrices `M`.
    pub fn cols(&self) -> usize {
        self.cols
    }
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }
    /// Row-concatenated entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.cols).map(<[f64]>::to_vec).collect()
    }
    pub fn row_sums(&self) -> Vec<f64> {
        self.data.chunks(self.cols).map(|r| r.iter().sum()).collect()
    }
    pub fn total(&self) -> f64 {
        self.data.iter().sum()
    }
    /// Expected fraction of relocated circulants, `1 − Σ_i p_{i,0}`.
    pub fn md_density(&self) -> f64 {
        1.0 - (0..self.rows).map(|i| self.get(i, 0)).sum::<f64>()
    }
    /// Largest entrywise difference; shapes must agree.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
    /// Per-component relocation fraction `1 − p_{i,0} / Σ_j p_{i,j}`; `None` for empty rows.
    pub fn component_density(&self) -> Vec<Option<f64>> {
        (0..self.rows)
            .map(|i| {
                let s: f64 = self.row(i).iter().sum();
                (s > 0.0).then(|| 1.0 - self.get(i, 0) / s)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(ProbabilityMatrix::new(vec![vec![0.5, 0.5]]).is_ok());
        assert!(ProbabilityMatrix::new(vec![vec![0.6, 0.5]]).is_err());
        assert!(ProbabilityMatrix::new(vec![vec![1.1, -0.1]]).is_err());
        assert!(ProbabilityMatrix::new(vec![vec![0.5], vec![0.2, 0.3]]).is_err());
        let p = ProbabilityMatrix::from_pstar(&[0.25, 0.75], 3).unwrap();
        assert_eq!(p.row(1), &[0.75, 0.0, 0.0]);
        assert_eq!(p.md_density(), 0.0);
    }
}
