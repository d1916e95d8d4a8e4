use serde::{Deserialize, Serialize};

use super::params::CodeParams;
use crate::error::{Error, Result};

/// Dense γ×κ grid of small nonnegative integers, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BaseGrid {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl BaseGrid {
    pub fn new(rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension {
                expected: format!("{rows}x{cols} = {} entries", rows * cols),
                got: data.len().to_string(),
            });
        }
        Ok(BaseGrid { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        BaseGrid { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_rows<R: AsRef<[u32]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::Dimension {
                    expected: format!("{cols} entries in row {i}"),
                    got: r.len().to_string(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(BaseGrid { rows: rows.len(), cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }
    /// Row-concatenated entries.
    pub fn as_slice(&self) -> &[u32] {
        &self.data
    }
    pub fn max(&self) -> u32 {
        self.data.iter().copied().max().unwrap_or(0)
    }

    fn check_bound(&self, bound: u32) -> Result<()> {
        for (k, &v) in self.data.iter().enumerate() {
            if v >= bound {
                return Err(Error::OutOfRange { row: k / self.cols, col: k % self.cols, value: v, bound });
            }
        }
        Ok(())
    }

    fn check_shape(&self, p: &CodeParams) -> Result<()> {
        if self.rows != p.gamma || self.cols != p.kappa {
            return Err(Error::Dimension {
                expected: format!("{}x{}", p.gamma, p.kappa),
                got: format!("{}x{}", self.rows, self.cols),
            });
        }
        Ok(())
    }
}

macro_rules! grid_newtype {
    ($(#[$doc:meta])* $name:ident, $field:ident) => {
        $(#[$doc])*
        #[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
        pub struct $name {
            grid: BaseGrid,
            $field: u32,
        }

        impl $name {
            pub fn grid(&self) -> &BaseGrid {
                &self.grid
            }
            #[inline]
            pub fn get(&self, i: usize, j: usize) -> u32 {
                self.grid.get(i, j)
            }
            pub fn rows(&self) -> usize {
                self.grid.rows
            }
            pub fn cols(&self) -> usize {
                self.grid.cols
            }
            pub fn check_shape(&self, p: &CodeParams) -> Result<()> {
                self.grid.check_shape(p)
            }
        }
    };
}

grid_newtype!(
    /// Component index of every circulant, entries in `0..=m`.
    PartitionMatrix, m
);
grid_newtype!(
    /// Circulant power of every circulant, entries in `0..z`.
    LiftingMatrix, z
);
grid_newtype!(
    /// Auxiliary-matrix index of every circulant, entries in `0..M`.
    RelocationMatrix, aux
);

impl PartitionMatrix {
    pub fn new(grid: BaseGrid, m: usize) -> Result<Self> {
        grid.check_bound(m as u32 + 1)?;
        Ok(PartitionMatrix { grid, m: m as u32 })
    }
    pub fn memory(&self) -> usize {
        self.m as usize
    }
}

impl LiftingMatrix {
    pub fn new(grid: BaseGrid, z: usize) -> Result<Self> {
        grid.check_bound(z as u32)?;
        Ok(LiftingMatrix { grid, z: z as u32 })
    }
    pub fn zeros(rows: usize, cols: usize, z: usize) -> Self {
        LiftingMatrix { grid: BaseGrid::zeros(rows, cols), z: z as u32 }
    }
    pub fn circulant_size(&self) -> usize {
        self.z as usize
    }
}

impl RelocationMatrix {
    /// `bound` is `M`, or the depth when one is set.
    pub fn new(grid: BaseGrid, bound: usize) -> Result<Self> {
        grid.check_bound(bound as u32)?;
        Ok(RelocationMatrix { grid, aux: bound as u32 })
    }
    pub fn zeros(rows: usize, cols: usize, aux: usize) -> Self {
        RelocationMatrix { grid: BaseGrid::zeros(rows, cols), aux: aux as u32 }
    }
    pub fn bound(&self) -> usize {
        self.aux as usize
    }
    /// Builds from a row-concatenated vector.
    pub fn from_vec(rows: usize, cols: usize, x: &[u32], bound: usize) -> Result<Self> {
        Self::new(BaseGrid::new(rows, cols, x.to_vec())?, bound)
    }
}

/// Partitioning, lifting and relocation matrices of one finite-length code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignTriple {
    pub partition: PartitionMatrix,
    pub lifting: LiftingMatrix,
    pub relocation: RelocationMatrix,
}

impl DesignTriple {
    pub fn new(partition: PartitionMatrix, lifting: LiftingMatrix, relocation: RelocationMatrix) -> Self {
        DesignTriple { partition, lifting, relocation }
    }

    /// Checks shapes and ranges against `p`.
    pub fn validate(&self, p: &CodeParams) -> Result<()> {
        self.partition.check_shape(p)?;
        self.lifting.check_shape(p)?;
        self.relocation.check_shape(p)?;
        self.partition.grid.check_bound(p.m as u32 + 1)?;
        self.lifting.grid.check_bound(p.z as u32)?;
        self.relocation.grid.check_bound(p.relocation_bound() as u32)?;
        Ok(())
    }
}

/// Fraction of circulants assigned to each component.
pub fn edge_distribution(k: &PartitionMatrix, m: usize) -> Result<Vec<f64>> {
    if k.memory() > m {
        return Err(Error::Dimension { expected: format!("m >= {}", k.memory()), got: m.to_string() });
    }
    let mut counts = vec![0usize; m + 1];
    for &v in k.grid.as_slice() {
        counts[v as usize] += 1;
    }
    let n = k.grid.as_slice().len() as f64;
    Ok(counts.into_iter().map(|c| c as f64 / n).collect())
}

/// Relocation density overall and per component, as percentages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MdDensity {
    pub total: f64,
    /// `None` for components with no circulants.
    pub per_component: Vec<Option<f64>>,
}

pub fn md_density(mr: &RelocationMatrix, k: Option<&PartitionMatrix>) -> Result<MdDensity> {
    let xs = mr.grid.as_slice();
    let moved = xs.iter().filter(|&&v| v != 0).count();
    let total = 100.0 * moved as f64 / xs.len() as f64;
    let per_component = match k {
        None => Vec::new(),
        Some(k) => {
            if k.rows() != mr.rows() || k.cols() != mr.cols() {
                return Err(Error::Dimension {
                    expected: format!("{}x{}", mr.rows(), mr.cols()),
                    got: format!("{}x{}", k.rows(), k.cols()),
                });
            }
            let mut pop = vec![0usize; k.memory() + 1];
            let mut hit = vec![0usize; k.memory() + 1];
            for (&c, &r) in k.grid.as_slice().iter().zip(xs) {
                pop[c as usize] += 1;
                if r != 0 {
                    hit[c as usize] += 1;
                }
            }
            pop.iter().zip(&hit).map(|(&p, &h)| (p > 0).then(|| 100.0 * h as f64 / p as f64)).collect()
        }
    };
    Ok(MdDensity { total, per_component })
}
