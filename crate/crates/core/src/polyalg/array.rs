use crate::error::{Error, Result};

/// Dense coefficients of a multivariate Laurent polynomial.
///
/// Dimension `d` stores exponents `offsets[d] .. offsets[d] + shape[d]`;
/// values are row-major with the last dimension fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientArray {
    offsets: Vec<i64>,
    shape: Vec<usize>,
    values: Vec<f64>,
}

impl CoefficientArray {
    pub fn new(offsets: Vec<i64>, shape: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        if offsets.len() != shape.len() {
            return Err(Error::Dimension {
                expected: format!("{} offsets", shape.len()),
                got: offsets.len().to_string(),
            });
        }
        let n: usize = shape.iter().product();
        if values.len() != n || shape.contains(&0) {
            return Err(Error::Dimension {
                expected: format!("{n} values, nonzero extents"),
                got: values.len().to_string(),
            });
        }
        Ok(CoefficientArray { offsets, shape, values })
    }

    pub fn zeros(offsets: Vec<i64>, shape: Vec<usize>) -> Self {
        let n = shape.iter().product();
        CoefficientArray { offsets, shape, values: vec![0.0; n] }
    }

    /// The constant polynomial `c` in `dims` variables.
    pub fn constant(dims: usize, c: f64) -> Self {
        CoefficientArray { offsets: vec![0; dims], shape: vec![1; dims], values: vec![c] }
    }

    pub fn dims(&self) -> usize {
        self.shape.len()
    }
    pub fn offsets(&self) -> &[i64] {
        &self.offsets
    }
    pub fn shape(&self) -> &[usize] {
        &self.shape
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }
    pub fn len(&self) -> usize {
        self.values.len()
    }
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Smallest and largest stored exponent of dimension `d`.
    pub fn range(&self, d: usize) -> (i64, i64) {
        (self.offsets[d], self.offsets[d] + self.shape[d] as i64 - 1)
    }

    pub(crate) fn strides(&self) -> Vec<usize> {
        strides_of(&self.shape)
    }

    fn flat(&self, exps: &[i64]) -> Option<usize> {
        let mut idx = 0usize;
        for d in 0..self.dims() {
            let k = exps[d] - self.offsets[d];
            if k < 0 || k as usize >= self.shape[d] {
                return None;
            }
            idx = idx * self.shape[d] + k as usize;
        }
        Some(idx)
    }

    /// Coefficient of the monomial with exponents `exps`; zero outside the stored range.
    pub fn get(&self, exps: &[i64]) -> f64 {
        assert_eq!(exps.len(), self.dims(), "exponent tuple has the wrong dimension");
        self.flat(exps).map_or(0.0, |i| self.values[i])
    }

    pub fn set(&mut self, exps: &[i64], v: f64) -> Result<()> {
        let i = self.flat(exps).ok_or_else(|| Error::Dimension {
            expected: "exponent in stored range".into(),
            got: format!("{exps:?}"),
        })?;
        self.values[i] = v;
        Ok(())
    }

    /// Exponent tuple of flat index `i`.
    pub fn exponents_of(&self, mut i: usize) -> Vec<i64> {
        let mut e = vec![0i64; self.dims()];
        for d in (0..self.dims()).rev() {
            e[d] = (i % self.shape[d]) as i64 + self.offsets[d];
            i /= self.shape[d];
        }
        e
    }

    /// Visits every stored coefficient with its exponent tuple.
    pub fn for_each(&self, mut f: impl FnMut(&[i64], f64)) {
        let n = self.dims();
        let mut e: Vec<i64> = self.offsets.clone();
        for &v in &self.values {
            f(&e, v);
            for d in (0..n).rev() {
                e[d] += 1;
                if e[d] < self.offsets[d] + self.shape[d] as i64 {
                    break;
                }
                e[d] = self.offsets[d];
            }
        }
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn scale(mut self, c: f64) -> Self {
        self.values.iter_mut().for_each(|v| *v *= c);
        self
    }

    /// `self + c · other` over the union of both exponent ranges.
    pub fn add_scaled(&self, other: &Self, c: f64) -> Result<Self> {
        if self.dims() != other.dims() {
            return Err(Error::Dimension {
                expected: format!("{} dimensions", self.dims()),
                got: other.dims().to_string(),
            });
        }
        let (offsets, shape): (Vec<i64>, Vec<usize>) = (0..self.dims())
            .map(|d| {
                let (a, b) = (self.range(d), other.range(d));
                let lo = a.0.min(b.0);
                (lo, (a.1.max(b.1) - lo + 1) as usize)
            })
            .unzip();
        let mut out = CoefficientArray::zeros(offsets, shape);
        self.for_each(|e, v| {
            let i = out.flat(e).expect("inside union");
            out.values[i] += v;
        });
        other.for_each(|e, v| {
            let i = out.flat(e).expect("inside union");
            out.values[i] += c * v;
        });
        Ok(out)
    }

    /// The polynomial with every exponent negated.
    pub fn mirror(&self) -> Self {
        let offsets = (0..self.dims()).map(|d| -self.range(d).1).collect();
        let mut values = self.values.clone();
        values.reverse();
        CoefficientArray { offsets, shape: self.shape.clone(), values }
    }

    /// Largest absolute coefficient difference, treating missing entries as zero.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut m: f64 = 0.0;
        self.for_each(|e, v| m = m.max((v - other.get(e)).abs()));
        other.for_each(|e, v| m = m.max((v - self.get(e)).abs()));
        m
    }
}

pub(crate) fn strides_of(shape: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; shape.len()];
    for d in (0..shape.len().saturating_sub(1)).rev() {
        s[d] = s[d + 1] * shape[d + 1];
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup_and_mirror() {
        let a = CoefficientArray::new(vec![-1, 0], vec![2, 3], vec![1., 2., 3., 4., 5., 6.]).unwrap();
        assert_eq!(a.get(&[-1, 2]), 3.0);
        assert_eq!(a.get(&[0, 0]), 4.0);
        assert_eq!(a.get(&[5, 0]), 0.0);
        let m = a.mirror();
        assert_eq!(m.range(0), (0, 1));
        assert_eq!(m.range(1), (-2, 0));
        a.for_each(|e, v| assert_eq!(m.get(&[-e[0], -e[1]]), v));
        assert_eq!(a.exponents_of(4), vec![0, 1]);
        assert!(CoefficientArray::new(vec![0], vec![2], vec![1.0]).is_err());
    }
}
