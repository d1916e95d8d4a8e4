//! Projection of an iterate back onto the row-sum constraints.

use crate::error::{Error, Result};
use crate::polyalg::ProbabilityMatrix;

/// Forces every row of `p` to be nonnegative and sum to `pstar[i]`.
pub fn force(p: &ProbabilityMatrix, pstar: &[f64]) -> Result<ProbabilityMatrix> {
    force_within(p, pstar, p.cols())
}

/// As [`force`], with columns `>= width` held at zero.
pub fn force_within(p: &ProbabilityMatrix, pstar: &[f64], width: usize) -> Result<ProbabilityMatrix> {
    if pstar.len() != p.rows() {
        return Err(Error::Dimension { expected: format!("{} row targets", p.rows()), got: pstar.len().to_string() });
    }
    if width == 0 || width > p.cols() {
        return Err(Error::InvalidParams(format!("active width {width} outside 1..={}", p.cols())));
    }
    if let Some(v) = pstar.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        return Err(Error::InvalidParams(format!("row target {v} is negative or non-finite")));
    }
    let cols = p.cols();
    let mut out = p.as_slice().to_vec();
    for (i, &target) in pstar.iter().enumerate() {
        let row = &mut out[i * cols..(i + 1) * cols];
        row[width..].iter_mut().for_each(|v| *v = 0.0);
        let live = &mut row[..width];
        let shift = (target - live.iter().sum::<f64>()) / width as f64;
        for v in live.iter_mut() {
            *v = (*v + shift).max(0.0);
        }
        let s: f64 = live.iter().sum();
        if s > 0.0 {
            live.iter_mut().for_each(|v| *v *= target / s);
        } else {
            live.iter_mut().for_each(|v| *v = target / width as f64);
        }
    }
    ProbabilityMatrix::from_flat(p.rows(), cols, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: Vec<Vec<f64>>) -> ProbabilityMatrix {
        ProbabilityMatrix::unchecked(rows).unwrap()
    }

    #[test]
    fn hand_traced() {
        let out = force(&m(vec![vec![0.6, -0.1], vec![0.2, 0.3]]), &[0.5, 0.5]).unwrap();
        assert_eq!(out.to_rows(), vec![vec![0.5, 0.0], vec![0.2, 0.3]]);
    }

    #[test]
    fn feasible_is_fixed() {
        let p = m(vec![vec![0.1, 0.2, 0.1], vec![0.3, 0.0, 0.3]]);
        let out = force(&p, &[0.4, 0.6]).unwrap();
        assert!(p.max_abs_diff(&out) < 1e-15);
    }

    #[test]
    fn degenerate_row() {
        let out = force(&m(vec![vec![0.0, 0.0], vec![-1.0, -2.0]]), &[0.4, 0.6]).unwrap();
        assert_eq!(out.row(0), &[0.2, 0.2]);
        assert!((out.row(1).iter().sum::<f64>() - 0.6).abs() < 1e-15);
    }

    #[test]
    fn width_limit() {
        let out = force_within(&m(vec![vec![0.2, 0.3, 0.5]]), &[1.0], 2).unwrap();
        assert_eq!(out.row(0)[2], 0.0);
        assert!((out.row(0).iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }
}
