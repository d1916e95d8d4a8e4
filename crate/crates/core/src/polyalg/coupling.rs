use super::array::CoefficientArray;
use super::probability::ProbabilityMatrix;
use crate::error::{Error, Result};

/// Which monomial substitution of the coupling polynomial to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PowerSpec {
    /// `f(X^i, Y^i)` over `(X, Y)`.
    Single(i64),
    /// `f(X1^i X2^j, Y1^i Y2^j)` over `(X1, X2, Y1, Y2)`.
    Pair(i64, i64),
}

fn axis(n: usize, power: i64) -> (i64, usize) {
    let span = (n as i64 - 1) * power;
    (span.min(0), (n as i64 - 1) as usize * power.unsigned_abs() as usize + 1)
}

/// Coefficient array of the coupling polynomial `f(X, Y) = Σ p_{i,j} X^i Y^j`
/// under the substitution `spec`.
pub fn coupling_array(p: &ProbabilityMatrix, spec: PowerSpec) -> Result<CoefficientArray> {
    let (rows, cols) = (p.rows(), p.cols());
    match spec {
        PowerSpec::Single(i) => {
            if i == 0 {
                return Err(Error::InvalidParams("power 0 collapses every dimension".into()));
            }
            let (ox, sx) = axis(rows, i);
            let (oy, sy) = axis(cols, i);
            let mut a = CoefficientArray::zeros(vec![ox, oy], vec![sx, sy]);
            for r in 0..rows {
                for c in 0..cols {
                    a.set(&[i * r as i64, i * c as i64], p.get(r, c))?;
                }
            }
            Ok(a)
        }
        PowerSpec::Pair(i, j) => {
            if i == 0 && j == 0 {
                return Err(Error::InvalidParams("powers (0, 0) collapse every dimension".into()));
            }
            let (o1, s1) = axis(rows, i);
            let (o2, s2) = axis(rows, j);
            let (o3, s3) = axis(cols, i);
            let (o4, s4) = axis(cols, j);
            let mut a = CoefficientArray::zeros(vec![o1, o2, o3, o4], vec![s1, s2, s3, s4]);
            for r in 0..rows {
                for c in 0..cols {
                    let (r, c) = (r as i64, c as i64);
                    let e = [i * r, j * r, i * c, j * c];
                    let v = a.get(&e) + p.get(r as usize, c as usize);
                    a.set(&e, v)?;
                }
            }
            Ok(a)
        }
    }
}

/// Sum of the coefficients whose non-`y_dims` exponents equal `x_exponents`
/// and whose `y_dims` exponents are all divisible by `aux`.
pub fn sum_mod_m(g: &CoefficientArray, x_exponents: &[i64], aux: usize, y_dims: &[usize]) -> Result<f64> {
    let n = g.dims();
    if y_dims.iter().any(|&d| d >= n) || x_exponents.len() + y_dims.len() != n {
        return Err(Error::Dimension {
            expected: format!("{} x exponents for {n} dimensions", n - y_dims.len().min(n)),
            got: x_exponents.len().to_string(),
        });
    }
    let aux = aux as i64;
    let mut s = 0.0;
    g.for_each(|e, v| {
        let mut xi = 0;
        for d in 0..n {
            if y_dims.contains(&d) {
                if e[d].rem_euclid(aux) != 0 {
                    return;
                }
            } else {
                if e[d] != x_exponents[xi] {
                    return;
                }
                xi += 1;
            }
        }
        s += v;
    });
    Ok(s)
}
