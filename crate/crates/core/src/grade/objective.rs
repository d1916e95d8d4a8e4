//! Expected active-candidate counts and their gradients.
//!
//! Every objective is a weighted sum of selected coefficients of products
//! `Π_t f(X^{s_t}, Y^{s_t})^{n_t}`. Gradients use
//! `∂/∂p_{ij} f(X^s, Y^s) = X^{si} Y^{sj}`, so each factor contributes
//! `n_t · Σ_e W[e] · Q_t[e − s_t·(i, j)]` where `Q_t` is the product with that
//! factor's exponent lowered by one and `W` is the selection weight.

use std::collections::HashMap;

use super::weights::{cycle6_candidates, lambda_coeffs, ConcatWeights};
use crate::error::{Error, Result};
use crate::polyalg::{conv, coupling_array, CoefficientArray, PowerSpec, ProbabilityMatrix};

/// A product of powers `(s, n)` meaning `f(X^s, Y^s)^n`.
type Factors = [(i64, u32)];

struct Engine<'a> {
    p: &'a ProbabilityMatrix,
    base: HashMap<i64, CoefficientArray>,
    powers: HashMap<(i64, u32), CoefficientArray>,
}

impl<'a> Engine<'a> {
    fn new(p: &'a ProbabilityMatrix) -> Self {
        Engine { p, base: HashMap::new(), powers: HashMap::new() }
    }

    fn pow(&mut self, s: i64, n: u32) -> Result<CoefficientArray> {
        if let Some(a) = self.powers.get(&(s, n)) {
            return Ok(a.clone());
        }
        let a = match n {
            0 => CoefficientArray::constant(2, 1.0),
            1 => {
                if !self.base.contains_key(&s) {
                    self.base.insert(s, coupling_array(self.p, PowerSpec::Single(s))?);
                }
                self.base[&s].clone()
            }
            _ => {
                let h = self.pow(s, n / 2)?;
                let sq = conv(&h, &h)?;
                if n % 2 == 1 {
                    conv(&sq, &self.pow(s, 1)?)?
                } else {
                    sq
                }
            }
        };
        self.powers.insert((s, n), a.clone());
        Ok(a)
    }

    fn product(&mut self, factors: &Factors) -> Result<CoefficientArray> {
        let mut acc = CoefficientArray::constant(2, 1.0);
        for &(s, n) in factors {
            if n > 0 {
                acc = conv(&acc, &self.pow(s, n)?)?;
            }
        }
        Ok(acc)
    }

    /// Gradient of `Σ_e W[e] · product[e]` for a sparse weight list.
    fn grad(&mut self, factors: &Factors, weight: &[([i64; 2], f64)], out: &mut [f64]) -> Result<()> {
        let (rows, cols) = (self.p.rows(), self.p.cols());
        for (t, &(s, n)) in factors.iter().enumerate() {
            if n == 0 {
                continue;
            }
            let mut reduced = factors.to_vec();
            reduced[t].1 -= 1;
            let q = self.product(&reduced)?;
            for i in 0..rows {
                for j in 0..cols {
                    let (di, dj) = (s * i as i64, s * j as i64);
                    let mut acc = 0.0;
                    for &(e, w) in weight {
                        acc += w * q.get(&[e[0] - di, e[1] - dj]);
                    }
                    out[i * cols + j] += n as f64 * acc;
                }
            }
        }
        Ok(())
    }
}

/// Selection `X = 0`, `Y ≡ 0 (mod M)` over the support of `g`.
fn zero_mod_m(g: &CoefficientArray, aux: usize) -> Vec<([i64; 2], f64)> {
    let (lo, hi) = g.range(1);
    (lo..=hi).filter(|y| y.rem_euclid(aux as i64) == 0).map(|y| ([0, y], 1.0)).collect()
}

fn select_sum(g: &CoefficientArray, sel: &[([i64; 2], f64)]) -> f64 {
    sel.iter().map(|(e, w)| w * g.get(e)).sum()
}

/// One `coef · Σ_{M|b} [Π factors]_{0,b}` term.
fn term(e: &mut Engine, factors: &Factors, coef: f64, grad: Option<&mut [f64]>) -> Result<f64> {
    let g = e.product(factors)?;
    let sel = zero_mod_m(&g, e.p.cols());
    let v = coef * select_sum(&g, &sel);
    if let Some(out) = grad {
        let w: Vec<_> = sel.into_iter().map(|(x, w)| (x, w * coef)).collect();
        e.grad(factors, &w, out)?;
    }
    Ok(v)
}

/// Probability that a cycle-6 candidate stays active: `Σ_{M|b}[f³ f⁻³]_{0,b}`.
pub fn p6(p: &ProbabilityMatrix) -> Result<f64> {
    term(&mut Engine::new(p), &[(1, 3), (-1, 3)], 1.0, None)
}

/// Expected number of active cycle-6 candidates in the MD protograph.
pub fn n6(p: &ProbabilityMatrix, gamma: usize, kappa: usize) -> Result<f64> {
    Ok(cycle6_candidates(gamma, kappa) * p6(p)?)
}

/// Gradient of [`n6`], row-concatenated.
pub fn grad_n6(p: &ProbabilityMatrix, gamma: usize, kappa: usize) -> Result<Vec<f64>> {
    let mut g = vec![0.0; p.as_slice().len()];
    term(&mut Engine::new(p), &[(1, 3), (-1, 3)], cycle6_candidates(gamma, kappa), Some(&mut g))?;
    Ok(g)
}

const CYCLE8_TERMS: [&Factors; 4] =
    [&[(2, 2), (-2, 2)], &[(2, 1), (-2, 1), (1, 2), (-1, 2)], &[(2, 1), (1, 2), (-1, 4)], &[(1, 4), (-1, 4)]];

fn n8_impl(p: &ProbabilityMatrix, w: &[f64; 4], mut grad: Option<&mut [f64]>) -> Result<f64> {
    let mut e = Engine::new(p);
    let mut v = 0.0;
    for (factors, &wk) in CYCLE8_TERMS.iter().zip(w) {
        if wk != 0.0 {
            v += term(&mut e, factors, wk, grad.as_deref_mut())?;
        }
    }
    Ok(v)
}

/// Expected number of active cycle-8 candidates, weights from [`super::w_coeffs`].
pub fn n8(p: &ProbabilityMatrix, w: &[f64; 4]) -> Result<f64> {
    n8_impl(p, w, None)
}

pub fn grad_n8(p: &ProbabilityMatrix, w: &[f64; 4]) -> Result<Vec<f64>> {
    let mut g = vec![0.0; p.as_slice().len()];
    n8_impl(p, w, Some(&mut g))?;
    Ok(g)
}

/// `Σ_{y ≡ r (mod M)} a[x, y]` for every stored `x`, as a dense `(x, r)` table.
struct Residues {
    x0: i64,
    aux: usize,
    data: Vec<f64>,
}

impl Residues {
    fn new(a: &CoefficientArray, aux: usize) -> Self {
        let (x0, x1) = a.range(0);
        let mut data = vec![0.0; (x1 - x0 + 1) as usize * aux];
        a.for_each(|e, v| data[(e[0] - x0) as usize * aux + e[1].rem_euclid(aux as i64) as usize] += v);
        Residues { x0, aux, data }
    }
    fn get(&self, x: i64, y: i64) -> f64 {
        let k = x - self.x0;
        if k < 0 || k as usize * self.aux >= self.data.len() {
            return 0.0;
        }
        self.data[k as usize * self.aux + y.rem_euclid(self.aux as i64) as usize]
    }
}

/// `Σ_{M|b1, M|b2} [f(X1X2,Y1Y2) f(X1⁻¹X2⁻¹,Y1⁻¹Y2⁻¹) f^{k−1}f^{−(k−1)}(X1,Y1) f^{l−1}f^{−(l−1)}(X2,Y2)]_{0,0,b1,b2}`.
///
/// The shared factor depends on `(X1X2, Y1Y2)` only, so with
/// `D = f f⁻`, `A = f^{k−1} f^{−(k−1)}` and `B` likewise the sum collapses to
/// `Σ_{u,w} D[u,w] · Ã(−u, −w) · B̃(−u, −w)` with `Ã(x, r) = Σ_{y≡r} A[x, y]`.
fn concat_term(e: &mut Engine, k: u32, l: u32, coef: f64, grad: Option<&mut [f64]>) -> Result<f64> {
    let aux = e.p.cols();
    let fd: [(i64, u32); 2] = [(1, 1), (-1, 1)];
    let fa: [(i64, u32); 2] = [(1, k - 1), (-1, k - 1)];
    let fb: [(i64, u32); 2] = [(1, l - 1), (-1, l - 1)];
    let d = e.product(&fd)?;
    let a = e.product(&fa)?;
    let b = e.product(&fb)?;
    let (ra, rb, rd) = (Residues::new(&a, aux), Residues::new(&b, aux), Residues::new(&d, aux));
    let mut v = 0.0;
    let mut wd = Vec::with_capacity(d.len());
    d.for_each(|x, dv| {
        let s = ra.get(-x[0], -x[1]) * rb.get(-x[0], -x[1]);
        v += dv * s;
        if s != 0.0 {
            wd.push(([x[0], x[1]], coef * s));
        }
    });
    if let Some(out) = grad {
        e.grad(&fd, &wd, out)?;
        for (fx, arr, other) in [(&fa, &a, &rb), (&fb, &b, &ra)] {
            let mut w = Vec::with_capacity(arr.len());
            arr.for_each(|x, _| {
                let s = rd.get(-x[0], -x[1]) * other.get(x[0], x[1]);
                if s != 0.0 {
                    w.push(([x[0], x[1]], coef * s));
                }
            });
            e.grad(fx, &w, out)?;
        }
    }
    Ok(coef * v)
}

const CONCAT_PAIRS: [(u32, u32); 3] = [(3, 3), (3, 4), (4, 4)];

fn concat_impl(
    p: &ProbabilityMatrix,
    w: &ConcatWeights,
    gamma: usize,
    kappa: usize,
    mut grad: Option<&mut [f64]>,
) -> Result<f64> {
    let lambda = lambda_coeffs(gamma, kappa)?;
    let weights = [w.w66, w.w68, w.w88];
    let mut e = Engine::new(p);
    let mut v = 0.0;
    for (t, &(k, l)) in CONCAT_PAIRS.iter().enumerate() {
        let coef = weights[t] * lambda[t];
        if coef != 0.0 {
            v += concat_term(&mut e, k, l, coef, grad.as_deref_mut())?;
        }
    }
    Ok(v)
}

/// Weighted expected number of active dominant 6-6, 6-8 and 8-8 concatenations.
pub fn n_concat(p: &ProbabilityMatrix, w: &ConcatWeights, gamma: usize, kappa: usize) -> Result<f64> {
    concat_impl(p, w, gamma, kappa, None)
}

pub fn grad_n_concat(p: &ProbabilityMatrix, w: &ConcatWeights, gamma: usize, kappa: usize) -> Result<Vec<f64>> {
    let mut g = vec![0.0; p.as_slice().len()];
    concat_impl(p, w, gamma, kappa, Some(&mut g))?;
    Ok(g)
}

/// Unweighted `Σ_{M|b1,M|b2}[…]_{0,0,b1,b2}` for one `(2k, 2l)` configuration,
/// evaluated the long way on four-variable arrays. Reference for tests.
pub fn concat_probability_4d(p: &ProbabilityMatrix, k: u32, l: u32) -> Result<f64> {
    use crate::polyalg::{conv_all, power, sum_mod_m};
    if k < 2 || l < 2 {
        return Err(Error::InvalidParams("cycle half-lengths must be at least 2".into()));
    }
    let f = |i, j| coupling_array(p, PowerSpec::Pair(i, j));
    let parts = [
        f(1, 1)?,
        f(-1, -1)?,
        power(&f(1, 0)?, k - 1)?,
        power(&f(-1, 0)?, k - 1)?,
        power(&f(0, 1)?, l - 1)?,
        power(&f(0, -1)?, l - 1)?,
    ];
    let refs: Vec<&CoefficientArray> = parts.iter().collect();
    let g = conv_all(&refs)?;
    sum_mod_m(&g, &[0, 0], p.cols(), &[2, 3])
}

/// The collapsed two-variable evaluation of the same quantity.
pub fn concat_probability(p: &ProbabilityMatrix, k: u32, l: u32) -> Result<f64> {
    if k < 2 || l < 2 {
        return Err(Error::InvalidParams("cycle half-lengths must be at least 2".into()));
    }
    concat_term(&mut Engine::new(p), k, l, 1.0, None)
}
