use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Binomial coefficient as a float (exact for the sizes used here).
pub fn binom(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as f64
}

/// Number of cycle-6 candidates of the all-one base matrix.
pub fn cycle6_candidates(gamma: usize, kappa: usize) -> f64 {
    6.0 * binom(gamma, 3) * binom(kappa, 3)
}

/// Weights `(w1, w2, w3, w4)` of the four cycle-8 pattern families.
pub fn w_coeffs(gamma: usize, kappa: usize) -> Result<[f64; 4]> {
    if gamma < 3 || kappa < 4 {
        return Err(Error::InvalidParams(format!(
            "cycle-8 weights need gamma >= 3 and kappa >= 4, got ({gamma}, {kappa})"
        )));
    }
    let c = binom;
    let (g, k) = (gamma, kappa);
    let w1 = c(g, 2) * c(k, 2);
    let w2 = 3.0 * c(g, 2) * c(k, 3) + 3.0 * c(g, 3) * c(k, 2);
    let w3 = 18.0 * c(g, 3) * c(k, 3);
    let w4 = if g >= 4 {
        6.0 * c(g, 2) * c(k, 4)
            + 6.0 * c(g, 4) * c(k, 2)
            + 36.0 * c(g, 3) * c(k, 4)
            + 36.0 * c(g, 4) * c(k, 3)
            + 72.0 * c(g, 4) * c(k, 4)
    } else {
        6.0 * c(g, 2) * c(k, 4) + 36.0 * c(g, 3) * c(k, 4)
    };
    Ok([w1, w2, w3, w4])
}

/// Multiplicities `(Λ66, Λ68, Λ88)` of the dominant concatenation patterns.
pub fn lambda_coeffs(gamma: usize, kappa: usize) -> Result<[f64; 3]> {
    let c = binom;
    let k = kappa;
    let base = [36.0 * c(k, 4) * c(gamma, 3), 360.0 * c(k, 5) * c(gamma, 3), 5400.0 * c(k, 6) * c(gamma, 3)];
    match gamma {
        3 => Ok(base),
        4 => {
            let g4 = c(gamma, 4);
            Ok([
                base[0] + 288.0 * c(k, 4) * g4,
                base[1] + 1152.0 * c(k, 4) * g4 + 11520.0 * c(k, 5) * g4,
                base[2] + 864.0 * c(k, 4) * g4 + 17280.0 * c(k, 5) * g4 + 120960.0 * c(k, 6) * g4,
            ])
        }
        _ => Err(Error::Unsupported(format!("concatenation multiplicities are defined for gamma 3 or 4, got {gamma}"))),
    }
}

/// Relative weights of the 6-6, 6-8 and 8-8 terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConcatWeights {
    pub w66: f64,
    pub w68: f64,
    pub w88: f64,
}

impl Default for ConcatWeights {
    fn default() -> Self {
        ConcatWeights { w66: 1.0, w68: 1e-2, w88: 1e-4 }
    }
}
