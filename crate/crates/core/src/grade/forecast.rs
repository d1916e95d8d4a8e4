//! Finite-length cycle-count forecasts from protograph expectations.

use serde::{Deserialize, Serialize};

use crate::code_model::CodeParams;
use crate::error::{Error, Result};

/// Estimate with lower and upper bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Forecast {
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
    /// False when the coupling length is too short for the estimate's derivation.
    pub span_ok: bool,
}

/// Forecast for cycles of length `len` (6 or 8) given the expected number `n`
/// of active candidates in the MD protograph.
///
/// A candidate whose replica span is `s` fits in `L − s + 1` positions of each
/// of the `M` copies. For cycle-6 the span is uniform on `1..=m+1` on average,
/// which gives `(2L − m) / 2`; for cycle-8 the typical span is `m + 1`.
pub fn forecast(n: f64, len: usize, params: &CodeParams) -> Result<Forecast> {
    let (l, m, aux) = (params.coupling as f64, params.m as f64, params.aux as f64);
    let (factor, s_max, needed) = match len {
        6 => ((2.0 * l - m) / 2.0, m + 1.0, params.m + 1),
        8 => (l - m, 2.0 * m + 1.0, 2 * params.m + 1),
        _ => return Err(Error::Unsupported(format!("forecast is defined for cycle lengths 6 and 8, got {len}"))),
    };
    let span_ok = params.coupling > needed;
    if !span_ok {
        log::warn!("coupling length {} too short for the cycle-{len} forecast (need > {needed})", params.coupling);
    }
    let lower = n * (l - s_max + 1.0).max(0.0) * aux;
    let upper = n * l * aux;
    let estimate = (n * factor * aux).clamp(lower, upper);
    Ok(Forecast { estimate, lower, upper, span_ok })
}
