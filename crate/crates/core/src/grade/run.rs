//! The MD-GRADE descent loop.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::force::force_within;
use super::forecast::{forecast, Forecast};
use super::objective::{grad_n6, grad_n8, grad_n_concat, n6, n8, n_concat};
use super::weights::{w_coeffs, ConcatWeights};
use crate::code_model::CodeParams;
use crate::error::{Error, Result};
use crate::polyalg::ProbabilityMatrix;

/// What the descent minimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GradeTarget {
    Cycle6,
    Cycle8,
    Concat,
}

impl fmt::Display for GradeTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GradeTarget::Cycle6 => "cycle6",
            GradeTarget::Cycle8 => "cycle8",
            GradeTarget::Concat => "concat",
        })
    }
}

impl FromStr for GradeTarget {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cycle6" => Ok(GradeTarget::Cycle6),
            "cycle8" => Ok(GradeTarget::Cycle8),
            "concat" => Ok(GradeTarget::Concat),
            _ => Err(Error::Parse(format!("unknown target '{s}' (expected cycle6, cycle8 or concat)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradeConfig {
    pub target: GradeTarget,
    pub tmax: f64,
    /// Absolute threshold on the objective change; `None` means `1e-8` times the initial objective.
    pub epsilon: Option<f64>,
    pub alpha: f64,
    pub max_iters: usize,
    pub weights: ConcatWeights,
    /// Drop the first cycle-8 family; `None` drops it exactly when `z` is prime.
    pub zero_w1: Option<bool>,
}

impl Default for GradeConfig {
    fn default() -> Self {
        GradeConfig {
            target: GradeTarget::Cycle6,
            tmax: 0.35,
            epsilon: None,
            alpha: 0.02,
            max_iters: 5000,
            weights: ConcatWeights::default(),
            zero_w1: None,
        }
    }
}

impl GradeConfig {
    pub fn for_target(target: GradeTarget) -> Self {
        GradeConfig { target, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidParams(format!("alpha must be positive, got {}", self.alpha)));
        }
        if let Some(e) = self.epsilon {
            if e.is_nan() || e <= 0.0 {
                return Err(Error::InvalidParams(format!("epsilon must be positive, got {e}")));
            }
        }
        if !(0.0..=1.0).contains(&self.tmax) {
            return Err(Error::InvalidParams(format!("tmax must lie in [0, 1], got {}", self.tmax)));
        }
        Ok(())
    }
}

pub(crate) fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// A fully specified objective: target plus the coefficients it needs.
#[derive(Debug, Clone, PartialEq)]
pub struct Objective {
    pub target: GradeTarget,
    pub gamma: usize,
    pub kappa: usize,
    pub w8: [f64; 4],
    pub concat: ConcatWeights,
}

impl Objective {
    pub fn new(params: &CodeParams, config: &GradeConfig) -> Result<Self> {
        let w8 = match config.target {
            GradeTarget::Cycle8 => {
                let mut w = w_coeffs(params.gamma, params.kappa)?;
                if config.zero_w1.unwrap_or_else(|| is_prime(params.z)) {
                    w[0] = 0.0;
                }
                w
            }
            _ => [0.0; 4],
        };
        Ok(Objective { target: config.target, gamma: params.gamma, kappa: params.kappa, w8, concat: config.weights })
    }

    pub fn value(&self, p: &ProbabilityMatrix) -> Result<f64> {
        match self.target {
            GradeTarget::Cycle6 => n6(p, self.gamma, self.kappa),
            GradeTarget::Cycle8 => n8(p, &self.w8),
            GradeTarget::Concat => n_concat(p, &self.concat, self.gamma, self.kappa),
        }
    }

    pub fn gradient(&self, p: &ProbabilityMatrix) -> Result<Vec<f64>> {
        match self.target {
            GradeTarget::Cycle6 => grad_n6(p, self.gamma, self.kappa),
            GradeTarget::Cycle8 => grad_n8(p, &self.w8),
            GradeTarget::Concat => grad_n_concat(p, &self.concat, self.gamma, self.kappa),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    DensityReached,
    Converged,
    ZeroGradient,
    IterationCap,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradeResult {
    #[serde(rename = "P")]
    pub p: Vec<Vec<f64>>,
    pub objective: f64,
    pub initial_objective: f64,
    /// Finite-length forecast when the target is a cycle.
    pub expected_fl: Option<Forecast>,
    pub iterations: usize,
    pub stop: StopReason,
    pub objective_trace: Vec<f64>,
    pub density_trace: Vec<f64>,
    pub md_density: f64,
    pub component_density: Vec<Option<f64>>,
}

impl GradeResult {
    pub fn probability(&self) -> Result<ProbabilityMatrix> {
        ProbabilityMatrix::unchecked(self.p.clone())
    }

    pub fn write_json(&self, w: impl Write) -> Result<()> {
        serde_json::to_writer_pretty(w, self)?;
        Ok(())
    }

    /// `iteration,objective,density` rows; row 0 is the starting point.
    pub fn write_trace_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "iteration,objective,density")?;
        for (i, (f, d)) in self.objective_trace.iter().zip(&self.density_trace).enumerate() {
            writeln!(w, "{i},{f:.12e},{d:.12}")?;
        }
        Ok(())
    }
}

/// Runs the descent from all mass in the first column, rows fixed to `pstar`.
pub fn run_md_grade(params: &CodeParams, pstar: &[f64], config: &GradeConfig) -> Result<GradeResult> {
    config.validate()?;
    if pstar.len() != params.m + 1 {
        return Err(Error::Dimension {
            expected: format!("{} row targets", params.m + 1),
            got: pstar.len().to_string(),
        });
    }
    let objective = Objective::new(params, config)?;
    let width = params.relocation_bound();
    let mut p = ProbabilityMatrix::from_pstar(pstar, params.aux)?;
    let initial = objective.value(&p)?;
    if !initial.is_finite() {
        return Err(Error::NonFinite { iteration: 0 });
    }
    let eps = config.epsilon.unwrap_or(1e-8 * initial.abs()).max(f64::MIN_POSITIVE);
    let mut objective_trace = vec![initial];
    let mut density_trace = vec![p.md_density()];
    let mut stop = StopReason::IterationCap;
    let mut iterations = 0;
    let mut prev = 0.0;
    if p.md_density() >= config.tmax {
        stop = StopReason::DensityReached;
    } else {
        while iterations < config.max_iters {
            let cur = objective.value(&p)?;
            let mut g = objective.gradient(&p)?;
            if !cur.is_finite() || g.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite { iteration: iterations });
            }
            for (k, v) in g.iter_mut().enumerate() {
                if k % params.aux >= width {
                    *v = 0.0;
                }
            }
            let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm == 0.0 {
                stop = StopReason::ZeroGradient;
                break;
            }
            let stepped: Vec<f64> = p.as_slice().iter().zip(&g).map(|(x, d)| x - config.alpha * d / norm).collect();
            p = force_within(&ProbabilityMatrix::from_flat(p.rows(), p.cols(), stepped)?, pstar, width)?;
            iterations += 1;
            let density = p.md_density();
            objective_trace.push(objective.value(&p)?);
            density_trace.push(density);
            if density >= config.tmax {
                stop = StopReason::DensityReached;
                break;
            }
            if (cur - prev).abs() <= eps {
                stop = StopReason::Converged;
                break;
            }
            prev = cur;
        }
    }
    let value = objective.value(&p)?;
    let expected_fl = match config.target {
        GradeTarget::Cycle6 => Some(forecast(value, 6, params)?),
        GradeTarget::Cycle8 => Some(forecast(value, 8, params)?),
        GradeTarget::Concat => None,
    };
    log::info!(
        "grade {} stopped after {iterations} iterations ({stop:?}), objective {initial:.6} -> {value:.6}",
        config.target
    );
    Ok(GradeResult {
        p: p.to_rows(),
        objective: value,
        initial_objective: initial,
        expected_fl,
        iterations,
        stop,
        objective_trace,
        density_trace,
        md_density: p.md_density(),
        component_density: p.component_density(),
    })
}

/// Per-row max−min spread of the gradient over interior entries (`p > 1e-6`).
/// Rows with fewer than two interior entries report zero.
pub fn kkt_residual(p: &ProbabilityMatrix, objective: &Objective) -> Result<Vec<f64>> {
    let g = objective.gradient(p)?;
    Ok((0..p.rows())
        .map(|i| {
            let vals: Vec<f64> = (0..p.cols()).filter(|&j| p.get(i, j) > 1e-6).map(|j| g[i * p.cols() + j]).collect();
            if vals.len() <= 1 {
                return 0.0;
            }
            let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
            hi - lo
        })
        .collect())
}
