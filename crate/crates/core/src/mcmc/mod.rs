//! Gibbs-sampling relocation optimizer.
//!
//! The chain samples blocks of relocation entries from `exp(-β C(x))`
//! restricted to the feasible set, tracks the best vector seen and stops as
//! soon as an objective of zero appears.

mod init;
mod objective;

use std::io::Write;
use std::path::Path;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::code_model::RelocationMatrix;
use crate::error::{Error, Result};
use crate::flcount::ObjectList;

pub use init::{build_index_sets, quantize_counts, quantize_init};
pub use objective::{BlockObjective, Eval, ObjectiveWeights, SurvivorObjective};

/// Largest number of candidate assignments per block.
pub const MAX_BLOCK_CANDIDATES: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct McmcConfig {
    /// Entries resampled together.
    pub delta: usize,
    /// Starting inverse temperature; `5 / C(init)` when unset.
    pub beta_init: Option<f64>,
    /// Factor applied to β after each full pass.
    pub beta_growth: f64,
    pub beta_cap: f64,
    /// Budget in block updates.
    pub max_iters: usize,
    /// Bound on `Σ |x − x0|`; `γκ/4` when unset.
    pub l1_bound: Option<u64>,
    /// Bound on `max |x − x0|`; unconstrained when unset.
    pub linf_bound: Option<u32>,
    /// Largest fraction of relocated circulants.
    pub density_cap: f64,
    /// Relocations restricted to `0..depth`.
    pub depth: Option<usize>,
    pub weights: ObjectiveWeights,
    pub seed: u64,
}

impl Default for McmcConfig {
    fn default() -> Self {
        McmcConfig {
            delta: 2,
            beta_init: None,
            beta_growth: 1.02,
            beta_cap: 1e6,
            max_iters: 10_000,
            l1_bound: None,
            linf_bound: None,
            density_cap: 0.35,
            depth: None,
            weights: ObjectiveWeights::Lexicographic,
            seed: 0,
        }
    }
}

impl McmcConfig {
    pub fn validate(&self, aux: usize) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParams(m));
        if self.delta == 0 {
            return bad("delta must be at least 1".into());
        }
        let bound = self.depth.unwrap_or(aux);
        if bound == 0 || bound > aux {
            return bad(format!("depth must lie in 1..={aux}"));
        }
        if (bound as f64).powi(self.delta as i32) > MAX_BLOCK_CANDIDATES as f64 {
            return bad(format!("{bound}^{} candidates exceed {MAX_BLOCK_CANDIDATES}", self.delta));
        }
        if !(self.density_cap > 0.0 && self.density_cap <= 1.0) {
            return bad(format!("density cap {} not in (0, 1]", self.density_cap));
        }
        if !(self.beta_growth >= 1.0 && self.beta_cap > 0.0) {
            return bad("beta schedule must be non-decreasing and positive".into());
        }
        if let Some(b) = self.beta_init {
            if !(b > 0.0 && b.is_finite()) {
                return bad(format!("beta_init {b} must be positive"));
            }
        }
        Ok(())
    }
}

/// Hard constraints around the starting vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Feasibility {
    pub x0: Vec<u32>,
    pub bound: u32,
    pub l1: u64,
    pub linf: u32,
    pub max_nonzero: usize,
}

impl Feasibility {
    /// Resolves the configured bounds. A start above the density cap keeps
    /// its own relocation count as the limit.
    pub fn new(x0: &[u32], aux: usize, cfg: &McmcConfig) -> Result<Self> {
        cfg.validate(aux)?;
        let bound = cfg.depth.unwrap_or(aux) as u32;
        if let Some(&v) = x0.iter().find(|&&v| v >= bound) {
            return Err(Error::InvalidParams(format!("initial entry {v} outside 0..{bound}")));
        }
        let n = x0.len();
        let nnz = x0.iter().filter(|&&v| v != 0).count();
        let cap = (cfg.density_cap * n as f64 + 1e-9).floor() as usize;
        Ok(Feasibility {
            x0: x0.to_vec(),
            bound,
            l1: cfg.l1_bound.unwrap_or((n / 4) as u64),
            linf: cfg.linf_bound.unwrap_or(bound.saturating_sub(1)),
            max_nonzero: cap.max(nnz),
        })
    }

    pub fn contains(&self, x: &[u32]) -> bool {
        let mut l1 = 0u64;
        for (&a, &b) in x.iter().zip(&self.x0) {
            let d = a.abs_diff(b);
            if a >= self.bound || d > self.linf {
                return false;
            }
            l1 += d as u64;
        }
        l1 <= self.l1 && x.iter().filter(|&&v| v != 0).count() <= self.max_nonzero
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepOutcome {
    Moved,
    /// A zero-objective vector was found and adopted.
    Solved,
    /// Every candidate was infeasible.
    Stuck,
}

/// Chain state.
#[derive(Debug, Clone)]
pub struct McmcState {
    pub x: Vec<u32>,
    pub beta: f64,
    pub current: Eval,
    pub best_value: f64,
    pub best_x: Vec<u32>,
    pub iteration: usize,
    /// Set once the lexicographic top tier has reached zero; candidates that
    /// revive it are then excluded.
    pub primary_cleared: bool,
    pub stuck_blocks: usize,
    pub feasibility: Feasibility,
    rng: ChaCha8Rng,
    l1_used: u64,
    nonzero: usize,
}

impl McmcState {
    pub fn new(x: Vec<u32>, current: Eval, beta: f64, feasibility: Feasibility, seed: u64) -> Result<Self> {
        if x.len() != feasibility.x0.len() || !feasibility.contains(&x) {
            return Err(Error::InvalidParams("initial vector violates the constraints".into()));
        }
        let l1_used = x.iter().zip(&feasibility.x0).map(|(&a, &b)| a.abs_diff(b) as u64).sum();
        let nonzero = x.iter().filter(|&&v| v != 0).count();
        Ok(McmcState {
            best_value: current.value,
            best_x: x.clone(),
            primary_cleared: current.primary == 0,
            x,
            beta,
            current,
            iteration: 0,
            stuck_blocks: 0,
            feasibility,
            rng: ChaCha8Rng::seed_from_u64(seed),
            l1_used,
            nonzero,
        })
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn admits(&self, block: &[usize], cand: &[u32]) -> bool {
        let f = &self.feasibility;
        let (mut l1, mut nnz) = (self.l1_used, self.nonzero);
        for (&p, &v) in block.iter().zip(cand) {
            let (old, base) = (self.x[p], f.x0[p]);
            if v >= f.bound || v.abs_diff(base) > f.linf {
                return false;
            }
            l1 = l1 - old.abs_diff(base) as u64 + v.abs_diff(base) as u64;
            nnz = nnz - (old != 0) as usize + (v != 0) as usize;
        }
        l1 <= f.l1 && nnz <= f.max_nonzero
    }

    fn assign(&mut self, block: &[usize], cand: &[u32], eval: Eval) {
        for (&p, &v) in block.iter().zip(cand) {
            let (old, base) = (self.x[p], self.feasibility.x0[p]);
            self.l1_used = self.l1_used - old.abs_diff(base) as u64 + v.abs_diff(base) as u64;
            self.nonzero = self.nonzero - (old != 0) as usize + (v != 0) as usize;
            self.x[p] = v;
        }
        self.current = eval;
        if eval.primary == 0 {
            self.primary_cleared = true;
        }
    }
}

/// Conditional block distribution `∝ exp(-β C)` over feasible candidates.
pub fn block_distribution(values: &[f64], feasible: &[bool], beta: f64) -> Vec<f64> {
    let min = values.iter().zip(feasible).filter(|(_, &f)| f).map(|(&v, _)| v).fold(f64::INFINITY, f64::min);
    if !min.is_finite() {
        return vec![0.0; values.len()];
    }
    let w: Vec<f64> =
        values.iter().zip(feasible).map(|(&v, &f)| if f { (-beta * (v - min)).exp() } else { 0.0 }).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|v| v / s).collect()
}

fn block_candidates(bound: u32, delta: usize) -> Vec<Vec<u32>> {
    let total = (bound as usize).pow(delta as u32);
    (0..total)
        .map(|mut k| {
            (0..delta)
                .map(|_| {
                    let d = (k % bound as usize) as u32;
                    k /= bound as usize;
                    d
                })
                .collect()
        })
        .collect()
}

/// One block update of `block`.
pub fn gibbs_step<O: BlockObjective + ?Sized>(state: &mut McmcState, block: &[usize], objective: &O) -> StepOutcome {
    state.iteration += 1;
    let cands = block_candidates(state.feasibility.bound, block.len());
    let evals = objective.evaluate_block(&state.x, &state.current, block, &cands);
    let feasible: Vec<bool> = cands
        .iter()
        .zip(&evals)
        .map(|(c, e)| state.admits(block, c) && !(state.primary_cleared && e.primary > 0))
        .collect();

    let mut best: Option<usize> = None;
    for (i, e) in evals.iter().enumerate() {
        if feasible[i] && best.is_none_or(|b| e.value < evals[b].value) {
            best = Some(i);
        }
    }
    let Some(b) = best else {
        state.stuck_blocks += 1;
        log::warn!("block {block:?}: no feasible candidate");
        return StepOutcome::Stuck;
    };
    if evals[b].value < state.best_value {
        let mut y = state.x.clone();
        for (&p, &v) in block.iter().zip(&cands[b]) {
            y[p] = v;
        }
        state.best_value = evals[b].value;
        state.best_x = y;
    }
    if evals[b].value == 0.0 {
        state.assign(block, &cands[b], evals[b]);
        return StepOutcome::Solved;
    }
    let values: Vec<f64> = evals.iter().map(|e| e.value).collect();
    let probs = block_distribution(&values, &feasible, state.beta);
    let pick = WeightedIndex::new(&probs).expect("at least one feasible candidate").sample(&mut state.rng);
    let cand = cands[pick].clone();
    state.assign(block, &cand, evals[pick]);
    StepOutcome::Moved
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub iteration: usize,
    pub current: f64,
    pub best: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct McmcResult {
    pub best_x: Vec<u32>,
    pub best_value: f64,
    pub initial_value: f64,
    pub iterations: usize,
    pub solved: bool,
    pub stuck_blocks: usize,
    #[serde(skip)]
    pub trace: Vec<TraceRow>,
}

impl McmcResult {
    pub fn best_matrix(&self, rows: usize, cols: usize, bound: usize) -> Result<RelocationMatrix> {
        RelocationMatrix::from_vec(rows, cols, &self.best_x, bound)
    }

    pub fn write_trace_csv(&self, w: &mut impl Write) -> Result<()> {
        writeln!(w, "iteration,current,best,beta")?;
        for r in &self.trace {
            writeln!(w, "{},{},{},{}", r.iteration, r.current, r.best, r.beta)?;
        }
        Ok(())
    }
}

/// Runs the chain from `init` with any objective.
pub fn run_chain<O: BlockObjective + ?Sized>(
    init: &[u32],
    aux: usize,
    objective: &O,
    sets: &[Vec<usize>],
    cfg: &McmcConfig,
) -> Result<McmcResult> {
    let feasibility = Feasibility::new(init, aux, cfg)?;
    let start = objective.evaluate(init);
    let mut result = McmcResult {
        best_x: init.to_vec(),
        best_value: start.value,
        initial_value: start.value,
        iterations: 0,
        solved: start.value == 0.0,
        stuck_blocks: 0,
        trace: vec![TraceRow { iteration: 0, current: start.value, best: start.value, beta: 0.0 }],
    };
    if start.value == 0.0 || sets.is_empty() {
        return Ok(result);
    }
    let beta = cfg.beta_init.unwrap_or(5.0 / start.value).min(cfg.beta_cap);
    let mut state = McmcState::new(init.to_vec(), start, beta, feasibility, cfg.seed)?;
    result.trace[0].beta = beta;
    let mut order: Vec<usize> = (0..sets.len()).collect();
    'passes: while state.iteration < cfg.max_iters {
        order.shuffle(state.rng());
        for &s in &order {
            if state.iteration >= cfg.max_iters {
                break 'passes;
            }
            let out = gibbs_step(&mut state, &sets[s], objective);
            result.trace.push(TraceRow {
                iteration: state.iteration,
                current: state.current.value,
                best: state.best_value,
                beta: state.beta,
            });
            if out == StepOutcome::Solved {
                result.solved = true;
                break 'passes;
            }
        }
        state.beta = (state.beta * cfg.beta_growth).min(cfg.beta_cap);
    }
    result.best_x = state.best_x;
    result.best_value = state.best_value;
    result.iterations = state.iteration;
    result.stuck_blocks = state.stuck_blocks;
    Ok(result)
}

/// Minimizes surviving objects of `list` starting from `init`.
pub fn run_mcmc(init: &RelocationMatrix, list: &ObjectList, aux: usize, cfg: &McmcConfig) -> Result<McmcResult> {
    if init.rows() != list.gamma || init.cols() != list.kappa {
        return Err(Error::Dimension {
            expected: format!("{}x{}", list.gamma, list.kappa),
            got: format!("{}x{}", init.rows(), init.cols()),
        });
    }
    let objective = SurvivorObjective::new(list, aux, &cfg.weights);
    let sets = if objective.is_empty() { Vec::new() } else { build_index_sets(&objective, cfg.delta) };
    run_chain(init.grid().as_slice(), aux, &objective, &sets, cfg)
}

/// Weighted survivor value of one relocation matrix.
pub fn objective_value(x: &RelocationMatrix, list: &ObjectList, aux: usize, weights: &ObjectiveWeights) -> f64 {
    SurvivorObjective::new(list, aux, weights).evaluate(x.grid().as_slice()).value
}

/// Reproducibility record of one run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct McmcManifest {
    pub config: McmcConfig,
    pub seed: u64,
    pub init_hash: String,
    pub initial_value: f64,
    pub best_value: f64,
    pub iterations: usize,
    pub solved: bool,
    pub best_mr_path: Option<String>,
}

impl McmcManifest {
    pub fn new(cfg: &McmcConfig, init: &[u32], r: &McmcResult, best_mr_path: Option<&Path>) -> Self {
        let mut h = Sha256::new();
        for v in init {
            h.update(v.to_le_bytes());
        }
        let init_hash = h.finalize().iter().map(|b| format!("{b:02x}")).collect();
        McmcManifest {
            config: cfg.clone(),
            seed: cfg.seed,
            init_hash,
            initial_value: r.initial_value,
            best_value: r.best_value,
            iterations: r.iterations,
            solved: r.solved,
            best_mr_path: best_mr_path.map(|p| p.display().to_string()),
        }
    }
}
