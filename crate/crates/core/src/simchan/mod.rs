//! BPSK over AWGN with sum-product decoding, for smoke-scale FER estimates.

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, ContinuousCDF};

use crate::code_model::SparseBinaryMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DecoderConfig {
    pub max_iters: usize,
    /// Stop as soon as the hard decision satisfies every check.
    pub early_stop: bool,
    pub llr_clip: f64,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        DecoderConfig { max_iters: 50, early_stop: true, llr_clip: 25.0 }
    }
}

impl DecoderConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::InvalidParams("max_iters must be at least 1".into()));
        }
        if self.llr_clip.is_nan() || self.llr_clip <= 0.0 {
            return Err(Error::InvalidParams(format!("llr_clip {} must be positive", self.llr_clip)));
        }
        Ok(())
    }
}

/// Noise standard deviation for Eb/N0 `snr_db` at code rate `rate`.
pub fn noise_sigma(snr_db: f64, rate: f64) -> f64 {
    (1.0 / (2.0 * rate * 10f64.powf(snr_db / 10.0))).sqrt()
}

fn llrs_from(bits: &[u8], sigma: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let noise = Normal::new(0.0, sigma).expect("finite sigma");
    bits.iter()
        .map(|&b| {
            let y = if b == 0 { 1.0 } else { -1.0 } + noise.sample(rng);
            2.0 * y / (sigma * sigma)
        })
        .collect()
}

/// Channel LLRs `2y/σ²` of BPSK-modulated `bits` (0 ↦ +1).
pub fn awgn_llr(bits: &[u8], snr_db: f64, rate: f64, seed: u64) -> Vec<f64> {
    llrs_from(bits, noise_sigma(snr_db, rate), &mut ChaCha8Rng::seed_from_u64(seed))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub bits: Vec<u8>,
    /// Zero syndrome with every posterior decided.
    pub converged: bool,
    pub iterations: usize,
}

/// Edge layout shared by every frame.
struct Graph {
    /// Column of each edge, edges grouped by row.
    col: Vec<u32>,
    row_start: Vec<usize>,
    /// Edge ids grouped by column.
    col_edges: Vec<Vec<u32>>,
}

impl Graph {
    fn new(h: &SparseBinaryMatrix) -> Self {
        let mut col = Vec::with_capacity(h.nnz());
        let mut row_start = vec![0];
        let mut col_edges = vec![Vec::new(); h.cols()];
        for r in 0..h.rows() {
            for &c in h.row(r) {
                col_edges[c as usize].push(col.len() as u32);
                col.push(c);
            }
            row_start.push(col.len());
        }
        Graph { col, row_start, col_edges }
    }

    fn decode(&self, llr: &[f64], cfg: &DecoderConfig) -> Decoded {
        let clip = |v: f64| v.clamp(-cfg.llr_clip, cfg.llr_clip);
        let n = llr.len();
        let mut c2v = vec![0.0; self.col.len()];
        let mut v2c = vec![0.0; self.col.len()];
        let mut post: Vec<f64> = llr.iter().map(|&v| clip(v)).collect();
        let mut bits = vec![0u8; n];
        let mut scratch: Vec<f64> = Vec::new();
        let mut iterations = 0;
        let mut converged = self.hard_decision(&post, &mut bits);
        if converged && cfg.early_stop {
            return Decoded { bits, converged, iterations };
        }
        while iterations < cfg.max_iters {
            iterations += 1;
            for (v, es) in self.col_edges.iter().enumerate() {
                for &e in es {
                    v2c[e as usize] = clip(post[v] - c2v[e as usize]);
                }
            }
            for r in 0..self.row_start.len() - 1 {
                let (s, t) = (self.row_start[r], self.row_start[r + 1]);
                scratch.clear();
                scratch.extend(v2c[s..t].iter().map(|&m| (m / 2.0).tanh()));
                // Leave-one-out products via prefix and suffix products.
                let d = t - s;
                let mut prefix = 1.0;
                for i in 0..d {
                    c2v[s + i] = prefix;
                    prefix *= scratch[i];
                }
                let mut suffix = 1.0;
                for i in (0..d).rev() {
                    let p = (c2v[s + i] * suffix).clamp(-1.0 + 1e-15, 1.0 - 1e-15);
                    c2v[s + i] = clip(2.0 * p.atanh());
                    suffix *= scratch[i];
                }
            }
            for (v, es) in self.col_edges.iter().enumerate() {
                post[v] = llr[v] + es.iter().map(|&e| c2v[e as usize]).sum::<f64>();
            }
            converged = self.hard_decision(&post, &mut bits);
            if converged && cfg.early_stop {
                break;
            }
        }
        Decoded { bits, converged, iterations }
    }

    /// Writes hard decisions; true when all are decided and every check holds.
    fn hard_decision(&self, post: &[f64], bits: &mut [u8]) -> bool {
        let mut decided = true;
        for (b, &p) in bits.iter_mut().zip(post) {
            *b = (p < 0.0) as u8;
            decided &= p != 0.0;
        }
        decided
            && (0..self.row_start.len() - 1).all(|r| {
                self.col[self.row_start[r]..self.row_start[r + 1]].iter().fold(0u8, |a, &c| a ^ bits[c as usize]) == 0
            })
    }
}

/// Flooding sum-product decoding in the LLR domain.
pub fn spa_decode(h: &SparseBinaryMatrix, llr: &[f64], cfg: &DecoderConfig) -> Result<Decoded> {
    cfg.validate()?;
    if llr.len() != h.cols() {
        return Err(Error::Dimension { expected: h.cols().to_string(), got: llr.len().to_string() });
    }
    Ok(Graph::new(h).decode(llr, cfg))
}

/// One point of a FER sweep with a 95% Clopper-Pearson interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FerPoint {
    pub snr_db: f64,
    pub frames: u64,
    pub errors: u64,
    pub fer: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Exact binomial interval at level `1 − alpha`.
pub fn clopper_pearson(errors: u64, frames: u64, alpha: f64) -> (f64, f64) {
    if frames == 0 {
        return (0.0, 1.0);
    }
    let (k, n) = (errors as f64, frames as f64);
    let low = if errors == 0 { 0.0 } else { Beta::new(k, n - k + 1.0).unwrap().inverse_cdf(alpha / 2.0) };
    let high = if errors == frames { 1.0 } else { Beta::new(k + 1.0, n - k).unwrap().inverse_cdf(1.0 - alpha / 2.0) };
    (low, high)
}

/// Rate `1 − rows/cols` used for the Eb/N0 conversion.
pub fn nominal_rate(h: &SparseBinaryMatrix) -> Result<f64> {
    let r = 1.0 - h.rows() as f64 / h.cols() as f64;
    if r <= 0.0 {
        return Err(Error::InvalidParams(format!("{}x{} matrix has no positive rate", h.rows(), h.cols())));
    }
    Ok(r)
}

/// All-zero codeword FER at each SNR. A frame fails unless it decodes to zero
/// with every check satisfied.
pub fn fer_sweep(
    h: &SparseBinaryMatrix,
    snrs: &[f64],
    frames: u64,
    cfg: &DecoderConfig,
    seed: u64,
) -> Result<Vec<FerPoint>> {
    cfg.validate()?;
    if frames == 0 {
        return Ok(Vec::new());
    }
    let rate = nominal_rate(h)?;
    let graph = Graph::new(h);
    let zeros = vec![0u8; h.cols()];
    snrs.iter()
        .enumerate()
        .map(|(i, &snr)| {
            let sigma = noise_sigma(snr, rate);
            let errors: u64 = (0..frames)
                .into_par_iter()
                .map(|f| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(((i as u64) << 40) | f);
                    let d = graph.decode(&llrs_from(&zeros, sigma, &mut rng), cfg);
                    (!d.converged || d.bits.iter().any(|&b| b != 0)) as u64
                })
                .sum();
            let (ci_low, ci_high) = clopper_pearson(errors, frames, 0.05);
            Ok(FerPoint { snr_db: snr, frames, errors, fer: errors as f64 / frames as f64, ci_low, ci_high })
        })
        .collect()
}

pub fn write_fer_csv(w: &mut impl Write, table: &[FerPoint]) -> Result<()> {
    writeln!(w, "snr_db,frames,errors,fer,ci_low,ci_high")?;
    for p in table {
        writeln!(w, "{},{},{},{},{},{}", p.snr_db, p.frames, p.errors, p.fer, p.ci_low, p.ci_high)?;
    }
    Ok(())
}
