#![allow(dead_code)]

use mdsc::code_model::{BaseGrid, CodeParams, DesignTriple, LiftingMatrix, PartitionMatrix, RelocationMatrix};
use mdsc::flcount::count_cycles_md;
use mdsc::polyalg::ProbabilityMatrix;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random feasible distribution with strictly positive entries.
pub fn random_p(rng: &mut impl Rng, rows: usize, cols: usize) -> ProbabilityMatrix {
    let mut d: Vec<f64> = (0..rows * cols).map(|_| rng.random_range(0.05..1.0)).collect();
    let s: f64 = d.iter().sum();
    d.iter_mut().for_each(|v| *v /= s);
    ProbabilityMatrix::from_flat(rows, cols, d).unwrap()
}

/// Central differences of `f` at `p`, step `h`.
pub fn finite_difference(p: &ProbabilityMatrix, h: f64, f: impl Fn(&ProbabilityMatrix) -> f64) -> Vec<f64> {
    (0..p.as_slice().len())
        .map(|k| {
            let mut a = p.clone();
            a.as_mut_slice()[k] += h;
            let mut b = p.clone();
            b.as_mut_slice()[k] -= h;
            (f(&a) - f(&b)) / (2.0 * h)
        })
        .collect()
}

/// Largest entrywise error relative to the largest gradient magnitude.
pub fn relative_error(analytic: &[f64], numeric: &[f64]) -> f64 {
    let scale = analytic.iter().chain(numeric).fold(0.0_f64, |m, v| m.max(v.abs())).max(1e-300);
    analytic.iter().zip(numeric).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / scale
}

/// Draws `(component, auxiliary)` pairs from `p`.
pub struct Sampler {
    dist: WeightedIndex<f64>,
    cols: usize,
}

impl Sampler {
    pub fn new(p: &ProbabilityMatrix) -> Self {
        Sampler { dist: WeightedIndex::new(p.as_slice()).unwrap(), cols: p.cols() }
    }
    pub fn draw(&self, rng: &mut impl Rng) -> (i64, i64) {
        let k = self.dist.sample(rng);
        ((k / self.cols) as i64, (k % self.cols) as i64)
    }
}

/// Whether the signed sums vanish: components exactly, auxiliaries modulo `aux`.
fn active(pos: &[(i64, i64)], neg: &[(i64, i64)], aux: i64) -> bool {
    let sx: i64 = pos.iter().map(|e| e.0).sum::<i64>() - neg.iter().map(|e| e.0).sum::<i64>();
    let sy: i64 = pos.iter().map(|e| e.1).sum::<i64>() - neg.iter().map(|e| e.1).sum::<i64>();
    sx == 0 && sy.rem_euclid(aux) == 0
}

/// Empirical activeness rate of a cycle with `half` positive and `half` negative
/// distinct entries. Returns (estimate, standard error).
pub fn mc_cycle(p: &ProbabilityMatrix, half: usize, samples: usize, rng: &mut impl Rng) -> (f64, f64) {
    let s = Sampler::new(p);
    let aux = p.cols() as i64;
    let mut hits = 0usize;
    for _ in 0..samples {
        let pos: Vec<_> = (0..half).map(|_| s.draw(rng)).collect();
        let neg: Vec<_> = (0..half).map(|_| s.draw(rng)).collect();
        hits += active(&pos, &neg, aux) as usize;
    }
    estimate(hits, samples)
}

/// Empirical rate at which a cycle of half-length `k` and one of half-length `l`
/// sharing a consecutive pair of entries are both active.
pub fn mc_concat(p: &ProbabilityMatrix, k: usize, l: usize, samples: usize, rng: &mut impl Rng) -> (f64, f64) {
    let s = Sampler::new(p);
    let aux = p.cols() as i64;
    let mut hits = 0usize;
    for _ in 0..samples {
        let (e1, e2) = (s.draw(rng), s.draw(rng));
        let mut pa = vec![e1];
        let mut na = vec![e2];
        pa.extend((1..k).map(|_| s.draw(rng)));
        na.extend((1..k).map(|_| s.draw(rng)));
        if !active(&pa, &na, aux) {
            continue;
        }
        let mut pb = vec![e1];
        let mut nb = vec![e2];
        pb.extend((1..l).map(|_| s.draw(rng)));
        nb.extend((1..l).map(|_| s.draw(rng)));
        hits += active(&pb, &nb, aux) as usize;
    }
    estimate(hits, samples)
}

fn estimate(hits: usize, n: usize) -> (f64, f64) {
    let q = hits as f64 / n as f64;
    (q, (q * (1.0 - q) / n as f64).sqrt().max(1.0 / n as f64))
}

fn random_grid(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: u32) -> BaseGrid {
    BaseGrid::new(rows, cols, (0..rows * cols).map(|_| rng.random_range(0..bound)).collect()).unwrap()
}

/// First seeded 3x4 code with M = 2 whose exhaustive search shows cycle-4/6
/// free relocations exist but are rare, returned with the zero relocation.
pub fn toy_instance() -> (CodeParams, DesignTriple) {
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = CodeParams::permissive(3, 4, 5, 3, 1, 2).unwrap();
        let k = PartitionMatrix::new(random_grid(&mut rng, 3, 4, 2), 1).unwrap();
        let lf = LiftingMatrix::new(random_grid(&mut rng, 3, 4, 5), 5).unwrap();
        let cost = |x: u32| -> u64 {
            let bits: Vec<u32> = (0..12).map(|i| (x >> i) & 1).collect();
            let mr = RelocationMatrix::from_vec(3, 4, &bits, 2).unwrap();
            let t = DesignTriple::new(k.clone(), lf.clone(), mr);
            count_cycles_md(&t, &p, &[4, 6]).unwrap().values().sum()
        };
        let (c0, nz) = (cost(0), (0..1u32 << 12).filter(|&x| cost(x) == 0).count());
        if c0 > 0 && nz > 0 && nz <= 512 {
            let mr = RelocationMatrix::zeros(3, 4, 2);
            return (p, DesignTriple::new(k, lf, mr));
        }
    }
    panic!("no toy instance");
}
