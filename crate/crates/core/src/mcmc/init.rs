use rand::seq::{IndexedRandom, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::objective::SurvivorObjective;
use crate::code_model::{PartitionMatrix, RelocationMatrix};
use crate::error::{Error, Result};
use crate::polyalg::ProbabilityMatrix;

/// Integer cell populations from `n · P` for the given component populations.
///
/// Relocated cells (`a ≥ 1`) share `round(n · Σ P[:, 1..])` circulants by
/// largest remainder; a component whose demand exceeds its population gives
/// back its smallest-remainder cells first. Column 0 takes what is left.
pub fn quantize_counts(p: &ProbabilityMatrix, populations: &[usize]) -> Result<Vec<Vec<usize>>> {
    if p.rows() != populations.len() {
        return Err(Error::Dimension {
            expected: format!("{} components", populations.len()),
            got: p.rows().to_string(),
        });
    }
    let n: usize = populations.iter().sum();
    let (rows, cols) = (p.rows(), p.cols());
    let mut cells: Vec<(usize, usize, f64)> = Vec::new();
    let mut q = vec![vec![0usize; cols]; rows];
    let mut target = 0.0;
    for c in 0..rows {
        for a in 1..cols {
            let d = n as f64 * p.get(c, a);
            q[c][a] = (d + 1e-9).floor() as usize;
            cells.push((c, a, d - q[c][a] as f64));
            target += d;
        }
    }
    let target = target.round() as usize;
    let assigned: usize = q.iter().flatten().sum();
    cells.sort_by(|x, y| y.2.total_cmp(&x.2).then((x.0, x.1).cmp(&(y.0, y.1))));
    for &(c, a, _) in cells.iter().take(target.saturating_sub(assigned)) {
        q[c][a] += 1;
    }
    for c in 0..rows {
        let mut mine: Vec<(usize, f64)> = cells.iter().filter(|t| t.0 == c).map(|t| (t.1, t.2)).collect();
        mine.sort_by(|x, y| x.1.total_cmp(&y.1).then(x.0.cmp(&y.0)));
        let mut k = 0;
        while q[c][1..].iter().sum::<usize>() > populations[c] {
            let a = mine[k % mine.len()].0;
            if q[c][a] > 0 {
                q[c][a] -= 1;
            }
            k += 1;
        }
        q[c][0] = populations[c] - q[c][1..].iter().sum::<usize>();
    }
    Ok(q)
}

/// Initial relocation matrix from a distribution.
///
/// Cell populations follow [`quantize_counts`]. Within each component the
/// relocated circulants are drawn without replacement with probability
/// proportional to `1 + involvement`.
pub fn quantize_init(
    p: &ProbabilityMatrix,
    k: &PartitionMatrix,
    involvement: &[u64],
    seed: u64,
) -> Result<RelocationMatrix> {
    let (rows, cols) = (k.rows(), k.cols());
    if involvement.len() != rows * cols {
        return Err(Error::Dimension { expected: (rows * cols).to_string(), got: involvement.len().to_string() });
    }
    if p.rows() < k.memory() + 1 {
        return Err(Error::Dimension {
            expected: format!("at least {} rows", k.memory() + 1),
            got: p.rows().to_string(),
        });
    }
    let comp = k.grid().as_slice();
    let mut populations = vec![0usize; p.rows()];
    for &c in comp {
        populations[c as usize] += 1;
    }
    let q = quantize_counts(p, &populations)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = vec![0u32; rows * cols];
    for (c, qc) in q.iter().enumerate() {
        let members: Vec<usize> = (0..comp.len()).filter(|&i| comp[i] as usize == c).collect();
        let moved: usize = qc[1..].iter().sum();
        let mut chosen: Vec<usize> = members
            .choose_multiple_weighted(&mut rng, moved, |&i| 1.0 + involvement[i] as f64)
            .map_err(|e| Error::InvalidParams(format!("weighted selection failed: {e}")))?
            .copied()
            .collect();
        chosen.sort_unstable();
        chosen.shuffle(&mut rng);
        let mut it = chosen.into_iter();
        for (a, &count) in qc.iter().enumerate().skip(1) {
            for i in it.by_ref().take(count) {
                x[i] = a as u32;
            }
        }
    }
    RelocationMatrix::from_vec(rows, cols, &x, p.cols())
}

/// One index set per position: the anchor plus its `delta − 1` most
/// correlated partners, ties to the lowest index.
pub fn build_index_sets(objective: &SurvivorObjective, delta: usize) -> Vec<Vec<usize>> {
    let n = objective.positions();
    if delta <= 1 {
        return (0..n).map(|i| vec![i]).collect();
    }
    let corr = objective.correlation();
    (0..n)
        .map(|i| {
            let mut partners: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            partners.sort_by(|&a, &b| corr[i][b].cmp(&corr[i][a]).then(a.cmp(&b)));
            std::iter::once(i).chain(partners.into_iter().take(delta - 1)).collect()
        })
        .collect()
}
