//! Exhaustive search on an explicit parity-check matrix. Independent of the
//! quasi-cyclic machinery and used as ground truth in tests.

use std::collections::BTreeMap;

use super::objects::{Elementarity, ObjectKind};
use crate::code_model::SparseBinaryMatrix;
use crate::error::{Error, Result};

/// Largest Tanner graph (VNs + CNs) accepted by the exhaustive search.
pub const BRUTE_NODE_CAP: usize = 500;

struct Graph {
    n_vn: usize,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    fn new(h: &SparseBinaryMatrix) -> Result<Self> {
        let n = h.cols() + h.rows();
        if n > BRUTE_NODE_CAP {
            return Err(Error::TooLarge(format!("{n} Tanner nodes exceed the exhaustive cap {BRUTE_NODE_CAP}")));
        }
        let mut adj = vec![Vec::new(); n];
        for (r, row) in h.adjacency().iter().enumerate() {
            for &c in row {
                adj[c as usize].push(h.cols() + r);
                adj[h.cols() + r].push(c as usize);
            }
        }
        Ok(Graph { n_vn: h.cols(), adj })
    }

    fn is_cn(&self, v: usize) -> bool {
        v >= self.n_vn
    }

    /// Simple cycles of length `len` whose smallest node is the start;
    /// each cycle is reported in both directions.
    fn cycles(&self, len: usize, mut emit: impl FnMut(&[usize])) {
        let n = self.adj.len();
        let mut path = Vec::with_capacity(len);
        let mut on = vec![false; n];
        for s in 0..n {
            path.clear();
            path.push(s);
            on[s] = true;
            self.dfs(s, len, &mut path, &mut on, &mut emit);
            on[s] = false;
        }
    }

    fn dfs(&self, s: usize, len: usize, path: &mut Vec<usize>, on: &mut [bool], emit: &mut impl FnMut(&[usize])) {
        let u = *path.last().unwrap();
        for &w in &self.adj[u] {
            if path.len() == len {
                if w == s {
                    emit(path);
                }
                continue;
            }
            if w <= s || on[w] {
                continue;
            }
            on[w] = true;
            path.push(w);
            self.dfs(s, len, path, on, emit);
            path.pop();
            on[w] = false;
        }
    }

    /// One representative per cycle: the direction with the smaller second node.
    fn cycle_list(&self, len: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        self.cycles(len, |p| {
            if p[1] < p[len - 1] {
                out.push(p.to_vec());
            }
        });
        out
    }
}

/// Number of cycles of each requested length.
pub fn brute_force_count_cycles(h: &SparseBinaryMatrix, lengths: &[usize]) -> Result<BTreeMap<usize, u64>> {
    let g = Graph::new(h)?;
    let mut out = BTreeMap::new();
    for &len in lengths {
        if len < 4 || len % 2 != 0 {
            return Err(Error::Unsupported(format!("cycle length {len}")));
        }
        let mut n = 0u64;
        g.cycles(len, |_| n += 1);
        out.insert(len, n / 2);
    }
    Ok(out)
}

/// Whether the common part of two cycles is exactly one VN-CN-VN chain
/// traversed by both.
fn chain_shared(g: &Graph, a: &[usize], b: &[usize]) -> bool {
    let common: Vec<usize> = a.iter().copied().filter(|x| b.contains(x)).collect();
    if common.len() != 3 {
        return false;
    }
    let cns: Vec<usize> = common.iter().copied().filter(|&x| g.is_cn(x)).collect();
    if cns.len() != 1 {
        return false;
    }
    let c = cns[0];
    let nbrs = |cyc: &[usize]| {
        let k = cyc.iter().position(|&x| x == c).unwrap();
        let n = cyc.len();
        let mut p = [cyc[(k + n - 1) % n], cyc[(k + 1) % n]];
        p.sort_unstable();
        p
    };
    let na = nbrs(a);
    na == nbrs(b) && na.iter().all(|v| common.contains(v))
}

fn induced_ok(g: &Graph, a: &[usize], b: &[usize]) -> bool {
    let mut vns: Vec<usize> = a.iter().chain(b).copied().filter(|&x| !g.is_cn(x)).collect();
    vns.sort_unstable();
    vns.dedup();
    let mut deg: BTreeMap<usize, usize> = BTreeMap::new();
    for v in vns {
        for &c in &g.adj[v] {
            *deg.entry(c).or_insert(0) += 1;
        }
    }
    deg.values().all(|&d| d <= 2)
}

/// Counts of the requested kinds by pairwise comparison of all short cycles.
pub fn brute_force_count(
    h: &SparseBinaryMatrix,
    kinds: &[ObjectKind],
    elementarity: Elementarity,
) -> Result<BTreeMap<ObjectKind, u64>> {
    let g = Graph::new(h)?;
    let mut lists: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
    let mut out = BTreeMap::new();
    for &kind in kinds {
        let (la, lb) = kind.cycle_lengths();
        for len in std::iter::once(la).chain(lb) {
            lists.entry(len).or_insert_with(|| g.cycle_list(len));
        }
        let n = match lb {
            None => lists[&la].len() as u64,
            Some(lb) => {
                let (xa, xb) = (&lists[&la], &lists[&lb]);
                let mut n = 0u64;
                for (i, a) in xa.iter().enumerate() {
                    let start = if la == lb { i + 1 } else { 0 };
                    for b in &xb[start..] {
                        if chain_shared(&g, a, b) && (elementarity == Elementarity::Union || induced_ok(&g, a, b)) {
                            n += 1;
                        }
                    }
                }
                n
            }
        };
        out.insert(kind, n);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_one(r: usize, c: usize) -> SparseBinaryMatrix {
        SparseBinaryMatrix::from_entries(r, c, (0..r).flat_map(|i| (0..c).map(move |j| (i, j)))).unwrap()
    }

    #[test]
    fn all_one_four_by_four() {
        let c = brute_force_count_cycles(&all_one(4, 4), &[4, 6, 8]).unwrap();
        assert_eq!(c[&4], 36);
        assert_eq!(c[&6], 96);
        // 8-cycles of K_{4,4}: 4!·4!/8 = 72.
        assert_eq!(c[&8], 72);
    }

    #[test]
    fn lifted_square() {
        // z = 2 lift of a 2×2 all-one base: one 4-cycle candidate with alternating sum p.
        let lift = |p: usize| {
            let mut e = Vec::new();
            for (i, j, f) in [(0, 0, 0), (0, 1, 0), (1, 0, 0), (1, 1, p)] {
                for t in 0..2 {
                    e.push((i * 2 + t, j * 2 + (t + f) % 2));
                }
            }
            SparseBinaryMatrix::from_entries(4, 4, e).unwrap()
        };
        assert_eq!(brute_force_count_cycles(&lift(1), &[4]).unwrap()[&4], 0);
        assert_eq!(brute_force_count_cycles(&lift(0), &[4]).unwrap()[&4], 2);
    }

    #[test]
    fn size_cap() {
        assert!(brute_force_count_cycles(&all_one(10, 491), &[4]).is_err());
    }
}
