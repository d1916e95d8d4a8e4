//! Small bipartite objects with a fixed cycle basis.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest object (VNs plus CNs) accepted by the exhaustive routines.
pub const MAX_OBJECT_NODES: usize = 16;

/// A cycle as `(c_1, v_1), …, (c_g, v_g)` where `c_i` joins `v_i` and `v_{i+1}`.
pub type BasisCycle = Vec<(usize, usize)>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteObject {
    vn_count: usize,
    cn_count: usize,
    /// `(cn, vn)` pairs.
    edges: Vec<(usize, usize)>,
    cycle_basis: Vec<BasisCycle>,
}

impl BipartiteObject {
    /// Object with a fundamental-cycle basis taken from a BFS spanning forest.
    pub fn new(vn_count: usize, cn_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut obj = BipartiteObject { vn_count, cn_count, edges, cycle_basis: Vec::new() };
        obj.check_edges()?;
        obj.cycle_basis = obj.fundamental_basis();
        Ok(obj)
    }

    /// Object with a caller-supplied basis, checked for consistency.
    pub fn with_basis(
        vn_count: usize,
        cn_count: usize,
        edges: Vec<(usize, usize)>,
        basis: Vec<BasisCycle>,
    ) -> Result<Self> {
        let obj = BipartiteObject { vn_count, cn_count, edges, cycle_basis: basis };
        obj.check_edges()?;
        for cyc in &obj.cycle_basis {
            obj.check_cycle(cyc)?;
        }
        let rank = obj.cycle_rank();
        if obj.cycle_basis.len() != rank {
            return Err(Error::InvalidParams(format!(
                "basis has {} cycles, cycle space has dimension {rank}",
                obj.cycle_basis.len()
            )));
        }
        Ok(obj)
    }

    /// A single cycle of length `2g`.
    pub fn cycle(g: usize) -> Result<Self> {
        if g < 2 {
            return Err(Error::InvalidParams(format!("a cycle needs at least 4 edges, got {}", 2 * g)));
        }
        let basis: BasisCycle = (0..g).map(|i| (i, i)).collect();
        let edges = (0..g).flat_map(|i| [(i, i), (i, (i + 1) % g)]).collect();
        Self::with_basis(g, g, edges, vec![basis])
    }

    /// Two cycles of lengths `2k` and `2l` joined through a VN-CN-VN chain.
    ///
    /// CN 0 with VNs 0 and 1 form the chain; the basis is the two cycles,
    /// both traversed so that edge (0, 0) is positive and (0, 1) negative.
    pub fn concatenation(k: usize, l: usize) -> Result<Self> {
        if k < 2 || l < 2 {
            return Err(Error::InvalidParams(format!("cycle half-lengths must be at least 2, got ({k}, {l})")));
        }
        let (mut vn, mut cn) = (2, 1);
        let mut edges = vec![(0, 0), (0, 1)];
        let mut basis = Vec::new();
        for half in [k, l] {
            // VN 1 -> c -> x -> c -> … -> VN 0 using half − 1 new CNs and half − 2 new VNs.
            let mut cyc = vec![(0, 0)];
            let mut at = 1;
            for step in 0..half - 1 {
                let c = cn;
                cn += 1;
                let next = if step == half - 2 {
                    0
                } else {
                    vn += 1;
                    vn - 1
                };
                edges.push((c, at));
                edges.push((c, next));
                cyc.push((c, at));
                at = next;
            }
            basis.push(cyc);
        }
        Self::with_basis(vn, cn, edges, basis)
    }

    pub fn vn_count(&self) -> usize {
        self.vn_count
    }
    pub fn cn_count(&self) -> usize {
        self.cn_count
    }
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
    pub fn cycle_basis(&self) -> &[BasisCycle] {
        &self.cycle_basis
    }
    pub fn node_count(&self) -> usize {
        self.vn_count + self.cn_count
    }

    pub fn edge_index(&self, c: usize, v: usize) -> Option<usize> {
        self.edges.iter().position(|&e| e == (c, v))
    }

    pub fn vn_neighbors(&self, v: usize) -> Vec<usize> {
        self.edges.iter().filter(|e| e.1 == v).map(|e| e.0).collect()
    }
    pub fn cn_neighbors(&self, c: usize) -> Vec<usize> {
        self.edges.iter().filter(|e| e.0 == c).map(|e| e.1).collect()
    }

    /// Dimension of the cycle space: `|E| − |V| − |C| + components`.
    pub fn cycle_rank(&self) -> usize {
        self.edges.len() + self.components() - self.node_count()
    }

    /// Signs of every edge on every basis cycle, `[edge][cycle]`.
    pub fn delta(&self) -> Vec<Vec<i64>> {
        let mut d = vec![vec![0i64; self.cycle_basis.len()]; self.edges.len()];
        for (s, cyc) in self.cycle_basis.iter().enumerate() {
            let g = cyc.len();
            for (i, &(c, v)) in cyc.iter().enumerate() {
                let next = cyc[(i + 1) % g].1;
                d[self.edge_index(c, v).expect("checked")][s] += 1;
                d[self.edge_index(c, next).expect("checked")][s] -= 1;
            }
        }
        d
    }

    fn check_edges(&self) -> Result<()> {
        if self.node_count() > MAX_OBJECT_NODES {
            return Err(Error::TooLarge(format!(
                "object has {} nodes, limit is {MAX_OBJECT_NODES}",
                self.node_count()
            )));
        }
        for (i, &(c, v)) in self.edges.iter().enumerate() {
            if c >= self.cn_count || v >= self.vn_count {
                return Err(Error::InvalidParams(format!("edge ({c}, {v}) references a missing node")));
            }
            if self.edges[..i].contains(&(c, v)) {
                return Err(Error::InvalidParams(format!("duplicate edge ({c}, {v})")));
            }
        }
        Ok(())
    }

    fn check_cycle(&self, cyc: &BasisCycle) -> Result<()> {
        let g = cyc.len();
        if g < 2 {
            return Err(Error::InvalidParams("basis cycle shorter than 4 edges".into()));
        }
        for (i, &(c, v)) in cyc.iter().enumerate() {
            let next = cyc[(i + 1) % g].1;
            if self.edge_index(c, v).is_none() || self.edge_index(c, next).is_none() {
                return Err(Error::InvalidParams(format!("basis cycle uses a missing edge at CN {c}")));
            }
            if cyc[..i].iter().any(|&(c2, v2)| c2 == c || v2 == v) {
                return Err(Error::InvalidParams("basis cycle repeats a node".into()));
            }
        }
        Ok(())
    }

    fn components(&self) -> usize {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut count = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            count += 1;
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(u) = stack.pop() {
                for w in self.node_neighbors(u) {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        count
    }

    /// Unified node ids: VNs first, then CNs.
    fn node_neighbors(&self, u: usize) -> Vec<usize> {
        if u < self.vn_count {
            self.vn_neighbors(u).into_iter().map(|c| c + self.vn_count).collect()
        } else {
            self.cn_neighbors(u - self.vn_count)
        }
    }

    fn fundamental_basis(&self) -> Vec<BasisCycle> {
        let n = self.node_count();
        let mut parent: Vec<Option<usize>> = vec![None; n];
        let mut depth = vec![usize::MAX; n];
        let mut tree = vec![false; self.edges.len()];
        for s in 0..n {
            if depth[s] != usize::MAX {
                continue;
            }
            depth[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for w in self.node_neighbors(u) {
                    if depth[w] == usize::MAX {
                        depth[w] = depth[u] + 1;
                        parent[w] = Some(u);
                        tree[self.unified_edge(u, w)] = true;
                        q.push_back(w);
                    }
                }
            }
        }
        let mut basis = Vec::new();
        for (k, &(c, v)) in self.edges.iter().enumerate() {
            if tree[k] {
                continue;
            }
            // Tree paths from both ends to their common ancestor, closed by edge k.
            let (mut a, mut b) = (v, c + self.vn_count);
            let (mut pa, mut pb) = (vec![a], vec![b]);
            while a != b {
                if depth[a] >= depth[b] {
                    a = parent[a].expect("connected");
                    pa.push(a);
                } else {
                    b = parent[b].expect("connected");
                    pb.push(b);
                }
            }
            pb.pop();
            pb.reverse();
            // Walk: v … ancestor … c, then back to v through edge k.
            let walk: Vec<usize> = pa.into_iter().chain(pb).collect();
            basis.push(self.walk_to_cycle(&walk));
        }
        basis
    }

    fn unified_edge(&self, u: usize, w: usize) -> usize {
        let (v, c) = if u < self.vn_count { (u, w - self.vn_count) } else { (w, u - self.vn_count) };
        self.edge_index(c, v).expect("adjacent nodes")
    }

    /// Closed walk of unified ids starting at a VN, to `(c_i, v_i)` form.
    fn walk_to_cycle(&self, walk: &[usize]) -> BasisCycle {
        let start = if walk[0] < self.vn_count { 0 } else { 1 };
        let g = walk.len() / 2;
        (0..g)
            .map(|i| {
                let v = walk[(start + 2 * i) % walk.len()];
                let c = walk[(start + 2 * i + 1) % walk.len()];
                (c - self.vn_count, v)
            })
            .collect()
    }

    /// Every pair of node permutations preserving adjacency.
    pub fn automorphisms(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        let adj: Vec<Vec<bool>> =
            (0..self.cn_count).map(|c| (0..self.vn_count).map(|v| self.edge_index(c, v).is_some()).collect()).collect();
        let vdeg: Vec<usize> = (0..self.vn_count).map(|v| self.vn_neighbors(v).len()).collect();
        let cdeg: Vec<usize> = (0..self.cn_count).map(|c| self.cn_neighbors(c).len()).collect();
        let mut out = Vec::new();
        let mut pv = vec![usize::MAX; self.vn_count];
        let mut used_v = vec![false; self.vn_count];
        self.aut_vn(0, &adj, &vdeg, &cdeg, &mut pv, &mut used_v, &mut out);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn aut_vn(
        &self,
        i: usize,
        adj: &[Vec<bool>],
        vdeg: &[usize],
        cdeg: &[usize],
        pv: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<(Vec<usize>, Vec<usize>)>,
    ) {
        if i == self.vn_count {
            let mut pc = vec![usize::MAX; self.cn_count];
            let mut used_c = vec![false; self.cn_count];
            self.aut_cn(0, adj, cdeg, pv, &mut pc, &mut used_c, out);
            return;
        }
        for t in 0..self.vn_count {
            if !used[t] && vdeg[t] == vdeg[i] {
                used[t] = true;
                pv[i] = t;
                self.aut_vn(i + 1, adj, vdeg, cdeg, pv, used, out);
                used[t] = false;
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn aut_cn(
        &self,
        i: usize,
        adj: &[Vec<bool>],
        cdeg: &[usize],
        pv: &[usize],
        pc: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<(Vec<usize>, Vec<usize>)>,
    ) {
        if i == self.cn_count {
            out.push((pv.to_vec(), pc.clone()));
            return;
        }
        for t in 0..self.cn_count {
            if used[t] || cdeg[t] != cdeg[i] {
                continue;
            }
            if (0..self.vn_count).all(|v| adj[i][v] == adj[t][pv[v]]) {
                used[t] = true;
                pc[i] = t;
                self.aut_cn(i + 1, adj, cdeg, pv, pc, used, out);
                used[t] = false;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_objects() {
        let c6 = BipartiteObject::cycle(3).unwrap();
        assert_eq!(c6.cycle_rank(), 1);
        assert_eq!(c6.automorphisms().len(), 6);
        let d = c6.delta();
        assert!(d.iter().all(|r| r[0].abs() == 1));
        assert_eq!(d.iter().map(|r| r[0]).sum::<i64>(), 0);
    }

    #[test]
    fn concatenations() {
        for (k, l, aut) in [(3, 3, 4), (3, 4, 2), (4, 4, 4)] {
            let g = BipartiteObject::concatenation(k, l).unwrap();
            assert_eq!(g.edges().len(), 2 * k + 2 * l - 2);
            assert_eq!(g.vn_count(), k + l - 2);
            assert_eq!(g.cn_count(), k + l - 1);
            assert_eq!(g.automorphisms().len(), aut, "{k}-{l}");
            let d = g.delta();
            assert_eq!(d[0], vec![1, 1]);
            assert_eq!(d[1], vec![-1, -1]);
        }
    }

    #[test]
    fn spanning_tree_basis() {
        let g = BipartiteObject::concatenation(3, 4).unwrap();
        let h = BipartiteObject::new(g.vn_count(), g.cn_count(), g.edges().to_vec()).unwrap();
        assert_eq!(h.cycle_basis().len(), 2);
        for cyc in h.cycle_basis() {
            h.check_cycle(cyc).unwrap();
        }
        let tree = BipartiteObject::new(2, 1, vec![(0, 0), (0, 1)]).unwrap();
        assert!(tree.cycle_basis().is_empty());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(BipartiteObject::new(1, 1, vec![(0, 0), (0, 0)]).is_err());
        assert!(BipartiteObject::new(1, 1, vec![(0, 1)]).is_err());
        assert!(BipartiteObject::cycle(9).is_err());
        assert!(BipartiteObject::with_basis(2, 2, vec![(0, 0), (0, 1), (1, 0), (1, 1)], vec![]).is_err());
    }
}
