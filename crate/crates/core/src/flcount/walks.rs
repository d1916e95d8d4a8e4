//! Cycle enumeration on quasi-cyclic protographs.
//!
//! A cycle of the lifted graph is found as a closed walk over protograph
//! edges, tracking the circulant lift of every node. Only lifted nodes are
//! required to be distinct, so walks that revisit a protograph block at a
//! different lift are counted whenever they close in the lifted graph.

use rayon::prelude::*;

use crate::code_model::QcProtograph;
use crate::error::{Error, Result};

/// Longest supported cycle, as a number of check nodes.
pub const MAX_HALF_LEN: usize = 6;

#[derive(Clone, Copy, Default, PartialEq, Eq)]
struct Node {
    block: u32,
    lift: u32,
}

struct Walker<'a> {
    qc: &'a QcProtograph,
    g: usize,
    z: u32,
    r0: u32,
    /// For each column block, the edge back to `r0` if any.
    close: Vec<u32>,
    cn: [Node; MAX_HALF_LEN],
    vn: [Node; MAX_HALF_LEN],
    edges: [u32; 2 * MAX_HALF_LEN],
}

const NONE: u32 = u32::MAX;

impl<'a> Walker<'a> {
    fn new(qc: &'a QcProtograph, g: usize) -> Self {
        Walker {
            qc,
            g,
            z: qc.z as u32,
            r0: 0,
            close: vec![NONE; qc.col_blocks],
            cn: [Node::default(); MAX_HALF_LEN],
            vn: [Node::default(); MAX_HALF_LEN],
            edges: [0; 2 * MAX_HALF_LEN],
        }
    }

    fn start(&mut self, r0: usize) {
        for &e in self.qc.row_edges(self.r0 as usize) {
            self.close[self.qc.edges[e as usize].col as usize] = NONE;
        }
        self.r0 = r0 as u32;
        for &e in self.qc.row_edges(r0) {
            self.close[self.qc.edges[e as usize].col as usize] = e;
        }
        self.cn[0] = Node { block: r0 as u32, lift: 0 };
    }

    /// Calls `emit` once per closed walk of length `2g` rooted at CN `(r0, 0)`.
    fn run(&mut self, emit: &mut impl FnMut(&Self)) {
        self.step(0, emit);
    }

    fn step(&mut self, k: usize, emit: &mut impl FnMut(&Self)) {
        let qc = self.qc;
        let z = self.z;
        let c = self.cn[k];
        for &e in qc.row_edges(c.block as usize) {
            let edge = &qc.edges[e as usize];
            let v = Node { block: edge.col, lift: (c.lift + edge.power) % z };
            if self.vn[..k].contains(&v) {
                continue;
            }
            self.vn[k] = v;
            self.edges[2 * k] = e;
            if k + 1 == self.g {
                let back = self.close[v.block as usize];
                if back != NONE && back != e && (v.lift + z - qc.edges[back as usize].power).is_multiple_of(z) {
                    self.edges[2 * k + 1] = back;
                    emit(self);
                }
                continue;
            }
            for &e2 in qc.col_edges(v.block as usize) {
                if e2 == e {
                    continue;
                }
                let edge2 = &qc.edges[e2 as usize];
                let c2 = Node { block: edge2.row, lift: (v.lift + z - edge2.power) % z };
                if self.cn[..=k].contains(&c2) {
                    continue;
                }
                self.cn[k + 1] = c2;
                self.edges[2 * k + 1] = e2;
                self.step(k + 1, emit);
            }
        }
    }
}

fn check_len(len: usize) -> Result<usize> {
    if len < 4 || !len.is_multiple_of(2) || len / 2 > MAX_HALF_LEN {
        return Err(Error::Unsupported(format!("cycle length {len}")));
    }
    Ok(len / 2)
}

/// Exact number of cycles of length `len` in the lifted graph.
pub fn count_cycles(qc: &QcProtograph, len: usize) -> Result<u64> {
    let g = check_len(len)?;
    let walks: u64 = (0..qc.row_blocks)
        .into_par_iter()
        .map_init(
            || Walker::new(qc, g),
            |w, r0| {
                w.start(r0);
                let mut n = 0u64;
                w.run(&mut |_| n += 1);
                n
            },
        )
        .sum();
    let total = walks * qc.z as u64;
    debug_assert_eq!(total % len as u64, 0);
    Ok(total / len as u64)
}

/// Cycles of one length, stored flat.
///
/// Cycle `k` occupies `nodes[k*len..(k+1)*len]` as `c0 v0 c1 v1 …` with lifted
/// node ids `block*z + lift`, and `edges[k*len..]` holds the protograph edge
/// indices `(c0,v0) (c1,v0) (c1,v1) (c2,v1) …`. Even positions carry sign `+1`.
#[derive(Debug, Clone, Default)]
pub struct CycleList {
    pub len: usize,
    pub nodes: Vec<u32>,
    pub edges: Vec<u32>,
}

impl CycleList {
    pub fn count(&self) -> usize {
        self.nodes.len().checked_div(self.len).unwrap_or(0)
    }
    pub fn nodes_of(&self, k: usize) -> &[u32] {
        &self.nodes[k * self.len..(k + 1) * self.len]
    }
    pub fn edges_of(&self, k: usize) -> &[u32] {
        &self.edges[k * self.len..(k + 1) * self.len]
    }
}

/// Lists every cycle of length `len` exactly once.
///
/// Each cycle is stored starting from its smallest CN id, oriented so that
/// `v0 < v_last`.
pub fn list_cycles(qc: &QcProtograph, len: usize) -> Result<CycleList> {
    let g = check_len(len)?;
    let z = qc.z as u32;
    let parts: Vec<(Vec<u32>, Vec<u32>)> = (0..qc.row_blocks)
        .into_par_iter()
        .map_init(
            || Walker::new(qc, g),
            |w, r0| {
                w.start(r0);
                let mut nodes = Vec::new();
                let mut edges = Vec::new();
                w.run(&mut |w| {
                    // Shifts s for which CN (r0, s) is the smallest CN id.
                    let mut smax = z;
                    for c in &w.cn[1..g] {
                        if c.block < w.r0 {
                            return;
                        }
                        if c.block == w.r0 {
                            smax = smax.min(z - c.lift);
                        }
                    }
                    let id = |n: Node, s: u32| n.block * z + (n.lift + s) % z;
                    for s in 0..smax {
                        if id(w.vn[0], s) > id(w.vn[g - 1], s) {
                            continue;
                        }
                        for k in 0..g {
                            nodes.push(id(w.cn[k], s));
                            nodes.push(id(w.vn[k], s));
                        }
                        edges.extend_from_slice(&w.edges[..2 * g]);
                    }
                });
                (nodes, edges)
            },
        )
        .collect();
    let mut out = CycleList { len, nodes: Vec::new(), edges: Vec::new() };
    for (n, e) in parts {
        out.nodes.extend(n);
        out.edges.extend(e);
    }
    Ok(out)
}
