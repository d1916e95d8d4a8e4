//! Short cycles and two-cycle concatenations of the SC Tanner graph, and
//! their survival under relocation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::walks::{list_cycles, CycleList};
use crate::code_model::{CodeParams, LiftingMatrix, PartitionMatrix, QcProtograph, RelocationMatrix};
use crate::error::{Error, Result};

/// Targeted finite-length objects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectKind {
    Cycle4,
    Cycle6,
    Cycle8,
    Cfg66,
    Cfg68,
    Cfg88,
}

impl ObjectKind {
    pub const ALL: [ObjectKind; 6] = [
        ObjectKind::Cycle4,
        ObjectKind::Cycle6,
        ObjectKind::Cycle8,
        ObjectKind::Cfg66,
        ObjectKind::Cfg68,
        ObjectKind::Cfg88,
    ];

    /// Lengths of the fundamental cycles.
    pub fn cycle_lengths(self) -> (usize, Option<usize>) {
        match self {
            ObjectKind::Cycle4 => (4, None),
            ObjectKind::Cycle6 => (6, None),
            ObjectKind::Cycle8 => (8, None),
            ObjectKind::Cfg66 => (6, Some(6)),
            ObjectKind::Cfg68 => (6, Some(8)),
            ObjectKind::Cfg88 => (8, Some(8)),
        }
    }

    pub fn is_cycle(self) -> bool {
        self.cycle_lengths().1.is_none()
    }

    pub fn name(self) -> &'static str {
        match self {
            ObjectKind::Cycle4 => "cycle4",
            ObjectKind::Cycle6 => "cycle6",
            ObjectKind::Cycle8 => "cycle8",
            ObjectKind::Cfg66 => "cfg66",
            ObjectKind::Cfg68 => "cfg68",
            ObjectKind::Cfg88 => "cfg88",
        }
    }

    fn code(self) -> u8 {
        self as u8
    }

    fn from_code(c: u8) -> Option<Self> {
        Self::ALL.get(c as usize).copied()
    }
}

impl fmt::Display for ObjectKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ObjectKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::Parse(format!("unknown object kind {s:?}")))
    }
}

/// One fundamental cycle in the SC graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FundamentalCycle {
    /// Lifted node ids `c0 v0 c1 v1 …` (CN ids and VN ids live in separate spaces).
    pub nodes: Vec<u32>,
    /// Base entries `(row, col)` along the walk; even positions carry `+1`, odd `−1`.
    pub walk: Vec<(u16, u16)>,
}

/// A cycle or two-cycle concatenation of the SC Tanner graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TannerObject {
    pub kind: ObjectKind,
    pub vns: Vec<u32>,
    pub cns: Vec<u32>,
    pub fundamental_cycles: Vec<FundamentalCycle>,
}

/// Net relocation coefficients of a cycle: the cycle stays active iff
/// `Σ coef · Mr[pos] ≡ 0 (mod M)`.
pub type CycleTerms = Vec<(u16, i16)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ObjectRecord {
    pub kind: ObjectKind,
    pub a: u32,
    /// Second cycle for concatenations; `u32::MAX` for single cycles.
    pub b: u32,
}

/// Active objects of an SC code, with enough structure for fast relocation checks.
#[derive(Debug, Clone)]
pub struct ObjectList {
    pub gamma: usize,
    pub kappa: usize,
    pub cycles: Vec<CycleTerms>,
    /// Flattened `(nodes, walk)` data per cycle for materialization.
    cycle_nodes: Vec<Vec<u32>>,
    cycle_walks: Vec<Vec<(u16, u16)>>,
    pub objects: Vec<ObjectRecord>,
}

/// Which subgraph must have check-node degree at most two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Elementarity {
    /// The union of the two fundamental cycles. Two cycles meeting in exactly
    /// one VN-CN-VN chain always satisfy this, so no extra filtering happens.
    #[default]
    Union,
    /// The subgraph induced by the object's VNs: no CN of the code may touch
    /// three or more of them.
    Induced,
}

impl ObjectList {
    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn positions(&self) -> usize {
        self.gamma * self.kappa
    }

    /// Counts per kind (SC level).
    pub fn counts(&self) -> BTreeMap<ObjectKind, u64> {
        let mut out = BTreeMap::new();
        for o in &self.objects {
            *out.entry(o.kind).or_insert(0) += 1;
        }
        out
    }

    pub fn object(&self, k: usize) -> TannerObject {
        let o = self.objects[k];
        let mut ids = vec![o.a];
        if o.b != u32::MAX {
            ids.push(o.b);
        }
        let mut vns = Vec::new();
        let mut cns = Vec::new();
        let mut fundamental_cycles = Vec::new();
        for &c in &ids {
            let nodes = &self.cycle_nodes[c as usize];
            for (t, &n) in nodes.iter().enumerate() {
                if t % 2 == 0 {
                    cns.push(n)
                } else {
                    vns.push(n)
                }
            }
            fundamental_cycles
                .push(FundamentalCycle { nodes: nodes.clone(), walk: self.cycle_walks[c as usize].clone() });
        }
        vns.sort_unstable();
        vns.dedup();
        cns.sort_unstable();
        cns.dedup();
        TannerObject { kind: o.kind, vns, cns, fundamental_cycles }
    }

    /// Whether cycle `c` survives relocation `x` (row-concatenated).
    #[inline]
    pub fn cycle_active(&self, c: u32, x: &[u32], aux: u32) -> bool {
        cycle_sum(&self.cycles[c as usize], x, aux) == 0
    }

    pub fn object_active(&self, o: &ObjectRecord, x: &[u32], aux: u32) -> bool {
        self.cycle_active(o.a, x, aux) && (o.b == u32::MAX || self.cycle_active(o.b, x, aux))
    }

    /// Filters to the given kinds, dropping unreferenced cycles.
    pub fn restrict(&self, kinds: &[ObjectKind]) -> ObjectList {
        let mut remap = vec![u32::MAX; self.cycles.len()];
        let mut out = ObjectList {
            gamma: self.gamma,
            kappa: self.kappa,
            cycles: Vec::new(),
            cycle_nodes: Vec::new(),
            cycle_walks: Vec::new(),
            objects: Vec::new(),
        };
        let mut take = |c: u32, out: &mut ObjectList| -> u32 {
            if remap[c as usize] == u32::MAX {
                remap[c as usize] = out.cycles.len() as u32;
                out.cycles.push(self.cycles[c as usize].clone());
                out.cycle_nodes.push(self.cycle_nodes[c as usize].clone());
                out.cycle_walks.push(self.cycle_walks[c as usize].clone());
            }
            remap[c as usize]
        };
        for o in &self.objects {
            if kinds.contains(&o.kind) {
                let a = take(o.a, &mut out);
                let b = if o.b == u32::MAX { u32::MAX } else { take(o.b, &mut out) };
                out.objects.push(ObjectRecord { kind: o.kind, a, b });
            }
        }
        out
    }
}

/// `Σ coef · x[pos] mod aux`.
#[inline]
pub fn cycle_sum(terms: &[(u16, i16)], x: &[u32], aux: u32) -> u32 {
    let s: i64 = terms.iter().map(|&(p, c)| c as i64 * x[p as usize] as i64).sum();
    s.rem_euclid(aux as i64) as u32
}

fn terms_of(walk: &[(u16, u16)], kappa: usize) -> CycleTerms {
    let mut acc: BTreeMap<u16, i16> = BTreeMap::new();
    for (t, &(i, j)) in walk.iter().enumerate() {
        let pos = (i as usize * kappa + j as usize) as u16;
        *acc.entry(pos).or_insert(0) += if t % 2 == 0 { 1 } else { -1 };
    }
    acc.into_iter().filter(|&(_, c)| c != 0).collect()
}

/// Enumerates the requested objects in the SC code given by `K` and the lifting.
pub fn list_active_objects(
    k: &PartitionMatrix,
    lf: &LiftingMatrix,
    params: &CodeParams,
    kinds: &[ObjectKind],
) -> Result<ObjectList> {
    list_active_objects_with(k, lf, params, kinds, Elementarity::default())
}

pub fn list_active_objects_with(
    k: &PartitionMatrix,
    lf: &LiftingMatrix,
    params: &CodeParams,
    kinds: &[ObjectKind],
    elementarity: Elementarity,
) -> Result<ObjectList> {
    let qc = QcProtograph::sc(k, lf, params)?;
    list_objects(&qc, params, kinds, elementarity)
}

/// Enumerates objects in the lifted graph of any quasi-cyclic protograph.
pub fn list_objects(
    qc: &QcProtograph,
    params: &CodeParams,
    kinds: &[ObjectKind],
    elementarity: Elementarity,
) -> Result<ObjectList> {
    if kinds.is_empty() {
        return Err(Error::InvalidParams("no object kinds requested".into()));
    }
    let mut lengths: Vec<usize> = kinds
        .iter()
        .flat_map(|k| {
            let (a, b) = k.cycle_lengths();
            std::iter::once(a).chain(b)
        })
        .collect();
    lengths.sort_unstable();
    lengths.dedup();

    let mut out = ObjectList {
        gamma: params.gamma,
        kappa: params.kappa,
        cycles: Vec::new(),
        cycle_nodes: Vec::new(),
        cycle_walks: Vec::new(),
        objects: Vec::new(),
    };
    // Global cycle id ranges per length.
    let mut ranges: BTreeMap<usize, (u32, u32)> = BTreeMap::new();
    let mut lists: BTreeMap<usize, CycleList> = BTreeMap::new();
    for &len in &lengths {
        let list = list_cycles(qc, len)?;
        let start = out.cycles.len() as u32;
        for c in 0..list.count() {
            let walk: Vec<(u16, u16)> = list
                .edges_of(c)
                .iter()
                .map(|&e| {
                    let e = &qc.edges[e as usize];
                    (e.base_row, e.base_col)
                })
                .collect();
            out.cycles.push(terms_of(&walk, params.kappa));
            out.cycle_walks.push(walk);
            out.cycle_nodes.push(list.nodes_of(c).to_vec());
        }
        ranges.insert(len, (start, out.cycles.len() as u32));
        lists.insert(len, list);
    }

    for &kind in kinds {
        if let (len, None) = kind.cycle_lengths() {
            let (s, e) = ranges[&len];
            out.objects.extend((s..e).map(|a| ObjectRecord { kind, a, b: u32::MAX }));
        }
    }

    let cfg_kinds: Vec<ObjectKind> = kinds.iter().copied().filter(|k| !k.is_cycle()).collect();
    if !cfg_kinds.is_empty() {
        let found = join_concatenations(qc, &out, &ranges, &cfg_kinds, elementarity);
        out.objects.extend(found);
    }
    out.objects.sort_by_key(|o| (o.kind, o.a, o.b));
    Ok(out)
}

/// Cycles sharing exactly one VN-CN-VN chain, joined on `(CN, {VN, VN})` keys.
fn join_concatenations(
    qc: &QcProtograph,
    list: &ObjectList,
    ranges: &BTreeMap<usize, (u32, u32)>,
    kinds: &[ObjectKind],
    elementarity: Elementarity,
) -> Vec<ObjectRecord> {
    let mut keys: Vec<(u32, u32, u32, u32)> = Vec::new();
    let mut lens_needed: Vec<usize> = kinds
        .iter()
        .flat_map(|k| {
            let (a, b) = k.cycle_lengths();
            [a, b.unwrap()]
        })
        .collect();
    lens_needed.sort_unstable();
    lens_needed.dedup();
    for len in lens_needed {
        let (s, e) = ranges[&len];
        for c in s..e {
            let nodes = &list.cycle_nodes[c as usize];
            let g = nodes.len() / 2;
            for t in 0..g {
                let cn = nodes[2 * t];
                let prev = nodes[(2 * t + 2 * g - 1) % (2 * g)];
                let next = nodes[2 * t + 1];
                keys.push((cn, prev.min(next), prev.max(next), c));
            }
        }
    }
    keys.sort_unstable();

    let kind_of = |la: usize, lb: usize| -> Option<ObjectKind> {
        let (x, y) = (la.min(lb), la.max(lb));
        kinds.iter().copied().find(|k| k.cycle_lengths() == (x, Some(y)))
    };
    let z = qc.z as u32;
    let mut out = Vec::new();
    let mut scratch = Scratch::default();
    let mut i = 0;
    while i < keys.len() {
        let mut j = i + 1;
        while j < keys.len() && keys[j].0 == keys[i].0 && keys[j].1 == keys[i].1 && keys[j].2 == keys[i].2 {
            j += 1;
        }
        for p in i..j {
            for q in p + 1..j {
                let (a, b) = (keys[p].3, keys[q].3);
                let na = &list.cycle_nodes[a as usize];
                let nb = &list.cycle_nodes[b as usize];
                let Some(kind) = kind_of(na.len(), nb.len()) else { continue };
                if shared_nodes(na, nb) != 3 {
                    continue;
                }
                if elementarity == Elementarity::Induced && !is_elementary(qc, z, na, nb, &mut scratch) {
                    continue;
                }
                let (a, b) = if na.len() <= nb.len() { (a, b) } else { (b, a) };
                out.push(ObjectRecord { kind, a, b });
            }
        }
        i = j;
    }
    out
}

/// Number of lifted nodes common to two cycles (CNs and VNs compared separately).
fn shared_nodes(a: &[u32], b: &[u32]) -> usize {
    let mut n = 0;
    for (s, &x) in a.iter().enumerate() {
        for (t, &y) in b.iter().enumerate() {
            if s % 2 == t % 2 && x == y {
                n += 1;
            }
        }
    }
    n
}

#[derive(Default)]
struct Scratch {
    vns: Vec<u32>,
    cns: Vec<u32>,
}

/// Every CN adjacent to the union's VNs connects at most two of them.
fn is_elementary(qc: &QcProtograph, z: u32, a: &[u32], b: &[u32], s: &mut Scratch) -> bool {
    s.vns.clear();
    s.vns.extend(a.iter().skip(1).step_by(2));
    s.vns.extend(b.iter().skip(1).step_by(2));
    s.vns.sort_unstable();
    s.vns.dedup();
    s.cns.clear();
    for &v in &s.vns {
        let (block, lift) = (v / z, v % z);
        for &e in qc.col_edges(block as usize) {
            let e = &qc.edges[e as usize];
            s.cns.push(e.row * z + (lift + z - e.power) % z);
        }
    }
    s.cns.sort_unstable();
    s.cns.windows(3).all(|w| !(w[0] == w[1] && w[1] == w[2]))
}

/// Per-kind MD counts: SC objects whose fundamental cycles all survive `Mr`,
/// times the number of copies `M`.
pub fn count_objects_md(list: &ObjectList, mr: &RelocationMatrix, aux: usize) -> Result<BTreeMap<ObjectKind, u64>> {
    if mr.rows() != list.gamma || mr.cols() != list.kappa {
        return Err(Error::Dimension {
            expected: format!("{}x{}", list.gamma, list.kappa),
            got: format!("{}x{}", mr.rows(), mr.cols()),
        });
    }
    let x = mr.grid().as_slice();
    let active: Vec<bool> = list.cycles.iter().map(|t| cycle_sum(t, x, aux as u32) == 0).collect();
    let mut out: BTreeMap<ObjectKind, u64> = list.counts().keys().map(|&k| (k, 0)).collect();
    for o in &list.objects {
        if active[o.a as usize] && (o.b == u32::MAX || active[o.b as usize]) {
            *out.get_mut(&o.kind).unwrap() += aux as u64;
        }
    }
    Ok(out)
}

pub(crate) mod codec {
    //! Raw accessors used by the binary cache.
    use super::*;

    type Parts<'a> = (&'a [Vec<u32>], &'a [Vec<(u16, u16)>]);

    pub fn parts(l: &ObjectList) -> Parts<'_> {
        (&l.cycle_nodes, &l.cycle_walks)
    }

    pub fn assemble(
        gamma: usize,
        kappa: usize,
        cycle_nodes: Vec<Vec<u32>>,
        cycle_walks: Vec<Vec<(u16, u16)>>,
        objects: Vec<(u8, u32, u32)>,
    ) -> Result<ObjectList> {
        let cycles = cycle_walks.iter().map(|w| terms_of(w, kappa)).collect();
        let objects = objects
            .into_iter()
            .map(|(k, a, b)| {
                let kind = ObjectKind::from_code(k).ok_or_else(|| Error::Parse(format!("bad kind code {k}")))?;
                Ok(ObjectRecord { kind, a, b })
            })
            .collect::<Result<_>>()?;
        Ok(ObjectList { gamma, kappa, cycles, cycle_nodes, cycle_walks, objects })
    }

    pub fn kind_code(k: ObjectKind) -> u8 {
        k.code()
    }
}
