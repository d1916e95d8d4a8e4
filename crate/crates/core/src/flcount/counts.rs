use std::collections::BTreeMap;

use super::objects::{list_objects, Elementarity, ObjectKind};
use super::walks::count_cycles;
use crate::code_model::{CodeParams, DesignTriple, LiftingMatrix, PartitionMatrix, QcProtograph};
use crate::error::Result;

/// Exact cycle counts of the lifted MD-SC graph, per length.
pub fn count_cycles_md(t: &DesignTriple, p: &CodeParams, lengths: &[usize]) -> Result<BTreeMap<usize, u64>> {
    let qc = QcProtograph::md(t, p)?;
    lengths.iter().map(|&l| Ok((l, count_cycles(&qc, l)?))).collect()
}

/// Exact cycle counts of the lifted SC graph, per length.
pub fn count_cycles_sc(
    k: &PartitionMatrix,
    lf: &LiftingMatrix,
    p: &CodeParams,
    lengths: &[usize],
) -> Result<BTreeMap<usize, u64>> {
    let qc = QcProtograph::sc(k, lf, p)?;
    lengths.iter().map(|&l| Ok((l, count_cycles(&qc, l)?))).collect()
}

fn count_kinds(qc: &QcProtograph, p: &CodeParams, kinds: &[ObjectKind]) -> Result<BTreeMap<ObjectKind, u64>> {
    let mut out = BTreeMap::new();
    let cfg: Vec<ObjectKind> = kinds.iter().copied().filter(|k| !k.is_cycle()).collect();
    for &k in kinds.iter().filter(|k| k.is_cycle()) {
        out.insert(k, count_cycles(qc, k.cycle_lengths().0)?);
    }
    if !cfg.is_empty() {
        let list = list_objects(qc, p, &cfg, Elementarity::default())?;
        let counts = list.counts();
        for k in cfg {
            out.insert(k, counts.get(&k).copied().unwrap_or(0));
        }
    }
    Ok(out)
}

/// Object counts taken directly on the MD-SC graph.
///
/// This also finds objects whose projection onto the SC graph is not itself an
/// object (two copies of one SC node), which survivor counting misses.
pub fn count_objects_md_direct(
    t: &DesignTriple,
    p: &CodeParams,
    kinds: &[ObjectKind],
) -> Result<BTreeMap<ObjectKind, u64>> {
    count_kinds(&QcProtograph::md(t, p)?, p, kinds)
}

/// Object counts of the SC graph.
pub fn count_objects_sc(
    k: &PartitionMatrix,
    lf: &LiftingMatrix,
    p: &CodeParams,
    kinds: &[ObjectKind],
) -> Result<BTreeMap<ObjectKind, u64>> {
    count_kinds(&QcProtograph::sc(k, lf, p)?, p, kinds)
}
