use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::flcount::{cycle_sum, CycleTerms, ObjectKind, ObjectList};

/// Value of one relocation vector.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Eval {
    pub value: f64,
    /// Survivors of the top lexicographic tier; zero for weighted objectives.
    pub primary: u64,
    /// Survivor counts indexed by `ObjectKind as usize`.
    pub counts: [u64; 6],
}

/// Objective driven by the sampler.
pub trait BlockObjective: Sync {
    fn evaluate(&self, x: &[u32]) -> Eval;

    /// Values of `x` with `block` overwritten by each candidate.
    fn evaluate_block(&self, x: &[u32], _current: &Eval, block: &[usize], candidates: &[Vec<u32>]) -> Vec<Eval> {
        candidates
            .par_iter()
            .map(|c| {
                let mut y = x.to_vec();
                for (&p, &v) in block.iter().zip(c) {
                    y[p] = v;
                }
                self.evaluate(&y)
            })
            .collect()
    }
}

/// How survivor counts combine into one value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectiveWeights {
    /// Cycle-4 and cycle-6 survivors first, then cycle-8.
    Lexicographic,
    /// Weighted sum over the listed kinds; other kinds are ignored.
    Weighted(Vec<(ObjectKind, f64)>),
}

impl ObjectiveWeights {
    /// Concatenation weights `(w66, w68, w88)`.
    pub fn concat(w66: f64, w68: f64, w88: f64) -> Self {
        ObjectiveWeights::Weighted(vec![(ObjectKind::Cfg66, w66), (ObjectKind::Cfg68, w68), (ObjectKind::Cfg88, w88)])
    }

    pub fn uniform(kinds: &[ObjectKind]) -> Self {
        ObjectiveWeights::Weighted(kinds.iter().map(|&k| (k, 1.0)).collect())
    }
}

#[derive(Debug, Clone, Copy)]
struct Group {
    a: u32,
    b: u32,
    kind: u8,
    mult: u64,
}

/// Weighted count of surviving objects, with objects that share cycle
/// signatures collapsed into one group.
#[derive(Debug, Clone)]
pub struct SurvivorObjective {
    aux: u32,
    sigs: Vec<CycleTerms>,
    groups: Vec<Group>,
    pos_sigs: Vec<Vec<u32>>,
    sig_groups: Vec<Vec<u32>>,
    weights: [f64; 6],
    primary_mask: u8,
}

impl SurvivorObjective {
    pub fn new(list: &ObjectList, aux: usize, weights: &ObjectiveWeights) -> Self {
        let mut sig_id: HashMap<&CycleTerms, u32> = HashMap::new();
        let mut sigs: Vec<CycleTerms> = Vec::new();
        let mut remap = Vec::with_capacity(list.cycles.len());
        for t in &list.cycles {
            let id = *sig_id.entry(t).or_insert_with(|| {
                sigs.push(t.clone());
                sigs.len() as u32 - 1
            });
            remap.push(id);
        }

        let mut w = [0.0; 6];
        let mut primary_mask = 0u8;
        match weights {
            ObjectiveWeights::Weighted(ws) => {
                for &(k, v) in ws {
                    w[k as usize] = v;
                }
            }
            ObjectiveWeights::Lexicographic => {
                let counts = list.counts();
                let n = |k: ObjectKind| counts.get(&k).copied().unwrap_or(0) as f64;
                let tier2 = 1.0 + n(ObjectKind::Cycle8);
                w[ObjectKind::Cycle8 as usize] = 1.0;
                w[ObjectKind::Cycle6 as usize] = tier2;
                w[ObjectKind::Cycle4 as usize] = tier2 * (1.0 + n(ObjectKind::Cycle6));
                primary_mask = (1 << ObjectKind::Cycle4 as u8) | (1 << ObjectKind::Cycle6 as u8);
            }
        }

        let mut grouped: HashMap<(u8, u32, u32), u64> = HashMap::new();
        for o in &list.objects {
            let kind = o.kind as u8;
            if w[kind as usize] == 0.0 {
                continue;
            }
            let a = remap[o.a as usize];
            let b = if o.b == u32::MAX { u32::MAX } else { remap[o.b as usize] };
            let (a, b) = if b != u32::MAX && b < a { (b, a) } else { (a, b) };
            *grouped.entry((kind, a, b)).or_insert(0) += 1;
        }
        let mut groups: Vec<Group> =
            grouped.into_iter().map(|((kind, a, b), mult)| Group { a, b, kind, mult }).collect();
        groups.sort_unstable_by_key(|g| (g.kind, g.a, g.b));

        let mut sig_groups = vec![Vec::new(); sigs.len()];
        for (gi, g) in groups.iter().enumerate() {
            sig_groups[g.a as usize].push(gi as u32);
            if g.b != u32::MAX && g.b != g.a {
                sig_groups[g.b as usize].push(gi as u32);
            }
        }
        let mut pos_sigs = vec![Vec::new(); list.positions()];
        for (s, t) in sigs.iter().enumerate() {
            if !sig_groups[s].is_empty() {
                for &(p, _) in t {
                    pos_sigs[p as usize].push(s as u32);
                }
            }
        }
        SurvivorObjective { aux: aux as u32, sigs, groups, pos_sigs, sig_groups, weights: w, primary_mask }
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn positions(&self) -> usize {
        self.pos_sigs.len()
    }

    /// Number of distinct cycle signatures referenced by some group.
    pub fn signature_count(&self) -> usize {
        self.sig_groups.iter().filter(|g| !g.is_empty()).count()
    }

    pub fn group_count(&self) -> usize {
        self.groups.len()
    }

    /// Per position, number of weighted objects whose relocation sum involves it.
    pub fn involvement(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.positions()];
        for g in &self.groups {
            let mut ps: Vec<u16> = self.sigs[g.a as usize].iter().map(|t| t.0).collect();
            if g.b != u32::MAX {
                ps.extend(self.sigs[g.b as usize].iter().map(|t| t.0));
            }
            ps.sort_unstable();
            ps.dedup();
            for p in ps {
                out[p as usize] += g.mult;
            }
        }
        out
    }

    /// Pairwise correlation: weighted objects touching both positions.
    pub fn correlation(&self) -> Vec<Vec<u64>> {
        let n = self.positions();
        let mut c = vec![vec![0u64; n]; n];
        for g in &self.groups {
            let mut ps: Vec<u16> = self.sigs[g.a as usize].iter().map(|t| t.0).collect();
            if g.b != u32::MAX {
                ps.extend(self.sigs[g.b as usize].iter().map(|t| t.0));
            }
            ps.sort_unstable();
            ps.dedup();
            for (i, &p) in ps.iter().enumerate() {
                for &q in &ps[i + 1..] {
                    c[p as usize][q as usize] += g.mult;
                    c[q as usize][p as usize] += g.mult;
                }
            }
        }
        c
    }

    fn finish(&self, counts: [u64; 6]) -> Eval {
        let value = counts.iter().zip(&self.weights).map(|(&c, &w)| c as f64 * w).sum();
        let primary = (0..6).filter(|k| self.primary_mask >> k & 1 == 1).map(|k| counts[k]).sum();
        Eval { value, primary, counts }
    }

    fn group_active(&self, g: &Group, active: impl Fn(u32) -> bool) -> bool {
        active(g.a) && (g.b == u32::MAX || active(g.b))
    }
}

impl BlockObjective for SurvivorObjective {
    fn evaluate(&self, x: &[u32]) -> Eval {
        let active: Vec<bool> = self.sigs.iter().map(|t| cycle_sum(t, x, self.aux) == 0).collect();
        let mut counts = [0u64; 6];
        for g in &self.groups {
            if self.group_active(g, |s| active[s as usize]) {
                counts[g.kind as usize] += g.mult;
            }
        }
        self.finish(counts)
    }

    fn evaluate_block(&self, x: &[u32], current: &Eval, block: &[usize], candidates: &[Vec<u32>]) -> Vec<Eval> {
        let mut aff: Vec<u32> = block.iter().flat_map(|&p| self.pos_sigs[p].iter().copied()).collect();
        aff.sort_unstable();
        aff.dedup();
        let mut groups: Vec<u32> = aff.iter().flat_map(|&s| self.sig_groups[s as usize].iter().copied()).collect();
        groups.sort_unstable();
        groups.dedup();
        let cur_active: Vec<bool> = self.sigs.iter().map(|t| cycle_sum(t, x, self.aux) == 0).collect();
        let tally = |active: &[bool]| -> [u64; 6] {
            let mut c = [0u64; 6];
            for &gi in &groups {
                let g = &self.groups[gi as usize];
                if self.group_active(g, |s| active[s as usize]) {
                    c[g.kind as usize] += g.mult;
                }
            }
            c
        };
        let base = tally(&cur_active);
        candidates
            .par_iter()
            .map(|cand| {
                let mut y = x.to_vec();
                for (&p, &v) in block.iter().zip(cand) {
                    y[p] = v;
                }
                let mut act = cur_active.clone();
                for &s in &aff {
                    act[s as usize] = cycle_sum(&self.sigs[s as usize], &y, self.aux) == 0;
                }
                let new = tally(&act);
                let mut counts = current.counts;
                for k in 0..6 {
                    counts[k] = counts[k] + new[k] - base[k];
                }
                self.finish(counts)
            })
            .collect()
    }
}
