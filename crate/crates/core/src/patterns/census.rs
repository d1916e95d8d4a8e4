//! Pattern census of two-cycle concatenations.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flcount::ObjectKind;
use crate::grade::binom;

/// Patterns with `(entries, columns, rows)` occur `multiplier · C(κ, columns) · C(γ, rows)` times.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternCensusRow {
    pub config: ObjectKind,
    pub entries: usize,
    pub vns: usize,
    pub cns: usize,
    pub multiplier: u128,
}

/// Number of `|E|` strata kept by default.
pub const DEFAULT_STRATA: usize = 3;

type Entry = (u8, u8);

/// A cycle candidate over matrix entries with its row junctions.
struct Candidate {
    entries: Vec<Entry>,
    /// `(row, low col, high col)`, the two junction entries and their other walk neighbors.
    junctions: Vec<((u8, u8, u8), [Entry; 2])>,
}

/// Closed non-backtracking walks of length `2g` over a `rows × cols` block whose
/// `2g` entries are distinct, one per rotation/reflection class.
fn candidates(rows: u8, cols: u8, g: usize) -> Vec<Candidate> {
    let mut out = Vec::new();
    let (nr, nc) = (rows as usize, cols as usize);
    let total = nr.pow(g as u32) * nc.pow(g as u32);
    let mut r = vec![0u8; g];
    let mut c = vec![0u8; g];
    for code in 0..total {
        let mut x = code;
        for v in r.iter_mut() {
            *v = (x % nr) as u8;
            x /= nr;
        }
        for v in c.iter_mut() {
            *v = (x % nc) as u8;
            x /= nc;
        }
        // Walk r0 c0 r1 c1 …: entry (r_i, c_i) then (r_{i+1}, c_i).
        if (0..g).any(|i| r[i] == r[(i + 1) % g] || c[i] == c[(i + g - 1) % g]) {
            continue;
        }
        let seq: Vec<u16> = (0..g).flat_map(|i| [r[i] as u16, 256 + c[i] as u16]).collect();
        if !is_canonical(&seq) {
            continue;
        }
        let mut entries: Vec<Entry> = (0..g).flat_map(|i| [(r[i], c[i]), (r[(i + 1) % g], c[i])]).collect();
        entries.sort_unstable();
        entries.dedup();
        if entries.len() != 2 * g {
            continue;
        }
        let junctions = (0..g)
            .map(|i| {
                let (ca, cb) = (c[(i + g - 1) % g], c[i]);
                let (na, nb) = ((r[(i + g - 1) % g], ca), (r[(i + 1) % g], cb));
                if ca < cb {
                    ((r[i], ca, cb), [na, nb])
                } else {
                    ((r[i], cb, ca), [nb, na])
                }
            })
            .collect();
        out.push(Candidate { entries, junctions });
    }
    out
}

/// Whether `seq` is the least rotation/reflection starting at a row node.
fn is_canonical(seq: &[u16]) -> bool {
    let n = seq.len();
    for rev in [false, true] {
        for st in (0..n).filter(|&st| if rev { st % 2 == 0 } else { st % 2 == 0 && st > 0 }) {
            let variant = (0..n).map(|k| if rev { seq[(st + n - k) % n] } else { seq[(st + k) % n] });
            if variant.lt(seq.iter().copied()) {
                return false;
            }
        }
    }
    true
}

/// Counts pairs of candidates joined at a shared row junction in one `rows × cols` block.
///
/// A pair qualifies when some junction appears in both walks and neither walk's
/// neighbor of a junction entry is an entry of the other walk (which would make the
/// junction a longer CN-VN-CN-VN chain). Pairs must cover every row and column.
fn block_counts(rows: u8, cols: u8, k: usize, l: usize) -> BTreeMap<usize, u128> {
    let a = candidates(rows, cols, k);
    let b_own;
    let b = if k == l {
        &a
    } else {
        b_own = candidates(rows, cols, l);
        &b_own
    };
    let mut index: HashMap<(u8, u8, u8), Vec<usize>> = HashMap::new();
    for (j, cand) in b.iter().enumerate() {
        for jn in &cand.junctions {
            index.entry(jn.0).or_default().push(j);
        }
    }
    let mut counts = BTreeMap::new();
    let mut seen = HashSet::new();
    for (i, ca) in a.iter().enumerate() {
        seen.clear();
        for (key, _) in &ca.junctions {
            for &j in index.get(key).map_or(&[][..], Vec::as_slice) {
                if (k == l && j <= i) || seen.contains(&j) {
                    continue;
                }
                let cb = &b[j];
                let joined = ca.junctions.iter().any(|(ka, na)| {
                    cb.junctions.iter().any(|(kb, nb)| {
                        ka == kb
                            && !na.iter().any(|e| cb.entries.binary_search(e).is_ok())
                            && !nb.iter().any(|e| ca.entries.binary_search(e).is_ok())
                    })
                });
                if !joined {
                    continue;
                }
                seen.insert(j);
                let mut all: Vec<Entry> = ca.entries.iter().chain(&cb.entries).copied().collect();
                all.sort_unstable();
                all.dedup();
                let rows_used = all.iter().map(|e| e.0).collect::<HashSet<_>>().len();
                let cols_used = all.iter().map(|e| e.1).collect::<HashSet<_>>().len();
                if rows_used == rows as usize && cols_used == cols as usize {
                    *counts.entry(all.len()).or_insert(0) += 1;
                }
            }
        }
    }
    counts
}

/// Census of the 6-6, 6-8 or 8-8 configuration with at most `gamma_max` rows.
/// Only the `DEFAULT_STRATA` largest entry counts are kept unless `all_strata` is set.
pub fn census(config: ObjectKind, gamma_max: usize, all_strata: bool) -> Result<Vec<PatternCensusRow>> {
    let (k, l) = match config {
        ObjectKind::Cfg66 => (3, 3),
        ObjectKind::Cfg68 => (3, 4),
        ObjectKind::Cfg88 => (4, 4),
        other => return Err(Error::Unsupported(format!("census covers concatenations only, got {other}"))),
    };
    if !(2..=8).contains(&gamma_max) {
        return Err(Error::InvalidParams(format!("gamma_max must lie in 2..=8, got {gamma_max}")));
    }
    let max_cols = k + l - 2;
    let blocks: Vec<(usize, usize)> = (2..=gamma_max).flat_map(|r| (2..=max_cols).map(move |c| (r, c))).collect();
    let mut rows: Vec<PatternCensusRow> =
        blocks
            .par_iter()
            .flat_map_iter(|&(cns, vns)| {
                block_counts(cns as u8, vns as u8, k, l)
                    .into_iter()
                    .map(move |(entries, multiplier)| PatternCensusRow { config, entries, vns, cns, multiplier })
            })
            .collect();
    rows.sort_by_key(|r| (r.entries, r.vns, r.cns));
    let mut strata: Vec<usize> = rows.iter().map(|r| r.entries).collect();
    strata.dedup();
    let keep = if all_strata { 0 } else { strata.len().saturating_sub(DEFAULT_STRATA) };
    let lowest = strata.get(keep).copied().unwrap_or(0);
    rows.retain(|r| r.entries >= lowest);
    Ok(rows)
}

/// Cardinality of the dominant classes from a census: `Σ multiplier · C(κ, vns) · C(γ, cns)`
/// over the largest stratum.
pub fn dominant_total(rows: &[PatternCensusRow], gamma: usize, kappa: usize) -> f64 {
    dominant_rows(rows).iter().map(|r| r.multiplier as f64 * binom(kappa, r.vns) * binom(gamma, r.cns)).sum()
}

/// Sum of the multipliers of the largest stratum, grouped by `(vns, cns)`.
pub fn dominant_rows(rows: &[PatternCensusRow]) -> Vec<PatternCensusRow> {
    let top = rows.iter().map(|r| r.entries).max().unwrap_or(0);
    rows.iter().filter(|r| r.entries == top).copied().collect()
}

pub fn write_census_csv(rows: &[PatternCensusRow], mut w: impl Write) -> Result<()> {
    writeln!(w, "config,entries,vns,cns,multiplier")?;
    for r in rows {
        writeln!(w, "{},{},{},{},{}", r.config, r.entries, r.vns, r.cns, r.multiplier)?;
    }
    Ok(())
}
