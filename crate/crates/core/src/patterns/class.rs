//! Object pattern classes and their characteristic polynomials.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::object::BipartiteObject;
use crate::error::{Error, Result};
use crate::grade::binom;
use crate::polyalg::{conv, sum_mod_m, CoefficientArray, ProbabilityMatrix};

/// An equivalence of VNs (base columns) and CNs (base rows) with its induced edge classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectPatternClass {
    /// Class label of every VN, labels in first-appearance order.
    pub vn_partition: Vec<usize>,
    pub cn_partition: Vec<usize>,
    /// Edge indices grouped by the base-matrix entry they share.
    pub edge_classes: Vec<Vec<usize>>,
    /// Sign of every edge on every basis cycle, `[edge][cycle]`.
    pub delta: Vec<Vec<i64>>,
}

fn canonical(labels: &[usize]) -> Vec<usize> {
    let mut map = Vec::new();
    labels
        .iter()
        .map(|l| {
            map.iter().position(|m| m == l).unwrap_or_else(|| {
                map.push(*l);
                map.len() - 1
            })
        })
        .collect()
}

impl ObjectPatternClass {
    pub fn new(obj: &BipartiteObject, vn_partition: Vec<usize>, cn_partition: Vec<usize>) -> Result<Self> {
        if vn_partition.len() != obj.vn_count() || cn_partition.len() != obj.cn_count() {
            return Err(Error::Dimension {
                expected: format!("{} VN and {} CN labels", obj.vn_count(), obj.cn_count()),
                got: format!("{} and {}", vn_partition.len(), cn_partition.len()),
            });
        }
        let (vn_partition, cn_partition) = (canonical(&vn_partition), canonical(&cn_partition));
        for c in 0..obj.cn_count() {
            let nb = obj.cn_neighbors(c);
            for (i, &a) in nb.iter().enumerate() {
                if nb[..i].iter().any(|&b| vn_partition[a] == vn_partition[b]) {
                    return Err(Error::InvalidParams(format!("VNs sharing CN {c} fall in one column class")));
                }
            }
        }
        for v in 0..obj.vn_count() {
            let nb = obj.vn_neighbors(v);
            for (i, &a) in nb.iter().enumerate() {
                if nb[..i].iter().any(|&b| cn_partition[a] == cn_partition[b]) {
                    return Err(Error::InvalidParams(format!("CNs sharing VN {v} fall in one row class")));
                }
            }
        }
        let mut keys: Vec<(usize, usize)> = Vec::new();
        let mut edge_classes: Vec<Vec<usize>> = Vec::new();
        for (k, &(c, v)) in obj.edges().iter().enumerate() {
            let key = (cn_partition[c], vn_partition[v]);
            match keys.iter().position(|x| *x == key) {
                Some(i) => edge_classes[i].push(k),
                None => {
                    keys.push(key);
                    edge_classes.push(vec![k]);
                }
            }
        }
        Ok(ObjectPatternClass { vn_partition, cn_partition, edge_classes, delta: obj.delta() })
    }

    /// The class in which every node is its own class.
    pub fn discrete(obj: &BipartiteObject) -> Result<Self> {
        Self::new(obj, (0..obj.vn_count()).collect(), (0..obj.cn_count()).collect())
    }

    pub fn vn_classes(&self) -> usize {
        self.vn_partition.iter().max().map_or(0, |m| m + 1)
    }
    pub fn cn_classes(&self) -> usize {
        self.cn_partition.iter().max().map_or(0, |m| m + 1)
    }
    /// Number of distinct base-matrix entries covered.
    pub fn entry_count(&self) -> usize {
        self.edge_classes.len()
    }

    /// Summed sign vector of every edge class.
    pub fn class_exponents(&self) -> Vec<Vec<i64>> {
        let s = self.delta.first().map_or(0, Vec::len);
        self.edge_classes
            .iter()
            .map(|cls| (0..s).map(|t| cls.iter().map(|&e| self.delta[e][t]).sum()).collect())
            .collect()
    }
}

/// `f(Π X_s^{a_s}, Π Y_s^{a_s})` over `(X_1..X_S, Y_1..Y_S)`.
pub fn monomial_array(p: &ProbabilityMatrix, a: &[i64]) -> CoefficientArray {
    let (rows, cols) = (p.rows() as i64, p.cols() as i64);
    let axis = |n: i64, e: i64| ((n - 1) * e).min(0);
    let ext = |n: i64, e: i64| ((n - 1) * e.abs() + 1) as usize;
    let offsets = a.iter().map(|&e| axis(rows, e)).chain(a.iter().map(|&e| axis(cols, e))).collect();
    let shape = a.iter().map(|&e| ext(rows, e)).chain(a.iter().map(|&e| ext(cols, e))).collect();
    let mut out = CoefficientArray::zeros(offsets, shape);
    let s = a.len();
    let mut exps = vec![0i64; 2 * s];
    for i in 0..rows {
        for j in 0..cols {
            for t in 0..s {
                exps[t] = i * a[t];
                exps[s + t] = j * a[t];
            }
            let v = out.get(&exps) + p.get(i as usize, j as usize);
            out.set(&exps, v).expect("inside extents");
        }
    }
    out
}

/// Characteristic polynomial of one pattern class over `2·|basis|` variables.
pub fn char_poly_class(
    obj: &BipartiteObject,
    cls: &ObjectPatternClass,
    p: &ProbabilityMatrix,
) -> Result<CoefficientArray> {
    if cls.delta.len() != obj.edges().len() || cls.delta.iter().any(|r| r.len() != obj.cycle_basis().len()) {
        return Err(Error::InvalidParams("sign map does not match the object".into()));
    }
    let s = obj.cycle_basis().len();
    let mut acc = CoefficientArray::constant(2 * s, 1.0);
    for a in cls.class_exponents() {
        if a.iter().all(|&e| e == 0) {
            acc = acc.scale(p.total());
        } else {
            acc = conv(&acc, &monomial_array(p, &a))?;
        }
    }
    Ok(acc)
}

/// Activeness probability of any pattern in the class.
pub fn class_probability(obj: &BipartiteObject, cls: &ObjectPatternClass, p: &ProbabilityMatrix) -> Result<f64> {
    let s = obj.cycle_basis().len();
    if s == 0 {
        return Ok(p.total().powi(cls.entry_count() as i32));
    }
    let h = char_poly_class(obj, cls, p)?;
    sum_mod_m(&h, &vec![0; s], p.cols(), &(s..2 * s).collect::<Vec<_>>())
}

/// Automorphisms of `obj` that map the class partition onto itself.
pub fn stabilizer_size(cls: &ObjectPatternClass, auts: &[(Vec<usize>, Vec<usize>)]) -> usize {
    auts.iter().filter(|(pv, pc)| preserves(&cls.vn_partition, pv) && preserves(&cls.cn_partition, pc)).count()
}

fn preserves(labels: &[usize], perm: &[usize]) -> bool {
    (0..labels.len())
        .all(|a| (0..labels.len()).all(|b| (labels[a] == labels[b]) == (labels[perm[a]] == labels[perm[b]])))
}

/// Number of patterns of the class inside one `|C| × |V|` all-one block.
///
/// This is `|V|!·|C|!` divided by the number of distinct class permutations
/// induced by `Aut(G | V, C)`. Automorphisms that fix every class (such as the
/// half-turn of a cycle-4 traversed twice) leave the assignment unchanged and
/// are not divided out.
pub fn class_multiplier(cls: &ObjectPatternClass, auts: &[(Vec<usize>, Vec<usize>)]) -> u128 {
    let fact = |n: usize| (1..=n as u128).product::<u128>();
    let induced: HashSet<(Vec<usize>, Vec<usize>)> = auts
        .iter()
        .filter(|(pv, pc)| preserves(&cls.vn_partition, pv) && preserves(&cls.cn_partition, pc))
        .map(|(pv, pc)| (induced_map(&cls.vn_partition, pv), induced_map(&cls.cn_partition, pc)))
        .collect();
    fact(cls.vn_classes()) * fact(cls.cn_classes()) / induced.len().max(1) as u128
}

fn induced_map(labels: &[usize], perm: &[usize]) -> Vec<usize> {
    let n = labels.iter().max().map_or(0, |m| m + 1);
    let mut map = vec![0; n];
    for (a, &b) in perm.iter().enumerate() {
        map[labels[a]] = labels[b];
    }
    map
}

/// Cardinality of the class in a `γ × κ` all-one base matrix.
pub fn class_cardinality(obj: &BipartiteObject, cls: &ObjectPatternClass, gamma: usize, kappa: usize) -> u128 {
    let auts = obj.automorphisms();
    class_multiplier(cls, &auts) * binom(kappa, cls.vn_classes()) as u128 * binom(gamma, cls.cn_classes()) as u128
}

/// All valid partitions of one side; `conflicts[i]` lists earlier nodes sharing a neighbor with `i`.
fn partitions(n: usize, conflicts: &[Vec<usize>], max_classes: usize) -> Vec<Vec<usize>> {
    fn rec(
        i: usize,
        n: usize,
        conflicts: &[Vec<usize>],
        max: usize,
        cur: &mut Vec<usize>,
        used: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for l in 0..=used.min(max.saturating_sub(1)) {
            if l == used && used >= max {
                break;
            }
            if conflicts[i].iter().any(|&j| cur[j] == l) {
                continue;
            }
            cur.push(l);
            rec(i + 1, n, conflicts, max, cur, used.max(l + 1), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, conflicts, max_classes, &mut Vec::with_capacity(n), 0, &mut out);
    out
}

/// One representative of every pattern class of `obj`, up to automorphism,
/// with at most `max_cn` row classes and `max_vn` column classes.
pub fn enumerate_classes(obj: &BipartiteObject, max_cn: usize, max_vn: usize) -> Result<Vec<ObjectPatternClass>> {
    let vconf: Vec<Vec<usize>> = (0..obj.vn_count())
        .map(|v| (0..v).filter(|&u| obj.vn_neighbors(v).iter().any(|c| obj.cn_neighbors(*c).contains(&u))).collect())
        .collect();
    let cconf: Vec<Vec<usize>> = (0..obj.cn_count())
        .map(|c| (0..c).filter(|&d| obj.cn_neighbors(c).iter().any(|v| obj.vn_neighbors(*v).contains(&d))).collect())
        .collect();
    let vparts = partitions(obj.vn_count(), &vconf, max_vn);
    let cparts = partitions(obj.cn_count(), &cconf, max_cn);
    let auts = obj.automorphisms();
    let mut out = Vec::new();
    for vp in &vparts {
        for cp in &cparts {
            let key = (vp.clone(), cp.clone());
            let minimal = auts.iter().all(|(pv, pc)| {
                let img = (relabel(vp, pv), relabel(cp, pc));
                img >= key
            });
            if minimal {
                out.push(ObjectPatternClass::new(obj, vp.clone(), cp.clone())?);
            }
        }
    }
    Ok(out)
}

/// Partition whose class of node `perm[a]` is the class of `a`, canonically labelled.
fn relabel(labels: &[usize], perm: &[usize]) -> Vec<usize> {
    let mut img = vec![0; labels.len()];
    for (a, &b) in perm.iter().enumerate() {
        img[b] = labels[a];
    }
    canonical(&img)
}

/// Characteristic polynomial of the object: cardinality-weighted sum over all classes.
pub fn char_poly_object(
    obj: &BipartiteObject,
    gamma: usize,
    kappa: usize,
    p: &ProbabilityMatrix,
) -> Result<CoefficientArray> {
    let auts = obj.automorphisms();
    let mut acc = CoefficientArray::constant(2 * obj.cycle_basis().len(), 0.0);
    for cls in enumerate_classes(obj, gamma, kappa)? {
        let card =
            class_multiplier(&cls, &auts) as f64 * binom(kappa, cls.vn_classes()) * binom(gamma, cls.cn_classes());
        acc = acc.add_scaled(&char_poly_class(obj, &cls, p)?, card)?;
    }
    Ok(acc)
}

/// Expected number of active patterns of `obj` in the MD protograph.
pub fn expected_active(obj: &BipartiteObject, gamma: usize, kappa: usize, p: &ProbabilityMatrix) -> Result<f64> {
    let auts = obj.automorphisms();
    let mut total = 0.0;
    for cls in enumerate_classes(obj, gamma, kappa)? {
        let card =
            class_multiplier(&cls, &auts) as f64 * binom(kappa, cls.vn_classes()) * binom(gamma, cls.cn_classes());
        total += card * class_probability(obj, &cls, p)?;
    }
    Ok(total)
}
