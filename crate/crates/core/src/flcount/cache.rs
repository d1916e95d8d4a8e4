//! Versioned binary cache for object lists.
//!
//! Layout (little endian): magic `MDSCOBJ\0`, format version `u32`, 32-byte
//! SHA-256 of the code identity, kind bitmask `u8`, object count `u64`,
//! `gamma u32`, `kappa u32`, cycle count `u32`, then per cycle `len u8`,
//! `len` node ids `u32` and `len` entry pairs `(u16, u16)`, then per object
//! `kind u8, a u32, b u32`.

use std::io::{Read, Write};

use sha2::{Digest, Sha256};

use super::objects::{codec, ObjectKind, ObjectList};
use crate::code_model::{CodeParams, LiftingMatrix, PartitionMatrix};
use crate::error::{Error, Result};

const MAGIC: &[u8; 8] = b"MDSCOBJ\0";
pub const FORMAT_VERSION: u32 = 1;

/// Hash identifying the SC code and requested kinds.
pub fn code_hash(p: &CodeParams, k: &PartitionMatrix, lf: &LiftingMatrix, kinds: &[ObjectKind]) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(serde_json::to_vec(p).expect("params serialize"));
    for &v in k.grid().as_slice().iter().chain(lf.grid().as_slice()) {
        h.update(v.to_le_bytes());
    }
    h.update([kind_mask(kinds)]);
    h.finalize().into()
}

fn kind_mask(kinds: &[ObjectKind]) -> u8 {
    kinds.iter().fold(0u8, |m, &k| m | (1 << codec::kind_code(k)))
}

pub fn write_cache(w: &mut impl Write, list: &ObjectList, hash: &[u8; 32]) -> Result<()> {
    let (nodes, walks) = codec::parts(list);
    let kinds: Vec<ObjectKind> = list.counts().keys().copied().collect();
    w.write_all(MAGIC)?;
    w.write_all(&FORMAT_VERSION.to_le_bytes())?;
    w.write_all(hash)?;
    w.write_all(&[kind_mask(&kinds)])?;
    w.write_all(&(list.objects.len() as u64).to_le_bytes())?;
    w.write_all(&(list.gamma as u32).to_le_bytes())?;
    w.write_all(&(list.kappa as u32).to_le_bytes())?;
    w.write_all(&(nodes.len() as u32).to_le_bytes())?;
    for (n, wk) in nodes.iter().zip(walks) {
        w.write_all(&[n.len() as u8])?;
        for v in n {
            w.write_all(&v.to_le_bytes())?;
        }
        for &(i, j) in wk {
            w.write_all(&i.to_le_bytes())?;
            w.write_all(&j.to_le_bytes())?;
        }
    }
    for o in &list.objects {
        w.write_all(&[codec::kind_code(o.kind)])?;
        w.write_all(&o.a.to_le_bytes())?;
        w.write_all(&o.b.to_le_bytes())?;
    }
    Ok(())
}

struct Reader<R: Read>(R);

impl<R: Read> Reader<R> {
    fn bytes<const N: usize>(&mut self) -> Result<[u8; N]> {
        let mut b = [0u8; N];
        self.0.read_exact(&mut b)?;
        Ok(b)
    }
    fn u8(&mut self) -> Result<u8> {
        Ok(self.bytes::<1>()?[0])
    }
    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.bytes()?))
    }
    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.bytes()?))
    }
    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.bytes()?))
    }
}

/// Reads a cache, rejecting it if the version or code hash differ.
pub fn read_cache(r: impl Read, expected_hash: Option<&[u8; 32]>) -> Result<ObjectList> {
    let mut r = Reader(r);
    if &r.bytes::<8>()? != MAGIC {
        return Err(Error::Parse("not an object cache".into()));
    }
    let version = r.u32()?;
    if version != FORMAT_VERSION {
        return Err(Error::Parse(format!("cache version {version}, expected {FORMAT_VERSION}")));
    }
    let hash = r.bytes::<32>()?;
    if let Some(h) = expected_hash {
        if h != &hash {
            return Err(Error::Parse("cache belongs to a different code".into()));
        }
    }
    let _mask = r.u8()?;
    let n_obj = r.u64()? as usize;
    let gamma = r.u32()? as usize;
    let kappa = r.u32()? as usize;
    let n_cyc = r.u32()? as usize;
    let mut nodes = Vec::with_capacity(n_cyc);
    let mut walks = Vec::with_capacity(n_cyc);
    for _ in 0..n_cyc {
        let len = r.u8()? as usize;
        nodes.push((0..len).map(|_| r.u32()).collect::<Result<Vec<_>>>()?);
        walks.push((0..len).map(|_| Ok((r.u16()?, r.u16()?))).collect::<Result<Vec<_>>>()?);
    }
    let mut objects = Vec::with_capacity(n_obj);
    for _ in 0..n_obj {
        let k = r.u8()?;
        let a = r.u32()?;
        let b = r.u32()?;
        if a as usize >= n_cyc || (b != u32::MAX && b as usize >= n_cyc) {
            return Err(Error::Parse("object references a missing cycle".into()));
        }
        objects.push((k, a, b));
    }
    codec::assemble(gamma, kappa, nodes, walks, objects)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::flcount::list_active_objects;

    #[test]
    fn round_trip() {
        let c = catalog::md_code_1();
        let kinds = [ObjectKind::Cycle6];
        let list = list_active_objects(&c.triple.partition, &c.triple.lifting, &c.params, &kinds).unwrap();
        let h = code_hash(&c.params, &c.triple.partition, &c.triple.lifting, &kinds);
        let mut buf = Vec::new();
        write_cache(&mut buf, &list, &h).unwrap();
        let back = read_cache(buf.as_slice(), Some(&h)).unwrap();
        assert_eq!(back.objects, list.objects);
        assert_eq!(back.cycles, list.cycles);
        assert_eq!(back.object(5), list.object(5));
        let other = [7u8; 32];
        assert!(read_cache(buf.as_slice(), Some(&other)).is_err());
        assert!(read_cache(&buf[..20], None).is_err());
    }
}
