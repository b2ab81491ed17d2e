//! Binary serialization of a [`CountMap`].
//!
//! ```text
//! "MCEN1"
//! n: u8, width: u8, H: u64 LE, m: u32 LE,
//! filter: u16 LE length + UTF-8 label, count: u64 LE
//! count x (key bytes [2 + n^2 * width], multiplicity u64 LE)
//! ```
//!
//! Pairs are written in ascending key-byte order.

use super::{CensusMeta, CountMap};
use crate::boxes::{BoxSpec, Filter};
use crate::error::{Error, Result};
use crate::key::{key_len, MatKey};
use std::io::{Read, Write};

pub const MAGIC: &[u8; 5] = b"MCEN1";

pub fn write_count_map<W: Write>(map: &CountMap, mut w: W) -> Result<()> {
    let meta = map.meta();
    w.write_all(MAGIC)?;
    w.write_all(&[meta.spec.n as u8, meta.width])?;
    w.write_all(&meta.spec.h.to_le_bytes())?;
    w.write_all(&meta.m.to_le_bytes())?;
    let label = meta.spec.filter.to_string();
    w.write_all(&(label.len() as u16).to_le_bytes())?;
    w.write_all(label.as_bytes())?;
    w.write_all(&map.distinct().to_le_bytes())?;
    for (k, v) in map.iter() {
        w.write_all(k.as_bytes())?;
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

fn take<const N: usize, R: Read>(r: &mut R) -> Result<[u8; N]> {
    let mut buf = [0u8; N];
    r.read_exact(&mut buf)?;
    Ok(buf)
}

pub fn read_count_map<R: Read>(mut r: R) -> Result<CountMap> {
    if &take::<5, _>(&mut r)? != MAGIC {
        return Err(Error::Parse("bad magic".into()));
    }
    let [n, width] = take::<2, _>(&mut r)?;
    let h = u64::from_le_bytes(take(&mut r)?);
    let m = u32::from_le_bytes(take(&mut r)?);
    let label_len = u16::from_le_bytes(take(&mut r)?) as usize;
    let mut label = vec![0u8; label_len];
    r.read_exact(&mut label)?;
    let label = String::from_utf8(label).map_err(|e| Error::Parse(e.to_string()))?;
    let filter: Filter = label.parse()?;
    let spec = BoxSpec::with_filter(n as usize, h, filter)?;
    let count = u64::from_le_bytes(take(&mut r)?);
    let klen = key_len(n as usize, width);
    let mut entries = Vec::with_capacity(count.min(1 << 20) as usize);
    let mut kbuf = vec![0u8; klen];
    for _ in 0..count {
        r.read_exact(&mut kbuf)?;
        let key = MatKey::from_bytes(&kbuf)?;
        if key.width() != width || key.as_bytes()[0] != n {
            return Err(Error::Parse("key header disagrees with meta block".into()));
        }
        let mult = u64::from_le_bytes(take(&mut r)?);
        if let Some((prev, _)) = entries.last() {
            if *prev >= key {
                return Err(Error::Parse("keys not strictly ascending".into()));
            }
        }
        entries.push((key, mult));
    }
    Ok(CountMap::from_sorted(CensusMeta { spec, m, width }, entries))
}
