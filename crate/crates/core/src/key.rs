//! Canonical byte keys for matrices.
//!
//! Layout: byte 0 is `n`, byte 1 is the per-entry width `w`, then `n * n`
//! entries in row-major order, each as `w` bytes of little-endian two's
//! complement. Keys compare bytewise, which is the order used for every
//! sorted serialization.

use crate::error::{Error, Result};
use crate::mat::{Mat, MAX_DIM};
use smallvec::SmallVec;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatKey(SmallVec<[u8; 30]>);

/// Smallest width (in bytes) whose signed range holds every value in
/// `[-bound, bound]`.
pub fn width_for_bound(bound: u128) -> Result<u8> {
    for w in 1u8..=16 {
        let max = if w == 16 {
            i128::MAX as u128
        } else {
            (1u128 << (8 * w as u32 - 1)) - 1
        };
        if bound <= max {
            return Ok(w);
        }
    }
    Err(Error::Overflow)
}

#[inline]
fn fits(v: i128, width: u8) -> bool {
    if width >= 16 {
        return true;
    }
    let half = 1i128 << (8 * width as u32 - 1);
    (-half..half).contains(&v)
}

impl MatKey {
    pub fn encode(a: &Mat, width: u8) -> Result<MatKey> {
        if !(1..=16).contains(&width) {
            return Err(Error::OutOfRange(format!("key width {width}")));
        }
        let n = a.n();
        let mut bytes = SmallVec::with_capacity(2 + n * n * width as usize);
        bytes.push(n as u8);
        bytes.push(width);
        for &v in a.entries() {
            if !fits(v, width) {
                return Err(Error::WidthExceeded { value: v, width });
            }
            bytes.extend_from_slice(&v.to_le_bytes()[..width as usize]);
        }
        Ok(MatKey(bytes))
    }

    pub fn decode(&self) -> Result<Mat> {
        let (n, width) = self.header()?;
        let mut vals = [0i128; MAX_DIM * MAX_DIM];
        for (i, chunk) in self.0[2..].chunks_exact(width).enumerate() {
            let mut buf = [0u8; 16];
            buf[..width].copy_from_slice(chunk);
            // sign-extend
            if chunk[width - 1] & 0x80 != 0 {
                buf[width..].fill(0xff);
            }
            vals[i] = i128::from_le_bytes(buf);
        }
        Mat::new(n, &vals[..n * n])
    }

    /// Wraps raw bytes after validating the header and length.
    pub fn from_bytes(bytes: &[u8]) -> Result<MatKey> {
        let key = MatKey(SmallVec::from_slice(bytes));
        key.header()?;
        Ok(key)
    }

    fn header(&self) -> Result<(usize, usize)> {
        if self.0.len() < 2 {
            return Err(Error::MalformedKey("shorter than header".into()));
        }
        let (n, width) = (self.0[0] as usize, self.0[1] as usize);
        if !(1..=MAX_DIM).contains(&n) || !(1..=16).contains(&width) {
            return Err(Error::MalformedKey(format!("n={n}, width={width}")));
        }
        let expected = key_len(n, width as u8);
        if self.0.len() != expected {
            return Err(Error::MalformedKey(format!(
                "length {} != {expected}",
                self.0.len()
            )));
        }
        Ok((n, width))
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn width(&self) -> u8 {
        self.0[1]
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// 64-bit mix of the key bytes (FNV-1a followed by a murmur finalizer).
    pub fn mix64(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for &b in self.0.iter() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        h ^= h >> 33;
        h = h.wrapping_mul(0xff51_afd7_ed55_8ccd);
        h ^= h >> 33;
        h = h.wrapping_mul(0xc4ce_b9fe_1a85_ec53);
        h ^ (h >> 33)
    }

    /// Shard index: the low 8 bits of [`MatKey::mix64`].
    #[inline]
    pub fn shard(&self) -> usize {
        (self.mix64() & 0xff) as usize
    }
}

/// Key length in bytes for dimension `n` and entry width `width`.
pub fn key_len(n: usize, width: u8) -> usize {
    2 + n * n * width as usize
}

impl fmt::Debug for MatKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatKey({})", self.to_hex())
    }
}
