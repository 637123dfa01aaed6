//! Dense q-ary arrays over a [`CoordSet`], the serial/multidimensional
//! transforms between arrays and symbol sequences, and base-q index codes
//! for coordinates.

use crate::coord::{Coord, CoordSet};
use crate::error::{Error, Result};

/// A q-ary array: one symbol in `[0, q)` per domain coordinate. Values are
/// stored in increasing coordinate order of the domain, so serialization is
/// a plain copy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NdArray {
    domain: CoordSet,
    q: usize,
    values: Vec<u8>,
}

impl NdArray {
    pub fn new(domain: CoordSet, q: usize, values: Vec<u8>) -> Result<Self> {
        if q < 2 || q > 256 {
            return Err(Error::InvalidParameter(format!(
                "alphabet size {q} not in [2, 256]"
            )));
        }
        if values.len() != domain.len() {
            return Err(Error::LengthMismatch {
                got: values.len(),
                want: domain.len(),
            });
        }
        if let Some(&bad) = values.iter().find(|&&s| s as usize >= q) {
            return Err(Error::SymbolOutOfRange(bad as usize, q));
        }
        Ok(NdArray { domain, q, values })
    }

    pub fn zeros(domain: CoordSet, q: usize) -> Result<Self> {
        let len = domain.len();
        NdArray::new(domain, q, vec![0; len])
    }

    pub fn domain(&self) -> &CoordSet {
        &self.domain
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, v: &[usize]) -> Result<u8> {
        Ok(self.values[self.domain.rank(v)?])
    }

    pub fn set(&mut self, v: &[usize], s: u8) -> Result<()> {
        if s as usize >= self.q {
            return Err(Error::SymbolOutOfRange(s as usize, self.q));
        }
        let i = self.domain.rank(v)?;
        self.values[i] = s;
        Ok(())
    }

    /// The symbols in increasing coordinate order of the domain.
    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn into_values(self) -> Vec<u8> {
        self.values
    }
}

/// Serialize an array to its symbol sequence in increasing coordinate order.
pub fn sd(x: &NdArray) -> Vec<u8> {
    x.values().to_vec()
}

/// Rebuild an array over `domain` from a symbol sequence; inverse of [`sd`].
pub fn md(seq: &[u8], domain: CoordSet, q: usize) -> Result<NdArray> {
    NdArray::new(domain, q, seq.to_vec())
}

/// Base-q index code of `v` within `A`: the rank of `v` under the coordinate
/// order, written least-significant digit first, zero-padded to `width`.
pub fn index_encode(v: &[usize], a: &CoordSet, q: usize, width: usize) -> Result<Vec<u8>> {
    let rank = a.rank(v)?;
    rank_encode(rank, q, width)
}

/// Inverse of [`index_encode`].
pub fn index_decode(digits: &[u8], a: &CoordSet, q: usize) -> Result<Coord> {
    let rank = rank_decode(digits, q)?;
    if rank >= a.len() {
        return Err(Error::RankOutOfRange { rank, size: a.len() });
    }
    a.unrank(rank)
}

/// `rank` in base q, least-significant digit first, zero-padded to `width`.
pub fn rank_encode(mut rank: usize, q: usize, width: usize) -> Result<Vec<u8>> {
    let orig = rank;
    let mut digits = Vec::with_capacity(width);
    for _ in 0..width {
        digits.push((rank % q) as u8);
        rank /= q;
    }
    if rank != 0 {
        return Err(Error::RankOverflow {
            rank: orig,
            width,
            q,
        });
    }
    Ok(digits)
}

pub fn rank_decode(digits: &[u8], q: usize) -> Result<usize> {
    let mut rank = 0usize;
    for &dig in digits.iter().rev() {
        if dig as usize >= q {
            return Err(Error::SymbolOutOfRange(dig as usize, q));
        }
        rank = rank
            .checked_mul(q)
            .and_then(|r| r.checked_add(dig as usize))
            .ok_or(Error::RankOutOfRange {
                rank: usize::MAX,
                size: 0,
            })?;
    }
    Ok(rank)
}

/// Restriction of `x` to `v + a`, re-based at the origin.
pub fn read_sub(x: &NdArray, v: &[usize], a: &CoordSet) -> Result<NdArray> {
    let mut vals = Vec::with_capacity(a.len());
    for u in a.iter() {
        let w: Coord = v.iter().zip(&u).map(|(&p, &o)| p + o).collect();
        vals.push(x.get(&w)?);
    }
    NdArray::new(a.clone(), x.q(), vals)
}

/// Write `values` (in coordinate order of `a`) into `x` at offset `v`.
pub fn write_sub(x: &mut NdArray, v: &[usize], a: &CoordSet, values: &[u8]) -> Result<()> {
    if values.len() != a.len() {
        return Err(Error::LengthMismatch {
            got: values.len(),
            want: a.len(),
        });
    }
    for (u, &s) in a.iter().zip(values) {
        let w: Coord = v.iter().zip(&u).map(|(&p, &o)| p + o).collect();
        x.set(&w, s)?;
    }
    Ok(())
}

/// Parse a compact digit string like "000100" into symbols.
#[cfg(test)]
pub(crate) fn digits(s: &str) -> Vec<u8> {
    s.bytes().map(|b| b - b'0').collect()
}
