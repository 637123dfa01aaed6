//! Single-redundancy-symbol encoder and decoder for zero-cubes-free arrays.
//!
//! The encoder scans every cube window in increasing position order. A zero
//! window is overwritten with the contents of the lookup-cube (the corner
//! cube at position `(n-L)*1`), and the lookup-cube is refilled with the
//! base-q index of the window position shifted by the last unit vector,
//! zero-padded. The corner cell `(n-1)*1` is the last lookup cell in
//! serialization order, so the padding always writes 0 there; the decoder
//! unwinds while that cell reads 0.

use crate::array::{rank_encode, NdArray};
use crate::coord::{for_each_coord, mixed_radix_rank, mixed_radix_unrank, CoordSet};
use crate::error::{Error, Result};

/// Smallest w with q^w >= m.
pub(crate) fn ceil_log(q: usize, m: u128) -> usize {
    let mut w = 0;
    let mut p: u128 = 1;
    while p < m {
        p = p.saturating_mul(q as u128);
        w += 1;
    }
    w
}

/// Cube side used by the codec: the smallest L with
/// `L^d >= ceil(d log_q n) + 1`.
pub fn param_l(n: usize, d: usize, q: usize) -> Result<usize> {
    if n < 2 || d == 0 || q < 2 {
        return Err(Error::InvalidParameter(format!(
            "need n >= 2, d >= 1, q >= 2; got n={n} d={d} q={q}"
        )));
    }
    let a = ceil_log(q, (n as u128).pow(d as u32));
    let mut l = 1usize;
    while l.pow(d as u32) < a + 1 {
        l += 1;
    }
    if l > n {
        return Err(Error::UnsupportedSize(format!(
            "cube side {l} exceeds n={n}; no room for the lookup-cube"
        )));
    }
    Ok(l)
}

#[derive(Debug, Clone)]
pub struct ZeroCubesCodec {
    d: usize,
    q: usize,
    n: usize,
    l: usize,
    /// digits of a position code: ceil(log_q n^d)
    pos_width: usize,
}

/// One elimination: the window position and the full array right after the
/// replacement.
#[derive(Debug, Clone)]
pub struct EliminationStep {
    pub pos: Vec<usize>,
    pub after: Vec<u8>,
}

impl ZeroCubesCodec {
    pub fn new(n: usize, d: usize, q: usize) -> Result<Self> {
        let l = param_l(n, d, q)?;
        let pos_width = ceil_log(q, (n as u128).pow(d as u32));
        debug_assert!(pos_width < l.pow(d as u32));
        Ok(ZeroCubesCodec {
            d,
            q,
            n,
            l,
            pos_width,
        })
    }

    pub fn cube_side(&self) -> usize {
        self.l
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn q(&self) -> usize {
        self.q
    }

    fn cells(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    fn strides(&self) -> Vec<usize> {
        let mut s = vec![1usize; self.d];
        for i in (0..self.d - 1).rev() {
            s[i] = s[i + 1] * self.n;
        }
        s
    }

    /// Per-axis intersection of the window at `v` with the lookup-cube,
    /// empty if any axis misses.
    fn overlap(&self, v: &[usize]) -> Option<Vec<(usize, usize)>> {
        let lo = self.n - self.l;
        let mut ranges = Vec::with_capacity(self.d);
        for &vi in v {
            let a = vi.max(lo);
            let b = (vi + self.l).min(self.n);
            if a >= b {
                return None;
            }
            ranges.push((a, b));
        }
        Some(ranges)
    }

    fn in_overlap(ranges: &Option<Vec<(usize, usize)>>, w: &[usize]) -> bool {
        match ranges {
            None => false,
            Some(r) => w.iter().zip(r).all(|(&c, &(a, b))| c >= a && c < b),
        }
    }

    /// Cells of the lookup-cube in increasing order.
    fn lookup_coords(&self) -> Vec<Vec<usize>> {
        let lo = self.n - self.l;
        let mut out = Vec::new();
        for_each_coord(&vec![self.l; self.d], |u| {
            out.push(u.iter().map(|&c| c + lo).collect());
        });
        out
    }

    fn window_coords(&self, v: &[usize]) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for_each_coord(&vec![self.l; self.d], |u| {
            out.push(u.iter().zip(v).map(|(&c, &vc)| c + vc).collect());
        });
        out
    }

    pub fn encode(&self, w: &NdArray) -> Result<NdArray> {
        self.encode_impl(w, None)
    }

    pub fn encode_traced(&self, w: &NdArray) -> Result<(NdArray, Vec<EliminationStep>)> {
        let mut steps = Vec::new();
        let x = self.encode_impl(w, Some(&mut steps))?;
        Ok((x, steps))
    }

    fn encode_impl(
        &self,
        w: &NdArray,
        mut trace: Option<&mut Vec<EliminationStep>>,
    ) -> Result<NdArray> {
        let expect = CoordSet::CubeMinusLast {
            d: self.d,
            n: self.n,
        };
        if *w.domain() != expect || w.q() != self.q {
            return Err(Error::InvalidParameter(
                "encoder input must be the cube minus its last corner, same alphabet".into(),
            ));
        }
        // the missing corner is last in serialization order
        let mut vals = w.values().to_vec();
        vals.push(1);

        let st = self.strides();
        let idx = |c: &[usize]| -> usize { c.iter().zip(&st).map(|(&a, &s)| a * s).sum() };
        let lookup = self.lookup_coords();
        let win_offsets: Vec<usize> = {
            let mut offs = Vec::new();
            for_each_coord(&vec![self.l; self.d], |u| {
                offs.push(u.iter().zip(&st).map(|(&a, &s)| a * s).sum());
            });
            offs
        };

        let limits = vec![self.n - self.l + 1; self.d];
        let mut positions = Vec::new();
        for_each_coord(&limits, |v| positions.push(v.to_vec()));

        for v in positions {
            let base = idx(&v);
            if !win_offsets.iter().all(|&o| vals[base + o] == 0) {
                continue;
            }
            let ranges = self.overlap(&v);
            if ranges.is_none() {
                // disjoint: transplant the whole lookup-cube
                for (wc, lc) in self.window_coords(&v).iter().zip(&lookup) {
                    vals[idx(wc)] = vals[idx(lc)];
                }
            } else {
                // transplant only the non-intersecting part, both sides in
                // their own serialization order
                let ys: Vec<u8> = lookup
                    .iter()
                    .filter(|c| !Self::in_overlap(&ranges, c))
                    .map(|c| vals[idx(c)])
                    .collect();
                let targets: Vec<usize> = self
                    .window_coords(&v)
                    .iter()
                    .filter(|c| !Self::in_overlap(&ranges, c))
                    .map(|c| idx(c))
                    .collect();
                debug_assert_eq!(ys.len(), targets.len());
                for (t, y) in targets.into_iter().zip(ys) {
                    vals[t] = y;
                }
            }
            // refill the lookup-cube: index of v + e_{d-1}, zero-padded
            let mut vplus = v.clone();
            vplus[self.d - 1] += 1;
            let rank = mixed_radix_rank(&vplus, &vec![self.n; self.d]);
            debug_assert!(rank > 0);
            let mut payload = rank_encode(rank, self.q, self.pos_width)?;
            payload.resize(self.l.pow(self.d as u32), 0);
            for (lc, &dig) in lookup.iter().zip(&payload) {
                vals[idx(lc)] = dig;
            }
            if let Some(steps) = trace.as_deref_mut() {
                steps.push(EliminationStep {
                    pos: v.clone(),
                    after: vals.clone(),
                });
            }
        }
        NdArray::new(CoordSet::cube(self.d, self.n), self.q, vals)
    }

    pub fn decode(&self, x: &NdArray) -> Result<NdArray> {
        let expect = CoordSet::cube(self.d, self.n);
        if *x.domain() != expect || x.q() != self.q {
            return Err(Error::InvalidParameter(
                "decoder input must be a full cube with the codec's alphabet".into(),
            ));
        }
        let mut vals = x.values().to_vec();
        let st = self.strides();
        let idx = |c: &[usize]| -> usize { c.iter().zip(&st).map(|(&a, &s)| a * s).sum() };
        let lookup = self.lookup_coords();
        let corner = self.cells() - 1;
        let max_iters = (self.n - self.l + 1).pow(self.d as u32) + 1;

        let mut iters = 0;
        while vals[corner] == 0 {
            iters += 1;
            if iters > max_iters {
                return Err(Error::Corruption(
                    "decoder exceeded the elimination budget".into(),
                ));
            }
            let digits: Vec<u8> = lookup[..self.pos_width].iter().map(|c| vals[idx(c)]).collect();
            let rank = crate::array::rank_decode(&digits, self.q)?;
            if rank >= self.cells() {
                return Err(Error::Corruption(format!(
                    "payload rank {rank} out of range"
                )));
            }
            let vplus = mixed_radix_unrank(rank, &vec![self.n; self.d]);
            if vplus[self.d - 1] == 0 {
                return Err(Error::Corruption("payload position has no shift".into()));
            }
            let mut v = vplus;
            v[self.d - 1] -= 1;
            if v.iter().any(|&c| c > self.n - self.l) {
                return Err(Error::Corruption(format!(
                    "decoded position {v:?} outside the window range"
                )));
            }
            let ranges = self.overlap(&v);
            // restore the lookup-cube from the transplanted cells
            let sources: Vec<u8> = self
                .window_coords(&v)
                .iter()
                .filter(|c| !Self::in_overlap(&ranges, c))
                .map(|c| vals[idx(c)])
                .collect();
            let lookup_targets: Vec<usize> = lookup
                .iter()
                .filter(|c| !Self::in_overlap(&ranges, c))
                .map(|c| idx(c))
                .collect();
            debug_assert_eq!(sources.len(), lookup_targets.len());
            for (t, s) in lookup_targets.into_iter().zip(sources) {
                vals[t] = s;
            }
            // the whole window was a zero cube, including any overlap cells
            for wc in self.window_coords(&v) {
                vals[idx(&wc)] = 0;
            }
        }
        vals.pop();
        NdArray::new(
            CoordSet::CubeMinusLast {
                d: self.d,
                n: self.n,
            },
            self.q,
            vals,
        )
    }
}
