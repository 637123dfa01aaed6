//! Single-redundancy-symbol encoder and decoder for zero-boxes-free arrays.
//!
//! Works on the array as a one-dimensional symbol sequence. Each elimination
//! splices the cells of one all-zero minimal box out of the sequence and
//! splices a same-length payload in at the front: a leading 1, the position
//! code, the shape code, and maximal-symbol padding. The first cell of the
//! array is initialized to 0, so the decoder unwinds while it reads nonzero.

use crate::array::{rank_decode, rank_encode, NdArray};
use crate::coord::{for_each_coord, mixed_radix_rank, mixed_radix_unrank, CoordSet};
use crate::error::{Error, Result};
use crate::minimal_boxes::{enumerate_minimal, BoxShape, MinimalBoxFamily};
use crate::zero_cubes::ceil_log;

/// Volume parameter of the codec:
/// `ceil(d log_q n) + ceil((d-1)/d log_q log_q n) + C + 1` with
/// `C = ceil(log_q C_d + (d-1)/d log_q(d+1))` and
/// `C_d = sqrt(2)^(d-2) d! (d-1)!`.
pub fn param_v(n: usize, d: usize, q: usize) -> Result<usize> {
    if n < 4 || d == 0 || q < 2 {
        return Err(Error::InvalidParameter(format!(
            "need n >= 4, d >= 1, q >= 2; got n={n} d={d} q={q}"
        )));
    }
    let a = ceil_log(q, (n as u128).pow(d as u32));
    let lq = |x: f64| x.ln() / (q as f64).ln();
    let frac = (d - 1) as f64 / d as f64;
    let loglog = if d == 1 {
        0.0
    } else {
        (frac * lq(lq(n as f64))).ceil()
    };
    if loglog < 0.0 {
        return Err(Error::UnsupportedSize(format!(
            "alphabet {q} too large for side {n}: the volume formula degenerates"
        )));
    }
    let c = (lq(crate::minimal_boxes::box_count_constant(d)) + frac * lq((d + 1) as f64)).ceil();
    let v = a as f64 + loglog + c + 1.0;
    if v < 1.0 || v > (n as f64).powi(d as i32) {
        return Err(Error::UnsupportedSize(format!(
            "volume parameter {v} out of range for n={n} d={d}"
        )));
    }
    Ok(v as usize)
}

#[derive(Debug, Clone)]
pub struct ZeroBoxesCodec {
    d: usize,
    q: usize,
    n: usize,
    volume: usize,
    pos_width: usize,
    shape_width: usize,
    family: MinimalBoxFamily,
    /// indices into the family of the shapes that fit in `[n]^d`
    fitting: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxElimination {
    pub pos: Vec<usize>,
    pub shape: Vec<usize>,
}

impl ZeroBoxesCodec {
    pub fn new(n: usize, d: usize, q: usize) -> Result<Self> {
        let volume = param_v(n, d, q)?;
        let family = enumerate_minimal(d, volume)?;
        let pos_width = ceil_log(q, (n as u128).pow(d as u32));
        let shape_width = ceil_log(q, family.len() as u128);
        if 1 + pos_width + shape_width > volume {
            return Err(Error::UnsupportedSize(format!(
                "payload of {} symbols does not fit in a volume-{volume} box",
                1 + pos_width + shape_width
            )));
        }
        let fitting = family
            .shapes()
            .iter()
            .enumerate()
            .filter(|(_, s)| s.sides().iter().all(|&a| a <= n))
            .map(|(i, _)| i)
            .collect();
        Ok(ZeroBoxesCodec {
            d,
            q,
            n,
            volume,
            pos_width,
            shape_width,
            family,
            fitting,
        })
    }

    pub fn volume(&self) -> usize {
        self.volume
    }

    pub fn family(&self) -> &MinimalBoxFamily {
        &self.family
    }

    pub fn prefix_width(&self) -> usize {
        1 + self.pos_width + self.shape_width
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

    /// Linear indices of the cells of `shape` anchored at `pos`, ascending.
    fn box_indices(&self, pos: &[usize], shape: &BoxShape) -> Vec<usize> {
        let st = self.strides();
        let base: usize = pos.iter().zip(&st).map(|(&c, &s)| c * s).sum();
        let mut out = Vec::with_capacity(shape.volume());
        for_each_coord(shape.sides(), |u| {
            out.push(base + u.iter().zip(&st).map(|(&c, &s)| c * s).sum::<usize>());
        });
        out
    }

    /// First all-zero minimal box: positions in increasing order, shapes in
    /// family order at each position.
    fn find_zero_box(&self, vals: &[u8]) -> Option<(Vec<usize>, usize)> {
        let st = self.strides();
        let mut hit = None;
        let mut found = false;
        for_each_coord(&vec![self.n; self.d], |u| {
            if found {
                return;
            }
            for &si in &self.fitting {
                let shape = &self.family.shapes()[si];
                if u.iter().zip(shape.sides()).any(|(&c, &s)| c + s > self.n) {
                    continue;
                }
                let base: usize = u.iter().zip(&st).map(|(&c, &s)| c * s).sum();
                let mut zero = true;
                for_each_coord(shape.sides(), |w| {
                    if zero {
                        let off: usize = w.iter().zip(&st).map(|(&c, &s)| c * s).sum();
                        if vals[base + off] != 0 {
                            zero = false;
                        }
                    }
                });
                if zero {
                    hit = Some((u.to_vec(), si));
                    found = true;
                    return;
                }
            }
        });
        hit
    }

    pub fn encode(&self, w: &NdArray) -> Result<NdArray> {
        self.encode_impl(w, None)
    }

    pub fn encode_traced(&self, w: &NdArray) -> Result<(NdArray, Vec<BoxElimination>)> {
        let mut steps = Vec::new();
        let x = self.encode_impl(w, Some(&mut steps))?;
        Ok((x, steps))
    }

    fn encode_impl(
        &self,
        w: &NdArray,
        mut trace: Option<&mut Vec<BoxElimination>>,
    ) -> Result<NdArray> {
        let expect = CoordSet::CubeMinusFirst {
            d: self.d,
            n: self.n,
        };
        if *w.domain() != expect || w.q() != self.q {
            return Err(Error::InvalidParameter(
                "encoder input must be the cube minus its first corner, same alphabet".into(),
            ));
        }
        // the missing corner is first in serialization order
        let mut vals = Vec::with_capacity(self.cells());
        vals.push(0);
        vals.extend_from_slice(w.values());

        let max_iters = self.cells() * (self.q - 1) + 1;
        let mut iters = 0;
        let mut weight = vals.iter().filter(|&&s| s != 0).count();
        while let Some((pos, shape_idx)) = self.find_zero_box(&vals) {
            iters += 1;
            if iters > max_iters {
                return Err(Error::Corruption(
                    "elimination exceeded the weight budget".into(),
                ));
            }
            let shape = &self.family.shapes()[shape_idx];
            let removed = self.box_indices(&pos, shape);
            debug_assert!(removed.iter().all(|&i| vals[i] == 0));

            let mut keep = Vec::with_capacity(vals.len() - removed.len());
            let mut r = 0;
            for (i, &s) in vals.iter().enumerate() {
                if r < removed.len() && removed[r] == i {
                    r += 1;
                } else {
                    keep.push(s);
                }
            }

            let rank = mixed_radix_rank(&pos, &vec![self.n; self.d]);
            let mut payload = vec![1u8];
            payload.extend(rank_encode(rank, self.q, self.pos_width)?);
            payload.extend(rank_encode(shape_idx, self.q, self.shape_width)?);
            payload.resize(shape.volume(), (self.q - 1) as u8);
            debug_assert!(payload.iter().any(|&s| s != 0));

            let mut next = payload;
            next.extend(keep);
            debug_assert_eq!(next.len(), self.cells());
            vals = next;
            let new_weight = vals.iter().filter(|&&s| s != 0).count();
            if new_weight <= weight {
                return Err(Error::Corruption(
                    "elimination did not increase the Hamming weight".into(),
                ));
            }
            weight = new_weight;
            if let Some(steps) = trace.as_deref_mut() {
                steps.push(BoxElimination {
                    pos,
                    shape: shape.sides().to_vec(),
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
        let max_iters = self.cells() * (self.q - 1) + 1;
        let mut iters = 0;
        while vals[0] != 0 {
            iters += 1;
            if iters > max_iters {
                return Err(Error::Corruption(
                    "decoder exceeded the elimination budget".into(),
                ));
            }
            if vals[0] != 1 {
                return Err(Error::Corruption(format!(
                    "payload marker must be 1, found {}",
                    vals[0]
                )));
            }
            let pos_digits = &vals[1..1 + self.pos_width];
            let rank = rank_decode(pos_digits, self.q)?;
            if rank >= self.cells() {
                return Err(Error::Corruption(format!("position rank {rank} too big")));
            }
            let pos = mixed_radix_unrank(rank, &vec![self.n; self.d]);
            let shape_digits = &vals[1 + self.pos_width..self.prefix_width()];
            let shape_idx = rank_decode(shape_digits, self.q)?;
            let shape = self
                .family
                .shapes()
                .get(shape_idx)
                .ok_or_else(|| Error::Corruption(format!("shape rank {shape_idx} too big")))?
                .clone();
            if pos.iter().zip(shape.sides()).any(|(&c, &s)| c + s > self.n) {
                return Err(Error::Corruption(format!(
                    "box {:?} at {pos:?} leaves the grid",
                    shape.sides()
                )));
            }

            let zero_at = self.box_indices(&pos, &shape);
            let rest = &vals[shape.volume()..];
            let mut next = Vec::with_capacity(self.cells());
            let mut z = 0;
            let mut r = 0;
            for i in 0..self.cells() {
                if z < zero_at.len() && zero_at[z] == i {
                    next.push(0);
                    z += 1;
                } else {
                    next.push(rest[r]);
                    r += 1;
                }
            }
            vals = next;
        }
        let body = vals[1..].to_vec();
        NdArray::new(
            CoordSet::CubeMinusFirst {
                d: self.d,
                n: self.n,
            },
            self.q,
            body,
        )
    }
}
