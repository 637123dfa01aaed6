//! Grid coordinates, the total order on them, and the coordinate sets that
//! arrays in this crate are defined over.

use crate::error::{Error, Result};
use std::cmp::Ordering;

/// A position in the d-dimensional grid. Coordinate 0 is the most
/// significant under [`coord_cmp`].
pub type Coord = Vec<usize>;

/// Lexicographic comparison of two equal-dimension coordinates: the first
/// differing index decides.
pub fn coord_cmp(u: &[usize], v: &[usize]) -> Result<Ordering> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch(u.len(), v.len()));
    }
    Ok(u.cmp(v))
}

/// A finite set of grid coordinates. Iteration is always in increasing
/// coordinate order, so every set doubles as a serialization order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoordSet {
    /// The full cube of side `n` in dimension `d`.
    Cube { d: usize, n: usize },
    /// The cube minus its first cell (the all-zero corner).
    CubeMinusFirst { d: usize, n: usize },
    /// The cube minus its last cell (the all-(n-1) corner).
    CubeMinusLast { d: usize, n: usize },
    /// An axis-aligned box anchored at the origin with the given sides.
    Box { sides: Vec<usize> },
    /// An explicit set; `coords` must be strictly increasing.
    Explicit { d: usize, coords: Vec<Coord> },
}

impl CoordSet {
    pub fn cube(d: usize, n: usize) -> Self {
        CoordSet::Cube { d, n }
    }

    pub fn explicit(d: usize, mut coords: Vec<Coord>) -> Self {
        coords.sort();
        coords.dedup();
        CoordSet::Explicit { d, coords }
    }

    pub fn dim(&self) -> usize {
        match self {
            CoordSet::Cube { d, .. }
            | CoordSet::CubeMinusFirst { d, .. }
            | CoordSet::CubeMinusLast { d, .. } => *d,
            CoordSet::Box { sides } => sides.len(),
            CoordSet::Explicit { d, .. } => *d,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            CoordSet::Cube { d, n } => n.pow(*d as u32),
            CoordSet::CubeMinusFirst { d, n } | CoordSet::CubeMinusLast { d, n } => {
                n.pow(*d as u32) - 1
            }
            CoordSet::Box { sides } => sides.iter().product(),
            CoordSet::Explicit { coords, .. } => coords.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, v: &[usize]) -> bool {
        if v.len() != self.dim() {
            return false;
        }
        match self {
            CoordSet::Cube { n, .. } => v.iter().all(|&c| c < *n),
            CoordSet::CubeMinusFirst { n, .. } => {
                v.iter().all(|&c| c < *n) && v.iter().any(|&c| c != 0)
            }
            CoordSet::CubeMinusLast { n, .. } => {
                v.iter().all(|&c| c < *n) && v.iter().any(|&c| c != n - 1)
            }
            CoordSet::Box { sides } => v.iter().zip(sides).all(|(&c, &s)| c < s),
            CoordSet::Explicit { coords, .. } => coords.binary_search_by(|c| c[..].cmp(v)).is_ok(),
        }
    }

    /// Rank of `v` in the increasing enumeration of the set.
    pub fn rank(&self, v: &[usize]) -> Result<usize> {
        if !self.contains(v) {
            return Err(Error::OutsideDomain(v.to_vec()));
        }
        Ok(match self {
            CoordSet::Cube { n, .. } => mixed_radix_rank(v, &vec![*n; v.len()]),
            CoordSet::CubeMinusFirst { n, .. } => mixed_radix_rank(v, &vec![*n; v.len()]) - 1,
            CoordSet::CubeMinusLast { n, .. } => mixed_radix_rank(v, &vec![*n; v.len()]),
            CoordSet::Box { sides } => mixed_radix_rank(v, sides),
            CoordSet::Explicit { coords, .. } => {
                coords.binary_search_by(|c| c[..].cmp(v)).expect("contains")
            }
        })
    }

    /// Inverse of [`CoordSet::rank`].
    pub fn unrank(&self, rank: usize) -> Result<Coord> {
        if rank >= self.len() {
            return Err(Error::RankOutOfRange {
                rank,
                size: self.len(),
            });
        }
        Ok(match self {
            CoordSet::Cube { d, n } => mixed_radix_unrank(rank, &vec![*n; *d]),
            CoordSet::CubeMinusFirst { d, n } => mixed_radix_unrank(rank + 1, &vec![*n; *d]),
            CoordSet::CubeMinusLast { d, n } => mixed_radix_unrank(rank, &vec![*n; *d]),
            CoordSet::Box { sides } => mixed_radix_unrank(rank, sides),
            CoordSet::Explicit { coords, .. } => coords[rank].clone(),
        })
    }

    /// Members in increasing coordinate order.
    pub fn iter(&self) -> Box<dyn Iterator<Item = Coord> + '_> {
        match self {
            CoordSet::Explicit { coords, .. } => Box::new(coords.iter().cloned()),
            _ => {
                let len = self.len();
                Box::new((0..len).map(move |i| self.unrank(i).expect("rank in range")))
            }
        }
    }
}

/// Rank of `v` in the box with the given sides, coordinate 0 most significant.
pub fn mixed_radix_rank(v: &[usize], sides: &[usize]) -> usize {
    let mut r = 0;
    for (&c, &s) in v.iter().zip(sides) {
        r = r * s + c;
    }
    r
}

pub fn mixed_radix_unrank(mut rank: usize, sides: &[usize]) -> Coord {
    let mut v = vec![0; sides.len()];
    for i in (0..sides.len()).rev() {
        v[i] = rank % sides[i];
        rank /= sides[i];
    }
    v
}

/// Iterate all coordinates of a box `[s_0] x ... x [s_{d-1}]` in increasing
/// order, visiting `f` for each.
pub fn for_each_coord(sides: &[usize], mut f: impl FnMut(&[usize])) {
    if sides.iter().any(|&s| s == 0) {
        return;
    }
    let mut v = vec![0usize; sides.len()];
    loop {
        f(&v);
        // odometer, last coordinate least significant
        let mut i = sides.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            v[i] += 1;
            if v[i] < sides[i] {
                break;
            }
            v[i] = 0;
        }
    }
}
